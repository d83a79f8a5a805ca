"""Hand Fourier-mode oracle for d_theta with constant theta = sum c_j dt_j.

On the mode e^{i<k,t>} the operator is the Koszul differential of the vector
(i k_j - c_j), which is exact unless that vector vanishes.  Hence
dim H^r = binom(n, r) * #{k in Z^n : i k = c}.
"""

from math import comb


def constant_theta_dims(dim, coeffs):
    """``coeffs`` are the (complex) constant coefficients of theta."""
    matches = 1
    for c in coeffs:
        c = complex(c)
        k = c.imag
        if c.real != 0 or k != int(k):
            matches = 0
    return [comb(dim, r) * matches for r in range(dim + 1)]
