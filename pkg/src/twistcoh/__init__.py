"""Exact computation of twisted de Rham-type cohomologies on flat tori."""

__version__ = "0.1.0"

from .errors import TwistError
from .forms import AffineTorusMap, BidegreeForm, DifferentialForm, ext_d, pullback, wedge
from .operators import TwistData, d_f, d_f_theta, d_theta, d_theta_f
from .ring import Scalar, TrigPoly

__all__ = [
    "AffineTorusMap", "BidegreeForm", "DifferentialForm", "Scalar", "TrigPoly",
    "TwistData", "TwistError", "d_f", "d_f_theta", "d_theta", "d_theta_f",
    "ext_d", "pullback", "wedge", "__version__",
]
