from hypothesis import given, settings
from hypothesis import strategies as st

from dense_oracle import dense_rank, oracle_apply, oracle_kernel_dim, oracle_matrix_rank
from strategies import scalars
from twistcoh.linalg import (
    SparseMatrix,
    format_scalar,
    kernel_basis,
    parse_scalar,
    rank_of_vectors,
)
from twistcoh.ring import Scalar


@st.composite
def sparse_matrices(draw, max_dim=7):
    nrows = draw(st.integers(1, max_dim))
    ncols = draw(st.integers(1, max_dim))
    cols = []
    for _ in range(ncols):
        entries = draw(st.dictionaries(st.integers(0, nrows - 1), scalars, max_size=3))
        cols.append({i: v for i, v in entries.items() if v})
    # duplicate a column now and then to force dependencies
    if ncols > 1 and draw(st.booleans()):
        k = draw(st.integers(0, ncols - 2))
        c = draw(scalars)
        cols[-1] = {i: v * c for i, v in cols[k].items() if v * c}
    return SparseMatrix(nrows, ncols, cols)


def test_small_ranks():
    m = SparseMatrix.from_dense([[1, 2], [2, 4]])
    assert m.rank() == 1
    assert SparseMatrix.identity(4).rank() == 4
    assert SparseMatrix(3, 2, [{}, {}]).rank() == 0
    assert len(kernel_basis(m)) == 1


def test_complex_dependency():
    i = Scalar(0, 1)
    m = SparseMatrix.from_dense([[1, i], [i, -1]])
    assert m.rank() == 1


def test_product_and_transpose():
    a = SparseMatrix.from_dense([[1, 2, 0], [0, 1, 1]])
    b = SparseMatrix.from_dense([[1], [1], [1]])
    assert (a @ b).to_dense() == [[Scalar(3)], [Scalar(2)]]
    assert a.transpose().transpose() == a
    assert a.hstack(a).ncols == 6 and a.select_columns([2]).nnz() == 1


def test_triplets_round_trip():
    m = SparseMatrix.from_dense([[Scalar(1, -2), 0], [0, Scalar(0, 3)]])
    assert SparseMatrix.from_triplets(m.to_triplets()) == m
    assert format_scalar(Scalar(1, -2)) == "1/1-2/1i"
    assert parse_scalar(format_scalar(Scalar(0, 3))) == Scalar(0, 3)


@given(sparse_matrices())
@settings(max_examples=150, deadline=None)
def test_rank_matches_dense_oracle(m):
    assert m.rank() == oracle_matrix_rank(m)
    assert m.rank() == dense_rank(m.to_dense())


@given(sparse_matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_basis_is_a_basis(m):
    basis = m.kernel_basis()
    assert len(basis) == oracle_kernel_dim(m)
    for v in basis:
        assert all(not x for x in oracle_apply(m, v))
    assert rank_of_vectors(basis) == len(basis)


@given(sparse_matrices())
@settings(max_examples=60, deadline=None)
def test_rank_of_transpose(m):
    assert m.transpose().rank() == m.rank()


def test_rank_of_vectors_ignores_order():
    vecs = [{0: Scalar(1)}, {0: Scalar(2), 1: Scalar(1)}, {1: Scalar(3)}]
    assert rank_of_vectors(vecs) == rank_of_vectors(vecs[::-1]) == 2
    assert rank_of_vectors([]) == 0
