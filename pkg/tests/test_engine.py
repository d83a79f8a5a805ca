import pytest

from mode_oracle import constant_theta_dims
from twistcoh.engine import (
    BasisSpec,
    TwistedComplex,
    assemble,
    cohomology_report,
    induced_map_rank,
    ring_cohomology_dim,
    twisted_cohomology_report,
)
from twistcoh.errors import AssemblyError, ChainMapViolation, ComplexPropertyViolation
from twistcoh.forms import DifferentialForm
from twistcoh.operators import TwistData
from twistcoh.ring import Scalar, TrigPoly


def circle(f, c):
    return TwistData(f, DifferentialForm.dt(1, 1).scale(Scalar.coerce(c)))


ONE = TrigPoly.constant(1)


class TestBasis:
    def test_sizes(self):
        assert BasisSpec(2, 1, 2).size == 2 * 25
        assert BasisSpec(3, 4, 2).size == 0
        assert BasisSpec(2, 0, -1).size == 0
        assert BasisSpec(2, 1, 1, (1, 0)).size == 9

    def test_bad_bidegree(self):
        with pytest.raises(ValueError):
            BasisSpec(3, 1, 1, (1, 0))

    def test_form_round_trip(self):
        basis = BasisSpec(2, 1, 1)
        for pos in range(basis.size):
            vec = basis.coordinates(basis.form(pos))
            assert vec == {pos: Scalar(1)}


class TestCircle:
    @pytest.mark.parametrize("c, expected", [
        (0, [1, 1]),
        (1, [0, 0]),
        (Scalar(1, 2), [0, 0]),
        (Scalar(0, 1), [1, 1]),
        (Scalar(0, -3), [1, 1]),
    ])
    def test_constant_theta(self, c, expected):
        rep = cohomology_report(TwistedComplex("d_theta", circle(ONE, c)), [0, 1], range(3, 7))
        assert [rep.stabilized_dim(r) for r in (0, 1)] == expected

    def test_matches_mode_oracle_on_t3(self):
        tw = TwistData.make(TrigPoly.constant(3))
        rep = cohomology_report(TwistedComplex("d_f_theta", tw), range(4), [1, 2, 3])
        assert [rep.stabilized_dim(r) for r in range(4)] == constant_theta_dims(3, [0, 0, 0])

    def test_report_json_and_flags(self):
        rep = cohomology_report(TwistedComplex("d", circle(ONE, 0)), [0, 1], [1, 2, 3])
        data = rep.to_json()
        assert data["degrees"]["1"]["stabilized_dim"] == 1
        assert data["degrees"]["0"]["table"]["2"]["space_dim"] == 5
        assert rep.dumps() == rep.dumps()

    def test_unstable_gives_none(self):
        tw = circle(TrigPoly.cos((1,)), 0)
        rep = cohomology_report(TwistedComplex("d_f", tw), [1], [1, 2, 3], stability=2)
        assert rep.stabilized(1) == (rep.dims(1)[-1] == rep.dims(1)[-2])

    def test_bad_schedule(self):
        cx = TwistedComplex("d", circle(ONE, 0))
        with pytest.raises(ValueError):
            cohomology_report(cx, [0], [3, 2, 4])
        with pytest.raises(ValueError):
            cohomology_report(cx, [0], [1, 2], stability=0)


def test_assembly_rejects_a_too_small_target():
    tw = circle(TrigPoly.cos((1,)), 0)
    with pytest.raises(AssemblyError):
        assemble("d_f", tw, BasisSpec(1, 0, 2), target_cutoff=2)
    assert assemble("d_f", tw, BasisSpec(1, 0, 2)).entries.nrows == 7


def test_non_complex_is_detected():
    tw = TwistData(TrigPoly.cos((1, 0)) + 2, DifferentialForm.dt(2, 2))
    cx = TwistedComplex("d_theta_f", tw)
    with pytest.raises(ComplexPropertyViolation):
        cohomology_report(cx, [1, 2], [1, 2, 3])
    rep = twisted_cohomology_report(tw, [0, 1, 2], [1, 2, 3])
    for e in rep.entries.values():
        assert e.intersection_dim <= e.kernel_dim


def test_induced_identity_has_full_rank():
    cx = TwistedComplex("d", TwistData.make(TrigPoly.constant(2, 1)))
    assert induced_map_rank(lambda x: x, cx, 1, 2, cx, 1, 2) == 2
    assert induced_map_rank(lambda x: x, cx, 2, 2, cx, 2, 2) == 1


def test_wrong_chain_map_is_detected():
    a = TwistedComplex("d", TwistData.make(TrigPoly.constant(1, 1)))
    b = TwistedComplex("d_theta", circle(ONE, 1))
    with pytest.raises(ChainMapViolation):
        induced_map_rank(lambda x: x, a, 0, 2, b, 0, 2)


def test_parallel_matches_serial():
    tw = circle(TrigPoly.cos((1,)), 2)
    cx = TwistedComplex("d_f_theta", tw)
    serial = cohomology_report(cx, [0, 1], range(2, 6))
    parallel = cohomology_report(cx, [0, 1], range(2, 6), jobs=2)
    assert serial.dumps() == parallel.dumps()


def test_ring_mode_for_unit_function():
    tw = circle(TrigPoly.monomial((1,), 2), 0)
    cx = TwistedComplex("d_f_theta", tw)
    dims = [ring_cohomology_dim(cx, r, 4, slack=3).dim for r in (0, 1)]
    assert dims == [1, 1]
