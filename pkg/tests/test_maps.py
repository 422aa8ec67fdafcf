import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lozimax.maps import (DomainError, Formulation, GeneralizedLoziParams, LoziParams,
                          MaxEqParams, Point, Status, format_number, formulation_transport,
                          gen_lozi_step, iterate, lozi_step, max_eq_step, orbit_from_csv,
                          parse_number)

finite = st.floats(-1e3, 1e3, allow_nan=False)
rat = st.fractions(min_value=-50, max_value=50, max_denominator=64)
nonzero_rat = rat.filter(lambda v: v != 0)


def test_sys3_step_by_hand():
    p = LoziParams(F(1, 2), F(1, 2))
    assert lozi_step(p, Formulation.SYS3, (F(0), F(1))) == (1, F(1, 2))


def test_sys1_and_sys2_by_hand():
    p = LoziParams(2, F(1, 3))
    assert lozi_step(p, Formulation.SYS1, (F(-1), F(5))) == (4, F(-1, 3))
    assert lozi_step(p, Formulation.SYS2, (F(-1), F(6))) == (1, -1)


def test_lozi_matches_generalized_form():
    lp = LoziParams(F(7, 5), F(3, 10))
    gl = lp.as_generalized()
    for s in [(F(1), F(-2)), (F(0), F(0)), (F(3, 7), F(5, 9))]:
        assert lozi_step(lp, Formulation.SYS3, s) == gen_lozi_step(gl, s)


@given(a=rat, b=nonzero_rat, x=rat, y=rat,
       src=st.sampled_from(list(Formulation)), dst=st.sampled_from(list(Formulation)))
def test_transport_conjugates_formulations(a, b, x, y, src, dst):
    p = LoziParams(a, b)
    s = Point(x, y)
    lhs = formulation_transport(lozi_step(p, src, s), src, dst, b)
    rhs = lozi_step(p, dst, formulation_transport(s, src, dst, b))
    assert lhs == rhs


@given(a=rat, b=nonzero_rat, x=rat, y=rat)
def test_transport_round_trip(a, b, x, y):
    for src in Formulation:
        for dst in Formulation:
            there = formulation_transport((x, y), src, dst, b)
            assert formulation_transport(there, dst, src, b) == (x, y)


def test_max_eq_step_and_domain():
    mp = MaxEqParams(2, 1, 1, 2.3, 1)
    assert max_eq_step(mp, (1.0, 1.0)) == (1.0, 2.3)
    with pytest.raises(DomainError):
        max_eq_step(mp, (0.0, 1.0))


def test_param_validation():
    with pytest.raises(ValueError):
        GeneralizedLoziParams(0, 1, 1, 1)
    with pytest.raises(ValueError):
        MaxEqParams(1, 1, 1, 0)
    with pytest.raises(ValueError):
        MaxEqParams(1, 1, 1, 1, c=-1)
    with pytest.raises(ValueError):
        LoziParams(math.inf, 1)


def test_exact_orbit_a_half():
    orbit = iterate(LoziParams(F(1, 2), F(1, 2)), (0, 0), 6, exact=True)
    assert [str(p.y) for p in orbit.points] == ["0", "1", "1/2", "5/4", "5/8", "21/16", "21/32"]
    assert orbit.termination.status is Status.COMPLETED
    assert orbit.exact


def test_exact_mode_rejects_floats():
    with pytest.raises(TypeError):
        iterate(LoziParams(F(1, 2), F(1, 2)), (0.5, 0), 3, exact=True)
    # float parameters leak floats into the orbit
    with pytest.raises(TypeError):
        iterate(LoziParams(0.5, 0.5), (0, 0), 3, exact=True)


def test_guard_keeps_tripping_state():
    orbit = iterate(LoziParams(5, 5), (0, 0), 1000, guard=1e6)
    assert orbit.termination.status is Status.DIVERGENCE_GUARD
    last = orbit.points[-1]
    assert max(abs(last.x), abs(last.y)) > 1e6
    assert all(max(abs(p.x), abs(p.y)) <= 1e6 for p in orbit.points[:-1])
    assert orbit.termination.step == len(orbit.points) - 1


def test_non_finite_state_is_not_stored():
    def boom(s):
        return Point(s.y, math.inf)
    orbit = iterate(boom, (1, 1), 5)
    assert orbit.termination.status is Status.DIVERGENCE_GUARD
    assert len(orbit.points) == 1


def test_domain_error_recorded():
    orbit = iterate(MaxEqParams(1, 1, 1, 1, 1), (1.0, -1.0), 10)
    assert orbit.termination.status is Status.DOMAIN_ERROR
    assert orbit.termination.step == 1
    assert len(orbit.points) == 1


def test_zero_steps():
    orbit = iterate(LoziParams(1, 1), (2, 3), 0)
    assert orbit.points == ((2.0, 3.0),)


def test_csv_format():
    orbit = iterate(LoziParams(F(1, 2), F(1, 2)), (0, 0), 2, exact=True)
    assert orbit.to_csv() == "n,x,y\n0,0/1,0/1\n1,0/1,1/1\n2,1/1,1/2\n"
    text = iterate(LoziParams(0.1, 0.3), (0.1, 0.2), 1).to_csv()
    assert text.splitlines()[1] == "0,0.10000000000000001,0.20000000000000001"


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20))
def test_csv_round_trip_floats(pts):
    from lozimax.maps import points_to_csv
    assert orbit_from_csv(points_to_csv(pts)) == [Point(*p) for p in pts]


@given(rat)
def test_number_round_trip_rational(v):
    assert parse_number(format_number(v)) == v


def test_csv_header_checked():
    with pytest.raises(ValueError):
        orbit_from_csv("i,x,y\n0,1,2\n")
