import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncps_distance.ball import constraint_relations, feasible_diagonal
from ncps_distance.closed_form import (
    check_additivity,
    check_pythagoras,
    distance,
    optimal_element_axis,
    optimal_element_general,
    zeta_partial,
    zeta_table,
)
from ncps_distance.errors import DegeneratePair, InvalidParameter, LabelOutOfRange, SingularRegime
from ncps_distance.hilbert import FockLabel, make_params
from ncps_distance.triple import diagonal_commutator_norm

small = st.integers(0, 8)
thetas = st.sampled_from([0.0, 0.3, 0.6, 0.9])


# -- zeta partial sums ------------------------------------------------------------

def test_zeta_examples():
    assert zeta_partial(0, 1) == 1.0
    assert zeta_partial(1, 3) == pytest.approx(1.2844571, abs=5e-8)
    assert zeta_partial(3, 1) == pytest.approx(-1.2844571, abs=5e-8)
    assert zeta_partial(5, 5) == 0.0
    with pytest.raises(InvalidParameter):
        zeta_partial(-1, 2)


def hurwitz_difference(p, q):
    """Independent oracle: zeta(1/2, p+1) - zeta(1/2, q+1) at 30 digits."""
    with mpmath.workdps(30):
        return float(mpmath.zeta(0.5, p + 1) - mpmath.zeta(0.5, q + 1))


@given(p=st.integers(0, 1000), q=st.integers(0, 1000))
def test_zeta_matches_hurwitz_difference(p, q):
    assert zeta_partial(p, q) == pytest.approx(hurwitz_difference(p, q), abs=1e-12)


@given(i=small, j=small, k=small)
def test_zeta_antisymmetry_and_chain(i, j, k):
    assert zeta_partial(i, j) == -zeta_partial(j, i)
    assert zeta_partial(i, j) - zeta_partial(i, k) == pytest.approx(zeta_partial(k, j), abs=1e-14)


def test_zeta_table_matches_partial_sums():
    z = zeta_table(50)
    assert max(abs(z[p] - zeta_partial(0, p)) for p in range(50)) < 1e-13


# -- distances -----------------------------------------------------------------

def test_distance_examples():
    p0, p6 = make_params(1.0, 0.0), make_params(1.0, 0.6)
    assert distance(p0, (0, 0), (1, 0)).closed_form == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert distance(p6, (0, 0), (1, 1)).closed_form == pytest.approx(0.8, abs=1e-15)
    assert distance(p6, (0, 0), (2, 0)).closed_form == pytest.approx(0.9656854, abs=5e-8)
    assert distance(p6, (3, 2), (3, 2)).closed_form == 0.0


def test_distance_report_fields():
    rep = distance(make_params(1.0, 0.6), (3, 1), (1, 2))
    assert rep.source == FockLabel(3, 1) and rep.target == FockLabel(1, 2)
    assert rep.zeta_x == pytest.approx(zeta_partial(1, 3))
    assert rep.zeta_y == pytest.approx(zeta_partial(1, 2))
    assert rep.closed_form == pytest.approx(rep.prefactor * math.hypot(rep.zeta_x, rep.zeta_y))


def test_singular_regime_propagates():
    with pytest.raises(SingularRegime):
        distance(make_params(1.0, 1.0), (0, 0), (1, 0))


@given(a=st.tuples(small, small), b=st.tuples(small, small), theta=thetas)
def test_symmetry(a, b, theta):
    p = make_params(1.0, theta)
    assert distance(p, a, b).closed_form == distance(p, b, a).closed_form


@given(m=small, k=small, n1=small, n2=small, theta=thetas)
def test_independent_of_spectator_mode(m, k, n1, n2, theta):
    p = make_params(1.0, theta)
    assert distance(p, (m + k, n1), (m, n1)).closed_form == distance(p, (m + k, n2), (m, n2)).closed_form


@given(a=st.tuples(small, small), b=st.tuples(small, small),
       theta=st.floats(0.0, 0.999999), hbar=st.floats(0.2, 5.0))
def test_shortening_ratio(a, b, theta, hbar):
    d0 = distance(make_params(hbar, 0.0), a, b).closed_form
    p = make_params(hbar, theta * hbar)
    assert distance(p, a, b).closed_form == pytest.approx(d0 * math.sqrt(1 - theta ** 2), rel=1e-9, abs=1e-15)


def test_strictly_decreasing_in_theta():
    vals = [distance(make_params(1.0, th), (0, 1), (2, 3)).closed_form for th in np.linspace(0, 0.99, 30)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_triangle_inequality():
    rng = np.random.default_rng(5)
    p = make_params(1.0, 0.6)
    for _ in range(1000):
        a, b, c = (tuple(rng.integers(0, 9, size=2)) for _ in range(3))
        dab = distance(p, a, b).closed_form
        assert dab <= distance(p, a, c).closed_form + distance(p, c, b).closed_form + 1e-12


# -- identities ----------------------------------------------------------------------

@given(m=small, n=small, k=small, l=small, theta=thetas)
def test_additivity(m, n, k, l, theta):
    assert check_additivity(make_params(1.0, theta), m, n, k, l) < 1e-12


def test_additivity_trivial_cases():
    p = make_params(1.0, 0.3)
    assert check_additivity(p, 2, 1, 0, 3) == 0.0
    assert check_additivity(p, 2, 1, 3, 0) == 0.0


@given(m=st.integers(0, 6), n=st.integers(0, 6), k=st.integers(0, 6), l=st.integers(0, 6), theta=thetas)
def test_pythagoras(m, n, k, l, theta):
    assert check_pythagoras(make_params(1.0, theta), m, n, k, l) < 1e-12


def test_pythagoras_examples():
    assert check_pythagoras(make_params(1.0, 0.0), 0, 0, 1, 1) < 1e-12
    assert check_pythagoras(make_params(1.0, 0.6), 3, 2, 0, 4) == 0.0


# -- optimal elements ---------------------------------------------------------------

def test_axis_element_steps():
    el = optimal_element_axis(make_params(1.0, 0.0), 0, 1, 0, 24)
    assert np.allclose(el.coeffs[1, :] - el.coeffs[0, :], 1 / math.sqrt(2), atol=1e-15)
    el = optimal_element_axis(make_params(1.0, 0.6), 0, 2, 0, 24)
    steps = np.diff(el.coeffs[:4, 0])
    assert steps[0] == pytest.approx(0.5656854, abs=5e-8)
    assert steps[1] == pytest.approx(0.5656854 / math.sqrt(2), abs=5e-8)
    assert steps[2] == 0.0


@given(m=st.integers(0, 7), k=st.integers(0, 8), n=st.integers(0, 15), theta=thetas)
def test_axis_element_reproduces_distance(m, k, n, theta):
    p = make_params(1.0, theta)
    el = optimal_element_axis(p, m, k, n, 24)
    d = distance(p, (m, n), (m + k, n)).closed_form
    assert el.value((m + k, n)) - el.value((m, n)) == pytest.approx(d, abs=1e-12)
    assert el.value((m, n)) - el.value((m + k, n)) == pytest.approx(-d, abs=1e-12)
    el2 = optimal_element_axis(p, m, k, n, 24, mode=2)
    assert np.array_equal(el2.coeffs, el.coeffs.T)


def test_axis_element_label_window():
    p = make_params(1.0, 0.0)
    with pytest.raises(LabelOutOfRange):
        optimal_element_axis(p, 10, 6, 0, 24)


def test_general_element_unit_diagonal_step():
    el = optimal_element_general(make_params(1.0, 0.0), (0, 0), (1, 1), 24)
    assert el.coeffs[1, 0] - el.coeffs[0, 0] == pytest.approx(0.5, abs=1e-15)
    assert el.coeffs[0, 1] - el.coeffs[0, 0] == pytest.approx(0.5, abs=1e-15)


@given(m=st.integers(0, 7), k=st.integers(1, 8), n=st.integers(0, 15), theta=thetas)
def test_general_reduces_to_axis(m, k, n, theta):
    p = make_params(1.0, theta)
    g = optimal_element_general(p, (m, n), (m + k, n), 24)
    a = optimal_element_axis(p, m, k, n, 24)
    np.testing.assert_allclose(g.coeffs, a.coeffs, atol=1e-13)


@given(a=st.tuples(st.integers(0, 7), st.integers(0, 7)),
       b=st.tuples(st.integers(0, 7), st.integers(0, 7)), theta=thetas)
def test_general_element_attains_distance(a, b, theta):
    if a == b:
        return
    p = make_params(1.0, theta)
    el = optimal_element_general(p, a, b, 24)
    assert el.value(b) - el.value(a) == pytest.approx(distance(p, a, b).closed_form, abs=1e-12)


def test_general_element_cauchy_schwarz_equality():
    p = make_params(1.0, 0.6)
    m, n, k, l = 1, 0, 2, 3
    el = optimal_element_general(p, (m, n), (m + k, n + l), 24)
    c = el.coeffs
    zx, zy = zeta_partial(m, m + k), zeta_partial(n, n + l)
    E = c[m + 1, n] - c[m, n]
    F = c[m, n + 1] - c[m, n]
    assert math.sqrt(m + 1) * E * zy == pytest.approx(math.sqrt(n + 1) * F * zx, abs=1e-12)


def test_general_element_degenerate_pair():
    with pytest.raises(DegeneratePair):
        optimal_element_general(make_params(1.0, 0.0), (2, 2), (2, 2), 24)


@pytest.mark.parametrize("theta", [0.0, 0.3, 0.6, 0.9])
@pytest.mark.parametrize("m,k", [(0, 1), (0, 3), (2, 2), (5, 7)])
def test_axis_elements_are_feasible_and_saturate(theta, m, k):
    p = make_params(1.0, theta)
    el = optimal_element_axis(p, m, k, 0, 24)
    assert feasible_diagonal(el, p)
    assert diagonal_commutator_norm(el.coeffs, p) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("theta", [0.0, 0.3, 0.6, 0.9])
@pytest.mark.parametrize("b", [(1, 1), (2, 1), (1, 3), (3, 3)])
def test_general_elements_are_feasible_and_saturate(theta, b):
    p = make_params(1.0, theta)
    el = optimal_element_general(p, (0, 0), b, 24)
    assert feasible_diagonal(el, p)
    assert constraint_relations(el, p).max_residual == pytest.approx(0.0, abs=1e-9)
    assert diagonal_commutator_norm(el.coeffs, p) == pytest.approx(1.0, abs=1e-6)
