from fractions import Fraction

import numpy as np
import pytest

from trisample import (brute_force_orientations, build_transition_matrix, conductance_of_cut,
                       diameter, distinct_triangulations, enumerate_reachable, gadget_report,
                       tv_curve_and_mixing)
from trisample.errors import CapExceeded, EmptySide, HorizonTooShort, IncompleteSpace, TooLarge
from trisample.oracle import (StateSpace, TransitionMatrix, dyck_space, empirical_tv,
                              enumerate_flip_space, interior_points_inward, separates, state_graph,
                              tv_curve, write_csv)


def test_k4_space(k4):
    space = enumerate_reachable(k4)
    assert len(space) == 1
    assert brute_force_orientations(k4).keys == space.keys
    P = build_transition_matrix("tr", space)
    assert P.rows == [{0: Fraction(1)}]
    assert diameter(space) == 0


def test_reachable_equals_brute_force(instances, hexagon, gadget2):
    for tri in instances + [hexagon, gadget2]:
        assert enumerate_reachable(tri).as_set() == brute_force_orientations(tri).as_set()


def test_cap_exceeded(hexagon):
    with pytest.raises(CapExceeded) as err:
        enumerate_reachable(hexagon, cap=5)
    assert err.value.partial_count == 6


def test_brute_force_too_large(nested):
    with pytest.raises(TooLarge):
        brute_force_orientations(nested)


def test_distinct_triangulation_counts():
    assert [len(distinct_triangulations(n)) for n in range(1, 6)] == [1, 3, 13, 68, 399]


def test_frozen_space_sizes(hexagon, gadget2, gadget3, nested):
    assert len(enumerate_reachable(hexagon)) == 18
    assert len(enumerate_reachable(gadget2)) == 9
    assert len(enumerate_reachable(gadget3)) == 51
    assert len(enumerate_reachable(nested)) == 18 * 18
    assert len(enumerate_reachable(gadget2)) <= 3 ** (2 * gadget2.n_internal + 1)


def test_cr_rows_sum_to_one(gadget3):
    P = build_transition_matrix("cr", enumerate_reachable(gadget3))
    assert P.exact and all(s == 1 for s in P.row_sums())


@pytest.mark.parametrize("chain", ["tr", "cr"])
def test_fixed_matrices(chain, hexagon, gadget3, nested):
    for tri in (hexagon, gadget3, nested):
        P = build_transition_matrix(chain, enumerate_reachable(tri))
        assert P.is_stochastic() and P.is_uniform_stationary()
        assert P.stationarity_error() == 0
        assert P.is_symmetric()


def test_float_mode_matches_exact(gadget3):
    space = enumerate_reachable(gadget3)
    exact = build_transition_matrix("cr", space)
    approx = build_transition_matrix("cr", space, exact=False)
    assert not approx.exact and approx.is_uniform_stationary() and approx.is_stochastic()
    assert np.allclose(exact.to_dense(), approx.to_dense(), atol=1e-15)


def test_incomplete_space(hexagon):
    space = enumerate_reachable(hexagon)
    part = StateSpace(space.keys[:3], "fixed", tri=hexagon)
    with pytest.raises(IncompleteSpace):
        build_transition_matrix("tr", part)


def test_chain_space_mismatch(hexagon):
    with pytest.raises(ValueError):
        build_transition_matrix("dk", enumerate_reachable(hexagon))
    with pytest.raises(ValueError):
        build_transition_matrix("tr", dyck_space(2))


def test_tv_starts_at_point_mass(hexagon):
    space = enumerate_reachable(hexagon)
    P = build_transition_matrix("tr", space)
    for start in (0, 7, "worst"):
        tv = tv_curve(P, start, 50)
        assert tv[0] == pytest.approx(1 - 1 / len(space), abs=1e-15)


def test_tv_nonincreasing_for_all_test_matrices(hexagon, gadget2, nested):
    mats = [build_transition_matrix(c, enumerate_reachable(t))
            for c in ("tr", "cr") for t in (hexagon, gadget2, nested)]
    mats += [build_transition_matrix(c, s) for n in (2, 3, 4)
             for c, s in (("dk", dyck_space(n)), ("ef", enumerate_flip_space(n)))]
    for P in mats:
        for start in ("worst", 0):
            tv = tv_curve(P, start, 300)
            assert np.all(np.diff(tv) <= 1e-12)


def test_dk_n2_tv_vanishes():
    P = build_transition_matrix("dk", dyck_space(2))
    tv, tau = tv_curve_and_mixing(P, start=0, tmax=400, eps=1e-9)
    assert tv[-1] < 1e-9 and tau < 400


def test_horizon_too_short(gadget3):
    P = build_transition_matrix("tr", enumerate_reachable(gadget3))
    with pytest.raises(HorizonTooShort):
        tv_curve_and_mixing(P, start="worst", tmax=10, eps=0.25)


def test_conductance_zero_and_empty():
    space = StateSpace([0, 1], "fixed")
    P = TransitionMatrix([{0: Fraction(1)}, {1: Fraction(1)}], space, "tr", True)
    assert conductance_of_cut(P, [1]) == 0
    with pytest.raises(EmptySide):
        conductance_of_cut(P, [])
    with pytest.raises(EmptySide):
        conductance_of_cut(P, lambda k: True)


def test_conductance_uses_lighter_side(hexagon):
    space = enumerate_reachable(hexagon)
    P = build_transition_matrix("tr", space)
    small = set(space.keys[:3])
    assert conductance_of_cut(P, small) == conductance_of_cut(P, set(space.keys) - small)


def test_gadget_three_frozen():
    rep = gadget_report(3)
    assert rep["n_internal"] == 11
    assert (rep["states"], rep["red"], rep["green"], rep["blue"]) == (51, 6, 1, 44)
    assert rep["conductance"] == Fraction(1, 322)
    assert rep["green_cut_vertex"]
    assert rep["tau"] >= rep["tau_lower_bound"]


def test_gadget_two_frozen():
    rep = gadget_report(2)
    assert (rep["states"], rep["red"], rep["green"], rep["blue"]) == (9, 2, 1, 6)
    assert rep["conductance"] == Fraction(1, 90)
    assert rep["green_cut_vertex"]


def test_separates():
    import scipy.sparse as sp
    path = sp.csr_matrix(np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    assert separates(path, 1, [0], [2])
    assert not separates(path, 0, [1], [2])


def test_frozen_diameters():
    assert [diameter(dyck_space(n), "dk") for n in (1, 2, 3, 4)] == [0, 1, 3, 6]
    assert [diameter(enumerate_flip_space(n), "ef") for n in (1, 2, 3, 4)] == [0, 1, 3, 5]


def test_diameter_and_size_bounds(instances, hexagon, gadget2, gadget3, nested):
    for tri in instances + [hexagon, gadget2, gadget3, nested]:
        n = tri.n_internal
        space = enumerate_reachable(tri)
        assert 2 * diameter(space) <= (2 * n + 1) ** 2
        assert len(space) <= 3 ** (2 * n + 1)


def test_state_graph_symmetric(hexagon):
    g = state_graph(enumerate_reachable(hexagon))
    assert (g != g.T).nnz == 0


def test_interior_property(nested):
    assert interior_points_inward(enumerate_reachable(nested)) == 1


def test_empirical_tv():
    space = dyck_space(3)
    rng = np.random.default_rng(0)
    samples = [space.keys[i] for i in rng.integers(len(space), size=20000)]
    assert empirical_tv(samples, space) < 0.05
    assert empirical_tv([space.keys[0]] * 10, space) == pytest.approx(1 - 1 / 14)


def test_write_csv():
    assert write_csv([[0, 1.0], [1, 0.5]], ["t", "tv"]) == "t,tv\n0,1.0\n1,0.5\n"
