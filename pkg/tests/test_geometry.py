import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distenergy import geometry
from distenergy.errors import CapacityError, DomainError

point_lists = st.lists(
    st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=2, max_size=25, unique=True
)


def test_two_points():
    H = geometry.distance_histogram(geometry.PointSet.from_points([(0, 0), (3, 4)]))
    assert H.as_dict() == {25: 2}
    rep = geometry.energy_report(H, 2)
    assert (rep.N, rep.energy, rep.distinct, rep.holder_bound) == (2, 4, 1, pytest.approx(1.0))


def test_unit_square_by_hand():
    H = geometry.distance_histogram(geometry.make_square_grid(2, 2))
    # 4 sides and 2 diagonals, ordered pairs
    assert H.as_dict() == {1: 8, 2: 4}
    assert geometry.energy(H, 2) == 64 + 16
    assert geometry.energy(H, 0) == 2


@pytest.mark.parametrize("m,side", [(1, 7), (2, 9), (3, 5), (4, 3)])
def test_grid_fast_path_matches_pure_python(m, side):
    pts = list(itertools.product(range(side), repeat=m))
    assert geometry.grid_difference_histogram(m, side).as_dict() == geometry.brute_pairs(pts)


@given(point_lists)
@settings(max_examples=60, deadline=None)
def test_histogram_sums_and_oracle(pts):
    H = geometry.distance_histogram(geometry.PointSet.from_points(pts))
    n = len(pts)
    assert H.total() == n * (n - 1)
    assert H.as_dict() == geometry.brute_pairs(pts)
    assert geometry.energy(H, 1) == n * (n - 1)


@given(point_lists, st.integers(2, 5))
@settings(max_examples=60, deadline=None)
def test_holder_bound_holds(pts, k):
    H = geometry.distance_histogram(geometry.PointSet.from_points(pts))
    assert H.distinct >= geometry.holder_lower_bound(H, k) * (1 - 1e-12)


@given(point_lists, st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_energy_log_convex(pts, k):
    H = geometry.distance_histogram(geometry.PointSet.from_points(pts))
    assert geometry.energy(H, k - 1) * geometry.energy(H, k + 1) >= geometry.energy(H, k) ** 2


def test_energy_exact_big_integers():
    H = geometry.grid_difference_histogram(2, 64)
    direct = sum(int(c) ** 6 for c in H.counts)
    assert geometry.energy(H, 6) == direct
    assert direct > 2**63


def test_validation():
    with pytest.raises(DomainError):
        geometry.PointSet.from_points([(0, 0), (0, 0)])
    with pytest.raises(CapacityError):
        geometry.make_square_grid(2, 10**5)
    with pytest.raises(DomainError):
        geometry.energy(geometry.distance_histogram(geometry.make_square_grid(1, 3)), -1)


def test_random_point_set_is_seeded():
    a = geometry.random_point_set(50, 3, 0, 9, seed=7)
    b = geometry.random_point_set(50, 3, 0, 9, seed=7)
    assert np.array_equal(a.coords, b.coords) and a.size == 50


def test_read_point_file(tmp_path):
    p = tmp_path / "pts.txt"
    p.write_text("# header\n0 0 0\n\n1 2 3\n")
    P = geometry.read_point_file(p)
    assert P.points() == [(0, 0, 0), (1, 2, 3)]
