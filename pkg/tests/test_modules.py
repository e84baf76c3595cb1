from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvnerve import linalg
from mvnerve.modules import (
    MorphismError,
    TowerMorphism,
    barcode_distance,
    bottleneck,
    bottleneck_matching,
    cokernel,
    cokernel_projection,
    corestrict_to_image,
    distance_report,
    doubled,
    eps_trivial,
    hom_space,
    image,
    image_inclusion,
    is_eps_trivial,
    is_short_exact,
    kernel,
    kernel_inclusion,
    point_distance,
    random_morphism,
    shift,
    tower_from_barcode,
    verify_right_interleaving,
)
from mvnerve.persistence import INF, Barcode, Interval, PersistenceTower, barcode_of_tower

from conftest import PRIMES, bars

GRID = tuple(range(-2, 12))


# ---------------------------------------------------------------------------
# helpers


def random_invertible(n, p, r):
    while True:
        m = r.integers(0, p, size=(n, n))
        if linalg.rank(m, p) == n:
            return m


def random_tower(r, p, max_bars=4, finite=False):
    """Interval-decomposable tower in a random basis, on the shared grid ``GRID``."""
    ivs = []
    for _ in range(int(r.integers(0, max_bars + 1))):
        b = int(r.integers(-2, 8))
        if not finite and r.random() < 0.25:
            ivs.append((b, INF))
        else:
            ivs.append((b, b + int(r.integers(1, 5))))
    t = tower_from_barcode(ivs, p).refine(GRID) if ivs else PersistenceTower(GRID, (0,) * len(GRID), tuple(np.zeros((0, 0), dtype=np.int64) for _ in GRID[1:]), p)
    change = [random_invertible(d, p, r) if d else np.zeros((0, 0), dtype=np.int64) for d in t.dims]
    maps = []
    for i, m in enumerate(t.maps):
        inv = linalg.inverse(change[i], p)
        maps.append(linalg.matmul(linalg.matmul(change[i + 1], m, p), inv, p))
    return PersistenceTower(t.grid, t.dims, tuple(maps), p, True)


towers = st.tuples(st.integers(0, 2**32 - 1), PRIMES)


def brute_bottleneck(a, b):
    a, b = list(a), list(b)
    left = [("a", iv) for iv in a] + [("d", iv) for iv in b]
    right = [("b", iv) for iv in b] + [("d", iv) for iv in a]

    def cost(x, y):
        (kx, ix), (ky, iy) = x, y
        if kx == "d" and ky == "d":
            return Fraction(0)
        if kx == "d":
            return INF if iy.essential else Fraction(iy.death - iy.birth, 2)
        if ky == "d":
            return INF if ix.essential else Fraction(ix.death - ix.birth, 2)
        if ix.essential != iy.essential:
            return INF
        if ix.essential:
            return Fraction(abs(ix.birth - iy.birth))
        return Fraction(max(abs(ix.birth - iy.birth), abs(ix.death - iy.death)))

    best = INF
    for perm in itertools.permutations(range(len(right))):
        best = min(best, max([cost(left[i], right[k]) for i, k in enumerate(perm)], default=Fraction(0)))
    return best


# ---------------------------------------------------------------------------
# ε-triviality, shifts, point modules


def test_eps_trivial_examples():
    assert eps_trivial([]) == 0
    assert eps_trivial([(3, 5)]) == 1
    assert eps_trivial([(0, 3), (2, 4)]) == Fraction(3, 2)
    assert doubled(eps_trivial([(0, 3), (2, 4)])) == 3
    assert eps_trivial([(0, INF)]) == INF
    assert doubled(INF) == "inf"


@given(towers)
def test_eps_trivial_agrees_with_direct_check(args):
    seed, p = args
    t = random_tower(np.random.default_rng(seed), p, finite=True)
    e = eps_trivial(t)
    assert is_eps_trivial(t, e)
    if e > 0:
        assert not is_eps_trivial(t, e - Fraction(1, 2))


def test_shift_examples():
    t = tower_from_barcode([(2, 5)])
    assert barcode_of_tower(shift(t, 2)) == [Interval(0, 3)]
    assert barcode_of_tower(shift(t, 0)) == barcode_of_tower(t)
    assert barcode_of_tower(shift(shift(t, 3), -3)) == barcode_of_tower(t)


def test_point_distance_examples():
    assert point_distance(Barcode({0: [(3, INF)]})) == (0, 3, "ok")
    e, a, why = point_distance(Barcode({0: [(0, INF), (0, INF)]}))
    assert e == INF and a is None and "2 essential" in why
    assert point_distance(Barcode())[2] == "empty"
    assert point_distance(Barcode({0: [(0, INF)], 1: [(1, INF)]}))[0] == INF
    # one extra component living for 3 steps and a 1-cycle of length 2
    assert point_distance(Barcode({0: [(0, INF), (1, 4)], 1: [(2, 4)]})) == (Fraction(3, 2), 0, "ok")


# ---------------------------------------------------------------------------
# bottleneck


def test_bottleneck_examples():
    assert bottleneck([(0, 4), (1, INF)], [(0, 4), (1, INF)]) == 0
    assert bottleneck([(0, INF)], [(2, INF)]) == 2
    assert bottleneck([(0, INF)], []) == INF
    # H_1 of the D=1 bipyramid against its bottom-row E^inf class
    assert bottleneck([(-2, 4)], [(-2, 2)]) == 2
    assert doubled(bottleneck([(0, 3)], [])) == 3


def test_matching_witness_and_report():
    m = bottleneck_matching([(0, 10), (5, 6)], [(1, 10)])
    assert m.cost == 1
    assert ([0, 10], [1, 10]) in [tuple(x) for x in m.to_json()]
    rep = distance_report([(0, 10), (5, 6)], [(1, 10)])
    assert rep["distance"] == 2 and rep["units"] == "half-grid-steps"
    assert len(rep["witness_matching"]) == 2


@given(bars(max_bars=3), bars(max_bars=3))
def test_bottleneck_matches_brute_force(a, b):
    assert bottleneck(a, b) == brute_bottleneck([Interval(*x) for x in a], [Interval(*x) for x in b])


@given(bars(), bars(), bars())
def test_metric_axioms(a, b, c):
    assert bottleneck(a, a) == 0
    ab, ba = bottleneck(a, b), bottleneck(b, a)
    assert ab == ba
    assert bottleneck(a, c) <= ab + bottleneck(b, c)
    if ab == 0:
        assert sorted(Interval(*x) for x in a if x[1] - x[0] > 0) == sorted(Interval(*x) for x in b)


def test_barcode_distance_is_max_over_degrees():
    a = Barcode({0: [(0, INF)], 1: [(0, 4)]})
    b = Barcode({0: [(1, INF)], 1: [(0, 1)]})
    # degree 1: both bars to the diagonal costs max(2, 1/2); pairing them would cost 3
    assert barcode_distance(a, b) == 2


# ---------------------------------------------------------------------------
# kernels, images, cokernels


def test_identity_and_zero_morphisms():
    t = random_tower(np.random.default_rng(1), 3)
    ident = TowerMorphism.identity(t)
    assert sum(kernel(ident).dims) == 0 and sum(cokernel(ident).dims) == 0
    z = TowerMorphism.zero(t, t)
    assert barcode_of_tower(kernel(z)) == barcode_of_tower(t)
    assert barcode_of_tower(cokernel(z)) == barcode_of_tower(t)


def test_multiplication_by_t_has_one_step_cokernel():
    # t: [0,inf) -> [0,inf) has source support shifted by one slice, i.e. [1,inf) -> [0,inf)
    src = PersistenceTower((0, 1), (0, 1), (np.zeros((1, 0), dtype=np.int64),), 2)
    tgt = PersistenceTower((0, 1), (1, 1), (np.array([[1]]),), 2)
    f = TowerMorphism(src, tgt, (np.zeros((1, 0), dtype=np.int64), np.array([[1]])))
    assert barcode_of_tower(cokernel(f)) == [Interval(0, 1)]
    assert barcode_of_tower(kernel(f)) == []
    assert f.is_injective()


def test_naturality_violation_names_square():
    one = PersistenceTower((0, 1), (1, 1), (np.array([[1]]),), 2)
    with pytest.raises(MorphismError, match="between degrees 0 and 1"):
        TowerMorphism(one, one, (np.array([[1]]), np.array([[0]])))


@given(towers)
def test_rank_nullity_per_slice(args):
    seed, p = args
    r = np.random.default_rng(seed)
    m, n = random_tower(r, p), random_tower(r, p)
    f = random_morphism(m, n, r)
    k, im, c = kernel(f), image(f), cokernel(f)
    for i in range(len(f.grid)):
        assert k.dims[i] + im.dims[i] == f.source.dims[i]
        assert im.dims[i] + c.dims[i] == f.target.dims[i]
    assert is_short_exact(kernel_inclusion(f), corestrict_to_image(f))
    assert is_short_exact(image_inclusion(f), cokernel_projection(f))


@given(towers)
def test_kernel_of_map_into_trivial_module(args):
    seed, p = args
    r = np.random.default_rng(seed)
    n, target = random_tower(r, p), random_tower(r, p, finite=True)
    g = random_morphism(n, target, r)
    eps = eps_trivial(target)
    assert bottleneck(barcode_of_tower(g.source), barcode_of_tower(kernel(g))) <= 2 * eps


@given(towers)
def test_cokernel_of_map_from_trivial_module(args):
    seed, p = args
    r = np.random.default_rng(seed)
    source, n = random_tower(r, p, finite=True), random_tower(r, p)
    f = random_morphism(source, n, r)
    eps = eps_trivial(source)
    assert bottleneck(barcode_of_tower(f.target), barcode_of_tower(cokernel(f))) <= 2 * eps


@given(towers)
def test_extension_bound(args):
    seed, p = args
    r = np.random.default_rng(seed)
    a, b = random_tower(r, p, finite=True), random_tower(r, p, finite=True)
    f = random_morphism(a, b, r)
    # 0 -> ker f -> A -> im f -> 0 and 0 -> im f -> B -> coker f -> 0
    assert eps_trivial(a) <= eps_trivial(kernel(f)) + eps_trivial(image(f))
    assert eps_trivial(b) <= eps_trivial(image(f)) + eps_trivial(cokernel(f))


@given(towers)
def test_subquotients_of_trivial_module_stay_trivial(args):
    seed, p = args
    r = np.random.default_rng(seed)
    m, n = random_tower(r, p, finite=True), random_tower(r, p)
    eps = eps_trivial(m)
    f = random_morphism(m, n, r)
    assert eps_trivial(kernel(f)) <= eps and eps_trivial(image(f)) <= eps
    g = random_morphism(n, m, r)
    assert eps_trivial(cokernel(g)) <= eps and eps_trivial(image(g)) <= eps


@given(towers)
def test_cokernel_sequence_for_injective_second_map(args):
    seed, p = args
    r = np.random.default_rng(seed)
    big = random_tower(r, p)
    g = image_inclusion(random_morphism(random_tower(r, p), big, r))
    f = random_morphism(random_tower(r, p), g.source, r)
    assert g.is_injective()
    gf = g.compose(f)
    for i in range(len(gf.grid)):
        assert cokernel(gf).dims[i] == cokernel(f).dims[i] + cokernel(g).dims[i]


@given(towers)
def test_kernel_sequence_for_surjective_first_map(args):
    seed, p = args
    r = np.random.default_rng(seed)
    f = corestrict_to_image(random_morphism(random_tower(r, p), random_tower(r, p), r))
    g = random_morphism(f.target, random_tower(r, p), r)
    assert f.is_surjective()
    gf = g.compose(f)
    for i in range(len(gf.grid)):
        assert kernel(gf).dims[i] == kernel(f).dims[i] + kernel(g).dims[i]


def test_hom_space_between_intervals():
    # Hom([a,b), [c,d)) is one-dimensional iff c <= a < d <= b, else zero
    for (a, b), (c, d) in itertools.product(itertools.combinations(range(5), 2), repeat=2):
        m, n = tower_from_barcode([(a, b)]), tower_from_barcode([(c, d)])
        expected = 1 if c <= a < d <= b else 0
        assert len(hom_space(m, n)) == expected, ((a, b), (c, d))


@pytest.mark.parametrize("a,eps2", [(1, 2), (3, 2), (2, 4)])
def test_asymmetry_witness(a, eps2):
    m = tower_from_barcode([(0, a + eps2)])
    n = tower_from_barcode([(0, a)])
    maps = hom_space(m, n)
    assert len(maps) == 1
    f = maps[0]
    assert verify_right_interleaving(f, Fraction(eps2, 2))
    assert barcode_of_tower(kernel(f)) == [Interval(a, a + eps2)]
    assert not f.is_injective()
    assert hom_space(n, m) == []
