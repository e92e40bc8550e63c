import random
from fractions import Fraction as F

import numpy as np
import pytest

from rieszbox.construct import (CoherentFamily, base_interval_basis,
                                choose_fold_modulus, coherent_bases_1d,
                                coherent_bases_d, combine_product, fold_assemble,
                                riesz_basis_1d, riesz_basis_d, sandwich_basis_1d)
from rieszbox.errors import FoldCapExceeded, NestingViolation
from rieszbox.freqset import PeriodicSet
from rieszbox.geometry import IntervalUnion, Region, fold_1d_region
from rieszbox.verify import exact_riesz_bounds

from corpus import inclusion_chain, random_interval_union, random_periodic_set, random_region

iu = IntervalUnion.from_pairs
mk = PeriodicSet.make

TWO_GAPS = iu([(0, F(1, 4)), (F(1, 2), F(3, 4))])
LSHAPE = Region.from_boxes(2, [((F(0), F(1, 2)), (F(0), F(1, 2))),
                               ((F(0), F(1)), (F(1, 2), F(1)))])
LSHAPE_SIGMA = mk((2, 2), {(0, 0), (0, 1), (1, 0)})


def test_base_interval_basis_examples():
    assert base_interval_basis(F(1, 2), 2) == mk((2,), {(0,)})
    assert base_interval_basis(1, 1) == PeriodicSet.integers(1)
    assert base_interval_basis(F(3, 4), 4) == mk((4,), {(0,), (1,), (2,)})
    with pytest.raises(ValueError):
        base_interval_basis(F(1, 3), 4)


def test_choose_fold_modulus_examples():
    assert choose_fold_modulus(TWO_GAPS) == 2
    assert choose_fold_modulus(iu([(0, F(1, 8)), (F(1, 2), F(5, 8))])) == 2
    with pytest.raises(ValueError):
        choose_fold_modulus(iu([(0, F(1, 2))]))


def test_choose_fold_modulus_cap():
    # folding at 2 keeps two separated arcs, folding at 3 wraps them into one
    x = iu([(0, F(1, 8)), (F(1, 4), F(3, 8))])
    assert choose_fold_modulus(x) == 3
    with pytest.raises(FoldCapExceeded):
        choose_fold_modulus(x, n_max=2)


def test_riesz_basis_1d_examples():
    half = iu([(0, F(1, 2))])
    assert riesz_basis_1d(half, "direct") == mk((2,), {(0,)})
    assert riesz_basis_1d(half, "recursive") == mk((2,), {(0,)})
    assert riesz_basis_1d(TWO_GAPS, "direct") == mk((4,), {(0,), (1,)})
    assert riesz_basis_1d(TWO_GAPS, "recursive") == mk((4,), {(1,), (2,)})
    assert riesz_basis_1d(TWO_GAPS, "paper") == mk((4,), {(1,), (2,)})
    assert riesz_basis_1d(IntervalUnion.full()) == PeriodicSet.integers(1)
    with pytest.raises(ValueError):
        riesz_basis_1d(IntervalUnion.empty())


def test_riesz_basis_1d_wrapped_interval():
    wrapped = iu([(0, F(1, 8)), (F(7, 8), F(1))])
    sigma = riesz_basis_1d(wrapped, "recursive")
    assert sigma == mk((4,), {(0,)})
    report = exact_riesz_bounds(wrapped.to_region(), sigma)
    assert report.verdict == "riesz_basis"


def test_sandwich_examples():
    assert sandwich_basis_1d(iu([(0, F(5, 8))]), 8) == mk((8,), {(r,) for r in range(5)})
    assert sandwich_basis_1d(IntervalUnion.full(), 3) == PeriodicSet.integers(1)
    assert sandwich_basis_1d(TWO_GAPS, 4) == mk((4,), {(0,), (1,)})


def test_sandwich_inclusions_random():
    rng = random.Random(41)
    for _ in range(40):
        x = random_interval_union(rng)
        n = rng.randint(1, 10)
        sigma = sandwich_basis_1d(x, n)
        m = int(n * x.measure)
        comps = x.component_count
        low = mk((n,), {(r,) for r in range(max(0, m - 2 * comps))})
        high = mk((n,), {(r,) for r in range(min(m + 2 * comps + 1, n))})
        assert low.is_subset(sigma)
        assert sigma.is_subset(high)
        assert sigma.density == x.measure


def test_coherent_bases_1d_examples():
    fam = coherent_bases_1d([iu([(0, F(1, 4))]), TWO_GAPS])
    assert fam.basis(0) == mk((4,), {(0,)})
    assert fam.basis(1) == mk((4,), {(0,), (1,)})
    assert fam.inclusions == ((0, 1),)

    solo = coherent_bases_1d([IntervalUnion.full()])
    assert solo.basis(0) == PeriodicSet.integers(1)

    chain = coherent_bases_1d([iu([(0, F(1, 8))]), iu([(0, F(1, 2))]),
                               IntervalUnion.full()])
    assert chain.basis(0) == mk((8,), {(0,)})
    assert chain.basis(1) == mk((8,), {(0,), (1,), (2,), (3,)})
    assert chain.basis(2) == PeriodicSet.integers(1)


def test_combine_product_worked_example():
    xs = [(Region.from_boxes(1, [((F(0), F(1, 2)),)]), mk((2,), {(0,)})),
          (Region.cube(1), PeriodicSet.integers(1))]
    ys = [(Region.cube(1), PeriodicSet.integers(1)),
          (Region.from_boxes(1, [((F(1, 2), F(1)),)]), mk((2,), {(0,)}))]
    assert combine_product(xs, ys) == LSHAPE_SIGMA

    trivial = combine_product([(Region.cube(1), PeriodicSet.integers(1))],
                              [(Region.cube(1), PeriodicSet.integers(1))])
    assert trivial == PeriodicSet.integers(2)

    with pytest.raises(NestingViolation):
        combine_product(list(reversed(xs)), ys)


def test_fold_assemble_examples():
    quarter = Region.from_boxes(1, [((F(0), F(1, 4)),)])
    piece = mk((4,), {(0,)})
    assert fold_assemble([(quarter, piece), (quarter, piece)], 2) == mk((4,), {(1,), (2,)})

    assert fold_assemble([(Region.cube(1), PeriodicSet.integers(1))], 1) == \
        PeriodicSet.integers(1)

    third = mk((3,), {(0,)})
    cell = Region.from_boxes(1, [((F(0), F(1, 3)),)])
    assert fold_assemble([(cell, third)] * 3, 3) == PeriodicSet.integers(1)

    with pytest.raises(ValueError):
        fold_assemble([(quarter, mk((2,), {(1,)})), (quarter, piece)], 2)


def test_fold_assemble_pieces_disjoint():
    rng = random.Random(43)
    for _ in range(20):
        x = random_interval_union(rng)
        if x.cyclic_component_count() < 2:
            continue
        n = choose_fold_modulus(x)
        chain = x.fold(n)
        pieces = []
        for part in chain:
            if part.is_empty:
                pieces.append(PeriodicSet.empty(1))
            else:
                pieces.append(riesz_basis_1d(part.scale(n)).scale_axis(0, n))
        shifted = [p.shift((k,)) for k, p in enumerate(pieces, start=1)]
        for a in range(len(shifted)):
            for b in range(a + 1, len(shifted)):
                assert shifted[a].intersect(shifted[b]).is_empty


def test_coherent_bases_d_examples():
    fam = coherent_bases_d([Region.cube(2)])
    assert fam.basis(0) == PeriodicSet.integers(2)

    fam = coherent_bases_d([LSHAPE])
    assert fam.basis(0) == LSHAPE_SIGMA

    dup = coherent_bases_d([LSHAPE, LSHAPE])
    assert dup.basis(0) == dup.basis(1) == LSHAPE_SIGMA
    assert set(dup.inclusions) == {(0, 1), (1, 0)}


def test_riesz_basis_d_examples():
    for d in (1, 2, 3):
        assert riesz_basis_d(Region.cube(d)) == PeriodicSet.integers(d)
    assert riesz_basis_d(LSHAPE) == LSHAPE_SIGMA
    assert riesz_basis_d(TWO_GAPS.to_region(), "recursive") == mk((4,), {(1,), (2,)})
    assert riesz_basis_d(TWO_GAPS.to_region(), "direct") == mk((4,), {(0,), (1,)})


def test_density_conservation_everywhere():
    rng = random.Random(47)
    for _ in range(30):
        dim = rng.randint(1, 3)
        region = random_region(rng, dim)
        for strategy in ("recursive", "direct"):
            assert riesz_basis_d(region, strategy).density == region.measure


def test_chain_union_reorganizations_agree():
    # the union of products over nested chains equals both of its disjoint
    # reorganizations: peeling the rear chain or peeling the front chain
    rng = random.Random(53)
    for _ in range(60):
        depth = rng.randint(1, 4)
        fronts, rears = [], []
        front = PeriodicSet.empty(1)
        rear = random_periodic_set(rng, 1, 4).union(random_periodic_set(rng, 1, 4))
        for _ in range(depth):
            front = front.union(random_periodic_set(rng, 1, 4))
            fronts.append(front)
            rears.append(rear)
            rear = rear.intersect(random_periodic_set(rng, 1, 4))
        total = PeriodicSet.empty(2)
        by_rear = PeriodicSet.empty(2)
        by_front = PeriodicSet.empty(2)
        for n in range(depth):
            total = total.union(fronts[n].product(rears[n]))
            rear_next = rears[n + 1] if n + 1 < depth else PeriodicSet.empty(1)
            by_rear = by_rear.union(fronts[n].product(rears[n].minus(rear_next)))
            front_prev = fronts[n - 1] if n > 0 else PeriodicSet.empty(1)
            by_front = by_front.union(fronts[n].minus(front_prev).product(rears[n]))
        assert total == by_rear == by_front


def test_coherent_inclusion_chains():
    rng = random.Random(59)
    for _ in range(12):
        dim = rng.randint(1, 3)
        chain = inclusion_chain(rng, dim, rng.randint(2, 4))
        fam = coherent_bases_d(chain)
        for i, j in fam.inclusions:
            assert fam.basis(i).is_subset(fam.basis(j))
        assert any(fam.region(i).is_subset(fam.region(i + 1))
                   for i in range(len(chain) - 1))


def test_determinism_and_trace_replay():
    region = Region.from_boxes(2, [((F(0), F(1, 4)), (F(0), F(1, 2))),
                                   ((F(1, 2), F(3, 4)), (F(0), F(1, 2))),
                                   ((F(0), F(1)), (F(1, 2), F(5, 6)))])
    t1, t2 = [], []
    s1 = riesz_basis_d(region, "recursive", trace=t1)
    s2 = riesz_basis_d(region, "recursive", trace=t2)
    assert s1 == s2
    assert t1 == t2


def test_rotation_invariance_of_bounds_1d():
    rng = random.Random(61)
    for _ in range(10):
        x = random_interval_union(rng)
        sigma = riesz_basis_1d(x, "recursive")
        q = x.common_denominator()
        shift = F(rng.randint(0, q - 1), q)
        rotated = x.cyclic_rotate(shift).to_region()
        a = exact_riesz_bounds(x.to_region(), sigma)
        b = exact_riesz_bounds(rotated, sigma)
        assert np.allclose(a.sigma_values, b.sigma_values, atol=1e-12)


def test_rotation_invariance_of_bounds_2d():
    sigma = riesz_basis_d(LSHAPE)
    moved = LSHAPE.cyclic_translate((F(1, 2), F(0)))
    a = exact_riesz_bounds(LSHAPE, sigma)
    b = exact_riesz_bounds(moved, sigma)
    assert np.allclose(a.sigma_values, b.sigma_values, atol=1e-12)


def test_validate_rejects_broken_family():
    fam = CoherentFamily(((Region.cube(1), PeriodicSet.integers(1)),
                          (Region.cube(1), PeriodicSet.empty(1))), ((0, 1),))
    with pytest.raises(AssertionError):
        fam.validate()
