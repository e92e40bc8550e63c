import random
from fractions import Fraction as F
from math import lcm

import numpy as np
import pytest
import scipy.integrate

from rieszbox.errors import EnumerationBoundExceeded, GridAlignmentError
from rieszbox.freqset import PeriodicSet
from rieszbox.geometry import Region, common_denominator
from rieszbox.construct import riesz_basis_d
from rieszbox.verify import (brute_force_selection_search, density_check,
                             dft_submatrix, dual_complement_check,
                             exact_riesz_bounds, gram_matrix,
                             gram_truncation_sweep, occupied_cells,
                             universal_row_selection_check)

from corpus import random_region

mk = PeriodicSet.make

LSHAPE = Region.from_boxes(2, [((F(0), F(1, 2)), (F(0), F(1, 2))),
                               ((F(0), F(1)), (F(1, 2), F(1)))])
LSHAPE_SIGMA = mk((2, 2), {(0, 0), (0, 1), (1, 0)})
HALF = Region.from_boxes(1, [((F(0), F(1, 2)),)])


def test_dft_submatrix_examples():
    assert np.allclose(dft_submatrix((2,), [(0,)], [(0,)]), [[1.0]])
    a = dft_submatrix((4,), [(0,), (2,)], [(1,), (2,)])
    assert np.allclose(a, [[1, 1], [-1, 1]])
    assert abs(np.linalg.det(a) - 2) < 1e-12
    b = dft_submatrix((2, 2), [(0, 0), (0, 1), (1, 1)], [(0, 0), (0, 1), (1, 0)])
    assert abs(abs(np.linalg.det(b)) - 4) < 1e-12


def test_occupied_cells():
    assert occupied_cells(HALF, (2,)) == [(0,)]
    assert occupied_cells(LSHAPE, (2, 2)) == [(0, 0), (0, 1), (1, 1)]
    with pytest.raises(GridAlignmentError):
        occupied_cells(HALF, (3,))


def test_exact_riesz_bounds_examples():
    full = exact_riesz_bounds(Region.cube(1), PeriodicSet.integers(1))
    assert full.verdict == "riesz_basis"
    assert abs(full.lower_bound - 1) < 1e-12 and abs(full.upper_bound - 1) < 1e-12

    half = exact_riesz_bounds(HALF, mk((2,), {(0,)}))
    assert abs(half.lower_bound - 0.5) < 1e-12 and abs(half.upper_bound - 0.5) < 1e-12

    rep = exact_riesz_bounds(LSHAPE, LSHAPE_SIGMA)
    assert rep.verdict == "riesz_basis"
    assert rep.cell_count == rep.residue_count == 3
    expected = min(np.linalg.svd(
        dft_submatrix((2, 2), [(0, 0), (0, 1), (1, 1)], [(0, 0), (0, 1), (1, 0)]),
        compute_uv=False)) ** 2 / 4
    assert abs(rep.lower_bound - expected) < 1e-12


def test_exact_riesz_bounds_degenerate_shapes():
    # more frequencies than cells: synthesis side must fail
    rep = exact_riesz_bounds(HALF, PeriodicSet.integers(1))
    assert rep.verdict == "frame_only" and not rep.sequence_ok
    # fewer frequencies than cells: analysis side must fail
    rep = exact_riesz_bounds(Region.cube(1), mk((2,), {(0,)}))
    assert rep.verdict == "riesz_sequence_only" and not rep.frame_ok
    # both empty: vacuous pass
    rep = exact_riesz_bounds(Region.empty(1), PeriodicSet.empty(1))
    assert rep.verdict == "riesz_basis" and rep.cell_count == 0
    assert rep.upper_bound <= 1 + 1e-9


def test_gram_matrix_examples():
    g = gram_matrix(HALF, [(0,), (1,)])
    assert abs(g[0, 0] - 0.5) < 1e-15 and abs(g[1, 1] - 0.5) < 1e-15
    assert abs(abs(g[0, 1]) - 1 / np.pi) < 1e-12

    g = gram_matrix(Region.cube(1), [(0,), (5,)])
    assert abs(g[0, 1]) < 1e-12

    assert np.allclose(gram_matrix(Region.empty(1), [(0,), (1,)]), 0)


def test_gram_matrix_matches_quadrature():
    region = Region.from_boxes(1, [((F(0), F(1, 3)),), ((F(1, 2), F(5, 6)),)])
    freqs = [(0,), (1,), (3,)]
    g = gram_matrix(region, freqs)
    for i, fi in enumerate(freqs):
        for j, fj in enumerate(freqs):
            d = fi[0] - fj[0]
            expected = 0.0
            for (lo, hi), in region.boxes:
                re, _ = scipy.integrate.quad(
                    lambda t: np.cos(2 * np.pi * d * t), float(lo), float(hi))
                im, _ = scipy.integrate.quad(
                    lambda t: np.sin(2 * np.pi * d * t), float(lo), float(hi))
                expected += re + 1j * im
            assert abs(g[i, j] - expected) < 1e-12


def test_gram_truncation_sweep_examples():
    sweep = gram_truncation_sweep(Region.cube(1), PeriodicSet.integers(1), [2, 5])
    assert np.allclose(sweep.min_eigs, 1) and np.allclose(sweep.max_eigs, 1)

    sweep = gram_truncation_sweep(HALF, mk((2,), {(0,)}), [2, 4, 6])
    assert np.allclose(sweep.min_eigs, 0.5) and np.allclose(sweep.max_eigs, 0.5)

    rep = exact_riesz_bounds(LSHAPE, LSHAPE_SIGMA)
    sweep = gram_truncation_sweep(LSHAPE, LSHAPE_SIGMA, [2, 4])
    assert all(m >= rep.lower_bound - 1e-9 for m in sweep.min_eigs)
    assert all(m <= 1 + 1e-9 for m in sweep.max_eigs)
    assert sweep.min_eigs[1] <= sweep.min_eigs[0] + 1e-12


def test_dual_complement_examples():
    assert dual_complement_check(Region.cube(1), PeriodicSet.integers(1)).consistent

    dual = dual_complement_check(HALF, mk((2,), {(0,)}))
    assert dual.consistent
    assert dual.complement.verdict == "riesz_basis"
    assert abs(dual.complement.lower_bound - 0.5) < 1e-12

    assert dual_complement_check(LSHAPE, LSHAPE_SIGMA).consistent


def test_density_check_examples():
    assert density_check(LSHAPE, LSHAPE_SIGMA)
    assert density_check(Region.cube(3), PeriodicSet.integers(3))
    assert not density_check(HALF, PeriodicSet.integers(1))


def test_brute_force_selection_search():
    res = brute_force_selection_search((2,), [(0,)])
    assert res.invertible == (((0,),), ((1,),)) and not res.singular

    res = brute_force_selection_search((2, 2), [(0, 0), (1, 1)])
    assert ((0, 0), (0, 1)) in res.invertible
    assert ((0, 1), (1, 0)) in res.singular

    with pytest.raises(EnumerationBoundExceeded):
        brute_force_selection_search((6, 6), [(i, i) for i in range(6)],
                                     max_enumeration=10)


def test_constructed_set_among_invertible_selections():
    rng = random.Random(67)
    found = 0
    while found < 8:
        region = random_region(rng, 1, max_den=4, max_boxes=2)
        sigma = riesz_basis_d(region, "recursive")
        moduli = tuple(lcm(q, m) for q, m in
                       zip(common_denominator(region), sigma.moduli))
        cells = occupied_cells(region, moduli)
        if len(cells) > 4 or moduli[0] > 6:
            continue
        res = brute_force_selection_search(moduli, cells)
        residues = tuple(sigma.refine(moduli).sorted_residues())
        assert residues in res.invertible
        found += 1


def test_universal_row_selection_examples():
    res = universal_row_selection_check((2, 2), 2)
    assert not res.universal and res.rows is None
    assert len(res.witnesses) == 6
    for rows, cols in res.witnesses:
        a = dft_submatrix((2, 2), rows, cols)
        assert np.linalg.svd(a, compute_uv=False)[-1] <= 1e-9

    for n in (1, 2, 3):
        res = universal_row_selection_check((4,), n)
        assert res.universal
        assert res.rows == tuple((i,) for i in range(n))

    assert universal_row_selection_check((2, 2), 1).universal


def test_unitary_invariance_grid_translation():
    rng = random.Random(71)
    for _ in range(10):
        dim = rng.randint(1, 2)
        region = random_region(rng, dim)
        sigma = riesz_basis_d(region)
        moduli = tuple(lcm(q, m) for q, m in
                       zip(common_denominator(region), sigma.moduli))
        shift = tuple(F(rng.randrange(m), m) for m in moduli)
        moved = region.cyclic_translate(shift)
        a = exact_riesz_bounds(region, sigma)
        b = exact_riesz_bounds(moved, sigma)
        assert np.allclose(a.sigma_values, b.sigma_values, atol=1e-12)


def test_unitary_invariance_frequency_shift():
    rng = random.Random(73)
    for _ in range(10):
        dim = rng.randint(1, 2)
        region = random_region(rng, dim)
        sigma = riesz_basis_d(region)
        vec = tuple(rng.randint(-5, 5) for _ in range(dim))
        a = exact_riesz_bounds(region, sigma)
        b = exact_riesz_bounds(region, sigma.shift(vec))
        assert np.allclose(a.sigma_values, b.sigma_values, atol=1e-12)


def test_spectral_report_bound_ordering():
    rng = random.Random(83)
    for _ in range(20):
        region = random_region(rng, rng.randint(1, 3))
        report = exact_riesz_bounds(region, riesz_basis_d(region))
        assert 0 <= report.lower_bound <= report.upper_bound <= 1 + 1e-9
        assert report.condition >= 1


def test_bessel_property_random_gram():
    rng = random.Random(79)
    for _ in range(15):
        dim = rng.randint(1, 2)
        region = random_region(rng, dim)
        freqs = [tuple(rng.randint(-6, 6) for _ in range(dim)) for _ in range(8)]
        freqs = list(dict.fromkeys(freqs))
        eigs = np.linalg.eigvalsh(gram_matrix(region, freqs))
        assert eigs[0] >= -1e-9
        assert eigs[-1] <= 1 + 1e-9
