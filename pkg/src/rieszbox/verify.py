"""Spectral certification of (region, frequency set) pairs.

For a region that is a union of full grid cells at per-axis moduli M and a
frequency set periodic modulo M, splitting both the region into cells and the
frequency set into residue classes reduces the two quadratic-form inequalities
to one finite matrix: the character table of Z_{M_1} x ... x Z_{M_d}
restricted to occupied cells (rows) and residues (columns).  Its extreme
singular values, divided by the cell count M_1*...*M_d, are the exact bounds:
the column Gram controls synthesis (Riesz-sequence side), the row Gram
controls analysis (frame side), and the verdict is two-sided iff the matrix
is square and well conditioned.

Gram matrices of finite frequency lists give independent truncation evidence
with closed-form entries, and small groups can be searched exhaustively for
invertible residue selections.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, inf, lcm, prod

import numpy as np

from .errors import DimensionMismatch, EnumerationBoundExceeded, GridAlignmentError
from .freqset import PeriodicSet
from .geometry import Region, common_denominator

DEFAULT_TOLERANCE = 1e-9

VERDICT_BASIS = "riesz_basis"
VERDICT_FRAME_ONLY = "frame_only"
VERDICT_SEQUENCE_ONLY = "riesz_sequence_only"
VERDICT_NEITHER = "neither"


# ---------------------------------------------------------------------------
# Character-table submatrices
# ---------------------------------------------------------------------------

def dft_submatrix(moduli, cells, residues) -> np.ndarray:
    """Unit-modulus matrix exp(2*pi*i * sum_k c_k r_k / M_k) with one row per
    cell and one column per residue, both in sorted order."""
    moduli = tuple(int(m) for m in moduli)
    cells = sorted(tuple(int(x) for x in c) for c in cells)
    residues = sorted(tuple(int(x) for x in r) for r in residues)
    if not cells or not residues:
        raise ValueError("cells and residues must be nonempty")
    total = lcm(*moduli)
    weights = np.array([total // m for m in moduli], dtype=np.int64)
    c_arr = np.array(cells, dtype=np.int64)
    r_arr = np.array(residues, dtype=np.int64)
    phase = (c_arr * weights) @ r_arr.T % total
    return np.exp(2j * np.pi * phase / total)


def occupied_cells(region: Region, moduli) -> "list[tuple[int, ...]]":
    """Grid cells covered by the region at the given per-axis moduli; the
    region must be a union of full cells."""
    moduli = tuple(int(m) for m in moduli)
    if len(moduli) != region.dim:
        raise DimensionMismatch("moduli dimension mismatch")
    for k, q in enumerate(common_denominator(region)):
        if moduli[k] % q != 0:
            raise GridAlignmentError(
                f"axis {k}: region denominator {q} does not divide modulus {moduli[k]}")
    cells = set()
    for box in region.boxes:
        ranges = [range(int(lo * m), int(hi * m)) for (lo, hi), m in zip(box, moduli)]
        cells.update(itertools.product(*ranges))
    return sorted(cells)


# ---------------------------------------------------------------------------
# Exact bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralReport:
    verdict: str
    lower_bound: float
    upper_bound: float
    condition: float
    cell_count: int
    residue_count: int
    sigma_values: tuple
    tolerance: float
    frame_ok: bool
    sequence_ok: bool


def exact_riesz_bounds(region: Region, sigma: PeriodicSet,
                       tolerance: float = DEFAULT_TOLERANCE) -> SpectralReport:
    """Exact two-sided bounds for the exponentials of `sigma` over `region`,
    valid whenever the region is grid-aligned at the joint moduli."""
    if region.dim != sigma.dim:
        raise DimensionMismatch("region and frequency set dimensions differ")
    moduli = tuple(lcm(q, m) for q, m in zip(common_denominator(region), sigma.moduli))
    cells = occupied_cells(region, moduli)
    residues = sigma.refine(moduli).residues
    n_cells, n_res = len(cells), len(residues)
    if n_cells == 0 and n_res == 0:
        return SpectralReport(VERDICT_BASIS, 1.0, 1.0, 1.0, 0, 0, (),
                              tolerance, True, True)
    if n_cells == 0 or n_res == 0:
        # empty region with frequencies, or empty set over a real region:
        # one side holds vacuously, the other fails outright
        frame_ok = n_cells == 0
        verdict = VERDICT_FRAME_ONLY if frame_ok else VERDICT_SEQUENCE_ONLY
        return SpectralReport(verdict, 0.0, 0.0, inf, n_cells, n_res, (),
                              tolerance, frame_ok, not frame_ok)
    matrix = dft_submatrix(moduli, cells, sorted(residues))
    volume = prod(moduli)
    sv = np.linalg.svd(matrix, compute_uv=False) / np.sqrt(volume)
    upper = float(sv[0] ** 2)
    smallest = float(sv[-1] ** 2)
    sequence_lower = smallest if n_res <= n_cells else 0.0
    frame_lower = smallest if n_cells <= n_res else 0.0
    sequence_ok = n_res <= n_cells and sequence_lower > tolerance
    frame_ok = n_cells <= n_res and frame_lower > tolerance
    lower = min(sequence_lower, frame_lower)
    if frame_ok and sequence_ok:
        verdict = VERDICT_BASIS
    elif frame_ok:
        verdict = VERDICT_FRAME_ONLY
    elif sequence_ok:
        verdict = VERDICT_SEQUENCE_ONLY
    else:
        verdict = VERDICT_NEITHER
    condition = upper / lower if lower > 0 else inf
    return SpectralReport(verdict, lower, upper, condition, n_cells, n_res,
                          tuple(float(s) for s in sv), tolerance,
                          frame_ok, sequence_ok)


# ---------------------------------------------------------------------------
# Gram truncations
# ---------------------------------------------------------------------------

def gram_matrix(region: Region, freqs) -> np.ndarray:
    """Hermitian Gram matrix of the exponentials at the given integer
    frequency vectors over the region, entries in closed form as sums of
    products of one-dimensional integrals."""
    freqs = [tuple(int(x) for x in f) for f in freqs]
    if len(set(freqs)) != len(freqs):
        raise ValueError("frequency vectors must be distinct")
    n = len(freqs)
    gram = np.zeros((n, n), dtype=complex)
    if n == 0:
        return gram
    f_arr = np.array(freqs, dtype=np.int64)
    diff = f_arr[:, None, :] - f_arr[None, :, :]
    for box in region.boxes:
        factor = np.ones((n, n), dtype=complex)
        for k, (lo, hi) in enumerate(box):
            d = diff[:, :, k]
            lo_f, hi_f = float(lo), float(hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                osc = (np.exp(2j * np.pi * d * hi_f) - np.exp(2j * np.pi * d * lo_f)) \
                    / (2j * np.pi * np.where(d == 0, 1, d))
            factor *= np.where(d == 0, hi_f - lo_f, osc)
        gram += factor
    gram = (gram + gram.conj().T) / 2
    np.fill_diagonal(gram, float(region.measure))
    return gram


@dataclass(frozen=True)
class GramSweep:
    radii: tuple
    min_eigs: tuple
    max_eigs: tuple
    counts: tuple


def gram_truncation_sweep(region: Region, sigma: PeriodicSet, radii) -> GramSweep:
    """Extreme Gram eigenvalues over the frequencies of `sigma` inside growing
    boxes [-r, r]^d; every radius must capture at least one frequency."""
    radii = tuple(int(r) for r in radii)
    if any(b < a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be non-decreasing")
    mins, maxes, counts = [], [], []
    for r in radii:
        freqs = sigma.enumerate_box((-r, r))
        if not freqs:
            raise ValueError(f"radius {r} captures no frequencies")
        eigs = np.linalg.eigvalsh(gram_matrix(region, freqs))
        mins.append(float(eigs[0]))
        maxes.append(float(eigs[-1]))
        counts.append(len(freqs))
    return GramSweep(radii, tuple(mins), tuple(maxes), tuple(counts))


# ---------------------------------------------------------------------------
# Duality and density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualReport:
    primal: SpectralReport
    complement: SpectralReport
    consistent: bool


def dual_complement_check(region: Region, sigma: PeriodicSet,
                          tolerance: float = DEFAULT_TOLERANCE) -> DualReport:
    """Analysis bounds for (region, sigma) against synthesis bounds for the
    complements within the unit cube and Z^d; the two must agree."""
    primal = exact_riesz_bounds(region, sigma, tolerance)
    comp = exact_riesz_bounds(region.complement(), sigma.complement(), tolerance)
    consistent = (primal.frame_ok == comp.sequence_ok
                  and primal.sequence_ok == comp.frame_ok)
    return DualReport(primal, comp, consistent)


def density_check(region: Region, sigma: PeriodicSet) -> bool:
    """Exact rational equality of frequency density and region measure."""
    if region.dim != sigma.dim:
        raise DimensionMismatch("region and frequency set dimensions differ")
    return sigma.density == region.measure


# ---------------------------------------------------------------------------
# Exhaustive selection searches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelectionSearch:
    moduli: tuple
    cells: tuple
    invertible: tuple
    singular: tuple


def brute_force_selection_search(moduli, cells, tolerance: float = DEFAULT_TOLERANCE,
                                 max_enumeration: int = 200_000) -> SelectionSearch:
    """Classify every residue selection of matching size by invertibility of
    its character submatrix against the given cells."""
    moduli = tuple(int(m) for m in moduli)
    cells = tuple(sorted(tuple(int(x) for x in c) for c in cells))
    if not cells:
        raise ValueError("cells must be nonempty")
    group = list(itertools.product(*(range(m) for m in moduli)))
    n = len(cells)
    if comb(len(group), n) > max_enumeration:
        raise EnumerationBoundExceeded(
            f"{comb(len(group), n)} selections exceed the bound {max_enumeration}")
    invertible, singular = [], []
    for selection in itertools.combinations(group, n):
        sv = np.linalg.svd(dft_submatrix(moduli, cells, selection), compute_uv=False)
        (invertible if sv[-1] > tolerance else singular).append(selection)
    return SelectionSearch(moduli, cells, tuple(invertible), tuple(singular))


@dataclass(frozen=True)
class UniversalRowSearch:
    moduli: tuple
    size: int
    universal: bool
    rows: "tuple | None"
    witnesses: tuple  # (row set, singular column set) for every failing row set


def universal_row_selection_check(moduli, size: int,
                                  tolerance: float = DEFAULT_TOLERANCE,
                                  max_enumeration: int = 200_000) -> UniversalRowSearch:
    """Search for one row set of the character table invertible against every
    equally sized column set; returns the first such set, or a singular
    column witness for every candidate."""
    moduli = tuple(int(m) for m in moduli)
    size = int(size)
    group = list(itertools.product(*(range(m) for m in moduli)))
    if size < 1 or size > len(group):
        raise ValueError("size must be between 1 and the group order")
    if comb(len(group), size) ** 2 > max_enumeration:
        raise EnumerationBoundExceeded(
            f"{comb(len(group), size) ** 2} pairs exceed the bound {max_enumeration}")
    col_sets = list(itertools.combinations(group, size))
    witnesses = []
    for rows in itertools.combinations(group, size):
        bad = next((cols for cols in col_sets
                    if np.linalg.svd(dft_submatrix(moduli, rows, cols),
                                     compute_uv=False)[-1] <= tolerance), None)
        if bad is None:
            return UniversalRowSearch(moduli, size, True, rows, tuple(witnesses))
        witnesses.append((rows, bad))
    return UniversalRowSearch(moduli, size, False, None, tuple(witnesses))
