"""Exact rational geometry on the unit segment, circle, and cube.

Interval unions carry an explicit ambient length so that folded pieces can live
on [0, 1/N] without premature rescaling.  Box unions are kept canonical as
covered cells of their own coordinate arrangement, merged to a fixpoint.  All
coordinates are `fractions.Fraction`; every operation is exact and every value
is immutable after construction (safe to share across threads).

Membership uses the half-open convention [lo, hi): it makes covering counts
under folding deterministic while agreeing with the measure-theoretic picture
up to null sets.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import DimensionMismatch

Pair = tuple[Fraction, Fraction]
Box = tuple[Pair, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce to an exact rational; floats are rejected outright."""
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass Fraction, int, or 'p/q' string")
    return Fraction(value)


# ---------------------------------------------------------------------------
# 1-D: interval unions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalUnion:
    """Canonical finite union of intervals [lo, hi) inside [0, ambient].

    Canonical form: intervals sorted, pairwise disjoint with strictly positive
    gaps (touching intervals are merged on construction).
    """

    intervals: tuple[Pair, ...]
    ambient: Fraction = ONE

    @staticmethod
    def from_pairs(pairs, ambient=ONE) -> "IntervalUnion":
        amb = as_fraction(ambient)
        if amb <= 0:
            raise ValueError("ambient length must be positive")
        cleaned = []
        for lo, hi in pairs:
            lo, hi = as_fraction(lo), as_fraction(hi)
            if lo < ZERO or hi > amb:
                raise ValueError(f"interval [{lo}, {hi}] exceeds ambient [0, {amb}]")
            if lo < hi:
                cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[list[Fraction]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return IntervalUnion(tuple((a, b) for a, b in merged), amb)

    @staticmethod
    def empty(ambient=ONE) -> "IntervalUnion":
        return IntervalUnion.from_pairs([], ambient)

    @staticmethod
    def full(ambient=ONE) -> "IntervalUnion":
        amb = as_fraction(ambient)
        return IntervalUnion.from_pairs([(ZERO, amb)], amb)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), ZERO)

    @property
    def component_count(self) -> int:
        return len(self.intervals)

    def contains(self, t) -> bool:
        t = as_fraction(t)
        return any(lo <= t < hi for lo, hi in self.intervals)

    def cyclic_component_count(self) -> int:
        """Number of maximal arcs once 0 and ambient are identified."""
        if not self.intervals:
            return 0
        if len(self.intervals) == 1 and self.intervals[0] == (ZERO, self.ambient):
            return 1
        wraps = self.intervals[0][0] == ZERO and self.intervals[-1][1] == self.ambient
        return len(self.intervals) - 1 if wraps else len(self.intervals)

    def cyclic_rotate(self, shift) -> "IntervalUnion":
        """Rotate by `shift` on the circle of circumference `ambient`."""
        s = as_fraction(shift) % self.ambient
        pieces = []
        for lo, hi in self.intervals:
            nl, nh = lo + s, hi + s
            if nh <= self.ambient:
                pieces.append((nl, nh))
            elif nl >= self.ambient:
                pieces.append((nl - self.ambient, nh - self.ambient))
            else:
                pieces.append((nl, self.ambient))
                pieces.append((ZERO, nh - self.ambient))
        return IntervalUnion.from_pairs(pieces, self.ambient)

    def complement(self) -> "IntervalUnion":
        gaps = []
        cursor = ZERO
        for lo, hi in self.intervals:
            if cursor < lo:
                gaps.append((cursor, lo))
            cursor = hi
        if cursor < self.ambient:
            gaps.append((cursor, self.ambient))
        return IntervalUnion.from_pairs(gaps, self.ambient)

    def scale(self, factor) -> "IntervalUnion":
        f = as_fraction(factor)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        return IntervalUnion.from_pairs(
            [(lo * f, hi * f) for lo, hi in self.intervals], self.ambient * f)

    def common_denominator(self) -> int:
        return lcm(1, *(e.denominator for lo, hi in self.intervals for e in (lo, hi)))

    def is_subset(self, other: "IntervalUnion") -> bool:
        if self.ambient != other.ambient:
            raise DimensionMismatch("ambient lengths differ")
        return all(
            any(olo <= lo and hi <= ohi for olo, ohi in other.intervals)
            for lo, hi in self.intervals)

    def fold(self, n_mod: int) -> "list[IntervalUnion]":
        """Covering-count chain over the base segment [0, ambient/n_mod].

        Entry n-1 collects the points of the base covered by at least n of the
        translates x - j*ambient/n_mod; the chain is nested and conserves
        total measure.
        """
        n_mod = int(n_mod)
        if n_mod < 1:
            raise ValueError("fold modulus must be >= 1")
        base = self.ambient / n_mod
        points = {ZERO, base}
        for lo, hi in self.intervals:
            points.add(lo % base)
            points.add(hi % base)
        cuts = sorted(points)
        chain: list[list[Pair]] = [[] for _ in range(n_mod)]
        for a, b in zip(cuts, cuts[1:]):
            mid = (a + b) / 2
            count = sum(1 for j in range(n_mod) if self.contains(mid + j * base))
            for n in range(count):
                chain[n].append((a, b))
        return [IntervalUnion.from_pairs(part, base) for part in chain]

    def to_region(self) -> "Region":
        if self.ambient != ONE:
            raise ValueError("only ambient-1 interval unions embed into the unit cube")
        return Region.from_boxes(1, [((lo, hi),) for lo, hi in self.intervals])


# ---------------------------------------------------------------------------
# d-D: box unions
# ---------------------------------------------------------------------------

def _merge_along(boxes: list[Box], axis: int) -> list[Box]:
    groups: dict[tuple, list[Pair]] = {}
    for box in boxes:
        key = box[:axis] + box[axis + 1:]
        groups.setdefault(key, []).append(box[axis])
    out = []
    for key, extents in groups.items():
        extents.sort()
        run_lo, run_hi = extents[0]
        for lo, hi in extents[1:]:
            if lo == run_hi:
                run_hi = hi
            else:
                out.append(key[:axis] + ((run_lo, run_hi),) + key[axis:])
                run_lo, run_hi = lo, hi
        out.append(key[:axis] + ((run_lo, run_hi),) + key[axis:])
    return out


def _canonical_pass(dim: int, boxes: list[Box]) -> tuple[Box, ...]:
    if not boxes:
        return ()
    cuts = [sorted({e for box in boxes for e in box[k]}) for k in range(dim)]
    cells = []
    for combo in itertools.product(*(zip(c, c[1:]) for c in cuts)):
        if any(all(lo <= clo and chi <= hi for (clo, chi), (lo, hi) in zip(combo, box))
               for box in boxes):
            cells.append(tuple(combo))
    for axis in range(dim):
        cells = _merge_along(cells, axis)
    return tuple(sorted(cells))


@dataclass(frozen=True)
class Region:
    """Canonical finite union of axis-parallel boxes inside [0, 1]^dim.

    Boxes are pairwise disjoint; overlapping input is re-partitioned on
    construction, and adjacent cells are merged until stable so that equal
    sets get equal representations in practice.
    """

    dim: int
    boxes: tuple[Box, ...]

    @staticmethod
    def from_boxes(dim: int, boxes) -> "Region":
        dim = int(dim)
        if dim < 1:
            raise ValueError("dimension must be positive")
        cleaned: list[Box] = []
        for box in boxes:
            box = tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in box)
            if len(box) != dim:
                raise DimensionMismatch(f"box {box} is not {dim}-dimensional")
            for lo, hi in box:
                if lo < ZERO or hi > ONE:
                    raise ValueError(f"box extent [{lo}, {hi}] leaves the unit cube")
            if all(lo < hi for lo, hi in box):
                cleaned.append(box)
        current = tuple(sorted(cleaned))
        while True:
            nxt = _canonical_pass(dim, list(current))
            if nxt == current:
                return Region(dim, nxt)
            current = nxt

    @staticmethod
    def empty(dim: int) -> "Region":
        return Region.from_boxes(dim, [])

    @staticmethod
    def cube(dim: int) -> "Region":
        return Region.from_boxes(dim, [tuple((ZERO, ONE) for _ in range(dim))])

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def measure(self) -> Fraction:
        total = ZERO
        for box in self.boxes:
            vol = ONE
            for lo, hi in box:
                vol *= hi - lo
            total += vol
        return total

    def contains_point(self, point) -> bool:
        pt = tuple(as_fraction(x) for x in point)
        if len(pt) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        return any(all(lo <= x < hi for x, (lo, hi) in zip(pt, box)) for box in self.boxes)

    def _joint_cells(self, other: "Region"):
        cuts = []
        for k in range(self.dim):
            vals = {ZERO, ONE}
            for region in (self, other):
                for box in region.boxes:
                    vals.update(box[k])
            cuts.append(sorted(vals))
        for combo in itertools.product(*(zip(c, c[1:]) for c in cuts)):
            yield tuple((lo + hi) / 2 for lo, hi in combo)

    def is_subset(self, other: "Region") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatch("region dimensions differ")
        return all(other.contains_point(mid)
                   for mid in self._joint_cells(other) if self.contains_point(mid))

    def set_equals(self, other: "Region") -> bool:
        return self.measure == other.measure and self.is_subset(other) and other.is_subset(self)

    def complement(self) -> "Region":
        """Complement within the unit cube."""
        cuts = []
        for k in range(self.dim):
            vals = {ZERO, ONE}
            for box in self.boxes:
                vals.update(box[k])
            cuts.append(sorted(vals))
        cells = []
        for combo in itertools.product(*(zip(c, c[1:]) for c in cuts)):
            mid = tuple((lo + hi) / 2 for lo, hi in combo)
            if not self.contains_point(mid):
                cells.append(tuple(combo))
        return Region.from_boxes(self.dim, cells)

    def stretch_axis(self, axis: int, factor) -> "Region":
        f = as_fraction(factor)
        return Region.from_boxes(self.dim, [
            box[:axis] + ((box[axis][0] * f, box[axis][1] * f),) + box[axis + 1:]
            for box in self.boxes])

    def cyclic_translate(self, vector) -> "Region":
        """Translate modulo 1 per axis, cutting boxes at the wrap seam."""
        vec = tuple(as_fraction(v) % ONE for v in vector)
        if len(vec) != self.dim:
            raise DimensionMismatch("translation vector dimension mismatch")
        out = []
        for box in self.boxes:
            per_axis = []
            for (lo, hi), v in zip(box, vec):
                nl, nh = lo + v, hi + v
                if nh <= ONE:
                    per_axis.append([(nl, nh)])
                elif nl >= ONE:
                    per_axis.append([(nl - ONE, nh - ONE)])
                else:
                    per_axis.append([(nl, ONE), (ZERO, nh - ONE)])
            out.extend(itertools.product(*per_axis))
        return Region.from_boxes(self.dim, out)

    def to_interval_union(self) -> IntervalUnion:
        if self.dim != 1:
            raise DimensionMismatch("only 1-D regions convert to interval unions")
        return IntervalUnion.from_pairs([box[0] for box in self.boxes])


def common_denominator(region: Region) -> tuple[int, ...]:
    """Per-axis lcm of endpoint denominators; the region is a union of full
    cells of size 1/q_k along each axis."""
    out = []
    for k in range(region.dim):
        out.append(lcm(1, *(e.denominator for box in region.boxes for e in box[k])))
    return tuple(out)


# ---------------------------------------------------------------------------
# First-axis fibers, folding, step decomposition
# ---------------------------------------------------------------------------

def _first_axis_fibers(family: "list[Region]"):
    """Arrangement atoms of the last d-1 coordinates over the whole family,
    with the first-axis fiber of every region over every atom.

    Returns (atoms, fibers): atoms are (d-1)-dimensional boxes, pairwise
    disjoint, sorted; fibers[i][j] is the interval union of region i over
    atom j.  Atoms with empty fibers across the whole family are dropped.
    """
    dim = family[0].dim
    cuts = []
    for k in range(1, dim):
        vals = {ZERO, ONE}
        for region in family:
            for box in region.boxes:
                vals.update(box[k])
        cuts.append(sorted(vals))
    atoms: list[Box] = []
    fibers: list[list[IntervalUnion]] = [[] for _ in family]
    for cell in itertools.product(*(zip(c, c[1:]) for c in cuts)):
        cell = tuple(cell)
        per_region = []
        for region in family:
            parts = [box[0] for box in region.boxes
                     if all(lo <= clo and chi <= hi
                            for (clo, chi), (lo, hi) in zip(cell, box[1:]))]
            per_region.append(IntervalUnion.from_pairs(parts))
        if any(not u.is_empty for u in per_region):
            atoms.append(cell)
            for i, u in enumerate(per_region):
                fibers[i].append(u)
    return atoms, [tuple(row) for row in fibers]


def fold_1d_region(region: Region, n_mod: int) -> "list[Region]":
    """Covering-count chain of `region` folded along the first axis.

    Entry n-1 is the set of (t, s) with t in [0, 1/n_mod] such that
    (t + j/n_mod, s) lies in the region for at least n values of j; results
    are nested and conserve total measure exactly.
    """
    n_mod = int(n_mod)
    if n_mod < 1:
        raise ValueError("fold modulus must be >= 1")
    if region.dim == 1:
        return [u.to_region() if u.ambient == ONE else
                Region.from_boxes(1, [((lo, hi),) for lo, hi in u.intervals])
                for u in region.to_interval_union().fold(n_mod)]
    if region.is_empty:
        return [Region.empty(region.dim) for _ in range(n_mod)]
    atoms, fibers = _first_axis_fibers([region])
    chains = [fiber.fold(n_mod) for fiber in fibers[0]]
    out = []
    for n in range(n_mod):
        boxes = []
        for atom, chain in zip(atoms, chains):
            for lo, hi in chain[n].intervals:
                boxes.append(((lo, hi),) + atom)
        out.append(Region.from_boxes(region.dim, boxes))
    return out


@dataclass(frozen=True)
class StepRegion:
    """Family decomposition into disjoint rear atoms with 1-D front fibers.

    For every region i the reassembly of fibers[i][j] x atoms[j] over j equals
    the region exactly.
    """

    dim: int
    atoms: tuple[Box, ...]
    fibers: tuple[tuple[IntervalUnion, ...], ...]

    def atom_region(self, j: int) -> Region:
        return Region.from_boxes(self.dim - 1, [self.atoms[j]])

    def atoms_region(self, indices) -> Region:
        return Region.from_boxes(self.dim - 1, [self.atoms[j] for j in indices])

    def reassemble(self, i: int) -> Region:
        boxes = []
        for atom, fiber in zip(self.atoms, self.fibers[i]):
            for lo, hi in fiber.intervals:
                boxes.append(((lo, hi),) + atom)
        return Region.from_boxes(self.dim, boxes)


def step_decompose(family) -> StepRegion:
    """Decompose every region of the family over one shared atom arrangement
    of the last d-1 coordinates."""
    family = list(family)
    if not family:
        raise ValueError("family must not be empty")
    dim = family[0].dim
    if dim < 2:
        raise DimensionMismatch("step decomposition needs dimension >= 2")
    if any(region.dim != dim for region in family):
        raise DimensionMismatch("family members have mixed dimensions")
    atoms, fibers = _first_axis_fibers(family)
    return StepRegion(dim, tuple(atoms), tuple(fibers))
