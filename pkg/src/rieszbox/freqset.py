"""Exact algebra of periodic subsets of Z^d stored as residue sets.

A PeriodicSet is a finite union of cosets of the rectangular lattice
M_1 Z x ... x M_d Z, represented by the per-axis moduli and the set of residue
tuples.  Every operation the basis construction needs (union, intersection,
complement, product, shift, axis scaling, subset test, density) is exact set
algebra on residues after refining to common moduli.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

from .errors import DimensionMismatch, IncompatibleRefinement


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


@dataclass(frozen=True)
class PeriodicSet:
    """Subset of Z^d with membership decided by per-axis residues.

    lam is a member iff (lam_1 mod M_1, ..., lam_d mod M_d) is in `residues`.
    Instances produced by `make` and by all set operations are canonical: the
    moduli are the smallest per-axis periods.  `refine` deliberately returns a
    non-canonical representation at the requested moduli.
    """

    dim: int
    moduli: tuple[int, ...]
    residues: frozenset

    @staticmethod
    def make(moduli, residues) -> "PeriodicSet":
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive integers")
        dim = len(moduli)
        normalized = set()
        for r in residues:
            r = tuple(int(x) for x in (r if isinstance(r, (tuple, list)) else (r,)))
            if len(r) != dim:
                raise DimensionMismatch(f"residue {r} is not {dim}-dimensional")
            normalized.add(tuple(x % m for x, m in zip(r, moduli)))
        return PeriodicSet(dim, moduli, frozenset(normalized)).canonicalize()

    @staticmethod
    def integers(dim: int) -> "PeriodicSet":
        return PeriodicSet.make((1,) * dim, {(0,) * dim})

    @staticmethod
    def empty(dim: int) -> "PeriodicSet":
        return PeriodicSet.make((1,) * dim, set())

    # -- canonical form -----------------------------------------------------

    def canonicalize(self) -> "PeriodicSet":
        if not self.residues:
            if self.moduli == (1,) * self.dim:
                return self
            return PeriodicSet(self.dim, (1,) * self.dim, frozenset())
        periods = []
        for k, m in enumerate(self.moduli):
            for p in _divisors(m):
                shifted = {r[:k] + ((r[k] + p) % m,) + r[k + 1:] for r in self.residues}
                if shifted == self.residues:
                    periods.append(p)
                    break
        if tuple(periods) == self.moduli:
            return self
        reduced = {tuple(x % p for x, p in zip(r, periods)) for r in self.residues}
        return PeriodicSet(self.dim, tuple(periods), frozenset(reduced))

    # -- basic queries -------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.residues

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.residues), prod(self.moduli))

    def contains(self, vector) -> bool:
        v = tuple(int(x) for x in vector)
        if len(v) != self.dim:
            raise DimensionMismatch("vector dimension mismatch")
        return tuple(x % m for x, m in zip(v, self.moduli)) in self.residues

    def sorted_residues(self) -> list[tuple[int, ...]]:
        return sorted(self.residues)

    # -- representation changes ----------------------------------------------

    def refine(self, target_moduli) -> "PeriodicSet":
        """Re-express the same set at the given (multiple) moduli."""
        target = tuple(int(m) for m in target_moduli)
        if len(target) != self.dim:
            raise DimensionMismatch("target moduli dimension mismatch")
        for t, m in zip(target, self.moduli):
            if t < 1 or t % m != 0:
                raise IncompatibleRefinement(
                    f"incompatible refinement: {t} is not a positive multiple of {m}")
        expanded = set()
        for r in self.residues:
            axes = [range(x, t, m) for x, t, m in zip(r, target, self.moduli)]
            expanded.update(itertools.product(*axes))
        return PeriodicSet(self.dim, target, frozenset(expanded))

    def _aligned(self, other: "PeriodicSet"):
        if self.dim != other.dim:
            raise DimensionMismatch("operands have different dimensions")
        target = tuple(lcm(a, b) for a, b in zip(self.moduli, other.moduli))
        return self.refine(target), other.refine(target), target

    # -- set algebra ----------------------------------------------------------

    def union(self, other: "PeriodicSet") -> "PeriodicSet":
        a, b, target = self._aligned(other)
        return PeriodicSet(self.dim, target, a.residues | b.residues).canonicalize()

    def intersect(self, other: "PeriodicSet") -> "PeriodicSet":
        a, b, target = self._aligned(other)
        return PeriodicSet(self.dim, target, a.residues & b.residues).canonicalize()

    def minus(self, other: "PeriodicSet") -> "PeriodicSet":
        a, b, target = self._aligned(other)
        return PeriodicSet(self.dim, target, a.residues - b.residues).canonicalize()

    def complement(self) -> "PeriodicSet":
        everything = frozenset(itertools.product(*(range(m) for m in self.moduli)))
        return PeriodicSet(self.dim, self.moduli, everything - self.residues).canonicalize()

    def is_subset(self, other: "PeriodicSet") -> bool:
        a, b, _ = self._aligned(other)
        return a.residues <= b.residues

    def same_set(self, other: "PeriodicSet") -> bool:
        a, b, _ = self._aligned(other)
        return a.residues == b.residues

    def product(self, other: "PeriodicSet") -> "PeriodicSet":
        residues = {ra + rb for ra in self.residues for rb in other.residues}
        return PeriodicSet(self.dim + other.dim, self.moduli + other.moduli,
                           frozenset(residues)).canonicalize()

    def shift(self, vector) -> "PeriodicSet":
        v = tuple(int(x) for x in vector)
        if len(v) != self.dim:
            raise DimensionMismatch("shift vector dimension mismatch")
        shifted = {tuple((x + s) % m for x, s, m in zip(r, v, self.moduli))
                   for r in self.residues}
        return PeriodicSet(self.dim, self.moduli, frozenset(shifted)).canonicalize()

    def scale_axis(self, axis: int, factor: int) -> "PeriodicSet":
        """Replace lam_axis by factor*lam_axis for every member."""
        factor = int(factor)
        if factor < 1:
            raise ValueError("scale factor must be >= 1")
        moduli = list(self.moduli)
        moduli[axis] *= factor
        scaled = {r[:axis] + (r[axis] * factor,) + r[axis + 1:] for r in self.residues}
        return PeriodicSet(self.dim, tuple(moduli), frozenset(scaled)).canonicalize()

    # -- enumeration ----------------------------------------------------------

    def enumerate_box(self, bounds) -> "list[tuple[int, ...]]":
        """Sorted members within inclusive per-axis bounds.

        `bounds` is either a single (lo, hi) pair applied to every axis or a
        sequence of per-axis pairs.
        """
        if len(bounds) == 2 and all(isinstance(b, int) for b in bounds):
            bounds = [tuple(bounds)] * self.dim
        bounds = [tuple(int(x) for x in pair) for pair in bounds]
        if len(bounds) != self.dim:
            raise DimensionMismatch("bounds dimension mismatch")
        ranges = [range(lo, hi + 1) for lo, hi in bounds]
        return sorted(v for v in itertools.product(*ranges) if self.contains(v))
