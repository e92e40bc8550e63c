"""Recursive construction of integer frequency sets for rational box unions.

The pipeline turns a finite union of axis-parallel rational boxes inside the
unit cube into a periodic subset of Z^d of matching density, by combining:

  * single-interval bases (prefix residues at the length denominator),
  * first-axis folding with a minimal modulus that strictly reduces the
    cyclic component count of every folded piece,
  * products of nested chains for step-shaped unions, and
  * shared-modulus progression bases that keep whole families nested
    (region inclusion implies frequency-set inclusion).

Two 1-D strategies are kept and cross-validated: `direct` collapses at the
common denominator in one fold, `recursive` folds at the minimal modulus and
recurses.  Construction is pure and deterministic; identical inputs yield
identical outputs and traces.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import (CoherenceCapExceeded, DimensionMismatch, FoldCapExceeded,
                     NestingViolation)
from .freqset import PeriodicSet
from .geometry import (ONE, ZERO, IntervalUnion, Region, StepRegion, as_fraction,
                       fold_1d_region, step_decompose)

STRATEGY_DIRECT = "direct"
STRATEGY_RECURSIVE = "recursive"
_STRATEGY_ALIASES = {"paper": STRATEGY_RECURSIVE}


def normalize_strategy(strategy: str) -> str:
    strategy = _STRATEGY_ALIASES.get(strategy, strategy)
    if strategy not in (STRATEGY_DIRECT, STRATEGY_RECURSIVE):
        raise ValueError(f"unknown strategy {strategy!r}")
    return strategy


def _note(trace, node):
    if trace is not None:
        trace.append(node)
    return node


def _require_unit_ambient(x: IntervalUnion):
    if x.ambient != ONE:
        raise ValueError("construction operates on ambient-1 interval unions")


# ---------------------------------------------------------------------------
# 1-D building blocks
# ---------------------------------------------------------------------------

def base_interval_basis(length, modulus: int) -> PeriodicSet:
    """Prefix residues {0..m-1} mod `modulus` for an interval of the given
    length, where m = modulus * length; requires the length denominator to
    divide the modulus."""
    length = as_fraction(length)
    if not ZERO < length <= ONE:
        raise ValueError("interval length must lie in (0, 1]")
    modulus = int(modulus)
    if modulus < 1 or modulus % length.denominator != 0:
        raise ValueError(f"modulus {modulus} is not a multiple of {length.denominator}")
    m = int(modulus * length)
    return PeriodicSet.make((modulus,), {(r,) for r in range(m)})


def choose_fold_modulus(x: IntervalUnion, n_max: "int | None" = None) -> int:
    """Smallest modulus N >= 2 whose fold chain drops every piece below the
    cyclic component count of `x`.  The search is capped (default: ten times
    the common denominator, which always suffices for rational data)."""
    _require_unit_ambient(x)
    components = x.cyclic_component_count()
    if components < 2:
        raise ValueError("input must have at least two cyclic components")
    cap = int(n_max) if n_max is not None else 10 * x.common_denominator()
    if cap < 2:
        raise ValueError("modulus cap must be at least 2")
    for n in range(2, cap + 1):
        if all(piece.cyclic_component_count() <= components - 1 for piece in x.fold(n)):
            return n
    raise FoldCapExceeded(f"no modulus found under cap {cap}")


def _assemble(pieces: "list[PeriodicSet]", n_mod: int, offset: int) -> PeriodicSet:
    # piece k (0-based) lands in first-axis residue class k+offset mod n_mod
    dim = pieces[0].dim
    out = PeriodicSet.empty(dim)
    for k, piece in enumerate(pieces):
        out = out.union(piece.shift((k + offset,) + (0,) * (dim - 1)))
    return out


def _basis_1d(x: IntervalUnion, strategy: str, cap, trace) -> PeriodicSet:
    if x.is_empty:
        _note(trace, {"op": "empty"})
        return PeriodicSet.empty(1)
    if strategy == STRATEGY_DIRECT:
        q = x.common_denominator()
        m = x.measure * q
        if m.denominator != 1:
            raise AssertionError("direct collapse requires denominator-aligned input")
        _note(trace, {"op": "cell-collapse", "modulus": q, "prefix": int(m)})
        return PeriodicSet.make((q,), {(r,) for r in range(int(m))})
    if x.cyclic_component_count() <= 1:
        wraps = x.intervals[0][0] == ZERO and x.intervals[-1][1] == x.ambient
        anchor = x.intervals[-1][0] if wraps and len(x.intervals) > 1 else x.intervals[0][0]
        shift = (x.ambient - anchor) % x.ambient
        rotated = x.cyclic_rotate(shift)
        if rotated.intervals != ((ZERO, x.measure),):
            raise AssertionError("rotation did not produce a left-anchored interval")
        length = x.measure
        _note(trace, {"op": "interval", "length": str(length),
                      "rotation": str(shift), "modulus": length.denominator})
        return base_interval_basis(length, length.denominator)
    n_mod = choose_fold_modulus(x, cap)
    children: list = []
    pieces = []
    for part in x.fold(n_mod):
        sub = _basis_1d(part.scale(n_mod), strategy, cap, children)
        pieces.append(sub.scale_axis(0, n_mod))
    _note(trace, {"op": "fold", "n_mod": n_mod, "children": children})
    return _assemble(pieces, n_mod, offset=1)


def riesz_basis_1d(x: IntervalUnion, strategy: str = STRATEGY_RECURSIVE,
                   max_fold_modulus: "int | None" = None,
                   trace: "list | None" = None) -> PeriodicSet:
    """Frequency set of density measure(x) for a nonempty rational interval
    union in [0, 1]."""
    _require_unit_ambient(x)
    if x.is_empty:
        raise ValueError("input interval union is empty")
    return _basis_1d(x, normalize_strategy(strategy), max_fold_modulus, trace)


def sandwich_basis_1d(x: IntervalUnion, n_mod: int,
                      strategy: str = STRATEGY_RECURSIVE,
                      max_fold_modulus: "int | None" = None,
                      trace: "list | None" = None) -> PeriodicSet:
    """Fold at the given modulus and assemble 0-based: full pieces become full
    progressions, empty pieces nothing, the rest recurse.

    With m = floor(n_mod * measure) and L plain components, the result always
    contains the residues {0..m-2L-1} and stays within {0..m+2L} mod n_mod.
    """
    _require_unit_ambient(x)
    n_mod = int(n_mod)
    if n_mod < 1:
        raise ValueError("modulus must be >= 1")
    strategy = normalize_strategy(strategy)
    full_cell = (ZERO, Fraction(1, n_mod))
    pieces = []
    children: list = []
    n_full = n_empty = 0
    for part in x.fold(n_mod):
        if part.is_empty:
            pieces.append(PeriodicSet.empty(1))
            n_empty += 1
        elif part.intervals == (full_cell,):
            pieces.append(PeriodicSet.make((n_mod,), {(0,)}))
            n_full += 1
        else:
            sub = _basis_1d(part.scale(n_mod), strategy, max_fold_modulus, children)
            pieces.append(sub.scale_axis(0, n_mod))
    _note(trace, {"op": "progressions", "n_mod": n_mod,
                  "full": n_full, "empty": n_empty, "children": children})
    return _assemble(pieces, n_mod, offset=0)


# ---------------------------------------------------------------------------
# Families and chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoherentFamily:
    """Regions with their frequency sets and the recorded inclusion pairs.

    For every recorded pair (i, j), region i is contained in region j and the
    corresponding frequency sets are nested the same way; every frequency set
    has density equal to its region's measure.
    """

    entries: "tuple[tuple[Region, PeriodicSet], ...]"
    inclusions: "tuple[tuple[int, int], ...]"
    trace: "dict | None" = field(default=None, compare=False, repr=False)

    def region(self, i: int) -> Region:
        return self.entries[i][0]

    def basis(self, i: int) -> PeriodicSet:
        return self.entries[i][1]

    def validate(self):
        for i, (region, basis) in enumerate(self.entries):
            if basis.density != region.measure:
                raise AssertionError(
                    f"entry {i}: density {basis.density} != measure {region.measure}")
        for i, j in self.inclusions:
            if not self.entries[i][1].is_subset(self.entries[j][1]):
                raise AssertionError(f"inclusion ({i}, {j}) not reflected by the bases")


def _region_inclusions(regions: "list[Region]") -> "tuple[tuple[int, int], ...]":
    pairs = []
    for i, a in enumerate(regions):
        for j, b in enumerate(regions):
            if i != j and a.is_subset(b):
                pairs.append((i, j))
    return tuple(pairs)


def coherent_bases_1d(family, strategy: str = STRATEGY_RECURSIVE,
                      max_fold_modulus: "int | None" = None,
                      max_shared_modulus: "int | None" = None,
                      trace: "list | None" = None) -> CoherentFamily:
    """Nested frequency sets for a family of interval unions, built at one
    shared modulus and enlarged until every inclusion is reflected."""
    family = list(family)
    for x in family:
        _require_unit_ambient(x)
    strategy = normalize_strategy(strategy)
    regions = [x.to_region() for x in family]
    inclusions = _region_inclusions(regions)
    step = lcm(1, *(x.common_denominator() for x in family))
    cap = int(max_shared_modulus) if max_shared_modulus is not None else 256 * step
    n_mod = step
    violation = None
    while n_mod <= cap:
        children: list = []
        bases = [sandwich_basis_1d(x, n_mod, strategy, max_fold_modulus, children)
                 for x in family]
        violation = next(((i, j) for i, j in inclusions
                          if not bases[i].is_subset(bases[j])), None)
        if violation is None:
            node = _note(trace, {"op": "shared-modulus", "n_mod": n_mod,
                                 "children": children})
            out = CoherentFamily(tuple(zip(regions, bases)), inclusions, node)
            out.validate()
            return out
        n_mod += step
    raise CoherenceCapExceeded(
        f"incoherent family under cap {cap}; violating pair {violation}")


def combine_product(xs, ys) -> PeriodicSet:
    """Union over n of front-chain x rear-chain products.

    The front frequency sets must increase and the rear ones decrease along
    the chains; the result has density sum(front_n * (rear_n - rear_n+1)).
    """
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys) or not xs:
        raise ValueError("chains must be nonempty and equally long")
    for n in range(len(xs) - 1):
        if not xs[n][1].is_subset(xs[n + 1][1]):
            raise NestingViolation(f"front chain not increasing at index {n}")
        if not ys[n + 1][1].is_subset(ys[n][1]):
            raise NestingViolation(f"rear chain not decreasing at index {n}")
    out = PeriodicSet.empty(xs[0][1].dim + ys[0][1].dim)
    for (_, front), (_, rear) in zip(xs, ys):
        out = out.union(front.product(rear))
    return out


def fold_assemble(chains, n_mod: int) -> PeriodicSet:
    """Shift the n-th chain set into first-axis residue class n mod n_mod and
    take the union; pieces must live on multiples of n_mod along axis 0, so
    the shifted pieces are pairwise disjoint."""
    chains = list(chains)
    n_mod = int(n_mod)
    if len(chains) != n_mod:
        raise ValueError(f"expected {n_mod} chain entries, got {len(chains)}")
    dim = chains[0][1].dim
    axis0 = PeriodicSet.make((n_mod,) + (1,) * (dim - 1), {(0,) * dim})
    for n, (_, piece) in enumerate(chains, start=1):
        if not piece.is_empty and not piece.is_subset(axis0):
            raise ValueError(f"piece {n}: first-axis modulus not divisible by {n_mod}")
    return _assemble([piece for _, piece in chains], n_mod, offset=1)


# ---------------------------------------------------------------------------
# Full recursion over the dimension
# ---------------------------------------------------------------------------

def _step_products(family, step: StepRegion, strategy, max_fold_modulus, trace):
    # every fiber is empty or a single cyclic interval: sort fibers by length,
    # pair nested interval bases with bases of the matching rear suffix unions
    dim = family[0].dim
    lengths = sorted({fiber.measure for row in step.fibers for fiber in row
                      if not fiber.is_empty})
    lam_by_length = {}
    lam_trace: list = []
    if lengths:
        lam_family = coherent_bases_1d(
            [IntervalUnion.from_pairs([(ZERO, length)]) for length in lengths],
            strategy, max_fold_modulus, trace=lam_trace)
        lam_by_length = dict(zip(lengths, (lam_family.basis(i) for i in range(len(lengths)))))
    orders = []
    suffixes: list[frozenset] = []
    for row in step.fibers:
        present = [j for j, fiber in enumerate(row) if not fiber.is_empty]
        present.sort(key=lambda j: (row[j].measure, j))
        orders.append(present)
        for k in range(len(present)):
            suffix = frozenset(present[k:])
            if suffix not in suffixes:
                suffixes.append(suffix)
    psi_by_suffix = {}
    psi_trace: list = []
    if suffixes:
        psi_family = coherent_bases_d(
            [step.atoms_region(sorted(suffix)) for suffix in suffixes],
            strategy, max_fold_modulus, trace=psi_trace)
        psi_by_suffix = dict(zip(suffixes, (psi_family.basis(i) for i in range(len(suffixes)))))
    bases = []
    for row, present in zip(step.fibers, orders):
        if not present:
            bases.append(PeriodicSet.empty(dim))
            continue
        fronts = [(Region.from_boxes(1, [((ZERO, row[j].measure),)]),
                   lam_by_length[row[j].measure]) for j in present]
        rears = [(step.atoms_region(sorted(frozenset(present[k:]))),
                  psi_by_suffix[frozenset(present[k:])]) for k in range(len(present))]
        bases.append(combine_product(fronts, rears))
    _note(trace, {"op": "step-products", "orders": orders,
                  "lengths": [str(length) for length in lengths],
                  "front": lam_trace, "rear": psi_trace})
    return bases


def _step_fold(family, step: StepRegion, counts, strategy, max_fold_modulus, trace):
    pivot = next((i, j) for i, row in enumerate(counts)
                 for j, c in enumerate(row) if c >= 2)
    n_mod = choose_fold_modulus(step.fibers[pivot[0]][pivot[1]], max_fold_modulus)
    folded = [fold_1d_region(region, n_mod) for region in family]
    sub_regions: list[Region] = []
    index_of: dict[Region, int] = {}
    for chain in folded:
        for part in chain:
            stretched = part.stretch_axis(0, n_mod)
            if not stretched.is_empty and stretched not in index_of:
                index_of[stretched] = len(sub_regions)
                sub_regions.append(stretched)
    sub_trace: list = []
    sub_family = coherent_bases_d(sub_regions, strategy, max_fold_modulus,
                                  trace=sub_trace) if sub_regions else None
    dim = family[0].dim
    bases = []
    for chain in folded:
        pieces = []
        for part in chain:
            stretched = part.stretch_axis(0, n_mod)
            if stretched.is_empty:
                pieces.append((part, PeriodicSet.empty(dim)))
            else:
                basis = sub_family.basis(index_of[stretched]).scale_axis(0, n_mod)
                pieces.append((part, basis))
        bases.append(fold_assemble(pieces, n_mod))
    _note(trace, {"op": "fold-axis", "pivot": list(pivot), "n_mod": n_mod,
                  "component_counts": counts, "children": sub_trace})
    return bases


def coherent_bases_d(family, strategy: str = STRATEGY_RECURSIVE,
                     max_fold_modulus: "int | None" = None,
                     trace: "list | None" = None) -> CoherentFamily:
    """Nested frequency sets for a family of rational box unions of any one
    dimension: region inclusion implies frequency-set inclusion, and every
    density matches the region measure exactly."""
    family = list(family)
    if not family:
        raise ValueError("family must not be empty")
    dim = family[0].dim
    if any(region.dim != dim for region in family):
        raise DimensionMismatch("family members have mixed dimensions")
    strategy = normalize_strategy(strategy)
    if dim == 1:
        return coherent_bases_1d([region.to_interval_union() for region in family],
                                 strategy, max_fold_modulus, trace=trace)
    step = step_decompose(family)
    counts = [[fiber.cyclic_component_count() for fiber in row] for row in step.fibers]
    if all(c <= 1 for row in counts for c in row):
        bases = _step_products(family, step, strategy, max_fold_modulus, trace)
    else:
        bases = _step_fold(family, step, counts, strategy, max_fold_modulus, trace)
    out = CoherentFamily(tuple(zip(family, bases)), _region_inclusions(family),
                         trace[-1] if trace else None)
    out.validate()
    return out


def riesz_basis_d(x: Region, strategy: str = STRATEGY_RECURSIVE,
                  max_fold_modulus: "int | None" = None,
                  trace: "list | None" = None) -> PeriodicSet:
    """Frequency set of density measure(x) for a rational box union in the
    unit cube."""
    if x.dim == 1:
        return riesz_basis_1d(x.to_interval_union(), strategy, max_fold_modulus, trace)
    return coherent_bases_d([x], strategy, max_fold_modulus, trace).basis(0)
