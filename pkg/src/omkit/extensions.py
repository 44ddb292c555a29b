"""Single-element extensions of low-rank covector systems.

An extension is searched as a sign assignment on cocircuit pairs.  The
search is depth-first with constraint propagation: the restriction of a
partial assignment to the cocircuits through each corank-two flat must
stay compatible with some placement of the new element on the circle
model of that rank-two contraction.  At a leaf the candidate system is
constructed outright (extended cocircuits, plus the crossing cocircuits
supported on the new element, then composition closure) and the covector
axioms are the final arbiter.  Nothing is emitted unverified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .lattices import GeometricLattice, build_lattice, flat_id
from .matroids import CovectorSystem
from .signs import SignVector, compose_masks


class ExtensionError(ValueError):
    pass


class LeviSearchError(RuntimeError):
    """The constrained search found no extension; with the hypotheses of
    the enlargement lemma satisfied this indicates a defect, so it is
    raised loudly instead of returning an empty result."""


@dataclass(frozen=True)
class ExtensionSignature:
    """Signs on cocircuit pair representatives, extended antisymmetrically."""

    system: CovectorSystem
    values: dict[str, int]  # representative text -> -1, 0, +1

    def value(self, cocircuit: SignVector) -> int:
        text = str(cocircuit)
        if text in self.values:
            return self.values[text]
        opp = str(cocircuit.opposite())
        if opp in self.values:
            return -self.values[opp]
        raise KeyError(f"{text} is not a known cocircuit")


@dataclass(frozen=True)
class ExtensionResult:
    base: CovectorSystem
    extended: CovectorSystem
    new_element: str
    signature: ExtensionSignature
    flat_lift: dict[frozenset[str], frozenset[str]]


@dataclass(frozen=True)
class ExtensionConstraints:
    zero_flats: frozenset[frozenset[str]] = frozenset()
    nonzero_flats: frozenset[frozenset[str]] = frozenset()


class _SearchSpace:
    """Shared data for the extension search on one system."""

    def __init__(self, system: CovectorSystem, lattice: Optional[GeometricLattice]):
        if not system.is_simple():
            raise ExtensionError("extension search needs a simple system")
        self.system = system
        self.lattice = lattice or build_lattice(system)
        self.rank = self.lattice.rank()
        if self.rank not in (2, 3):
            raise ExtensionError("extension search supports rank 2 and 3 only")
        cocircs = sorted(system.cocircuits(), key=str)
        self.pair_rep: dict[frozenset[str], SignVector] = {}
        for y in cocircs:
            z = y.zero_set()
            if z not in self.pair_rep:
                self.pair_rep[z] = y
        self.coatoms = sorted(self.pair_rep, key=lambda f: flat_id(f, system.ground))
        self.colines = sorted(
            self.lattice.flats_of_rank(self.rank - 2),
            key=lambda f: flat_id(f, system.ground),
        )
        self.coline_data = [self._coline_candidates(a) for a in self.colines]
        self.var_order = self.coatoms
        # one-dimensional cells with their two boundary cocircuits, for the
        # crossing-cocircuit rule; computed once per search
        edge_rank = self.rank - 2
        cocircs = sorted(system.cocircuits(), key=str)
        self.edge_cells: list[tuple[SignVector, SignVector, SignVector]] = []
        for f in sorted(system.covectors, key=str):
            if self.lattice.rank_of.get(f.zero_set()) != edge_rank:
                continue
            below = [y for y in cocircs if y.leq(f)]
            if len(below) != 2:
                raise ExtensionError(f"cell {f} has {len(below)} vertices")
            self.edge_cells.append((f, below[0], below[1]))

    # -- rank-two contractions as cycles ----------------------------------

    def _cocircuit_cycle(self, contraction: CovectorSystem) -> list[SignVector]:
        cocircs = sorted(contraction.cocircuits(), key=str)
        topes = sorted(contraction.topes(), key=str)
        below: dict[str, list[SignVector]] = {str(t): [] for t in topes}
        for y in cocircs:
            for t in topes:
                if y.leq(t):
                    below[str(t)].append(y)
        for t, ys in below.items():
            if len(ys) != 2:
                raise ExtensionError(
                    f"tope {t} of a rank-two contraction has {len(ys)} vertices"
                )
        adj: dict[str, list[SignVector]] = {str(y): [] for y in cocircs}
        for t in topes:
            a, b = below[str(t)]
            adj[str(a)].append(b)
            adj[str(b)].append(a)
        start = cocircs[0]
        cycle = [start]
        prev: Optional[SignVector] = None
        while True:
            nxts = [y for y in adj[str(cycle[-1])] if prev is None or y != prev]
            if not nxts:
                raise ExtensionError("cocircuit adjacency walk dead-ends")
            nxt = nxts[0]
            if nxt == start:
                break
            prev = cycle[-1]
            cycle.append(nxt)
        if len(cycle) != len(cocircs):
            raise ExtensionError("cocircuit adjacency is not a single cycle")
        m = len(cycle) // 2
        for i in range(m):
            if cycle[i + m] != cycle[i].opposite():
                raise ExtensionError("cocircuit cycle is not antipodally symmetric")
        return cycle

    def _coline_candidates(self, coline: frozenset[str]) -> tuple[list[frozenset[str]], list[dict[frozenset[str], int]]]:
        """All placements of the new element on one rank-two contraction.

        Returns the coatom flats through the coline and the complete list
        of admissible sign assignments restricted to them.
        """
        system = self.system
        contraction = system.contraction(coline)
        cycle = self._cocircuit_cycle(contraction)
        n2 = len(cycle)
        m = n2 // 2
        rest = [lab for lab in system.ground if lab not in coline]
        flats_here = [x for x in self.coatoms if coline <= x]
        # identify each cycle position with a coatom flat and a relative sign
        pos_flat: list[tuple[frozenset[str], int]] = []
        restricted = {x: self.pair_rep[x].restrict(rest) for x in flats_here}
        for y in cycle:
            hit = None
            for x in flats_here:
                if y == restricted[x]:
                    hit = (x, 1)
                    break
                if y == restricted[x].opposite():
                    hit = (x, -1)
                    break
            if hit is None:
                raise ExtensionError("cycle vertex does not match any coatom")
            pos_flat.append(hit)

        candidates: set[tuple[tuple[str, int], ...]] = set()

        def freeze(vals: dict[frozenset[str], int]) -> tuple[tuple[str, int], ...]:
            return tuple(
                (flat_id(x, system.ground), vals[x]) for x in flats_here
            )

        def signed_assignment(signs_by_pos: list[int]) -> dict[frozenset[str], int]:
            vals: dict[frozenset[str], int] = {}
            for pos, s in enumerate(signs_by_pos):
                x, rel = pos_flat[pos]
                v = s * rel
                if x in vals:
                    if vals[x] != v:
                        raise AssertionError("inconsistent candidate signs")
                else:
                    vals[x] = v
            return vals

        stored: list[dict[frozenset[str], int]] = []

        def add(vals: dict[frozenset[str], int]) -> None:
            key = freeze(vals)
            if key not in candidates:
                candidates.add(key)
                stored.append(vals)

        # the new element through an existing vertex, both orientations
        for j in range(n2):
            for orient in (1, -1):
                signs = [0] * n2
                for k in range(1, m):
                    signs[(j + k) % n2] = orient
                for k in range(m + 1, n2):
                    signs[(j + k) % n2] = -orient
                add(signed_assignment(signs))
        # the new element inside an arc, both orientations
        for j in range(n2):
            for orient in (1, -1):
                signs = [0] * n2
                for k in range(1, m + 1):
                    signs[(j + k) % n2] = orient
                for k in range(m + 1, n2 + 1):
                    signs[(j + k) % n2] = -orient
                add(signed_assignment(signs))
        return flats_here, stored


def _closure_from_cocircuits(
    ground: tuple[str, ...], cocircuit_masks: set[tuple[int, int]]
) -> set[tuple[int, int]]:
    """Composition closure of the cocircuits together with the zero vector."""
    closed: set[tuple[int, int]] = {(0, 0)} | set(cocircuit_masks)
    frontier = list(closed)
    composers = list(cocircuit_masks)
    while frontier:
        new: list[tuple[int, int]] = []
        for p1, m1 in frontier:
            for p2, m2 in composers:
                q = compose_masks(p1, m1, p2, m2)
                if q not in closed:
                    closed.add(q)
                    new.append(q)
        frontier = new
    return closed


def _build_extension(
    space: _SearchSpace,
    values: dict[frozenset[str], int],
    new_label: str,
) -> Optional[ExtensionResult]:
    """Construct the candidate system for a full signature and verify it."""
    system = space.system
    ground = system.ground + (new_label,)
    gbit = 1 << len(system.ground)
    signature = ExtensionSignature(
        system,
        {str(space.pair_rep[x]): v for x, v in values.items()},
    )

    def signed_value(y: SignVector) -> int:
        return signature.value(y)

    cocirc_masks: set[tuple[int, int]] = set()
    for x in space.coatoms:
        for y in (space.pair_rep[x], space.pair_rep[x].opposite()):
            v = signed_value(y)
            plus = y.plus | (gbit if v > 0 else 0)
            minus = y.minus | (gbit if v < 0 else 0)
            cocirc_masks.add((plus, minus))
    # crossing cocircuits: one-dimensional cells (zero set of corank two)
    # whose two vertices land on opposite sides of the new element
    for f, y1, y2 in space.edge_cells:
        v1, v2 = signed_value(y1), signed_value(y2)
        if v1 and v2 and v1 == -v2:
            cocirc_masks.add((f.plus, f.minus))
    closure = _closure_from_cocircuits(ground, cocirc_masks)
    covectors = {SignVector(ground, p, m) for p, m in closure}
    candidate = CovectorSystem(ground, covectors)

    # cheap rejections first, then the axioms as the single source of truth
    restricted = {c.restrict(system.ground) for c in candidate.covectors}
    if restricted != system.covectors:
        return None
    if not candidate.is_simple():
        return None
    if not candidate.check_axioms().ok:
        return None
    if candidate.rank() != space.rank:
        return None

    new_lat = build_lattice(candidate)
    lift: dict[frozenset[str], frozenset[str]] = {}
    for fl in space.lattice.flats:
        lift[fl] = min((g for g in new_lat.flats if fl <= g), key=len)
    return ExtensionResult(system, candidate, new_label, signature, lift)


def single_element_extensions(
    system: CovectorSystem,
    constraints: Optional[ExtensionConstraints] = None,
    new_label: str = "g",
    lattice: Optional[GeometricLattice] = None,
) -> Iterator[ExtensionResult]:
    """Stream the simple single-element extensions compatible with the
    constraints, in lexicographic signature order."""
    space = _SearchSpace(system, lattice)
    constraints = constraints or ExtensionConstraints()
    for f in constraints.zero_flats | constraints.nonzero_flats:
        if f not in space.pair_rep:
            raise ExtensionError(
                f"{flat_id(f, system.ground)} is not a coatom flat"
            )
    if new_label in system.ground:
        raise ExtensionError(f"label {new_label!r} already used")

    domains: dict[frozenset[str], tuple[int, ...]] = {}
    for x in space.coatoms:
        if x in constraints.zero_flats:
            domains[x] = (0,)
        elif x in constraints.nonzero_flats:
            domains[x] = (1, -1)
        else:
            domains[x] = (1, -1, 0)

    # per-coline active candidate tracking
    coline_of_flat: dict[frozenset[str], list[int]] = {x: [] for x in space.coatoms}
    for ci, (flats_here, _cands) in enumerate(space.coline_data):
        for x in flats_here:
            coline_of_flat[x].append(ci)
    active: list[list[dict[frozenset[str], int]]] = []
    for ci, (flats_here, cands) in enumerate(space.coline_data):
        keep = [
            c
            for c in cands
            if any(c[x] for x in flats_here)  # drop the parallel placements
        ]
        active.append(keep)

    assignment: dict[frozenset[str], int] = {}
    order = space.var_order

    def compatible(ci: int) -> list[dict[frozenset[str], int]]:
        flats_here, _ = space.coline_data[ci]
        out = []
        for cand in active[ci]:
            if all(
                x not in assignment or assignment[x] == cand[x]
                for x in flats_here
            ):
                out.append(cand)
        return out

    def dfs(i: int) -> Iterator[ExtensionResult]:
        if i == len(order):
            result = _build_extension(space, dict(assignment), new_label)
            if result is not None:
                yield result
            return
        x = order[i]
        for v in domains[x]:
            assignment[x] = v
            ok = True
            saved: list[tuple[int, list]] = []
            for ci in coline_of_flat[x]:
                remaining = compatible(ci)
                saved.append((ci, active[ci]))
                active[ci] = remaining
                if not remaining:
                    ok = False
                    break
            if ok:
                yield from dfs(i + 1)
            for ci, prev in saved:
                active[ci] = prev
            del assignment[x]

    yield from dfs(0)


def levi_enlargement(
    system: CovectorSystem,
    flat1: Iterable[str],
    flat2: Iterable[str],
    generic: bool = False,
    new_label: str = "g",
    lattice: Optional[GeometricLattice] = None,
) -> ExtensionResult:
    """Extend a rank-three system by one element through two disjoint
    rank-two flats.

    With generic=True the new element is additionally kept off every
    other rank-two flat.  Exhausting the search without a find is raised
    as a hard diagnostic: under the stated hypotheses an enlargement
    always exists, so an empty search points at this implementation (or,
    for the generic variant, at search-order incompleteness).
    """
    lat = lattice or build_lattice(system)
    if lat.rank() != 3:
        raise ExtensionError("enlargement applies to rank-three systems")
    x1, x2 = frozenset(flat1), frozenset(flat2)
    for x in (x1, x2):
        if x not in lat.rank_of or lat.rank_of[x] != 2:
            raise ExtensionError(f"{flat_id(x, system.ground)} is not a rank-two flat")
    if x1 == x2:
        raise ExtensionError("the two flats must be distinct")
    if x1 & x2:
        raise ExtensionError("the two flats must be disjoint")
    zero = frozenset({x1, x2})
    nonzero: frozenset[frozenset[str]] = frozenset()
    if generic:
        nonzero = frozenset(
            f for f in lat.flats_of_rank(2) if f not in zero
        )
    constraints = ExtensionConstraints(zero, nonzero)
    for result in single_element_extensions(
        system, constraints, new_label, lattice=lat
    ):
        lifted1 = result.flat_lift[x1]
        lifted2 = result.flat_lift[x2]
        if new_label not in lifted1 or new_label not in lifted2:
            continue
        if generic:
            others = [
                f
                for f in lat.flats_of_rank(2)
                if f not in (x1, x2) and new_label in result.flat_lift[f]
            ]
            if others:
                continue
        return result
    raise LeviSearchError(
        f"no enlargement through {flat_id(x1, system.ground)} and "
        f"{flat_id(x2, system.ground)} found"
        + ("; the generic search is inconclusive" if generic else "")
    )


@dataclass(frozen=True)
class LeviStep:
    pivot: frozenset[str]
    through: frozenset[str]
    new_element: str
    disjoint_before: int
    disjoint_after: int
    result: ExtensionResult


@dataclass(frozen=True)
class SupersolvableExtension:
    steps: tuple[LeviStep, ...]
    final: CovectorSystem
    chain: tuple[frozenset[str], ...]


def _disjoint_rank2(lat: GeometricLattice, pivot: frozenset[str]) -> list[frozenset[str]]:
    return [f for f in lat.flats_of_rank(2) if not (f & pivot)]


def supersolvable_extension(
    system: CovectorSystem, new_labels: Optional[Iterator[str]] = None
) -> SupersolvableExtension:
    """Iterate enlargements until some rank-two flat meets all others.

    The pivot is the rank-two flat with the fewest disjoint rank-two
    flats (ties lexicographic) and is lifted along every step; the count
    of flats disjoint from it must drop strictly each time.
    """
    lat = build_lattice(system)
    if lat.rank() != 3:
        raise ExtensionError("supersolvable extension applies to rank three")
    if not system.is_simple():
        raise ExtensionError("input must be simple")
    mchain = lat.is_supersolvable()
    if mchain is not None:
        return SupersolvableExtension((), system, mchain.flats)

    def fresh_labels() -> Iterator[str]:
        i = 1
        while True:
            lab = f"g{i}"
            yield lab
            i += 1

    labels = new_labels or fresh_labels()
    pivot = min(
        lat.flats_of_rank(2),
        key=lambda f: (len(_disjoint_rank2(lat, f)), flat_id(f, system.ground)),
    )
    current = system
    steps: list[LeviStep] = []
    while True:
        disjoint = sorted(
            _disjoint_rank2(lat, pivot),
            key=lambda f: flat_id(f, current.ground),
        )
        if not disjoint:
            break
        through = disjoint[0]
        label = next(lab for lab in labels if lab not in current.ground)
        result = levi_enlargement(
            current, pivot, through, generic=False, new_label=label, lattice=lat
        )
        new_pivot = result.flat_lift[pivot]
        new_lat = build_lattice(result.extended)
        after = len(_disjoint_rank2(new_lat, new_pivot))
        if after >= len(disjoint):
            raise LeviSearchError(
                f"disjoint-flat count failed to decrease at {label}: "
                f"{len(disjoint)} -> {after}"
            )
        steps.append(
            LeviStep(pivot, through, label, len(disjoint), after, result)
        )
        current = result.extended
        lat = new_lat
        pivot = new_pivot
    mchain = lat.is_supersolvable()
    if mchain is None:
        raise LeviSearchError("pivot meets every rank-two flat but no chain found")
    return SupersolvableExtension(tuple(steps), current, mchain.flats)
