"""Integral homology over the order complex, plus the derived checks.

Homology is computed on the order complex of a face poset (the
barycentric model), so no cell orientations are ever needed.  Boundary
matrices are reduced by exact integer elimination: unit pivots first
(which keeps everything integral and sparse), then a textbook Smith
reduction of whatever small core remains, so torsion is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .lattices import GeometricLattice, build_lattice, flat_id
from .matroids import CovectorSystem
from .posets import FinitePoset, SimplicialComplexRecord
from .salvetti import SalvettiLocalization, salvetti, salvetti_localization


# -- exact Smith data ---------------------------------------------------------


def _unit_pivot_reduce(
    cols: dict[int, dict[int, int]]
) -> tuple[int, dict[int, dict[int, int]]]:
    """Eliminate +-1 pivots; returns (pivot count, remaining core)."""
    rows: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    import heapq

    heap = [
        (len(col) * len(rows[r]), c, r)
        for c, col in cols.items()
        for r, v in col.items()
        if v in (1, -1)
    ]
    heapq.heapify(heap)
    rank = 0
    while heap:
        _, c, r = heapq.heappop(heap)
        col = cols.get(c)
        if col is None or r not in col or col[r] not in (1, -1):
            continue
        piv = col[r]
        rank += 1
        pivot_col = dict(col)
        # clear the pivot column from the row index
        for rr in pivot_col:
            rows[rr].discard(c)
        del cols[c]
        touched = [cc for cc in rows.get(r, ()) if cc in cols]
        for cc in touched:
            other = cols[cc]
            factor = other[r] * piv  # other[r] / piv since piv is +-1
            for rr, v in pivot_col.items():
                cur = other.get(rr, 0) - factor * v
                if cur:
                    if rr not in other:
                        rows.setdefault(rr, set()).add(cc)
                    other[rr] = cur
                elif rr in other:
                    del other[rr]
                    rows[rr].discard(cc)
            if not other:
                del cols[cc]
            else:
                for rr, v in other.items():
                    if v in (1, -1):
                        heapq.heappush(
                            heap, (len(other) * len(rows.get(rr, ())), cc, rr)
                        )
        rows.pop(r, None)
    return rank, cols


def _dense_smith(core: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of a small dense integer matrix."""
    a = [row[:] for row in core]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    top = 0
    while top < m and top < n:
        # locate the smallest nonzero entry
        best = None
        for i in range(top, m):
            for j in range(top, n):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        a[top], a[bi] = a[bi], a[top]
        for row in a:
            row[top], row[bj] = row[bj], row[top]
        piv = a[top][top]
        dirty = False
        for i in range(top + 1, m):
            if a[i][top]:
                q = a[i][top] // piv
                a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                if a[i][top]:
                    dirty = True
        for j in range(top + 1, n):
            if a[top][j]:
                q = a[top][j] // piv
                for i in range(m):
                    a[i][j] -= q * a[i][top]
                if a[top][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility fix-up: pivot must divide the rest of the matrix
        offender = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if a[i][j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[top] = [x + y for x, y in zip(a[top], a[offender])]
            continue
        diag.append(abs(piv))
        top += 1
    return diag


def rank_and_torsion(
    cols: dict[int, dict[int, int]]
) -> tuple[int, tuple[int, ...]]:
    """Rank and the invariant factors > 1 of an integer matrix."""
    unit_rank, core = _unit_pivot_reduce(
        {c: dict(col) for c, col in cols.items() if col}
    )
    if not core:
        return unit_rank, ()
    row_ids = sorted({r for col in core.values() for r in col})
    rindex = {r: i for i, r in enumerate(row_ids)}
    dense = [[0] * len(core) for _ in row_ids]
    for j, c in enumerate(sorted(core)):
        for r, v in core[c].items():
            dense[rindex[r]][j] = v
    diag = _dense_smith(dense)
    torsion = tuple(d for d in diag if d > 1)
    return unit_rank + len(diag), torsion


# -- chain complexes and homology ----------------------------------------------


@dataclass(frozen=True)
class ChainComplexRecord:
    """Ordered simplex bases per dimension with integer boundary maps."""

    bases: tuple[tuple[tuple[str, ...], ...], ...]
    boundaries: tuple[dict[int, dict[int, int]], ...]  # boundaries[k]: C_k -> C_{k-1}


def chain_complex(complex_record: SimplicialComplexRecord) -> ChainComplexRecord:
    byd = complex_record.by_dimension()
    dim = max(byd, default=-1)
    vertex_order = {v: i for i, v in enumerate(complex_record.vertices)}
    bases: list[tuple[tuple[str, ...], ...]] = []
    for d in range(dim + 1):
        simplices = sorted(
            tuple(sorted(f, key=vertex_order.__getitem__)) for f in byd.get(d, [])
        )
        bases.append(tuple(simplices))
    index = [
        {s: i for i, s in enumerate(level)} for level in bases
    ]
    boundaries: list[dict[int, dict[int, int]]] = [{}]
    for d in range(1, dim + 1):
        mat: dict[int, dict[int, int]] = {}
        for j, simplex in enumerate(bases[d]):
            col: dict[int, int] = {}
            for k in range(len(simplex)):
                face = simplex[:k] + simplex[k + 1 :]
                col[index[d - 1][face]] = 1 if k % 2 == 0 else -1
            mat[j] = col
        boundaries.append(mat)
    rec = ChainComplexRecord(tuple(bases), tuple(boundaries))
    _check_boundary_squares(rec)
    return rec


def _check_boundary_squares(rec: ChainComplexRecord) -> None:
    for k in range(2, len(rec.boundaries)):
        outer = rec.boundaries[k]
        inner = rec.boundaries[k - 1]
        for j, col in outer.items():
            acc: dict[int, int] = {}
            for r, v in col.items():
                for rr, vv in inner.get(r, {}).items():
                    acc[rr] = acc.get(rr, 0) + v * vv
            if any(acc.values()):
                raise AssertionError(f"boundary square nonzero in dimension {k}")


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def is_torsion_free(self) -> bool:
        return all(not t for t in self.torsion)


def homology(
    target: Union[SimplicialComplexRecord, FinitePoset]
) -> HomologyResult:
    """Exact integral homology (Betti numbers and torsion coefficients)."""
    if isinstance(target, FinitePoset):
        target = target.order_complex()
    if not target.faces:
        return HomologyResult((), ())
    rec = chain_complex(target)
    dim = len(rec.bases) - 1
    sizes = [len(b) for b in rec.bases]
    ranks = [0] * (dim + 2)
    torsions: list[tuple[int, ...]] = [()] * (dim + 2)
    for k in range(1, dim + 1):
        ranks[k], torsions[k] = rank_and_torsion(rec.boundaries[k])
    betti = []
    tors = []
    for k in range(dim + 1):
        betti.append(sizes[k] - ranks[k] - ranks[k + 1])
        tors.append(torsions[k + 1])
    return HomologyResult(tuple(betti), tuple(tors))


def betti_numbers(target: Union[SimplicialComplexRecord, FinitePoset]) -> tuple[int, ...]:
    res = homology(target)
    betti = list(res.betti)
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return tuple(betti)


# -- graphs --------------------------------------------------------------------


@dataclass(frozen=True)
class GraphRankReport:
    connected: bool
    components: int
    vertices: int
    edges: int

    @property
    def free_rank(self) -> int:
        if not self.connected:
            raise ValueError(f"graph has {self.components} components")
        return self.edges - self.vertices + 1


def graph_free_rank(graph: FinitePoset) -> int:
    """Free rank (first Betti number) of a connected 1-dimensional complex."""
    report = graph_rank_report(graph)
    return report.free_rank


def graph_rank_report(graph: FinitePoset) -> GraphRankReport:
    heights = graph.heights()
    if any(h > 1 for h in heights.values()):
        raise ValueError("complex has cells of dimension above one")
    vertices = [x for x, h in heights.items() if h == 0]
    edges = [x for x, h in heights.items() if h == 1]
    parent = {v: v for v in vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        ends = [v for v in graph.below(e) if v != e]
        if len(ends) != 2:
            raise ValueError(f"edge {e!r} has {len(ends)} endpoints")
        a, b = (find(v) for v in ends)
        if a != b:
            parent[a] = b
    components = len({find(v) for v in vertices}) if vertices else 0
    return GraphRankReport(components == 1, components, len(vertices), len(edges))


# -- spec-level checks ----------------------------------------------------------


def salvetti_betti_match_whitney(system: CovectorSystem) -> tuple[bool, tuple, tuple]:
    """The global cross-oracle: Betti numbers of the Salvetti poset must
    equal the unsigned Whitney numbers."""
    lat = build_lattice(system)
    w = lat.whitney()
    res = homology(salvetti(system).poset)
    betti = list(res.betti)
    while len(betti) < len(w):
        betti.append(0)
    return tuple(betti[: len(w)]) == w and res.is_torsion_free(), tuple(betti), w


def h1_rank_check(system: CovectorSystem) -> bool:
    """First Betti number of the Salvetti poset equals the ground size."""
    if not system.is_simple():
        raise ValueError("check applies to simple systems")
    res = homology(salvetti(system).poset)
    b1 = res.betti[1] if len(res.betti) > 1 else 0
    return b1 == len(system.ground)


def semidirect_rank_sequence(system: CovectorSystem) -> tuple[int, ...]:
    """Generator counts of the iterated semidirect factorization, outer
    factor first, derived from a maximal chain of modular flats."""
    lat = build_lattice(system)
    mchain = lat.is_supersolvable()
    if mchain is None:
        raise ValueError("system is not supersolvable")
    flats = mchain.flats
    out = [
        len(flats[i + 1] - flats[i]) for i in range(len(flats) - 2, 0, -1)
    ]
    out.append(1)
    if sum(out) != len(system.ground):
        raise AssertionError("rank sequence does not add up to the ground size")
    return tuple(out)


# -- the quasi-fibration certificate --------------------------------------------


@dataclass(frozen=True)
class FiberEvidence:
    cell: str
    fiber_size: int
    betti: tuple[int, ...]
    torsion_free: bool


@dataclass(frozen=True)
class PairEvidence:
    lower: str
    upper: str
    ambient_tope: str
    inclusion_ok: bool
    lower_matching_ok: bool
    upper_matching_ok: bool
    homology_agrees: bool

    @property
    def ok(self) -> bool:
        return (
            self.inclusion_ok
            and self.lower_matching_ok
            and self.upper_matching_ok
            and self.homology_agrees
        )


@dataclass(frozen=True)
class QuasiFibrationCertificate:
    flat: frozenset[str]
    mode: str
    expected_rank: int
    fibers: tuple[FiberEvidence, ...]
    pairs: tuple[PairEvidence, ...]
    graph_rank_ok: bool

    @property
    def ok(self) -> bool:
        want = (1, self.expected_rank)
        return (
            self.graph_rank_ok
            and all(p.ok for p in self.pairs)
            and all(
                f.betti == want and f.torsion_free for f in self.fibers
            )
        )


def quasi_fibration_certify(
    system: CovectorSystem,
    flat: Iterable[str],
    mode: str = "exhaustive",
    sample: int = 24,
    lattice: Optional[GeometricLattice] = None,
    localization: Optional[SalvettiLocalization] = None,
) -> QuasiFibrationCertificate:
    """Certify that localization of the Salvetti poset at a modular
    corank-one flat behaves as a poset quasi-fibration, at desk scale.

    For every ordered pair a <= b of cells of the localized poset, both
    fiber inclusions into a common maximal-cell fiber carry acyclic
    matchings with the right critical sets; all fibers have the homology
    of a wedge of circles, one per element outside the flat.
    """
    from .morse import matching_salvetti_fiber, morse_reduction_certificate

    x = frozenset(flat)
    lat = lattice or build_lattice(system)
    if lat.rank_of.get(x) is None:
        raise ValueError(f"{flat_id(x, system.ground)} is not a flat")
    if lat.rank_of[x] != lat.rank() - 1:
        raise ValueError("flat must have corank one")
    if not lat.is_modular_flat(x).ok:
        raise ValueError("flat must be modular")
    loc = localization or salvetti_localization(system, x)
    expected = len(system.ground) - len(x)

    cells = sorted(loc.target.poset.elements)
    pairs_all = [
        (a, b)
        for b in cells
        for a in loc.target.poset.below(b)
    ]
    if mode == "sampled":
        import random

        rng = random.Random(0)
        pairs_all = rng.sample(pairs_all, min(sample, len(pairs_all)))
    elif mode != "exhaustive":
        raise ValueError("mode must be 'exhaustive' or 'sampled'")

    max_cells = sorted(loc.target.poset.maximal_elements())
    ambient_for: dict[str, str] = {}
    for b in cells:
        ambient_for[b] = next(m for m in max_cells if loc.target.poset.leq(b, m))

    needed = sorted({c for pair in pairs_all for c in pair})
    fiber_evidence: dict[str, FiberEvidence] = {}
    fiber_cells: dict[str, frozenset[str]] = {}
    for c in needed:
        fib = loc.fiber(c)
        fiber_cells[c] = frozenset(fib.elements)
        res = homology(fib)
        betti = list(res.betti)
        while len(betti) < 2:
            betti.append(0)
        fiber_evidence[c] = FiberEvidence(
            c, len(fib), tuple(betti[:2]), res.is_torsion_free()
        )

    matching_ok: dict[tuple[str, str], bool] = {}

    def matching_valid(cell: str, ambient: str) -> bool:
        key = (cell, ambient)
        if key not in matching_ok:
            bp = loc.target.by_id[ambient].tope
            m = matching_salvetti_fiber(loc, cell, bp, lat)
            cert = morse_reduction_certificate(
                m.host, loc.fiber(cell).elements, m
            )
            matching_ok[key] = cert.ok
        return matching_ok[key]

    pair_evidence = []
    for a, b in sorted(pairs_all):
        amb = ambient_for[b]
        ev = PairEvidence(
            a,
            b,
            amb,
            fiber_cells[a] <= fiber_cells[b],
            matching_valid(a, amb),
            matching_valid(b, amb),
            fiber_evidence[a].betti == fiber_evidence[b].betti
            and fiber_evidence[a].torsion_free
            and fiber_evidence[b].torsion_free,
        )
        pair_evidence.append(ev)

    # the minimal-cell fibers are graphs; their free rank is the fiber rank
    graph_ok = True
    for m in sorted(loc.target.poset.minimal_elements()):
        fib = loc.fiber(m)
        if graph_free_rank(fib) != expected:
            graph_ok = False

    return QuasiFibrationCertificate(
        x,
        mode,
        expected,
        tuple(fiber_evidence[c] for c in needed),
        tuple(pair_evidence),
        graph_ok,
    )
