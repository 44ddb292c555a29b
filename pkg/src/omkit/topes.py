"""Tope posets, convexity, and shellings of the covector sphere.

The reduced covector poset is the face poset of a regular cell
decomposition of a sphere, and every linear extension of a tope poset
orders its maximal cells as a shelling.  Convex tope sets are order
ideals of tope posets, which is what produces shellable balls and, later,
the matchings with prescribed critical subcomplexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .matroids import CovectorSystem
from .posets import FinitePoset
from .signs import SignVector


class NotATopeError(ValueError):
    pass


def _require_tope(system: CovectorSystem, t: SignVector) -> None:
    if t not in system.topes():
        raise NotATopeError(f"{t} is not a tope")


def dist(t: SignVector, r: SignVector) -> int:
    """Number of separating elements."""
    return bin(t.separator_mask(r)).count("1")


def halfspace(system: CovectorSystem, label: str, sign: int) -> frozenset[SignVector]:
    """Topes on the given side of one element."""
    if label not in system.ground:
        raise ValueError(f"unknown label {label!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    i = system.ground.index(label)
    mask_attr = "plus" if sign > 0 else "minus"
    return frozenset(
        t for t in system.topes() if getattr(t, mask_attr) >> i & 1
    )


class TopePoset:
    """Topes ordered by containment of separators from a base tope."""

    __slots__ = ("system", "base", "poset")

    def __init__(self, system: CovectorSystem, base: SignVector):
        _require_tope(system, base)
        topes = sorted(system.topes(), key=str)
        pairs = []
        for r in topes:
            sr = base.separator_mask(r)
            for t in topes:
                if r is not t and (sr & ~base.separator_mask(t)) == 0:
                    pairs.append((str(r), str(t)))
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "base", base)
        object.__setattr__(
            self, "poset", FinitePoset([str(t) for t in topes], pairs, _validated=True)
        )

    def __setattr__(self, name, value):
        raise AttributeError("TopePoset is immutable")

    def rank(self, t: SignVector) -> int:
        return dist(self.base, t)


def tope_poset(system: CovectorSystem, base: SignVector) -> TopePoset:
    return TopePoset(system, base)


# -- convexity ---------------------------------------------------------------


def convex_hull(system: CovectorSystem, q: Iterable[SignVector]) -> frozenset[SignVector]:
    """Intersection of all halfspaces containing the set."""
    qset = frozenset(q)
    topes = system.topes()
    for t in qset:
        _require_tope(system, t)
    if not qset:
        return frozenset()
    hull = set(topes)
    for i, lab in enumerate(system.ground):
        for attr in ("plus", "minus"):
            side = frozenset(t for t in topes if getattr(t, attr) >> i & 1)
            if qset <= side:
                hull &= side
    return frozenset(hull)


def _is_convex_betweenness(
    system: CovectorSystem, qset: frozenset[SignVector]
) -> bool:
    # T, R in Q and dist(T,W) + dist(W,R) = dist(T,R) forces W in Q
    topes = system.topes()
    qlist = sorted(qset, key=str)
    for t in qlist:
        for r in qlist:
            d = dist(t, r)
            for w in topes:
                if w in qset:
                    continue
                if dist(t, w) + dist(w, r) == d:
                    return False
    return True


def is_convex(system: CovectorSystem, q: Iterable[SignVector]) -> bool:
    """Convexity, computed both as a halfspace fixpoint and through the
    betweenness criterion; the two must agree."""
    qset = frozenset(q)
    via_hull = convex_hull(system, qset) == qset if qset else True
    via_between = _is_convex_betweenness(system, qset)
    if via_hull != via_between:
        raise AssertionError(
            f"convexity criteria disagree on {sorted(map(str, qset))}"
        )
    return via_hull


def all_convex_tope_sets(system: CovectorSystem) -> list[frozenset[SignVector]]:
    """All nonempty convex tope sets: every intersection of halfspaces."""
    topes = frozenset(system.topes())
    sides = []
    for i in range(len(system.ground)):
        sides.append(frozenset(t for t in topes if t.plus >> i & 1))
        sides.append(frozenset(t for t in topes if t.minus >> i & 1))
    out = {topes}
    frontier = [topes]
    while frontier:
        nxt = []
        for cur in frontier:
            for s in sides:
                cut = cur & s
                if cut and cut not in out:
                    out.add(cut)
                    nxt.append(cut)
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), sorted(map(str, s))))


def convex_first_extension(
    system: CovectorSystem, base: SignVector, q: Iterable[SignVector]
) -> list[SignVector]:
    """A linear extension of the tope poset at base with Q as a prefix.

    Q must be convex and contain the base; convexity makes Q an order
    ideal of the tope poset, so the ideal-first extension applies.
    """
    qset = frozenset(q)
    if base not in qset:
        raise ValueError("base tope must belong to Q")
    if not is_convex(system, qset):
        raise ValueError("Q is not convex")
    tp = TopePoset(system, base)
    ids = [str(t) for t in qset]
    if not tp.poset.is_ideal(ids):
        raise AssertionError("convex set is not an ideal of the tope poset")
    order = tp.poset.linear_extension_ideal_first(ids)
    by_text = {str(t): t for t in system.topes()}
    return [by_text[x] for x in order]


# -- subcomplexes of the covector sphere --------------------------------------


def subcomplex_LQ(
    system: CovectorSystem, q: Iterable[SignVector]
) -> frozenset[SignVector]:
    """All covectors below some tope of Q (an order ideal of the poset)."""
    qset = frozenset(q)
    for t in qset:
        _require_tope(system, t)
    return frozenset(
        c for c in system.covectors if any(c.leq(t) for t in qset)
    )


def dual_subcomplex(
    system: CovectorSystem, q: Iterable[SignVector]
) -> frozenset[SignVector]:
    """Covectors all of whose topes lie in Q (a subcomplex of the dual)."""
    qset = frozenset(q)
    for t in qset:
        _require_tope(system, t)
    topes = system.topes()
    out = frozenset(
        c
        for c in system.covectors
        if all(t in qset for t in topes if c.leq(t))
    )
    # the complementary description must agree
    complement = system.covectors - subcomplex_LQ(system, topes - qset)
    if out != complement:
        raise AssertionError("dual subcomplex identities disagree")
    return out


def sphere_poset(system: CovectorSystem) -> FinitePoset:
    """Face poset of the covector sphere (zero vector removed)."""
    return system.covector_poset(include_zero=False)


def ball_poset(system: CovectorSystem) -> FinitePoset:
    """Face poset of the dual covector ball (all covectors, order reversed)."""
    return system.covector_poset(include_zero=True, dual=True)


# -- shellings ---------------------------------------------------------------


@dataclass(frozen=True)
class ShellingOrder:
    """An ordering of the maximal cells of a pure regular complex."""

    cells: tuple[str, ...]


@dataclass(frozen=True)
class ShellingReport:
    ok: bool
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def shelling_order_from_extension(
    system: CovectorSystem,
    base: SignVector,
    prefix: Optional[Iterable[SignVector]] = None,
) -> ShellingOrder:
    """Order the sphere's maximal cells by a linear extension of the tope
    poset at base; optionally with a convex prefix first."""
    _require_tope(system, base)
    tp = TopePoset(system, base)
    ideal = [str(t) for t in (prefix if prefix is not None else [])] or [str(base)]
    order = tp.poset.linear_extension_ideal_first(ideal)
    return ShellingOrder(tuple(order))


def _complex_dims(complex_poset: FinitePoset) -> dict[str, int]:
    return complex_poset.heights()


def verify_shelling(
    complex_poset: FinitePoset,
    order: Sequence[str] | ShellingOrder,
    depth: int,
) -> ShellingReport:
    """Check the shelling conditions on a pure regular complex.

    Condition (i) is checked exactly for each cell in order; conditions
    (ii) and (iii) are checked recursively while depth > 0 (depth at least
    the complex dimension gives the full check).
    """
    cells = list(order.cells if isinstance(order, ShellingOrder) else order)
    dims = _complex_dims(complex_poset)
    maximal = complex_poset.maximal_elements()
    if set(cells) != set(maximal) or len(cells) != len(maximal):
        return ShellingReport(False, "order is not a permutation of the maximal cells")
    d = dims[cells[0]]
    if any(dims[c] != d for c in maximal):
        return ShellingReport(False, "complex is not pure")
    return _verify_shelling_inner(complex_poset, dims, cells, depth)


def _verify_shelling_inner(
    complex_poset: FinitePoset,
    dims: dict[str, int],
    cells: list[str],
    depth: int,
) -> ShellingReport:
    d = dims[cells[0]]
    if d == 0:
        return ShellingReport(True)
    boundaries = {
        c: frozenset(x for x in complex_poset.below(c) if x != c) for c in cells
    }
    union: set[str] = set()
    for j, c in enumerate(cells):
        if j > 0:
            inter = boundaries[c] & union
            bad = _purity_failure(complex_poset, inter, dims, d - 1)
            if bad is not None:
                return ShellingReport(False, f"condition (i) fails at position {j + 1}: {bad}")
            if depth > 0:
                sub = complex_poset.subposet(boundaries[c])
                prefix = frozenset(
                    x for x in inter if dims[x] == d - 1
                )
                if not _exists_shelling_with_prefix(sub, prefix, depth - 1):
                    return ShellingReport(
                        False,
                        f"condition (ii) fails at position {j + 1}: no shelling "
                        f"of the boundary starts with the shared facets",
                    )
        elif depth > 0:
            sub = complex_poset.subposet(boundaries[c])
            if not _exists_shelling_with_prefix(sub, frozenset(), depth - 1):
                return ShellingReport(False, "condition (iii) fails: first boundary not shellable")
        union |= boundaries[c]
    return ShellingReport(True)


def _purity_failure(
    complex_poset: FinitePoset,
    subset: frozenset[str],
    dims: dict[str, int],
    want: int,
) -> Optional[str]:
    """None when the subset is nonempty and pure of the wanted dimension."""
    if not subset:
        return "intersection is empty"
    maximal = [
        x for x in subset if len(complex_poset.above(x) & subset) == 1
    ]
    if all(dims[x] == want for x in maximal):
        return None
    off = next(x for x in maximal if dims[x] != want)
    return f"maximal cell {off} has dimension {dims[off]}, wanted {want}"


def _exists_shelling_with_prefix(
    complex_poset: FinitePoset, prefix: frozenset[str], depth: int
) -> bool:
    """Backtracking search for a shelling whose first cells are the given set."""
    dims = complex_poset.heights()
    maximal = sorted(complex_poset.maximal_elements())
    if not maximal:
        return not prefix
    d = dims[maximal[0]]
    if any(dims[c] != d for c in maximal):
        return False
    if d == 0:
        return True
    boundaries = {
        c: frozenset(x for x in complex_poset.below(c) if x != c) for c in maximal
    }

    def ok_step(c: str, union: set[str], first: bool) -> bool:
        if first:
            if depth > 0:
                sub = complex_poset.subposet(boundaries[c])
                return _exists_shelling_with_prefix(sub, frozenset(), depth - 1)
            return True
        inter = boundaries[c] & union
        if _purity_failure(complex_poset, inter, dims, d - 1) is not None:
            return False
        if depth > 0:
            sub = complex_poset.subposet(boundaries[c])
            pre = frozenset(x for x in inter if dims[x] == d - 1)
            return _exists_shelling_with_prefix(sub, pre, depth - 1)
        return True

    target = len(maximal)

    def search(chosen: list[str], union: set[str], pool: set[str]) -> bool:
        if len(chosen) == target:
            return True
        stage = [c for c in sorted(pool) if c in prefix] if len(chosen) < len(prefix) else sorted(pool)
        for c in stage:
            if ok_step(c, union, not chosen):
                chosen.append(c)
                pool.discard(c)
                if search(chosen, union | boundaries[c], pool):
                    return True
                pool.add(c)
                chosen.pop()
        return False

    return search([], set(), set(maximal))
