"""Covector systems: axiom checking, standard constructions, realizable input.

A covector system is a finite set of sign vectors over an ordered ground
set.  The four covector axioms are checked exhaustively and on failure a
concrete witness is reported; failures are data here, not exceptions,
because the extension search uses the axiom check as its validity arbiter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .posets import FinitePoset, PosetMap
from .signs import SignVector, compose_masks, separator_masks


class NotAFlatError(ValueError):
    pass


class DegenerateArrangementError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomCheck:
    passed: bool
    witness: Optional[str] = None


@dataclass(frozen=True)
class AxiomReport:
    """Result of checking the four covector axioms."""

    zero_vector: AxiomCheck
    opposites: AxiomCheck
    composition: AxiomCheck
    elimination: AxiomCheck

    @property
    def ok(self) -> bool:
        return (
            self.zero_vector.passed
            and self.opposites.passed
            and self.composition.passed
            and self.elimination.passed
        )

    def items(self):
        return [
            ("axiom1.zero_vector", self.zero_vector),
            ("axiom2.opposites", self.opposites),
            ("axiom3.composition", self.composition),
            ("axiom4.elimination", self.elimination),
        ]


@dataclass(frozen=True)
class SimplifyResult:
    system: "CovectorSystem"
    representative: dict[str, str]  # surviving label for each non-loop label
    loops: tuple[str, ...]


class CovectorSystem:
    """An oriented matroid presented by its set of covectors."""

    __slots__ = (
        "ground",
        "covectors",
        "_mask_set",
        "_topes",
        "_rank",
        "_by_text",
        "_cocircuits",
    )

    def __init__(self, ground: Iterable[str], covectors: Iterable[SignVector]):
        ground = tuple(ground)
        covs = frozenset(covectors)
        for c in covs:
            if c.labels != ground:
                raise ValueError(
                    f"covector over {c.labels} does not match ground set {ground}"
                )
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "covectors", covs)
        object.__setattr__(
            self, "_mask_set", frozenset((c.plus, c.minus) for c in covs)
        )
        object.__setattr__(self, "_topes", None)
        object.__setattr__(self, "_rank", None)
        object.__setattr__(self, "_by_text", None)
        object.__setattr__(self, "_cocircuits", None)

    def __setattr__(self, name, value):
        raise AttributeError("CovectorSystem is immutable")

    @classmethod
    def from_strings(cls, ground: Iterable[str], rows: Iterable[str]) -> "CovectorSystem":
        ground = tuple(ground)
        return cls(ground, (SignVector.from_string(r, ground) for r in rows))

    # -- basics ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.covectors)

    def __contains__(self, v: SignVector) -> bool:
        return (v.plus, v.minus) in self._mask_set and v.labels == self.ground

    @property
    def zero(self) -> SignVector:
        return SignVector.zero(self.ground)

    def vector(self, text: str) -> SignVector:
        return SignVector.from_string(text, self.ground)

    def by_text(self) -> dict[str, SignVector]:
        if self._by_text is None:
            object.__setattr__(self, "_by_text", {str(c): c for c in self.covectors})
        return self._by_text

    def label_mask(self, labels: Iterable[str]) -> int:
        idx = {lab: i for i, lab in enumerate(self.ground)}
        mask = 0
        for lab in labels:
            if lab not in idx:
                raise ValueError(f"unknown label {lab!r}")
            mask |= 1 << idx[lab]
        return mask

    def topes(self) -> frozenset[SignVector]:
        """The maximal covectors."""
        if self._topes is None:
            covs = sorted(self.covectors, key=lambda c: str(c))
            tops = []
            for c in covs:
                if not any(c is not d and c.leq(d) for d in self.covectors):
                    tops.append(c)
            object.__setattr__(self, "_topes", frozenset(tops))
        return self._topes

    def rank(self) -> int:
        """Length of a maximal chain in the covector poset."""
        if self._rank is None:
            order = sorted(
                self.covectors, key=lambda c: bin(c.support_mask).count("1")
            )
            best: dict[SignVector, int] = {}
            for c in order:
                best[c] = max(
                    (best[d] + 1 for d in best if d is not c and d.leq(c)),
                    default=0,
                )
            object.__setattr__(self, "_rank", max(best.values(), default=0))
        return self._rank

    def loops(self) -> tuple[str, ...]:
        full = (1 << len(self.ground)) - 1
        support = 0
        for c in self.covectors:
            support |= c.support_mask
        zero_bits = full & ~support
        return tuple(
            lab for i, lab in enumerate(self.ground) if zero_bits >> i & 1
        )

    def is_simple(self) -> bool:
        """No loops, no two elements vanishing on the same covectors."""
        if self.loops():
            return False
        seen: set[frozenset] = set()
        for i, _lab in enumerate(self.ground):
            z = frozenset(
                (c.plus, c.minus)
                for c in self.covectors
                if not (c.support_mask >> i & 1)
            )
            if z in seen:
                return False
            seen.add(z)
        return True

    # -- axioms ------------------------------------------------------------

    def check_axioms(self) -> AxiomReport:
        covs = sorted(self.covectors, key=str)
        masks = [(c.plus, c.minus) for c in covs]
        mask_set = self._mask_set
        n = len(self.ground)
        full = (1 << n) - 1

        ax1 = AxiomCheck((0, 0) in mask_set, None if (0, 0) in mask_set else "zero vector missing")

        ax2 = AxiomCheck(True)
        for c in covs:
            if (c.minus, c.plus) not in mask_set:
                ax2 = AxiomCheck(False, f"opposite of {c} missing")
                break

        ax3 = AxiomCheck(True)
        done = False
        for p1, m1 in masks:
            if done:
                break
            for p2, m2 in masks:
                q = compose_masks(p1, m1, p2, m2)
                if q not in mask_set:
                    a = str(SignVector(self.ground, p1, m1))
                    b = str(SignVector(self.ground, p2, m2))
                    c = str(SignVector(self.ground, q[0], q[1]))
                    ax3 = AxiomCheck(False, f"{a} o {b} = {c} escapes the set")
                    done = True
                    break

        # Elimination: for each pair and each separating element e there must
        # be an eta with eta_e = 0 agreeing with the composition off the
        # separator.  The separator is determined by the off-pattern key, so
        # obligations deduplicate by (off-mask, composition restricted to it);
        # per key one pass over the covectors collects the union of zero sets
        # of the admissible eta, and the test is a single mask comparison.
        ax4 = AxiomCheck(True)
        obligations: dict[tuple[int, int, int], tuple[int, int, int, int]] = {}
        for p1, m1 in masks:
            for p2, m2 in masks:
                s = separator_masks(p1, m1, p2, m2)
                if not s:
                    continue
                off = full & ~s
                cp, cm = compose_masks(p1, m1, p2, m2)
                key = (off, cp & off, cm & off)
                if key not in obligations:
                    obligations[key] = (p1, m1, p2, m2)
        for (off, op, om), (p1, m1, p2, m2) in obligations.items():
            zunion = 0
            for p, m in masks:
                if (p & off) == op and (m & off) == om:
                    zunion |= full & ~(p | m)
            bad = (full & ~off) & ~zunion
            if bad:
                e = next(lab for k, lab in enumerate(self.ground) if bad >> k & 1)
                a = str(SignVector(self.ground, p1, m1))
                b = str(SignVector(self.ground, p2, m2))
                ax4 = AxiomCheck(
                    False, f"no eliminating covector for pair ({a}, {b}) at {e}"
                )
                break

        return AxiomReport(ax1, ax2, ax3, ax4)

    # -- simplification ------------------------------------------------------

    def simplify(self) -> SimplifyResult:
        """Remove loops and collapse parallel classes to representatives."""
        loops = self.loops()
        idx = {lab: i for i, lab in enumerate(self.ground)}
        columns: dict[str, frozenset] = {}
        for lab in self.ground:
            if lab in loops:
                continue
            i = idx[lab]
            # parallel elements have identical zero patterns across covectors
            columns[lab] = frozenset(
                (c.plus, c.minus)
                for c in self.covectors
                if not (c.support_mask >> i & 1)
            )
        rep: dict[str, str] = {}
        chosen: dict[frozenset, str] = {}
        for lab in self.ground:
            if lab in loops:
                continue
            z = columns[lab]
            if z not in chosen:
                chosen[z] = lab
            rep[lab] = chosen[z]
        keep = [lab for lab in self.ground if rep.get(lab) == lab]
        new_covs = {c.restrict(keep) for c in self.covectors}
        return SimplifyResult(CovectorSystem(tuple(keep), new_covs), rep, loops)

    # -- constructions ---------------------------------------------------------

    def restriction(self, labels: Iterable[str]) -> "CovectorSystem":
        keep = [lab for lab in self.ground if lab in set(labels)]
        return CovectorSystem(tuple(keep), {c.restrict(keep) for c in self.covectors})

    def flats(self) -> frozenset[frozenset[str]]:
        return frozenset(c.zero_set() for c in self.covectors)

    def is_flat(self, labels: Iterable[str]) -> bool:
        want = frozenset(labels)
        return want in self.flats()

    def contraction(self, labels: Iterable[str]) -> "CovectorSystem":
        """Covectors vanishing on the given set, restricted to the rest."""
        x = set(labels)
        unknown = x.difference(self.ground)
        if unknown:
            raise ValueError(f"unknown labels: {sorted(unknown)}")
        xmask = self.label_mask(x)
        rest = [lab for lab in self.ground if lab not in x]
        covs = {
            c.restrict(rest) for c in self.covectors if not (c.support_mask & xmask)
        }
        return CovectorSystem(tuple(rest), covs)

    def localization(self, flat: Iterable[str]) -> tuple["CovectorSystem", PosetMap]:
        """The restriction to a flat, with the projection of covector posets."""
        x = frozenset(flat)
        if not self.is_flat(x):
            raise NotAFlatError(f"{sorted(x)} is not a flat")
        loc = self.restriction(x)
        src = self.covector_poset()
        tgt = loc.covector_poset()
        keep = [lab for lab in self.ground if lab in x]
        assignment = {str(c): str(c.restrict(keep)) for c in self.covectors}
        return loc, PosetMap(src, tgt, assignment, _validated=True)

    def section_iota(self, alpha: SignVector) -> PosetMap:
        """The section iota_alpha of the localization at z(alpha)."""
        if alpha not in self:
            raise ValueError("alpha is not a covector of this system")
        x = alpha.zero_set()
        loc, _rho = self.localization(x)
        keep = [lab for lab in self.ground if lab in x]
        idx = {lab: i for i, lab in enumerate(self.ground)}
        assignment = {}
        for c in loc.covectors:
            plus, minus = alpha.plus, alpha.minus
            for j, lab in enumerate(keep):
                bit = 1 << idx[lab]
                if c.plus >> j & 1:
                    plus |= bit
                elif c.minus >> j & 1:
                    minus |= bit
            lifted = SignVector(self.ground, plus, minus)
            if lifted not in self:
                raise ValueError(
                    f"section image {lifted} is not a covector; alpha invalid"
                )
            assignment[str(c)] = str(lifted)
        return PosetMap(loc.covector_poset(), self.covector_poset(), assignment)

    def cocircuits(self) -> frozenset[SignVector]:
        """The minimal nonzero covectors."""
        if self._cocircuits is None:
            nonzero = [c for c in self.covectors if not c.is_zero()]
            out = frozenset(
                c
                for c in nonzero
                if not any(d is not c and d.leq(c) for d in nonzero)
            )
            object.__setattr__(self, "_cocircuits", out)
        return self._cocircuits

    def decone(self, g: str) -> "AffineCovectorSystem":
        if g not in self.ground:
            raise ValueError(f"unknown label {g!r}")
        if g in self.loops():
            raise ValueError(f"{g!r} is a loop; the decone would be empty")
        i = self.ground.index(g)
        plus_side = frozenset(c for c in self.covectors if c.plus >> i & 1)
        return AffineCovectorSystem(self, g, plus_side)

    # -- poset views ----------------------------------------------------------

    def covector_poset(
        self, include_zero: bool = True, dual: bool = False
    ) -> FinitePoset:
        covs = [
            c for c in self.covectors if include_zero or not c.is_zero()
        ]
        ids = [str(c) for c in covs]
        pairs = []
        for a in covs:
            sa = str(a)
            for b in covs:
                if a is not b and a.leq(b):
                    pairs.append((str(b), sa) if dual else (sa, str(b)))
        return FinitePoset(ids, pairs, _validated=True)

    def big_face_lattice_map(self) -> PosetMap:
        """z as an order preserving map from the dual covector poset to flats."""
        from .lattices import build_lattice, flat_id

        lat = build_lattice(self)
        src = self.covector_poset(dual=True)
        assignment = {str(c): flat_id(c.zero_set(), self.ground) for c in self.covectors}
        return PosetMap(src, lat.poset(), assignment)


@dataclass(frozen=True)
class AffineCovectorSystem:
    """The covectors positive on a distinguished element."""

    base: CovectorSystem
    positive_element: str
    covectors_plus: frozenset[SignVector]

    def topes(self) -> frozenset[SignVector]:
        return frozenset(t for t in self.base.topes() if t in self.covectors_plus)

    def poset(self) -> FinitePoset:
        ids = [str(c) for c in self.covectors_plus]
        pairs = [
            (str(a), str(b))
            for a in self.covectors_plus
            for b in self.covectors_plus
            if a is not b and a.leq(b)
        ]
        return FinitePoset(ids, pairs, _validated=True)


# -- realizable construction ----------------------------------------------


def _normalize_row(row: Iterable[Fraction]) -> tuple[int, ...]:
    fracs = [Fraction(x) for x in row]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


class RationalArrangement:
    """Rational linear forms, one per label, defining a central arrangement."""

    __slots__ = ("labels", "forms", "dimension")

    def __init__(self, labels: Iterable[str], forms: Iterable[Iterable[Fraction]]):
        labels = tuple(labels)
        rows = [_normalize_row(r) for r in forms]
        if len(rows) != len(labels):
            raise ValueError("one form per label required")
        if not rows:
            raise DegenerateArrangementError("empty arrangement")
        dim = len(rows[0])
        if dim < 1:
            raise DegenerateArrangementError("ambient dimension must be >= 1")
        for lab, r in zip(labels, rows):
            if len(r) != dim:
                raise ValueError("forms of unequal dimension")
            if not any(r):
                raise DegenerateArrangementError(f"zero form for {lab!r}")
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                if _proportional(rows[i], rows[j]):
                    raise DegenerateArrangementError(
                        f"forms for {labels[i]!r} and {labels[j]!r} are proportional"
                    )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "forms", tuple(rows))
        object.__setattr__(self, "dimension", dim)

    def __setattr__(self, name, value):
        raise AttributeError("RationalArrangement is immutable")


def _proportional(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    # a, b nonzero integer rows
    for x, y in zip(a, b):
        if x == 0 and y != 0 or x != 0 and y == 0:
            return False
    # cross-multiply against the first nonzero coordinate
    k = next(i for i, x in enumerate(a) if x)
    return all(a[k] * y == b[k] * x for x, y in zip(a, b))


def _eliminate_variable(rows: list[tuple[int, ...]], k: int) -> list[tuple[int, ...]] | None:
    """One Fourier-Motzkin step on strict inequalities  row . v > 0."""
    pos, neg, zero = [], [], []
    for r in rows:
        if r[k] > 0:
            pos.append(r)
        elif r[k] < 0:
            neg.append(r)
        else:
            zero.append(r)
    out: set[tuple[int, ...]] = set()
    for r in zero:
        rr = _normalize_row(r)
        if not any(rr):
            return None  # 0 > 0
        out.add(rr)
    for p in pos:
        for q in neg:
            comb = tuple(
                p[i] * (-q[k]) + q[i] * p[k] for i in range(len(p))
            )
            comb = _normalize_row(comb)
            if not any(comb):
                return None
            out.add(comb)
    return [r for r in out]


def _strict_system_feasible(rows: list[tuple[int, ...]], dim: int) -> bool:
    """Exact feasibility of  row . v > 0  for all rows, over the rationals."""
    current = []
    for r in rows:
        if not any(r):
            return False
        current.append(_normalize_row(r))
    current = list(set(current))
    for k in range(dim):
        nxt = _eliminate_variable(current, k)
        if nxt is None:
            return False
        current = nxt
        if not current:
            return True
    return not current


def _sign_pattern_feasible(
    forms: list[tuple[int, ...]], signs: list[int], dim: int
) -> bool:
    """Is there a rational point v with sign(form_i . v) = signs_i for all i?"""
    # Equalities first: Gaussian elimination (kept in reduced form, so one
    # pass fully reduces any row) substitutes variables away.
    eqs = [list(Fraction(x) for x in forms[i]) for i, s in enumerate(signs) if s == 0]
    stricts = [
        [Fraction(x) * s for x in forms[i]] for i, s in enumerate(signs) if s != 0
    ]
    ncols = dim
    pivots: list[tuple[int, list[Fraction]]] = []
    for eq in eqs:
        row = eq[:]
        for col, prow in pivots:
            if row[col]:
                factor = row[col] / prow[col]
                row = [a - factor * b for a, b in zip(row, prow)]
        col = next((i for i in range(ncols) if row[i]), None)
        if col is None:
            continue
        for j, (pcol, prow) in enumerate(pivots):
            if prow[col]:
                factor = prow[col] / row[col]
                pivots[j] = (pcol, [a - factor * b for a, b in zip(prow, row)])
        pivots.append((col, row))
    reduced = []
    for sr in stricts:
        row = sr[:]
        for col, prow in pivots:
            if row[col]:
                factor = row[col] / prow[col]
                row = [a - factor * b for a, b in zip(row, prow)]
        reduced.append(_normalize_row(row))
    free_cols = [i for i in range(ncols) if i not in {c for c, _ in pivots}]
    projected = [tuple(r[i] for i in free_cols) for r in reduced]
    return _strict_system_feasible(projected, len(free_cols))


def from_arrangement(arrangement: RationalArrangement) -> CovectorSystem:
    """All sign vectors realized by rational points of the arrangement.

    Scans the 3^n candidate sign vectors and decides each one by exact
    rational linear feasibility.  Simple, exact, desk scale.
    """
    n = len(arrangement.labels)
    if n > 14:
        raise ValueError("arrangement scan limited to 14 forms")
    forms = list(arrangement.forms)
    dim = arrangement.dimension
    found: list[SignVector] = []

    signs = [0] * n

    def scan(i: int) -> None:
        if i == n:
            found.append(SignVector.from_signs(signs, arrangement.labels))
            return
        for s in (0, 1, -1):
            signs[i] = s
            if _sign_pattern_feasible(forms[: i + 1], signs[: i + 1], dim):
                scan(i + 1)
        signs[i] = 0

    scan(0)
    return CovectorSystem(arrangement.labels, found)


def check_axioms(system: CovectorSystem) -> AxiomReport:
    return system.check_axioms()


def simplify(system: CovectorSystem) -> SimplifyResult:
    return system.simplify()


def topes(system: CovectorSystem) -> frozenset[SignVector]:
    return system.topes()


def rank(system: CovectorSystem) -> int:
    return system.rank()


def cocircuits(system: CovectorSystem) -> frozenset[SignVector]:
    return system.cocircuits()
