"""The lattice of flats: rank, modularity, supersolvability, Moebius data.

Flats are zero sets of covectors, kept as frozensets of labels with a
canonical comma-joined rendering in ground-set order (the empty flat
renders as "{}").  Whitney numbers double as the independent oracle for
Betti numbers downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .matroids import CovectorSystem, NotAFlatError
from .posets import FinitePoset, PosetMap


def flat_id(flat: Iterable[str], ground: tuple[str, ...]) -> str:
    members = set(flat)
    unknown = members.difference(ground)
    if unknown:
        raise ValueError(f"labels outside ground set: {sorted(unknown)}")
    if not members:
        return "{}"
    return ",".join(lab for lab in ground if lab in members)


def parse_flat(text: str, ground: tuple[str, ...]) -> frozenset[str]:
    text = text.strip()
    if text in ("{}", ""):
        return frozenset()
    members = [t.strip() for t in text.split(",")]
    unknown = set(members).difference(ground)
    if unknown:
        raise ValueError(f"unknown labels: {sorted(unknown)}")
    return frozenset(members)


@dataclass(frozen=True)
class ModularityCheck:
    ok: bool
    witness: Optional[tuple[frozenset[str], frozenset[str]]] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MChain:
    """A maximal chain of flats, all modular."""

    flats: tuple[frozenset[str], ...]


class GeometricLattice:
    """Lattice of flats of a simple covector system, ordered by inclusion."""

    __slots__ = (
        "ground",
        "flats",
        "rank_of",
        "mobius",
        "_poset",
        "_flats_by_rank",
        "_join_table",
    )

    def __init__(self, ground: tuple[str, ...], flats: Iterable[frozenset[str]]):
        flist = sorted(set(flats), key=lambda f: (len(f), flat_id(f, ground)))
        fset = set(flist)
        if frozenset() not in fset:
            raise ValueError("bottom flat missing")
        if frozenset(ground) not in fset:
            raise ValueError("top flat missing")
        for x in flist:
            for y in flist:
                if not (x & y) in fset:
                    raise ValueError(
                        f"flats not closed under intersection: "
                        f"{flat_id(x, ground)} ^ {flat_id(y, ground)}"
                    )
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "flats", tuple(flist))
        rank_of: dict[frozenset[str], int] = {}
        for x in flist:  # flist is sorted by size, so predecessors are done
            rank_of[x] = max(
                (rank_of[y] + 1 for y in flist if y < x), default=0
            )
        object.__setattr__(self, "rank_of", rank_of)
        mob: dict[frozenset[str], int] = {}
        for x in flist:
            if not x:
                mob[x] = 1
            else:
                mob[x] = -sum(mob[y] for y in flist if y < x)
        object.__setattr__(self, "mobius", mob)
        object.__setattr__(self, "_poset", None)
        object.__setattr__(self, "_flats_by_rank", None)
        object.__setattr__(self, "_join_table", None)
        # semimodularity of the rank function, checked once
        for x in flist:
            for y in flist:
                jn = self.join(x, y)
                if rank_of[x] + rank_of[y] < rank_of[jn] + rank_of[x & y]:
                    raise ValueError(
                        f"rank not semimodular at {flat_id(x, ground)}, "
                        f"{flat_id(y, ground)}"
                    )

    def __setattr__(self, name, value):
        raise AttributeError("GeometricLattice is immutable")

    # -- lattice operations ------------------------------------------------

    def rank(self) -> int:
        return self.rank_of[frozenset(self.ground)]

    def id(self, flat: frozenset[str]) -> str:
        return flat_id(flat, self.ground)

    def check_flat(self, flat: Iterable[str]) -> frozenset[str]:
        f = frozenset(flat)
        if f not in self.rank_of:
            raise NotAFlatError(f"{flat_id(f, self.ground)} is not a flat")
        return f

    def join(self, x: frozenset[str], y: frozenset[str]) -> frozenset[str]:
        if self._join_table is None:
            table = {}
            for a in self.flats:
                for b in self.flats:
                    if (b, a) in table:
                        table[(a, b)] = table[(b, a)]
                    else:
                        u = a | b
                        table[(a, b)] = min(
                            (f for f in self.flats if u <= f), key=len
                        )
            object.__setattr__(self, "_join_table", table)
        return self._join_table[(x, y)]

    def meet(self, x: frozenset[str], y: frozenset[str]) -> frozenset[str]:
        return x & y

    def atoms(self) -> tuple[frozenset[str], ...]:
        return tuple(f for f in self.flats if self.rank_of[f] == 1)

    def coatoms(self) -> tuple[frozenset[str], ...]:
        r = self.rank()
        return tuple(f for f in self.flats if self.rank_of[f] == r - 1)

    def flats_of_rank(self, r: int) -> tuple[frozenset[str], ...]:
        if self._flats_by_rank is None:
            byr: dict[int, list[frozenset[str]]] = {}
            for f in self.flats:
                byr.setdefault(self.rank_of[f], []).append(f)
            object.__setattr__(self, "_flats_by_rank", byr)
        return tuple(self._flats_by_rank.get(r, ()))

    def poset(self) -> FinitePoset:
        if self._poset is None:
            ids = [self.id(f) for f in self.flats]
            pairs = [
                (self.id(x), self.id(y))
                for x in self.flats
                for y in self.flats
                if x < y
            ]
            object.__setattr__(
                self, "_poset", FinitePoset(ids, pairs, _validated=True)
            )
        return self._poset

    def interval(self, lo: frozenset[str], hi: frozenset[str]) -> FinitePoset:
        lo, hi = self.check_flat(lo), self.check_flat(hi)
        cells = [self.id(f) for f in self.flats if lo <= f <= hi]
        return self.poset().subposet(cells)

    def whitney(self) -> tuple[int, ...]:
        """Unsigned Whitney numbers |w_i|, from the Moebius recursion."""
        out = [0] * (self.rank() + 1)
        for f in self.flats:
            out[self.rank_of[f]] += abs(self.mobius[f])
        return tuple(out)

    # -- modularity and supersolvability -------------------------------------

    def is_modular_flat(self, flat: Iterable[str]) -> ModularityCheck:
        """Definition check: Z v (X ^ Y) = (Z v X) ^ Y for all Z <= Y."""
        x = self.check_flat(flat)
        for y in self.flats:
            xy = x & y
            for z in self.flats:
                if not z <= y:
                    continue
                if self.join(z, xy) != self.join(z, x) & y:
                    return ModularityCheck(False, (z, y))
        return ModularityCheck(True)

    def rank3_modular_coatom_test(self, flat: Iterable[str]) -> bool:
        """Rank-3 criterion: a rank-2 flat is modular iff it meets every
        rank-2 flat."""
        x = self.check_flat(flat)
        if self.rank() != 3:
            raise ValueError("criterion applies to rank-3 lattices only")
        if self.rank_of[x] != 2:
            raise ValueError("criterion applies to rank-2 flats only")
        return all(x & y for y in self.flats_of_rank(2))

    def modular_flats(self) -> tuple[frozenset[str], ...]:
        return tuple(f for f in self.flats if self.is_modular_flat(f).ok)

    def is_supersolvable(self) -> Optional[MChain]:
        """Search for a maximal chain of modular flats.

        Recursive over modular coatoms (modularity checked inside the
        subinterval at each level).  The returned chain is re-verified
        against the full-definition quantifier in this lattice; if that
        ever disagreed, the search falls back to a direct scan over chains
        of fully-modular flats.
        """
        chain = self._ss_chain(frozenset(self.ground))
        if chain is not None and all(self.is_modular_flat(f).ok for f in chain):
            return MChain(tuple(chain))
        chain = self._modular_chain_scan()
        return None if chain is None else MChain(tuple(chain))

    def _ss_chain(self, top: frozenset[str]) -> Optional[list[frozenset[str]]]:
        r = self.rank_of[top]
        if r == 0:
            return [top]
        sub = [f for f in self.flats if f <= top]
        coatoms = sorted(
            (f for f in sub if self.rank_of[f] == r - 1),
            key=lambda f: self.id(f),
        )
        for m in coatoms:
            if not self._modular_in(m, sub):
                continue
            rest = self._ss_chain(m)
            if rest is not None:
                return rest + [top]
        return None

    def _modular_in(self, x: frozenset[str], universe: list[frozenset[str]]) -> bool:
        # joins of flats below max(universe) stay below it, so the global
        # join table is valid inside the subinterval
        for y in universe:
            xy = x & y
            for z in universe:
                if not z <= y:
                    continue
                if self.join(z, xy) != self.join(z, x) & y:
                    return False
        return True

    def _modular_chain_scan(self) -> Optional[list[frozenset[str]]]:
        modular = set(self.modular_flats())
        target = self.rank()

        def grow(chain: list[frozenset[str]]) -> Optional[list[frozenset[str]]]:
            top = chain[-1]
            if self.rank_of[top] == target:
                return chain
            nxt = sorted(
                (
                    f
                    for f in modular
                    if top < f and self.rank_of[f] == self.rank_of[top] + 1
                ),
                key=self.id,
            )
            for f in nxt:
                done = grow(chain + [f])
                if done is not None:
                    return done
            return None

        return grow([frozenset()]) if frozenset() in modular else None

    def brylawski_iso(
        self, modular: Iterable[str], other: Iterable[str]
    ) -> tuple[PosetMap, PosetMap]:
        """The interval isomorphism [Y, X v Y] -> [X ^ Y, X] at a modular X,
        Z maps to Z ^ X, with inverse W maps to W v Y."""
        x = self.check_flat(modular)
        y = self.check_flat(other)
        check = self.is_modular_flat(x)
        if not check.ok:
            raise ValueError(f"{self.id(x)} is not modular; witness {check.witness}")
        top_int = self.interval(y, self.join(x, y))
        bot_int = self.interval(x & y, x)
        down = {}
        for f in self.flats:
            if y <= f <= self.join(x, y):
                down[self.id(f)] = self.id(f & x)
        up = {}
        for f in self.flats:
            if (x & y) <= f <= x:
                up[self.id(f)] = self.id(self.join(f, y))
        p_x = PosetMap(top_int, bot_int, down)
        s_y = PosetMap(bot_int, top_int, up)
        for e in top_int.elements:
            if up[down[e]] != e:
                raise AssertionError("brylawski maps are not mutually inverse")
        for e in bot_int.elements:
            if down[up[e]] != e:
                raise AssertionError("brylawski maps are not mutually inverse")
        return p_x, s_y


def build_lattice(system: CovectorSystem) -> GeometricLattice:
    """The lattice of zero sets of the covectors."""
    return GeometricLattice(system.ground, system.flats())


def whitney(lattice: GeometricLattice) -> tuple[int, ...]:
    return lattice.whitney()


def is_supersolvable(lattice: GeometricLattice) -> Optional[MChain]:
    return lattice.is_supersolvable()
