"""Sign vectors over a fixed ordered ground set.

Entries take values in {+, -, 0}.  Vectors are stored packed, as two bit
masks (one for the + positions, one for the - positions), so composition,
separators and the product partial order are single integer operations.
This matters: axiom checking scans all pairs of covectors, and the
extension search composes cocircuits in a tight loop.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

SIGN_CHARS = {1: "+", -1: "-", 0: "0"}
CHAR_SIGNS = {"+": 1, "-": -1, "0": 0}


class GroundSetMismatchError(ValueError):
    """Two sign vectors over different ground sets were combined."""


@lru_cache(maxsize=None)
def _label_index(labels: tuple[str, ...]) -> dict[str, int]:
    index = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise ValueError(f"duplicate ground-set label {lab!r}")
        index[lab] = i
    return index


class SignVector:
    """Immutable sign vector indexed by an ordered tuple of labels."""

    __slots__ = ("labels", "plus", "minus")

    def __init__(self, labels: tuple[str, ...], plus: int, minus: int):
        if plus & minus:
            raise ValueError("an entry cannot be both + and -")
        if (plus | minus) >> len(labels):
            raise ValueError("mask bits outside the ground set")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, name, value):
        raise AttributeError("SignVector is immutable")

    # -- construction ------------------------------------------------

    @classmethod
    def from_string(cls, text: str, labels: Iterable[str]) -> "SignVector":
        labels = tuple(labels)
        if len(text) != len(labels):
            raise ValueError(
                f"sign string {text!r} has length {len(text)}, ground set has {len(labels)}"
            )
        plus = minus = 0
        for i, ch in enumerate(text):
            try:
                s = CHAR_SIGNS[ch]
            except KeyError:
                raise ValueError(f"invalid sign character {ch!r}") from None
            if s > 0:
                plus |= 1 << i
            elif s < 0:
                minus |= 1 << i
        return cls(labels, plus, minus)

    @classmethod
    def from_signs(cls, signs: Iterable[int], labels: Iterable[str]) -> "SignVector":
        labels = tuple(labels)
        plus = minus = 0
        n = 0
        for i, s in enumerate(signs):
            n += 1
            if s > 0:
                plus |= 1 << i
            elif s < 0:
                minus |= 1 << i
        if n != len(labels):
            raise ValueError("sign count does not match ground set size")
        return cls(labels, plus, minus)

    @classmethod
    def zero(cls, labels: Iterable[str]) -> "SignVector":
        return cls(tuple(labels), 0, 0)

    # -- entry access ------------------------------------------------

    def sign(self, label: str) -> int:
        i = _label_index(self.labels)[label]
        bit = 1 << i
        if self.plus & bit:
            return 1
        if self.minus & bit:
            return -1
        return 0

    def __iter__(self) -> Iterator[tuple[str, int]]:
        for i, lab in enumerate(self.labels):
            bit = 1 << i
            yield lab, 1 if self.plus & bit else (-1 if self.minus & bit else 0)

    @property
    def support_mask(self) -> int:
        return self.plus | self.minus

    @property
    def zero_mask(self) -> int:
        return ((1 << len(self.labels)) - 1) & ~(self.plus | self.minus)

    def is_zero(self) -> bool:
        return not (self.plus | self.minus)

    def _labels_of(self, mask: int) -> frozenset[str]:
        return frozenset(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def zero_set(self) -> frozenset[str]:
        return self._labels_of(self.zero_mask)

    def support(self) -> frozenset[str]:
        return self._labels_of(self.support_mask)

    # -- the calculus ------------------------------------------------

    def _check_ground(self, other: "SignVector") -> None:
        if self.labels != other.labels:
            raise GroundSetMismatchError(
                f"ground sets differ: {self.labels} vs {other.labels}"
            )

    def compose(self, other: "SignVector") -> "SignVector":
        """Entry e is self_e when nonzero, other_e otherwise."""
        self._check_ground(other)
        free = ~(self.plus | self.minus)
        return SignVector(
            self.labels,
            self.plus | (other.plus & free),
            self.minus | (other.minus & free),
        )

    def separator_mask(self, other: "SignVector") -> int:
        self._check_ground(other)
        return (self.plus & other.minus) | (self.minus & other.plus)

    def separator(self, other: "SignVector") -> frozenset[str]:
        return self._labels_of(self.separator_mask(other))

    def opposite(self) -> "SignVector":
        return SignVector(self.labels, self.minus, self.plus)

    def restrict(self, sub: Iterable[str]) -> "SignVector":
        """Restriction to a label subset, kept in ground-set order."""
        keep = set(sub)
        unknown = keep.difference(self.labels)
        if unknown:
            raise ValueError(f"labels outside the ground set: {sorted(unknown)}")
        new_labels = tuple(lab for lab in self.labels if lab in keep)
        plus = minus = 0
        j = 0
        for i, lab in enumerate(self.labels):
            if lab in keep:
                bit = 1 << i
                if self.plus & bit:
                    plus |= 1 << j
                elif self.minus & bit:
                    minus |= 1 << j
                j += 1
        return SignVector(new_labels, plus, minus)

    def reorder(self, new_labels: Iterable[str]) -> "SignVector":
        """The same vector over a permuted ground set."""
        new_labels = tuple(new_labels)
        if sorted(new_labels) != sorted(self.labels):
            raise ValueError("new labels are not a permutation of the ground set")
        old = _label_index(self.labels)
        plus = minus = 0
        for j, lab in enumerate(new_labels):
            bit = 1 << old[lab]
            if self.plus & bit:
                plus |= 1 << j
            elif self.minus & bit:
                minus |= 1 << j
        return SignVector(new_labels, plus, minus)

    def leq(self, other: "SignVector") -> bool:
        """Product partial order with 0 < + and 0 < -."""
        self._check_ground(other)
        return not (self.plus & ~other.plus) and not (self.minus & ~other.minus)

    def __le__(self, other: "SignVector") -> bool:
        return self.leq(other)

    def __ge__(self, other: "SignVector") -> bool:
        return other.leq(self)

    # -- canonical text form ------------------------------------------

    def __str__(self) -> str:
        out = []
        for i in range(len(self.labels)):
            bit = 1 << i
            out.append("+" if self.plus & bit else ("-" if self.minus & bit else "0"))
        return "".join(out)

    def __repr__(self) -> str:
        return f"SignVector({str(self)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SignVector)
            and self.labels == other.labels
            and self.plus == other.plus
            and self.minus == other.minus
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.plus, self.minus))


def compose(a: SignVector, b: SignVector) -> SignVector:
    return a.compose(b)


def separator(a: SignVector, b: SignVector) -> frozenset[str]:
    return a.separator(b)


def zero_set(a: SignVector) -> frozenset[str]:
    return a.zero_set()


def opposite(a: SignVector) -> SignVector:
    return a.opposite()


def restrict(a: SignVector, sub: Iterable[str]) -> SignVector:
    return a.restrict(sub)


def leq(a: SignVector, b: SignVector) -> bool:
    return a.leq(b)


# Mask-level kernels used by hot loops (axiom checks, closure, search).
# They operate on (plus, minus) pairs without building SignVector objects.

def compose_masks(p1: int, m1: int, p2: int, m2: int) -> tuple[int, int]:
    free = ~(p1 | m1)
    return p1 | (p2 & free), m1 | (m2 & free)


def separator_masks(p1: int, m1: int, p2: int, m2: int) -> int:
    return (p1 & m2) | (m1 & p2)
