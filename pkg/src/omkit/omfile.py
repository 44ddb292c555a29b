"""Text formats: covector files, arrangement matrices, reports.

Everything is line-oriented and byte-deterministic so outputs can be
diffed and frozen as golden files.  A covector file has a ground line
and either a full covector body, a topes-only body, or an arrangement
matrix; reports are key/value lines whose FAIL clauses always carry a
witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .matroids import CovectorSystem, RationalArrangement, from_arrangement


class OMFileError(ValueError):
    pass


@dataclass(frozen=True)
class OMFile:
    ground: tuple[str, ...]
    covectors: Optional[tuple[str, ...]] = None
    topes: Optional[tuple[str, ...]] = None
    arrangement: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def to_system(self) -> CovectorSystem:
        if self.covectors is not None:
            return CovectorSystem.from_strings(self.ground, self.covectors)
        if self.arrangement is not None:
            return from_arrangement(RationalArrangement(self.ground, self.arrangement))
        raise OMFileError(
            "file lists topes only; covector operations need the full system"
        )


def format_system(system: CovectorSystem) -> str:
    lines = ["ground: " + " ".join(system.ground), "covectors:"]
    lines += sorted(str(c) for c in system.covectors)
    return "\n".join(lines) + "\n"


def format_topes(system: CovectorSystem) -> str:
    lines = ["ground: " + " ".join(system.ground), "topes:"]
    lines += sorted(str(t) for t in system.topes())
    return "\n".join(lines) + "\n"


def parse_om_text(text: str) -> OMFile:
    ground: Optional[tuple[str, ...]] = None
    section: Optional[str] = None
    covectors: list[str] = []
    topes: list[str] = []
    rows: list[tuple[Fraction, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("ground:"):
            ground = tuple(line[len("ground:"):].split())
            continue
        if line in ("covectors:", "topes:", "arrangement:"):
            section = line[:-1]
            continue
        if section == "covectors":
            covectors.append(line)
        elif section == "topes":
            topes.append(line)
        elif section == "arrangement":
            rows.append(tuple(Fraction(tok) for tok in line.split()))
        else:
            raise OMFileError(f"line outside any section: {line!r}")
    if ground is None:
        raise OMFileError("missing ground line")
    if sum(1 for body in (covectors, topes, rows) if body) != 1:
        raise OMFileError("exactly one of covectors/topes/arrangement required")
    if covectors:
        _check_body(ground, covectors, want_zero=True)
        return OMFile(ground, covectors=tuple(covectors))
    if topes:
        _check_body(ground, topes, want_zero=False)
        return OMFile(ground, topes=tuple(topes))
    return OMFile(ground, arrangement=tuple(rows))


def _check_body(ground: tuple[str, ...], body: list[str], want_zero: bool) -> None:
    seen = set()
    for line in body:
        if len(line) != len(ground):
            raise OMFileError(
                f"line {line!r} has length {len(line)}, ground has {len(ground)}"
            )
        if line in seen:
            raise OMFileError(f"duplicate line {line!r}")
        seen.add(line)
    if want_zero and "0" * len(ground) not in seen:
        raise OMFileError("covector body must contain the zero vector")


def parse_matrix_text(text: str) -> list[tuple[Fraction, ...]]:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(tuple(Fraction(tok) for tok in line.split()))
    if not rows:
        raise OMFileError("empty matrix file")
    return rows


# -- reports -------------------------------------------------------------------


@dataclass
class Report:
    """An ordered list of PASS/FAIL clauses with witnesses."""

    title: str
    clauses: list[tuple[str, bool, Optional[str]]] = field(default_factory=list)
    notes: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, passed: bool, witness: Optional[str] = None) -> None:
        if not passed and witness is None:
            raise ValueError(f"FAIL clause {key!r} needs a witness")
        self.clauses.append((key, passed, witness))

    def note(self, key: str, value: object) -> None:
        self.notes.append((key, str(value)))

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.clauses)

    def render(self) -> str:
        lines = [f"report: {self.title}"]
        for key, value in self.notes:
            lines.append(f"{key}: {value}")
        for key, passed, witness in self.clauses:
            if passed:
                lines.append(f"{key}: PASS")
            else:
                lines.append(f"{key}: FAIL witness={witness}")
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"
