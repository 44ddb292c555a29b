"""One-time generator for the bundled non-realizable rank-3 instance.

Construction: take the classical nine-line incidence configuration with
rational coordinates, drop the line carrying the three cross points, and
compute the covector system of the remaining eight lines exactly.  Then
re-insert the ninth element combinatorially: a single-element extension
forced through the two finite cross points and the common infinite point
of the two horizontal lines, and kept off every other rank-two flat, in
particular off the middle cross point.  Classical incidence geometry pins
the middle cross point onto any straight realization of that line, so
every extension found this way is non-realizable; the search is complete,
and the lexicographically first signature is frozen.

Run from the repository root:  python tools/generate_non_pappus.py
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from omkit import CovectorSystem, RationalArrangement, from_arrangement, build_lattice
from omkit.extensions import ExtensionConstraints, single_element_extensions
from omkit.lattices import flat_id
from omkit.signs import SignVector

EIGHT = [
    ("L1", (0, 1, -1)),   # y = 1
    ("L2", (0, 1, 1)),    # y = -1
    ("L4", (2, 1, 1)),    # through (-1,1) and (0,-1)
    ("L5", (2, -1, 1)),   # through (-1,-1) and (0,1)
    ("L6", (1, 1, 0)),    # through (-1,1) and (1,-1)
    ("L7", (1, -1, 0)),   # through (-1,-1) and (1,1)
    ("L8", (2, 1, -1)),   # through (0,1) and (1,-1)
    ("L9", (2, -1, -1)),  # through (0,-1) and (1,1)
]

POINT_TRIPLES = [
    {"L1", "L4", "L6"},
    {"L1", "L5", "L8"},
    {"L1", "L7", "L9"},
    {"L2", "L5", "L7"},
    {"L2", "L4", "L9"},
    {"L2", "L6", "L8"},
]
CROSS_LEFT = {"L4", "L5"}
CROSS_MID = {"L6", "L7"}
CROSS_RIGHT = {"L8", "L9"}
INFINITY = {"L1", "L2"}


def main() -> None:
    labels = tuple(lab for lab, _ in EIGHT)
    arr = RationalArrangement(labels, [f for _, f in EIGHT])
    t0 = time.time()
    base = from_arrangement(arr)
    print(f"eight-line system: {len(base)} covectors, "
          f"{len(base.topes())} topes, rank {base.rank()} ({time.time()-t0:.1f}s)")
    assert base.check_axioms().ok

    lat = build_lattice(base)
    for triple in POINT_TRIPLES:
        assert frozenset(triple) in lat.rank_of, f"missing triple {triple}"
    for pair in (CROSS_LEFT, CROSS_MID, CROSS_RIGHT, INFINITY):
        assert frozenset(pair) in lat.rank_of, f"missing cross point {pair}"

    zero = frozenset(map(frozenset, (CROSS_LEFT, CROSS_RIGHT, INFINITY)))
    nonzero = frozenset(
        f for f in lat.flats_of_rank(2) if f not in zero
    )
    constraints = ExtensionConstraints(zero, nonzero)
    t0 = time.time()
    gen = single_element_extensions(base, constraints, new_label="L3", lattice=lat)
    result = next(gen)
    print(f"extension found in {time.time()-t0:.1f}s")

    ext = result.extended
    # reorder the ground set to L1..L9
    order = tuple(sorted(ext.ground))
    reordered = CovectorSystem(
        order, {c.reorder(order) for c in ext.covectors}
    )
    assert len(reordered) == len(ext)
    assert reordered.check_axioms().ok
    assert reordered.is_simple()
    assert reordered.rank() == 3

    lat9 = build_lattice(reordered)
    triples = sorted(
        flat_id(f, order) for f in lat9.flats_of_rank(2) if len(f) == 3
    )
    doubles = sorted(
        flat_id(f, order) for f in lat9.flats_of_rank(2) if len(f) == 2
    )
    print("triple points:", triples)
    print("simple points:", doubles)
    expected_triples = sorted(
        [
            "L1,L2,L3",
            "L3,L4,L5",
            "L3,L8,L9",
        ]
        + [flat_id(frozenset(t), order) for t in POINT_TRIPLES]
    )
    assert triples == expected_triples, triples
    assert frozenset({"L6", "L7"}) in lat9.rank_of  # the broken cross point
    assert lat9.is_supersolvable() is None, "instance must not be supersolvable"
    print("whitney:", lat9.whitney(), "topes:", len(reordered.topes()))

    out = Path(__file__).resolve().parent.parent / "src" / "omkit" / "data" / "non_pappus.om"
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = ["ground: " + " ".join(order), "covectors:"]
    lines += sorted(str(c) for c in reordered.covectors)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(reordered)} covectors)")


if __name__ == "__main__":
    main()
