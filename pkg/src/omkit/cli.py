"""Command-line driver.

Commands read a covector file on stdin (or --input) and write either a
covector file or a report to stdout; the exit status is zero exactly
when every clause of the report passed.  `corpus` and `from-arrangement`
produce covector files, so commands compose as pipelines.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import CORPUS_NAMES, corpus
from .homology import (
    betti_numbers,
    homology,
    quasi_fibration_certify,
    semidirect_rank_sequence,
)
from .lattices import build_lattice, flat_id, parse_flat
from .matroids import CovectorSystem, RationalArrangement, from_arrangement
from .morse import (
    matching_convex_critical,
    matching_from_shelling,
    matching_salvetti_fiber,
    morse_reduction_certificate,
)
from .omfile import (
    Report,
    format_system,
    format_topes,
    parse_matrix_text,
    parse_om_text,
)
from .posets import SimplicialComplexRecord
from .salvetti import (
    parse_cell_id,
    salvetti,
    salvetti_localization,
    stratify_fiber,
)
from .topes import (
    ShellingOrder,
    shelling_order_from_extension,
    sphere_poset,
    subcomplex_LQ,
    verify_shelling,
)


def _read_system(args) -> CovectorSystem:
    if args.input and args.input != "-":
        text = Path(args.input).read_text()
    else:
        text = sys.stdin.read()
    return parse_om_text(text).to_system()


def _emit(text: str) -> int:
    sys.stdout.write(text)
    return 0


def _finish(report: Report) -> int:
    sys.stdout.write(report.render())
    return 0 if report.ok else 1


def cmd_corpus(args) -> int:
    return _emit(format_system(corpus(args.name)))


def cmd_from_arrangement(args) -> int:
    rows = parse_matrix_text(Path(args.matrix).read_text())
    labels = tuple(f"H{i + 1}" for i in range(len(rows)))
    return _emit(format_system(from_arrangement(RationalArrangement(labels, rows))))


def cmd_check_axioms(args) -> int:
    system = _read_system(args)
    report = Report("check-axioms")
    report.note("ground", " ".join(system.ground))
    report.note("covectors", len(system))
    for key, check in system.check_axioms().items():
        report.add(key, check.passed, check.witness)
    return _finish(report)


def cmd_simplify(args) -> int:
    system = _read_system(args)
    result = system.simplify()
    sys.stderr.write(
        f"# loops: {','.join(result.loops) or '(none)'}; "
        f"representatives: {result.representative}\n"
    )
    return _emit(format_system(result.system))


def cmd_topes(args) -> int:
    system = _read_system(args)
    return _emit(format_topes(system))


def cmd_lattice(args) -> int:
    system = _read_system(args)
    lat = build_lattice(system)
    report = Report("lattice")
    report.note("rank", lat.rank())
    report.note("whitney", " ".join(map(str, lat.whitney())))
    for r in range(lat.rank() + 1):
        flats = [
            f"{lat.id(f)} (mu {lat.mobius[f]})" for f in lat.flats_of_rank(r)
        ]
        report.note(f"flats.rank{r}", "; ".join(flats))
    report.add("zaslavsky.topes", sum(lat.whitney()) == len(system.topes()),
               f"{sum(lat.whitney())} != {len(system.topes())}")
    return _finish(report)


def cmd_modular(args) -> int:
    system = _read_system(args)
    lat = build_lattice(system)
    x = parse_flat(args.flat, system.ground)
    check = lat.is_modular_flat(x)
    report = Report("modular")
    report.note("flat", lat.id(x))
    witness = None
    if not check.ok:
        z, y = check.witness
        witness = f"Z={lat.id(z)} Y={lat.id(y)}"
    report.add("modular", check.ok, witness)
    return _finish(report)


def cmd_supersolvable(args) -> int:
    system = _read_system(args)
    lat = build_lattice(system)
    chain = lat.is_supersolvable()
    report = Report("supersolvable")
    if chain is not None:
        report.note("mchain", " < ".join(lat.id(f) for f in chain.flats))
    report.add("supersolvable", chain is not None, "no maximal chain of modular flats")
    return _finish(report)


def cmd_shelling(args) -> int:
    system = _read_system(args)
    base = system.vector(args.base)
    order = shelling_order_from_extension(system, base)
    poset = sphere_poset(system)
    check = verify_shelling(poset, order, depth=args.depth)
    report = Report("shelling")
    report.note("base", args.base)
    report.note("order", " ".join(order.cells))
    report.add("shelling.verified", check.ok, check.witness)
    return _finish(report)


def cmd_salvetti(args) -> int:
    system = _read_system(args)
    s = salvetti(system)
    report = Report("salvetti")
    report.note("cells", len(s))
    report.note("height", s.poset.height())
    by_dim: dict[int, int] = {}
    for cid in s.poset.elements:
        by_dim[s.dimension_of(cid)] = by_dim.get(s.dimension_of(cid), 0) + 1
    report.note("cells_by_dim", " ".join(f"{d}:{n}" for d, n in sorted(by_dim.items())))
    report.add("pure", s.poset.height() == system.rank(),
               f"height {s.poset.height()} != rank {system.rank()}")
    return _finish(report)


def cmd_localize(args) -> int:
    system = _read_system(args)
    x = parse_flat(args.flat, system.ground)
    loc, _rho = system.localization(x)
    return _emit(format_system(loc))


def cmd_fiber(args) -> int:
    system = _read_system(args)
    x = parse_flat(args.flat, system.ground)
    loc = salvetti_localization(system, x)
    cell = parse_cell_id(args.cell, loc.localized)
    fib = loc.fiber(cell.id)
    report = Report("fiber")
    report.note("flat", flat_id(x, system.ground))
    report.note("cell", cell.id)
    report.note("size", len(fib))
    report.note("betti", " ".join(map(str, betti_numbers(fib))))
    report.add("nonempty", len(fib) > 0, "empty fiber")
    return _finish(report)


def cmd_stratify(args) -> int:
    system = _read_system(args)
    x = parse_flat(args.flat, system.ground)
    loc = salvetti_localization(system, x)
    bp = loc.localized.vector(args.tope)
    strat = stratify_fiber(loc, bp)
    report = Report("stratify")
    report.note("flat", flat_id(x, system.ground))
    report.note("base", args.tope)
    report.note("string", " < ".join(str(t) for t in strat.tope_string))
    for i, s in enumerate(strat.separators):
        report.note(f"separator.{i}", ",".join(sorted(s)))
    report.note("strata_sizes", " ".join(str(len(s)) for s in strat.strata))
    report.add(
        "separators.singletons",
        all(len(s) == 1 for s in strat.separators),
        "non-singleton separator",
    )
    report.add(
        "strata.cover",
        sum(len(s) for s in strat.strata) == len(strat.fiber.elements),
        "strata do not partition the fiber",
    )
    return _finish(report)


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValueError(
            "missing arguments: " + ", ".join(f"--{n.replace('_', '-')}" for n in missing)
        )


def cmd_morse(args) -> int:
    system = _read_system(args)
    report = Report(f"morse.{args.construction}")
    if args.construction == "shelling":
        _require(args, ["base"])
        base = system.vector(args.base)
        order = shelling_order_from_extension(system, base)
        poset = sphere_poset(system)
        # collapse the ball left of the last cell: use all topes but one
        cells = list(order.cells)
        ball_cells = cells[:-1]
        by_text = system.by_text()
        sub_ids = [str(c) for c in subcomplex_LQ(system, [by_text[t] for t in ball_cells]) if not c.is_zero()]
        sub = poset.subposet(sub_ids)
        vertex = min(x for x in sub.minimal_elements() if sub.leq(x, ball_cells[0]))
        matching = matching_from_shelling(sub, ShellingOrder(tuple(ball_cells)), vertex)
        cert = morse_reduction_certificate(sub, {vertex}, matching)
        report.note("pairs", len(matching.pairs))
        report.note("critical", vertex)
        report.add("matching.acyclic", True)
        report.add("critical.single_vertex", cert.ok, "critical set not the vertex")
    elif args.construction == "convex":
        _require(args, ["topes"])
        by_text = system.by_text()
        q = frozenset(by_text[t] for t in args.topes.split(","))
        matching = matching_convex_critical(system, q)
        report.note("pairs", len(matching.pairs))
        report.note("critical", len(matching.critical_cells()))
        report.add("matching.acyclic", bool(matching.is_acyclic()))
    else:
        _require(args, ["flat", "cell", "tope"])
        x = parse_flat(args.flat, system.ground)
        loc = salvetti_localization(system, x)
        cell = parse_cell_id(args.cell, loc.localized)
        bp = loc.localized.vector(args.tope)
        matching = matching_salvetti_fiber(loc, cell.id, bp)
        cert = morse_reduction_certificate(
            matching.host, loc.fiber(cell.id).elements, matching
        )
        report.note("pairs", len(matching.pairs))
        report.note("critical", len(matching.critical_cells()))
        report.add("matching.acyclic", True)
        report.add("critical.is_fiber", cert.ok, "critical set is not the fiber")
    sys.stdout.write(matching.serialize() + "\n")
    return _finish(report)


def cmd_homology(args) -> int:
    system = None
    report = Report("homology")
    if args.target == "salvetti":
        system = _read_system(args)
        poset = salvetti(system).poset
        res = homology(poset)
    elif args.target == "fiber":
        system = _read_system(args)
        _require(args, ["flat", "cell"])
        x = parse_flat(args.flat, system.ground)
        loc = salvetti_localization(system, x)
        cell = parse_cell_id(args.cell, loc.localized)
        res = homology(loc.fiber(cell.id))
    else:
        _require(args, ["complex_file"])
        facets = [
            line.split(",")
            for line in Path(args.complex_file).read_text().splitlines()
            if line.strip()
        ]
        res = homology(SimplicialComplexRecord.from_facets(facets))
    report.note("betti", " ".join(map(str, res.betti)))
    report.note(
        "torsion",
        "; ".join(",".join(map(str, t)) or "-" for t in res.torsion),
    )
    if system is not None and args.target == "salvetti":
        w = build_lattice(system).whitney()
        betti = list(res.betti) + [0] * (len(w) - len(res.betti))
        report.add(
            "betti.match_whitney",
            tuple(betti[: len(w)]) == w and res.is_torsion_free(),
            f"betti {tuple(betti)} vs whitney {w}",
        )
    else:
        report.add("computed", True)
    return _finish(report)


def cmd_certify_qf(args) -> int:
    system = _read_system(args)
    x = parse_flat(args.flat, system.ground)
    mode = "exhaustive" if args.exhaustive else "sampled"
    cert = quasi_fibration_certify(system, x, mode=mode, sample=args.sample)
    report = Report("certify-qf")
    report.note("flat", flat_id(x, system.ground))
    report.note("mode", cert.mode)
    report.note("pairs", len(cert.pairs))
    report.note("fiber_rank", cert.expected_rank)
    bad_pairs = [p for p in cert.pairs if not p.ok]
    report.add(
        "pairs.certified",
        not bad_pairs,
        bad_pairs and f"{bad_pairs[0].lower} <= {bad_pairs[0].upper}" or None,
    )
    want = (1, cert.expected_rank)
    bad_fibers = [f for f in cert.fibers if f.betti != want or not f.torsion_free]
    report.add(
        "fibers.homology",
        not bad_fibers,
        bad_fibers and f"{bad_fibers[0].cell}: {bad_fibers[0].betti}" or None,
    )
    report.add("fibers.graph_rank", cert.graph_rank_ok, "minimal fiber rank mismatch")
    return _finish(report)


def cmd_ranks(args) -> int:
    system = _read_system(args)
    seq = semidirect_rank_sequence(system)
    report = Report("ranks")
    report.note("sequence", " ".join(map(str, seq)))
    report.note("sum", sum(seq))
    res = homology(salvetti(system).poset)
    b1 = res.betti[1] if len(res.betti) > 1 else 0
    report.add("sum.equals_b1", sum(seq) == b1, f"{sum(seq)} != b1={b1}")
    return _finish(report)


def cmd_extend_levi(args) -> int:
    from .extensions import levi_enlargement

    system = _read_system(args)
    x1 = parse_flat(args.flats[0], system.ground)
    x2 = parse_flat(args.flats[1], system.ground)
    result = levi_enlargement(system, x1, x2, generic=args.generic)
    sys.stderr.write(
        f"# new element {result.new_element} through "
        f"{flat_id(result.flat_lift[x1], result.extended.ground)} and "
        f"{flat_id(result.flat_lift[x2], result.extended.ground)}\n"
    )
    return _emit(format_system(result.extended))


def cmd_extend_ss(args) -> int:
    from .extensions import supersolvable_extension

    system = _read_system(args)
    result = supersolvable_extension(system)
    report = Report("extend-ss")
    report.note("steps", len(result.steps))
    for i, step in enumerate(result.steps):
        report.note(
            f"step.{i + 1}",
            f"{step.new_element} through {flat_id(step.pivot, system.ground) if step.pivot <= set(system.ground) else sorted(step.pivot)}"
            f" and {sorted(step.through)}; disjoint {step.disjoint_before} -> {step.disjoint_after}",
        )
    lat = build_lattice(result.final)
    report.note("mchain", " < ".join(lat.id(f) for f in result.chain))
    decreasing = all(s.disjoint_after < s.disjoint_before for s in result.steps)
    report.add("disjoint.strictly_decreasing", decreasing, "a step failed to decrease")
    restricted = {c.restrict(system.ground) for c in result.final.covectors}
    report.add(
        "restriction.identity",
        restricted == system.covectors,
        "restriction differs from the input",
    )
    report.add(
        "supersolvable",
        lat.is_supersolvable() is not None,
        "final system not supersolvable",
    )
    if args.out:
        Path(args.out).write_text(format_system(result.final))
    return _finish(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omkit",
        description="exact oriented-matroid and Salvetti-complex toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def com(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--input", default="-", help="covector file (default stdin)")
        return p

    p = sub.add_parser("corpus", help="write a bundled example system")
    p.set_defaults(fn=cmd_corpus)
    p.add_argument("name", choices=CORPUS_NAMES)

    p = sub.add_parser("from-arrangement", help="covectors of a rational arrangement")
    p.set_defaults(fn=cmd_from_arrangement)
    p.add_argument("matrix", help="file with one rational row per line")

    com("check-axioms", cmd_check_axioms, help="check the covector axioms")
    com("simplify", cmd_simplify, help="remove loops and parallel elements")
    com("topes", cmd_topes, help="list the topes")
    com("lattice", cmd_lattice, help="flats, ranks, Moebius and Whitney data")

    p = com("modular", cmd_modular, help="modularity of a flat")
    p.add_argument("flat", help="comma-separated labels, e.g. H1,H2,H3")

    com("supersolvable", cmd_supersolvable, help="search for a modular chain")

    p = com("shelling", cmd_shelling, help="shelling order from a tope poset")
    p.add_argument("--base", required=True, help="base tope in sign text")
    p.add_argument("--depth", type=int, default=3)

    com("salvetti", cmd_salvetti, help="the Salvetti poset")

    p = com("localize", cmd_localize, help="restrict to a flat")
    p.add_argument("--flat", required=True)

    p = com("fiber", cmd_fiber, help="a Salvetti localization fiber")
    p.add_argument("--flat", required=True)
    p.add_argument("--cell", required=True, help="cell id (sigma;T) of the localization")

    p = com("stratify", cmd_stratify, help="stratify a maximal-cell fiber")
    p.add_argument("--flat", required=True)
    p.add_argument("--tope", required=True, help="base tope of the localization")

    p = com("morse", cmd_morse, help="build a verified acyclic matching")
    p.add_argument(
        "--construction", required=True, choices=("shelling", "convex", "fiber")
    )
    p.add_argument("--base", help="base tope (shelling)")
    p.add_argument("--topes", help="comma-separated convex tope set (convex)")
    p.add_argument("--flat", help="flat (fiber)")
    p.add_argument("--cell", help="cell id of the localization (fiber)")
    p.add_argument("--tope", help="base tope of the localization (fiber)")

    p = com("homology", cmd_homology, help="integral homology")
    p.add_argument(
        "--target", default="salvetti", choices=("salvetti", "fiber", "complex-file")
    )
    p.add_argument("--flat")
    p.add_argument("--cell")
    p.add_argument("--complex-file", dest="complex_file")

    p = com("certify-qf", cmd_certify_qf, help="quasi-fibration certificate")
    p.add_argument("--flat", required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--sample", type=int, default=24)

    com("ranks", cmd_ranks, help="semidirect rank sequence")

    p = com("extend-levi", cmd_extend_levi, help="one enlargement through two flats")
    p.add_argument("--flats", nargs=2, required=True, metavar=("X1", "X2"))
    p.add_argument("--generic", action="store_true")

    p = com("extend-ss", cmd_extend_ss, help="extend until supersolvable")
    p.add_argument("--out", help="write the extended system to a file")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
