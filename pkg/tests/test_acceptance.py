"""Acceptance gate: one test per criterion, one printed verdict line each.

Run with  pytest tests/test_acceptance.py -v -s  to see the verdict lines
and timings.  Budgets are asserted, not just reported.
"""

import itertools
import random
import time

import pytest

from omkit.corpus import corpus
from omkit.homology import (
    graph_free_rank,
    homology,
    quasi_fibration_certify,
    salvetti_betti_match_whitney,
    semidirect_rank_sequence,
)
from omkit.lattices import build_lattice
from omkit.matroids import CovectorSystem
from omkit.morse import (
    matching_convex_critical,
    matching_from_shelling,
    matching_salvetti_fiber,
)
from omkit.posets import FinitePoset
from omkit.salvetti import salvetti, salvetti_localization, stratify_fiber
from omkit.topes import (
    ShellingOrder,
    all_convex_tope_sets,
    convex_first_extension,
    dual_subcomplex,
    sphere_poset,
    subcomplex_LQ,
    tope_poset,
    verify_shelling,
)


def _verdict(name: str, ok: bool, started: float) -> None:
    elapsed = time.monotonic() - started
    print(f"\nacceptance {name}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s)")
    assert ok


def test_criterion_1_axioms_and_corpus(all_corpus):
    started = time.monotonic()
    ok = True
    for name, system in all_corpus.items():
        t0 = time.monotonic()
        ok = ok and system.check_axioms().ok
        ok = ok and (time.monotonic() - t0) < 1.0
    five = all_corpus["sec3-arrangement"]
    t = sorted(five.topes(), key=str)[0]
    mutated = CovectorSystem(five.ground, five.covectors - {t})
    t0 = time.monotonic()
    report = mutated.check_axioms()
    ok = ok and (time.monotonic() - t0) < 1.0
    ok = ok and not report.composition.passed
    ok = ok and report.composition.witness is not None
    _verdict("criterion 1 (axioms and corpus)", ok, started)


def test_criterion_2_running_example_fidelity(five_planes):
    started = time.monotonic()
    lat = build_lattice(five_planes)
    x = frozenset({"H1", "H2", "H3"})
    ok = lat.is_modular_flat(x).ok
    loc = salvetti_localization(five_planes, x)
    # the base tope of the figure: the string must separate first at H4,
    # then at H5; the lexicographically smallest such base is used
    chosen = None
    for bp in sorted(loc.localized.topes(), key=str):
        strat = stratify_fiber(loc, bp, lat)
        if [sorted(s) for s in strat.separators] == [["H4"], ["H5"]]:
            chosen = strat
            break
    ok = ok and chosen is not None
    if chosen:
        t0, t1, t2 = chosen.tope_string
        ok = ok and len(chosen.tope_string) == 3
        ok = ok and t1.separator(t2) == {"H5"}
        ok = ok and t0.separator(t2) == {"H4", "H5"}
    ok = ok and (time.monotonic() - started) < 1.0
    _verdict("criterion 2 (running-example fidelity)", ok, started)


def test_criterion_3_betti_cross_oracle(all_corpus):
    started = time.monotonic()
    ok = True
    per_member: dict[str, float] = {}
    for name, system in all_corpus.items():
        t0 = time.monotonic()
        match, betti, whitney = salvetti_betti_match_whitney(system)
        per_member[name] = time.monotonic() - t0
        ok = ok and match
        if name == "sec3-arrangement":
            ok = ok and betti == (1, 5, 8, 4)
        if name == "rank1":
            ok = ok and betti == (1, 1)
    ok = ok and max(per_member.values()) < 60.0
    _verdict("criterion 3 (Betti equals Whitney)", ok, started)


def test_criterion_4_main_certificate(five_planes):
    started = time.monotonic()
    cert = quasi_fibration_certify(five_planes, {"H1", "H2", "H3"}, mode="exhaustive")
    ok = cert.ok
    ok = ok and all(f.betti == (1, 2) and f.torsion_free for f in cert.fibers)
    ok = ok and cert.expected_rank == 2
    loc = salvetti_localization(five_planes, {"H1", "H2", "H3"})
    want_pairs = sum(
        len(loc.target.poset.below(b)) for b in loc.target.poset.elements
    )
    ok = ok and len(cert.pairs) == want_pairs
    ok = ok and (time.monotonic() - started) < 300.0
    _verdict("criterion 4 (quasi-fibration certificate)", ok, started)


def test_criterion_5_matching_constructions(five_planes, uniform23):
    started = time.monotonic()
    ok = True
    for system in (uniform23, five_planes):
        for q in all_convex_tope_sets(system):
            m = matching_convex_critical(system, q)
            ok = ok and m.is_acyclic().acyclic
            ok = ok and m.critical_cells() == {
                str(c) for c in dual_subcomplex(system, q)
            }
        lat = build_lattice(system)
        modular_coatoms = [
            f
            for f in lat.flats_of_rank(lat.rank() - 1)
            if lat.is_modular_flat(f).ok
        ]
        for x in modular_coatoms:
            loc = salvetti_localization(system, x)
            for top in sorted(loc.target.poset.maximal_elements()):
                bp = loc.target.by_id[top].tope
                for a in sorted(loc.target.poset.below(top)):
                    m = matching_salvetti_fiber(loc, a, bp, lat)
                    ok = ok and m.is_acyclic().acyclic
                    ok = ok and m.critical_cells() == frozenset(
                        loc.fiber(a).elements
                    )
    _verdict("criterion 5 (matching constructions)", ok, started)


def _random_linear_extension(poset: FinitePoset, rng: random.Random) -> list[str]:
    out = []
    placed: set[str] = set()
    remaining = set(poset.elements)
    while remaining:
        ready = [
            x
            for x in remaining
            if all(y == x or y in placed for y in poset.below(x))
        ]
        pick = rng.choice(sorted(ready))
        out.append(pick)
        placed.add(pick)
        remaining.discard(pick)
    return out


def test_criterion_6_shellings(all_corpus):
    started = time.monotonic()
    rng = random.Random(20250809)
    ok = True
    for name, system in all_corpus.items():
        if system.rank() > 3:
            continue
        poset = sphere_poset(system)
        topes = sorted(system.topes(), key=str)
        for _ in range(50):
            base = rng.choice(topes)
            tp = tope_poset(system, base)
            order = _random_linear_extension(tp.poset, rng)
            ok = ok and verify_shelling(poset, order, depth=3).ok
        # shellable-ball certificates for the convex pairs
        convex_sets = all_convex_tope_sets(system)
        if len(topes) > 24:
            convex_sets = rng.sample(convex_sets, 40)
        by_text = system.by_text()
        for q in convex_sets:
            if q == frozenset(system.topes()):
                continue
            ok = ok and _ball_certificates_ok(system, q, poset)
    _verdict("criterion 6 (shellings and shellable balls)", ok, started)


def _ball_certificates_ok(system, q, poset) -> bool:
    topes = system.topes()
    base = min(q, key=str)
    ext = convex_first_extension(system, base, q)
    q_order = [str(t) for t in ext if t in q]
    rest_order = [str(t) for t in reversed(ext) if t not in q]
    ok = True
    for cells, front in ((q_order, True), (rest_order, False)):
        if not cells:
            continue
        members = frozenset(system.by_text()[t] for t in cells)
        ideal = subcomplex_LQ(system, members) - {system.zero}
        sub = poset.subposet([str(c) for c in ideal])
        order = ShellingOrder(tuple(cells))
        ok = ok and verify_shelling(sub, order, depth=3).ok
        vertex = min(x for x in sub.minimal_elements() if sub.leq(x, cells[0]))
        m = matching_from_shelling(sub, order, vertex)
        ok = ok and m.critical_cells() == {vertex}
    return ok


def test_criterion_7_supersolvable_extension(non_pappus):
    from omkit.extensions import supersolvable_extension

    started = time.monotonic()
    result = supersolvable_extension(non_pappus)
    ok = len(result.steps) >= 1
    ok = ok and all(s.disjoint_after < s.disjoint_before for s in result.steps)
    lat = build_lattice(result.final)
    chain = lat.is_supersolvable()
    ok = ok and chain is not None
    restricted = {c.restrict(non_pappus.ground) for c in result.final.covectors}
    ok = ok and restricted == non_pappus.covectors
    ok = ok and (time.monotonic() - started) < 600.0
    _verdict("criterion 7 (supersolvable extension)", ok, started)


def test_criterion_8_rank_data(five_planes):
    started = time.monotonic()
    seq = semidirect_rank_sequence(five_planes)
    ok = seq == (2, 2, 1)
    res = homology(salvetti(five_planes).poset)
    ok = ok and sum(seq) == 5 == res.betti[1]
    loc = salvetti_localization(five_planes, {"H1", "H2", "H3"})
    for cid in sorted(loc.target.poset.minimal_elements()):
        ok = ok and graph_free_rank(loc.fiber(cid)) == 2
    _verdict("criterion 8 (fundamental-group rank data)", ok, started)


def test_criterion_9_property_suites(all_corpus):
    started = time.monotonic()
    ok = True
    for name, system in all_corpus.items():
        covs = sorted(system.covectors, key=str)
        # sign-vector laws, exhaustive on pairs, sampled triples when large
        for a in covs:
            for b in covs:
                ok = ok and a.compose(b).zero_set() == a.zero_set() & b.zero_set()
                ok = ok and a.separator(b) == b.separator(a)
            if not ok:
                break
        rng = random.Random(5)
        triples = (
            list(itertools.product(covs, repeat=3))
            if len(covs) <= 30
            else [tuple(rng.choice(covs) for _ in range(3)) for _ in range(4000)]
        )
        for a, b, c in triples:
            ok = ok and a.compose(b).compose(c) == a.compose(b.compose(c))
        ok = ok and _localization_laws_ok(system)
        ok = ok and _brylawski_ok(system)
        ok = ok and _dual_matching_ok(system)
    _verdict("criterion 9 (property suites)", ok, started)


def _localization_laws_ok(system) -> bool:
    lat = build_lattice(system)
    ok = True
    covs = sorted(system.covectors, key=str)
    big = len(covs) > 100
    for x in lat.flats:
        keep = [lab for lab in system.ground if lab in x]
        loc, rho = system.localization(x)
        pairs = (
            itertools.product(covs, covs)
            if not big
            else zip(covs, reversed(covs))
        )
        for a, b in pairs:
            ok = ok and a.compose(b).restrict(keep) == a.restrict(keep).compose(
                b.restrict(keep)
            )
        anchors = [c for c in covs if c.zero_set() == x]
        for alpha in anchors:
            iota = system.section_iota(alpha)
            ok = ok and all(
                rho.assignment[iota.assignment[cid]] == cid
                for cid in iota.source.elements
            )
        if len(system) <= 200 and lat.rank_of[x] >= lat.rank() - 1:
            sloc = salvetti_localization(system, x)
            for alpha in anchors:
                section = sloc.section(alpha)
                ok = ok and all(
                    sloc.map.assignment[section.assignment[cid]] == cid
                    for cid in section.source.elements
                )
    return ok


def _brylawski_ok(system) -> bool:
    lat = build_lattice(system)
    ok = True
    for x in lat.flats:
        if not lat.is_modular_flat(x).ok:
            continue
        for y in lat.flats:
            p_x, s_y = lat.brylawski_iso(x, y)  # raises unless mutually inverse
            ok = ok and p_x.image() == frozenset(p_x.target.elements)
    return ok


def _dual_matching_ok(system) -> bool:
    ok = True
    convex = all_convex_tope_sets(system)
    sample = convex if len(convex) <= 40 else convex[:: len(convex) // 40]
    for q in sample:
        m = matching_convex_critical(system, q)
        d = m.dual()
        ok = ok and d.is_acyclic().acyclic == m.is_acyclic().acyclic
        ok = ok and d.critical_cells() == m.critical_cells()
    return ok
