import pytest

from omkit.lattices import build_lattice
from omkit.matroids import NotAFlatError
from omkit.salvetti import (
    affine_salvetti,
    cell_id,
    fiber_rank2_model,
    localization_square_commutes,
    parse_cell_id,
    principal_ideal_iso,
    salvetti,
    salvetti_localization,
    stratify_fiber,
)


def test_rank1_salvetti_is_a_circle(rank1):
    s = salvetti(rank1)
    assert len(s) == 4
    dims = sorted(s.dimension_of(c) for c in s.poset.elements)
    assert dims == [0, 0, 1, 1]
    # Euler characteristic zero
    assert sum((-1) ** s.dimension_of(c) for c in s.poset.elements) == 0


def test_five_planes_salvetti_counts(five_planes):
    s = salvetti(five_planes)
    assert len(s) == 148
    assert s.poset.height() == five_planes.rank()


def test_salvetti_pure(all_corpus):
    # every maximal chain of the Salvetti poset has length equal to the rank
    for name, system in all_corpus.items():
        if len(system) > 200:
            continue
        s = salvetti(system)
        heights = s.poset.heights()
        up_heights = s.poset.dual().heights()
        for cid in s.poset.elements:
            assert heights[cid] + up_heights[cid] == system.rank(), (name, cid)


def test_cell_ids_round_trip(five_planes):
    s = salvetti(five_planes)
    for cid in sorted(s.poset.elements)[:10]:
        cell = parse_cell_id(cid, five_planes)
        assert cell.id == cid


def test_localization_map(five_planes):
    loc = salvetti_localization(five_planes, {"H1", "H2", "H3"})
    assert len(loc.target) == 24
    assert loc.map.is_surjective()
    with pytest.raises(NotAFlatError):
        salvetti_localization(five_planes, {"H1", "H4"})


def test_localization_identity_flat(five_planes):
    loc = salvetti_localization(five_planes, five_planes.ground)
    assert all(loc.map.assignment[c] == c for c in loc.source.poset.elements)


def test_sections_of_localization(five_planes):
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    anchors = sorted(
        (c for c in five_planes.covectors if c.zero_set() == x), key=str
    )
    assert len(anchors) == 2
    for alpha in anchors:
        section = loc.section(alpha)  # raises if not order preserving or not a section
        assert len(section.assignment) == len(loc.target)


def test_fibers_connected(five_planes, braid3):
    from omkit.homology import betti_numbers

    for system, flat in (
        (five_planes, {"H1", "H2", "H3"}),
        (braid3, {"12", "13", "23"}),
    ):
        loc = salvetti_localization(system, flat)
        for cid in sorted(loc.target.poset.elements):
            assert betti_numbers(loc.fiber(cid))[0] == 1


def test_principal_ideal_isomorphism(five_planes, rank1):
    for system in (five_planes, rank1):
        s = salvetti(system)
        for tope in sorted(system.topes(), key=str)[:3]:
            to_dual, from_dual = principal_ideal_iso(s, tope)
            assert len(to_dual.source.elements) == len(system.covectors)


def test_localization_square(five_planes):
    loc = salvetti_localization(five_planes, {"H1", "H2", "H3"})
    for tope in sorted(five_planes.topes(), key=str):
        assert localization_square_commutes(loc, tope)


def test_affine_salvetti_is_graph(uniform23):
    aff = affine_salvetti(uniform23, "e1")
    heights = aff.poset.heights()
    assert max(heights.values()) <= 1


def test_fiber_of_minimal_cell_contains_it(five_planes):
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    for cid in sorted(loc.target.poset.minimal_elements()):
        cell = loc.target.by_id[cid]
        lifted = loc.section(
            sorted(
                (c for c in five_planes.covectors if c.zero_set() == x), key=str
            )[0]
        ).assignment[cid]
        assert lifted in loc.fiber(cid).elements


def test_maximal_fiber_is_union_of_tope_ideals(five_planes):
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    bp = sorted(loc.localized.topes(), key=str)[0]
    keep = [lab for lab in five_planes.ground if lab in x]
    fiber = loc.fiber(cell_id(loc.localized.zero, bp))
    union = set()
    for t in five_planes.topes():
        if t.restrict(keep) == bp:
            union |= loc.source.poset.below(cell_id(five_planes.zero, t))
    assert set(fiber.elements) == union


def test_stratification(five_planes):
    lat = build_lattice(five_planes)
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    for bp in sorted(loc.localized.topes(), key=str):
        strat = stratify_fiber(loc, bp, lat)
        assert len(strat.tope_string) == 3
        assert [len(s) for s in strat.separators] == [1, 1]
        assert len(strat.strata[0]) == len(five_planes.covectors)
        for i, sep in enumerate(strat.separators):
            e = next(iter(sep))
            vanish = sum(
                1 for c in five_planes.covectors if c.sign(e) == 0
            )
            assert len(strat.strata[i + 1]) == vanish
        # strata partition the fiber
        total = sum(len(s) for s in strat.strata)
        assert total == len(strat.fiber.elements)
        # the filters are principal: J_0 everything, J_i flats containing e_i
        assert strat.filters[0] == frozenset(lat.flats)
        for i, sep in enumerate(strat.separators):
            e = next(iter(sep))
            assert strat.filters[i + 1] == frozenset(
                f for f in lat.flats if e in f
            )


def test_section_lifts_are_string_ends(five_planes):
    # iota_alpha(B') and iota_beta(B') are the two end topes of the string
    lat = build_lattice(five_planes)
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    keep = [lab for lab in five_planes.ground if lab in x]
    anchors = sorted(
        (c for c in five_planes.covectors if c.zero_set() == x), key=str
    )
    for bp in sorted(loc.localized.topes(), key=str):
        strat = stratify_fiber(loc, bp, lat)
        string = strat.tope_string
        lifts = set()
        for alpha in anchors:
            plus, minus = alpha.plus, alpha.minus
            idx = {lab: i for i, lab in enumerate(five_planes.ground)}
            for j, lab in enumerate(keep):
                bit = 1 << idx[lab]
                if bp.plus >> j & 1:
                    plus |= bit
                elif bp.minus >> j & 1:
                    minus |= bit
            lifts.add(
                next(t for t in string if (t.plus, t.minus) == (plus, minus))
            )
        assert lifts == {string[0], string[-1]}


def test_strata_are_contraction_balls(five_planes):
    # N_0 is the whole dual ball; each later stratum is order-isomorphic to
    # the dual of the covectors vanishing on its separator element, via
    # forgetting the tope coordinate
    lat = build_lattice(five_planes)
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    system = five_planes
    for bp in sorted(loc.localized.topes(), key=str):
        strat = stratify_fiber(loc, bp, lat)
        for i, stratum in enumerate(strat.strata):
            t_i = strat.tope_string[i]
            faces = {}
            for cid in stratum:
                cell = loc.source.by_id[cid]
                assert cell.tope == cell.face.compose(t_i)
                faces[cid] = cell.face
            if i == 0:
                want = set(system.covectors)
            else:
                e = next(iter(strat.separators[i - 1]))
                want = {c for c in system.covectors if c.sign(e) == 0}
            assert set(faces.values()) == want
            # order within the stratum is the dual covector order
            sub = strat.fiber.subposet(stratum)
            for a in stratum:
                for b in stratum:
                    assert sub.leq(a, b) == faces[b].leq(faces[a])


def test_stratification_refuses_bad_flats(five_planes, braid3):
    from omkit.salvetti import StratificationError

    loc = salvetti_localization(five_planes, {"H2", "H4"})
    bp = sorted(loc.localized.topes(), key=str)[0]
    with pytest.raises(StratificationError):
        stratify_fiber(loc, bp)  # not modular
    loc1 = salvetti_localization(five_planes, {"H1"})
    bp1 = sorted(loc1.localized.topes(), key=str)[0]
    with pytest.raises(StratificationError):
        stratify_fiber(loc1, bp1)  # corank 2, not 1


def test_fiber_cells_have_low_dimension(five_planes):
    # over a modular corank-one flat the covector-level fiber is a string
    x = frozenset({"H1", "H2", "H3"})
    keep = [lab for lab in five_planes.ground if lab in x]
    loc_system = five_planes.restriction(x)
    lat = build_lattice(five_planes)
    for bp in sorted(loc_system.topes(), key=str):
        for c in five_planes.covectors:
            if c.restrict(keep) == bp:
                assert lat.rank_of[c.zero_set()] <= 1


def test_rank2_model_of_fiber(five_planes, braid3):
    x = frozenset({"H1", "H2", "H3"})
    loc = salvetti_localization(five_planes, x)
    bp = sorted(loc.localized.topes(), key=str)[0]
    model, mapping = fiber_rank2_model(loc, bp)
    assert model.check_axioms().ok
    assert model.rank() == 2
    aff = model.decone("g")
    assert len(aff.covectors_plus) == len(mapping)
    # fiber string: three topes and two one-dimensional cells
    tope_count = sum(1 for c in aff.covectors_plus if c in model.topes())
    assert tope_count == 3
    locb = salvetti_localization(braid3, {"12", "13", "23"})
    for bpb in sorted(locb.localized.topes(), key=str):
        model_b, _ = fiber_rank2_model(locb, bpb)
        assert model_b.check_axioms().ok
        assert model_b.rank() == 2


def test_rank2_string_model_small(rank1):
    # rank-2 system on two elements: every fiber string has two topes
    from omkit.matroids import RationalArrangement, from_arrangement

    r22 = from_arrangement(RationalArrangement(("e1", "e2"), [(1, 0), (0, 1)]))
    loc = salvetti_localization(r22, {"e1"})
    for bp in sorted(loc.localized.topes(), key=str):
        strat = stratify_fiber(loc, bp)
        assert len(strat.tope_string) == 2
