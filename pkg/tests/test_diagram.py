"""Labelled diagrams, phi-cell surgery and the collision audits."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spheremotion.diagram import (
    DiagramError,
    HowieDiagram,
    audit_standard_collisions,
    bad_contact_report,
    check_diagram_over,
    face_cells,
    face_label,
    find_reducible_pair,
    is_phi_cell,
    is_phi_reduced,
    lemma17_audit,
    mirror_cells,
    phi_reduce_move,
    vertex_label,
)
from spheremotion.fuzzing import make_rng, random_base_element, random_sphere_map
from spheremotion.goldens import banded_sphere_map, doubled_polygon_map, unit_speed_motion
from spheremotion.groups import FreeGroup, FreeProductWord, word
from spheremotion.motion import (
    CarSchedule,
    CollisionReport,
    MotionSchedule,
    check_separated_stops,
    complete_collisions,
    multiplicities,
    standard_motion,
    standard_multiple_motion,
    time_shifted_car,
)
from spheremotion.rewriting import RelativePresentation, phi
from spheremotion.surface import OrientedMap, classify_map

B2 = FreeGroup(2)


def gw(*letters):
    return FreeProductWord.g(B2, tuple(letters))


def balloon_diagram():
    m = OrientedMap("sphere", (((0, 1),), ((0, -1),)))
    return HowieDiagram(m, {(0, 0): gw(1), (1, 0): gw(-1)}, {0: 1})


def lune_map(n):
    return OrientedMap(
        "sphere", tuple(((i, -1), ((i + 1) % n, 1)) for i in range(n))
    )


def phi_chain(n):
    """n lunes around the sphere, lune i a phi cell for its own letter."""
    base = FreeGroup(n)
    m = lune_map(n)
    labels = {}
    for i in range(n):
        p = FreeProductWord.g(base, (i + 1,))
        labels[(i, 1)] = p
        labels[(i, 0)] = phi(p).inverse()
    return HowieDiagram(
        m,
        labels,
        {e: 1 for e in m.edge_ids},
        exterior_vertices=frozenset(m.vertices()),
        phi_s=1,
    )


def mirror_pentagon():
    """The doubled pentagon with back labels inverting their front partner."""
    m = doubled_polygon_map((1, 1, -1, 1, -1))
    labels = {(0, j): gw(*[1] * (j + 1)) for j in range(5)}
    for v in m.vertices():
        (_, jf), (fb, jb) = sorted(v)
        labels[(fb, jb)] = labels[(0, jf)].inverse()
    return HowieDiagram(m, labels, {e: 1 for e in m.edge_ids})


# -- construction and labels ---------------------------------------------------


def test_diagram_rejects_bad_data():
    m = OrientedMap("sphere", (((0, 1),), ((0, -1),)))
    with pytest.raises(DiagramError, match="every corner needs a label"):
        HowieDiagram(m, {(0, 0): gw(1)}, {0: 1})
    with pytest.raises(DiagramError, match="t-free"):
        HowieDiagram(m, {(0, 0): word(B2, ("t", 1, 1)), (1, 0): gw(1)}, {0: 1})
    with pytest.raises(DiagramError, match="mixed base"):
        other = FreeProductWord.g(FreeGroup(1), (1,))
        HowieDiagram(m, {(0, 0): gw(1), (1, 0): other}, {0: 1})
    labels = {(0, 0): gw(1), (1, 0): gw(-1)}
    with pytest.raises(DiagramError, match="every edge needs a symbol"):
        HowieDiagram(m, labels, {})
    with pytest.raises(DiagramError, match="positive int"):
        HowieDiagram(m, labels, {0: 0})
    with pytest.raises(DiagramError, match="not a vertex"):
        HowieDiagram(m, labels, {0: 1}, exterior_vertices=frozenset({((9, 9),)}))
    with pytest.raises(DiagramError, match="exterior face"):
        HowieDiagram(m, labels, {0: 1}, exterior_faces=frozenset({7}))
    with pytest.raises(DiagramError, match="large face"):
        HowieDiagram(m, labels, {0: 1}, large_faces=frozenset({7}))


def test_balloon_diagram_over_and_reducible():
    d = balloon_diagram()
    assert face_label(d, 0) == word(B2, ("t", 1, 1), ("g", 0, (1,)))
    assert face_label(d, 1) == word(B2, ("t", 1, -1), ("g", 0, (-1,)))
    v = d.map.vertices()[0]
    assert vertex_label(d, v).is_identity()
    pres = RelativePresentation(B2, 0, (face_label(d, 0),), has_phi=False)
    rep = check_diagram_over(d, pres)
    assert rep["ok"]
    assert find_reducible_pair(d) == (0, 1, 0)


def test_check_diagram_over_base_mismatch():
    d = balloon_diagram()
    pres = RelativePresentation(
        FreeGroup(1), 0, (word(FreeGroup(1), ("t", 1, 1), ("g", 0, (1,))),), False
    )
    with pytest.raises(DiagramError, match="different base group"):
        check_diagram_over(d, pres)


def test_vertex_label_start_only_conjugates():
    d = mirror_pentagon()
    for v in d.map.vertices():
        base_word = vertex_label(d, v)
        for c in v:
            assert vertex_label(d, v, start=c).is_conjugate_to(base_word)
    with pytest.raises(DiagramError, match="not at this vertex"):
        vertex_label(d, d.map.vertices()[0], start=(0, 3))


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10**6))
def test_label_rotation_is_conjugation(seed):
    rng = make_rng(seed)
    m = random_sphere_map(rng)
    labels = {
        c: FreeProductWord.g(B2, random_base_element(B2, rng)) for c in m.corners()
    }
    d = HowieDiagram(m, labels, {e: 1 + rng.randrange(3) for e in m.edge_ids})
    f = rng.randrange(m.face_count())
    k = rng.randrange(len(m.faces[f]))
    assert face_label(d, f, k).is_conjugate_to(face_label(d, f))
    v = m.vertices()[rng.randrange(len(m.vertices()))]
    c = sorted(v)[rng.randrange(len(v))]
    assert vertex_label(d, v, start=c).is_conjugate_to(vertex_label(d, v))
    cells = face_cells(d, f, k)
    assert mirror_cells(mirror_cells(cells)) == cells


def test_mirror_pentagon_is_valid_and_reducible():
    d = mirror_pentagon()
    pres = RelativePresentation(B2, 0, (face_label(d, 0),), has_phi=False)
    assert check_diagram_over(d, pres)["ok"]
    pair = find_reducible_pair(d)
    assert pair is not None and pair[:2] == (0, 1)


# -- phi cells and the merge move ------------------------------------------------


def test_phi_cell_recognition():
    d = phi_chain(2)
    assert is_phi_cell(d, 0) and is_phi_cell(d, 1)
    base = d.base
    p = FreeProductWord.g(base, (1,))

    # rotated dart order is still recognised
    m = OrientedMap("sphere", (((1, 1), (0, -1)), ((0, 1), (1, -1))))
    rot = HowieDiagram(
        m,
        {(0, 0): p, (0, 1): phi(p).inverse(), (1, 0): p, (1, 1): phi(p).inverse()},
        {0: 1, 1: 1},
        phi_s=1,
    )
    assert is_phi_cell(rot, 0) and is_phi_cell(rot, 1)

    # no phi structure, word outside P, wrong mate, identity word
    assert not is_phi_cell(HowieDiagram(m, rot.corner_labels, {0: 1, 1: 1}), 0)
    shifted = HowieDiagram(
        m,
        {c: phi(w) for c, w in rot.corner_labels.items()},
        {0: 1, 1: 1},
        phi_s=1,
    )
    assert not is_phi_cell(shifted, 0)
    unmated = HowieDiagram(
        m,
        {(0, 0): p, (0, 1): phi(p), (1, 0): p, (1, 1): phi(p)},
        {0: 1, 1: 1},
        phi_s=1,
    )
    assert not is_phi_cell(unmated, 0)
    one = FreeProductWord.one(base)
    blank = HowieDiagram(m, {c: one for c in m.corners()}, {0: 1, 1: 1}, phi_s=1)
    assert not is_phi_cell(blank, 0)


def test_phi_cells_satisfy_diagram_over():
    d = phi_chain(2)
    relator = word(d.base, ("t", 1, 1), ("g", 0, (1,)))
    yes = RelativePresentation(d.base, 1, (relator,), has_phi=True)
    no = RelativePresentation(d.base, 1, (relator,), has_phi=False)
    assert check_diagram_over(d, yes)["ok"]
    assert check_diagram_over(d, no)["face_violations"] == (0, 1)


def test_phi_merge_chain_to_single_cell():
    n = 4
    d = phi_chain(n)
    base = d.base
    relator = word(base, ("t", 1, 1), ("g", 0, (1,)))
    pres = RelativePresentation(base, 1, (relator,), has_phi=True)
    for e in range(1, n):
        assert not is_phi_reduced(d)
        d = phi_reduce_move(d, e)
        assert d.map.euler_characteristic() == 2
        assert all(is_phi_cell(d, f) for f in range(d.map.face_count()))
        assert check_diagram_over(d, pres)["ok"]
    assert d.map.face_count() == 1 and d.map.edge_count() == 1
    (_, s1, p), (_, s2, q) = face_cells(d, 0)
    assert (s1, s2) == (-1, 1)
    assert p == FreeProductWord.g(base, (1, 2, 3, 4))
    assert q == phi(p).inverse()
    assert is_phi_reduced(d)
    assert len(d.exterior_vertices) == 2
    assert set(d.exterior_vertices) <= set(d.map.vertices())


def test_phi_merge_refusals():
    d = phi_chain(2)
    base = d.base
    p = FreeProductWord.g(base, (1,))
    inverse_mate = HowieDiagram(
        d.map,
        {
            (0, 1): p,
            (0, 0): phi(p).inverse(),
            (1, 1): p.inverse(),
            (1, 0): phi(p.inverse()).inverse(),
        },
        {0: 1, 1: 1},
        phi_s=1,
    )
    assert find_reducible_pair(inverse_mate) is not None
    with pytest.raises(DiagramError, match="mutually inverse"):
        phi_reduce_move(inverse_mate, 0)

    with pytest.raises(DiagramError, match="two phi cells"):
        phi_reduce_move(balloon_diagram(), 0)

    purse = OrientedMap("sphere", (((0, -1), (0, 1)),))
    one = FreeProductWord.one(base)
    pd = HowieDiagram(purse, {c: one for c in purse.corners()}, {0: 1}, phi_s=1)
    with pytest.raises(DiagramError, match="one face"):
        phi_reduce_move(pd, 0)

    walled = HowieDiagram(
        d.map,
        d.corner_labels,
        d.edge_labels,
        exterior_faces=frozenset({1}),
        phi_s=1,
    )
    with pytest.raises(DiagramError, match="interior cells"):
        phi_reduce_move(walled, 0)

    with pytest.raises(DiagramError, match="no phi structure"):
        is_phi_reduced(balloon_diagram())


# -- standard collision audit ----------------------------------------------------


def test_audit_mirror_pentagon_cannot_refute():
    d = mirror_pentagon()
    ms = standard_motion(d.map)
    audit = audit_standard_collisions(d, ms)
    assert not audit["passes"]
    assert {r["kind"] for r in audit["vertices"]} == {"source", "sink"}
    assert all(r["label"].is_identity() for r in audit["vertices"])
    assert audit["interior_edge_loci"] == ()


def test_audit_perturbed_labels_refute_but_break_validity():
    d = mirror_pentagon()
    ms = standard_motion(d.map)
    hit = sorted(complete_collisions(d.map, ms).vertex_loci)
    labels = dict(d.corner_labels)
    for v in hit:
        back = sorted(v)[1]
        labels[back] = labels[back] * gw(2)
    bent = HowieDiagram(d.map, labels, d.edge_labels)
    audit = audit_standard_collisions(bent, ms)
    assert audit["passes"]
    assert all(r["refuted"] for r in audit["vertices"])
    over = check_diagram_over(
        bent, RelativePresentation(B2, 0, (face_label(d, 0),), has_phi=False)
    )
    assert set(hit) <= set(over["vertex_violations"])


def test_audit_rejects_nonstandard_motion():
    d = mirror_pentagon()
    with pytest.raises(DiagramError, match="not standard on interior face"):
        audit_standard_collisions(d, unit_speed_motion(d.map))


def test_audit_interior_edge_loci_block_the_pass():
    d = mirror_pentagon()
    ms = standard_motion(d.map)
    real = complete_collisions(d.map, ms)
    spiked = CollisionReport(
        real.horizon, dict(real.vertex_loci), {(2, F(1, 2)): ((F(0), F(0)),)}
    )
    labels = dict(d.corner_labels)
    for v in real.vertex_loci:
        back = sorted(v)[1]
        labels[back] = labels[back] * gw(2)
    bent = HowieDiagram(d.map, labels, d.edge_labels)
    audit = audit_standard_collisions(bent, ms, collisions=spiked)
    assert not audit["passes"]
    assert audit["interior_edge_loci"] == ((2, F(1, 2)),)

    # the same locus on an exterior face boundary does not count
    opened = HowieDiagram(
        d.map, labels, d.edge_labels, exterior_faces=frozenset({1})
    )
    audit = audit_standard_collisions(opened, ms, collisions=spiked)
    assert audit["passes"]
    assert audit["interior_edge_loci"] == ()


def test_audit_banded_map_with_family_override():
    m = banded_sphere_map()
    info = dict(classify_map(m), m=1)
    ms = standard_multiple_motion(m, info)
    one = FreeProductWord.one(B2)
    d = HowieDiagram(m, {c: one for c in m.corners()}, {e: 1 for e in m.edge_ids})
    audit = audit_standard_collisions(d, ms, info=info)
    assert not audit["passes"]
    assert len(audit["vertices"]) == 8


# -- bad contacts ----------------------------------------------------------------


def beach4():
    return lune_map(4)


def beach4_diagram(**marks):
    m = beach4()
    one = FreeProductWord.one(B2)
    return HowieDiagram(
        m, {c: one for c in m.corners()}, {e: 1 for e in m.edge_ids}, **marks
    )


def poles(m):
    north, south = m.vertices()
    return north, south


def test_bad_contact_between_opposite_lunes():
    d = beach4_diagram(large_faces=frozenset({0, 2}))
    north, south = poles(d.map)
    fake = CollisionReport(
        F(2), {north: ((F(0), F(0)),), south: ((F(1), F(1)),)}, {}
    )
    contacts = bad_contact_report(d, collisions=fake)
    assert contacts
    assert {c["faces"] for c in contacts} == {(0, 2)}
    assert {c["region"] for c in contacts} == {frozenset({1}), frozenset({3})}


def test_bad_contact_negatives():
    m = beach4()
    north, south = poles(m)
    fake = CollisionReport(
        F(2), {north: ((F(0), F(0)),), south: ((F(1), F(1)),)}, {}
    )
    shielded = beach4_diagram(
        large_faces=frozenset({0, 2}), exterior_vertices=frozenset({south})
    )
    assert bad_contact_report(shielded, collisions=fake) == ()
    crowded = beach4_diagram(large_faces=frozenset({0, 1, 2, 3}))
    assert bad_contact_report(crowded, collisions=fake) == ()
    with pytest.raises(DiagramError, match="2-grading"):
        bad_contact_report(beach4_diagram(), collisions=fake)
    with pytest.raises(DiagramError, match="motion or explicit collisions"):
        bad_contact_report(beach4_diagram(large_faces=frozenset({0})))


# -- the impossibility audit -----------------------------------------------------


def beach4_multiple_motion():
    """Multiplicity (4, 1, 4, 1) cars, no stops, global period 2."""
    T = F(2)
    cars = []
    for f in (0, 2):
        base = CarSchedule(
            f, 4 * T, tuple((2 * F(j), F(j, 2)) for j in range(4)), degree=1
        )
        cars += [time_shifted_car(base, 2, j * T) for j in range(4)]
    for f in (1, 3):
        cars.append(CarSchedule(f, T, ((F(0), F(0)), (F(1), F(1))), degree=1))
    return MotionSchedule(T, tuple(cars))


def test_lemma17_contradiction_branch():
    m = beach4()
    north, south = poles(m)
    ms = beach4_multiple_motion()
    assert multiplicities(m, ms) == {0: 4, 1: 1, 2: 4, 3: 1}
    assert check_separated_stops(m, ms)["ok"]
    d = beach4_diagram(
        large_faces=frozenset({0, 2}), exterior_vertices=frozenset({south})
    )
    fake = CollisionReport(F(2), {north: ((F(0), F(0)),)}, {})
    out = lemma17_audit(d, ms, collisions=fake)
    assert out["conditions"] == {
        "multiplicities": True,
        "nonadjacent_large_corners": True,
        "no_bad_contact": True,
    }
    assert out["floor"] == 8 and out["gamma"]["cap"] == 6
    assert out["gamma"]["edges"] == ((0, 2),)
    assert out["contradiction"]


def test_lemma17_edge_point_on_small_side_fails_condition2():
    m = beach4()
    north, south = poles(m)
    d = beach4_diagram(
        large_faces=frozenset({0, 2}), exterior_vertices=frozenset({south})
    )
    fake = CollisionReport(
        F(2), {north: ((F(0), F(0)),)}, {(1, F(1, 2)): ((F(1), F(1)),)}
    )
    out = lemma17_audit(d, beach4_multiple_motion(), collisions=fake)
    assert out["interior_points"] == 2
    assert not out["conditions"]["nonadjacent_large_corners"]
    assert not out["contradiction"]


def test_lemma17_banded_map_fails_honestly():
    m = banded_sphere_map()
    ms = standard_multiple_motion(m, dict(classify_map(m), m=1))
    loci = sorted(complete_collisions(m, ms).vertex_loci)
    one = FreeProductWord.one(B2)
    d = HowieDiagram(
        m,
        {c: one for c in m.corners()},
        {e: 1 for e in m.edge_ids},
        exterior_vertices=frozenset({loci[0]}),
        large_faces=frozenset({0, 1}),
    )
    out = lemma17_audit(d, ms)
    assert out["conditions"]["multiplicities"]
    assert not out["conditions"]["nonadjacent_large_corners"]
    assert not out["contradiction"]
    assert out["floor"] == 8


def test_lemma17_preconditions():
    ms = beach4_multiple_motion()
    with pytest.raises(DiagramError, match="2-grading"):
        lemma17_audit(beach4_diagram(), ms)

    torus = OrientedMap("torus", (((0, 1), (1, 1), (0, -1), (1, -1)),))
    one = FreeProductWord.one(B2)
    dt = HowieDiagram(
        torus,
        {c: one for c in torus.corners()},
        {0: 1, 1: 1},
        large_faces=frozenset({0}),
    )
    parked = MotionSchedule(F(1), (CarSchedule(0, F(1), ((F(0), F(0)),)),))
    with pytest.raises(DiagramError, match="sphere"):
        lemma17_audit(dt, parked)

    unmarked = beach4_diagram(large_faces=frozenset({0, 2}))
    with pytest.raises(DiagramError, match="single exterior vertex"):
        lemma17_audit(unmarked, ms)

    pent = mirror_pentagon()
    loose = standard_motion(pent.map)
    bare = MotionSchedule(loose.period, loose.cars, frozenset())
    marked = HowieDiagram(
        pent.map,
        pent.corner_labels,
        pent.edge_labels,
        exterior_vertices=frozenset({pent.map.vertices()[0]}),
        large_faces=frozenset({0}),
    )
    with pytest.raises(DiagramError, match="separated stops"):
        lemma17_audit(marked, bare)
