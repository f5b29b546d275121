"""Labelled maps over relative presentations and their collision audits.

A diagram is an oriented map whose corners carry t-free words over the
base free product and whose edges carry cyclic-generator symbols; the
edge arrow is the + dart.  Faces read anticlockwise, vertices clockwise,
both from the single global anticlockwise convention by reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import FreeProductWord
from .motion import (
    MotionSchedule,
    _functions_equal,
    check_separated_stops,
    collision_horizon,
    complete_collisions,
    intervals_instants,
    multiplicities,
    standard_motion,
    standard_multiple_motion,
)
from .rewriting import RelativePresentation, in_P, phi
from .surface import Corner, OrientedMap, classify_map


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class HowieDiagram:
    """Corner and edge labels on an oriented map, with exterior marks.

    corner_labels maps every corner to a t-free word, edge_labels maps
    every edge to the index of its cyclic generator.  phi_s, when set,
    switches on the phi family: cells p^t (p^phi)^-1 with p a nonidentity
    word in copies below phi_s count as relator cells.  large_faces adds
    the 2-grading.
    """

    map: OrientedMap
    corner_labels: dict
    edge_labels: dict
    exterior_vertices: frozenset = frozenset()
    exterior_faces: frozenset = frozenset()
    phi_s: Optional[int] = None
    large_faces: Optional[frozenset] = None

    def __post_init__(self):
        corners = set(self.map.corners())
        if set(self.corner_labels) != corners:
            raise DiagramError("every corner needs a label, and nothing else")
        base = None
        for c, w in self.corner_labels.items():
            if not isinstance(w, FreeProductWord) or w.has_t():
                raise DiagramError(f"corner {c}: label must be a t-free word")
            if base is None:
                base = w.base
            elif w.base != base:
                raise DiagramError("corner labels over mixed base groups")
        if set(self.edge_labels) != set(self.map.edge_ids):
            raise DiagramError("every edge needs a symbol, and nothing else")
        for e, j in self.edge_labels.items():
            if not isinstance(j, int) or j < 1:
                raise DiagramError(f"edge {e}: symbol index must be a positive int")
        vertices = set(self.map.vertices())
        if not set(self.exterior_vertices) <= vertices:
            raise DiagramError("exterior vertex mark is not a vertex of the map")
        faces = set(range(self.map.face_count()))
        if not set(self.exterior_faces) <= faces:
            raise DiagramError("exterior face mark is not a face of the map")
        if self.large_faces is not None and not set(self.large_faces) <= faces:
            raise DiagramError("large face mark is not a face of the map")

    @property
    def base(self):
        return next(iter(self.corner_labels.values())).base

    def interior_faces(self):
        return tuple(
            f for f in range(self.map.face_count()) if f not in self.exterior_faces
        )

    def interior_vertices(self):
        return tuple(v for v in self.map.vertices() if v not in self.exterior_vertices)


# ---------------------------------------------------------------------------
# labels
# ---------------------------------------------------------------------------


def face_cells(d: HowieDiagram, f: int, start: int = 0):
    """(symbol, sign, corner word) per dart anticlockwise, corner after dart."""
    b = d.map.faces[f]
    L = len(b)
    out = []
    for i in range(L):
        e, s = b[(start + i) % L]
        after = (f, (start + i + 1) % L)
        out.append((d.edge_labels[e], s, d.corner_labels[after]))
    return tuple(out)


def face_label(d: HowieDiagram, f: int, start: int = 0) -> FreeProductWord:
    """Anticlockwise edge-and-corner product, starting with dart `start`."""
    syls = []
    for j, s, w in face_cells(d, f, start):
        syls.append(("t", j, s))
        syls.extend(w.syllables)
    return FreeProductWord.from_syllables(d.base, syls)


def vertex_corners_acw(d: HowieDiagram, vertex) -> tuple:
    start = min(vertex)
    out = [start]
    c = d.map.next_corner_acw(start)
    while c != start:
        out.append(c)
        c = d.map.next_corner_acw(c)
    return tuple(out)


def vertex_label(d: HowieDiagram, vertex, start: Optional[Corner] = None):
    """Clockwise corner product; the start choice only conjugates it."""
    acw = vertex_corners_acw(d, vertex)
    if start is not None:
        if start not in acw:
            raise DiagramError(f"corner {start} is not at this vertex")
        k = acw.index(start)
        acw = acw[k:] + acw[:k]
    cw = (acw[0],) + tuple(reversed(acw[1:]))
    out = FreeProductWord.one(d.base)
    for c in cw:
        out = out * d.corner_labels[c]
    return out


# ---------------------------------------------------------------------------
# the diagram-over check
# ---------------------------------------------------------------------------


def is_phi_cell(d: HowieDiagram, f: int) -> bool:
    """A 2-gon reading t^-1 p t (p^phi)^-1 with p a nonidentity P-word."""
    if d.phi_s is None or len(d.map.faces[f]) != 2:
        return False
    cells = face_cells(d, f)
    if cells[0][1] == 1:
        cells = (cells[1], cells[0])
    (j1, s1, p), (j2, s2, q) = cells
    if (s1, s2) != (-1, 1) or j1 != j2:
        return False
    if p.is_identity() or not in_P(p, d.phi_s):
        return False
    return q == phi(p).inverse()


def check_diagram_over(d: HowieDiagram, pres: RelativePresentation) -> dict:
    """Interior faces must read relators up to rotation and inversion,
    interior vertex labels must collapse to the identity."""
    if pres.base != d.base:
        raise DiagramError("presentation over a different base group")
    face_violations = []
    for f in d.interior_faces():
        if pres.has_phi and d.phi_s is not None and is_phi_cell(d, f):
            continue
        w = face_label(d, f)
        # labels alternate t and corner syllables, so rotation agreement
        # is exactly conjugacy of the cyclic reductions
        if not any(
            w.is_conjugate_to(r) or w.is_conjugate_to(r.inverse())
            for r in pres.relators
        ):
            face_violations.append(f)
    vertex_violations = []
    for v in d.interior_vertices():
        if not vertex_label(d, v).is_identity():
            vertex_violations.append(v)
    return {
        "ok": not face_violations and not vertex_violations,
        "face_violations": tuple(face_violations),
        "vertex_violations": tuple(vertex_violations),
    }


# ---------------------------------------------------------------------------
# reduced and phi-reduced
# ---------------------------------------------------------------------------


def mirror_cells(cells: Sequence) -> tuple:
    """The cell list of a face folding onto the given one across cell 0."""
    (j1, s1, h1) = cells[0]
    rest = list(cells[1:])
    labels = [c[2] for c in cells]
    out = [(j1, -s1, labels[-1].inverse())]
    for i, (j, s, _) in enumerate(reversed(rest)):
        out.append((j, -s, labels[len(rest) - 1 - i].inverse()))
    return tuple(out)


def find_reducible_pair(d: HowieDiagram):
    """A witness (face, face, edge) whose labels written from the shared
    edge are mutually inverse, or None when the diagram is reduced."""
    for e in sorted(d.map.edge_ids):
        f1, i1 = d.map.dart_owner((e, 1))
        f2, i2 = d.map.dart_owner((e, -1))
        if f1 == f2:
            continue
        if f1 in d.exterior_faces or f2 in d.exterior_faces:
            continue
        cells1 = face_cells(d, f1, i1)
        cells2 = face_cells(d, f2, i2)
        if len(cells1) == len(cells2) and cells2 == mirror_cells(cells1):
            return (f1, f2, e)
    return None


def is_phi_reduced(d: HowieDiagram) -> bool:
    """Reduced, and no two distinct interior phi cells share an edge."""
    if d.phi_s is None:
        raise DiagramError("no phi structure on this diagram")
    if find_reducible_pair(d) is not None:
        return False
    return _adjacent_phi_cells(d) is None


def _adjacent_phi_cells(d: HowieDiagram):
    for e in sorted(d.map.edge_ids):
        f1, _ = d.map.dart_owner((e, 1))
        f2, _ = d.map.dart_owner((e, -1))
        if f1 == f2 or f1 in d.exterior_faces or f2 in d.exterior_faces:
            continue
        if is_phi_cell(d, f1) and is_phi_cell(d, f2):
            return (f1, f2, e)
    return None


def phi_reduce_move(d: HowieDiagram, edge: int) -> HowieDiagram:
    """Merge the two distinct interior phi cells across `edge`.

    The two cells p^t (p^phi)^-1 and q^t (q^phi)^-1 become one cell for
    pq.  Faces and edges both drop by one, exterior labels survive.  A
    mutually inverse pair (q = p^-1) is refused: that is a reducible
    pair, not a removable edge.
    """
    m = d.map
    f1, i1 = m.dart_owner((edge, 1))
    f2, i2 = m.dart_owner((edge, -1))
    if f1 == f2:
        raise DiagramError("both sides of the edge lie on one face")
    if f1 in d.exterior_faces or f2 in d.exterior_faces:
        raise DiagramError("phi reduction needs interior cells")
    if not (is_phi_cell(d, f1) and is_phi_cell(d, f2)):
        raise DiagramError("phi reduction needs two phi cells")
    if face_cells(d, f2, i2) == mirror_cells(face_cells(d, f1, i1)):
        raise DiagramError("mutually inverse cells form a reducible pair")

    other1 = m.faces[f1][1 - i1]
    other2 = m.faces[f2][1 - i2]
    # corner after other1 merges F1's then F2's label, in boundary order
    lab1 = d.corner_labels[(f1, i1)] * d.corner_labels[(f2, 1 - i2)]
    lab2 = d.corner_labels[(f2, i2)] * d.corner_labels[(f1, 1 - i1)]

    keep = [f for f in range(m.face_count()) if f != f2]
    new_index = {f: k for k, f in enumerate(keep)}
    faces = []
    for f in keep:
        faces.append((other1, other2) if f == f1 else m.faces[f])
    new_map = OrientedMap(m.surface, tuple(faces))

    corner_labels = {}
    translate = {}
    for f in keep:
        nf = new_index[f]
        if f == f1:
            continue
        for j in range(len(m.faces[f])):
            corner_labels[(nf, j)] = d.corner_labels[(f, j)]
            translate[(f, j)] = (nf, j)
    nf1 = new_index[f1]
    corner_labels[(nf1, 1)] = lab1  # after other1 = before other2
    corner_labels[(nf1, 0)] = lab2
    translate[(f1, i1)] = (nf1, 1)
    translate[(f2, 1 - i2)] = (nf1, 1)
    translate[(f2, i2)] = (nf1, 0)
    translate[(f1, 1 - i1)] = (nf1, 0)

    edge_labels = {e: j for e, j in d.edge_labels.items() if e != edge}
    new_vertices = new_map.vertices()

    def find_vertex(old):
        images = {translate[c] for c in old}
        for v in new_vertices:
            if images & set(v):
                return v
        raise DiagramError("exterior vertex lost in surgery")  # pragma: no cover

    return HowieDiagram(
        new_map,
        corner_labels,
        edge_labels,
        exterior_vertices=frozenset(find_vertex(v) for v in d.exterior_vertices),
        exterior_faces=frozenset(new_index[f] for f in d.exterior_faces),
        phi_s=d.phi_s,
        large_faces=None
        if d.large_faces is None
        else frozenset(new_index[f] for f in d.large_faces if f != f2),
    )


# ---------------------------------------------------------------------------
# collision audits
# ---------------------------------------------------------------------------


def _interior_vertex_loci(d: HowieDiagram, ms: MotionSchedule, collisions=None):
    """(vertex, instants) at interior vertices, plus leftover edge loci."""
    if collisions is None:
        collisions = complete_collisions(d.map, ms)
    horizon = collision_horizon(ms)
    vertex = []
    for v, spans in collisions.vertex_loci.items():
        if v in d.exterior_vertices:
            continue
        vertex.append((v, tuple(intervals_instants(spans, horizon))))
    exterior_edges = {
        e for f in d.exterior_faces for e, _ in d.map.faces[f]
    }
    edge = [
        (key, spans)
        for key, spans in collisions.edge_loci.items()
        if key[0] not in exterior_edges
    ]
    return vertex, edge


def _require_standard_on_interior(d: HowieDiagram, ms: MotionSchedule, info=None):
    if info is None:
        info = classify_map(d.map)
    if info["family"] == "B":
        expected = standard_multiple_motion(d.map, info)
    else:
        expected = standard_motion(d.map, info)
    by_face = {}
    for car in expected.cars:
        by_face.setdefault(car.face, []).append(car)
    given = {}
    for car in ms.cars:
        given.setdefault(car.face, []).append(car)
    for f in d.interior_faces():
        L = len(d.map.faces[f])
        want, got = by_face.get(f, []), given.get(f, [])
        if len(want) != len(got) or not all(
            _functions_equal(a, b, L, Fraction(0), Fraction(0))
            for a, b in zip(want, got)
        ):
            raise DiagramError(f"motion is not standard on interior face {f}")
    return info


def audit_standard_collisions(
    d: HowieDiagram, ms: MotionSchedule, info=None, collisions=None
) -> dict:
    """Evaluate the label equation forced at each interior collision.

    A complete collision at an interior sink or source forces the product
    of that vertex's corner labels to be 1.  The audit passes when every
    such product is not 1 (so no interior collision can sit inside a
    valid diagram) and no collision touches the interior of an interior
    edge.
    """
    _require_standard_on_interior(d, ms, info)
    vertex_loci, edge_loci = _interior_vertex_loci(d, ms, collisions)
    records = []
    for v, instants in vertex_loci:
        label = vertex_label(d, v)
        records.append(
            {
                "vertex": v,
                "kind": d.map.classify_vertex(v),
                "instants": instants,
                "label": label,
                "refuted": not label.is_identity(),
            }
        )
    passes = all(r["refuted"] for r in records) and not edge_loci
    return {
        "passes": passes,
        "vertices": tuple(records),
        "interior_edge_loci": tuple(sorted(k for k, _ in edge_loci)),
    }


# ---------------------------------------------------------------------------
# 2-graded analysis
# ---------------------------------------------------------------------------


def _corner_fan(d: HowieDiagram, vertex):
    return vertex_corners_acw(d, vertex)


def _nonadjacent_at(d: HowieDiagram, vertex, c1: Corner, c2: Corner) -> bool:
    fan = _corner_fan(d, vertex)
    if c1 == c2 or c1 not in fan or c2 not in fan:
        return False
    n = len(fan)
    i, j = fan.index(c1), fan.index(c2)
    return (i - j) % n not in (1, n - 1)


def _fragment_darts(m: OrientedMap, f: int, start_corner: int, end_corner: int):
    """Darts of face f walked anticlockwise from one corner to another."""
    L = len(m.faces[f])
    out = []
    j = start_corner
    while j != end_corner:
        out.append(m.faces[f][j])
        j = (j + 1) % L
    return out


def _path_vertices(m: OrientedMap, darts):
    verts = []
    corner_of = {}
    for v in m.vertices():
        for c in v:
            corner_of[c] = v
    for e, s in darts:
        f, i = m.dart_owner((e, s))
        L = len(m.faces[f])
        verts.append(corner_of[(f, i)])
        verts.append(corner_of[(f, (i + 1) % L)])
    return set(verts)


def _sides_of_path(m: OrientedMap, path_edges) -> list:
    """Connected face classes crossing only edges off the path."""
    adj = {f: set() for f in range(m.face_count())}
    for e in m.edge_ids:
        if e in path_edges:
            continue
        f1, _ = m.dart_owner((e, 1))
        f2, _ = m.dart_owner((e, -1))
        adj[f1].add(f2)
        adj[f2].add(f1)
    seen = set()
    comps = []
    for f in adj:
        if f in seen:
            continue
        comp = {f}
        todo = [f]
        while todo:
            g = todo.pop()
            for h in adj[g] - comp:
                comp.add(h)
                todo.append(h)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _region_is_quiet(d: HowieDiagram, region, path_vertices) -> bool:
    """Only small interior cells, and interior vertices off the path."""
    large = d.large_faces or frozenset()
    for f in region:
        if f in large or f in d.exterior_faces:
            return False
    for v in d.map.vertices():
        owners = {c[0] for c in v}
        if owners <= set(region) and v not in path_vertices:
            if v in d.exterior_vertices:
                return False
    return True


def _contact_region(d: HowieDiagram, A, B, a1, a2, b1, b2):
    """The side bounded by [a1,a2] on A plus [b2,b1] on B, if it is quiet."""
    m = d.map
    frag_a = _fragment_darts(m, A, a1[1], a2[1])
    frag_b = _fragment_darts(m, B, b2[1], b1[1])
    darts = frag_a + frag_b
    if not darts:
        return None
    path_vertices = _path_vertices(m, darts)
    if any(v in d.exterior_vertices for v in path_vertices):
        return None
    path_edges = {e for e, _ in darts}
    sides = _sides_of_path(m, path_edges)
    candidates = [s for s in sides if A not in s and B not in s]
    for region in candidates:
        if _region_is_quiet(d, region, path_vertices):
            return region
    return None


def bad_contact_report(
    d: HowieDiagram, ms: Optional[MotionSchedule] = None, collisions=None
) -> tuple:
    """All pairs of large faces contacting around a quiet region.

    Two large faces (or one face with itself) contact badly when they
    hold nonadjacent corners at two distinct interior collision vertices
    and one side of the resulting closed path contains neither of them,
    no exterior or large cell, and no exterior vertex.  The one-vertex
    self-contact clause is included.
    """
    if d.large_faces is None:
        raise DiagramError("bad contact needs the 2-grading")
    if collisions is None:
        if ms is None:
            raise DiagramError("need a motion or explicit collisions")
        collisions = complete_collisions(d.map, ms)
    loci = [
        v for v in collisions.vertex_loci if v not in d.exterior_vertices
    ]
    found = []

    def corner_pairs(v, A, B):
        for a in v:
            if a[0] != A:
                continue
            for b in v:
                if b[0] == B and _nonadjacent_at(d, v, a, b):
                    yield a, b

    large = sorted(d.large_faces)
    for A in large:
        for B in large:
            if B < A:
                continue
            for v1 in loci:
                for v2 in loci:
                    if v1 == v2:
                        continue
                    for a1, b1 in corner_pairs(v1, A, B):
                        for a2, b2 in corner_pairs(v2, A, B):
                            if A == B and len({a1, a2, b1, b2}) < 4:
                                continue
                            region = _contact_region(d, A, B, a1, a2, b1, b2)
                            if region is not None:
                                found.append(
                                    {
                                        "faces": (A, B),
                                        "vertices": (v1, v2),
                                        "corners": ((a1, b1), (a2, b2)),
                                        "region": region,
                                    }
                                )
        # self contact at a single vertex
        for v in loci:
            for a, b in corner_pairs(v, A, A):
                region = _contact_region(d, A, A, a, b, b, a)
                if region is not None:
                    found.append(
                        {
                            "faces": (A, A),
                            "vertices": (v,),
                            "corners": ((a, b),),
                            "region": region,
                        }
                    )
    return tuple(found)


def lemma17_audit(
    d: HowieDiagram, ms: MotionSchedule, collisions=None
) -> dict:
    """Check the three impossibility conditions and report both counts.

    When multiplicities are at least 4 on large and 1 on small faces,
    every interior collision point shows two nonadjacent large corners,
    and no large cells contact badly, the collision count is squeezed
    between the multiplicity floor and the planar-graph cap of three
    edges per node, which cannot both hold.
    """
    if d.large_faces is None:
        raise DiagramError("lemma 17 needs the 2-grading")
    if d.map.surface != "sphere":
        raise DiagramError("lemma 17 speaks about sphere maps")
    if len(d.exterior_vertices) != 1 or d.exterior_faces:
        raise DiagramError("need a single exterior vertex and no exterior faces")
    sep = check_separated_stops(d.map, ms)
    if not sep["ok"]:
        raise DiagramError("motion does not have separated stops")
    if collisions is None:
        collisions = complete_collisions(d.map, ms)

    report: dict = {"conditions": {}, "contradiction": False}
    mult = multiplicities(d.map, ms)
    small = set(range(d.map.face_count())) - set(d.large_faces)
    cond1 = all(mult[f] >= 4 for f in d.large_faces) and all(
        mult[f] >= 1 for f in small
    )
    report["conditions"]["multiplicities"] = cond1

    vertex_points = [v for v in collisions.vertex_loci if v not in d.exterior_vertices]
    edge_points = list(collisions.edge_loci)
    report["interior_points"] = len(vertex_points) + len(edge_points)

    gamma_edges = []
    cond2 = True
    for v in vertex_points:
        pairs = [
            (a, b)
            for a in v
            for b in v
            if a < b
            and a[0] in d.large_faces
            and b[0] in d.large_faces
            and _nonadjacent_at(d, v, a, b)
        ]
        if pairs:
            gamma_edges.append((pairs[0][0][0], pairs[0][1][0]))
        else:
            cond2 = False
    for (e, _lam) in edge_points:
        s1, _ = d.map.dart_owner((e, 1))
        s2, _ = d.map.dart_owner((e, -1))
        if s1 in d.large_faces and s2 in d.large_faces:
            gamma_edges.append((s1, s2))
        else:
            cond2 = False
    report["conditions"]["nonadjacent_large_corners"] = cond2

    contacts = bad_contact_report(d, ms, collisions=collisions)
    report["conditions"]["no_bad_contact"] = not contacts
    report["bad_contacts"] = contacts

    floor = d.map.euler_characteristic() + sum(df - 1 for df in mult.values())
    cap = 3 * len(d.large_faces)
    report["gamma"] = {
        "nodes": len(d.large_faces),
        "edges": tuple(gamma_edges),
        "cap": cap,
        "within_cap": len(gamma_edges) <= cap,
    }
    report["floor"] = floor
    if all(report["conditions"].values()):
        # the squeeze: at least `floor` points, at most `cap` of them
        report["contradiction"] = floor > cap
    return report
