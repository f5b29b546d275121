"""Combinatorial maps on closed oriented surfaces.

A map is stored face by face: each face is the cyclic sequence of darts
(directed edge sides) along its boundary, read anticlockwise.  Every edge
appears exactly twice over all faces, once with each direction, so the
surface is closed and oriented.  Vertices are not stored; they are the
orbits of the corner rotation and get reconstructed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class MapError(ValueError):
    pass


SURFACE_CHI = {"sphere": 2, "torus": 0}


def surface_euler_characteristic(surface: str) -> int:
    if surface in SURFACE_CHI:
        return SURFACE_CHI[surface]
    if surface.startswith("genus-"):
        g = int(surface[len("genus-"):])
        if g < 0:
            raise MapError(f"negative genus: {surface}")
        return 2 - 2 * g
    raise MapError(f"unknown surface: {surface!r}")


Dart = tuple[int, int]  # (edge id, +1 or -1)
Corner = tuple[int, int]  # (face index, index into the face's dart list)


@dataclass(frozen=True)
class OrientedMap:
    """Closed oriented surface map given by anticlockwise face boundaries."""

    surface: str
    faces: tuple[tuple[Dart, ...], ...]

    def __post_init__(self):
        seen: dict[int, list[int]] = {}
        for f, boundary in enumerate(self.faces):
            if not boundary:
                raise MapError(f"face {f} has empty boundary")
            for edge, sign in boundary:
                if sign not in (1, -1):
                    raise MapError(f"bad dart sign {sign} in face {f}")
                seen.setdefault(edge, []).append(sign)
        for edge, signs in seen.items():
            if sorted(signs) != [-1, 1]:
                raise MapError(
                    f"edge {edge} must appear exactly twice with opposite "
                    f"directions, got {signs}"
                )
        chi = self.euler_characteristic()
        want = surface_euler_characteristic(self.surface)
        if chi != want:
            raise MapError(
                f"Euler characteristic {chi} does not match {self.surface} "
                f"(expected {want})"
            )
        if not self._face_edge_connected():
            raise MapError("face-edge incidence graph is not connected")

    # -- basic census ------------------------------------------------------

    @property
    def edge_ids(self) -> tuple[int, ...]:
        out = sorted({e for b in self.faces for e, _ in b})
        return tuple(out)

    def edge_count(self) -> int:
        return len(self.edge_ids)

    def face_count(self) -> int:
        return len(self.faces)

    def corners(self) -> list[Corner]:
        return [(f, j) for f, b in enumerate(self.faces) for j in range(len(b))]

    def corner_count(self) -> int:
        return sum(len(b) for b in self.faces)

    def euler_characteristic(self) -> int:
        return len(self.vertices()) - self.edge_count() + self.face_count()

    def _face_edge_connected(self) -> bool:
        if not self.faces:
            return True
        by_edge: dict[int, set[int]] = {}
        for f, b in enumerate(self.faces):
            for e, _ in b:
                by_edge.setdefault(e, set()).add(f)
        todo = [0]
        reached = {0}
        while todo:
            f = todo.pop()
            for e, _ in self.faces[f]:
                for g in by_edge[e]:
                    if g not in reached:
                        reached.add(g)
                        todo.append(g)
        return len(reached) == len(self.faces)

    # -- darts and corners -------------------------------------------------

    def dart_at(self, corner: Corner) -> Dart:
        f, j = corner
        return self.faces[f][j]

    def corner_in_dart(self, corner: Corner) -> Dart:
        """The dart ending at this corner: the previous one along the face."""
        f, j = corner
        b = self.faces[f]
        return b[(j - 1) % len(b)]

    def corner_out_dart(self, corner: Corner) -> Dart:
        return self.dart_at(corner)

    def dart_owner(self, dart: Dart) -> Corner:
        for f, b in enumerate(self.faces):
            for j, d in enumerate(b):
                if d == dart:
                    return (f, j)
        raise MapError(f"dart {dart} not present")

    def next_corner_acw(self, corner: Corner) -> Corner:
        """Next corner anticlockwise around the same vertex.

        Its outgoing dart is the other side of this corner's incoming dart.
        """
        edge, sign = self.corner_in_dart(corner)
        return self.dart_owner((edge, -sign))

    def corner_type(self, corner: Corner) -> tuple[int, int]:
        return (self.corner_in_dart(corner)[1], self.corner_out_dart(corner)[1])

    # -- vertices ------------------------------------------------------------

    def vertices(self) -> list[tuple[Corner, ...]]:
        """Corner orbits of the rotation, each read anticlockwise."""
        pending = set(self.corners())
        out = []
        while pending:
            start = min(pending)
            cycle = [start]
            pending.discard(start)
            c = self.next_corner_acw(start)
            while c != start:
                cycle.append(c)
                pending.discard(c)
                c = self.next_corner_acw(c)
            out.append(tuple(cycle))
        return out

    def vertex_of(self, corner: Corner) -> tuple[Corner, ...]:
        for v in self.vertices():
            if corner in v:
                return v
        raise MapError(f"no such corner: {corner}")

    def multiplicity(self, vertex: Sequence[Corner]) -> int:
        return len(vertex)

    def classify_vertex(self, vertex: Sequence[Corner]) -> str:
        types = [self.corner_type(c) for c in vertex]
        if all(t == (1, -1) for t in types):
            return "sink"
        if all(t == (-1, 1) for t in types):
            return "source"
        # at a mixed vertex the saddle corners (++)/(--) alternate in between
        saddles = [t for t in types if t in ((1, 1), (-1, -1))]
        for i, t in enumerate(saddles):
            if t == saddles[i - 1]:
                raise MapError("saddle corners fail to alternate around vertex")
        return "mixed"

    # -- face profiles -------------------------------------------------------

    def face_sign_profile(self, f: int) -> tuple[int, ...]:
        return tuple(s for _, s in self.faces[f])


def _runs(signs: Sequence[int]) -> list[tuple[int, int]]:
    """Run-length encoding of a cyclic sign sequence, merged across the seam."""
    out: list[tuple[int, int]] = []
    for s in signs:
        if out and out[-1][0] == s:
            out[-1] = (s, out[-1][1] + 1)
        else:
            out.append((s, 1))
    if len(out) > 1 and out[0][0] == out[-1][0]:
        first = out.pop(0)
        out[-1] = (out[-1][0], out[-1][1] + first[1])
    return out


def classify_face(signs: Sequence[int]) -> tuple[str, Optional[int], dict]:
    """Classify a cyclic sign profile as one of the standard face shapes.

    Returns (kind, m, extras) where kind is "a", "b", "c" or "d" and m is
    the number the b/c shapes determine (None for the others).  The d shape
    reports its two run lengths k, l >= 1 and its repetition count s.
    """
    runs = _runs(signs)
    n = len(signs)
    if len(runs) == 2 and runs[0][1] == 1 and runs[1][1] == 1:
        return ("a", None, {})
    # b and c are alternating except for a single doubled run; length 2m+3
    if n >= 3 and n % 2 == 1 and all(r[1] <= 2 for r in runs):
        plus = sum(1 for s in signs if s == 1)
        minus = n - plus
        doubles = [r for r in runs if r[1] == 2]
        if len(doubles) == 1:
            if plus == minus + 1 and doubles[0][0] == 1:
                return ("b", (n - 3) // 2, {})
            if minus == plus + 1 and doubles[0][0] == -1:
                return ("c", (n - 3) // 2, {})
    # d: ((+)^{k+1} (-)^{l+1})^s with k, l >= 1
    if len(runs) % 2 == 0 and len(runs) >= 2:
        plus_runs = [r[1] for r in runs if r[0] == 1]
        minus_runs = [r[1] for r in runs if r[0] == -1]
        if (
            len(plus_runs) == len(minus_runs)
            and len(set(plus_runs)) == 1
            and len(set(minus_runs)) == 1
            and plus_runs[0] >= 2
            and minus_runs[0] >= 2
            and runs[0][0] != runs[1][0]
        ):
            return (
                "d",
                None,
                {"k": plus_runs[0] - 1, "l": minus_runs[0] - 1, "s": len(plus_runs)},
            )
    raise MapError(f"face profile {tuple(signs)} matches no standard shape")


def classify_map(m: OrientedMap) -> dict:
    """Type every face and infer the common parameter of the b/c faces.

    Returns a dict with keys "family" ("A" or "B"), "m", and "faces", a
    list of per-face (kind, extras) entries.  The family is B when a type-d
    face repeats its block (s >= 2); a single block counts as the A shape.
    """
    kinds = []
    m_values = set()
    family = "A"
    for f in range(m.face_count()):
        kind, mval, extras = classify_face(m.face_sign_profile(f))
        if mval is not None:
            m_values.add(mval)
        if kind == "d" and extras["s"] >= 2:
            family = "B"
        kinds.append((kind, extras))
    if len(m_values) > 1:
        raise MapError(f"faces disagree on m: {sorted(m_values)}")
    m_common = m_values.pop() if m_values else None
    return {"family": family, "m": m_common, "faces": kinds}


# ---------------------------------------------------------------------------
# sparse embedded graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddedGraph:
    """A graph on the sphere known only through its region census.

    Each region is (perimeter, simply_connected).  Perimeters count dart
    sides, so they sum to twice the edge count.
    """

    vertex_count: int
    edge_count: int
    regions: tuple[tuple[int, bool], ...]

    def __post_init__(self):
        if self.vertex_count < 0 or self.edge_count < 0:
            raise MapError("negative counts")
        total = sum(p for p, _ in self.regions)
        if total != 2 * self.edge_count:
            raise MapError(
                f"region perimeters sum to {total}, expected {2 * self.edge_count}"
            )

    @classmethod
    def from_sphere_map(cls, m: OrientedMap) -> "EmbeddedGraph":
        if surface_euler_characteristic(m.surface) != 2:
            raise MapError("only sphere maps embed with all regions simply connected")
        regions = tuple((len(b), True) for b in m.faces)
        return cls(len(m.vertices()), m.edge_count(), regions)

    def sparsity_check(self) -> dict:
        """No multiple short regions: then at most 3V - something edges.

        Hypothesis: at most one simply connected region has perimeter
        below three.  Under it the edge count is at most 3 * vertices.
        """
        short = [p for p, simply in self.regions if simply and p < 3]
        ok = len(short) <= 1
        report = {
            "hypothesis_holds": ok,
            "short_regions": len(short),
            "bound_holds": self.edge_count <= 3 * self.vertex_count,
        }
        if ok and not report["bound_holds"]:
            raise MapError(
                "sparsity hypothesis holds but edge bound fails: "
                f"E={self.edge_count}, V={self.vertex_count}"
            )
        return report


def lemma18_check(graph: EmbeddedGraph) -> dict:
    return graph.sparsity_check()


# ---------------------------------------------------------------------------
# subdivision
# ---------------------------------------------------------------------------


def subdivide_edge(m: OrientedMap, edge: int, new_edges: tuple[int, int]) -> OrientedMap:
    """Replace an edge with a two-edge path through a fresh valence-2 vertex.

    The + dart becomes new_edges traversed (+, +), the - dart (-, -) in
    the opposite order.
    """
    e1, e2 = new_edges
    used = set(m.edge_ids)
    if e1 in used or e2 in used or e1 == e2:
        raise MapError("new edge ids must be fresh and distinct")
    if edge not in used:
        raise MapError(f"no such edge: {edge}")
    faces = []
    for b in m.faces:
        out: list[Dart] = []
        for d in b:
            if d == (edge, 1):
                out += [(e1, 1), (e2, 1)]
            elif d == (edge, -1):
                out += [(e2, -1), (e1, -1)]
            else:
                out.append(d)
        faces.append(tuple(out))
    return OrientedMap(m.surface, tuple(faces))
