"""Arrival-time assignments on face boundaries, dual to car motions.

A cocar gives each boundary position of its face an arrival time on the
circle of circumference T, as a continuous nondecreasing piecewise
linear function.  Positions lift to the real line as in `motion`; times
lift too, climbing degree * T per boundary lap.

Where a motion asks "where is the car at time t", a comotion asks "when
does the face sweep past position x".  Collisions are the points whose
surrounding faces all sweep past at one common instant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .motion import MotionSchedule, as_multiple_motion
from .surface import OrientedMap

ZERO = Fraction(0)


class ComotionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the time circle
# ---------------------------------------------------------------------------


def chi_indicator(T: Fraction, x, y, reference=ZERO) -> int:
    """1 when the arc from x to y crosses the reference cut, else 0."""
    return 0 if (x - reference) % T <= (y - reference) % T else 1


def psi(T: Fraction, values: Sequence, reference=ZERO) -> int:
    """Winding number of a cyclic tuple of instants: counts descents."""
    vals = list(values)
    return sum(
        chi_indicator(T, vals[i], vals[(i + 1) % len(vals)], reference)
        for i in range(len(vals))
    )


def psi_progress(T: Fraction, values: Sequence) -> Fraction:
    """Reference-free form of psi: total forward progress in laps."""
    vals = list(values)
    total = sum(
        (vals[(i + 1) % len(vals)] - vals[i]) % T for i in range(len(vals))
    )
    return Fraction(total, 1) / T


# ---------------------------------------------------------------------------
# cocars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cocar:
    """Arrival times along one face boundary.

    Breakpoints pair a lifted position with a lifted time; positions
    strictly increase within one lap and times never decrease.  Time
    jumps are not representable, so a cocar cannot express a car that
    parks; dually, a flat piece sweeps a whole arc in one instant.
    """

    face: int
    degree: int
    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        bps = tuple((Fraction(p), Fraction(t)) for p, t in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps:
            raise ComotionError("cocar needs at least one breakpoint")
        for i in range(1, len(bps)):
            if bps[i][0] <= bps[i - 1][0]:
                raise ComotionError("positions must strictly increase")
            if bps[i][1] < bps[i - 1][1]:
                raise ComotionError("times may not decrease")
        if not isinstance(self.degree, int) or self.degree < 0:
            raise ComotionError("degree must be a nonnegative integer")


@dataclass(frozen=True)
class Comotion:
    period: Fraction
    cocars: tuple[Cocar, ...]

    def __post_init__(self):
        object.__setattr__(self, "period", Fraction(self.period))
        object.__setattr__(self, "cocars", tuple(self.cocars))
        if self.period <= 0:
            raise ComotionError("period must be positive")


def validate_comotion(m: OrientedMap, com: Comotion) -> None:
    if [c.face for c in com.cocars] != list(range(m.face_count())):
        raise ComotionError("need exactly one cocar per face, in face order")
    T = com.period
    for cocar in com.cocars:
        L = len(m.faces[cocar.face])
        p0, t0 = cocar.breakpoints[0]
        pl, tl = cocar.breakpoints[-1]
        if not (0 <= p0 < L):
            raise ComotionError(f"first position {p0} outside [0, {L})")
        if pl >= p0 + L:
            raise ComotionError("breakpoints span more than one lap")
        if tl > t0 + cocar.degree * T:
            raise ComotionError("times climb past the declared degree")


def cotime_at(cocar: Cocar, T: Fraction, L: int, x: Fraction) -> Fraction:
    """Lifted arrival time at lifted position x."""
    x = Fraction(x)
    p0, t0 = cocar.breakpoints[0]
    laps = (x - p0) // L
    xi = x - laps * L
    pts = cocar.breakpoints + ((p0 + L, t0 + cocar.degree * T),)
    for (pa, ta), (pb, tb) in zip(pts, pts[1:]):
        if pa <= xi <= pb:
            t = ta if pb == pa else ta + (xi - pa) * (tb - ta) / (pb - pa)
            return t + laps * cocar.degree * T
    raise ComotionError(f"position {x} not covered")  # pragma: no cover


def _pieces_over(cocar: Cocar, T: Fraction, L: int, x_lo: Fraction, x_hi: Fraction):
    """Linear time pieces (pa, ta, pb, tb) covering positions [x_lo, x_hi]."""
    p0, t0 = cocar.breakpoints[0]
    base = list(
        zip(cocar.breakpoints, cocar.breakpoints[1:] + ((p0 + L, t0 + cocar.degree * T),))
    )
    out = []
    for lap in range((x_lo - p0) // L, (x_hi - p0) // L + 1):
        dp, dt = lap * L, lap * cocar.degree * T
        for (pa, ta), (pb, tb) in base:
            lo, hi = max(pa + dp, x_lo), min(pb + dp, x_hi)
            if lo >= hi:
                continue
            slope = (tb - ta) / (pb - pa)
            out.append(
                (lo, ta + dt + slope * (lo - pa - dp), hi, ta + dt + slope * (hi - pa - dp))
            )
    out.sort()
    return out


def corner_times(m: OrientedMap, com: Comotion) -> dict:
    """Lifted arrival time at every corner."""
    out = {}
    for f, boundary in enumerate(m.faces):
        L = len(boundary)
        for j in range(L):
            out[(f, j)] = cotime_at(com.cocars[f], com.period, L, Fraction(j))
    return out


# ---------------------------------------------------------------------------
# collisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComotionCollisions:
    vertex_loci: dict
    edge_loci: dict

    @property
    def spatial_count(self) -> int:
        return len(self.vertex_loci) + len(self.edge_loci)


def edge_components(m: OrientedMap, com: Comotion, edge: int):
    """Maximal solution components of the meeting equation on one edge.

    Returns a list of (a, b, time): the two sides sweep past the points
    with dart parameter in [a, b] at the same instant, `time` mod T.
    Components are closed in [0, 1]; a and b can coincide.
    """
    T = com.period
    owners = {d: (f, j) for f, b in enumerate(m.faces) for j, d in enumerate(b)}
    fp, jp = owners[(edge, 1)]
    fm, jm = owners[(edge, -1)]
    Lp, Lm = len(m.faces[fp]), len(m.faces[fm])

    plus = _pieces_over(com.cocars[fp], T, Lp, Fraction(jp), Fraction(jp + 1))
    minus = _pieces_over(com.cocars[fm], T, Lm, Fraction(jm), Fraction(jm + 1))
    # both sides as functions of the + side parameter lam in [0, 1]
    cuts = {pa - jp for pa, _, pb, _ in plus} | {pb - jp for _, _, pb, _ in plus}
    cuts |= {jm + 1 - pa for pa, _, _, _ in minus} | {jm + 1 - pb for _, _, pb, _ in minus}
    grid = sorted(c for c in cuts if 0 <= c <= 1)

    def at_plus(lam):
        return cotime_at(com.cocars[fp], T, Lp, jp + lam)

    def at_minus(lam):
        return cotime_at(com.cocars[fm], T, Lm, jm + 1 - lam)

    raw = []
    for a, b in zip(grid, grid[1:]):
        Ha = at_plus(a) - at_minus(a)
        Hb = at_plus(b) - at_minus(b)
        if Ha == Hb:
            if Ha % T == 0:
                raw.append((a, b))
            continue
        k = -((-Ha) // T)  # first multiple of T at or above Ha
        while k * T <= Hb:
            lam = a + (k * T - Ha) * (b - a) / (Hb - Ha)
            raw.append((lam, lam))
            k += 1
    raw.sort()
    merged: list[list[Fraction]] = []
    for a, b in raw:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b, at_plus(a) % T) for a, b in merged]


def comotion_collisions(m: OrientedMap, com: Comotion) -> ComotionCollisions:
    """Points of the surface all of whose sides sweep past together.

    Vertex loci map a vertex to the common instant; edge loci are keyed
    by (edge, lam) for isolated meetings and (edge, (a, b)) for whole
    arcs swept in one instant.  Components touching only the endpoints
    of an edge belong to the vertices and are dropped here.
    """
    validate_comotion(m, com)
    T = com.period
    ct = corner_times(m, com)
    vertex_loci = {}
    for vertex in m.vertices():
        vals = {ct[c] % T for c in vertex}
        if len(vals) == 1:
            vertex_loci[vertex] = vals.pop()
    edge_loci = {}
    for edge in m.edge_ids:
        for a, b, t in edge_components(m, com, edge):
            if (a, b) in ((ZERO, ZERO), (Fraction(1), Fraction(1))):
                continue
            key = (edge, a) if a == b else (edge, (a, b))
            edge_loci[key] = t
    return ComotionCollisions(vertex_loci, edge_loci)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


def _span_check(m: OrientedMap, com: Comotion) -> None:
    T = com.period
    for f, boundary in enumerate(m.faces):
        L = len(boundary)
        for j in range(L):
            lo = cotime_at(com.cocars[f], T, L, Fraction(j))
            hi = cotime_at(com.cocars[f], T, L, Fraction(j + 1))
            if hi - lo >= T:
                raise ComotionError(
                    f"dart {j} of face {f} sweeps a full period; subdivide first"
                )


def weight_report(m: OrientedMap, com: Comotion) -> dict:
    """Cell weights whose total telescopes to the Euler characteristic.

    Faces carry 1 - degree, an edge carries one less than the number of
    meeting-free arcs in its interior, a vertex 1 - psi of its corner
    instants.  Needs every dart swept in under one period.
    """
    validate_comotion(m, com)
    _span_check(m, com)
    T = com.period
    faces = {f: 1 - com.cocars[f].degree for f in range(m.face_count())}
    edges = {}
    for edge in m.edge_ids:
        comps = edge_components(m, com, edge)
        free = len(comps) - 1 if comps else 0
        if comps:
            free += int(comps[0][0] > 0) + int(comps[-1][1] < 1)
        else:
            free = 1
        edges[edge] = -1 + free
    ct = corner_times(m, com)
    vertices = {}
    for vertex in m.vertices():
        vertices[vertex] = 1 - psi(T, [ct[c] for c in vertex])
    total = sum(faces.values()) + sum(edges.values()) + sum(vertices.values())
    return {
        "faces": faces,
        "edges": edges,
        "vertices": vertices,
        "total": total,
        "chi": m.euler_characteristic(),
    }


def lemma14_total(
    m: OrientedMap,
    com: Comotion,
    g: Callable[[Fraction, Fraction], Fraction],
    h: Callable[[Fraction, Fraction], Fraction],
):
    """The telescoping weight total for arbitrary pair functions g and h.

    Whatever g and h do, the g terms cancel between faces and edges and
    the h terms between edges and vertices, leaving F - E + V.
    """
    validate_comotion(m, com)
    ct = corner_times(m, com)
    total = ZERO
    owners = {d: (f, j) for f, b in enumerate(m.faces) for j, d in enumerate(b)}
    for f, boundary in enumerate(m.faces):
        L = len(boundary)
        total += 1 - sum(g(ct[(f, j)], ct[(f, (j + 1) % L)]) for j in range(L))
    for edge in m.edge_ids:
        fp, jp = owners[(edge, 1)]
        fm, jm = owners[(edge, -1)]
        Lp, Lm = len(m.faces[fp]), len(m.faces[fm])
        tail_p, head_p = ct[(fp, jp)], ct[(fp, (jp + 1) % Lp)]
        tail_m, head_m = ct[(fm, jm)], ct[(fm, (jm + 1) % Lm)]
        total += (
            -1
            + g(tail_p, head_p)
            + h(head_p, tail_m)
            + g(tail_m, head_m)
            + h(head_m, tail_p)
        )
    for vertex in m.vertices():
        k = len(vertex)
        total += 1 - sum(
            h(ct[vertex[i]], ct[vertex[(i + 1) % k]]) for i in range(k)
        )
    return total


def lemma11_check(m: OrientedMap, com: Comotion) -> dict:
    """Collision cells must make up for the face weights: loci plus the
    sum of (1 - degree) is at least the Euler characteristic."""
    rep = comotion_collisions(m, com)
    slack = sum(1 - c.degree for c in com.cocars)
    chi = m.euler_characteristic()
    return {
        "loci": rep.spatial_count,
        "slack": slack,
        "chi": chi,
        "holds": rep.spatial_count + slack >= chi,
    }


# ---------------------------------------------------------------------------
# induced comotions and subdivision
# ---------------------------------------------------------------------------


def induce_comotion(m: OrientedMap, ms: MotionSchedule) -> Comotion:
    """Invert the first car of each face of a multiple motion.

    Works when every car strictly climbs (stops would need time jumps)
    and laps exactly once per period.  The cocar degree comes out as the
    face multiplicity.
    """
    groups = as_multiple_motion(m, ms)
    cocars = []
    for f in range(m.face_count()):
        car = groups[f][0]
        if car.degree != 1:
            raise ComotionError("only single-lap cars invert to one-lap cocars")
        positions = [p for _, p in car.breakpoints]
        positions.append(positions[0] + len(m.faces[f]))  # wrap segment
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ComotionError(f"face {f}: car rests, arrival time would jump")
        bps = tuple((p, t) for t, p in car.breakpoints)
        cocars.append(Cocar(f, len(groups[f]), bps))
    return Comotion(ms.period, tuple(cocars))


def subdivide_comotion(
    m: OrientedMap, com: Comotion, edge: int, new_edges: tuple[int, int]
):
    """Carry a comotion over to the map with one edge subdivided.

    The split dart doubles in length, so positions stretch through an
    affine reparametrization; arrival times do not change.
    """
    from .surface import subdivide_edge

    validate_comotion(m, com)
    m2 = subdivide_edge(m, edge, new_edges)
    T = com.period
    cocars = []
    for cocar in com.cocars:
        boundary = m.faces[cocar.face]
        L = len(boundary)
        js = [j for j, d in enumerate(boundary) if d[0] == edge]
        if not js:
            cocars.append(cocar)
            continue

        def remap(x):
            base = x % L
            lap = (x - base) // L
            new = base + sum(max(ZERO, min(base - j, Fraction(1))) for j in js)
            return new + lap * (L + len(js))

        # breakpoints of the stretch itself become breakpoints of the cocar
        p0 = cocar.breakpoints[0][0]
        kinks = {Fraction(j + off) for j in js for off in (0, 1)}
        xs = {p for p, _ in cocar.breakpoints}
        xs |= {k + L * ((p0 - k) // L + 1) for k in kinks}
        xs = {x for x in xs if p0 <= x < p0 + L}
        bps = tuple(
            sorted((remap(x), cotime_at(cocar, T, L, x)) for x in xs)
        )
        cocars.append(Cocar(cocar.face, cocar.degree, bps))
    return m2, Comotion(T, tuple(cocars))
