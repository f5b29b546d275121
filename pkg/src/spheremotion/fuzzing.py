"""Seeded random generators for maps, schedules, comotions and words.

Everything takes a seed or a random.Random so runs reproduce exactly;
the CLI fuzz command and the test suite share these builders.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .comotion import Cocar, Comotion
from .groups import (
    BaseGroup,
    FreeAbelianGroup,
    FreeGroup,
    FreeProductWord,
    reduce_letters,
)
from .motion import CarSchedule, MotionSchedule, time_shifted_car
from .surface import OrientedMap, subdivide_edge


def make_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


def b_profile(m: int) -> tuple[int, ...]:
    return (1,) + (1, -1) * (m + 1)


def d_profile(k: int, l: int, s: int) -> tuple[int, ...]:
    return ((1,) * (k + 1) + (-1,) * (l + 1)) * s


def pinwheel_variant(n: int) -> OrientedMap:
    """A balloon, an outer (n+3)-gon and a ring of n triangles."""
    loop, neck, tail = 0, 1, 2
    ring = [3 + i for i in range(n)]
    spoke = [3 + n + i for i in range(n)]
    faces = [
        ((loop, 1), (neck, 1), (loop, -1)),
        ((tail, 1), *((r, 1) for r in ring), (tail, -1), (neck, -1)),
    ]
    for j in range(n):
        faces.append(((spoke[(j + 1) % n], 1), (ring[j], -1), (spoke[j], -1)))
    return OrientedMap("sphere", tuple(faces))


def doubled_polygon(signs) -> OrientedMap:
    from .goldens import doubled_polygon_map

    return doubled_polygon_map(tuple(signs))


def rotate_map(m: OrientedMap, rng) -> OrientedMap:
    """The same map with each face boundary listed from a random corner."""
    rng = make_rng(rng)
    faces = []
    for b in m.faces:
        r = rng.randrange(len(b))
        faces.append(b[r:] + b[:r])
    return OrientedMap(m.surface, tuple(faces))


def relabel_map(m: OrientedMap, rng) -> OrientedMap:
    rng = make_rng(rng)
    ids = sorted(m.edge_ids)
    perm = ids[:]
    rng.shuffle(perm)
    table = dict(zip(ids, perm))
    faces = tuple(
        tuple((table[e], s) for e, s in b) for b in m.faces
    )
    return OrientedMap(m.surface, faces)


def random_shape_map(rng, family: str = "A") -> OrientedMap:
    """A sphere map whose faces fit the standard shapes, shuffled."""
    rng = make_rng(rng)
    if family == "B":
        k, l = rng.randint(1, 3), rng.randint(1, 3)
        s = rng.randint(2, 4)
        m = doubled_polygon(d_profile(k, l, s))
    else:
        kind = rng.choice(["b", "d", "pinwheel", "a"])
        if kind == "b":
            m = doubled_polygon(b_profile(rng.randint(0, 2)))
        elif kind == "d":
            m = doubled_polygon(d_profile(rng.randint(1, 3), rng.randint(1, 3), 1))
        elif kind == "pinwheel":
            m = pinwheel_variant(rng.randint(2, 5))
        else:
            m = doubled_polygon((1, -1))
    return relabel_map(rotate_map(m, rng), rng)


def random_subdivisions(m: OrientedMap, rng, rounds: int) -> OrientedMap:
    rng = make_rng(rng)
    for _ in range(rounds):
        edge = rng.choice(sorted(m.edge_ids))
        nxt = max(m.edge_ids) + 1
        m = subdivide_edge(m, edge, (nxt, nxt + 1))
    return m


def random_sphere_map(rng) -> OrientedMap:
    rng = make_rng(rng)
    m = random_shape_map(rng, rng.choice(["A", "A", "B"]))
    m = random_subdivisions(m, rng, rng.randint(0, 3))
    return rotate_map(m, rng)


def random_torus_map(rng) -> OrientedMap:
    rng = make_rng(rng)
    m = OrientedMap("torus", (((0, 1), (1, 1), (0, -1), (1, -1)),))
    m = random_subdivisions(m, rng, rng.randint(0, 4))
    return relabel_map(rotate_map(m, rng), rng)


# ---------------------------------------------------------------------------
# comotions
# ---------------------------------------------------------------------------


def _random_time(rng, T: Fraction) -> Fraction:
    den = rng.choice([1, 2, 3, 4])
    return Fraction(rng.randint(0, 4 * T.numerator * den), den)


def random_comotion(m: OrientedMap, rng, period=None) -> Comotion:
    """Arbitrary-shape cocars whose darts each sweep under one period."""
    rng = make_rng(rng)
    T = Fraction(period) if period is not None else Fraction(rng.randint(1, 4))
    cocars = []
    for f, boundary in enumerate(m.faces):
        L = len(boundary)
        d = min(rng.choice([0, 1, 1, 2]), L - 1)
        if d == 0:
            pos = Fraction(rng.randint(0, L - 1)) + Fraction(rng.randint(0, 3), 4)
            cocars.append(Cocar(f, 0, ((pos, _random_time(rng, T)),)))
            continue
        while True:
            w = [rng.randint(1, 9) for _ in range(L)]
            if d * max(w) < sum(w):
                break
        t = _random_time(rng, T)
        corner = []
        for j in range(L):
            corner.append(t)
            t += d * T * Fraction(w[j], sum(w))
        bps = []
        for j in range(L):
            bps.append((Fraction(j), corner[j]))
            if rng.random() < 0.3:
                span = (corner[j + 1] if j + 1 < L else corner[0] + d * T) - corner[j]
                bps.append(
                    (
                        Fraction(j) + Fraction(rng.randint(1, 3), 4),
                        corner[j] + span * Fraction(rng.randint(0, 4), 4),
                    )
                )
        cocars.append(Cocar(f, d, tuple(bps)))
    return Comotion(T, tuple(cocars))


# ---------------------------------------------------------------------------
# multiple motions
# ---------------------------------------------------------------------------


def _increasing_grid(rng, lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    w = [rng.randint(1, 9) for _ in range(count + 1)]
    total = sum(w)
    out = []
    acc = 0
    for x in w[:-1]:
        acc += x
        out.append(lo + (hi - lo) * Fraction(acc, total))
    return out


def random_multiple_motion(m: OrientedMap, rng, period=None) -> MotionSchedule:
    """A regular multiple motion with face multiplicities one or two.

    Each face gets a strictly climbing base car that stays inside its
    first lap until the final window, so the lap wraps on the last link
    of the car chain.
    """
    rng = make_rng(rng)
    T = Fraction(period) if period is not None else Fraction(rng.randint(2, 4))
    cars = []
    for f, boundary in enumerate(m.faces):
        L = len(boundary)
        d = rng.choice([1, 1, 2])
        marks = _increasing_grid(rng, Fraction(0), Fraction(L), d - 1)
        laps = [Fraction(0)] + marks + [Fraction(L)]
        bps = []
        for j in range(d):
            inner = rng.randint(0, 2)
            ts = [j * T] + _increasing_grid(rng, j * T, (j + 1) * T, inner)
            ps = [laps[j]] + _increasing_grid(rng, laps[j], laps[j + 1], inner)
            bps += list(zip(ts, ps))
        base = CarSchedule(f, d * T, tuple(bps), degree=1)
        cars += [time_shifted_car(base, L, j * T) for j in range(d)]
    return MotionSchedule(T, tuple(cars))


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


def random_base(rng) -> BaseGroup:
    rng = make_rng(rng)
    if rng.random() < 0.5:
        return FreeGroup(rng.randint(1, 3))
    return FreeAbelianGroup(rng.randint(1, 3))


def random_base_element(base: BaseGroup, rng, allow_identity=True):
    rng = make_rng(rng)
    if allow_identity and rng.random() < 0.25:
        return base.identity
    if isinstance(base, FreeAbelianGroup):
        vec = [rng.randint(-2, 2) for _ in range(base.rank)]
        if not any(vec):
            vec[rng.randrange(base.rank)] = 1
        return tuple(vec)
    letters = []
    for _ in range(rng.randint(1, 3)):
        g = rng.randint(1, base.rank)
        letters.append(g if rng.random() < 0.5 else -g)
    return reduce_letters(letters)


def random_unit_sum_word(rng, base=None, max_minus=4) -> FreeProductWord:
    """A coefficient chain g_1 t^e1 ... with exponent sum +1 or -1."""
    rng = make_rng(rng)
    if base is None:
        base = random_base(rng)
    n_minus = rng.randint(0, max_minus)
    signs = [1] * (n_minus + 1) + [-1] * n_minus
    rng.shuffle(signs)
    if rng.random() < 0.5:
        signs = [-e for e in signs]
    syls = []
    for eps in signs:
        syls.append(("g", 0, random_base_element(base, rng)))
        syls.append(("t", 1, eps))
    return FreeProductWord.from_syllables(base, syls)
