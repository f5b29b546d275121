"""Exact arithmetic in free products of group copies with cyclic generators.

Words live in G(0) * G(1) * ... * <t_1> * <t_2> * ..., where every G(i) is a
copy of one base group (free or free abelian) and each t_j generates an
infinite cyclic factor.  Everything is immutable and hashable; all operations
are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple


class GroupError(ValueError):
    """Raised for malformed elements, mixed universes, or unmet capabilities."""


def _divisors(n: int) -> Iterator[int]:
    for d in range(1, n + 1):
        if n % d == 0:
            yield d


class BaseGroup:
    """A torsion-free group with decidable equality and cyclic membership.

    Concrete kinds: FreeGroup (rank r) and FreeAbelianGroup (rank n).
    Elements are plain tuples so they hash and compare structurally.
    """

    kind: str = "abstract"
    rank: int = 0

    @property
    def identity(self):
        raise NotImplementedError

    def multiply(self, x, y):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def is_identity(self, x) -> bool:
        return x == self.identity

    def power(self, x, k: int):
        if k < 0:
            return self.power(self.inverse(x), -k)
        acc = self.identity
        for _ in range(k):
            acc = self.multiply(acc, x)
        return acc

    def validate(self, x) -> None:
        raise NotImplementedError

    def generators(self) -> tuple:
        raise NotImplementedError

    def cyclic_membership(self, g, h) -> bool:
        """True iff g = h**k for some integer k."""
        raise NotImplementedError

    def is_conjugate(self, x, y) -> bool:
        raise NotImplementedError

    def parse(self, literal):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, BaseGroup) and (self.kind, self.rank) == (
            other.kind,
            other.rank,
        )

    def __hash__(self):
        return hash((self.kind, self.rank))

    def __repr__(self):
        return f"{type(self).__name__}({self.rank})"


def reduce_letters(letters: Iterable[int]) -> Tuple[int, ...]:
    """Freely reduce a letter sequence (nonzero ints, -i inverse of i)."""
    out: list = []
    for c in letters:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


class FreeGroup(BaseGroup):
    """Free group of finite rank; elements are reduced tuples of nonzero ints.

    Letter i in 1..rank is the i-th generator, -i its inverse.  The string
    form uses a..z for generators and A..Z for inverses.
    """

    kind = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise GroupError(f"free rank must be in 1..26, got {rank}")
        self.rank = rank

    @property
    def identity(self) -> Tuple[int, ...]:
        return ()

    def validate(self, x) -> None:
        if not isinstance(x, tuple):
            raise GroupError(f"free-group element must be a tuple, got {x!r}")
        for c in x:
            if not isinstance(c, int) or c == 0 or abs(c) > self.rank:
                raise GroupError(f"letter {c!r} out of range for rank {self.rank}")
        if reduce_letters(x) != x:
            raise GroupError(f"element {x!r} is not freely reduced")

    def multiply(self, x, y):
        return reduce_letters(tuple(x) + tuple(y))

    def inverse(self, x):
        return tuple(-c for c in reversed(x))

    def generators(self):
        return tuple((i,) for i in range(1, self.rank + 1))

    def parse(self, literal) -> Tuple[int, ...]:
        if not isinstance(literal, str):
            raise GroupError(f"free-group literal must be a string, got {literal!r}")
        letters = []
        for ch in literal:
            if "a" <= ch <= "z":
                c = ord(ch) - ord("a") + 1
            elif "A" <= ch <= "Z":
                c = -(ord(ch) - ord("A") + 1)
            else:
                raise GroupError(f"bad letter {ch!r} in free-group literal")
            if abs(c) > self.rank:
                raise GroupError(f"letter {ch!r} exceeds rank {self.rank}")
            letters.append(c)
        return reduce_letters(letters)

    def format(self, x) -> str:
        chars = []
        for c in x:
            if c > 0:
                chars.append(chr(ord("a") + c - 1))
            else:
                chars.append(chr(ord("A") - c - 1))
        return "".join(chars)

    def _cyclic_core(self, x):
        """Split x = u c u^-1 with c cyclically reduced; returns (u, c)."""
        w = list(x)
        u: list = []
        while len(w) >= 2 and w[0] == -w[-1]:
            u.append(w[0])
            w = w[1:-1]
        return tuple(u), tuple(w)

    def primitive_root(self, x):
        """Return (r, e) with x = r**e, e >= 1 maximal.  Requires x != 1."""
        if x == ():
            raise GroupError("identity has no primitive root")
        u, core = self._cyclic_core(x)
        n = len(core)
        for d in _divisors(n):
            if core[:d] * (n // d) == core:
                z = core[:d]
                e = n // d
                break
        root = reduce_letters(u + z + self.inverse(u))
        return root, e

    def cyclic_membership(self, g, h) -> bool:
        if g == ():
            return True
        if h == ():
            return False
        rg, eg = self.primitive_root(g)
        rh, eh = self.primitive_root(h)
        if rg != rh and rg != self.inverse(rh):
            return False
        return eg % eh == 0

    def is_conjugate(self, x, y) -> bool:
        cx = self._cyclic_core(x)[1]
        cy = self._cyclic_core(y)[1]
        if len(cx) != len(cy):
            return False
        if not cx:
            return True
        doubled = cx + cx
        return any(doubled[i : i + len(cy)] == cy for i in range(len(cx)))


class FreeAbelianGroup(BaseGroup):
    """Free abelian group of finite rank; elements are int vectors."""

    kind = "abelian"

    def __init__(self, rank: int):
        if rank < 1:
            raise GroupError(f"abelian rank must be >= 1, got {rank}")
        self.rank = rank

    @property
    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.rank

    def validate(self, x) -> None:
        if not isinstance(x, tuple) or len(x) != self.rank:
            raise GroupError(f"abelian element must be a {self.rank}-tuple, got {x!r}")
        if not all(isinstance(c, int) for c in x):
            raise GroupError(f"abelian element entries must be ints: {x!r}")

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inverse(self, x):
        return tuple(-a for a in x)

    def power(self, x, k: int):
        return tuple(k * a for a in x)

    def generators(self):
        eye = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            eye.append(tuple(v))
        return tuple(eye)

    def parse(self, literal) -> Tuple[int, ...]:
        if not isinstance(literal, (list, tuple)):
            raise GroupError(f"abelian literal must be an int vector, got {literal!r}")
        x = tuple(literal)
        self.validate(x)
        return x

    def format(self, x):
        return list(x)

    def cyclic_membership(self, g, h) -> bool:
        if all(c == 0 for c in g):
            return True
        if all(c == 0 for c in h):
            return False
        pivot = next(i for i, c in enumerate(h) if c != 0)
        if g[pivot] % h[pivot] != 0:
            return False
        k = g[pivot] // h[pivot]
        return g == self.power(h, k)

    def is_conjugate(self, x, y) -> bool:
        return x == y


# A syllable is ("g", copy_index, base_element) or ("t", symbol_index, exponent).
Syllable = Tuple


def g_syllable(copy: int, elem) -> Syllable:
    return ("g", copy, elem)


def t_syllable(j: int, exp: int) -> Syllable:
    return ("t", j, exp)


def _push_syllable(base: BaseGroup, stack: list, syl: Syllable) -> None:
    tag, idx, val = syl
    if tag == "g":
        if base.is_identity(val):
            return
        if stack and stack[-1][0] == "g" and stack[-1][1] == idx:
            merged = base.multiply(stack[-1][2], val)
            stack.pop()
            if not base.is_identity(merged):
                stack.append(("g", idx, merged))
        else:
            stack.append(("g", idx, val))
    elif tag == "t":
        if val == 0:
            return
        if stack and stack[-1][0] == "t" and stack[-1][1] == idx:
            merged = stack[-1][2] + val
            stack.pop()
            if merged != 0:
                stack.append(("t", idx, merged))
        else:
            stack.append(("t", idx, val))
    else:
        raise GroupError(f"unknown syllable tag {tag!r}")


@dataclass(frozen=True)
class FreeProductWord:
    """Normal-form word: alternating syllables from distinct factors.

    Invariants: no adjacent syllables share a factor, no identity g-syllable,
    no zero t-exponent.  Factor of ("g", i, x) is the i-th copy of the base;
    factor of ("t", j, k) is the j-th cyclic generator.
    """

    base: BaseGroup
    syllables: Tuple[Syllable, ...]

    def __post_init__(self):
        prev = None
        for syl in self.syllables:
            if len(syl) != 3 or syl[0] not in ("g", "t"):
                raise GroupError(f"malformed syllable {syl!r}")
            tag, idx, val = syl
            if not isinstance(idx, int) or idx < 0 or (tag == "t" and idx < 1):
                raise GroupError(f"bad factor index in {syl!r}")
            if tag == "g":
                self.base.validate(val)
                if self.base.is_identity(val):
                    raise GroupError("identity g-syllable in normal form")
            else:
                if not isinstance(val, int) or val == 0:
                    raise GroupError(f"t-exponent must be a nonzero int: {syl!r}")
            if prev is not None and prev[:2] == (tag, idx):
                raise GroupError(f"adjacent syllables share factor {tag}{idx}")
            prev = syl

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_syllables(cls, base: BaseGroup, syllables: Iterable[Syllable]):
        stack: list = []
        for syl in syllables:
            if syl[0] == "g":
                base.validate(syl[2])
            _push_syllable(base, stack, syl)
        return cls(base, tuple(stack))

    @classmethod
    def one(cls, base: BaseGroup) -> "FreeProductWord":
        return cls(base, ())

    @classmethod
    def g(cls, base: BaseGroup, elem, copy: int = 0) -> "FreeProductWord":
        return cls.from_syllables(base, [("g", copy, elem)])

    @classmethod
    def t(cls, base: BaseGroup, j: int = 1, exp: int = 1) -> "FreeProductWord":
        return cls.from_syllables(base, [("t", j, exp)])

    # -- basic queries ------------------------------------------------------

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return len(self.syllables)

    def copies_used(self) -> frozenset:
        return frozenset(s[1] for s in self.syllables if s[0] == "g")

    def has_t(self) -> bool:
        return any(s[0] == "t" for s in self.syllables)

    def t_syllables(self) -> Tuple[Syllable, ...]:
        return tuple(s for s in self.syllables if s[0] == "t")

    def exponent_sum(self, j: int = 1) -> int:
        """Signed t_j exponent total; conjugation invariant."""
        if j < 1:
            raise GroupError(f"unknown generator symbol t_{j}")
        return sum(s[2] for s in self.syllables if s[0] == "t" and s[1] == j)

    def t_sign_sequence(self, j: int = 1) -> Tuple[int, ...]:
        """Signs of the unit t_j letters in reading order."""
        signs: list = []
        for s in self.syllables:
            if s[0] == "t" and s[1] == j:
                signs.extend([1 if s[2] > 0 else -1] * abs(s[2]))
        return tuple(signs)

    # -- arithmetic ----------------------------------------------------------

    def _require_same_base(self, other: "FreeProductWord") -> None:
        if self.base != other.base:
            raise GroupError("operands have different base groups")

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        self._require_same_base(other)
        stack = list(self.syllables)
        for syl in other.syllables:
            _push_syllable(self.base, stack, syl)
        return FreeProductWord(self.base, tuple(stack))

    def inverse(self) -> "FreeProductWord":
        inv = []
        for tag, idx, val in reversed(self.syllables):
            if tag == "g":
                inv.append(("g", idx, self.base.inverse(val)))
            else:
                inv.append(("t", idx, -val))
        return FreeProductWord(self.base, tuple(inv))

    def __pow__(self, k: int) -> "FreeProductWord":
        if k < 0:
            return self.inverse() ** (-k)
        acc = FreeProductWord.one(self.base)
        for _ in range(k):
            acc = acc * self
        return acc

    def conjugate_by(self, y: "FreeProductWord") -> "FreeProductWord":
        """Return y^-1 * self * y."""
        return y.inverse() * self * y

    def shift_copies(self, delta: int) -> "FreeProductWord":
        """Send every g-syllable of copy i to copy i + delta."""
        out = []
        for tag, idx, val in self.syllables:
            if tag == "g":
                if idx + delta < 0:
                    raise GroupError(f"copy shift by {delta} drops below zero")
                out.append(("g", idx + delta, val))
            else:
                out.append((tag, idx, val))
        return FreeProductWord(self.base, tuple(out))

    # -- cyclic structure ----------------------------------------------------

    def cyclic_decompose(self) -> Tuple["FreeProductWord", "FreeProductWord"]:
        """Split self = u * core * u^-1 with core cyclically reduced."""
        syl = list(self.syllables)
        conj: list = []
        while len(syl) >= 3 and syl[0][:2] == syl[-1][:2]:
            first = syl[0]
            conj.append(first)
            rest = syl[1:-1]
            last = syl[-1]
            stack = rest
            _push_syllable(self.base, stack, last)
            _push_syllable(self.base, stack, first)
            # re-normalize the tail in case the merge cascaded
            syl = []
            for s in stack:
                _push_syllable(self.base, syl, s)
        u = FreeProductWord.from_syllables(self.base, conj)
        return u, FreeProductWord(self.base, tuple(syl))

    def cyclic_reduce(self) -> "FreeProductWord":
        """Cyclically reduced conjugate of self; idempotent."""
        return self.cyclic_decompose()[1]

    def rotations(self) -> Iterator["FreeProductWord"]:
        n = len(self.syllables)
        for i in range(max(n, 1)):
            yield FreeProductWord(self.base, self.syllables[i:] + self.syllables[:i])

    def is_conjugate_to(self, other: "FreeProductWord") -> bool:
        """Conjugacy test via cyclic normal forms."""
        self._require_same_base(other)
        a = self.cyclic_reduce()
        b = other.cyclic_reduce()
        if len(a) != len(b):
            return False
        if len(a) == 0:
            return True
        if len(a) == 1:
            sa, sb = a.syllables[0], b.syllables[0]
            if sa[0] != sb[0] or sa[1] != sb[1]:
                return False
            if sa[0] == "t":
                return sa[2] == sb[2]
            return self.base.is_conjugate(sa[2], sb[2])
        return any(rot.syllables == b.syllables for rot in a.rotations())

    def is_power_of(self, h: "FreeProductWord") -> bool:
        """True iff self = h**k for some integer k."""
        self._require_same_base(h)
        if h.is_identity():
            return self.is_identity()
        if self.is_identity():
            return True
        u, c = self.cyclic_decompose()
        v, d = h.cyclic_decompose()
        if len(d) >= 2:
            if len(c) % len(d) != 0:
                return False
            k = len(c) // len(d)
            return self == h ** k or self == h ** (-k)
        # h is conjugate to a single syllable; move self into the same frame
        z = v.inverse() * u
        moved = z * c * z.inverse()
        if len(moved) != 1:
            return False
        s, r = moved.syllables[0], d.syllables[0]
        if s[0] != r[0] or s[1] != r[1]:
            return False
        if s[0] == "t":
            return s[2] % r[2] == 0
        return self.base.cyclic_membership(s[2], r[2])

    # -- expansions -----------------------------------------------------------

    def unit_syllables(self) -> Tuple[Syllable, ...]:
        """Syllables with every t-run split into unit-exponent letters."""
        out: list = []
        for tag, idx, val in self.syllables:
            if tag == "t":
                step = 1 if val > 0 else -1
                out.extend(("t", idx, step) for _ in range(abs(val)))
            else:
                out.append((tag, idx, val))
        return tuple(out)

    def __repr__(self):
        if not self.syllables:
            return "W(1)"
        parts = []
        for tag, idx, val in self.syllables:
            if tag == "g":
                parts.append(f"g{idx}[{self.base.format(val)}]")
            else:
                parts.append(f"t{idx}^{val}" if val != 1 else f"t{idx}")
        return "W(" + " ".join(parts) + ")"


def word(base: BaseGroup, *items) -> FreeProductWord:
    """Build a word from loose syllable tuples or (parseable) shorthand.

    Items may be syllable triples, strings (base literal in copy 0), or
    ("t", j, exp) / ("g", copy, literal-or-element) tuples.
    """
    syls = []
    for it in items:
        if isinstance(it, str):
            syls.append(("g", 0, base.parse(it)))
        elif isinstance(it, tuple) and len(it) == 3 and it[0] in ("g", "t"):
            tag, idx, val = it
            if tag == "g" and isinstance(val, (str, list)):
                val = base.parse(val)
            syls.append((tag, idx, val))
        else:
            raise GroupError(f"cannot interpret word item {it!r}")
    return FreeProductWord.from_syllables(base, syls)


def enumerate_abstract_words(k: int, max_len: int) -> Iterator[Tuple[int, ...]]:
    """All nonempty freely reduced words over k abstract letters, length <= max_len.

    Letters are 1..k with negatives as inverses.
    """
    alphabet = [i for i in range(1, k + 1)] + [-i for i in range(1, k + 1)]

    def extend(prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        for c in alphabet:
            if prefix and prefix[-1] == -c:
                continue
            yield prefix + (c,)

    frontier: Iterable[Tuple[int, ...]] = [()]
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for q in extend(p):
                yield q
                nxt.append(q)
        frontier = nxt


def free_subgroup_probe(generators: Sequence[FreeProductWord], depth: int) -> bool:
    """Bounded freeness check: no reduced abstract word of length <= depth in
    the generators evaluates to the identity.  Vacuously true for no
    generators.
    """
    if depth < 1:
        raise GroupError(f"probe depth must be >= 1, got {depth}")
    gens = list(generators)
    if not gens:
        return True
    base = gens[0].base
    for g in gens:
        if g.base != base:
            raise GroupError("probe generators must share a base group")
    for abstract in enumerate_abstract_words(len(gens), depth):
        acc = FreeProductWord.one(base)
        # evaluating each word from scratch is fine at these sizes
        for c in abstract:
            acc = acc * (gens[c - 1] if c > 0 else gens[-c - 1].inverse())
        if acc.is_identity():
            return False
    return True
