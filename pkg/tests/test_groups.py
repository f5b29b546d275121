import pytest
from hypothesis import given, settings, strategies as st

from spheremotion.groups import (
    FreeAbelianGroup,
    FreeGroup,
    FreeProductWord,
    GroupError,
    enumerate_abstract_words,
    free_subgroup_probe,
    reduce_letters,
    word,
)

F2 = FreeGroup(2)
F3 = FreeGroup(3)
Z2 = FreeAbelianGroup(2)


# ---------------------------------------------------------------------------
# oracle: multiply words by flattening to unit letters and cancelling,
# independent of the syllable stack machinery under test
# ---------------------------------------------------------------------------


def flatten_letters(w):
    """Unit letters of a word over a free base: ('g', copy, letter) / ('t', j, s)."""
    out = []
    for tag, idx, val in w.syllables:
        if tag == "g":
            out.extend(("g", idx, c) for c in val)
        else:
            s = 1 if val > 0 else -1
            out.extend(("t", idx, s) for _ in range(abs(val)))
    return out


def cancel_letters(letters):
    out = []
    for l in letters:
        if out and out[-1][:2] == l[:2] and out[-1][2] == -l[2]:
            out.pop()
        else:
            out.append(l)
    return out


def oracle_multiply_letters(u, v):
    return cancel_letters(cancel_letters(flatten_letters(u)) + cancel_letters(flatten_letters(v)))


# strategies ----------------------------------------------------------------


def syllable_items(max_copy=2, max_sym=2):
    g_item = st.tuples(
        st.just("g"),
        st.integers(0, max_copy),
        st.lists(st.sampled_from([1, 2, -1, -2]), max_size=4).map(tuple),
    )
    t_item = st.tuples(st.just("t"), st.integers(1, max_sym), st.integers(-3, 3).filter(bool))
    return st.one_of(g_item, t_item)


def words_f2(max_size=8):
    def build(items):
        syls = []
        for tag, idx, val in items:
            if tag == "g":
                syls.append(("g", idx, reduce_letters(val)))
            else:
                syls.append((tag, idx, val))
        return FreeProductWord.from_syllables(F2, syls)

    return st.lists(syllable_items(), max_size=max_size).map(build)


# free base -------------------------------------------------------------------


def test_free_parse_and_format():
    assert F2.parse("abA") == (1, 2, -1)
    assert F2.parse("") == ()
    assert F2.parse("aA") == ()
    assert F2.format((1, 2, -1)) == "abA"
    with pytest.raises(GroupError):
        F2.parse("c")
    with pytest.raises(GroupError):
        F2.parse("a1")


def test_free_multiply_cancels():
    x = F2.parse("ab")
    y = F2.parse("BA")
    assert F2.multiply(x, y) == ()
    assert F2.multiply(F2.parse("ab"), F2.parse("b")) == (1, 2, 2)
    assert F2.inverse(F2.parse("abb")) == F2.parse("BBA")


def test_free_primitive_root():
    r, e = F2.primitive_root(F2.parse("ababab"))
    assert r == F2.parse("ab") and e == 3
    r, e = F2.primitive_root(F2.parse("a"))
    assert r == (1,) and e == 1
    # conjugated power: b (ab)^2 B
    x = F2.multiply(F2.parse("b"), F2.multiply(F2.parse("abab"), F2.parse("B")))
    r, e = F2.primitive_root(x)
    assert e == 2 and F2.is_conjugate(r, F2.parse("ab"))


def cyclic_oracle_free(g, h):
    # enumerate h^k until the length can no longer match
    if g == ():
        return True
    if h == ():
        return False
    for k in range(-2 * len(g) - 4, 2 * len(g) + 5):
        if F2.power(h, k) == g:
            return True
    return False


@given(
    st.lists(st.sampled_from([1, 2, -1, -2]), max_size=6),
    st.lists(st.sampled_from([1, 2, -1, -2]), max_size=4),
)
@settings(max_examples=200, deadline=None)
def test_free_cyclic_membership_matches_enumeration(gl, hl):
    g = reduce_letters(gl)
    h = reduce_letters(hl)
    assert F2.cyclic_membership(g, h) == cyclic_oracle_free(g, h)


def test_free_cyclic_membership_examples():
    assert F2.cyclic_membership(F2.parse("aaa"), F2.parse("a"))
    assert not F2.cyclic_membership(F2.parse("ab"), F2.parse("a"))
    assert F2.cyclic_membership(F2.parse("BABA"), F2.parse("ab"))


def test_free_conjugacy():
    assert F2.is_conjugate(F2.parse("ab"), F2.parse("ba"))
    assert not F2.is_conjugate(F2.parse("ab"), F2.parse("ab" + "b"))
    assert F2.is_conjugate(F2.parse("Bab"), F2.parse("a"))


# abelian base ---------------------------------------------------------------


def test_abelian_ops():
    assert Z2.multiply((1, 2), (3, -2)) == (4, 0)
    assert Z2.inverse((1, -5)) == (-1, 5)
    assert Z2.power((2, 1), 3) == (6, 3)
    assert Z2.parse([4, 0]) == (4, 0)


def test_abelian_cyclic_membership():
    assert Z2.cyclic_membership((4, 6), (2, 3))
    assert not Z2.cyclic_membership((4, 5), (2, 3))
    assert not Z2.cyclic_membership((2, 3), (4, 6))
    assert Z2.cyclic_membership((0, 0), (4, 6))
    assert not Z2.cyclic_membership((1, 0), (0, 0))


# normal form ------------------------------------------------------------------


def test_normal_form_merges_and_drops():
    w = FreeProductWord.from_syllables(
        F2, [("g", 0, (1,)), ("g", 0, (-1,)), ("t", 1, 2), ("t", 1, -2), ("g", 1, (2,))]
    )
    assert w.syllables == (("g", 1, (2,)),)


def test_normal_form_rejects_bad_syllables():
    with pytest.raises(GroupError):
        FreeProductWord(F2, (("g", 0, ()),))
    with pytest.raises(GroupError):
        FreeProductWord(F2, (("t", 1, 0),))
    with pytest.raises(GroupError):
        FreeProductWord(F2, (("g", 0, (1,)), ("g", 0, (2,))))
    with pytest.raises(GroupError):
        FreeProductWord(F2, (("t", 0, 1),))


def test_t_squared_example():
    tg = word(F2, ("t", 1, 1), "a")
    ginv_t = word(F2, "A", ("t", 1, 1))
    assert tg * ginv_t == word(F2, ("t", 1, 2))


@given(words_f2(), words_f2())
@settings(max_examples=250, deadline=None)
def test_multiply_matches_letter_oracle(u, v):
    got = flatten_letters(u * v)
    assert got == oracle_multiply_letters(u, v)


@given(words_f2())
@settings(max_examples=150, deadline=None)
def test_inverse_is_inverse(w):
    assert (w * w.inverse()).is_identity()
    assert (w.inverse() * w).is_identity()


@given(words_f2(), words_f2(), words_f2())
@settings(max_examples=100, deadline=None)
def test_multiply_associative(u, v, w):
    assert (u * v) * w == u * (v * w)


# cyclic reduction -------------------------------------------------------------


def test_cyclic_decompose_example():
    # w = a t a^-1 reduces to core t with conjugator a
    w = word(F2, "a", ("t", 1, 1), "A")
    u, core = w.cyclic_decompose()
    assert core == word(F2, ("t", 1, 1))
    assert u == word(F2, "a")
    assert u * core * u.inverse() == w


def test_cyclic_decompose_merging_ends():
    # ends in the same copy but not mutually inverse: core picks up the product
    w = word(F2, "a", ("t", 1, 1), "b")
    u, core = w.cyclic_decompose()
    assert u * core * u.inverse() == w
    assert core.syllables[0][:2] != core.syllables[-1][:2] or len(core) == 1


@given(words_f2())
@settings(max_examples=200, deadline=None)
def test_cyclic_reduce_idempotent_and_conjugate(w):
    u, core = w.cyclic_decompose()
    assert u * core * u.inverse() == w
    assert core.cyclic_reduce() == core
    if len(core) >= 2:
        assert core.syllables[0][:2] != core.syllables[-1][:2]


@given(words_f2(), words_f2())
@settings(max_examples=150, deadline=None)
def test_conjugacy_invariants(w, y):
    c = w.conjugate_by(y)
    assert c.is_conjugate_to(w)
    assert c.exponent_sum(1) == w.exponent_sum(1)
    assert c.exponent_sum(2) == w.exponent_sum(2)


def test_conjugacy_distinguishes():
    a = word(F2, "a")
    b = word(F2, "b")
    assert not a.is_conjugate_to(b)
    # same copy, conjugate base elements
    assert word(F2, "ab").is_conjugate_to(word(F2, "ba"))
    # different copies are never conjugate
    w1 = FreeProductWord.from_syllables(F2, [("g", 0, (1,))])
    w2 = FreeProductWord.from_syllables(F2, [("g", 1, (1,))])
    assert not w1.is_conjugate_to(w2)


def test_exponent_sum():
    w = word(F2, ("t", 1, 2), "a", ("t", 1, -1), ("t", 2, 5))
    assert w.exponent_sum(1) == 1
    assert w.exponent_sum(2) == 5
    assert w.t_sign_sequence(1) == (1, 1, -1)


# powers ------------------------------------------------------------------------


def power_oracle(g, h, bound=6):
    for k in range(-bound, bound + 1):
        if h ** k == g:
            return True
    return False


@given(words_f2(max_size=4), st.integers(-4, 4))
@settings(max_examples=200, deadline=None)
def test_is_power_of_detects_true_powers(h, k):
    g = h ** k
    assert g.is_power_of(h)


@given(words_f2(max_size=3), words_f2(max_size=3))
@settings(max_examples=150, deadline=None)
def test_is_power_of_matches_enumeration(g, h):
    # any k with h^k = g satisfies |k| <= letters(g) + 2*letters(h), since the
    # cyclically reduced core of h contributes at least one letter per factor
    bound = len(flatten_letters(g)) + 2 * len(flatten_letters(h)) + 4
    assert g.is_power_of(h) == power_oracle(g, h, bound=bound)


def test_is_power_of_examples():
    t = word(F2, ("t", 1, 1))
    assert word(F2, ("t", 1, 6)).is_power_of(word(F2, ("t", 1, 2)))
    assert not word(F2, ("t", 1, 3)).is_power_of(word(F2, ("t", 1, 2)))
    w = word(F2, "a", ("t", 1, 1))
    assert (w ** 3).is_power_of(w)
    assert not (w ** 3 * word(F2, "b")).is_power_of(w)
    # conjugated single syllable
    g = word(F2, "b", "aaaa", "B")
    h = word(F2, "b", "aa", "B")
    assert g.is_power_of(h)
    assert not h.is_power_of(g)


def test_shift_copies():
    w = FreeProductWord.from_syllables(F2, [("g", 0, (1,)), ("t", 1, 1), ("g", 2, (2,))])
    s = w.shift_copies(1)
    assert s.syllables == (("g", 1, (1,)), ("t", 1, 1), ("g", 3, (2,)))
    with pytest.raises(GroupError):
        s.shift_copies(-2)


# probe ---------------------------------------------------------------------------


def test_enumerate_abstract_words_counts():
    # over 1 letter: a, A, aa, AA (length <= 2)
    assert sorted(enumerate_abstract_words(1, 2)) == sorted([(1,), (-1,), (1, 1), (-1, -1)])
    ws = list(enumerate_abstract_words(2, 3))
    assert len(ws) == 4 + 12 + 36
    assert all(all(a != -b for a, b in zip(w, w[1:])) for w in ws)


def test_probe_free_pair():
    x = word(F3, "a")
    y = word(F3, "b")
    assert free_subgroup_probe([x, y], 6)


def test_probe_dependent_pair():
    x = word(F3, "a")
    assert not free_subgroup_probe([x, x * x], 4)


def test_probe_empty_and_identity():
    assert free_subgroup_probe([], 3)
    assert not free_subgroup_probe([FreeProductWord.one(F2)], 1)


def test_probe_mixed_t_words():
    u = word(F2, "a", ("t", 1, 1))
    v = word(F2, "b")
    assert free_subgroup_probe([u, v], 5)
