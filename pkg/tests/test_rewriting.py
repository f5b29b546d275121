import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spheremotion.groups import FreeAbelianGroup, FreeGroup, FreeProductWord, word
from spheremotion.rewriting import (
    RelativePresentationData,
    RewriteError,
    build_augmented_presentation,
    check_minimality,
    in_P,
    in_P_phi,
    initial_data,
    is_conjugate_to_t_pm_g,
    is_difficult_case,
    is_difficult_pattern,
    lemma1_v,
    lemma2_auxiliary,
    main_theorem_verdict,
    minimize_presentation,
    phi,
    primitive_root_word,
    reconstruct_relator,
    rewrite_word,
    to_shifted_form,
)

F2 = FreeGroup(2)
F3 = FreeGroup(3)
F9 = FreeGroup(9)
Z2 = FreeAbelianGroup(2)


def chain(base, *letters_and_eps):
    """Build g_1 t^e1 g_2 t^e2 ... from (literal, eps) pairs."""
    items = []
    for lit, eps in letters_and_eps:
        items.append(("g", 0, base.parse(lit)))
        items.append(("t", 1, eps))
    return FreeProductWord.from_syllables(base, items)


# ---------------------------------------------------------------------------
# shifted form
# ---------------------------------------------------------------------------


def test_shifted_form_single_letter():
    sf = to_shifted_form(word(F2, "a", ("t", 1, 1)))
    assert sf.n == 1
    assert sf.k == (0,)
    assert sf.pairs == ((F2.parse("a"), 1),)


def test_shifted_form_spec_examples():
    sf = to_shifted_form(chain(F3, ("a", 1), ("b", 1), ("c", -1)))
    assert sf.k == (2, 1, 0)
    sf = to_shifted_form(chain(F3, ("a", 1), ("b", -1), ("c", 1)))
    assert sf.k == (1, 0, 1)


def test_shifted_form_requires_sum_one():
    with pytest.raises(RewriteError):
        to_shifted_form(chain(F2, ("a", 1), ("b", 1)))
    with pytest.raises(RewriteError):
        to_shifted_form(word(F2, "a"))


def test_shifted_form_min_k_zero_and_reassembly():
    w = chain(F3, ("a", 1), ("b", 1), ("c", -1))
    sf = to_shifted_form(w)
    assert min(sf.k) == 0
    assert sf.reassembled().is_conjugate_to(w)


def eps_one_words(base=F3, max_minus=2):
    """Words with t-exponent sum one, built from sign patterns and letters."""
    letters = st.sampled_from(["", "a", "b", "ab", "A", "ba", "aa"])

    @st.composite
    def build(draw):
        n_minus = draw(st.integers(0, max_minus))
        signs = [1] * (n_minus + 1) + [-1] * n_minus
        perm = draw(st.permutations(signs))
        pairs = [(draw(letters), e) for e in perm]
        return chain(base, *pairs)

    return build()


@given(eps_one_words())
@settings(max_examples=150, deadline=None)
def test_reassembly_is_conjugate(w):
    sf = to_shifted_form(w)
    assert min(sf.k) == 0
    assert sf.reassembled().is_conjugate_to(w.cyclic_reduce())


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------


def test_minimize_difficult_example_one():
    # g1 t g2 t^-1 g3 t lands at s = 0 with c = g1, b0 = g2, a0 = g3
    w = chain(F3, ("a", 1), ("b", -1), ("c", 1))
    res = rewrite_word(w)
    d = res.data
    assert (d.s, d.m) == (0, 0)
    assert d.c == word(F3, "a")
    assert d.b == (word(F3, "b"),)
    assert d.a == (word(F3, "c"),)


def test_minimize_difficult_example_two():
    w = chain(F3, ("a", 1), ("b", 1), ("c", -1))
    res = rewrite_word(w)
    d = res.data
    assert (d.s, d.m) == (0, 0)
    assert d.c == word(F3, "b")
    assert d.b == (word(F3, "c"),)
    assert d.a == (word(F3, "a"),)


def test_minimize_easy_word_keeps_P_nontrivial():
    w = chain(FreeGroup(5), ("a", 1), ("b", 1), ("c", 1), ("d", -1), ("e", -1))
    res = rewrite_word(w)
    d = res.data
    assert d.s >= 1
    assert d.m >= 0
    mins = check_minimality(d)
    assert all(mins.values())


def test_minimize_n_is_one():
    res = rewrite_word(word(F2, "a", ("t", 1, 1)))
    assert res.n_is_one
    assert (res.data.s, res.data.m) == (0, -1)
    assert not is_difficult_case(word(F2, "a", ("t", 1, 1)))


def test_minimize_is_fixpoint():
    w = chain(F3, ("a", 1), ("b", 1), ("c", -1))
    d = rewrite_word(w).data
    again, trace = minimize_presentation(d)
    assert again == d and trace == ()


def test_inverted_input_recorded():
    w = chain(F3, ("a", -1), ("b", -1), ("c", 1))  # exponent sum -1
    res = rewrite_word(w)
    assert res.inverted
    assert reconstruct_relator(res.data).is_conjugate_to(w.inverse().cyclic_reduce())


@given(eps_one_words())
@settings(max_examples=120, deadline=None)
def test_reconstruction_roundtrip(w):
    res = rewrite_word(w)
    assert reconstruct_relator(res.data).is_conjugate_to(w.cyclic_reduce())
    # every intermediate invariant: the initial data also reconstructs
    assert reconstruct_relator(res.initial).is_conjugate_to(w.cyclic_reduce())


@given(eps_one_words(max_minus=3))
@settings(max_examples=80, deadline=None)
def test_minimized_data_is_minimal(w):
    d = rewrite_word(w).data
    if d.m >= 0:
        assert all(not in_P(ai, d.s) for ai in d.a)
        assert all(not in_P_phi(bi, d.s) for bi in d.b)
    if d.s > 0:
        assert d.s in d.copies_in_coefficients()


def all_sign_patterns(n):
    plus = (n + 1) // 2
    for pos in itertools.combinations(range(n), plus):
        signs = [-1] * n
        for p in pos:
            signs[p] = 1
        yield tuple(signs)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9])
def test_difficult_iff_pattern(n):
    gens = "abcdefghi"
    for signs in all_sign_patterns(n):
        w = chain(F9, *[(gens[i], signs[i]) for i in range(n)])
        assert is_difficult_case(w) == is_difficult_pattern(signs), signs


def test_difficult_pattern_examples():
    assert is_difficult_pattern((1, -1, 1))
    assert is_difficult_pattern((1, 1, -1))
    assert not is_difficult_pattern((1, 1, 1, -1, -1))
    assert not is_difficult_pattern((1,))


# ---------------------------------------------------------------------------
# t^{+-1} g criterion and verdict
# ---------------------------------------------------------------------------


def test_t_pm_g_criterion():
    assert is_conjugate_to_t_pm_g(word(F2, ("t", 1, 1)))
    assert is_conjugate_to_t_pm_g(word(F2, "ab", ("t", 1, -1)))
    assert not is_conjugate_to_t_pm_g(word(F2, ("t", 1, 2), "a"))
    assert not is_conjugate_to_t_pm_g(chain(F2, ("a", 1), ("b", -1), ("a", 1)))
    # conjugation invariance
    w = word(F2, "b", ("t", 1, 1), "a").conjugate_by(word(F2, "ab", ("t", 1, 3)))
    assert is_conjugate_to_t_pm_g(w)


def test_main_theorem_verdict():
    w = word(F2, ("t", 1, 1), "a")
    assert main_theorem_verdict(True, w)["simple"]
    v = main_theorem_verdict(False, w)
    assert not v["simple"] and "base group is not simple" in v["failing"]
    v = main_theorem_verdict(True, chain(F2, ("a", 1), ("b", -1), ("a", 1)))
    assert not v["simple"] and v["failing"] == ("word is not conjugate to t^{+-1} g",)


# ---------------------------------------------------------------------------
# auxiliary elements
# ---------------------------------------------------------------------------


def g_at(base, copy, literal):
    return FreeProductWord.from_syllables(base, [("g", copy, base.parse(literal))])


def test_primitive_root_word():
    w = word(F2, "a", ("t", 1, 1)) ** 3
    r, e = primitive_root_word(w)
    assert e == 3 and r == word(F2, "a", ("t", 1, 1))
    r, e = primitive_root_word(word(F2, ("t", 1, -6)))
    assert (r, e) == (word(F2, ("t", 1, -1)), 6)
    r, e = primitive_root_word(word(F2, "abab"))
    assert e == 2 and r == word(F2, "ab")
    z4 = FreeProductWord.from_syllables(Z2, [("g", 0, (4, 6))])
    r, e = primitive_root_word(z4)
    assert e == 2 and r == FreeProductWord.from_syllables(Z2, [("g", 0, (2, 3))])


def test_lemma1_v_u_inside_B():
    u = g_at(F2, 1, "a")
    v = lemma1_v(F2, [0], [1], u)
    # v = b^-1 a b with b from B avoiding roots of u
    assert v == g_at(F2, 1, "b").inverse() * g_at(F2, 0, "a") * g_at(F2, 1, "b")
    from spheremotion.groups import free_subgroup_probe

    assert free_subgroup_probe([g_at(F2, 0, "a"), u, v], 4)


def test_lemma1_v_mixed_u():
    u = g_at(F2, 1, "a") * g_at(F2, 0, "b") * g_at(F2, 1, "ab")
    v = lemma1_v(F2, [0], [1], u)
    from spheremotion.groups import free_subgroup_probe

    assert free_subgroup_probe([g_at(F2, 0, "a"), u, v], 4)


def test_lemma1_v_strips_A_runs():
    # u = (A-run) u0 (A-run); the flanking runs must not affect freeness
    u = g_at(F2, 0, "b") * g_at(F2, 1, "a") * g_at(F2, 0, "a")
    v = lemma1_v(F2, [0], [1], u)
    from spheremotion.groups import free_subgroup_probe

    assert free_subgroup_probe([g_at(F2, 0, "a"), u, v], 4)


def test_lemma1_v_errors():
    with pytest.raises(RewriteError):
        lemma1_v(F2, [], [1], g_at(F2, 1, "a"))  # A trivial
    with pytest.raises(RewriteError):
        lemma1_v(FreeGroup(1), [0], [1], g_at(FreeGroup(1), 1, "a"))  # B cyclic
    with pytest.raises(RewriteError):
        lemma1_v(F2, [0], [1], g_at(F2, 0, "a"))  # u in A
    with pytest.raises(RewriteError):
        lemma1_v(F2, [0], [1], g_at(F2, 2, "a"))  # u outside <A, B>


def test_lemma2_auxiliary_on_easy_word():
    w = chain(FreeGroup(5), ("a", 1), ("b", 1), ("c", 1), ("d", -1), ("e", -1))
    d = rewrite_word(w).data
    assert d.s >= 1 and d.m >= 0
    base = d.base
    samples = [
        g_at(base, 0, "a"),
        g_at(base, 0, "ab") * g_at(base, 0, "c") if d.s > 1 else g_at(base, 0, "ba"),
        phi(g_at(base, 0, "b")),
    ]
    a1, b1 = lemma2_auxiliary(d, 0, probe_depth=4, samples=samples)
    assert not a1.is_identity() and not b1.is_identity()


def test_lemma2_auxiliary_errors():
    w = chain(F3, ("a", 1), ("b", -1), ("c", 1))
    d = rewrite_word(w).data  # s = 0
    with pytest.raises(RewriteError):
        lemma2_auxiliary(d, 0)
    one = FreeGroup(1)
    dd = RelativePresentationData(
        one, 1, 0, g_at(one, 1, "a"), (g_at(one, 1, "a"),), (g_at(one, 1, "a"),)
    )
    with pytest.raises(RewriteError):
        lemma2_auxiliary(dd, 0)


# ---------------------------------------------------------------------------
# augmented presentations
# ---------------------------------------------------------------------------


def test_build_augmented_power_four():
    w = chain(F3, ("a", 1), ("b", -1), ("c", 1))
    d = rewrite_word(w).data  # s = 0, a_0 = c, b_0 = b
    a = word(F3, "a")
    b = word(F3, "a", "b") * word(F3, "a")  # generic
    pres, report = build_augmented_presentation(d, a, b, d=2, power=4)
    assert len(pres.relators) == 2
    assert not pres.has_phi
    assert report["face_type"] == "c" and report["face_s"] == 4
    assert report["face_k"] == report["face_l"] == 1
    assert pres.relators[1].t_sign_sequence() == (-1, -1, 1, 1) * 4


def test_build_augmented_power_four_hypothesis_fail():
    w = chain(F3, ("a", 1), ("b", -1), ("c", 1))
    d = rewrite_word(w).data  # a_0 = c
    bad_a = word(F3, "c")  # a^2 = c^2 is a power of a_0
    with pytest.raises(RewriteError):
        build_augmented_presentation(d, bad_a, word(F3, "a"), d=2, power=4)
    bad_b = word(F3, "b")  # b^2 in <b_0>
    with pytest.raises(RewriteError):
        build_augmented_presentation(d, word(F3, "a"), bad_b, d=2, power=4)


def test_build_augmented_power_one():
    w = chain(FreeGroup(5), ("a", 1), ("b", 1), ("c", 1), ("d", -1), ("e", -1))
    d = rewrite_word(w).data
    assert d.s >= 1
    base = d.base
    samples = [g_at(base, 0, "a"), phi(g_at(base, 0, "b"))]
    a_aux, b_aux = lemma2_auxiliary(d, d.m)
    pres, report = build_augmented_presentation(
        d, a_aux, b_aux, d=3, power=1, samples=samples
    )
    assert pres.has_phi
    assert report["face_type"] == "d"
    assert report["face_k"] == report["face_l"] == 2
    assert pres.relators[1].t_sign_sequence() == (-1, -1, -1, 1, 1, 1)


def test_build_augmented_power_one_wrong_s():
    w = chain(F3, ("a", 1), ("b", -1), ("c", 1))
    d = rewrite_word(w).data  # s = 0
    with pytest.raises(RewriteError):
        build_augmented_presentation(d, word(F3, "a"), word(F3, "b"), d=2, power=1)


def test_shifted_form_abelian_base():
    w = FreeProductWord.from_syllables(
        Z2, [("g", 0, (1, 0)), ("t", 1, 1), ("g", 0, (0, 1)), ("t", 1, -1), ("g", 0, (2, 2)), ("t", 1, 1)]
    )
    res = rewrite_word(w)
    assert (res.data.s, res.data.m) == (0, 0)
    assert reconstruct_relator(res.data).is_conjugate_to(w)
