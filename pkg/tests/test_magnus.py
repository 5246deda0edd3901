import numpy as np
import pytest

import pcohom as pc
from pcohom.errors import WordTooShort
from pcohom.magnus import (TruncatedSeries, _inv_word, counterexample_harness,
                           evaluation_epi, free_nilpotent_standin,
                           lyndon_words, magnus_image, tau,
                           zassenhaus_membership)


def duval_lyndon(k, n):
    """Oracle: Duval's algorithm generating all Lyndon words of length <= n
    in lexicographic order; keep those of length exactly n."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


# ---------------------------------------------------------------------
# series arithmetic
# ---------------------------------------------------------------------

def test_series_basics():
    s = magnus_image([1], 2, 3, 4)
    assert s.coeffs == {(): 1, (1,): 1}
    # a word followed by its inverse is the identity series
    for w in [[1], [1, 2], [2, -1, 1, 2], [-2, 1, 1]]:
        full = w + _inv_word(w)
        assert magnus_image(full, 2, 3, 4) == s.identity()
    # product expands freely: (1+x1)(1+x2) = 1 + x1 + x2 + x1 x2
    s12 = magnus_image([1, 2], 2, 5, 3)
    assert s12.coeffs == {(): 1, (1,): 1, (2,): 1, (1, 2): 1}
    # truncation really truncates
    s = magnus_image([1, 1, 1], 2, 5, 2)
    assert all(len(w) <= 2 for w in s.coeffs)


def test_series_component_vector_order():
    # lexicographic layout: index of x_a x_b is (a-1)*k + (b-1)
    k = 3
    s = magnus_image([1, 2], k, 5, 2)
    v = s.component_vector(2)
    assert v.shape == (9,)
    assert v[0 * k + 1] == 1 and v.sum() == 1


def test_series_rejects_bad_letters():
    with pytest.raises(ValueError):
        magnus_image([3], 2, 2, 2)
    with pytest.raises(ValueError):
        magnus_image([0], 2, 2, 2)
    with pytest.raises(AssertionError):
        TruncatedSeries({(): 2}, 3, 2, 2)


# ---------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------

def test_lyndon_counts_two_enumerations():
    # necklace-counting values for k = 2: 2, 1, 2, 3, 6
    expect = {1: 2, 2: 1, 3: 2, 4: 3, 5: 6}
    for n, cnt in expect.items():
        filt = lyndon_words(2, n)
        duv = duval_lyndon(2, n)
        assert len(filt) == cnt
        assert sorted(filt) == sorted(duv)
    # and a three-letter cross-check: (3^2 - 3)/2 = 3 words of length 2
    assert sorted(lyndon_words(3, 2)) == sorted(duval_lyndon(3, 2))
    assert len(lyndon_words(3, 2)) == 3
    with pytest.raises(WordTooShort):
        lyndon_words(2, 0)


def test_tau_is_right_nested():
    assert tau((0,)) == [1]
    assert tau((0, 1)) == [-1, -2, 1, 2]
    # [a, [b, c]] with a=1, b=2, c=3
    inner = [-2, -3, 2, 3]
    assert tau((0, 1, 2)) == [-1] + _inv_word(inner) + [1] + inner
    with pytest.raises(WordTooShort):
        tau(())


def test_tau_leading_magnus_component():
    # the commutator tau(i-1, j-1) expands as 1 + (x_i x_j - x_j x_i) + ...
    k, p = 4, 5
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            v = magnus_image(tau((i - 1, j - 1)), k, p, 2).component_vector(2)
            expect = np.zeros(k * k, dtype=np.int64)
            expect[(i - 1) * k + (j - 1)] = 1
            expect[(j - 1) * k + (i - 1)] = p - 1
            assert np.array_equal(v, expect)


# ---------------------------------------------------------------------
# Zassenhaus membership by two criteria
# ---------------------------------------------------------------------

def test_membership_known_cases():
    # x^2 lies in the second 2-Zassenhaus term but not the third
    assert zassenhaus_membership([1, 1], 2, 2, 2)["member"]
    assert not zassenhaus_membership([1, 1], 2, 2, 3)["member"]
    # a commutator lies in term 2 (both filtrations) but not term 3
    c = tau((0, 1))
    assert zassenhaus_membership(c, 2, 2, 2)["member"]
    assert not zassenhaus_membership(c, 2, 2, 3)["member"]
    # x^4 reaches term 4 at p = 2; x^3 reaches term 3 at p = 3
    assert zassenhaus_membership([1] * 4, 2, 2, 4)["member"]
    assert zassenhaus_membership([1] * 3, 2, 3, 3)["member"]
    assert not zassenhaus_membership([1] * 3, 2, 3, 4)["member"]
    # a generator is in no term past the first
    assert not zassenhaus_membership([1], 2, 2, 2)["member"]


def test_membership_criteria_agree_on_random_words():
    # the function asserts internally that the series criterion and the
    # exhaustive table evaluation agree; hammer it with seeded random words
    rng = np.random.default_rng(7)
    for _ in range(200):
        length = int(rng.integers(1, 9))
        w = [int(a) * int(s) for a, s in
             zip(rng.integers(1, 3, size=length),
                 rng.choice([-1, 1], size=length))]
        n = int(rng.integers(2, 5))
        rep = zassenhaus_membership(w, 2, 2, n)
        assert rep["series"] == rep["tables"]


# ---------------------------------------------------------------------
# free nilpotent stand-ins
# ---------------------------------------------------------------------

def test_standin_orders_and_chains():
    S = free_nilpotent_standin(2, 2, "zassenhaus", 2)
    assert S.order == 32
    assert pc.zassenhaus(S, 2, 4).orders() == [32, 8, 1]

    L = free_nilpotent_standin(2, 2, "lower-central", 2)
    assert L.order == 32
    assert pc.lower_p_central(L, 2, 4).orders() == [32, 8, 1]

    # at p = 3 the degree-2 layer is spanned by the single commutator
    # (cubes of generators land in degree 3), so the chain is [27, 3, 1]
    S3 = free_nilpotent_standin(2, 3, "zassenhaus", 2)
    assert S3.order == 27
    assert pc.zassenhaus(S3, 3, 4).orders() == [27, 3, 1]


def test_standin_rejects_unknown_kind():
    with pytest.raises(ValueError):
        free_nilpotent_standin(2, 2, "bogus", 2)


def test_evaluation_epi():
    S = free_nilpotent_standin(2, 2, "zassenhaus", 2)
    Q8 = pc.builtin_group("Q8")
    pi = evaluation_epi(S, Q8)
    pi.validate()
    assert pi.is_surjective()
    assert pi.kernel().order == S.order // Q8.order
    # identity evaluation: S -> S
    ident = evaluation_epi(S, S)
    assert np.array_equal(ident.image, np.arange(S.order))


# ---------------------------------------------------------------------
# the full counterexample harness
# ---------------------------------------------------------------------

def test_counterexample_harness():
    rep = counterexample_harness(k=9, p=2, seed=20260823)
    assert rep["pairs"] == 36
    assert rep["deg2_rank"] == 36 and rep["deg2_rank_full"]
    assert rep["tau12_outside_perturbed_span"]
    assert rep["conjugation_invariant_deg2"]
    assert rep["common_commutator_completions"] == 0
    assert rep["explored_prefixes"] > 0
    # the search is not vacuous: two values with a common commutator exist
    assert rep["control_k2_completions"] > 0
    ind = rep["induced_instance"]
    assert ind["standin_order"] == 32 and ind["kernel_order"] == 4
    tr = ind["transfer_report"]
    assert tr["side_a_transfer"] is False
    assert tr["side_b_kernel_condition"] is False
    assert tr["status"] == "PASS"
    assert rep["verdict"] == "transfer equality fails"
    assert rep["elapsed_seconds"] < 300
