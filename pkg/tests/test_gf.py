import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcohom import gf

PRIMES = [2, 3, 5, 7]


def rand_matrix(rng, rows, cols, p):
    return rng.integers(0, p, size=(rows, cols)).astype(np.int64)


# ---------------------------------------------------------------------
# fixed oracles
# ---------------------------------------------------------------------

def test_rref_identity():
    r, piv = gf.rref(np.eye(3, dtype=np.int64), 5)
    assert np.array_equal(r, np.eye(3, dtype=np.int64))
    assert piv == [0, 1, 2]


def test_rref_known_rank():
    # rows 2 and 3 are multiples of row 1 mod 5
    a = np.array([[1, 2, 3], [2, 4, 6], [3, 6, 9]])
    assert gf.rank(a, 5) == 1
    # mod 2 the second row vanishes entirely
    assert gf.rank(a, 2) == 1


def test_solve_known_system():
    a = np.array([[1, 1], [0, 1]])
    x = gf.solve(a, np.array([0, 1]), 2)
    assert np.array_equal((a @ x) % 2, [0, 1])
    # inconsistent system
    a = np.array([[1, 1], [1, 1]])
    assert gf.solve(a, np.array([0, 1]), 2) is None


def test_nullspace_known():
    a = np.array([[1, 1, 0], [0, 0, 1]])
    ns = gf.nullspace(a, 3)
    assert ns.shape == (1, 3)
    assert np.array_equal((a @ ns.T) % 3, np.zeros((2, 1)))


# ---------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(PRIMES),
       st.integers(1, 8), st.integers(1, 8))
def test_rref_preserves_row_space(seed, p, rows, cols):
    rng = np.random.default_rng(seed)
    a = rand_matrix(rng, rows, cols, p)
    r, piv = gf.rref(a, p)
    assert len(piv) == r.shape[0] == gf.rank(a, p)
    # every original row is in the span of the rref rows, and vice versa
    for v in a:
        assert gf.in_row_space(r, v, p) if r.shape[0] else not v.any()
    for v in r:
        assert gf.in_row_space(a, v, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(PRIMES),
       st.integers(1, 7), st.integers(1, 7))
def test_nullspace_and_rank_nullity(seed, p, rows, cols):
    rng = np.random.default_rng(seed)
    a = rand_matrix(rng, rows, cols, p)
    ns = gf.nullspace(a, p)
    assert not np.any((a @ ns.T) % p)
    assert gf.rank(a, p) + ns.shape[0] == cols
    if ns.shape[0]:
        assert gf.rank(ns, p) == ns.shape[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(PRIMES),
       st.integers(1, 7), st.integers(1, 7))
def test_solve_solves_solvable_systems(seed, p, rows, cols):
    rng = np.random.default_rng(seed)
    a = rand_matrix(rng, rows, cols, p)
    x0 = rng.integers(0, p, size=cols)
    b = (a @ x0) % p
    x = gf.solve(a, b, p)
    assert x is not None
    assert np.array_equal((a @ x) % p, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(PRIMES), st.integers(1, 6))
def test_span_matches_batch_rank(seed, p, cols):
    rng = np.random.default_rng(seed)
    vs = rand_matrix(rng, 8, cols, p)
    span = gf.Span(cols, p)
    for v in vs:
        grew = span.add(v.copy())
        assert isinstance(grew, bool)
    assert span.dim == gf.rank(vs, p)
    for v in vs:
        assert span.contains(v)
        c = span.coords(v)
        assert c is not None
        assert np.array_equal((c @ span.basis()) % p, v % p)


def test_span_rejects_dependent_vector():
    span = gf.Span(3, 2)
    assert span.add([1, 1, 0])
    assert span.add([0, 1, 1])
    assert not span.add([1, 0, 1])   # sum of the first two
    assert span.dim == 2
    assert not span.contains([1, 1, 1])
