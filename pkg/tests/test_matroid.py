from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mixedcongestion.errors import CapExceededError, GameError
from mixedcongestion.generators import random_matroid
from mixedcongestion.matroid import (
    MatroidHandle, enumerate_bases, exchange_property_holds, greedy_min_basis,
    is_independent, lemma1_verify,
)

TRIANGLE = MatroidHandle.graphic([(0, 1, "e1"), (1, 2, "e2"), (2, 0, "e3")])


def _brute_bases(m):
    """Independent oracle: maximal independent subsets by exhaustive search."""
    ground = list(m.ground)
    indep = [frozenset(c) for k in range(len(ground) + 1)
             for c in itertools.combinations(ground, k) if m.is_independent(c)]
    top = max(len(s) for s in indep)
    return {s for s in indep if len(s) == top}


# -- oracle examples -------------------------------------------------------------

def test_is_independent_examples():
    assert is_independent(MatroidHandle.uniform("abc", 2), {"a", "b"})
    assert not is_independent(TRIANGLE, {"e1", "e2", "e3"})
    part = MatroidHandle.partition([["a", "b"], ["c"]], [1, 1])
    assert not is_independent(part, {"a", "b"})
    assert is_independent(part, {"a", "c"})


def test_is_independent_rejects_foreign_elements():
    with pytest.raises(GameError):
        MatroidHandle.uniform("abc", 2).is_independent({"z"})


def test_enumerate_bases_examples():
    assert enumerate_bases(MatroidHandle.uniform("abc", 2)) == [
        frozenset("ab"), frozenset("ac"), frozenset("bc")]
    assert len(enumerate_bases(TRIANGLE)) == 3
    ex = MatroidHandle.explicit([["c", "b"], ["a", "b"]], ground=["a", "b", "c"])
    assert enumerate_bases(ex) == [frozenset("ab"), frozenset("bc")]


def test_enumerate_bases_cap():
    big = MatroidHandle.uniform([f"x{k}" for k in range(20)], 2)
    with pytest.raises(CapExceededError):
        big.enumerate_bases()
    assert big.basis_count() == 190


def test_greedy_examples():
    w = {"a": Fraction(1), "b": Fraction(2), "c": Fraction(3)}
    assert greedy_min_basis(MatroidHandle.uniform("abc", 2), w) == frozenset("ab")
    assert greedy_min_basis(TRIANGLE, {"e1": 1, "e2": 1, "e3": 5}) == {"e1", "e2"}
    ex = MatroidHandle.explicit([["a", "b"], ["b", "c"]])
    assert greedy_min_basis(ex, {"a": 0, "b": 0, "c": 10}) == frozenset("ab")


def test_greedy_ties_follow_ground_order():
    m = MatroidHandle.uniform(["c", "a", "b"], 2)
    assert m.greedy_min_basis({"a": 1, "b": 1, "c": 1}) == frozenset("ca")


def test_multigraph_parallel_edges():
    m = MatroidHandle.graphic([(0, 1, "p"), (0, 1, "q"), (1, 2, "r")])
    assert m.rank() == 2
    assert not m.is_independent({"p", "q"})
    assert len(m.enumerate_bases()) == 2


def test_lemma1_examples():
    w = {"a": Fraction(1), "b": Fraction(2), "c": Fraction(3)}
    res = lemma1_verify(MatroidHandle.uniform("abc", 2), w)
    assert res.holds and res.witness is None and res.greedy == frozenset("ab")
    assert lemma1_verify(MatroidHandle.explicit([["a"]]), {"a": 7}).holds


def test_explicit_exchange_flags():
    good = MatroidHandle.explicit([["a", "b"], ["a", "c"], ["b", "c"]])
    assert good.exchange_verified is True
    bad = MatroidHandle.explicit([["a", "b"], ["c", "d"]])
    assert bad.exchange_verified is False
    assert bad.problems()
    wide = MatroidHandle.explicit([[f"x{k}" for k in range(11)]])
    assert wide.exchange_verified is None


# -- properties on random matroids --------------------------------------------------

def _matroid(seed):
    rng = random.Random(seed)
    ground = [f"g{k}" for k in range(rng.randint(1, 8))]
    return random_matroid(rng, ground), rng


def _weights(rng, m):
    return {e: Fraction(rng.randint(0, 12), rng.randint(1, 4)) for e in m.ground}


@given(st.integers(0, 10**9))
def test_enumeration_matches_brute_force(seed):
    m, _ = _matroid(seed)
    bases = m.enumerate_bases()
    assert set(bases) == _brute_bases(m)
    assert len(bases) == len(set(bases)) == m.basis_count()
    assert all(len(b) == m.rank() for b in bases)


@given(st.integers(0, 10**9))
def test_basis_exchange(seed):
    m, _ = _matroid(seed)
    bases = set(m.enumerate_bases())
    for b1, b2 in itertools.product(bases, repeat=2):
        for x in b1 - b2:
            assert any((b1 - {x}) | {y} in bases for y in b2 - b1)
    assert exchange_property_holds(bases)


@given(st.integers(0, 10**9))
def test_greedy_is_min_sum_basis(seed):
    m, rng = _matroid(seed)
    w = _weights(rng, m)
    g = m.greedy_min_basis(w)
    assert m.is_basis(g)
    assert sum(w[e] for e in g) == min(sum(w[e] for e in b) for b in m.enumerate_bases())


@given(st.integers(0, 10**9))
def test_lemma1_on_random_matroids(seed):
    m, rng = _matroid(seed)
    assert lemma1_verify(m, _weights(rng, m)).holds


@given(st.integers(0, 10**9))
def test_explicit_handle_agrees_with_source(seed):
    m, rng = _matroid(seed)
    ex = MatroidHandle.explicit(m.enumerate_bases(), ground=m.ground)
    assert ex.exchange_verified is True
    assert ex.enumerate_bases() == m.enumerate_bases()
    w = _weights(rng, m)
    assert ex.greedy_min_basis(w) == m.greedy_min_basis(w)
