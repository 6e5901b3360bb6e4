"""Greedy constructions against a literal re-simulation oracle."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ringload import (
    BACKWARD,
    FORWARD,
    CrossingRouting,
    InvalidEnd,
    InvalidStart,
    MalformedRouting,
    Pattern,
    backward_greedy,
    forward_greedy,
    is_proper,
)
from support import crossing_routings, resimulate_backward, resimulate_forward

anchor_weights = st.integers(0, 24)


@given(crossing_routings(), anchor_weights)
def test_forward_matches_resimulation(r, w):
    x = r.max_demand * w / 24
    p = forward_greedy(r, x)
    assert p.start == x
    assert p.choices == resimulate_forward(r, x)
    lo, hi = p.strip
    assert 0 <= lo and hi <= r.max_demand


@given(crossing_routings(), anchor_weights)
def test_backward_matches_resimulation(r, w):
    y = r.max_demand * w / 24
    p = backward_greedy(r, y)
    assert p.end == y
    assert p.choices == resimulate_backward(r, y)
    lo, hi = p.strip
    assert 0 <= lo and hi <= r.max_demand


@given(crossing_routings(), anchor_weights)
def test_greedy_is_deterministic(r, w):
    x = r.max_demand * w / 24
    assert forward_greedy(r, x) == forward_greedy(r, x)
    assert backward_greedy(r, x) == backward_greedy(r, x)


def test_anchor_range_enforced():
    r = CrossingRouting((1, 1), (1, 1))
    with pytest.raises(InvalidStart):
        forward_greedy(r, Fraction(-1, 2))
    with pytest.raises(InvalidStart):
        forward_greedy(r, Fraction(5, 2))
    with pytest.raises(InvalidEnd):
        backward_greedy(r, Fraction(-1, 2))
    with pytest.raises(InvalidEnd):
        backward_greedy(r, Fraction(5, 2))
    with pytest.raises(MalformedRouting):
        forward_greedy(r, 0.5)


def test_exact_ties_step_clockwise():
    # six unit demands from D/2 = 1: each tie between 2 and 0 resolves
    # up, pinning the alternating mask 0b010101
    r = CrossingRouting((1,) * 6, (1,) * 6)
    p = forward_greedy(r, Fraction(1))
    assert p.choices == 0b010101
    assert p.prefix_values == (1, 2, 1, 2, 1, 2, 1)


def test_tie_free_walks_mirror_each_other():
    # with no exact ties the walk from D - x on the direction-swapped
    # routing is the reflection of the walk from x: complemented mask,
    # mirrored trajectory
    r = CrossingRouting((2, 9), (5, 3))
    p = forward_greedy(r, Fraction(6))
    assert p.choices == 0b10 and p.end == 7
    q = forward_greedy(CrossingRouting(r.v, r.u), Fraction(6))
    assert q.choices == p.choices ^ 0b11
    assert q.prefix_values == tuple(12 - t for t in p.prefix_values)


def test_is_proper_closed_margins():
    r = CrossingRouting((2,), (2,))  # D = 4
    delta = Fraction(1, 2)  # margin = D * delta / 4 = 1/2
    assert is_proper(Pattern(r, 1, Fraction(1, 2)), FORWARD, delta)
    assert not is_proper(Pattern(r, 1, Fraction(1, 4)), FORWARD, delta)
    assert is_proper(Pattern(r, 1, Fraction(7, 2)), FORWARD, delta)
    assert not is_proper(Pattern(r, 1, Fraction(15, 4)), FORWARD, delta)
    # backward patterns are judged by their end anchor
    assert is_proper(Pattern(r, 1, Fraction(3, 2)), BACKWARD, delta)
    assert not is_proper(Pattern(r, 1, Fraction(7, 4)), BACKWARD, delta)
    with pytest.raises(ValueError):
        is_proper(Pattern(r, 1, Fraction(1)), "sideways", delta)
