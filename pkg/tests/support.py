"""Shared generators and independent oracles for the test suite.

The oracles here recompute everything from first principles (explicit
per-edge membership loops, no prefix sums, no closed forms) so that the
library and the tests can only agree by being right.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from hypothesis import strategies as st

from ringload import (
    CrossingRouting,
    GeneralSplitRouting,
    Pattern,
    RingInstance,
    pattern_delta,
)

positive_rationals = st.fractions(
    min_value=Fraction(1, 12), max_value=Fraction(24), max_denominator=12
)


@st.composite
def crossing_routings(draw, min_m: int = 1, max_m: int = 8) -> CrossingRouting:
    m = draw(st.integers(min_m, max_m))
    u = tuple(draw(positive_rationals) for _ in range(m))
    v = tuple(draw(positive_rationals) for _ in range(m))
    return CrossingRouting(u, v)


@st.composite
def routed_patterns(draw, min_m: int = 1, max_m: int = 8) -> Pattern:
    r = draw(crossing_routings(min_m, max_m))
    choices = draw(st.integers(0, (1 << r.m) - 1))
    start = draw(st.fractions(min_value=-24, max_value=24, max_denominator=12))
    return Pattern(r, choices, start)


@st.composite
def general_routings(draw, max_demands: int = 8) -> GeneralSplitRouting:
    n = draw(st.integers(4, 12))
    pool = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    count = draw(st.integers(1, min(max_demands, len(pool))))
    picks = draw(st.permutations(pool))[:count]
    demands = []
    parts = []
    for i, j in sorted(picks):
        value = draw(st.fractions(min_value=0, max_value=12, max_denominator=8))
        demands.append((i, j, value))
        if value == 0:
            parts.append(Fraction(0))
        else:
            # weight in [0, 1] with exact endpoints reachable
            num = draw(st.integers(0, 16))
            parts.append(value * Fraction(num, 16))
    return GeneralSplitRouting(RingInstance(n, tuple(demands)), tuple(parts))


def crossing_edge_load(r: CrossingRouting, k: int, choices=None) -> Fraction:
    """Load on edge k (1..2m) by explicit membership: demand i covers
    edges i..i+m-1 clockwise, the rest counter-clockwise.  With a
    choices mask, each demand goes fully one way."""
    m = r.m
    total = Fraction(0)
    for i in range(1, m + 1):
        on_cw = i <= k <= i + m - 1
        if choices is None:
            total += r.u[i - 1] if on_cw else r.v[i - 1]
        else:
            full = r.u[i - 1] + r.v[i - 1]
            goes_cw = choices >> (i - 1) & 1
            if on_cw == bool(goes_cw):
                total += full
    return total


def naive_split_loads(r: CrossingRouting) -> tuple[Fraction, ...]:
    return tuple(crossing_edge_load(r, k) for k in range(1, 2 * r.m + 1))


def naive_unsplittable_loads(r: CrossingRouting, choices: int) -> tuple[Fraction, ...]:
    return tuple(crossing_edge_load(r, k, choices) for k in range(1, 2 * r.m + 1))


def naive_performance(r: CrossingRouting, choices: int) -> Fraction:
    """Worst per-edge load increase, straight from the loads."""
    split = naive_split_loads(r)
    rerouted = naive_unsplittable_loads(r, choices)
    return max(b - a for a, b in zip(split, rerouted))


def naive_min_performance(r: CrossingRouting, reverse: bool = False):
    """(value, lowest optimal mask) by plain mask enumeration; the
    reverse flag flips the visiting order to probe order independence."""
    masks = range((1 << r.m) - 1, -1, -1) if reverse else range(1 << r.m)
    best = None
    best_mask = None
    for mask in masks:
        perf = naive_performance(r, mask)
        if best is None or perf < best or (perf == best and mask < best_mask):
            best = perf
            best_mask = mask
    return best, best_mask


def naive_unsplittable_optimum(instance: RingInstance):
    """(value, clockwise tuple) minimizing the max edge load over all
    one-sided routings, by ascending-mask enumeration over the demands
    with positive value (zero-value demands stay counter-clockwise).
    Ties keep the lowest mask."""
    free = [t for t, (_, _, value) in enumerate(instance.demands) if value > 0]
    best = None
    best_cw = None
    for mask in range(1 << len(free)):
        cw = [Fraction(0)] * len(instance.demands)
        for pos, t in enumerate(free):
            if mask >> pos & 1:
                cw[t] = instance.demands[t][2]
        load = GeneralSplitRouting(instance, tuple(cw)).loads().max_load
        if best is None or load < best:
            best = load
            best_cw = tuple(cw)
    return best, best_cw


def general_edge_load(g: GeneralSplitRouting, k: int) -> Fraction:
    """Load on edge k of a general split routing by explicit path walks."""
    n = g.instance.n
    total = Fraction(0)
    for (i, j, value), cw in zip(g.instance.demands, g.clockwise):
        cw_edges = set(range(i, j))
        if k in cw_edges:
            total += cw
        else:
            total += value - cw
    return total


def naive_general_loads(g: GeneralSplitRouting) -> tuple[Fraction, ...]:
    return tuple(general_edge_load(g, k) for k in range(1, g.instance.n + 1))


def resimulate_forward(r: CrossingRouting, x: Fraction) -> int:
    """Re-derive the forward greedy mask with an independent literal
    transcription of the step rule (stay inside, get close to D/2,
    prefer up on ties)."""
    big = r.max_demand
    half = big / 2
    cur = x
    mask = 0
    for i in range(r.m):
        up = cur + r.v[i]
        down = cur - r.u[i]
        candidates = []
        if up <= big:
            candidates.append((abs(half - up), 0, up, 1 << i))
        if down >= 0:
            candidates.append((abs(half - down), 1, down, 0))
        dist, _, cur, bit = min(candidates)
        mask |= bit
    return mask


def resimulate_backward(r: CrossingRouting, y: Fraction) -> int:
    big = r.max_demand
    half = big / 2
    cur = y
    mask = 0
    for i in reversed(range(r.m)):
        was_up = cur - r.v[i]
        was_down = cur + r.u[i]
        candidates = []
        if was_up >= 0:
            candidates.append((abs(half - was_up), 0, was_up, 1 << i))
        if was_down <= big:
            candidates.append((abs(half - was_down), 1, was_down, 0))
        dist, _, cur, bit = min(candidates)
        mask |= bit
    return mask


def check_trace_replay(result) -> int:
    """Assert, for EVERY rerouting mask of a non-trivial reduction, that
    lifting it back changes each original edge's load by exactly the
    pattern's delta on that edge's image.  Returns the mask count."""
    trace = result.trace
    r = result.routing
    base_loads = trace.base.loads().loads
    n = trace.base.instance.n
    for choices in range(1 << r.m):
        lifted = trace.lift(choices).loads().loads
        delta = pattern_delta(Pattern(r, choices, Fraction(0))).loads
        for k in range(1, n + 1):
            assert lifted[k - 1] - base_loads[k - 1] == delta[trace.edge_images[k - 1] - 1]
    return 1 << r.m


def random_crossing(rng: Random, max_m: int = 16, max_den: int = 12) -> CrossingRouting:
    m = rng.randint(1, max_m)
    u = []
    v = []
    for _ in range(m):
        u.append(Fraction(rng.randint(1, 3 * max_den), rng.randint(1, max_den)))
        v.append(Fraction(rng.randint(1, 3 * max_den), rng.randint(1, max_den)))
    return CrossingRouting(tuple(u), tuple(v))


def random_pattern(rng: Random, r: CrossingRouting) -> Pattern:
    choices = rng.randrange(1 << r.m)
    start = Fraction(rng.randint(-24, 24), rng.randint(1, 12))
    return Pattern(r, choices, start)


def random_general(rng: Random, max_split: int = 10, max_unsplit: int = 10) -> GeneralSplitRouting:
    """A ring instance with a mix of genuinely split and one-sided
    demands (distinct node pairs, exact rational parts)."""
    n = rng.randint(6, 14)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rng.shuffle(pairs)
    want_split = rng.randint(1, max_split)
    want_unsplit = rng.randint(0, max_unsplit)
    demands = []
    parts = []
    for idx, (i, j) in enumerate(pairs[: want_split + want_unsplit]):
        den = rng.randint(1, 8)
        value = Fraction(rng.randint(1, 24), den)
        demands.append((i, j, value))
        if idx < want_split:
            parts.append(value * Fraction(rng.randint(1, den * 4), den * 4 + 1))
        else:
            parts.append(value if rng.random() < 0.5 else Fraction(0))
    instance = RingInstance(n, tuple(demands))
    return GeneralSplitRouting(instance, tuple(parts))
