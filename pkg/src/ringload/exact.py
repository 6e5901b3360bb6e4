"""Exact brute-force oracles (exponential, desk-scale instances only).

All enumeration runs on integers after clearing denominators, so results
are exact rationals.  Witnesses are reported for the lowest qualifying
choice mask, which makes every oracle deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import NamedTuple

from .core import CrossingRouting, Pattern, RingInstance, split_loads
from .errors import NotEqualized, TooLarge
from .reduce import GeneralSplitRouting, _ccw_edges, _cw_edges

DEFAULT_CAP = 24


class PerformanceOptimum(NamedTuple):
    value: Fraction
    pattern: Pattern


def min_additive_performance(r: CrossingRouting, cap: int = DEFAULT_CAP) -> PerformanceOptimum:
    """Smallest additive performance over all 2^m complete reroutings of
    a crossing routing, with a witness pattern anchored at 0."""
    m = r.m
    if m > cap:
        raise TooLarge(f"2^{m} reroutings exceeds the enumeration cap 2^{cap}")
    denom, (steps_up, steps_down) = _common_scale(r.v, r.u)
    best_val: int | None = None
    best_mask = 0
    for mask in range(1 << m):
        p = 0
        lo = 0
        hi = 0
        for i in range(m):
            if mask >> i & 1:
                p += steps_up[i]
            else:
                p -= steps_down[i]
            if p < lo:
                lo = p
            elif p > hi:
                hi = p
        perf = max(2 * hi - p, p - 2 * lo)
        if best_val is None or perf < best_val:
            best_val = perf
            best_mask = mask
    assert best_val is not None
    return PerformanceOptimum(
        Fraction(best_val, denom), Pattern(r, best_mask, Fraction(0))
    )


def _common_scale(*groups) -> tuple[int, list[list[int]]]:
    """One denominator clearing every value, plus the scaled numerators
    per group."""
    flat = [Fraction(x) for group in groups for x in group]
    denom = lcm(*(f.denominator for f in flat)) if flat else 1
    return denom, [[int(Fraction(x) * denom) for x in group] for group in groups]


class UnsplittableOptimum(NamedTuple):
    value: Fraction
    routing: GeneralSplitRouting


def _enumerate_unsplittable(
    instance: RingInstance,
    base_cw: list[Fraction],
    free: list[int],
    cap: int,
) -> UnsplittableOptimum:
    """Minimize the maximum edge load over all one-sided routings of the
    ``free`` demands, keeping the rest as given in ``base_cw``.

    Walks masks in Gray-code order with incremental load updates; since
    that visit order is not monotone in the mask, the minimum keeps an
    explicit (value, mask) pair so the lowest qualifying mask wins.
    """
    k = len(free)
    if k > cap:
        raise TooLarge(f"2^{k} routings exceeds the enumeration cap 2^{cap}")
    n = instance.n
    denom, (scaled_cw, scaled_val) = _common_scale(
        base_cw, [d[2] for d in instance.demands]
    )
    loads = [0] * (n + 1)  # 1-based edges

    def paths(t):
        i, j, _ = instance.demands[t]
        return sorted(_cw_edges(n, i, j)), sorted(_ccw_edges(n, i, j))

    # fixed contribution plus the mask-0 state of the free demands (all
    # counter-clockwise)
    free_set = set(free)
    for t in range(len(instance.demands)):
        cw_path, ccw_path = paths(t)
        value = scaled_val[t]
        if t in free_set:
            for e in ccw_path:
                loads[e] += value
        else:
            part = scaled_cw[t]
            for e in cw_path:
                loads[e] += part
            for e in ccw_path:
                loads[e] += value - part

    free_paths = [paths(t) for t in free]
    best_val = max(loads[1:], default=0)
    best_mask = 0
    gray_prev = 0
    for counter in range(1, 1 << k):
        gray = counter ^ (counter >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        gray_prev = gray
        value = scaled_val[free[bit]]
        cw_path, ccw_path = free_paths[bit]
        if gray >> bit & 1:  # flipped onto the clockwise path
            for e in cw_path:
                loads[e] += value
            for e in ccw_path:
                loads[e] -= value
        else:
            for e in cw_path:
                loads[e] -= value
            for e in ccw_path:
                loads[e] += value
        val = max(loads[1:], default=0)
        if val < best_val or (val == best_val and gray < best_mask):
            best_val = val
            best_mask = gray
    cw_out = list(base_cw)
    for pos, t in enumerate(free):
        value = instance.demands[t][2]
        cw_out[t] = value if best_mask >> pos & 1 else Fraction(0)
    witness = GeneralSplitRouting(instance, tuple(cw_out))
    result = Fraction(best_val, denom)
    assert witness.loads().max_load == result
    return UnsplittableOptimum(result, witness)


def optimal_unsplittable(instance: RingInstance, demand_cap: int = DEFAULT_CAP) -> UnsplittableOptimum:
    """Exact unsplittable optimum of a general ring instance by complete
    enumeration over the demands with positive value (zero-value demands
    are reported counter-clockwise in the witness)."""
    free = [t for t, (_, _, d) in enumerate(instance.demands) if d > 0]
    base = [Fraction(0)] * len(instance.demands)
    return _enumerate_unsplittable(instance, base, free, demand_cap)


def optimal_unsplittable_boosted(boosted, cap: int = DEFAULT_CAP) -> UnsplittableOptimum:
    """Unsplittable optimum of a boosted instance with every short demand
    pinned to its home path; only the 2^m crossing reroutings are
    enumerated."""
    instance = boosted.instance
    base = [Fraction(0)] * len(instance.demands)
    free = []
    for t, component in enumerate(boosted.components):
        if component.kind == "crossing":
            free.append(t)
        else:
            base[t] = _home_clockwise(instance, t, component.home_edges)
    return _enumerate_unsplittable(instance, base, free, cap)


def _home_clockwise(instance: RingInstance, t: int, home_edges: tuple[int, ...]) -> Fraction:
    """Clockwise part that routes demand t along its home edges."""
    i, j, value = instance.demands[t]
    if frozenset(home_edges) == _cw_edges(instance.n, i, j):
        return value
    assert frozenset(home_edges) == _ccw_edges(instance.n, i, j)
    return Fraction(0)


def split_optimum_crossing(r: CrossingRouting) -> Fraction:
    """Split optimum of the demand values of a crossing routing: half the
    total demand, realized by the even split (all loads equal, asserted)."""
    total = sum(r.demand_values, Fraction(0))
    even = CrossingRouting(
        tuple(d / 2 for d in r.demand_values), tuple(d / 2 for d in r.demand_values)
    )
    profile = split_loads(even)
    assert all(x == total / 2 for x in profile), "even split is not balanced"
    return total / 2


def split_optimum_boosted(boosted) -> Fraction:
    """Split optimum of a boosted instance, recomputed from its canonical
    configuration: source splits on the crossing demands, home paths for
    the shorts.  All edge loads must agree, otherwise the instance is not
    properly equalized."""
    instance = boosted.instance
    cw = []
    for t, component in enumerate(boosted.components):
        value = instance.demands[t][2]
        if component.kind == "crossing":
            cw.append(component.split[0])
        else:
            cw.append(_home_clockwise(instance, t, component.home_edges))
    profile = GeneralSplitRouting(instance, tuple(cw)).loads()
    first = profile.loads[0]
    if any(x != first for x in profile):
        raise NotEqualized(
            f"canonical configuration loads {tuple(profile)} are not all equal"
        )
    return first
