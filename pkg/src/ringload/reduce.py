"""Reduction of general ring routings to pairwise-crossing form.

A split routing of an arbitrary ring instance is preprocessed in three
steps: (1) repeatedly exchange flow between parallel split demands until
every remaining pair of split demands crosses, never increasing any edge
load; (2) freeze the demands that ended up routed one-sidedly; (3)
contract nodes that no split demand touches and relabel, producing the
canonical form where demand i joins nodes i and i+m on a 2m-ring.

A trace carries everything needed to lift an unsplittable rerouting of
the reduced form back onto the original instance.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .core import CrossingRouting, DeltaClass, LoadProfile, RingInstance, to_rational
from .errors import MalformedRouting

CW = "cw"
CCW = "ccw"


@dataclass(frozen=True)
class GeneralSplitRouting:
    """A split routing of a RingInstance: per demand, the part routed
    clockwise (from i towards j through edges i..j-1); the rest goes the
    other way around."""

    instance: RingInstance
    clockwise: tuple[Fraction, ...]

    def __post_init__(self):
        cw = tuple(to_rational(x) for x in self.clockwise)
        demands = self.instance.demands
        if len(cw) != len(demands):
            raise MalformedRouting(
                f"{len(demands)} demands but {len(cw)} clockwise parts"
            )
        for part, (i, j, value) in zip(cw, demands):
            if not 0 <= part <= value:
                raise MalformedRouting(
                    f"clockwise part {part} outside [0, {value}] for demand ({i},{j})"
                )
        object.__setattr__(self, "clockwise", cw)

    @classmethod
    def from_crossing(cls, r: CrossingRouting) -> "GeneralSplitRouting":
        return cls(r.to_ring_instance(), r.u)

    @property
    def counter_clockwise(self) -> tuple[Fraction, ...]:
        return tuple(
            value - part
            for part, (_, _, value) in zip(self.clockwise, self.instance.demands)
        )

    def split_indices(self) -> tuple[int, ...]:
        """0-based indices of demands with positive flow both ways."""
        return tuple(
            t
            for t, (part, (_, _, value)) in enumerate(
                zip(self.clockwise, self.instance.demands)
            )
            if 0 < part < value
        )

    def loads(self) -> LoadProfile:
        return _loads(self.instance, self.clockwise, range(len(self.instance.demands)))


def _cw_edges(n: int, i: int, j: int) -> frozenset[int]:
    """Edges of the clockwise path i -> j (1 <= i < j <= n)."""
    return frozenset(range(i, j))


def _ccw_edges(n: int, i: int, j: int) -> frozenset[int]:
    """Edges of the counter-clockwise path i -> j."""
    return frozenset(range(j, n + 1)) | frozenset(range(1, i))


def _loads(instance: RingInstance, clockwise, which) -> LoadProfile:
    """Edge loads contributed by the selected demands (difference-array sweep)."""
    n = instance.n
    diff = [Fraction(0)] * (n + 2)

    def add(lo, hi, amount):  # edges lo..hi inclusive
        if lo > hi or amount == 0:
            return
        diff[lo] += amount
        diff[hi + 1] -= amount

    for t in which:
        i, j, value = instance.demands[t]
        part = clockwise[t]
        add(i, j - 1, part)
        add(j, n, value - part)
        add(1, i - 1, value - part)
    out = []
    acc = Fraction(0)
    for k in range(1, n + 1):
        acc += diff[k]
        out.append(acc)
    return LoadProfile(tuple(out))


def demands_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """True when the endpoint pairs strictly interleave around the ring;
    shared endpoints and nested or disjoint spans count as parallel."""
    i, j = a
    k, l = b
    return (i < k < j < l) or (k < i < l < j)


@dataclass(frozen=True)
class UncrossStep:
    """One flow exchange between two parallel split demands (0-based
    indices).  ``amount`` moved onto the named edge-disjoint paths."""

    first: int
    second: int
    first_path: str
    second_path: str
    amount: Fraction


def uncross_parallel(s: GeneralSplitRouting) -> tuple[GeneralSplitRouting, tuple[UncrossStep, ...]]:
    """Exchange flow between parallel split demands until all remaining
    split demands pairwise cross.  Each exchange pushes both demands onto
    edge-disjoint paths, so no edge load ever increases (asserted), and
    at least one of the two demands becomes one-sided."""
    instance = s.instance
    n = instance.n
    demands = instance.demands
    cw = list(s.clockwise)
    steps: list[UncrossStep] = []
    before = _loads(instance, cw, range(len(demands))).loads

    def pick_pair():
        split = [t for t in range(len(demands)) if 0 < cw[t] < demands[t][2]]
        # deterministic: scan pairs ordered by endpoint labels, then index
        order = sorted(split, key=lambda t: (demands[t][0], demands[t][1], t))
        for a_pos in range(len(order)):
            for b_pos in range(a_pos + 1, len(order)):
                sa, sb = order[a_pos], order[b_pos]
                if not demands_cross(demands[sa][:2], demands[sb][:2]):
                    return sa, sb
        return None

    while True:
        pair = pick_pair()
        if pair is None:
            break
        sa, sb = pair
        ia, ja, da = demands[sa]
        ib, jb, db = demands[sb]
        combo = None
        for pa in (CW, CCW):
            ea = _cw_edges(n, ia, ja) if pa == CW else _ccw_edges(n, ia, ja)
            for pb in (CW, CCW):
                eb = _cw_edges(n, ib, jb) if pb == CW else _ccw_edges(n, ib, jb)
                if not ea & eb:
                    combo = (pa, pb)
                    break
            if combo:
                break
        if combo is None:
            raise MalformedRouting(
                f"no edge-disjoint path combination for parallel demands "
                f"({ia},{ja}) and ({ib},{jb})"
            )
        pa, pb = combo
        # amount limited by the flow still on each complement path
        room_a = da - cw[sa] if pa == CW else cw[sa]
        room_b = db - cw[sb] if pb == CW else cw[sb]
        amount = min(room_a, room_b)
        assert amount > 0
        cw[sa] += amount if pa == CW else -amount
        cw[sb] += amount if pb == CW else -amount
        steps.append(UncrossStep(sa, sb, pa, pb, amount))
        # at least one demand came off the fence
        assert not (0 < cw[sa] < da) or not (0 < cw[sb] < db)
        after = _loads(instance, cw, range(len(demands))).loads
        assert all(x <= y for x, y in zip(after, before)), "uncrossing raised a load"
        before = after
    return GeneralSplitRouting(instance, tuple(cw)), tuple(steps)


@dataclass(frozen=True)
class ReductionTrace:
    """Everything needed to map patterns on the reduced routing back.

    ``base`` is the uncrossed routing on the original instance;
    ``demand_keys[p-1]`` is the 0-based original index of crossing demand
    p; ``fixed_directions`` records, per original demand, "cw"/"ccw" for
    one-sided demands and None for crossing ones; ``edge_images[k-1]`` is
    the reduced edge carrying original edge k; ``kept_nodes`` are the
    surviving original node labels in relabel order.
    """

    base: GeneralSplitRouting
    uncross_steps: tuple[UncrossStep, ...]
    demand_keys: tuple[int, ...]
    fixed_directions: tuple[str | None, ...]
    edge_images: tuple[int, ...]
    kept_nodes: tuple[int, ...]

    def lift(self, choices: int) -> GeneralSplitRouting:
        """Routing of the original instance realizing the given crossing
        rerouting mask (bit p-1 set = crossing demand p fully clockwise)
        on top of the uncrossed base."""
        m = len(self.demand_keys)
        if not isinstance(choices, int) or not 0 <= choices < (1 << m):
            raise MalformedRouting(f"choices {choices!r} out of range for m={m}")
        cw = list(self.base.clockwise)
        for p in range(1, m + 1):
            t = self.demand_keys[p - 1]
            value = self.base.instance.demands[t][2]
            cw[t] = value if choices >> (p - 1) & 1 else Fraction(0)
        return GeneralSplitRouting(self.base.instance, tuple(cw))


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of to_crossing_form: the canonical crossing routing (or
    None when no split demand survives) plus its trace."""

    routing: CrossingRouting | None
    trace: ReductionTrace

    @property
    def trivial(self) -> bool:
        return self.routing is None


def to_crossing_form(s: GeneralSplitRouting) -> ReductionResult:
    """Uncross, freeze one-sided demands, contract untouched nodes, and
    relabel into the canonical crossing form."""
    base, steps = uncross_parallel(s)
    instance = base.instance
    n = instance.n
    demands = instance.demands
    cw = base.clockwise

    split_idx = list(base.split_indices())
    fixed: list[str | None] = []
    for t, (i, j, value) in enumerate(demands):
        if t in split_idx:
            fixed.append(None)
        elif value > 0 and cw[t] == value:
            fixed.append(CW)
        else:
            fixed.append(CCW)

    if not split_idx:
        trace = ReductionTrace(base, steps, (), tuple(fixed), (), ())
        return ReductionResult(None, trace)

    # crossing demands never share endpoints; anything else is an
    # uncrossing bug, not a property of the input
    endpoint_owners: dict[int, int] = {}
    for t in split_idx:
        for node in demands[t][:2]:
            if node in endpoint_owners:
                raise MalformedRouting(
                    f"node {node} touches two split demands after uncrossing"
                )
            endpoint_owners[node] = t

    kept = sorted(endpoint_owners)
    m = len(split_idx)
    assert len(kept) == 2 * m

    # merged edge t covers the original arc kept[t-1] -> kept[t]
    # (clockwise); edge 2m wraps from kept[-1] around to kept[0]
    images = []
    for k in range(1, n + 1):
        pos = bisect_right(kept, k)
        images.append(pos if 0 < pos < 2 * m else 2 * m)

    # contraction is only sound if the split-demand loads agree on all
    # edges being merged together
    split_profile = _loads(instance, cw, split_idx).loads
    merged: dict[int, Fraction] = {}
    for k in range(1, n + 1):
        image = images[k - 1]
        if image in merged:
            if merged[image] != split_profile[k - 1]:
                raise MalformedRouting(
                    f"unequal split loads {merged[image]} vs {split_profile[k - 1]} "
                    f"on edges merging into reduced edge {image}"
                )
        else:
            merged[image] = split_profile[k - 1]

    position = {node: idx + 1 for idx, node in enumerate(kept)}
    by_p: list[int | None] = [None] * m
    for t in split_idx:
        i, j, value = demands[t]
        p, q = position[i], position[j]
        # pairwise-crossing endpoints must interleave perfectly
        assert q - p == m, f"demand ({i},{j}) relabels to ({p},{q}), not antipodal"
        assert by_p[p - 1] is None
        by_p[p - 1] = t
    keys = tuple(t for t in by_p if t is not None)
    assert len(keys) == m

    u = tuple(cw[t] for t in keys)
    v = tuple(demands[t][2] - cw[t] for t in keys)
    routing = CrossingRouting(u, v)
    trace = ReductionTrace(base, steps, keys, tuple(fixed), tuple(images), tuple(kept))
    return ReductionResult(routing, trace)


def classify_delta(r: CrossingRouting) -> DeltaClass:
    """Spread classification of the reduced routing (see
    CrossingRouting.classify_delta)."""
    return r.classify_delta()
