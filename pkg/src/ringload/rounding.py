"""Certified rounding of split crossing routings to unsplittable ones.

Every rounding routine returns a pattern together with an a-priori bound
(a multiple of the largest demand D) that its construction guarantees,
and the performance it actually realized.  The constructor re-checks
realized <= certified * D and refuses to build a result that would break
its own certificate.

The main routine classifies the instance by how balanced its most
central demand is (delta in [0, 1/2]) and dispatches:

  * delta >= 2/5: a single backward greedy pass through the extremal
    demand already achieves (3/2 - delta/2) * D.
  * delta < 2/5: the same pass either lands inside an explicit start
    window, or spawns two induced greedy patterns; one of the three is
    close enough to another (or to its own mirrored anchor) to combine
    into a pattern within (7/6 + delta/3) * D.

Both branches stay at or below 13/10 * D at the crossover point
delta = 2/5.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import (
    CrossingRouting,
    Pattern,
    additive_performance,
    to_rational,
)
from .errors import GuaranteeViolated, LengthMismatch, ParameterOutOfRange
from .greedy import BACKWARD, FORWARD, backward_greedy, forward_greedy, is_proper


class RoundingMethod(Enum):
    SSW = "ssw"
    MEDIUM = "medium"
    UPPER = "upper"
    CROSSOVER = "crossover"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class BoundedRounding:
    """A rounding outcome that carries its own certificate.

    certified_bound is a multiple of D; realized is the absolute
    additive performance of the pattern.  Construction fails loudly if
    the pattern does not honor the certificate.
    """

    pattern: Pattern
    certified_bound: Fraction
    realized: Fraction
    method: RoundingMethod
    note: str = ""

    def __post_init__(self):
        big = self.pattern.routing.max_demand
        limit = self.certified_bound * big
        if self.realized != additive_performance(self.pattern):
            raise GuaranteeViolated(
                f"stated performance {self.realized} does not match the pattern"
            )
        if self.realized > limit:
            raise GuaranteeViolated(
                f"realized performance {self.realized} exceeds certified "
                f"{self.certified_bound} * D = {limit}"
            )


def ssw_round(r: CrossingRouting) -> BoundedRounding:
    """Baseline: forward greedy from D/2.  The walk stays in [0, D], so
    the performance never exceeds (3/2) * D regardless of the instance."""
    pattern = forward_greedy(r, r.max_demand / 2)
    return BoundedRounding(
        pattern, Fraction(3, 2), additive_performance(pattern), RoundingMethod.SSW
    )


def closeness(p1: Pattern, p2: Pattern) -> tuple[Fraction, int]:
    """Smallest pointwise distance between two prefix walks on the same
    routing, with the first index attaining it (0..m)."""
    if p1.routing != p2.routing:
        raise LengthMismatch("patterns live on different routings")
    a = p1.prefix_values
    b = p2.prefix_values
    best = None
    where = 0
    for k, (x, y) in enumerate(zip(a, b)):
        gap = abs(x - y)
        if best is None or gap < best:
            best = gap
            where = k
    assert best is not None
    return best, where


def crossover(p1: Pattern, p2: Pattern) -> Pattern:
    """Splice two patterns at their closest point: follow p1's choices up
    to the witness index, p2's afterwards, and center the start so both
    halves shift by half the gap.  The result keeps the combined anchor
    sum x1 + y2 and stays within the union strip widened by half the gap
    on each side (all asserted)."""
    gap, k = closeness(p1, p2)
    g = p1.prefix_values[k] - p2.prefix_values[k]
    low_mask = (1 << k) - 1
    choices = (p1.choices & low_mask) | (p2.choices & ~low_mask)
    start = p1.start - g / 2
    spliced = Pattern(p1.routing, choices, start)
    assert spliced.start + spliced.end == p1.start + p2.end
    lo1, hi1 = p1.strip
    lo2, hi2 = p2.strip
    lo, hi = spliced.strip
    assert min(lo1, lo2) - gap / 2 <= lo and hi <= max(hi1, hi2) + gap / 2
    return spliced


def induced_patterns(r: CrossingRouting, pa: Pattern) -> tuple[Pattern, Pattern]:
    """The two companion greedy patterns of a base pattern: a forward one
    whose start mirrors two thirds of pa's end, and a backward one whose
    end mirrors two thirds of pa's start.  Their anchors satisfy the
    midpoint identities asserted below, which drive the crossover bound."""
    big = r.max_demand
    xa, ya = pa.start, pa.end
    xb = 2 * (big - ya) / 3 + xa / 3
    yc = 2 * (big - xa) / 3 + ya / 3
    pb = forward_greedy(r, xb)
    pc = backward_greedy(r, yc)
    assert big - yc == (xa + xb) / 2
    assert big - xb == (ya + yc) / 2
    return pb, pc


def round_via_induced(
    r: CrossingRouting,
    pa: Pattern,
    delta,
    *,
    pa_direction: str = BACKWARD,
) -> BoundedRounding:
    """Combine a proper base pattern with its two induced greedy patterns
    into one whose performance is at most D + |D - (xa+ya)|/3 + delta*D/2.

    Either one of the induced patterns already starts (ends) close enough
    to its mirrored end (start) to qualify alone, or two of the three
    walks pass within delta*D/2 of each other and their splice qualifies.
    The latter must happen whenever the former fails: three walks confined
    to [0, D] whose endpoint order is not a cyclic shift of their start
    order force a crossing somewhere.
    """
    delta = to_rational(delta)
    big = r.max_demand
    lo, hi = pa.strip
    if lo < 0 or hi > big:
        raise GuaranteeViolated(f"base pattern strip [{lo}, {hi}] leaves [0, {big}]")
    if not is_proper(pa, pa_direction, delta):
        raise GuaranteeViolated("base pattern anchor is not proper")
    pb, pc = induced_patterns(r, pa)
    if not is_proper(pb, FORWARD, delta):
        raise GuaranteeViolated("induced forward pattern start is not proper")
    if not is_proper(pc, BACKWARD, delta):
        raise GuaranteeViolated("induced backward pattern end is not proper")

    xa, ya = pa.start, pa.end
    anchor_sum = xa + ya
    eps = abs(big - anchor_sum) / 3 + delta * big / 2
    certified = (big + eps) / big

    chosen = None
    method = None
    if abs(pc.start - (big - pc.end)) <= eps:
        chosen, method = pc, RoundingMethod.UPPER
    elif abs(pb.end - (big - pb.start)) <= eps:
        chosen, method = pb, RoundingMethod.UPPER
    else:
        for first, second in ((pb, pa), (pa, pc), (pb, pc)):
            gap, _ = closeness(first, second)
            if gap <= delta * big / 2:
                chosen, method = crossover(first, second), RoundingMethod.CROSSOVER
                break
    if chosen is None:
        starts = sorted((p.start, name) for p, name in ((pa, "a"), (pb, "b"), (pc, "c")))
        ends = sorted((p.end, name) for p, name in ((pa, "a"), (pb, "b"), (pc, "c")))
        raise GuaranteeViolated(
            "no qualifying pattern or crossover pair; "
            f"start order {starts}, end order {ends}"
        )
    return BoundedRounding(chosen, certified, additive_performance(chosen), method)


def _rotate_routing(r: CrossingRouting, shift: int) -> CrossingRouting:
    """Renumber demands so that old demand shift+1 becomes demand 1.
    Demands that wrap past m re-enter with their two directions swapped."""
    m = r.m
    u = []
    v = []
    for j in range(1, m + 1):
        i = j + shift
        if i <= m:
            u.append(r.u[i - 1])
            v.append(r.v[i - 1])
        else:
            i -= m
            u.append(r.v[i - 1])
            v.append(r.u[i - 1])
    return CrossingRouting(tuple(u), tuple(v))


def _unrotate_pattern(r: CrossingRouting, rotated: Pattern, shift: int) -> Pattern:
    """Carry a pattern on the rotated routing back to the input indexing,
    flipping the choice bits of wrapped demands and re-centering the start
    so the anchor sum x + y is preserved (performance is unchanged either
    way; asserted)."""
    m = r.m
    choices = 0
    for j in range(1, m + 1):
        bit = rotated.choices >> (j - 1) & 1
        i = j + shift
        if i <= m:
            if bit:
                choices |= 1 << (i - 1)
        else:
            i -= m
            if not bit:
                choices |= 1 << (i - 1)
    step_sum = Pattern(r, choices, Fraction(0)).end
    start = (rotated.start + rotated.end - step_sum) / 2
    pattern = Pattern(r, choices, start)
    assert additive_performance(pattern) == additive_performance(rotated)
    return pattern


def _swap_directions(r: CrossingRouting) -> CrossingRouting:
    return CrossingRouting(r.v, r.u)


def _reflect_pattern(target: CrossingRouting, p: Pattern) -> Pattern:
    """Mirror a pattern across D/2.  The mirrored walk takes the opposite
    choice at every step, so it lives on the direction-swapped routing.
    Applying the reflection twice gives back the original pattern."""
    m = p.routing.m
    assert target.u == p.routing.v and target.v == p.routing.u
    full = (1 << m) - 1
    return Pattern(target, p.choices ^ full, p.routing.max_demand - p.start)


def _checked_delta(r: CrossingRouting, delta) -> tuple[Fraction, int]:
    delta = to_rational(delta)
    cls = r.classify_delta()
    if delta != cls.value:
        raise ParameterOutOfRange(
            f"stated class {delta} does not match the instance's {cls.value}"
        )
    return delta, cls.index


def _extended_backward(rr: CrossingRouting) -> tuple[Pattern, bool]:
    """Backward greedy through the extremal last demand.

    Ending at (D + d_m)/2 forces the last step up; ending at (D - d_m)/2
    forces it down; both walks then coincide, so they share their start.
    Returns the high-anchored walk if it starts at or below D/2, else the
    low-anchored one, plus which case applied."""
    big = rr.max_demand
    d_last = rr.demand_values[-1]
    m = rr.m
    high = backward_greedy(rr, (big + d_last) / 2)
    assert high.choices >> (m - 1) & 1, "high anchor must force the last step up"
    if high.start <= big / 2:
        return high, True
    low = backward_greedy(rr, (big - d_last) / 2)
    assert not (low.choices >> (m - 1) & 1), "low anchor must force the last step down"
    assert low.start == high.start
    assert low.choices == high.choices ^ (1 << (m - 1))
    return low, False


def round_medium(r: CrossingRouting, delta) -> BoundedRounding:
    """Rounding for well-spread instances: one backward greedy pass
    anchored just past the most central demand, certified at
    (3/2 - delta/2) * D."""
    delta, index = _checked_delta(r, delta)
    shift = index % r.m
    rr = _rotate_routing(r, shift)
    chosen, _ = _extended_backward(rr)
    pattern = _unrotate_pattern(r, chosen, shift)
    certified = Fraction(3, 2) - delta / 2
    return BoundedRounding(
        pattern, certified, additive_performance(pattern), RoundingMethod.MEDIUM
    )


def round_upper(r: CrossingRouting, delta) -> BoundedRounding:
    """Rounding for poorly-spread instances (delta <= 2/5), certified at
    (7/6 + delta/3) * D.

    The extremal backward walk either starts inside an explicit window
    around the mirror of its end anchor and qualifies alone, or serves as
    the base pattern for the induced-pattern combination.  When the walk
    starts above D/2 everything is mirrored first; the mirror swaps the
    two ring directions and is undone on the way out.
    """
    delta, index = _checked_delta(r, delta)
    if delta > Fraction(2, 5):
        raise ParameterOutOfRange(
            f"class {delta} > 2/5: use round_medium for well-spread instances"
        )
    shift = index % r.m
    rr = _rotate_routing(r, shift)
    chosen, used_high = _extended_backward(rr)
    if used_high:
        work, base, reflected = rr, chosen, False
    else:
        work = _swap_directions(rr)
        base = _reflect_pattern(work, chosen)
        reflected = True
    big = work.max_demand
    d_last = work.demand_values[-1]
    assert base.end == (big + d_last) / 2
    assert base.start <= big / 2
    certified = Fraction(7, 6) + delta / 3
    window = big / 6 + delta * big / 3
    mirrored_end = (big - d_last) / 2
    if abs(base.start - mirrored_end) <= window:
        inner = BoundedRounding(
            base, certified, additive_performance(base), RoundingMethod.UPPER
        )
    else:
        inner = round_via_induced(work, base, delta, pa_direction=BACKWARD)
        assert inner.certified_bound <= certified
    pattern = inner.pattern
    if reflected:
        pattern = _reflect_pattern(rr, pattern)
    pattern = _unrotate_pattern(r, pattern, shift)
    return BoundedRounding(
        pattern, certified, additive_performance(pattern), inner.method
    )


def round_main(r: CrossingRouting) -> BoundedRounding:
    """Certified rounding within 13/10 * D: dispatch on the spread class,
    then keep the baseline greedy pattern instead if it happens to
    realize a smaller performance (the branch certificate still applies)."""
    cls = r.classify_delta()
    if cls.value >= Fraction(2, 5):
        branch = round_medium(r, cls.value)
    else:
        branch = round_upper(r, cls.value)
    assert branch.certified_bound <= Fraction(13, 10)
    baseline = ssw_round(r)
    if baseline.realized < branch.realized:
        return BoundedRounding(
            baseline.pattern,
            branch.certified_bound,
            baseline.realized,
            RoundingMethod.SSW,
            note=(
                "baseline greedy pattern kept (smaller realized value); "
                f"certificate inherited from the {branch.method.value} construction"
            ),
        )
    return branch
