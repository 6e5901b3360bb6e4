"""Greedy pattern constructions.

Both builders keep the trajectory inside [0, D] at every index — always
possible because each demand value is at most D — and steer as close to
D/2 as they can at each step.  Exact ties prefer the clockwise step
(+v); any fixed rule would do, but this one is pinned for
reproducibility.
"""

from __future__ import annotations

from .core import CrossingRouting, Pattern, to_rational
from .errors import InvalidEnd, InvalidStart

FORWARD = "forward"
BACKWARD = "backward"


def forward_greedy(r: CrossingRouting, x) -> Pattern:
    """Build a pattern left to right from anchor ``x`` in [0, D]."""
    big = r.max_demand
    x = to_rational(x)
    if not 0 <= x <= big:
        raise InvalidStart(f"start {x} outside [0, {big}]")
    half = big / 2
    choices = 0
    cur = x
    for i in range(r.m):
        up = cur + r.v[i]
        down = cur - r.u[i]
        # at least one branch stays inside [0, D] since u[i] + v[i] <= D
        if up <= big and (down < 0 or abs(half - up) <= abs(half - down)):
            choices |= 1 << i
            cur = up
        else:
            cur = down
    assert 0 <= cur <= big
    return Pattern(r, choices, x)


def backward_greedy(r: CrossingRouting, y) -> Pattern:
    """Build a pattern right to left from end anchor ``y`` in [0, D]."""
    big = r.max_demand
    y = to_rational(y)
    if not 0 <= y <= big:
        raise InvalidEnd(f"end {y} outside [0, {big}]")
    half = big / 2
    choices = 0
    cur = y
    for i in reversed(range(r.m)):
        # undo step i: predecessor is cur - v[i] if the step was +v,
        # cur + u[i] if it was -u
        was_up = cur - r.v[i]
        was_down = cur + r.u[i]
        if was_up >= 0 and (was_down > big or abs(half - was_up) <= abs(half - was_down)):
            choices |= 1 << i
            cur = was_up
        else:
            cur = was_down
    assert 0 <= cur <= big
    pattern = Pattern(r, choices, cur)
    assert pattern.end == y
    return pattern


def is_proper(p: Pattern, direction: str, delta) -> bool:
    """True when the pattern's anchor sits at least delta*D/4 away from
    the strip boundary: forward patterns are judged by their start,
    backward ones by their end (closed interval)."""
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}, got {direction!r}")
    big = p.routing.max_demand
    margin = to_rational(delta) * big / 4
    anchor = p.start if direction == FORWARD else p.end
    return margin <= anchor <= big - margin
