"""Worst-case instance search: exact MILP model and heuristic ascent.

The MILP encodes, for a normalized crossing routing (largest demand 1,
so u_i + v_i <= 1), the smallest additive performance over all 2^m
reroutings, and asks for the routing maximizing it.  Every rerouting
mask gets its own block of variables pinning that walk's minimum,
maximum, end value, and performance; indicator binaries with big-M
coefficient m (valid because the total step mass is at most m) select
which prefix attains the extremes and which performance term binds.

Models are rendered to deterministic LP files and can be parsed back
for round-trip checks.  A direct-arithmetic evaluator substitutes a
concrete routing into a model and returns the largest feasible
objective, which must agree between the reduced and unreduced variants.

The heuristic search walks a rational grid with first-improvement
coordinate steps, projecting the partner direction down when a step
would overfill a demand, under a deterministic per-restart RNG.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import NamedTuple

from .core import CrossingRouting, to_rational
from .errors import OutOfRange, ParameterOutOfRange, ParseError
from .exact import min_additive_performance

CONTINUOUS = "continuous"
BINARY = "binary"


@dataclass(frozen=True)
class MilpVariable:
    """``lower``/``upper`` of None mean unbounded on that side; plain
    continuous variables default to [0, inf) as in LP files."""

    name: str
    kind: str = CONTINUOUS
    lower: int | None = 0
    upper: int | None = None


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeff * var) sense rhs, with integer coefficients only."""

    name: str
    terms: tuple[tuple[int, str], ...]
    sense: str  # "<=", ">=" or "="
    rhs: int


@dataclass(frozen=True)
class MilpModel:
    m: int
    reduce_vars: bool
    symmetry_break: bool
    variables: tuple[MilpVariable, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, str], ...] = ((1, "E"),)

    def binary_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.kind == BINARY)


def _mask_label(mask: int, m: int) -> str:
    return format(mask, f"0{(m + 3) // 4}x")


def kept_selectors(m: int, mask: int, reduce_vars: bool) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Indicator indices kept for the walk minimum and maximum.

    Unreduced, both families run over 0..m.  Reduced, an index survives
    only where the walk can turn: the minimum needs a down-to-up corner
    (or a matching border), the maximum an up-to-down one.  Every argmin
    (argmax) plateau contains such a corner even with zero-valued steps,
    so the reduction never cuts off the true extreme.
    """
    if not reduce_vars:
        full = tuple(range(m + 1))
        return full, full

    def bit(i: int) -> int:
        return mask >> (i - 1) & 1

    keep_min = []
    keep_max = []
    for i in range(m + 1):
        if i == 0:
            up_next = bit(1) == 1
            if up_next:
                keep_min.append(i)
            else:
                keep_max.append(i)
        elif i == m:
            if bit(m) == 0:
                keep_min.append(i)
            else:
                keep_max.append(i)
        else:
            if bit(i) == 0 and bit(i + 1) == 1:
                keep_min.append(i)
            elif bit(i) == 1 and bit(i + 1) == 0:
                keep_max.append(i)
    return tuple(keep_min), tuple(keep_max)


def _prefix_terms(mask: int, i: int) -> list[tuple[int, str]]:
    """Terms of the walk prefix after step i: +v_j for set bits, -u_j
    for clear ones."""
    out = []
    for j in range(1, i + 1):
        if mask >> (j - 1) & 1:
            out.append((1, f"v_{j}"))
        else:
            out.append((-1, f"u_{j}"))
    return out


def _negate(terms) -> list[tuple[int, str]]:
    return [(-c, name) for c, name in terms]


def build_milp(m: int, *, reduce_vars: bool = True, symmetry_break: bool = True) -> MilpModel:
    """Exact worst-case-search model for size m (2..12 supported)."""
    if not isinstance(m, int) or isinstance(m, bool) or not 2 <= m <= 12:
        raise OutOfRange(f"model size must be an integer in [2, 12], got {m!r}")
    masks = range(1 << m)
    lab = {z: _mask_label(z, m) for z in masks}
    kept = {z: kept_selectors(m, z, reduce_vars) for z in masks}

    variables: list[MilpVariable] = []
    for i in range(1, m + 1):
        variables.append(MilpVariable(f"u_{i}"))
    for i in range(1, m + 1):
        variables.append(MilpVariable(f"v_{i}"))
    variables.append(MilpVariable("E"))
    for z in masks:
        h = lab[z]
        variables.append(MilpVariable(f"a_{h}", lower=None))  # walk minimum can be negative
        variables.append(MilpVariable(f"b_{h}"))
        variables.append(MilpVariable(f"y_{h}", lower=None))  # walk end can be negative
        variables.append(MilpVariable(f"c_{h}"))
        variables.append(MilpVariable(f"w_{h}", kind=BINARY, upper=1))
        for i in kept[z][0]:
            variables.append(MilpVariable(f"wmin_{h}_{i}", kind=BINARY, upper=1))
        for i in kept[z][1]:
            variables.append(MilpVariable(f"wmax_{h}_{i}", kind=BINARY, upper=1))

    cons: list[LinearConstraint] = []
    for z in masks:
        cons.append(
            LinearConstraint(f"obj_cap_{lab[z]}", ((1, "E"), (-1, f"c_{lab[z]}")), "<=", 0)
        )
    for i in range(1, m + 1):
        cons.append(LinearConstraint(f"feas_{i}", ((1, f"u_{i}"), (1, f"v_{i}")), "<=", 1))
    for z in masks:
        for i in range(m + 1):
            terms = [(1, f"a_{lab[z]}")] + _negate(_prefix_terms(z, i))
            cons.append(LinearConstraint(f"min_ub_{lab[z]}_{i}", tuple(terms), "<=", 0))
    for z in masks:
        for i in kept[z][0]:
            terms = [(1, f"a_{lab[z]}")] + _negate(_prefix_terms(z, i))
            terms.append((-m, f"wmin_{lab[z]}_{i}"))
            cons.append(LinearConstraint(f"min_lb_{lab[z]}_{i}", tuple(terms), ">=", -m))
    for z in masks:
        terms = tuple((1, f"wmin_{lab[z]}_{i}") for i in kept[z][0])
        cons.append(LinearConstraint(f"minsel_{lab[z]}", terms, ">=", 1))
    for z in masks:
        for i in range(m + 1):
            terms = [(1, f"b_{lab[z]}")] + _negate(_prefix_terms(z, i))
            cons.append(LinearConstraint(f"max_lb_{lab[z]}_{i}", tuple(terms), ">=", 0))
    for z in masks:
        for i in kept[z][1]:
            terms = [(1, f"b_{lab[z]}")] + _negate(_prefix_terms(z, i))
            terms.append((m, f"wmax_{lab[z]}_{i}"))
            cons.append(LinearConstraint(f"max_ub_{lab[z]}_{i}", tuple(terms), "<=", m))
    for z in masks:
        terms = tuple((1, f"wmax_{lab[z]}_{i}") for i in kept[z][1])
        cons.append(LinearConstraint(f"maxsel_{lab[z]}", terms, ">=", 1))
    for z in masks:
        terms = [(1, f"y_{lab[z]}")] + _negate(_prefix_terms(z, m))
        cons.append(LinearConstraint(f"end_{lab[z]}", tuple(terms), "=", 0))
    for z in masks:
        h = lab[z]
        cons.append(
            LinearConstraint(f"perf_lb1_{h}", ((1, f"c_{h}"), (-2, f"b_{h}"), (1, f"y_{h}")), ">=", 0)
        )
        cons.append(
            LinearConstraint(f"perf_lb2_{h}", ((1, f"c_{h}"), (2, f"a_{h}"), (-1, f"y_{h}")), ">=", 0)
        )
        cons.append(
            LinearConstraint(
                f"perf_ub1_{h}",
                ((1, f"c_{h}"), (-2, f"b_{h}"), (1, f"y_{h}"), (-m, f"w_{h}")),
                "<=",
                0,
            )
        )
        cons.append(
            LinearConstraint(
                f"perf_ub2_{h}",
                ((1, f"c_{h}"), (2, f"a_{h}"), (-1, f"y_{h}"), (m, f"w_{h}")),
                "<=",
                m,
            )
        )
    if symmetry_break:
        # the search space is invariant under rotating demand labels and
        # swapping the two directions; pinning u_1 as a global minimum
        # entry cuts those equivalent copies
        for i in range(2, m + 1):
            cons.append(LinearConstraint(f"sym_u_{i}", ((1, "u_1"), (-1, f"u_{i}")), "<=", 0))
        for i in range(1, m + 1):
            cons.append(LinearConstraint(f"sym_v_{i}", ((1, "u_1"), (-1, f"v_{i}")), "<=", 0))

    return MilpModel(m, reduce_vars, symmetry_break, tuple(variables), tuple(cons))


def _render_terms(terms) -> str:
    parts = []
    for pos, (coeff, name) in enumerate(terms):
        if pos == 0:
            if coeff == 1:
                parts.append(name)
            elif coeff == -1:
                parts.append(f"- {name}")
            else:
                parts.append(f"{coeff} {name}" if coeff > 0 else f"- {-coeff} {name}")
        else:
            sign = "+" if coeff > 0 else "-"
            mag = abs(coeff)
            parts.append(f"{sign} {name}" if mag == 1 else f"{sign} {mag} {name}")
    return " ".join(parts)


def render_lp(model: MilpModel) -> str:
    """Deterministic LP-format text for the model (ASCII, LF endings)."""
    lines = ["Maximize", f" obj: {_render_terms(model.objective)}", "Subject To"]
    for con in model.constraints:
        lines.append(f" {con.name}: {_render_terms(con.terms)} {con.sense} {con.rhs}")
    lines.append("Bounds")
    for var in model.variables:
        if var.kind == CONTINUOUS and var.lower is None and var.upper is None:
            lines.append(f" {var.name} free")
    lines.append("Binaries")
    for var in model.variables:
        if var.kind == BINARY:
            lines.append(f" {var.name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(model: MilpModel, path) -> str:
    """Write the rendered model to ``path``; returns the path."""
    text = render_lp(model)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return str(path)


_CONSTRAINT_RE = re.compile(r"^\s*([A-Za-z]\w*):\s*(.*?)\s*(<=|>=|=)\s*(-?\d+)\s*$")
_NAME_RE = re.compile(r"^[A-Za-z]\w*$")


def _parse_terms(text: str) -> tuple[tuple[int, str], ...]:
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    terms = []
    sign = 1
    coeff = None
    for tok in tokens:
        if tok == "+":
            sign, coeff = 1, None
        elif tok == "-":
            sign, coeff = -1, None
        elif tok.isdigit():
            if coeff is not None:
                raise ParseError(f"two coefficients in a row near {tok!r}")
            coeff = int(tok)
        elif _NAME_RE.match(tok):
            terms.append((sign * (1 if coeff is None else coeff), tok))
            sign, coeff = 1, None
        else:
            raise ParseError(f"unexpected token {tok!r} in expression")
    if coeff is not None:
        raise ParseError("dangling coefficient without a variable")
    return tuple(terms)


def parse_lp(text: str) -> MilpModel:
    """Parse LP text produced by render_lp back into an equal model."""
    section = None
    objective = None
    constraints: list[LinearConstraint] = []
    free_names: set[str] = set()
    binary_names: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith(("\\", "*")):
            continue
        if line in ("Maximize", "Subject To", "Bounds", "Binaries", "End"):
            section = line
            continue
        if section == "Maximize":
            match = _CONSTRAINT_RE.match(line)
            if match:
                raise ParseError(f"objective line cannot carry a relation: {line!r}")
            name, _, expr = line.partition(":")
            if name.strip() != "obj":
                raise ParseError(f"expected objective 'obj', got {name.strip()!r}")
            objective = _parse_terms(expr)
        elif section == "Subject To":
            match = _CONSTRAINT_RE.match(line)
            if not match:
                raise ParseError(f"bad constraint line: {line!r}")
            name, expr, sense, rhs = match.groups()
            constraints.append(LinearConstraint(name, _parse_terms(expr), sense, int(rhs)))
        elif section == "Bounds":
            parts = line.split()
            if len(parts) == 2 and parts[1] == "free" and _NAME_RE.match(parts[0]):
                free_names.add(parts[0])
            else:
                raise ParseError(f"unsupported bounds line: {line!r}")
        elif section == "Binaries":
            if not _NAME_RE.match(line):
                raise ParseError(f"bad binary name: {line!r}")
            binary_names.append(line)
        elif section == "End":
            raise ParseError(f"content after End: {line!r}")
        else:
            raise ParseError(f"content before any section: {line!r}")
    if objective is None:
        raise ParseError("missing objective")

    m = sum(1 for con in constraints if con.name.startswith("feas_"))
    if m == 0:
        raise ParseError("no feasibility rows; cannot recover the model size")
    binary_set = set(binary_names)
    reduce_vars = len(binary_set) < (2 * m + 3) * (1 << m)
    symmetry_break = any(con.name.startswith("sym_") for con in constraints)

    variables: list[MilpVariable] = []
    for i in range(1, m + 1):
        variables.append(MilpVariable(f"u_{i}"))
    for i in range(1, m + 1):
        variables.append(MilpVariable(f"v_{i}"))
    variables.append(MilpVariable("E"))
    for z in range(1 << m):
        h = _mask_label(z, m)
        for prefix in ("a", "b", "y", "c"):
            name = f"{prefix}_{h}"
            lower = None if name in free_names else 0
            variables.append(MilpVariable(name, lower=lower))
        variables.append(MilpVariable(f"w_{h}", kind=BINARY, upper=1))
        for i in range(m + 1):
            name = f"wmin_{h}_{i}"
            if name in binary_set:
                variables.append(MilpVariable(name, kind=BINARY, upper=1))
        for i in range(m + 1):
            name = f"wmax_{h}_{i}"
            if name in binary_set:
                variables.append(MilpVariable(name, kind=BINARY, upper=1))

    model = MilpModel(
        m, reduce_vars, symmetry_break, tuple(variables), tuple(constraints), objective
    )
    rebuilt = {v.name for v in model.variables}
    used = {name for con in constraints for _, name in con.terms}
    if not used <= rebuilt:
        raise ParseError(f"constraints mention unknown variables: {sorted(used - rebuilt)}")
    return model


def max_feasible_performance(model: MilpModel, r: CrossingRouting) -> Fraction:
    """Largest objective value feasible in the model once u, v are fixed
    to the D-normalized routing, found by direct arithmetic.

    Every per-mask block pins its variables exactly (the indicators must
    select a true extreme), so the answer is the smallest per-mask
    performance; the full assignment is then checked against every
    constraint of the model.
    """
    if r.m != model.m:
        raise ParameterOutOfRange(f"routing has m={r.m}, model expects {model.m}")
    big = r.max_demand
    values: dict[str, Fraction] = {}
    for i in range(1, model.m + 1):
        values[f"u_{i}"] = r.u[i - 1] / big
        values[f"v_{i}"] = r.v[i - 1] / big

    best: Fraction | None = None
    for z in range(1 << model.m):
        h = _mask_label(z, model.m)
        prefix = [Fraction(0)]
        for i in range(1, model.m + 1):
            step = values[f"v_{i}"] if z >> (i - 1) & 1 else -values[f"u_{i}"]
            prefix.append(prefix[-1] + step)
        lo, hi = min(prefix), max(prefix)
        end = prefix[-1]
        perf = max(2 * hi - end, end - 2 * lo)
        values[f"a_{h}"] = lo
        values[f"b_{h}"] = hi
        values[f"y_{h}"] = end
        values[f"c_{h}"] = perf
        values[f"w_{h}"] = Fraction(0 if perf == 2 * hi - end else 1)
        keep_min, keep_max = kept_selectors(model.m, z, model.reduce_vars)
        min_at = [i for i in keep_min if prefix[i] == lo]
        max_at = [i for i in keep_max if prefix[i] == hi]
        assert min_at, "reduction lost every argmin selector"
        assert max_at, "reduction lost every argmax selector"
        for i in keep_min:
            values[f"wmin_{h}_{i}"] = Fraction(1 if i == min_at[0] else 0)
        for i in keep_max:
            values[f"wmax_{h}_{i}"] = Fraction(1 if i == max_at[0] else 0)
        best = perf if best is None else min(best, perf)
    assert best is not None
    values["E"] = best

    for con in model.constraints:
        lhs = sum(coeff * values[name] for coeff, name in con.terms)
        if con.sense == "<=":
            ok = lhs <= con.rhs
        elif con.sense == ">=":
            ok = lhs >= con.rhs
        else:
            ok = lhs == con.rhs
        if not ok:
            raise ParameterOutOfRange(
                f"routing is inadmissible for this model: {con.name} has "
                f"lhs {lhs}, wants {con.sense} {con.rhs}"
            )
    return best


# ---------------------------------------------------------------------------
# heuristic search


class SearchResult(NamedTuple):
    routing: CrossingRouting
    value: Fraction  # minimum additive performance over D


def _grid_value(grid: tuple[int, ...], m: int, den: int) -> Fraction:
    u = tuple(Fraction(g, den) for g in grid[:m])
    v = tuple(Fraction(g, den) for g in grid[m:])
    routing = CrossingRouting(u, v)
    return min_additive_performance(routing).value / routing.max_demand


def _ascend(task) -> tuple[Fraction, int, tuple[int, ...]]:
    """One restart: sample (or take) a grid point and climb to a local
    maximum with first-improvement coordinate steps."""
    m, den, seed, index, fixed_start = task
    if fixed_start is not None:
        grid = list(fixed_start)
    else:
        rng = Random(f"{seed}:{index}")
        grid = []
        for _ in range(m):
            grid.append(rng.randint(1, den - 1))
        for i in range(m):
            grid.append(rng.randint(1, den - grid[i]))
    value = _grid_value(tuple(grid), m, den)
    improved = True
    while improved:
        improved = False
        for c in range(2 * m):
            partner = c + m if c < m else c - m
            for step in (1, -1):
                cand = grid[c] + step
                if not 1 <= cand <= den - 1:
                    continue
                old_c, old_p = grid[c], grid[partner]
                grid[c] = cand
                if grid[c] + grid[partner] > den:
                    # project the partner down instead of rejecting
                    grid[partner] = den - grid[c]
                cand_value = _grid_value(tuple(grid), m, den)
                if cand_value > value:
                    value = cand_value
                    improved = True
                    break
                grid[c], grid[partner] = old_c, old_p
            if improved:
                break
    return value, index, tuple(grid)


def heuristic_search(
    m: int,
    budget: int,
    seed,
    *,
    denominator: int = 20,
    start: CrossingRouting | None = None,
    workers: int = 1,
) -> SearchResult:
    """Random-restart first-improvement ascent over the normalized grid.

    ``budget`` counts restarts; ``seed`` pins the whole run.  ``start``
    seeds the first restart from a given routing, which must sit on the
    grid after dividing by its largest demand.  The outcome is identical
    for any ``workers`` count.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParameterOutOfRange(f"need a positive integer m, got {m!r}")
    if not isinstance(budget, int) or isinstance(budget, bool) or budget < 1:
        raise ParameterOutOfRange(f"need a positive restart budget, got {budget!r}")
    if not isinstance(denominator, int) or isinstance(denominator, bool) or denominator < 2:
        raise ParameterOutOfRange(f"grid denominator must be an integer >= 2, got {denominator!r}")
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise ParameterOutOfRange(f"worker count must be a positive integer, got {workers!r}")

    start_grid = None
    if start is not None:
        if start.m != m:
            raise ParameterOutOfRange(f"start routing has m={start.m}, expected {m}")
        big = start.max_demand
        ints = []
        for x in list(start.u) + list(start.v):
            scaled = x / big * denominator
            if scaled.denominator != 1 or not 1 <= scaled <= denominator - 1:
                raise ParameterOutOfRange(
                    f"start entry {x} does not normalize onto the 1/{denominator} grid"
                )
            ints.append(int(scaled))
        start_grid = tuple(ints)

    tasks = [
        (m, denominator, str(seed), t, start_grid if t == 0 else None)
        for t in range(budget)
    ]
    if workers == 1:
        outcomes = [_ascend(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_ascend, tasks))
    # highest value wins; ties go to the earliest restart, making the
    # result independent of scheduling
    value, _, grid = max(outcomes, key=lambda out: (out[0], -out[1]))
    routing = CrossingRouting(
        tuple(Fraction(g, denominator) for g in grid[:m]),
        tuple(Fraction(g, denominator) for g in grid[m:]),
    )
    if start is not None:
        seeded = min_additive_performance(start).value / start.max_demand
        assert value >= seeded, "search must never fall below its seed"
    return SearchResult(routing, value)


# ---------------------------------------------------------------------------
# built-in instances


def skutella8(eps=0) -> CrossingRouting:
    """Eight-demand family with minimum performance 11/10 of D at eps=0;
    bumping the six marked entries by eps >= 0 keeps the optimum at
    11 + 2*eps while D grows as 10 + 2*eps."""
    eps = to_rational(eps)
    if eps < 0:
        raise ParameterOutOfRange(f"eps must be >= 0, got {eps}")
    base_u = (4, 4, 6, 2, 7, 1, 7, 2)
    base_v = (6, 4, 4, 2, 3, 7, 3, 2)
    bump = (1, 1, 1, 0, 1, 1, 1, 0)
    return CrossingRouting(
        tuple(a + eps * b for a, b in zip(base_u, bump)),
        tuple(a + eps * b for a, b in zip(base_v, bump)),
    )


def skutella8_uniform(eps=0) -> CrossingRouting:
    """Variant of skutella8 bumping every entry by eps in [0, 1]."""
    eps = to_rational(eps)
    if not 0 <= eps <= 1:
        raise ParameterOutOfRange(f"eps must be in [0, 1], got {eps}")
    base_u = (4, 4, 6, 2, 7, 1, 7, 2)
    base_v = (6, 4, 4, 2, 3, 7, 3, 2)
    return CrossingRouting(
        tuple(a + eps for a in base_u),
        tuple(a + eps for a in base_v),
    )


def seven18() -> CrossingRouting:
    """Seven-demand routing whose minimum performance is 19/18 of D."""
    return CrossingRouting((7, 11, 6, 10, 6, 8, 5), (11, 3, 12, 2, 2, 10, 5))


def seven18_alt() -> CrossingRouting:
    """Different split of the same seven demand values, same optimum."""
    return CrossingRouting((5, 12, 5, 2, 4, 10, 3), (13, 2, 13, 10, 4, 8, 7))


def tight3() -> CrossingRouting:
    """Three demands where rounding must pay the full largest demand."""
    return CrossingRouting((2, 3, 3), (2, 1, 1))


def tight5() -> CrossingRouting:
    """Five-demand relative of tight3 with the same full-D gap."""
    return CrossingRouting((2, 2, 2, 3, 3), (2, 2, 2, 1, 1))


def tight6() -> CrossingRouting:
    """Six unit demands split evenly: the gap is D for even counts."""
    return CrossingRouting((1,) * 6, (1,) * 6)


def tight_even(m: int) -> CrossingRouting:
    """Evenly split unit demands; the full-D gap needs an even count."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 2 or m % 2:
        raise ParameterOutOfRange(f"need an even demand count >= 2, got {m!r}")
    return CrossingRouting((1,) * m, (1,) * m)


def builtin_instances() -> dict[str, object]:
    """Named generator catalog for the CLI and tests."""
    return {
        "skutella8": skutella8,
        "skutella8_uniform": skutella8_uniform,
        "seven18": seven18,
        "seven18_alt": seven18_alt,
        "tight3": tight3,
        "tight5": tight5,
        "tight6": tight6,
        "tight_even": tight_even,
    }
