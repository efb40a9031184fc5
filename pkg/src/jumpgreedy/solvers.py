"""Greedy algorithms for separable convex minimization on jump systems.

Three variants share one step machinery:

* ``greedy``   - the original algorithm; any valid t* may be taken.
* ``refined``  - t* = 0 when x + s* is feasible, else the f-minimizing t*.
* ``refined2`` - move to an f-minimizer of the radius-2 neighborhood.

Tie-breaking is either ``"lex"`` (first candidate in canonical step order:
zero, then coordinate ascending with + before -) or ``"all"``, which
enumerates every branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from jumpgreedy.core import (
    ZERO,
    Point,
    UnitStep,
    add_step,
    add_steps,
    as_point,
    step_between,
    steps_with_zero,
    unit_steps,
)
from jumpgreedy.objective import Number, SeparableObjective, verify_convexity

ALGORITHMS = ("greedy", "refined", "refined2")
TIE_BREAKS = ("lex", "all")
T_POLICIES = ("best", "worst", "first", "all")
DEFAULT_BRANCH_CAP = 10**6


class SolverError(ValueError):
    pass


class LocallyOptimalError(SolverError):
    """Raised when a descent step is requested at a locally optimal point."""


@dataclass(frozen=True)
class Step:
    x: Point
    s: UnitStep
    t: UnitStep
    f_before: Number
    f_after: Number
    # f(x + s*); needed for the monotonicity check
    f_probe: Number

    @property
    def y(self) -> Point:
        return add_steps(self.x, self.s, self.t)


@dataclass
class Trace:
    start: Point
    steps: list[Step] = field(default_factory=list)
    algorithm: str = "refined"

    @property
    def final(self) -> Point:
        return self.steps[-1].y if self.steps else self.start

    @property
    def points(self) -> list[Point]:
        return [self.start] + [st.y for st in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class Enumeration:
    """All traces of an EnumerateAll run, in deterministic DFS order."""

    traces: list[Trace]
    truncated: bool = False


class _Evaluator:
    """Per-run memo of f-values and membership."""

    def __init__(self, J, f: SeparableObjective):
        self.J = J
        self.f = f
        self._fv: dict = {}
        self._mem: dict = {}

    def value(self, x: Point) -> Number:
        v = self._fv.get(x)
        if v is None:
            v = self.f(x)
            self._fv[x] = v
        return v

    def member(self, x: Point) -> bool:
        m = self._mem.get(x)
        if m is None:
            m = self.J.contains(x)
            self._mem[x] = m
        return m


def _improving_ts(ev: _Evaluator, x: Point, fx, s: UnitStep) -> list[UnitStep]:
    xs = add_step(x, s)
    out = []
    for t in steps_with_zero(len(x)):
        y = add_step(xs, t)
        if ev.member(y) and ev.value(y) < fx:
            out.append(t)
    return out


def _descent_table(ev: _Evaluator, x: Point) -> dict[UnitStep, list[UnitStep]]:
    """s -> improving t's, for every s in U admitting at least one."""
    fx = ev.value(x)
    table = {}
    for s in unit_steps(len(x)):
        ts = _improving_ts(ev, x, fx, s)
        if ts:
            table[s] = ts
    return table


def _s_star_candidates(ev: _Evaluator, x: Point, table) -> list[UnitStep]:
    if not table:
        return []
    best = min(ev.value(add_step(x, s)) for s in table)
    return [s for s in table if ev.value(add_step(x, s)) == best]


def _check_member(ev: _Evaluator, x: Point) -> None:
    if not ev.member(x):
        raise SolverError(f"point {x} is not in the jump system")


def is_locally_optimal(J, f: SeparableObjective, x: Sequence[int]) -> bool:
    """True iff no x + s + t (s, t in U ∪ {0}) in J has a smaller f-value."""
    ev = _Evaluator(J, f)
    x = as_point(x)
    _check_member(ev, x)
    return _is_locally_optimal(ev, x)


def _is_locally_optimal(ev: _Evaluator, x: Point) -> bool:
    fx = ev.value(x)
    n = len(x)
    for s in steps_with_zero(n):
        xs = add_step(x, s)
        for t in steps_with_zero(n):
            y = add_step(xs, t)
            if ev.member(y) and ev.value(y) < fx:
                return False
    return True


def select_s_star(J, f: SeparableObjective, x: Sequence[int]) -> list[UnitStep]:
    """The full argmin set of the s*-selection rule, in canonical order."""
    ev = _Evaluator(J, f)
    x = as_point(x)
    _check_member(ev, x)
    cands = _s_star_candidates(ev, x, _descent_table(ev, x))
    if not cands:
        raise LocallyOptimalError(f"{x} is locally optimal; no s* exists")
    return cands


def _pick_t_greedy(ev: _Evaluator, x: Point, s: UnitStep, ts: list[UnitStep], tpolicy: str) -> list[UnitStep]:
    xs = add_step(x, s)
    if tpolicy == "all":
        return list(ts)
    if tpolicy == "first":
        return [ts[0]]
    if tpolicy == "best":
        return [min(ts, key=lambda t: ev.value(add_step(xs, t)))]
    if tpolicy == "worst":
        # geodesic-adversarial: take a second unit step whenever one is valid,
        # and among those the least improving one
        nonzero = [t for t in ts if not t.is_zero]
        if not nonzero:
            return [ZERO]
        worst = max(ev.value(add_step(xs, t)) for t in nonzero)
        return [next(t for t in nonzero if ev.value(add_step(xs, t)) == worst)]
    raise SolverError(f"unknown t* policy {tpolicy!r}")


def _refined_ts(ev: _Evaluator, x: Point, s: UnitStep) -> list[UnitStep]:
    xs = add_step(x, s)
    if ev.member(xs):
        return [ZERO]
    feasible = [t for t in unit_steps(len(x)) if ev.member(add_step(xs, t))]
    best = min(ev.value(add_step(xs, t)) for t in feasible)
    return [t for t in feasible if ev.value(add_step(xs, t)) == best]


def _refined2_moves(ev: _Evaluator, x: Point) -> list[tuple[UnitStep, UnitStep]]:
    n = len(x)
    seen = {}
    for s in steps_with_zero(n):
        xs = add_step(x, s)
        for t in steps_with_zero(n):
            y = add_step(xs, t)
            if y != x and y not in seen and ev.member(y):
                seen[y] = ev.value(y)
    best = min(seen.values())
    moves = [step_between(x, y) for y, v in seen.items() if v == best]
    return sorted(moves, key=lambda st: (st[0].sort_key(), st[1].sort_key()))


def step_choices(
    J,
    f: SeparableObjective,
    x: Sequence[int],
    algorithm: str = "refined",
    tie: str = "all",
    tpolicy: str = "all",
    _ev: Optional[_Evaluator] = None,
) -> list[tuple[UnitStep, UnitStep]]:
    """Every (s*, t*) the algorithm may take at x under the given policies.

    Empty iff x is locally optimal.
    """
    ev = _ev or _Evaluator(J, f)
    x = as_point(x)
    if _is_locally_optimal(ev, x):
        return []
    if algorithm == "refined2":
        moves = _refined2_moves(ev, x)
        return moves if tie == "all" else moves[:1]
    table = _descent_table(ev, x)
    s_cands = _s_star_candidates(ev, x, table)
    if tie != "all":
        s_cands = s_cands[:1]
    out = []
    for s in s_cands:
        if algorithm == "greedy":
            ts = _pick_t_greedy(ev, x, s, table[s], tpolicy)
        elif algorithm == "refined":
            ts = _refined_ts(ev, x, s)
            if tie != "all":
                ts = ts[:1]
        else:
            raise SolverError(f"unknown algorithm {algorithm!r}")
        out.extend((s, t) for t in ts)
    return out


def _validate(J, f: SeparableObjective, x0, tie: str, tpolicy: str, algorithm: str) -> tuple[_Evaluator, Point]:
    if algorithm not in ALGORITHMS:
        raise SolverError(f"unknown algorithm {algorithm!r}")
    if tie not in TIE_BREAKS:
        raise SolverError(f"unknown tie-break {tie!r}")
    if tpolicy not in T_POLICIES:
        raise SolverError(f"unknown t* policy {tpolicy!r}")
    bad = verify_convexity(f)
    if bad is not None:
        raise SolverError(f"objective is not convex at coordinate {bad[0] + 1}, point {bad[1]}")
    if f.dimension != J.dimension:
        raise SolverError(f"objective dimension {f.dimension} != system dimension {J.dimension}")
    ev = _Evaluator(J, f)
    x0 = as_point(x0)
    _check_member(ev, x0)
    return ev, x0


def _make_step(ev: _Evaluator, x: Point, s: UnitStep, t: UnitStep) -> Step:
    return Step(x, s, t, ev.value(x), ev.value(add_steps(x, s, t)), ev.value(add_step(x, s)))


def run(
    J,
    f: SeparableObjective,
    x0: Sequence[int],
    algorithm: str = "refined",
    tie: str = "lex",
    tpolicy: str = "best",
    max_branches: int = DEFAULT_BRANCH_CAP,
):
    """Run one of the three algorithms; returns a Trace, or an Enumeration when branching."""
    ev, x0 = _validate(J, f, x0, tie, tpolicy, algorithm)
    branching = tie == "all" or (algorithm == "greedy" and tpolicy == "all")
    if not branching:
        trace = Trace(x0, algorithm=algorithm)
        x = x0
        while True:
            choices = step_choices(J, f, x, algorithm, tie, tpolicy, _ev=ev)
            if not choices:
                return trace
            s, t = choices[0]
            trace.steps.append(_make_step(ev, x, s, t))
            x = add_steps(x, s, t)
    return _enumerate(J, f, ev, x0, algorithm, tie, tpolicy, max_branches)


def _enumerate(J, f, ev, x0, algorithm, tie, tpolicy, cap) -> Enumeration:
    result = Enumeration([])
    memo: dict = {}
    path: list[Step] = []

    def visit(x) -> bool:
        # returns False once the branch cap stops the search
        opts = memo.get(x)
        if opts is None:
            opts = memo[x] = step_choices(J, f, x, algorithm, tie, tpolicy, _ev=ev)
        if not opts:
            if len(result.traces) >= cap:
                result.truncated = True
                return False
            result.traces.append(Trace(x0, list(path), algorithm))
            return True
        for s, t in opts:
            path.append(_make_step(ev, x, s, t))
            ok = visit(add_steps(x, s, t))
            path.pop()
            if not ok:
                return False
        return True

    visit(x0)
    return result


def jsc_greedy(J, f, x0, tie: str = "lex", tpolicy: str = "best", max_branches: int = DEFAULT_BRANCH_CAP):
    return run(J, f, x0, "greedy", tie, tpolicy, max_branches)


def jsc_refined_greedy(J, f, x0, tie: str = "lex", max_branches: int = DEFAULT_BRANCH_CAP):
    return run(J, f, x0, "refined", tie, "best", max_branches)


def jsc_refined_greedy2(J, f, x0, tie: str = "lex", max_branches: int = DEFAULT_BRANCH_CAP):
    return run(J, f, x0, "refined2", tie, "best", max_branches)


def neighborhood(J, x: Sequence[int]) -> list[Point]:
    """N(x): members of J within L1 distance 2 of x (x included), sorted."""
    x = as_point(x)
    n = len(x)
    pts = {add_step(add_step(x, s), t) for s in steps_with_zero(n) for t in steps_with_zero(n)}
    return sorted(p for p in pts if J.contains(p))
