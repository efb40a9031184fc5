"""Brute-force ground truth and verifiers for the greedy algorithms' guarantees.

Everything here enumerates the (explicit) jump system exhaustively. The
sweep functions work on the state graph x -> x + s* + t* over every point of
J and every admissible branch, so "all start points, all tie-breaks" is
covered without enumerating traces one by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from jumpgreedy.core import Point, UnitStep, add_step, add_steps, combined_norm, in_s_region
from jumpgreedy.jump_systems import as_explicit, psi
from jumpgreedy.objective import SeparableObjective
from jumpgreedy.solvers import (
    Trace,
    _descent_table,
    _Evaluator,
    _is_locally_optimal,
    _s_star_candidates,
    step_choices,
)

CHECKS = ("thm1", "thm2", "thm3", "thm4", "thm5", "cor1", "cor2")


class OptimalityProfile:
    """Optimal value, optimal set, and nearest-optimum queries µ / M* for (J, f)."""

    def __init__(self, J, f: SeparableObjective):
        J = as_explicit(J)
        self.J = J
        self.f = f
        values = {x: f(x) for x in J.points}
        self.values = values
        self.opt_value = min(values.values())
        self.opt_set = tuple(x for x in J.points if values[x] == self.opt_value)
        self._opt = np.array(self.opt_set, dtype=np.int64)
        self._mu: dict = {}

    def is_optimal(self, x) -> bool:
        return self.values.get(tuple(x)) == self.opt_value

    def _dists(self, x) -> np.ndarray:
        return np.abs(self._opt - np.asarray(x, dtype=np.int64)).sum(axis=1)

    def mu(self, x) -> int:
        x = tuple(x)
        v = self._mu.get(x)
        if v is None:
            v = int(self._dists(x).min())
            self._mu[x] = v
        return v

    def m_star(self, x) -> frozenset:
        d = self._dists(x)
        best = d.min()
        return frozenset(self.opt_set[k] for k in np.flatnonzero(d == best))


def optimality_profile(J, f: SeparableObjective) -> OptimalityProfile:
    return OptimalityProfile(J, f)


def mu(profile: OptimalityProfile, x) -> int:
    return profile.mu(x)


def m_star(profile: OptimalityProfile, x) -> frozenset:
    return profile.m_star(x)


@dataclass(frozen=True)
class Violation:
    check: str
    x: Point
    detail: str
    s: Optional[UnitStep] = None
    t: Optional[UnitStep] = None

    def as_dict(self) -> dict:
        d = {"check": self.check, "x": list(self.x), "detail": self.detail}
        if self.s is not None:
            d["s"] = self.s.to_token()
        if self.t is not None:
            d["t"] = self.t.to_token()
        return d


def _profile(J, f, profile):
    return profile if profile is not None else OptimalityProfile(J, f)


def verify_theorem1(J, f, profile=None) -> Optional[Violation]:
    """Local optimality coincides with global optimality at every x in J."""
    prof = _profile(J, f, profile)
    ev = _Evaluator(prof.J, f)
    for x in prof.J.points:
        local, glob = _is_locally_optimal(ev, x), prof.is_optimal(x)
        if local != glob:
            return Violation("thm1", x, f"locally optimal={local}, globally optimal={glob}")
    return None


def verify_theorem4(J, f, profile=None) -> Optional[Violation]:
    """Some nearest optimum lies beyond x in the direction of every greedy s*."""
    prof = _profile(J, f, profile)
    ev = _Evaluator(prof.J, f)
    for x in prof.J.points:
        if prof.is_optimal(x):
            continue
        near = prof.m_star(x)
        for s in _s_star_candidates(ev, x, _descent_table(ev, x)):
            if not any(in_s_region(y, x, s, UnitStep()) for y in near):
                return Violation("thm4", x, "no nearest optimum in the s* direction", s)
    return None


def verify_theorem5(J, f, profile=None) -> Optional[Violation]:
    """M*(x) ∩ S(x; s*, t*) is nonempty for every refined (s*, t*) branch."""
    prof = _profile(J, f, profile)
    ev = _Evaluator(prof.J, f)
    for x in prof.J.points:
        if prof.is_optimal(x):
            continue
        near = prof.m_star(x)
        for s, t in step_choices(prof.J, f, x, "refined", "all", _ev=ev):
            if not any(in_s_region(y, x, s, t) for y in near):
                return Violation("thm5", x, "M*(x) misses S(x; s*, t*)", s, t)
    return None


@dataclass
class StepRecord:
    index: int
    x: Point
    s: UnitStep
    t: UnitStep
    mu_before: int
    mu_after: int
    expected_drop: int
    mstar_ok: bool
    refined_step: bool

    @property
    def ok(self) -> bool:
        return self.mu_before - self.mu_after == self.expected_drop and self.mstar_ok

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "x": list(self.x),
            "s": self.s.to_token(),
            "t": self.t.to_token(),
            "mu_before": self.mu_before,
            "mu_after": self.mu_after,
            "expected_drop": self.expected_drop,
            "mstar_recursion": self.mstar_ok,
            "refined_step": self.refined_step,
            "ok": self.ok,
        }


@dataclass
class GeodesicReport:
    records: list[StepRecord] = field(default_factory=list)
    # False when the input was not produced by the refined algorithm
    refined_origin: bool = True

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def first_violation(self) -> Optional[StepRecord]:
        return next((r for r in self.records if not r.ok), None)


def check_geodesic_step(prof: OptimalityProfile, x, s: UnitStep, t: UnitStep, index: int = 0, refined_step=True) -> StepRecord:
    x = tuple(x)
    y = add_steps(x, s, t)
    before = prof.m_star(x)
    expected = {p for p in before if in_s_region(p, x, s, t)}
    return StepRecord(
        index, x, s, t, prof.mu(x), prof.mu(y), combined_norm(s, t), prof.m_star(y) == expected, refined_step
    )


def verify_corollary1(J, f, trace: Trace, profile=None) -> GeodesicReport:
    """µ drops by ‖s*+t*‖₁ and M*(x+s*+t*) = M*(x) ∩ S(x;s*,t*) at every step.

    Steps that the refined algorithm could not have taken are flagged via
    ``refined_step=False``; their µ/M* values are still reported.
    """
    prof = _profile(J, f, profile)
    ev = _Evaluator(prof.J, f)
    report = GeodesicReport(refined_origin=trace.algorithm == "refined")
    for k, st in enumerate(trace.steps):
        valid = (st.s, st.t) in step_choices(prof.J, f, st.x, "refined", "all", _ev=ev)
        report.records.append(check_geodesic_step(prof, st.x, st.s, st.t, k, valid))
    return report


def verify_bounds(J, f, trace: Trace, algorithm: Optional[str] = None, profile=None) -> Optional[str]:
    """Iteration-count bounds: <= Ψ(J) for greedy, [⌈µ(x0)/2⌉, µ(x0)] for refined."""
    algorithm = algorithm or trace.algorithm
    steps = len(trace.steps)
    if algorithm == "greedy":
        bound = psi(J)
        return None if steps <= bound else f"{steps} steps exceeds Psi(J) = {bound}"
    if algorithm == "refined":
        m = _profile(J, f, profile).mu(trace.start)
        lo = math.ceil(m / 2)
        return None if lo <= steps <= m else f"{steps} steps outside [{lo}, {m}]"
    return None


def verify_monotone(trace: Trace) -> Optional[int]:
    """Index k with f(x_k+s_k)-f(x_k) > f(x_k+1+s_k+1)-f(x_k+1), or None."""
    deltas = [st.f_probe - st.f_before for st in trace.steps]
    for k in range(len(deltas) - 1):
        if deltas[k] > deltas[k + 1]:
            return k
    return None


@dataclass
class SweepResult:
    """Outcome of an exhaustive sweep over one instance."""

    checked: dict[str, int] = field(default_factory=dict)
    violations: dict[str, Violation] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, check: str, violation: Optional[Violation], count: int = 1) -> None:
        self.checked[check] = self.checked.get(check, 0) + count
        if violation is not None and check not in self.violations:
            self.violations[check] = violation

    def merge(self, other: "SweepResult") -> None:
        for k, v in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + v
        for k, v in other.violations.items():
            self.violations.setdefault(k, v)


def _path_lengths(graph: dict, x, memo: dict) -> tuple[int, int]:
    """(shortest, longest) number of steps from x to a sink in the DAG."""
    hit = memo.get(x)
    if hit is not None:
        return hit
    succ = graph[x]
    if not succ:
        memo[x] = (0, 0)
        return memo[x]
    lens = [_path_lengths(graph, y, memo) for _, _, y in succ]
    memo[x] = (1 + min(a for a, _ in lens), 1 + max(b for _, b in lens))
    return memo[x]


def state_graph(J, f, algorithm: str, ev=None) -> dict:
    """x -> [(s*, t*, x + s* + t*)] over all branches, for every x in J."""
    J = as_explicit(J)
    ev = ev or _Evaluator(J, f)
    tpolicy = "all"
    return {
        x: [(s, t, add_steps(x, s, t)) for s, t in step_choices(J, f, x, algorithm, "all", tpolicy, _ev=ev)]
        for x in J.points
    }


def sweep(J, f, checks=CHECKS, algorithms=("greedy", "refined", "refined2")) -> SweepResult:
    """Exhaustively verify the selected checks from every start point under every branch."""
    J = as_explicit(J)
    prof = OptimalityProfile(J, f)
    ev = _Evaluator(J, f)
    res = SweepResult()
    checks = set(checks)
    for c in checks:
        res.checked[c] = 0
    n_pts = len(J.points)

    if "thm1" in checks:
        res.record("thm1", verify_theorem1(J, f, prof), n_pts)
    if "thm4" in checks:
        res.record("thm4", verify_theorem4(J, f, prof), n_pts)
    if "thm5" in checks:
        res.record("thm5", verify_theorem5(J, f, prof), n_pts)

    graphs = {a: state_graph(J, f, a, ev) for a in algorithms}
    bound = psi(J)

    for algo, graph in graphs.items():
        memo: dict = {}
        for x in J.points:
            lo, hi = _path_lengths(graph, x, memo)
            for _, _, y in graph[x]:
                if ev.value(y) >= ev.value(x) or not ev.member(y):
                    res.record("descent", Violation("descent", x, f"{algo}: step to {y} is not an improving move"))
            if not graph[x] and not prof.is_optimal(x):
                res.record("thm1", Violation("thm1", x, f"{algo} stops at a non-optimal point"))
            if algo == "greedy" and "thm2" in checks:
                v = None if hi <= bound else Violation("thm2", x, f"a branch takes {hi} steps > Psi(J) = {bound}")
                res.record("thm2", v)
            if algo in ("greedy", "refined") and "thm3" in checks and graph[x]:
                dx = _probe_delta(ev, x, graph[x][0][0])
                for s, t, y in graph[x]:
                    if graph[y] and dx > _probe_delta(ev, y, graph[y][0][0]):
                        res.record("thm3", Violation("thm3", x, f"{algo}: f(x+s*)-f(x) decreases after step", s, t))
                res.record("thm3", None)
            if algo == "refined" and "cor2" in checks:
                m = prof.mu(x)
                ok = math.ceil(m / 2) <= lo and hi <= m
                res.record("cor2", None if ok else Violation("cor2", x, f"path lengths [{lo}, {hi}] vs mu={m}"))
            if algo == "refined" and "cor1" in checks:
                for s, t, _ in graph[x]:
                    rec = check_geodesic_step(prof, x, s, t)
                    v = None
                    if not rec.ok:
                        v = Violation(
                            "cor1", x, f"mu {rec.mu_before}->{rec.mu_after}, M* recursion {rec.mstar_ok}", s, t
                        )
                    res.record("cor1", v)
    return res


def _probe_delta(ev: _Evaluator, x, s: UnitStep):
    # identical for every s* in the argmin, so the first branch suffices
    return ev.value(add_step(x, s)) - ev.value(x)


def sweep_delta_matroid(D, c) -> SweepResult:
    """DM-Greedy (every valid |c| order), DM-RefinedGreedy (every start, every branch)
    and the jump-system embedding, all against brute force."""
    from jumpgreedy import delta_matroid as dm
    from jumpgreedy.solvers import jsc_refined_greedy

    res = SweepResult()
    opt, opts = dm.dm_optimum(D, c)
    for order in dm.greedy_orders(c):
        F = dm.dm_greedy(D, c, order)
        ok = F in D and dm.cost(c, F) == opt
        res.record("dm_greedy", None if ok else Violation("dm_greedy", (F,), f"order {order} gives cost {dm.cost(c, F)} != {opt}"))

    J = dm.to_jump_system(D)
    f = SeparableObjective.linear(c)
    prof = OptimalityProfile(J, f)
    n = D.ground_size
    for F in D.family:
        x = dm.to_point(F, n)
        choices = dm.dm_refined_choices(D, c, F)
        if not choices and dm.cost(c, F) != opt:
            res.record("dm_refined", Violation("dm_refined", x, "stops at a non-optimal set"))
        for i, j in choices:
            msg = dm.check_corollary3_step(D, c, F, i, j, opts)
            res.record("cor3", None if msg is None else Violation("cor3", x, f"i*={i + 1} j*={j + 1}: {msg}"))
        tr = dm.dm_refined_greedy(D, c, F)
        final_cost = dm.cost(c, tr.final)
        res.record("dm_refined", None if final_cost == opt else Violation("dm_refined", x, f"final cost {final_cost} != {opt}"))
        v = None
        m = dm.mu_dm(D, c, F, opts)
        if m != prof.mu(x):
            v = Violation("embedding", x, f"mu_DM {m} != mu {prof.mu(x)}")
        else:
            jt = jsc_refined_greedy(J, f, x)
            if f(jt.final) != final_cost:
                v = Violation("embedding", x, f"jump-system refined cost {f(jt.final)} != {final_cost}")
        res.record("embedding", v)
    return res
