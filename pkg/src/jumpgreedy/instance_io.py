"""JSON instance and trace files.

Instances (``format_version`` 1) carry either a ``jump_system`` plus an
``objective``, or a ``delta_matroid`` whose weights define the linear
objective. Vertex and element labels are 1-based in files. All numbers are
integers or exact decimal/ratio strings.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from jumpgreedy.core import UnitStep, as_point, format_point
from jumpgreedy.delta_matroid import (
    DeltaMatroid,
    DmTrace,
    dm_greedy,
    dm_refined_greedy,
    elements_of,
    format_set,
    mask_of,
    to_jump_system,
    to_point,
    verify_symmetric_exchange,
)
from jumpgreedy.jump_systems import (
    DEFAULT_EDGE_LIMIT,
    ExplicitJumpSystem,
    GraphDegreeJumpSystem,
    JumpSystemError,
    materialize,
    verify_jexc,
)
from jumpgreedy.objective import (
    Linear,
    ObjectiveError,
    Quadratic,
    SeparableObjective,
    Table,
    number_to_json,
    to_number,
    verify_convexity,
)
from jumpgreedy.solvers import Enumeration, Trace, run

FORMAT_VERSION = 1


class InstanceFormatError(ValueError):
    """The file is not a well-formed instance or trace."""


class InstanceInvalid(ValueError):
    """The instance parses but violates a semantic requirement."""


@dataclass
class Instance:
    system: Optional[Union[ExplicitJumpSystem, GraphDegreeJumpSystem]] = None
    objective: Optional[SeparableObjective] = None
    dm: Optional[DeltaMatroid] = None
    weights: Optional[tuple] = None
    start: Optional[Any] = None
    name: str = ""
    description: str = ""

    @property
    def is_dm(self) -> bool:
        return self.dm is not None

    def jump_view(self) -> tuple:
        """(J, f, start point) - delta-matroids are embedded as {0,1} systems."""
        if self.is_dm:
            f = SeparableObjective([Linear(c) for c in self.weights])
            start = to_point(self.start, self.dm.ground_size) if self.start is not None else None
            return to_jump_system(self.dm), f, start
        return self.system, self.objective, self.start

    def digest(self) -> str:
        return hashlib.sha256(dumps(instance_to_dict(self)).encode()).hexdigest()


def fixture_path(name: str) -> Path:
    """Path of a bundled instance file, e.g. ``fixture_path("j1.json")``."""
    return Path(__file__).resolve().parent / "fixtures" / name


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(cond, msg):
    if not cond:
        raise InstanceFormatError(msg)


def _int(v, what):
    _require(isinstance(v, int) and not isinstance(v, bool), f"{what} must be an integer")
    return v


def _point(v, what, n=None):
    _require(isinstance(v, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in v), f"{what} must be a list of integers")
    if n is not None:
        _require(len(v) == n, f"{what} has dimension {len(v)}, expected {n}")
    try:
        return as_point(v)
    except ValueError as exc:
        raise InstanceFormatError(f"{what}: {exc}") from exc


def _num(v, numeric, what):
    try:
        return to_number(v, numeric)
    except (ObjectiveError, ValueError, TypeError) as exc:
        raise InstanceFormatError(f"{what}: {exc}") from exc


def parse_objective(doc: dict, n: int) -> SeparableObjective:
    _require(isinstance(doc, dict), "objective must be an object")
    numeric = doc.get("numeric", "exact")
    _require(numeric in ("exact", "float"), "objective.numeric must be 'exact' or 'float'")
    terms_doc = doc.get("terms")
    _require(isinstance(terms_doc, list), "objective.terms must be a list")
    _require(len(terms_doc) == n, f"objective has {len(terms_doc)} terms, system dimension is {n}")
    terms = []
    for k, t in enumerate(terms_doc, 1):
        _require(isinstance(t, dict), f"objective term {k} must be an object")
        kind = t.get("kind")
        if kind == "linear":
            terms.append(Linear(_num(t.get("slope", 0), numeric, f"term {k} slope"), _num(t.get("intercept", 0), numeric, f"term {k} intercept")))
        elif kind == "quadratic":
            terms.append(
                Quadratic(
                    _num(t.get("weight", 1), numeric, f"term {k} weight"),
                    _num(t.get("center", 0), numeric, f"term {k} center"),
                    _num(t.get("offset", 0), numeric, f"term {k} offset"),
                )
            )
        elif kind == "table":
            values = t.get("values")
            _require(isinstance(values, list) and values, f"term {k} needs a nonempty values list")
            terms.append(Table(_int(t.get("lo"), f"term {k} lo"), tuple(_num(v, numeric, f"term {k} value") for v in values)))
        else:
            raise InstanceFormatError(f"objective term {k} has unknown kind {kind!r}")
    return SeparableObjective(terms, _num(doc.get("constant", 0), numeric, "objective constant"), numeric)


def objective_to_dict(f: SeparableObjective) -> dict:
    terms = []
    for t in f.terms:
        if isinstance(t, Linear):
            terms.append({"kind": "linear", "slope": number_to_json(t.slope), "intercept": number_to_json(t.intercept)})
        elif isinstance(t, Quadratic):
            terms.append(
                {"kind": "quadratic", "weight": number_to_json(t.weight), "center": number_to_json(t.center), "offset": number_to_json(t.offset)}
            )
        else:
            terms.append({"kind": "table", "lo": t.lo, "values": [number_to_json(v) for v in t.values]})
    return {"numeric": f.numeric, "constant": number_to_json(f.constant), "terms": terms}


def _parse_family_set(v, n, what):
    _require(isinstance(v, list), f"{what} must be a list of elements")
    for e in v:
        _require(isinstance(e, int) and not isinstance(e, bool) and 1 <= e <= n, f"{what}: element {e!r} outside 1..{n}")
    return mask_of(e - 1 for e in v)


def instance_from_dict(doc: dict) -> Instance:
    _require(isinstance(doc, dict), "instance must be a JSON object")
    _require(doc.get("format_version") == FORMAT_VERSION, f"unsupported format_version {doc.get('format_version')!r}")
    name = doc.get("name", "")
    desc = doc.get("description", "")
    _require(isinstance(name, str) and isinstance(desc, str), "name and description must be strings")
    has_js, has_dm = "jump_system" in doc, "delta_matroid" in doc
    _require(has_js != has_dm, "instance needs exactly one of jump_system / delta_matroid")
    try:
        if has_dm:
            d = doc["delta_matroid"]
            _require(isinstance(d, dict), "delta_matroid must be an object")
            n = _int(d.get("ground_size"), "ground_size")
            fam = d.get("family")
            _require(isinstance(fam, list) and fam, "family must be a nonempty list")
            D = DeltaMatroid(n, tuple(_parse_family_set(s, n, "family member") for s in fam))
            w = d.get("weights")
            _require(isinstance(w, list) and len(w) == n, f"weights must be a list of length {n}")
            weights = tuple(_num(c, "exact", "weight") for c in w)
            start = doc.get("start")
            start = _parse_family_set(start, n, "start") if start is not None else None
            return Instance(dm=D, weights=weights, start=start, name=name, description=desc)
        js = doc["jump_system"]
        _require(isinstance(js, dict), "jump_system must be an object")
        kind = js.get("kind")
        if kind == "explicit":
            n = _int(js.get("dimension"), "dimension")
            pts = js.get("points")
            _require(isinstance(pts, list) and pts, "points must be a nonempty list")
            system = ExplicitJumpSystem([_point(p, "point", n) for p in pts], dimension=n)
        elif kind == "graph":
            n = _int(js.get("vertices"), "vertices")
            edges = js.get("edges", [])
            _require(isinstance(edges, list), "edges must be a list")
            pairs = []
            for e in edges:
                _require(isinstance(e, list) and len(e) == 2, "each edge must be a pair of vertices")
                pairs.append((_int(e[0], "edge endpoint") - 1, _int(e[1], "edge endpoint") - 1))
            system = GraphDegreeJumpSystem(n, tuple(pairs), js.get("loop_convention", 2))
        else:
            raise InstanceFormatError(f"unknown jump_system kind {kind!r}")
        _require("objective" in doc, "jump-system instance needs an objective")
        f = parse_objective(doc["objective"], n)
        start = doc.get("start")
        start = _point(start, "start", n) if start is not None else None
        return Instance(system=system, objective=f, start=start, name=name, description=desc)
    except (JumpSystemError, ValueError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(str(exc)) from exc


def instance_to_dict(inst: Instance) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION}
    if inst.name:
        doc["name"] = inst.name
    if inst.description:
        doc["description"] = inst.description
    if inst.is_dm:
        doc["delta_matroid"] = {
            "ground_size": inst.dm.ground_size,
            "family": [[e + 1 for e in elements_of(m)] for m in inst.dm.family],
            "weights": [number_to_json(c) for c in inst.weights],
        }
        if inst.start is not None:
            doc["start"] = [e + 1 for e in elements_of(inst.start)]
        return doc
    J = inst.system
    if isinstance(J, GraphDegreeJumpSystem):
        doc["jump_system"] = {
            "kind": "graph",
            "vertices": J.vertex_count,
            "edges": [[u + 1, v + 1] for u, v in J.edges],
            "loop_convention": J.loop_degree,
        }
    else:
        doc["jump_system"] = {"kind": "explicit", "dimension": J.dimension, "points": [list(p) for p in J.points]}
    doc["objective"] = objective_to_dict(inst.objective)
    if inst.start is not None:
        doc["start"] = list(inst.start)
    return doc


def validation_failures(inst: Instance, edge_limit: int = DEFAULT_EDGE_LIMIT) -> list[tuple[str, str]]:
    """Semantic checks; returns (check name, message) per failure."""
    out = []
    if inst.is_dm:
        cx = verify_symmetric_exchange(inst.dm)
        if cx is not None:
            out.append(("symmetric_exchange", str(cx)))
        if inst.start is not None and inst.start not in inst.dm:
            out.append(("start", f"start {format_set(inst.start)} is not a feasible set"))
        return out
    J = inst.system
    if isinstance(J, GraphDegreeJumpSystem):
        # degree sequences always form a jump system under loop convention 2;
        # still checked at desk scale, and the only evidence under convention 1
        if len(J.edges) <= edge_limit:
            cx = verify_jexc(materialize(J, edge_limit))
            if cx is not None:
                out.append(("jexc", str(cx)))
    else:
        cx = verify_jexc(J)
        if cx is not None:
            out.append(("jexc", str(cx)))
    bad = verify_convexity(inst.objective)
    if bad is not None:
        out.append(("convexity", f"coordinate {bad[0] + 1} not convex at {bad[1]}"))
    lo, hi = J.bbox
    miss = inst.objective.covers(lo, hi)
    if miss is not None:
        out.append(("domain", f"objective term {miss + 1} does not cover the inflated bounding box"))
    if inst.start is not None and not J.contains(inst.start):
        out.append(("start", f"start {format_point(inst.start)} is not in the jump system"))
    return out


def load_instance(path, strict: bool = True) -> Instance:
    """Read an instance file. With ``strict``, semantic failures raise InstanceInvalid."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    inst = instance_from_dict(doc)
    if strict:
        fails = validation_failures(inst)
        if fails:
            raise InstanceInvalid("; ".join(f"{k}: {m}" for k, m in fails))
    return inst


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance_to_dict(inst)))


# traces ---------------------------------------------------------------


def _step_to_dict(st, profile=None) -> dict:
    d = {
        "x": list(st.x),
        "s": st.s.to_token(),
        "t": st.t.to_token(),
        "f_before": number_to_json(st.f_before),
        "f_probe": number_to_json(st.f_probe),
        "f_after": number_to_json(st.f_after),
    }
    if profile is not None:
        d["mu_before"] = profile.mu(st.x)
        d["mu_after"] = profile.mu(st.y)
    return d


def trace_to_dict(tr: Trace, f: SeparableObjective, profile=None) -> dict:
    return {
        "steps": [_step_to_dict(st, profile) for st in tr.steps],
        "final": list(tr.final),
        "final_value": number_to_json(f(tr.final)),
        "step_count": len(tr.steps),
    }


def dm_trace_to_dict(tr: DmTrace, c, profile=None) -> dict:
    from jumpgreedy.delta_matroid import cost

    return {
        "steps": [
            {
                "F": [e + 1 for e in elements_of(st.F)],
                "i": st.i + 1,
                "j": st.j + 1,
                "cost_before": number_to_json(st.cost_before),
                "cost_after": number_to_json(st.cost_after),
            }
            for st in tr.steps
        ],
        "final": [e + 1 for e in elements_of(tr.final)],
        "final_value": number_to_json(cost(c, tr.final)),
        "step_count": len(tr.steps),
    }


def solve_instance(inst: Instance, algorithm: str, tie: str = "lex", tpolicy: str = "best", start=None, annotate_mu: bool = False) -> dict:
    """Run an algorithm and build the TraceFile document."""
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "trace",
        "instance_digest": inst.digest(),
        "algorithm": algorithm,
        "tie": tie,
        "tpolicy": tpolicy if algorithm == "greedy" else None,
        "seed": None,
        "truncated": False,
    }
    if algorithm in ("dm-greedy", "dm-refined"):
        if not inst.is_dm:
            raise InstanceInvalid(f"{algorithm} needs a delta-matroid instance")
        D, c = inst.dm, inst.weights
        if algorithm == "dm-greedy":
            F = dm_greedy(D, c)
            doc["start"] = None
            doc["traces"] = [dm_trace_to_dict(DmTrace(F), c)]
            return doc
        F0 = start if start is not None else inst.start
        if F0 is None:
            raise InstanceInvalid("no start set given")
        doc["start"] = [e + 1 for e in elements_of(F0)]
        doc["traces"] = [dm_trace_to_dict(dm_refined_greedy(D, c, F0), c)]
        return doc
    J, f, x0 = inst.jump_view()
    if start is not None:
        x0 = to_point(start, inst.dm.ground_size) if isinstance(start, int) else tuple(start)
    if x0 is None:
        raise InstanceInvalid("no start point given")
    profile = None
    if annotate_mu:
        from jumpgreedy.oracle import OptimalityProfile

        profile = OptimalityProfile(J, f)
    result = run(J, f, x0, algorithm, tie, tpolicy)
    traces = result.traces if isinstance(result, Enumeration) else [result]
    doc["start"] = list(x0)
    doc["truncated"] = isinstance(result, Enumeration) and result.truncated
    doc["traces"] = [trace_to_dict(t, f, profile) for t in traces]
    return doc


def trace_from_dict(doc: dict, index: int = 0) -> Trace:
    """Rebuild the index-th jump-system trace of a TraceFile document."""
    from jumpgreedy.solvers import Step

    try:
        _require(doc.get("format_version") == FORMAT_VERSION and doc.get("kind") == "trace", "not a version-1 trace file")
        tr = doc["traces"][index]
        steps = []
        for st in tr["steps"]:
            steps.append(
                Step(
                    as_point(st["x"]),
                    UnitStep.from_token(st["s"]),
                    UnitStep.from_token(st["t"]),
                    to_number(st["f_before"]),
                    to_number(st["f_after"]),
                    to_number(st["f_probe"]),
                )
            )
        return Trace(as_point(doc["start"]), steps, doc["algorithm"])
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"malformed trace: {exc}") from exc


def load_trace(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    _require(isinstance(doc, dict) and doc.get("kind") == "trace", "not a trace file")
    return doc


def replay(inst: Instance, doc: dict) -> bool:
    """Re-run the recorded algorithm and compare the documents byte for byte."""
    annotate = any("mu_before" in st for tr in doc.get("traces", []) for st in tr.get("steps", []))
    algo = doc["algorithm"]
    if algo in ("dm-greedy", "dm-refined"):
        start = mask_of(e - 1 for e in doc["start"]) if doc.get("start") is not None else None
    else:
        start = tuple(doc["start"])
    again = solve_instance(inst, algo, doc["tie"], doc["tpolicy"] or "best", start, annotate)
    return dumps(again) == dumps(doc)
