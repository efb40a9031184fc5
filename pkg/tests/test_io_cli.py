import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpgreedy.cli import main
from jumpgreedy.core import box_points
from jumpgreedy.instance_io import (
    Instance,
    InstanceFormatError,
    dumps,
    fixture_path,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    objective_to_dict,
    parse_objective,
    replay,
    solve_instance,
)
from jumpgreedy.jump_systems import as_explicit, make_rng, random_filtered
from jumpgreedy.objective import random_objective

FIXTURES = ["j1.json", "j2.json", "k3.json", "dm2.json"]


def fx(name):
    return str(fixture_path(name))


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def same_semantics(a: Instance, b: Instance):
    Ja, fa, sa = a.jump_view()
    Jb, fb, sb = b.jump_view()
    assert sa == sb
    lo, hi = as_explicit(Ja).bbox
    for x in box_points([v - 1 for v in lo], [v + 1 for v in hi]):
        assert Ja.contains(x) == Jb.contains(x)
        assert fa(x) == fb(x)


class TestFormat:
    @pytest.mark.parametrize("name", FIXTURES)
    def test_fixture_round_trip(self, name):
        inst = load_instance(fx(name))
        again = instance_from_dict(json.loads(dumps(instance_to_dict(inst))))
        same_semantics(inst, again)
        assert again.digest() == inst.digest()

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.sampled_from(["linear", "quadratic", "table"]))
    def test_generated_round_trip(self, seed, kind):
        J = random_filtered(2, 3, seed)
        lo, hi = J.bbox
        f = random_objective(kind, lo, hi, make_rng(seed), constant=Fraction(seed % 7, 3))
        inst = Instance(system=J, objective=f, start=J.points[0])
        same_semantics(inst, instance_from_dict(json.loads(dumps(instance_to_dict(inst)))))

    def test_exact_decimals(self):
        doc = {"numeric": "exact", "constant": "0.3", "terms": [
            {"kind": "linear", "slope": "0.1"},
            {"kind": "quadratic", "weight": 1, "center": "1/2"},
            {"kind": "table", "lo": -1, "values": [3, 1, "0.25", 1]},
        ]}
        g = parse_objective(doc, 3)
        assert g((1, 0, 1)) == Fraction(9, 10)
        assert parse_objective(objective_to_dict(g), 3) == g

    def test_float_rejected_in_exact_mode(self, tmp_path):
        doc = json.loads(fixture_path("j1.json").read_text())
        doc["objective"]["terms"][0]["slope"] = -2.5
        with pytest.raises(InstanceFormatError):
            load_instance(write(tmp_path, "f.json", doc))
        doc["objective"]["numeric"] = "float"
        assert load_instance(write(tmp_path, "g.json", doc)).objective((1, 0)) == 3.5


class TestValidate:
    @pytest.mark.parametrize("name", FIXTURES)
    def test_fixtures_pass(self, capsys, name):
        assert cli(capsys, "validate", fx(name))[0] == 0

    def test_jexc_counterexample(self, capsys):
        code, out, _ = cli(capsys, "validate", fx("bad_j.json"))
        assert code == 1
        assert "x=(0,0) y=(3,0) s=+χ1" in out

    def test_truncated_file(self, capsys, tmp_path):
        text = fixture_path("j1.json").read_text()
        assert cli(capsys, "validate", write(tmp_path, "t.json", text[: len(text) // 2]))[0] == 2

    def test_missing_file_and_version(self, capsys, tmp_path):
        assert cli(capsys, "validate", str(tmp_path / "nope.json"))[0] == 2
        doc = json.loads(fixture_path("j1.json").read_text())
        doc["format_version"] = 2
        assert cli(capsys, "validate", write(tmp_path, "v.json", doc))[0] == 2

    def test_semantic_failures(self, capsys, tmp_path):
        doc = json.loads(fixture_path("j1.json").read_text())
        doc["objective"]["terms"][0] = {"kind": "table", "lo": -1, "values": [0, 0, 1, 0, 0, 0]}
        code, out, _ = cli(capsys, "validate", write(tmp_path, "c.json", doc))
        assert code == 1 and "convex" in out
        doc = json.loads(fixture_path("j1.json").read_text())
        doc["start"] = [2, 0]
        assert cli(capsys, "validate", write(tmp_path, "s.json", doc))[0] == 1
        doc = json.loads(fixture_path("j1.json").read_text())
        doc["objective"]["terms"][0] = {"kind": "table", "lo": 0, "values": [0, 1, 2, 3]}
        code, out, _ = cli(capsys, "validate", write(tmp_path, "d.json", doc))
        assert code == 1 and "domain" in out

    def test_symmetric_exchange_failure(self, capsys, tmp_path):
        doc = {"format_version": 1, "delta_matroid": {"ground_size": 3, "family": [[], [1, 2, 3]], "weights": [1, 1, 1]}}
        code, out, _ = cli(capsys, "validate", write(tmp_path, "dm.json", doc))
        assert code == 1 and "X={} Y={1,2,3} i=1" in out


class TestSolve:
    def test_reference_trajectories(self, capsys):
        code, out, _ = cli(capsys, "solve", fx("j1.json"), "--algo", "refined", "--start", "0,0")
        assert code == 0 and "final: (3,0)  value: 0  steps: 2" in out
        assert "steps: 4" in cli(capsys, "solve", fx("j2.json"), "--algo", "refined2", "--start", "0,0")[1]
        assert "steps: 2" in cli(capsys, "solve", fx("j2.json"), "--algo", "refined", "--start", "0,0")[1]

    def test_trace_file(self, capsys, tmp_path):
        out = str(tmp_path / "t.json")
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "greedy", "--tpolicy", "worst", "--out", out)[0] == 0
        doc = json.loads(open(out).read())
        assert doc["format_version"] == 1 and doc["tpolicy"] == "worst"
        steps = doc["traces"][0]["steps"]
        assert [(s["s"], s["t"]) for s in steps] == [("+1", "+2"), ("+1", "0"), ("+1", "-2")]
        assert doc["traces"][0]["final"] == [3, 0]

    def test_enumeration(self, capsys, tmp_path):
        out = str(tmp_path / "t.json")
        code, text, _ = cli(capsys, "solve", fx("j1.json"), "--algo", "greedy", "--tie", "all", "--tpolicy", "all", "--out", out)
        assert code == 0 and "[1] final" in text
        assert len(json.loads(open(out).read())["traces"]) > 1

    def test_delta_matroid(self, capsys):
        code, out, _ = cli(capsys, "solve", fx("dm2.json"), "--algo", "dm-refined")
        assert code == 0 and "final: {1}  value: -3  steps: 1" in out
        assert "final: {1}" in cli(capsys, "solve", fx("dm2.json"), "--algo", "dm-greedy")[1]
        # the embedded jump system also solves it
        assert "final: (1,0)  value: -3  steps: 1" in cli(capsys, "solve", fx("dm2.json"), "--algo", "refined", "--start", "1,1")[1]

    def test_usage_errors(self, capsys):
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "refined", "--tpolicy", "worst")[0] == 2
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "refined", "--start", "2,0")[0] == 2
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "refined", "--start", "0,0,0")[0] == 2
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "dm-greedy")[0] == 2
        assert cli(capsys, "solve", fx("dm2.json"), "--algo", "dm-refined", "--start", "2")[0] == 2
        assert cli(capsys, "solve", fx("j1.json"), "--algo", "bogus")[0] == 2

    @pytest.mark.parametrize("name", ["j1.json", "j2.json", "k3.json", "dm2.json"])
    @pytest.mark.parametrize("algo", ["greedy", "refined", "refined2"])
    def test_replay_is_byte_identical(self, name, algo):
        inst = load_instance(fx(name))
        doc = solve_instance(inst, algo, annotate_mu=True)
        assert replay(inst, json.loads(dumps(doc)))
        doc["traces"][0]["final_value"] = 99
        assert not replay(inst, doc)


class TestVerify:
    def test_all_checks_on_fixtures(self, capsys):
        for name in FIXTURES:
            code, out, _ = cli(capsys, "verify", fx(name), "--checks", "all")
            assert code == 0, out
        code, out, _ = cli(capsys, "verify", fx("dm2.json"), "--checks", "all")
        assert "cor3: PASS" in out

    def test_adversarial_trace_fails_cor1(self, capsys, tmp_path):
        out = str(tmp_path / "t.json")
        cli(capsys, "solve", fx("j1.json"), "--algo", "greedy", "--tpolicy", "worst", "--out", out)
        code, text, _ = cli(capsys, "verify", fx("j1.json"), "--trace", out, "--checks", "cor1")
        assert code == 1
        line = next(ln for ln in text.splitlines() if ln.startswith("cor1"))
        payload = json.loads(line.split("FAIL ", 1)[1])
        assert payload["index"] == 0 and payload["mu_before"] == payload["mu_after"] == 3

    def test_refined_trace_cor2(self, capsys, tmp_path):
        out = str(tmp_path / "t.json")
        cli(capsys, "solve", fx("j2.json"), "--algo", "refined", "--out", out)
        code, text, _ = cli(capsys, "verify", fx("j2.json"), "--trace", out, "--checks", "cor2")
        assert code == 0 and "cor2: PASS" in text and "replay: PASS" in text

    def test_tampered_trace_fails_replay(self, capsys, tmp_path):
        out = tmp_path / "t.json"
        cli(capsys, "solve", fx("j1.json"), "--algo", "refined", "--out", str(out))
        doc = json.loads(out.read_text())
        doc["traces"][0]["step_count"] = 7
        out.write_text(json.dumps(doc))
        code, text, _ = cli(capsys, "verify", fx("j1.json"), "--trace", str(out), "--checks", "cor1")
        assert code == 1 and "replay: FAIL" in text

    def test_inapplicable_check(self, capsys):
        assert cli(capsys, "verify", fx("j1.json"), "--checks", "cor3")[0] == 2

    def test_parallel_workers(self, capsys, monkeypatch):
        monkeypatch.setenv("JUMPGREEDY_THREADS", "2")
        code, out, _ = cli(capsys, "verify", fx("j1.json"), fx("j2.json"), fx("k3.json"), "--checks", "thm1", "thm5")
        assert code == 0 and out.count("thm5: PASS") == 3


class TestGen:
    def test_box(self, capsys, tmp_path):
        out = str(tmp_path / "b.json")
        assert cli(capsys, "gen", "--kind", "box", "--params", "n=2", "side=2", "--out", out)[0] == 0
        assert len(load_instance(out).system) == 9
        assert cli(capsys, "validate", out)[0] == 0

    def test_graph_k3(self, capsys, tmp_path):
        out = str(tmp_path / "g.json")
        cli(capsys, "gen", "--kind", "graph", "--seed", "3", "--params", "n=3", "edges=1-2,2-3,1-3", "--out", out)
        J = as_explicit(load_instance(out).system)
        assert set(J.points) == {(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 2)}

    def test_dm_enum(self, capsys):
        code, out, _ = cli(capsys, "gen", "--kind", "dm-enum", "--params", "n=2")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 15
        assert all(instance_from_dict(json.loads(ln)).is_dm for ln in lines)

    @pytest.mark.parametrize("kind,params", [
        ("graph", ["n=4", "edges=6", "objective=quadratic"]),
        ("filtered", ["n=2", "side=3", "objective=table"]),
        ("box", ["n=3", "side=1"]),
    ])
    def test_deterministic_and_valid(self, capsys, tmp_path, kind, params):
        a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        cli(capsys, "gen", "--kind", kind, "--seed", "11", "--params", *params, "--out", a)
        cli(capsys, "gen", "--kind", kind, "--seed", "11", "--params", *params, "--out", b)
        assert open(a).read() == open(b).read()
        assert cli(capsys, "validate", a)[0] == 0

    def test_bad_params(self, capsys):
        assert cli(capsys, "gen", "--kind", "box", "--params", "n=2")[0] == 2
        assert cli(capsys, "gen", "--kind", "box", "--params", "n=2", "side=9")[0] == 2
        assert cli(capsys, "gen", "--kind", "graph", "--params", "n=9", "edges=2")[0] == 2


def test_console_entry_point():
    env = dict(os.environ)
    r = subprocess.run([sys.executable, "-m", "jumpgreedy.cli", "validate", fx("bad_j.json")], capture_output=True, text=True, env=env)
    assert r.returncode == 1 and "s=+χ1" in r.stdout
