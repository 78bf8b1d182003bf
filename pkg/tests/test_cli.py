import csv
import json
import subprocess
import sys
import textwrap

import pytest

from freqalloc.cli import main
from freqalloc.frequencies import FrequencySet, PoolTag, Side
from freqalloc.systems import golden_system


def run_cli(*argv):
    return main(list(argv))


def write_graph(tmp_path, doc, name="graph.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def write_requests(tmp_path, vertices, name="requests.jsonl"):
    p = tmp_path / name
    p.write_text("".join(json.dumps({"vertex": v}) + "\n" for v in vertices))
    return str(p)


EDGE_GRAPH = {
    "vertices": [{"id": "u", "side": "A"}, {"id": "v", "side": "B"}],
    "edges": [["u", "v"]],
}


class TestVerify:
    def test_golden_clean(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(
            "verify", "--system", "golden", "--r", "R0", "--lambda", "8",
            "--t-max", "120", "--f2-t-max", "40", "--out", str(out),
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["violation_count"] == 0
        assert report["claims"]["r"] == "18/11-1/11*sqrt5"

    def test_trivial_clean_default_claims(self, tmp_path):
        out = tmp_path / "report.json"
        assert run_cli(
            "verify", "--system", "trivial", "--t-max", "60", "--out", str(out)
        ) == 0

    def test_bad_claim_fails(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(
            "verify", "--system", "golden", "--r", "1.42", "--lambda", "8",
            "--t-max", "150", "--out", str(out),
        )
        assert code == 1
        report = json.loads(out.read_text())
        assert report["violations"]
        assert report["violations"][0]["kind"] == "competitiveness"

    def test_lemma_checks_run(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(
            "verify", "--system", "half", "--checks", "lemmas",
            "--lemma-t-max", "60", "--out", str(out),
        )
        assert code == 0
        assert json.loads(out.read_text())["horizons"]["lemma_chain"] == 60

    def test_unknown_system(self):
        assert run_cli("verify", "--system", "nope", "--t-max", "5") == 2

    def test_bad_exact_number(self):
        assert (
            run_cli("verify", "--system", "golden", "--r", "wat", "--t-max", "5")
            == 2
        )


class TestFalsify:
    def test_refutes_golden_142(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run_cli(
            "falsify", "--system", "golden", "--r", "1.42", "--lambda", "8",
            "--t-max", "400", "--out", str(out),
        )
        assert code == 1
        doc = json.loads(out.read_text())
        assert doc["status"] == "refuted"

    def test_certificate_when_horizon_short(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run_cli(
            "falsify", "--system", "golden", "--r", "1.42", "--lambda", "8",
            "--t-max", "60", "--out", str(out),
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["status"] == "certificate"
        assert doc["certificate"]["contradiction_index"] >= 1

    def test_rejects_out_of_scope_ratio(self):
        assert (
            run_cli("falsify", "--system", "golden", "--r", "3/2", "--lambda", "8")
            == 2
        )


class TestRun:
    def test_single_edge_trivial(self, tmp_path):
        g = write_graph(tmp_path, EDGE_GRAPH)
        r = write_requests(tmp_path, ["u", "u", "u", "v", "v"])
        out = tmp_path / "out.json"
        assert run_cli(
            "run", "--graph", g, "--requests", r, "--system", "trivial",
            "--out", str(out),
        ) == 0
        doc = json.loads(out.read_text())
        assert doc["distinct_used"] == 5
        assert doc["assignment"]["u"] == [1, 6, 11]  # PA1..PA3 encoded
        assert [s["distinct_used"] for s in doc["steps"]] == [1, 2, 3, 4, 5]

    def test_empty_requests(self, tmp_path):
        g = write_graph(tmp_path, EDGE_GRAPH)
        r = write_requests(tmp_path, [])
        out = tmp_path / "out.json"
        assert run_cli(
            "run", "--graph", g, "--requests", r, "--system", "trivial",
            "--out", str(out),
        ) == 0
        assert json.loads(out.read_text())["assignment"] == {}

    def test_not_bipartite_exit_2(self, tmp_path):
        g = write_graph(
            tmp_path,
            {
                "vertices": [{"id": x} for x in "abc"],
                "edges": [["a", "b"], ["b", "c"], ["c", "a"]],
            },
        )
        r = write_requests(tmp_path, ["a"])
        assert run_cli(
            "run", "--graph", g, "--requests", r, "--system", "trivial"
        ) == 2

    def test_colliding_plugin_exit_1(self, tmp_path):
        body = textwrap.dedent(
            """
            import json, sys
            for line in sys.stdin:
                req = json.loads(line)
                sys.stdout.write(
                    json.dumps({"freqs": list(range(1, req["k"] + 1))}) + "\\n"
                )
                sys.stdout.flush()
            """
        )
        plug = tmp_path / "collider.py"
        plug.write_text(body)
        g = write_graph(tmp_path, EDGE_GRAPH)
        r = write_requests(tmp_path, ["u", "v"])
        assert run_cli(
            "run", "--graph", g, "--requests", r,
            "--system", f"plugin:{plug}", "--r", "1", "--lambda", "0",
        ) == 1


class TestAdversary:
    def test_universal_t2(self, tmp_path):
        g = tmp_path / "g.json"
        r = tmp_path / "r.jsonl"
        assert run_cli(
            "adversary", "universal", "--t-max", "2",
            "--out-graph", str(g), "--out-requests", str(r),
        ) == 0
        doc = json.loads(g.read_text())
        assert len(doc["vertices"]) == 6
        assert len(doc["edges"]) == 3
        lines = [json.loads(x) for x in r.read_text().splitlines()]
        assert len(lines) == 2 * (1 + 1 + 2)

    def test_universal_guard(self, tmp_path):
        assert run_cli(
            "adversary", "universal", "--t-max", "1000000",
            "--out-graph", str(tmp_path / "g"), "--out-requests",
            str(tmp_path / "r"),
        ) == 3

    def test_lower_bound(self, tmp_path):
        g = tmp_path / "g.json"
        r = tmp_path / "r.jsonl"
        assert run_cli(
            "adversary", "lower-bound", "--theta", "1", "--lambda", "1",
            "--out-graph", str(g), "--out-requests", str(r),
        ) == 0
        assert len(json.loads(g.read_text())["vertices"]) == 14

    def test_lower_bound_refusal(self, tmp_path):
        assert run_cli(
            "adversary", "lower-bound", "--theta", "35", "--lambda", "1",
            "--scale-cap", "1000000",
            "--out-graph", str(tmp_path / "g"), "--out-requests",
            str(tmp_path / "r"),
        ) == 3

    @pytest.mark.parametrize("system", ["trivial", "half", "golden"])
    def test_round_trip_through_run(self, tmp_path, system):
        g = tmp_path / "g.json"
        r = tmp_path / "r.jsonl"
        out = tmp_path / "out.json"
        assert run_cli(
            "adversary", "universal", "--t-max", "12",
            "--out-graph", str(g), "--out-requests", str(r),
        ) == 0
        assert run_cli(
            "run", "--graph", str(g), "--requests", str(r),
            "--system", system, "--out", str(out),
        ) == 0
        doc = json.loads(out.read_text())
        assert doc["distinct_used"] > 0


class TestOpt:
    def test_static_and_brute_agree(self, tmp_path):
        g = write_graph(tmp_path, EDGE_GRAPH)
        r = write_requests(tmp_path, ["u"] * 3 + ["v"] * 2)
        out1, out2 = tmp_path / "s.json", tmp_path / "b.json"
        assert run_cli(
            "opt", "static", "--graph", g, "--requests", r, "--out", str(out1)
        ) == 0
        assert run_cli(
            "opt", "brute", "--graph", g, "--requests", r, "--out", str(out2)
        ) == 0
        assert json.loads(out1.read_text())["optimum"] == 5
        assert json.loads(out2.read_text())["optimum"] == 5

    def test_brute_budget_refusal(self, tmp_path):
        g = write_graph(tmp_path, EDGE_GRAPH)
        r = write_requests(tmp_path, ["u"] * 9 + ["v"] * 9)
        assert run_cli(
            "opt", "brute", "--graph", g, "--requests", r, "--budget", "10"
        ) == 3


class TestPlotSets:
    def test_half_band(self, tmp_path):
        out = tmp_path / "bands.csv"
        assert run_cli(
            "plot-sets", "--system", "half", "--t", "10", "--out", str(out)
        ) == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        bands_k7 = [
            r for r in rows if r["k"] == "7" and r["pool"] == "Q"
        ]
        assert bands_k7 == [{"k": "7", "pool": "Q", "lo": "3", "hi": "5"}]

    def test_golden_case2_private_only(self, tmp_path):
        out = tmp_path / "bands.csv"
        assert run_cli(
            "plot-sets", "--system", "golden", "--t", "20", "--out", str(out)
        ) == 0
        rows = [
            r
            for r in csv.DictReader(out.read_text().splitlines())
            if r["k"] == "8"
        ]
        assert rows == [{"k": "8", "pool": "PA", "lo": "0", "hi": "12"}]

    def test_reconstructs_exact_sets(self, tmp_path):
        out = tmp_path / "bands.csv"
        t = 11
        assert run_cli(
            "plot-sets", "--system", "golden", "--t", str(t), "--side", "B",
            "--out", str(out),
        ) == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        go = golden_system()
        by_token = {p.token: p for p in PoolTag}
        for k in range(0, t + 1):
            bands = [
                (by_token[r["pool"]], int(r["lo"]) + 1, int(r["hi"]) + 1)
                for r in rows
                if int(r["k"]) == k
            ]
            assert FrequencySet(bands) == go.sets(Side.B, t, k)


class TestDeterminism:
    def test_reports_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            run_cli(
                "verify", "--system", "golden", "--t-max", "40",
                "--f2-t-max", "20", "--out", str(out),
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_adversary_byte_identical(self, tmp_path):
        blobs = []
        for tag in ("1", "2"):
            g = tmp_path / f"g{tag}.json"
            r = tmp_path / f"r{tag}.jsonl"
            run_cli(
                "adversary", "universal", "--t-max", "6",
                "--out-graph", str(g), "--out-requests", str(r),
            )
            blobs.append(g.read_bytes() + r.read_bytes())
        assert blobs[0] == blobs[1]


class TestSubprocessEntry:
    def test_module_invocation(self, tmp_path):
        out = tmp_path / "report.json"
        proc = subprocess.run(
            [
                sys.executable, "-m", "freqalloc.cli",
                "verify", "--system", "trivial", "--t-max", "30",
                "--out", str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert json.loads(out.read_text())["violation_count"] == 0
