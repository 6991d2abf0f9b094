import json
import subprocess
import sys

from logtwist import fixtures
from logtwist.cli import EXIT_INVALID, EXIT_OK, EXIT_UNSUPPORTED, run
from logtwist.jsonio import graph_to_json, parse_graph, parse_structure, parse_job


def call(*argv):
    status, text = run(list(argv))
    return status, text


def test_monoid_on_banana():
    status, text = call("monoid", "-i", fixtures.path("banana_h4"))
    assert status == EXIT_OK
    out = json.loads(text)
    assert out["monoid"]["rank"] == 1
    assert out["monoid"]["hilbert_basis"] == [[1]]
    assert out["monoid"]["images"] == {"e_{v_X}": [0], "e_{v_R}": [2], "e_{l_p}": [1], "e_{l_q}": [1]}
    assert out["hyperelliptic"]["presentations_agree"] is True


def test_enumerate_on_banana():
    out = json.loads(call("enumerate", "-i", fixtures.path("banana_h4"))[1])
    assert out["count"] == 5
    assert [s["consistent"] for s in out["structures"]] == [False, True, True, True, False]


def test_spin_commands():
    out = json.loads(call("spin", "-i", fixtures.path("rational_banana"))[1])
    assert out["parity"] == "even"
    out = json.loads(call("spin", "-i", fixtures.path("rational_banana"), "--signs", "+,+")[1])
    assert out["parity"] == "odd" and out["h0"] == 1
    status, text = call("spin", "-i", fixtures.path("banana_h4"), "--signs", "+,+")
    assert status == EXIT_UNSUPPORTED and "genus 2" in text


def test_hyper_command():
    out = json.loads(call("hyper", "-i", fixtures.path("banana_h4_hyperelliptic"))[1])
    assert out["cover_check"] == "ok" and out["nonempty"] is True
    assert out["edge_split"] == {"fixed": [], "swapped": ["l_p", "l_q"]}
    out = json.loads(call("hyper", "-i", '{"hyp_signature": {"fixed": [0,0,0,0,0,0,0,0], "pairs": [2]}}')[1])
    assert out["pushforward"] == [0] * 8 + [4]


def test_inline_involution_flag():
    status, text = call("monoid", "-i", fixtures.path("swapped_pair_c1"), "--involution", '{"vertices": [0, 1], "edges": [0, 1]}')
    assert status == EXIT_OK
    assert json.loads(text)["hyperelliptic"]["compatible"] is True


def test_validation_errors_point_at_field(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"graph": {"vertices": [{"genus": 0}, {"genus": "x"}]}}')
    status, text = call("enumerate", "-i", str(bad))
    assert status == EXIT_INVALID and "/graph/vertices/1/genus" in text
    bad.write_text('{"graph": {"vertices": [{"genus": 9007199254740993}]}}')
    status, text = call("enumerate", "-i", str(bad))
    assert status == EXIT_INVALID and "53-bit" in text
    bad.write_text("{not json")
    assert call("enumerate", "-i", str(bad))[0] == EXIT_INVALID
    assert call("enumerate", "-i", str(tmp_path / "missing.json"))[0] == EXIT_INVALID
    doc = fixtures.load("banana_h4")
    doc["signature"] = [2]
    bad.write_text(json.dumps(doc))
    status, text = call("monoid", "-i", str(bad))
    assert status == EXIT_INVALID and "degree mismatch" in text
    doc = fixtures.load("banana_h4")
    doc["structure"]["orientation"][0] = "sideways"
    bad.write_text(json.dumps(doc))
    assert "/structure/orientation/0" in call("monoid", "-i", str(bad))[1]


def test_output_and_dot_files(tmp_path):
    out, dot = tmp_path / "out.json", tmp_path / "g.dot"
    status, text = call("report", "-i", fixtures.path("chain_c1"), "-o", str(out), "--dot", str(dot))
    assert status == EXIT_OK and text == ""
    report = json.loads(out.read_text())
    assert report["dot"] == dot.read_text()
    assert report["orders"] == {"v1": {"m1": 0, "l[0]": 0}, "v2": {"m2": 2, "l[1]": -2}}


def test_round_trips():
    for name in fixtures.names():
        job = parse_job(fixtures.load(name))
        assert parse_graph(graph_to_json(job.graph)) == job.graph
        status, text = call("enumerate", "-i", fixtures.path(name))
        if status != EXIT_OK:
            continue
        for s in json.loads(text)["structures"]:
            T = parse_structure(s, job.graph)
            assert [o.label for o in T.orientation] == s["orientation"]
            assert list(T.contact) == s["contact"] and list(T.degenerate) == s["degenerate"]


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "logtwist.cli", "enumerate", "-i", fixtures.path("smooth_genus3")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 1
