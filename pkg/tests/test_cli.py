import json

import pytest

from mobigossip.cli import main
from mobigossip.generators import gen_badgraph, gen_family
from mobigossip.graphio import read_graph, write_graph


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_badgraph(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, _, _ = run(["gen", "--family", "badgraph", "--n", "64", "--out", str(path)], capsys)
    assert code == 0
    assert read_graph(path) == gen_badgraph(64)


def test_gen_gstar(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(["gen", "--family", "gstar", "--delta", "2", "--Delta", "4", "--out", str(path)], capsys)[0] == 0
    assert read_graph(path).n == 6


def test_gen_odd_badgraph_is_usage_error(capsys):
    code, _, err = run(["gen", "--family", "badgraph", "--n", "15"], capsys)
    assert code == 2 and "even" in err


def test_gen_dynamic(tmp_path, capsys):
    path = tmp_path / "d.json"
    run(["gen", "--family", "cycle", "--n", "6", "--tau", "2", "--seed", "3", "--out", str(path)], capsys)
    obj = json.loads(path.read_text())
    assert obj["tau"] == 2 and obj["model"] == "permute" and obj["seed"] == 3


def test_analyze_star_alpha(tmp_path, capsys):
    path = tmp_path / "s.json"
    write_graph(gen_family("star", 6), path)
    code, out, _ = run(["analyze", str(path), "--alpha", "--exact"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert (rep["alpha"]["num"], rep["alpha"]["den"]) == (1, 3)
    assert rep["alpha"]["mode"] == "exact" and "phi" not in rep


def test_analyze_p2_all(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_graph(gen_family("path", 2), path)
    code, out, _ = run(["analyze", str(path)], capsys)
    rep = json.loads(out)
    for m in ("alpha", "phi", "gamma"):
        assert (rep[m]["num"], rep[m]["den"]) == (1, 1)
    assert rep["Delta"] == rep["delta"] == 1


def test_analyze_exact_cap(tmp_path, capsys):
    path = tmp_path / "c.json"
    write_graph(gen_family("cycle", 30), path)
    code, _, err = run(["analyze", str(path), "--exact"], capsys)
    assert code == 2 and "n <= " in err


def test_analyze_sampled(tmp_path, capsys):
    path = tmp_path / "c.json"
    write_graph(gen_family("cycle", 30), path)
    code, out, _ = run(["analyze", str(path), "--sample", "20", "--alpha", "--gamma"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["alpha"]["mode"] == "sampled(20)" and rep["gamma"]["mode"] == "sampled(20)"


def test_analyze_dynamic(tmp_path, capsys):
    path = tmp_path / "d.json"
    run(["gen", "--family", "star", "--n", "6", "--tau", "1", "--out", str(path)], capsys)
    code, out, _ = run(["analyze", str(path), "--alpha", "--horizon", "5"], capsys)
    assert code == 0 and json.loads(out)["alpha"]["den"] == 3


def test_analyze_missing_file_is_runtime_error(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "nope.json")], capsys)[0] == 1


def test_analyze_bad_file_is_runtime_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "edges": [[0, 0]]}')
    assert run(["analyze", str(path)], capsys)[0] == 1


def test_simulate_p2(tmp_path, capsys):
    path = tmp_path / "p2.json"
    write_graph(gen_family("path", 2), path)
    code, out, _ = run(["simulate", str(path), "--protocol", "ppush", "--trials", "5", "--seed", "3"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "family,n,tau,protocol,b,resolution,seed,rounds,completed"
    assert [ln.split(",")[7] for ln in lines[1:]] == ["1"] * 5
    assert [ln.split(",")[6] for ln in lines[1:]] == ["3", "4", "5", "6", "7"]


def test_simulate_gstar_lower_bound(tmp_path, capsys):
    g, csv = tmp_path / "g.json", tmp_path / "runs.csv"
    run(["gen", "--family", "gstar", "--delta", "2", "--Delta", "64", "--out", str(g)], capsys)
    run(["simulate", str(g), "--protocol", "ppush", "--trials", "10", "--out", str(csv)], capsys)
    rows = csv.read_text().strip().splitlines()[1:]
    assert len(rows) == 10 and all(int(r.split(",")[7]) >= 32 for r in rows)


def test_simulate_reproducible_bytes(tmp_path, capsys):
    g = tmp_path / "g.json"
    write_graph(gen_family("gnp", 30, p=0.2, seed=1), g)
    outs = []
    for i in range(2):
        csv, trace = tmp_path / f"r{i}.csv", tmp_path / f"t{i}.jsonl"
        argv = ["simulate", str(g), "--protocol", "pushpull", "--tau", "2", "--trials", "4",
                "--seed", "9", "--trace", str(trace), "--out", str(csv)]
        assert run(argv, capsys)[0] == 0
        outs.append((csv.read_bytes(), trace.read_bytes()))
    assert outs[0] == outs[1]
    line = json.loads(outs[0][1].splitlines()[0])
    assert {"t", "informed", "proposals", "connections", "new", "trial"} <= line.keys()


def test_simulate_bad_protocol_flags(tmp_path, capsys):
    g = tmp_path / "g.json"
    write_graph(gen_family("path", 3), g)
    assert run(["simulate", str(g), "--protocol", "ppush", "--b", "0"], capsys)[0] == 2
    assert run(["simulate", str(g), "--protocol", "flood"], capsys)[0] == 2
    assert run(["simulate", str(g), "--protocol", "push", "--source", "9"], capsys)[0] == 2
    assert run(["simulate", str(g), "--protocol", "push", "--bogus"], capsys)[0] == 2


def test_simulate_dynamic_file(tmp_path, capsys):
    d = tmp_path / "d.json"
    run(["gen", "--family", "complete", "--n", "16", "--tau", "1", "--out", str(d)], capsys)
    code, out, _ = run(["simulate", str(d), "--protocol", "ppush", "--trials", "2"], capsys)
    assert code == 0 and ",1,ppush," in out
    assert run(["simulate", str(d), "--protocol", "ppush", "--tau", "3"], capsys)[0] == 2


def test_sweep_with_fit(tmp_path, capsys):
    csv, summary = tmp_path / "s.csv", tmp_path / "s.jsonl"
    argv = ["sweep", "--family", "complete", "--sizes", "16,32,64", "--protocol", "ppush", "--trials", "4",
            "--seed", "1", "--out", str(csv), "--summary", str(summary), "--fit"]
    assert run(argv, capsys)[0] == 0
    lines = [json.loads(x) for x in summary.read_text().splitlines()]
    assert [p["n"] for p in lines[:3]] == [16, 32, 64]
    assert {"n", "median", "p90", "mean", "timeouts"} <= lines[0].keys()
    assert "fit_exponent" in lines[3]
    assert len(csv.read_text().splitlines()) == 1 + 12


def test_sweep_fit_constant_medians(capsys):
    # gstar(1, 4) under MATCH_GREEDY always takes 4 rounds, so the fit sees constant medians
    argv = ["sweep", "--family", "gstar", "--sizes", "4,4,4", "--protocol", "matchgreedy", "--trials", "2"]
    code = main(argv)
    err = capsys.readouterr().err
    assert code == 0 and '"median": 4.0' in err


def test_sweep_empty_sizes(capsys):
    assert main(["sweep", "--family", "badgraph", "--sizes", "", "--protocol", "pushpull"]) == 2


def test_config_file(tmp_path, capsys):
    g = tmp_path / "p2.json"
    write_graph(gen_family("path", 2), g)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"protocol": "ppush", "trials": 3, "seed": 11}))
    code, out, _ = run(["simulate", str(g), "--config", str(cfg)], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 4 and ",11," in out
    code, out, _ = run(["simulate", str(g), "--config", str(cfg), "--trials", "1"], capsys)
    assert len(out.strip().splitlines()) == 2
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(["simulate", str(g), "--config", str(cfg), "--protocol", "push"], capsys)[0] == 2


@pytest.mark.parametrize("cmd", ["gen", "analyze", "simulate", "sweep"])
def test_help_exits_zero(cmd, capsys):
    with pytest.raises(SystemExit) as exc:
        main([cmd, "--help"])
    assert exc.value.code == 0


def test_jobs_env_default(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("MGS_JOBS", "2")
    g = tmp_path / "g.json"
    write_graph(gen_family("cycle", 12), g)
    a = run(["simulate", str(g), "--protocol", "push", "--trials", "3"], capsys)[1]
    b = run(["simulate", str(g), "--protocol", "push", "--trials", "3", "--jobs", "1"], capsys)[1]
    assert a == b
