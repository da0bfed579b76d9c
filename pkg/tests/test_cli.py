import csv
import filecmp
import io
import json
import os

import pytest

from bipden import cli, from_edge_list, parse_edge_list
from bipden.data import southern_women_path


def invoke(*argv):
    return cli.main(list(argv))


def test_generate_detect_score_round_trip(tmp_path, capsys):
    gen_dir = tmp_path / "gen"
    assert invoke("generate", "--gen", "ring:2,2,4", "--out", str(gen_dir)) == 0
    capsys.readouterr()

    det_dir = tmp_path / "det"
    assert invoke("detect", "--input", str(gen_dir / "edges.tsv"),
                  "--theta", "1.0", "--out", str(det_dir), "--no-figures") == 0
    out = capsys.readouterr().out
    assert "communities: 4" in out
    assert "partition_density: 0.8" in out

    assert invoke("score", "--input", str(gen_dir / "edges.tsv"),
                  "--membership", str(det_dir / "membership.tsv")) == 0
    score_out = capsys.readouterr().out
    assert "partition_density\t0.8" in score_out

    quality_text = (det_dir / "quality.txt").read_text()
    assert score_out.splitlines()[0] in quality_text


def test_detect_outputs_are_deterministic(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        assert invoke("detect", "--gen", "chain:2x2,2x2", "--theta", "0.8",
                      "--out", str(out), "--no-figures") == 0
    names = [p.name for p in out_a.iterdir() if p.name != "manifest.json"]
    assert names
    match, mismatch, errors = filecmp.cmpfiles(out_a, out_b, names, shallow=False)
    assert not mismatch and not errors


def test_detect_renders_figures(tmp_path):
    out = tmp_path / "fig"
    assert invoke("detect", "--gen", "ring:2,2,4", "--out", str(out)) == 0
    assert (out / "heatmap.png").stat().st_size > 0
    assert (out / "dtrace.png").stat().st_size > 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert "heatmap.png" in manifest["outputs"]
    assert manifest["version"]


def test_rearrange_ground_truth_blocks(tmp_path, capsys):
    gen_dir = tmp_path / "gen"
    invoke("generate", "--gen", "ring:2,2,4", "--out", str(gen_dir))
    out = tmp_path / "rearr"
    assert invoke("rearrange", "--input", str(gen_dir / "edges.tsv"),
                  "--membership", str(gen_dir / "ground_truth.tsv"),
                  "--out", str(out), "--no-figures") == 0
    capsys.readouterr()
    grid = [line.split() for line in (out / "matrix.txt").read_text().splitlines()]
    for blk in range(4):
        for i in range(2):
            for j in range(2):
                assert grid[2 * blk + i][2 * blk + j] == "1"
    pgm = (out / "matrix.pgm").read_text().splitlines()
    assert pgm[0] == "P2" and pgm[1] == "8 8" and pgm[2] == "255"


def test_membership_round_trip(tmp_path):
    from bipden import BilpaConfig, run
    from bipden.data import southern_women

    g = southern_women()
    part, _, _ = run(g, BilpaConfig(theta=0.8))
    buf = io.StringIO()
    cli.write_membership(g, part, buf)
    path = tmp_path / "mem.tsv"
    path.write_text(buf.getvalue())
    again = cli.read_membership(path, g)
    assert again == part


def test_exact_cli_and_budget_exit_codes(tmp_path, capsys):
    assert invoke("exact", "--gen", "ring:2,2,3", "--k", "3", "--compare-bilpa") == 0
    out = capsys.readouterr().out
    assert "best_d: 0.8" in out
    assert "bilpa_d: 0.8" in out

    assert invoke("exact", "--gen", "biclique:3,3", "--k-max", "3") == 0
    out = capsys.readouterr().out
    assert "k_star: 1" in out and "best_d: 1.0" in out

    assert invoke("exact", "--gen", "biclique:3,3", "--k", "3", "--budget", "5") == 2
    assert "budget" in capsys.readouterr().err.lower()


def test_exact_cli_env_budget_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BIPDEN_BUDGET", "5")
    assert invoke("exact", "--gen", "biclique:3,3", "--k", "3") == 2
    capsys.readouterr()


def test_analyze_csv(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    assert invoke("analyze", "--m", "2", "--n", "2", "--s", "4-12",
                  "--four-biclique", "2,5", "--four-biclique", "2,2",
                  "--out", str(out_csv)) == 0
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    ring_rows = [r for r in rows if r["family"] == "ring"]
    assert ring_rows
    # q_gap changes sign at s = 2(mn+1) = 10
    for r in ring_rows:
        if r["q_gap"]:
            s = int(r["s"])
            gap = float(r["q_gap"])
            if s < 10:
                assert gap > 0
            elif s == 10:
                assert gap == 0
            else:
                assert gap < 0
    four = {(r["m"], r["n"]): r for r in rows if r["family"] == "four_biclique"}
    assert float(four[("2", "5")]["q_gap"]) < 0
    assert float(four[("2", "2")]["q_gap"]) > 0


def test_error_exits(tmp_path, capsys):
    assert invoke("detect", "--input", str(tmp_path / "missing.tsv"),
                  "--out", str(tmp_path / "x")) == 1
    capsys.readouterr()
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\n")
    assert invoke("detect", "--input", str(bad), "--out", str(tmp_path / "y")) == 1
    capsys.readouterr()

    gen_dir = tmp_path / "g"
    invoke("generate", "--gen", "biclique:2,2", "--out", str(gen_dir))
    capsys.readouterr()
    stray = tmp_path / "stray.tsv"
    stray.write_text("u\tnot_a_node\t0\n")
    assert invoke("rearrange", "--input", str(gen_dir / "edges.tsv"),
                  "--membership", str(stray), "--out", str(tmp_path / "z")) == 1
    capsys.readouterr()


def test_generator_specs():
    g, truth = cli.parse_generator_spec("chain:3x4,4x5,5x5,4x3,6x5")
    assert g.p + g.q == 40 and g.edge_count == 99
    g, _ = cli.parse_generator_spec("random:5,6,0.5,42")
    assert g.p == 5 and g.q == 6
    g2, _ = cli.parse_generator_spec("random:5,6,0.5,42")
    assert g.edges == g2.edges
    with pytest.raises(ValueError):
        cli.parse_generator_spec("nonsense:1")


def test_bundled_dataset_readable_by_cli(tmp_path, capsys):
    out = tmp_path / "sw"
    assert invoke("detect", "--input", southern_women_path(),
                  "--theta", "1.0", "--out", str(out), "--no-figures") == 0
    stdout = capsys.readouterr().out
    assert "communities:" in stdout
    rows = parse_edge_list(open(southern_women_path()).read())
    assert len(rows) == 89
    g = from_edge_list(rows)
    assert (g.p, g.q) == (18, 14)
