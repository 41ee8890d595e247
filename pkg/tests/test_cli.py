import json
import math
import subprocess
import sys

import numpy as np
import pytest

from expander_forge import io
from expander_forge.cli import main


def test_lps_command(tmp_path, capsys):
    assert main(["lps", "--p", "5", "--q", "29", "--out", str(tmp_path)]) == 0
    g = io.read_edgelist(tmp_path / "lps_5_29.edges")
    assert (g.kind, g.n_left, g.d_left, len(g.edges)) == ("cayley", 12180, 6, 36540)
    man = io.read_json(tmp_path / "lps_5_29.manifest.json")
    assert man["artifacts"]["lps_5_29.edges"] == io.sha256_file(tmp_path / "lps_5_29.edges")
    assert man["inputs"] == {"p": 5, "q": 29}


def test_verify_ramanujan_from_file(tmp_path, capsys):
    main(["lps", "--p", "5", "--q", "29", "--out", str(tmp_path)])
    capsys.readouterr()
    assert main(["verify", "--check", "ramanujan", "--input", "lps_5_29", "--out", str(tmp_path)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "pass" and rep["version"] == "report_v1"
    assert rep["bound"]["lambda_2"] == pytest.approx(2 * math.sqrt(5))
    assert rep["measured"]["lambda_2"] <= 4.4722
    assert (tmp_path / "reports" / "ramanujan_lps_5_29.json").exists()


def test_lps_searches_q(tmp_path, capsys):
    assert main(["lps", "--p", "13", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "lps_13_17.edges").exists()


def test_export_empty_dedupe(tmp_path):
    src = tmp_path / "empty.edges"
    io.write_edgelist(src, io.EdgeList("product", 0, 0, 0, 0, np.zeros((0, 2), dtype=np.int64)))
    out = tmp_path / "out.edges"
    assert main(["export", "--format", "edgelist", "--dedupe", "--input", str(src),
                 "--output", str(out)]) == 0
    assert out.read_text() == "#expander-forge v1 product-dedup 0 0 0 0\n"
    assert (tmp_path / "out.edges.manifest.json").exists()


def test_config_error_names_invariant(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"D_L": 30}))
    assert main(["primes", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "D_L*d_L = D_R*d_R" in capsys.readouterr().err
    assert main(["primes", "--p-list-L", "5,17", "--out", str(tmp_path)]) == 2
    assert "PrimeParams(p_list_L)" in capsys.readouterr().err


def test_staged_commands_compose(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["primes", "--out", out]) == 0
    assert main(["complex", "--out", out]) == 0
    assert main(["gadget", "--out", out]) == 0
    assert main(["basegraph", "--side", "L", "--out", out]) == 0
    g = io.read_edgelist(tmp_path / "basegraph_L.edges")
    assert (g.n_left, g.n_right, g.d_left, g.d_right, len(g.edges)) == (730_800, 24_360, 2, 60, 1_461_600)
    assert main(["product", "--out", out]) == 0
    p = io.read_edgelist(tmp_path / "product.edges")
    assert len(p.edges) == 8_769_600 and p.d_left == 12
    capsys.readouterr()
    assert main(["verify", "--check", "product", "--check", "gadget", "--quiet", "--out", out]) == 0
    assert capsys.readouterr().out.split() == ["product:", "pass", "gadget:", "pass"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "expander_forge", "config", "--validate"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["q"] == 29
