"""Acceptance criteria 1-15 on the q = 29 desk build.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion with the measured values.
"""

import filecmp
import itertools
import math
import os
import time

import numpy as np
import pytest
from scipy.sparse import csr_matrix

from expander_forge.checks import (FaceScan, check_complete_faces, check_density, check_expanding,
                                   check_structure, collision_sets)
from expander_forge.cubical import validate_generators
from expander_forge.gadget import generate_certified, uniform_special_sets
from expander_forge.lps import enumerate_A, generator_set
from expander_forge.numtheory import divisor_sum, four_square_count
from expander_forge.pipeline import BuildConfig, run
from expander_forge.product import audit
from expander_forge.verify import (collision_analysis, expansion_profile, free_action_audit,
                                   orient_bounded_outdegree, second_eigenvalue, side_view)
from oracles import recount

EIG_TOL = 1e-4


def note(record, **kw):
    record("detail", ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                               for k, v in kw.items()))


@pytest.mark.criterion(1, "Jacobi four-square count for odd n <= 10^4")
def test_c01_jacobi(record_property):
    t = time.perf_counter()
    bad = [n for n in range(1, 10_001, 2) if four_square_count(n) != 8 * divisor_sum(n)]
    elapsed = time.perf_counter() - t
    note(record_property, checked=5000, mismatches=len(bad), seconds=elapsed)
    assert not bad
    assert elapsed < 10


@pytest.mark.criterion(2, "generator counts |A(p)| = p + 1 and |A(65)| = 84")
def test_c02_generator_counts(record_property):
    t = time.perf_counter()
    sizes = {p: len(enumerate_A(p)) for p in (5, 13, 17, 29, 65)}
    elapsed = time.perf_counter() - t
    note(record_property, sizes=sizes, seconds=elapsed)
    assert sizes == {5: 6, 13: 14, 17: 18, 29: 30, 65: 84}
    assert elapsed < 1


@pytest.mark.criterion(3, "Ramanujan bound for X(5; 29)")
def test_c03_ramanujan(desk, record_property):
    t = time.perf_counter()
    est = second_eigenvalue(desk.cayley(5).adjacency(), 1e-9)
    elapsed = time.perf_counter() - t
    bound = 2 * math.sqrt(5)
    note(record_property, lambda_2=est.value, bound=bound, residual=est.residual, seconds=elapsed)
    assert est.value <= bound + EIG_TOL
    assert elapsed < 60


@pytest.mark.criterion(4, "cubical generating property for A(5), A(13) over q = 29")
def test_c04_cubical(G29, record_property):
    t = time.perf_counter()
    A5, A13 = generator_set(5, 29).indices(G29), generator_set(13, 29).indices(G29)
    X = validate_generators(G29, [A5, A13])
    top = X.corner_offsets[3]
    trips = 0
    for a, b in itertools.product(range(6), range(14)):
        c1, c0 = X.swaps.swap(0, 1, a, b)
        assert G29.mul(A5[a], A13[b]) == G29.mul(A13[c1], A5[c0])
        assert X.swaps.swap(1, 0, c1, c0) == (a, b)
        trips += 1
    elapsed = time.perf_counter() - t
    note(record_property, product_size=len(set(top.tolist())), round_trips=trips, seconds=elapsed)
    assert len(set(top.tolist())) == 84 and trips == 84
    assert elapsed < 5


@pytest.mark.criterion(5, "expanding-complex bound on every I_{y, y+x}")
def test_c05_expanding(desk, record_property):
    t = time.perf_counter()
    rep = check_expanding(desk, sides=("L",))
    elapsed = time.perf_counter() - t
    pairs = rep["measured"]["pairs"]
    worst = max(p["lambda_2"] / p["bound"] for p in pairs)
    note(record_property, pairs=len(pairs), worst_fraction_of_bound=worst, seconds=elapsed)
    assert len(pairs) == 12
    assert all(p["lambda_2"] <= p["bound"] + EIG_TOL for p in pairs)
    assert elapsed < 300


@pytest.mark.criterion(6, "complete_faces equals a brute-force scan of all 1,023,120 faces")
def test_c06_complete_faces(desk, record_property):
    t = time.perf_counter()
    scan = FaceScan(desk.complex_L)
    rep = check_complete_faces(desk, samples=1000, sizes=(1, 2, 3, 4), seed=6, scan=scan)
    elapsed = time.perf_counter() - t
    m = rep["measured"]
    note(record_property, samples=m["samples"], existing=m["existing"],
         disagreements=m["disagreements"], seconds=elapsed)
    assert m["faces_scanned"] == 1_023_120
    assert m["samples"] == 1000 and m["disagreements"] == 0
    assert 0 < m["existing"] < 1000
    assert elapsed < 600


@pytest.mark.criterion(7, "structured-graph audit on 1000 sampled pairs")
def test_c07_structure(desk, record_property):
    t = time.perf_counter()
    rep = check_structure(desk, pairs=1000, seed=7)
    elapsed = time.perf_counter() - t
    m = rep["measured"]
    note(record_property, nonempty_L=m["L"]["pair_audit"]["nonempty"],
         failures=m["L"]["pair_audit"]["failures"] + m["R"]["pair_audit"]["failures"],
         seconds=elapsed)
    for side in ("L", "R"):
        assert m[side]["biregularity"]["pass"]
        assert m[side]["pair_audit"]["pass"] and m[side]["pair_audit"]["partition"]
        assert m[side]["pair_audit"]["pairs"] == 1000
    assert elapsed < 120


@pytest.mark.criterion(8, "gadget certification at D = 1000, d = 32, delta = 0.1")
def test_c08_gadget(record_property):
    t = time.perf_counter()
    tables = {"L": uniform_special_sets(1000, math.sqrt(1000), 4, seed=1),
              "R": uniform_special_sets(1000, math.sqrt(1000), 4, seed=2)}
    H, rep = generate_certified({"D_L": 1000, "D_R": 1000, "d_L": 32, "d_R": 32}, seed=8,
                                max_retries=5, special_set_tables=tables,
                                caps={"delta": 0.1, "samples": 10_000})
    elapsed = time.perf_counter() - t
    side = rep["sides"]["L"]
    modes = {r["size"]: (r["mode"], r["tested"]) for r in side["lossless"]["records"]}
    note(record_property, worst_ratio=side["lossless"]["worst_ratio"],
         spread_constant=side["spread"]["measured_constant"], seconds=elapsed)
    assert rep["pass"] and H.degree_audit()
    assert modes[3] == ("exhaustive", math.comb(1000, 3))
    assert modes[4] == ("sampled", 10_000)
    assert "measured_constant" in rep["sides"]["R"]["spread"]
    assert elapsed < 300


@pytest.mark.criterion(9, "product audit: slots, biregularity, provenance")
def test_c09_product(Z, record_property):
    t = time.perf_counter()
    out = audit(Z)
    elapsed = time.perf_counter() - t
    note(record_property, slots=out["slots"], distinct=out["distinct_edges"], seconds=elapsed)
    assert out["slots"] == out["expected_slots"] == 24_360 * 360
    assert out["left_slot_degree"] == [12, 12] and out["right_slot_degree"] == [12, 12]
    assert out["provenance_exact"]
    assert elapsed < 120


@pytest.mark.criterion(10, "collision identity with an independent recount")
def test_c10_collision(desk, Z, record_property):
    t = time.perf_counter()
    sets = collision_sets(desk, 100, 8, seed=10)
    collided = 0
    for S in sets:
        m = collision_analysis(Z, S)["measured"]
        ref = recount(Z.G_L, Z.G_R, Z.H, S)
        assert (m["N_Z_S"], m["e_RED"], m["e_C"]) == (ref["N"], ref["e_RED"], ref["e_C"])
        assert m["N_Z_S"] >= m["e_RED"] - m["e_C"]
        collided += m["e_C"] > 0
    elapsed = time.perf_counter() - t
    note(record_property, sets=len(sets), with_collisions=collided, seconds=elapsed)
    assert len(sets) == 100 and max(len(S) for S in sets) == 8
    assert collided > 0
    assert elapsed < 300


@pytest.mark.criterion(11, "expansion floor at sizes 1-3 on the desk product")
def test_c11_expansion(Z, record_property):
    t = time.perf_counter()
    details = {}
    for side in ("L", "R"):
        rows = side_view(Z, side).rows
        srt = np.sort(rows, axis=1)
        distinct = 1 + (np.diff(srt, axis=1) != 0).sum(axis=1)
        assert (distinct == 12).all()  # every single vertex has d_L distinct neighbours
        prof = expansion_profile(Z, side, sizes=(1, 2, 3), seed=11)
        for s in (1, 2, 3):
            rec = prof.record(s)
            assert rec.mode.startswith("exhaustive")
            assert rec.min_unique > 0
            details[f"{side}{s}"] = round(rec.ratio, 4)
        assert prof.record(1).ratio == 1.0
    elapsed = time.perf_counter() - t
    note(record_property, ratios=details, seconds=elapsed)
    assert elapsed < 600


@pytest.mark.criterion(12, "heavy-face counts equal the full scan on 50 random U")
def test_c12_density(desk, record_property):
    t = time.perf_counter()
    rep = check_density(desk, samples=50, seed=12)
    elapsed = time.perf_counter() - t
    m = rep["measured"]
    note(record_property, samples=m["samples"], max_ratio_th2=m["max_ratio"]["2"],
         max_ratio_th3=m["max_ratio"]["3"], seconds=elapsed)
    assert m["size_limit"] == 290
    assert all(r["U_size"] <= 290 for r in m["rows"])
    assert all(r["count_3"] == r["scan_3"] and r["count_2"] == r["scan_2"] for r in m["rows"])
    assert rep["verdict"] == "pass"
    assert elapsed < 900


@pytest.mark.criterion(13, "orientation out-degree <= ceil(lambda) on 100 random graphs")
def test_c13_orientation(record_property):
    t = time.perf_counter()
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 80))
        p = float(rng.uniform(0.03, 0.5))
        upper = np.triu(rng.random((n, n)) < p, 1)
        A = (upper | upper.T).astype(float)
        lam = float(np.linalg.eigvalsh(A)[-1])  # dense oracle for the top eigenvalue
        o = orient_bounded_outdegree(csr_matrix(A), lam)
        assert o.max_out_degree <= math.ceil(lam)
        assert len(o.arcs) == int(upper.sum())
        worst = max(worst, o.max_out_degree / lam)
    elapsed = time.perf_counter() - t
    note(record_property, graphs=100, max_out_over_lambda=worst, seconds=elapsed)
    assert elapsed < 60


@pytest.mark.criterion(14, "free action of the group on the desk product")
def test_c14_free_action(Z, record_property):
    t = time.perf_counter()
    rep = free_action_audit(Z, samples=100, seed=14)
    elapsed = time.perf_counter() - t
    m = rep["measured"]
    note(record_property, fixed=m["fixed_vertices"], bijections=m["slot_bijection_passes"],
         c=m["c_measured"], seconds=elapsed)
    assert m["samples"] == 100 and m["slot_bijection_passes"] == 100
    assert m["fixed_vertices"] == 0 and m["signature_passes"] == 100
    assert m["group_order"] >= m["c_measured"] * m["n_vertices"] - 1e-9
    assert elapsed < 120


@pytest.mark.criterion(15, "two identical pipeline runs give byte-identical files")
def test_c15_determinism(tmp_path, record_property):
    verify = {"complete_faces_samples": 100, "pair_audit": 200, "collision_samples": 20,
              "density_samples": 3, "free_action_samples": 5}
    outs = []
    for name in ("a", "b"):
        cfg = BuildConfig(out_dir=str(tmp_path / name), verify=verify)
        run(cfg)
        outs.append(tmp_path / name)
    files = sorted(os.path.relpath(os.path.join(r, f), outs[0])
                   for r, _, fs in os.walk(outs[0]) for f in fs)
    other = sorted(os.path.relpath(os.path.join(r, f), outs[1])
                   for r, _, fs in os.walk(outs[1]) for f in fs)
    match, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], files, shallow=False)
    note(record_property, files=len(files), identical=len(match),
         manifests=sum(f.endswith("manifest.json") for f in match))
    assert files == other
    assert not mismatch and not errors and len(match) == len(files)
    assert "product.edges" in match and "MANIFEST.json" in match
