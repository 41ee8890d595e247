"""Named verification checks over a :class:`~expander_forge.pipeline.Build`.

Every check returns a report dict (see :func:`verify.make_report`).
"""

from __future__ import annotations

import math
import time

import numpy as np

from .cubical import DecoratedVertex, _support, bits_of, mask_of
from .parallel import spawn
from .product import audit as product_audit
from .verify import (collision_analysis, count_heavy_faces, expansion_profile, free_action_audit,
                     full_scan_heavy_faces, heavy_threshold, make_report, second_eigenvalue,
                     size_limit, skeleton_eigen_check, skeleton_from_faces, skeleton_graph)

EIGEN_TOLERANCE = 1e-4


def check_ramanujan(b, primes=None, **_) -> dict:
    """lambda_2 of X(p; q) against 2 sqrt(p) for each prime."""
    primes = primes or sorted(set(b.cfg.p_list_L) | set(b.cfg.p_list_R))
    rows, ok = [], True
    for p in primes:
        est = second_eigenvalue(b.cayley(p).adjacency(), 1e-9)
        bound = 2 * math.sqrt(p)
        good = est.value <= bound + EIGEN_TOLERANCE
        ok &= good
        rows.append({"p": p, "lambda_2": est.value, "residual": est.residual, "method": est.method,
                     "bound": bound, "pass": good})
    return make_report("ramanujan", {"q": b.q, "primes": list(primes), "tolerance": EIGEN_TOLERANCE},
                       {"graphs": rows}, {"lambda_2": "2*sqrt(p)"}, ok)


def ramanujan_for_graph(graph, p: int) -> dict:
    est = second_eigenvalue(graph, 1e-9)
    bound = 2 * math.sqrt(p)
    return make_report("ramanujan", {"p": p, "tolerance": EIGEN_TOLERANCE},
                       {"lambda_2": est.value, "residual": est.residual, "method": est.method},
                       {"lambda_2": bound}, est.value <= bound + EIGEN_TOLERANCE)


def check_expanding(b, sides=("L", "R"), **_) -> dict:
    """Second singular value of every type-pair graph I_{y, y xor x}, x != 0."""
    rows, ok = [], True
    for side in sides:
        X = b.complex_L if side == "L" else b.complex_R
        k = X.k
        for x in range(1, 1 << k):
            d_x = math.prod(X.sizes[i] for i in _support(x, k))
            bound = 2 ** k * math.sqrt(d_x)
            # the edge set does not depend on y, one estimate serves every y
            est = second_eigenvalue(X.type_pair_graph(0, x), 1e-9, bipartite=True)
            good = est.value <= bound + EIGEN_TOLERANCE
            ok &= good
            for y in range(1 << k):
                rows.append({"side": side, "y": bits_of(y, k), "x": bits_of(x, k), "d_x": d_x,
                             "lambda_2": est.value, "residual": est.residual, "bound": bound,
                             "pass": good})
    return make_report("expanding_complex", {"q": b.q, "k": b.cfg.k, "tolerance": EIGEN_TOLERANCE},
                       {"pairs": rows}, {"lambda_2": "2^k * sqrt(d_x)"}, ok)


# --- face completion ---------------------------------------------------------------

class FaceScan:
    """Brute-force face lookups: every face's corner at every type."""

    def __init__(self, X):
        self.X = X
        self.tables = np.stack([X.corner_table(x).ravel() for x in range(1 << X.k)])

    def faces_with(self, U) -> np.ndarray:
        hit = np.ones(self.tables.shape[1], dtype=bool)
        for v in U:
            hit &= self.tables[mask_of(v.x)] == v.g
        return np.flatnonzero(hit)

    def compare(self, U) -> dict:
        """complete_faces(U) against the scan: existence, uniqueness, extension count."""
        X = self.X
        faces = self.faces_with(U)
        masks = [mask_of(v.x) for v in U]
        spread = 0
        for m in masks[1:]:
            spread |= m ^ masks[0]
        free = _support(spread, X.k)
        sub_types = []
        for z in range(1 << len(free)):
            x = masks[0] & ~spread
            for s, c in enumerate(free):
                if z >> s & 1:
                    x |= 1 << c
            sub_types.append(x)
        corners = self.tables[np.ix_(sub_types, faces)]
        unique = bool(len(faces) == 0 or (corners == corners[:, :1]).all())
        face, ext = X.complete_faces(U)
        agree = (face is None) == (len(faces) == 0) and ext == len(faces) and unique
        if face is not None and len(faces):
            got = X.subcube_corners(face)
            agree &= all(got[x] == int(corners[t, 0]) for t, x in enumerate(sub_types))
        return {"size": len(U), "scan_faces": len(faces), "extension_count": ext,
                "exists": face is not None, "unique": unique, "agree": bool(agree)}


def random_decorated_set(X, size: int, rng, from_face: bool):
    k = X.k
    types = rng.choice(1 << k, size=min(size, 1 << k), replace=False)
    if from_face:
        base = int(rng.integers(X.group.order))
        r = int(rng.integers(X.n_sig))
        gs = X.group.mul(base, X.corner_offsets[types, r])
    else:
        gs = rng.integers(X.group.order, size=len(types))
    return [DecoratedVertex(int(g), bits_of(int(t), k)) for g, t in zip(np.atleast_1d(gs), types)]


def check_complete_faces(b, samples=None, sizes=(1, 2, 3, 4), seed=None, scan=None, **_) -> dict:
    o = b.cfg.verify_opts
    samples = o["complete_faces_samples"] if samples is None else samples
    seed = o["seed"] if seed is None else seed
    X = b.complex_L
    scan = scan or FaceScan(X)
    rng = np.random.default_rng(spawn(seed, 1, key=[11])[0])
    rows = []
    for t in range(samples):
        size = int(sizes[t % len(sizes)])
        rows.append(scan.compare(random_decorated_set(X, size, rng, from_face=t % 2 == 0)))
    bad = [r for r in rows if not r["agree"]]
    measured = {"samples": len(rows), "faces_scanned": scan.tables.shape[1],
                "existing": sum(r["exists"] for r in rows), "disagreements": len(bad),
                "failures": bad[:5]}
    return make_report("complete_faces", {"samples": samples, "sizes": list(sizes), "seed": seed},
                       measured, {"disagreements": 0}, not bad)


# --- stages ------------------------------------------------------------------------

def check_structure(b, pairs=None, seed=None, **_) -> dict:
    o = b.cfg.verify_opts
    pairs = o["pair_audit"] if pairs is None else pairs
    seed = o["seed"] if seed is None else seed
    sides, ok = {}, True
    for side, G in (("L", b.graph_L), ("R", b.graph_R)):
        bireg = G.biregularity_audit()
        pa = G.pair_audit(pairs, seed)
        sides[side] = {"biregularity": bireg, "pair_audit": pa,
                       "special_sets": G.special_set_report(), "n_faces": G.n_faces,
                       "n_middle": G.n_middle, "D": G.D, "k": G.k}
        ok &= bireg["pass"] and pa["pass"]
    return make_report("structured_graph", {"pairs": pairs, "seed": seed}, sides,
                       {"biregular": "(k, D)", "pair_failures": 0}, ok)


def check_gadget(b, **_) -> dict:
    H, cert = b.gadget
    cert = cert or {}
    measured = {"degree_audit": H.degree_audit(), "method": H.method, "certificate": cert}
    return make_report("gadget", {"D_L": H.D_L, "D_R": H.D_R, "d_L": H.d_L, "d_R": H.d_R,
                                  "caps": b.cfg.gadget_caps},
                       measured, {"delta": cert.get("delta")},
                       bool(H.degree_audit() and cert.get("pass", False)))


def check_product(b, **_) -> dict:
    out = product_audit(b.product)
    return make_report("product", {"gadget_edges": out["gadget_edges"]}, out,
                       {"slots": out["expected_slots"], "degrees": out["expected_degrees"]},
                       out["pass"])


def clustered_set(G, size: int, rng) -> np.ndarray:
    """A set of faces grown through shared middle vertices, so collisions occur."""
    S = [int(rng.integers(G.n_faces))]
    while len(S) < size:
        f = S[int(rng.integers(len(S)))]
        u = G.face_to_middle[f, int(rng.integers(G.k))]
        S.append(int(G.middle_to_face[u, int(rng.integers(G.D))]))
        S = list(dict.fromkeys(S))
    return np.array(S, dtype=np.int64)


def colliding_set(Z, size: int, rng) -> np.ndarray:
    """Faces of S reaching one right vertex r through each middle neighbour of r."""
    G_L, G_R, H = Z.G_L, Z.G_R, Z.H
    S: list[int] = []
    while len(S) < size:
        r = int(rng.integers(G_R.n_faces))
        for u in G_R.face_to_middle[r]:
            j = int(np.flatnonzero(G_R.middle_to_face[u] == r)[0])
            i = int(rng.choice(H.right_adj[j]))
            S.append(int(G_L.middle_to_face[u, i]))
        S = list(dict.fromkeys(S))
    return np.array(S[:size], dtype=np.int64)


def collision_sets(b, samples: int, max_size: int, seed) -> list[np.ndarray]:
    """Uniform, clustered and collision-seeded sets, cycling through sizes 1..max_size."""
    rng = np.random.default_rng(spawn(seed, 1, key=[13])[0])
    G = b.graph_L
    out = []
    for t in range(samples):
        size = 1 + t % max_size
        kind = t % 4
        if kind == 0:
            out.append(rng.choice(G.n_faces, size=size, replace=False))
        elif kind == 1:
            out.append(clustered_set(G, size, rng))
        else:
            out.append(colliding_set(b.product, size, rng))
    return out


def check_collision(b, samples=None, max_size=None, threshold=None, seed=None, **_) -> dict:
    o = b.cfg.verify_opts
    samples = o["collision_samples"] if samples is None else samples
    max_size = o["collision_max_size"] if max_size is None else max_size
    threshold = o["collision_threshold"] if threshold is None else threshold
    seed = o["seed"] if seed is None else seed
    Z = b.product
    rows = []
    for S in collision_sets(b, samples, max_size, seed):
        m = collision_analysis(Z, S, threshold)["measured"]
        rows.append({key: m[key] for key in ("S_size", "N_Z_S", "e_RED", "e_C", "identity_holds",
                                             "equality_expected", "equality_holds",
                                             "max_red_degree", "U_h_size")})
    ok = all(r["identity_holds"] and (r["equality_holds"] or not r["equality_expected"])
             for r in rows)
    measured = {"samples": len(rows), "identity_passes": sum(r["identity_holds"] for r in rows),
                "sets_with_collisions": sum(r["e_C"] > 0 for r in rows),
                "min_slack": min(r["N_Z_S"] - (r["e_RED"] - r["e_C"]) for r in rows),
                "rows": rows}
    return make_report("collision", {"samples": samples, "max_size": max_size,
                                     "degree_threshold": threshold, "seed": seed},
                       measured, {"N_Z_S": ">= e_RED - e_C"}, ok)


def check_expansion(b, sizes=None, seed=None, exhaustive_cap=None, **_) -> dict:
    o = b.cfg.verify_opts
    sizes = o["expansion_sizes"] if sizes is None else sizes
    seed = o["seed"] if seed is None else seed
    cap = o["exhaustive_cap"] if exhaustive_cap is None else exhaustive_cap
    profiles, ok = {}, True
    for side in ("L", "R"):
        prof = expansion_profile(b.product, side, sizes, seed=seed, exhaustive_cap=cap)
        profiles[side] = prof.as_dict()
        if 1 in sizes:
            ok &= prof.record(1).ratio == 1.0
        ok &= all(r.min_unique > 0 for r in prof.records if r.size <= 3)
    return make_report("expansion", {"sizes": list(sizes), "seed": seed, "exhaustive_cap": cap},
                       profiles, {"size_1_ratio": 1.0, "unique_neighbors": "> 0 for |S| <= 3"}, ok)


def random_middle_set(X, C, size: int, rng) -> np.ndarray:
    return rng.choice(X.group.order * len(C), size=size, replace=False)


def check_density(b, samples=None, seed=None, **_) -> dict:
    o = b.cfg.verify_opts
    samples = o["density_samples"] if samples is None else samples
    seed = o["seed"] if seed is None else seed
    X, C = b.complex_L, b.code
    limit = size_limit(X, C)
    Dbar = X.n_sig
    rng = np.random.default_rng(spawn(seed, 1, key=[17])[0])
    thresholds = sorted({heavy_threshold(C.k), 2})
    rows, ok = [], True
    for t in range(samples):
        U = random_middle_set(X, C, int(rng.integers(1, limit + 1)), rng)
        row = {"U_size": len(U)}
        for th in thresholds:
            fast = count_heavy_faces(X, C, U, th).count
            full = full_scan_heavy_faces(X, C, U, th)
            row[f"count_{th}"] = fast
            row[f"scan_{th}"] = full
            row[f"ratio_{th}"] = fast / (Dbar ** 0.625 * len(U))
            ok &= fast == full
        rows.append(row)
    th = heavy_threshold(C.k)
    measured = {"samples": len(rows), "size_limit": limit, "D_bar": Dbar, "thresholds": thresholds,
                "max_ratio": {str(t): max(r[f"ratio_{t}"] for r in rows) for t in thresholds},
                "heavy_faces_total": sum(r[f"count_{th}"] for r in rows), "rows": rows}
    return make_report("density", {"samples": samples, "seed": seed}, measured,
                       {"count": "== full scan"}, ok)


def check_skeleton(b, fraction=None, seed=None, **_) -> dict:
    o = b.cfg.verify_opts
    fraction = o["skeleton_fraction"] if fraction is None else fraction
    seed = o["seed"] if seed is None else seed
    rng = np.random.default_rng(spawn(seed, 1, key=[19])[0])
    out, ok = {}, True
    for side, G in (("L", b.graph_L), ("R", b.graph_R)):
        A = skeleton_graph(G)
        same = (A != skeleton_from_faces(G)).nnz == 0
        size = max(1, int(fraction * G.n_middle))
        U = rng.choice(G.n_middle, size=size, replace=False)
        rep = skeleton_eigen_check(G, U, fraction, skeleton=A)
        out[side] = {"matches_faces": bool(same), **rep["measured"], "bound": rep["bound"],
                     "verdict": rep["verdict"]}
        ok &= same and rep["verdict"] == "pass"
    return make_report("skeleton", {"fraction": fraction, "seed": seed}, out,
                       {"induced_top": "lambda_ambient + delta * d"}, ok)


def check_free_action(b, samples=None, seed=None, **_) -> dict:
    o = b.cfg.verify_opts
    samples = o["free_action_samples"] if samples is None else samples
    seed = o["seed"] if seed is None else seed
    return free_action_audit(b.product, samples, seed)


CHECKS = {
    "ramanujan": check_ramanujan,
    "expanding": check_expanding,
    "complete-faces": check_complete_faces,
    "structure": check_structure,
    "gadget": check_gadget,
    "product": check_product,
    "collision": check_collision,
    "expansion": check_expansion,
    "density": check_density,
    "skeleton": check_skeleton,
    "free-action": check_free_action,
}


def run_checks(b, names, log=None) -> dict:
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    out = {}
    for name in names:
        t0 = time.perf_counter()
        out[name] = CHECKS[name](b)
        if log:
            log(f"{name}: {out[name]['verdict']} ({time.perf_counter() - t0:.1f}s)")
    return out
