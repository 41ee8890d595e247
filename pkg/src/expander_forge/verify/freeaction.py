"""Audit of the left group action on the line product."""

from __future__ import annotations

import numpy as np

from ..cubical import Face, mask_of
from ..parallel import map_items
from ..product import ProductGraph
from .reports import make_report


def _audit_one(Z: ProductGraph, gamma: int, faces_L, faces_R) -> dict:
    G_L, G_R = Z.G_L, Z.G_R
    e = Z.H.n_edges
    u = np.arange(Z.n_middle, dtype=np.int64)
    gu = G_L.act_middle(gamma, u)
    # slot (u, t) -> slot (gamma u, t) is a bijection iff u -> gamma u is
    perm_ok = bool((np.bincount(gu, minlength=Z.n_middle) == 1).all())
    image = (gu[:, None] * e + np.arange(e)[None, :]).ravel()
    left_ok = bool(np.array_equal(Z.left[image], G_L.act_faces(gamma, Z.left)))
    right_ok = bool(np.array_equal(Z.right[image], G_R.act_faces(gamma, Z.right)))
    all_L = np.arange(Z.n_left, dtype=np.int64)
    all_R = np.arange(Z.n_right, dtype=np.int64)
    fixed = int((G_L.act_faces(gamma, all_L) == all_L).sum()
                + (G_R.act_faces(gamma, all_R) == all_R).sum()
                + (gu == u).sum())
    sig_ok = True
    for G, faces in ((G_L, faces_L), (G_R, faces_R)):
        moved = G.act_faces(gamma, faces)
        sig_ok &= bool((G.face_signature(moved) == G.face_signature(faces)).all())
        X = G.complex
        for f, m in zip(faces.tolist(), moved.tolist()):
            b, i = divmod(f, G.D)
            mb, mi = divmod(m, G.D)
            gens = tuple(int(a) for a in G.signatures[i])
            for w in G.code.words:
                c0 = X.corner(Face(b, gens), mask_of(w))
                c1 = X.corner(Face(mb, tuple(int(a) for a in G.signatures[mi])), mask_of(w))
                sig_ok &= c1 == int(G.group.mul(gamma, c0))
    return {"gamma": gamma, "slot_bijection": perm_ok and left_ok and right_ok,
            "fixed_vertices": fixed, "signature_preserved": bool(sig_ok)}


def free_action_audit(Z: ProductGraph, samples: int = 100, seed: int = 0,
                      faces_per_gamma: int = 8) -> dict:
    """Sampled non-identity gamma: edge bijection, no fixed vertices, signatures kept."""
    rng = np.random.default_rng(seed)
    group = Z.G_L.group
    others = np.setdiff1d(np.arange(group.order), [group.identity])
    gammas = rng.choice(others, size=min(samples, len(others)), replace=False)
    jobs = [(int(g), rng.integers(Z.n_left, size=faces_per_gamma),
             rng.integers(Z.n_right, size=faces_per_gamma)) for g in gammas]
    rows = map_items(lambda job: _audit_one(Z, *job), jobs)
    bij = sum(r["slot_bijection"] for r in rows)
    fixed = sum(r["fixed_vertices"] for r in rows)
    sig = sum(r["signature_preserved"] for r in rows)
    n_Z = Z.n_left + Z.n_right
    measured = {
        "samples": len(rows), "slot_bijection_passes": bij, "fixed_vertices": fixed,
        "signature_passes": sig, "group_order": group.order, "n_vertices": n_Z,
        "c_measured": group.order / n_Z, "c_left": group.order / Z.n_left,
        "failures": [r for r in rows if not (r["slot_bijection"] and r["signature_preserved"])
                     or r["fixed_vertices"]][:5],
    }
    ok = bij == len(rows) and fixed == 0 and sig == len(rows)
    return make_report("free_action", {"samples": samples, "seed": seed}, measured,
                       {"fixed_vertices": 0}, ok)
