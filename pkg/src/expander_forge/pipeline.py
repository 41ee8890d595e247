"""Build configuration and the staged construction.

A :class:`BuildConfig` is a flat JSON object whose keys mirror the field
names below. :class:`Build` materializes each stage lazily and caches it;
``write_*`` helpers put the stage artifacts and manifests on disk.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import io
from .basegraph import build_coded_incidence, trim_by_signature
from .codes import hadamard
from .cubical import validate_generators
from .gadget import GadgetGraph, generate_certified
from .lps import build_cayley, generator_set
from .numtheory import PrimeParams, find_modulus_prime, prime_params_violation
from .product import line_product
from .psl2 import PSL2Group, group_order

DEFAULT_VERIFY = {
    "seed": 0,
    "checks": ["ramanujan", "expanding", "complete-faces", "structure", "gadget", "product",
               "collision", "expansion", "density", "skeleton", "free-action"],
    "complete_faces_samples": 1000,
    "pair_audit": 1000,
    "collision_samples": 100,
    "collision_max_size": 8,
    "collision_threshold": None,
    "expansion_sizes": [1, 2, 3],
    "exhaustive_cap": 4,
    "density_samples": 50,
    "skeleton_fraction": 0.01,
    "free_action_samples": 100,
}

DEFAULT_GADGET = {"delta": 0.25, "cap": 3, "samples": 10_000, "max_retries": 10,
                  "method": "auto", "spread_samples": 200}


class ConfigError(ValueError):
    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass
class BuildConfig:
    k: int = 2
    p_list_L: list = field(default_factory=lambda: [5, 13])
    p_list_R: list = field(default_factory=lambda: [13, 5])
    q: int | None = 29
    q_policy: str = "scan"
    D_L: int = 60
    D_R: int = 60
    d_L: int = 6
    d_R: int = 6
    gadget_seed: int = 7
    gadget: dict = field(default_factory=dict)
    trim_policy: str = "lex"
    verify: dict = field(default_factory=dict)
    out_dir: str = "artifacts"

    # --- serialization -------------------------------------------------
    @classmethod
    def from_dict(cls, data: dict) -> "BuildConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError("BuildConfig", f"unknown keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "BuildConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def dump(self, path) -> None:
        io.write_json(path, self.to_dict())

    @property
    def gadget_caps(self) -> dict:
        return {**DEFAULT_GADGET, **self.gadget}

    @property
    def verify_opts(self) -> dict:
        return {**DEFAULT_VERIFY, **self.verify}

    # --- validation ----------------------------------------------------
    def resolved_q(self) -> int:
        if self.q is not None:
            return int(self.q)
        primes = sorted(set(self.p_list_L) | set(self.p_list_R))
        return find_modulus_prime(primes, mode=self.q_policy)

    def validate(self) -> "BuildConfig":
        """Check every cross-field invariant; returns self with q resolved."""
        k = self.k
        if k < 2 or k & (k - 1):
            raise ConfigError("k", f"k={k} must be a power of two, at least 2")
        for name in ("p_list_L", "p_list_R"):
            plist = getattr(self, name)
            if len(plist) != k:
                raise ConfigError(name, f"has {len(plist)} primes, expected k={k}")
            if len(set(plist)) != k:
                raise ConfigError(name, "primes must be distinct")
        if self.q_policy not in ("progression", "scan"):
            raise ConfigError("q_policy", f"unknown policy {self.q_policy!r}")
        q = self.resolved_q()
        for name in ("p_list_L", "p_list_R"):
            problem = prime_params_violation(sorted(getattr(self, name)), q)
            if problem:
                raise ConfigError(f"PrimeParams({name})", problem)
        if self.D_L * self.d_L != self.D_R * self.d_R:
            raise ConfigError("D_L*d_L = D_R*d_R",
                              f"{self.D_L}*{self.d_L} != {self.D_R}*{self.d_R}")
        for D, plist, name in ((self.D_L, self.p_list_L, "D_L"), (self.D_R, self.p_list_R, "D_R")):
            full = math.prod(p + 1 for p in plist)
            if not 1 <= D <= full:
                raise ConfigError(name, f"{name}={D} must lie in [1, {full}]")
        if not (1 <= self.d_L <= self.D_R and 1 <= self.d_R <= self.D_L):
            raise ConfigError("gadget degrees", "d_L <= D_R and d_R <= D_L are required")
        if self.trim_policy != "lex":
            raise ConfigError("trim_policy", f"only 'lex' is supported, got {self.trim_policy!r}")
        unknown = set(self.verify) - set(DEFAULT_VERIFY)
        if unknown:
            raise ConfigError("verify", f"unknown keys {sorted(unknown)}")
        unknown = set(self.gadget) - set(DEFAULT_GADGET)
        if unknown:
            raise ConfigError("gadget", f"unknown keys {sorted(unknown)}")
        self.q = q
        return self


class Build:
    """Lazily built stages of one configuration."""

    def __init__(self, cfg: BuildConfig):
        self.cfg = cfg.validate()
        self.q = int(cfg.q)
        self._gadget = None

    @cached_property
    def group(self) -> PSL2Group:
        return PSL2Group(self.q)

    def generator_indices(self, p: int) -> np.ndarray:
        return generator_set(p, self.q).indices(self.group)

    @cached_property
    def complex_L(self):
        return validate_generators(self.group, [self.generator_indices(p) for p in self.cfg.p_list_L])

    @cached_property
    def complex_R(self):
        return validate_generators(self.group, [self.generator_indices(p) for p in self.cfg.p_list_R])

    @cached_property
    def code(self):
        return hadamard(self.cfg.k)

    @cached_property
    def graph_L(self):
        return trim_by_signature(build_coded_incidence(self.complex_L, self.code), self.cfg.D_L)

    @cached_property
    def graph_R(self):
        return trim_by_signature(build_coded_incidence(self.complex_R, self.code), self.cfg.D_R)

    def special_set_tables(self) -> dict:
        return {"L": self.graph_L.gadget_tables(), "R": self.graph_R.gadget_tables()}

    def set_gadget(self, H: GadgetGraph, report: dict | None = None) -> None:
        if (H.D_L, H.D_R, H.d_L, H.d_R) != (self.cfg.D_L, self.cfg.D_R, self.cfg.d_L, self.cfg.d_R):
            raise ConfigError("gadget", "gadget parameters do not match the configuration")
        self._gadget = (H, report)
        self.__dict__.pop("product", None)

    @property
    def gadget(self) -> tuple[GadgetGraph, dict | None]:
        if self._gadget is None:
            caps = self.cfg.gadget_caps
            params = {"D_L": self.cfg.D_L, "D_R": self.cfg.D_R, "d_L": self.cfg.d_L,
                      "d_R": self.cfg.d_R, "method": caps["method"]}
            cert_caps = {key: caps[key] for key in ("delta", "cap", "samples", "spread_samples")}
            self._gadget = generate_certified(params, self.cfg.gadget_seed, caps["max_retries"],
                                              self.special_set_tables(), cert_caps)
        return self._gadget

    @cached_property
    def product(self):
        return line_product(self.graph_L, self.graph_R, self.gadget[0])

    def cayley(self, p: int):
        return build_cayley(PrimeParams((p,), self.q), self.group)


# --- artifacts ----------------------------------------------------------------

def _out(cfg: BuildConfig, *parts) -> str:
    path = os.path.join(cfg.out_dir, *parts)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    return path


def _inputs(cfg: BuildConfig, *keys) -> dict:
    data = cfg.to_dict()
    return {key: data[key] for key in keys}


def write_primes(b: Build) -> dict:
    cfg = b.cfg
    info = {"q": b.q, "group_order": group_order(b.q), "k": cfg.k,
            "p_list_L": cfg.p_list_L, "p_list_R": cfg.p_list_R,
            "generator_sizes_L": [p + 1 for p in cfg.p_list_L],
            "generator_sizes_R": [p + 1 for p in cfg.p_list_R]}
    path = _out(cfg, "primes.json")
    digest = io.write_json(path, info)
    io.write_manifest(_out(cfg, "primes.manifest.json"), "primes",
                      _inputs(cfg, "k", "p_list_L", "p_list_R", "q", "q_policy"), None,
                      {path: digest})
    return info


def write_lps(cfg: BuildConfig, p: int, q: int, group: PSL2Group | None = None) -> str:
    X = build_cayley(PrimeParams((p,), q), group)
    name = f"lps_{p}_{q}"
    el = io.EdgeList("cayley", X.group_order, 0, X.degree, 0, X.edges())
    path = _out(cfg, name + ".edges")
    digest = io.write_edgelist(path, el)
    io.write_manifest(_out(cfg, name + ".manifest.json"), "lps", {"p": p, "q": q}, None,
                      {path: digest})
    return path


def write_complex(b: Build, side: str) -> dict:
    X = b.complex_L if side == "L" else b.complex_R
    plist = b.cfg.p_list_L if side == "L" else b.cfg.p_list_R
    info = {"side": side, "k": X.k, "q": b.q, "p_list": plist, "sizes": list(X.sizes),
            "face_count": X.face_count, "group_order": X.group.order,
            "generators": [s.tolist() for s in X.sets]}
    path = _out(b.cfg, f"complex_{side}.json")
    digest = io.write_json(path, info)
    io.write_manifest(_out(b.cfg, f"complex_{side}.manifest.json"), "complex",
                      {"side": side, "p_list": plist, "q": b.q}, None, {path: digest})
    return info


def basegraph_edgelist(G) -> io.EdgeList:
    f2m = G.face_to_middle
    faces = np.repeat(np.arange(G.n_faces, dtype=np.int64), G.k)
    return io.EdgeList("basegraph", G.n_faces, G.n_middle, G.k, G.D,
                       np.stack([faces, f2m.ravel()], axis=1))


def write_basegraph(b: Build, side: str) -> str:
    G = b.graph_L if side == "L" else b.graph_R
    path = _out(b.cfg, f"basegraph_{side}.edges")
    digest = io.write_edgelist(path, basegraph_edgelist(G))
    sidecar = {"parts": G.k, "part_size": G.group.order,
               "middle_numbering": "codeword_index * group_order + group_index",
               "face_numbering": "base * D + signature_rank",
               "codewords": G.code.codewords,
               "signatures": G.signatures.tolist(),
               "special_sets": {f"{a}-{b_}": {"labels": t.labels.tolist(), "partner": t.partner.tolist()}
                                for (a, b_), t in sorted(G.special_sets.items())}}
    side_path = _out(b.cfg, f"basegraph_{side}.parts.json")
    side_digest = io.write_json(side_path, sidecar)
    plist = b.cfg.p_list_L if side == "L" else b.cfg.p_list_R
    io.write_manifest(_out(b.cfg, f"basegraph_{side}.manifest.json"), "basegraph",
                      {"side": side, "p_list": plist, "q": b.q, "k": b.cfg.k, "D": G.D,
                       "trim_policy": b.cfg.trim_policy}, None,
                      {path: digest, side_path: side_digest})
    return path


def gadget_from_edgelist(el: io.EdgeList, seed=None) -> GadgetGraph:
    if el.kind != "gadget":
        raise ValueError(f"expected a gadget edge list, got {el.kind!r}")
    g = GadgetGraph(el.n_left, el.n_right, el.d_left, el.d_right, io.sort_edges(el.edges), seed,
                    "file")
    if not g.degree_audit():
        raise ValueError("gadget file fails the degree audit")
    return g


def write_gadget(b: Build) -> str:
    H, report = b.gadget
    path = _out(b.cfg, "gadget.edges")
    digest = io.write_edgelist(path, io.EdgeList("gadget", H.D_L, H.D_R, H.d_L, H.d_R, H.edges))
    rpath = _out(b.cfg, "gadget.certificate.json")
    rdigest = io.write_json(rpath, report or {})
    io.write_manifest(_out(b.cfg, "gadget.manifest.json"), "gadget",
                      _inputs(b.cfg, "D_L", "D_R", "d_L", "d_R", "gadget", "p_list_L", "p_list_R", "q"),
                      b.cfg.gadget_seed, {path: digest, rpath: rdigest})
    return path


def product_edgelist(Z, dedupe: bool = False) -> io.EdgeList:
    kind = "product-dedup" if dedupe else "product"
    edges = Z.dedup_edges() if dedupe else Z.slot_edges_sorted()
    return io.EdgeList(kind, Z.n_left, Z.n_right, Z.left_degree, Z.right_degree, edges)


def write_product(b: Build, dedupe: bool = False) -> str:
    Z = b.product
    name = "product_dedup" if dedupe else "product"
    path = _out(b.cfg, name + ".edges")
    digest = io.write_edgelist(path, product_edgelist(Z, dedupe))
    cfgd = b.cfg.to_dict()
    inputs = {key: cfgd[key] for key in ("k", "p_list_L", "p_list_R", "q", "D_L", "D_R", "d_L", "d_R",
                                          "gadget", "trim_policy")}
    inputs["gadget_sha256"] = io.input_digest({"edges": b.gadget[0].edges.tolist()}, None)
    io.write_manifest(_out(b.cfg, name + ".manifest.json"), "product", inputs, b.cfg.gadget_seed,
                      {path: digest})
    return path


def write_report(cfg: BuildConfig, name: str, report: dict) -> str:
    path = _out(cfg, "reports", f"{name}.json")
    io.write_json(path, report)
    return path


def run(cfg: BuildConfig, checks=None, dedupe: bool = True) -> dict:
    """Every stage plus the requested checks; returns {artifact: sha256}."""
    from .checks import run_checks

    b = Build(cfg)
    write_primes(b)
    for p in sorted(set(cfg.p_list_L) | set(cfg.p_list_R)):
        write_lps(cfg, p, b.q, b.group)
    for side in ("L", "R"):
        write_complex(b, side)
        write_basegraph(b, side)
    write_gadget(b)
    write_product(b)
    if dedupe:
        write_product(b, dedupe=True)
    checks = cfg.verify_opts["checks"] if checks is None else checks
    reports = run_checks(b, checks)
    for name, rep in reports.items():
        write_report(cfg, name, rep)
    hashes = {}
    for root, _, files in os.walk(cfg.out_dir):
        for f in sorted(files):
            path = os.path.join(root, f)
            hashes[os.path.relpath(path, cfg.out_dir)] = io.sha256_file(path)
    config = cfg.to_dict()
    del config["out_dir"]  # where the files went is not an input
    io.write_json(os.path.join(cfg.out_dir, "MANIFEST.json"),
                  {"version": io.MANIFEST_VERSION, "config": config, "files": hashes})
    return hashes


__all__ = ["BuildConfig", "Build", "ConfigError", "run"]
