"""``expander-forge`` command line.

Every subcommand reads a JSON config (``--config``) and/or flags, writes
its artifact into ``--out`` together with a ``*.manifest.json``, and can
pick up earlier artifacts from the same directory.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io
from .checks import CHECKS, ramanujan_for_graph, run_checks
from .numtheory import find_modulus_prime
from .pipeline import (Build, BuildConfig, ConfigError, gadget_from_edgelist, product_edgelist,
                       write_basegraph, write_complex, write_gadget, write_lps, write_primes,
                       write_product)
from .verify import to_json

log = logging.getLogger("expander_forge")


def _config(args) -> BuildConfig:
    cfg = BuildConfig.load(args.config) if args.config else BuildConfig()
    for name in ("k", "q", "D_L", "D_R", "d_L", "d_R", "gadget_seed", "q_policy"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    for name in ("p_list_L", "p_list_R"):
        val = getattr(args, name, None)
        if val:
            setattr(cfg, name, val)
    if getattr(args, "seed", None) is not None:
        cfg.verify = {**cfg.verify, "seed": args.seed}
    if args.out:
        cfg.out_dir = args.out
    return cfg


def _build(args) -> Build:
    b = Build(_config(args).validate())
    os.makedirs(b.cfg.out_dir, exist_ok=True)
    gadget_file = os.path.join(b.cfg.out_dir, "gadget.edges")
    if getattr(args, "reuse_gadget", False) and os.path.exists(gadget_file):
        cert_file = os.path.join(b.cfg.out_dir, "gadget.certificate.json")
        cert = io.read_json(cert_file) if os.path.exists(cert_file) else None
        b.set_gadget(gadget_from_edgelist(io.read_edgelist(gadget_file), b.cfg.gadget_seed), cert)
        log.info("using %s", gadget_file)
    return b


def cmd_primes(args) -> int:
    b = _build(args)
    print(io.canonical_json(write_primes(b)), end="")
    return 0


def cmd_lps(args) -> int:
    cfg = _config(args)
    q = args.q if args.q is not None else find_modulus_prime([args.p], mode=cfg.q_policy)
    print(write_lps(cfg, args.p, q))
    return 0


def cmd_complex(args) -> int:
    b = _build(args)
    for side in args.side:
        info = write_complex(b, side)
        print(f"complex_{side}: k={info['k']} faces={info['face_count']} sizes={info['sizes']}")
    return 0


def cmd_basegraph(args) -> int:
    b = _build(args)
    for side in args.side:
        print(write_basegraph(b, side))
    return 0


def cmd_gadget(args) -> int:
    b = _build(args)
    print(write_gadget(b))
    return 0


def cmd_product(args) -> int:
    args.reuse_gadget = True
    b = _build(args)
    print(write_product(b, dedupe=args.dedupe))
    return 0


def _resolve_input(out_dir: str, name: str) -> str:
    for cand in (name, os.path.join(out_dir, name), os.path.join(out_dir, name + ".edges")):
        if os.path.isfile(cand):
            return cand
    raise FileNotFoundError(f"no artifact {name!r} in {out_dir!r}")


def cmd_verify(args) -> int:
    checks = args.check or []
    if args.input:
        # single-artifact checks on a file
        path = _resolve_input(args.out or "artifacts", args.input)
        el = io.read_edgelist(path)
        if checks not in ([], ["ramanujan"]):
            raise SystemExit("--input supports only --check ramanujan")
        if el.kind != "cayley":
            raise SystemExit(f"{path}: ramanujan check needs a cayley edge list, got {el.kind}")
        report = ramanujan_for_graph(io.edgelist_matrix(el), el.d_left - 1)
        report["parameters"]["input"] = os.path.basename(path)
        reports = {"ramanujan_" + os.path.basename(path).removesuffix(".edges"): report}
    else:
        args.reuse_gadget = True
        b = _build(args)
        names = checks or b.cfg.verify_opts["checks"]
        reports = run_checks(b, names, log=log.info)
    out_dir = args.out or "artifacts"
    failed = False
    for name, rep in reports.items():
        os.makedirs(os.path.join(out_dir, "reports"), exist_ok=True)
        path = os.path.join(out_dir, "reports", f"{name}.json")
        io.write_json(path, rep)
        failed |= rep["verdict"] == "fail"
        if args.quiet:
            print(f"{name}: {rep['verdict']}")
        else:
            print(to_json(rep), end="")
    return 1 if failed else 0


def cmd_export(args) -> int:
    if args.format != "edgelist":
        raise SystemExit(f"unsupported format {args.format!r}")
    if args.input:
        el = io.read_edgelist(args.input)
    else:
        args.reuse_gadget = True
        el = product_edgelist(_build(args).product)
    if args.dedupe:
        el = io.dedupe(el)
    digest = io.write_edgelist(args.output, el)
    io.write_manifest(args.output + ".manifest.json", "export",
                      {"input": os.path.basename(args.input) if args.input else "product",
                       "dedupe": args.dedupe, "format": args.format}, None, {args.output: digest})
    print(args.output)
    return 0


def cmd_run(args) -> int:
    from .pipeline import run

    cfg = _config(args)
    hashes = run(cfg, args.check or None, dedupe=not args.no_dedupe)
    failed = []
    for name in args.check or cfg.verify_opts["checks"]:
        rep = io.read_json(os.path.join(cfg.out_dir, "reports", f"{name}.json"))
        print(f"{name}: {rep['verdict']}")
        failed += [name] if rep["verdict"] == "fail" else []
    log.info("%d files written to %s", len(hashes), cfg.out_dir)
    return 1 if failed else 0


def cmd_config(args) -> int:
    cfg = _config(args)
    if args.validate:
        cfg.validate()
    print(io.canonical_json(cfg.to_dict()), end="")
    return 0


def _primes(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expander-forge", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON file with BuildConfig fields")
        sp.add_argument("--out", help="artifact directory (overrides out_dir)")
        sp.add_argument("--k", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--q-policy", dest="q_policy", choices=["scan", "progression"])
        sp.add_argument("--p-list-L", dest="p_list_L", type=_primes)
        sp.add_argument("--p-list-R", dest="p_list_R", type=_primes)
        sp.add_argument("--D-L", dest="D_L", type=int)
        sp.add_argument("--D-R", dest="D_R", type=int)
        sp.add_argument("--d-L", dest="d_L", type=int)
        sp.add_argument("--d-R", dest="d_R", type=int)
        sp.add_argument("--gadget-seed", dest="gadget_seed", type=int)
        sp.add_argument("--seed", type=int, help="verification seed")
        sp.set_defaults(fn=fn)
        return sp

    add("primes", cmd_primes, "resolve q and list the generator sizes")
    sp = add("lps", cmd_lps, "LPS Cayley graph X(p; q) as an edge list")
    sp.add_argument("--p", type=int, required=True)
    for name, fn, help_ in (("complex", cmd_complex, "cubical complex summary"),
                            ("basegraph", cmd_basegraph, "trimmed coded incidence graphs")):
        sp = add(name, fn, help_)
        sp.add_argument("--side", nargs="+", choices=["L", "R"], default=["L", "R"])
    add("gadget", cmd_gadget, "certified gadget graph")
    sp = add("product", cmd_product, "tripartite line product (reuses gadget.edges if present)")
    sp.add_argument("--dedupe", action="store_true", help="collapse parallel slots")
    sp = add("verify", cmd_verify, "run named checks and write JSON reports")
    sp.add_argument("--check", action="append", choices=sorted(CHECKS))
    sp.add_argument("--input", help="edge-list artifact for single-file checks")
    sp.add_argument("--quiet", action="store_true", help="print verdicts only")
    sp = add("export", cmd_export, "write an edge list (optionally deduplicated)")
    sp.add_argument("--format", default="edgelist")
    sp.add_argument("--input", help="edge list to re-export (default: the product)")
    sp.add_argument("--output", required=True)
    sp.add_argument("--dedupe", action="store_true")
    sp = add("run", cmd_run, "every stage plus the configured checks")
    sp.add_argument("--check", action="append", choices=sorted(CHECKS))
    sp.add_argument("--no-dedupe", action="store_true")
    sp = add("config", cmd_config, "print the effective configuration")
    sp.add_argument("--validate", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
