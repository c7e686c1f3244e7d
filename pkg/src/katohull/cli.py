"""Command-line entry point.

    katohull <verb> --algebra alg.json [--module mod.json] [--window=-8:8] ...

Exit status is 0 on success, 2 when a randomized step was inconclusive and
1 on any other error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import complexes, modules
from .errors import Inconclusive, KatoHullError, ParseError
from .specs import parse_algebra, parse_bimodule, parse_complex, parse_module, read_json

SCHEMA = "katohull-report/1"
VERBS = ("resolve", "kato", "hull-test", "stp", "nu-domdim", "self-injective", "g0p", "g0st",
         "sigma-check", "morita-check")


@dataclass
class RunConfig:
    command: str
    algebra: str | None = None
    module: str | None = None
    complex: str | None = None
    m: str | None = None
    n: str | None = None
    pair: str | None = None
    window: tuple = (-8, 8)
    dim_cap: int = 12
    seed: int = 0
    format: str = "text"
    trial_budget: int | None = None
    length: int = 6
    cap: int = 8

    def __post_init__(self):
        lo, hi = self.window
        if not lo <= 0 <= hi:
            raise ParseError("window must satisfy lo <= 0 <= hi")
        if self.dim_cap < 1:
            raise ParseError("dim-cap must be at least 1")
        if self.command not in VERBS:
            raise ParseError(f"unknown command {self.command!r}")


def parse_window(text: str) -> tuple:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must look like a:b, got {text!r}") from exc
    return lo, hi


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _complex_dict(c) -> dict:
    return {
        "window": [c.lo, c.hi],
        "leftTail": c.left_tail,
        "rightTail": c.right_tail,
        "terms": {str(k): list(c.terms[k]) for k in range(c.lo, c.hi + 1) if c.terms[k]},
        "differentials": {str(k): c.diffs[k].tolist() for k in range(c.lo, c.hi) if c.diffs[k].size},
    }


# ------------------------------------------------------------------ verbs

def _algebra(cfg):
    if cfg.algebra is None:
        raise ParseError(f"{cfg.command} needs --algebra")
    return parse_algebra(read_json(cfg.algebra))


def _module(cfg, alg):
    if cfg.module is None:
        raise ParseError(f"{cfg.command} needs --module")
    return parse_module(read_json(cfg.module), alg)


def _resolve(cfg, alg):
    res = modules.resolution(_module(cfg, alg), cfg.length)
    return {"terms": [list(t.proj_types) for t in res.terms], "dims": [t.dim for t in res.terms],
            "complete": res.complete}


def _kato(cfg, alg):
    from .kato import kato_complex

    return {"complex": _complex_dict(kato_complex(_module(cfg, alg), cfg.window))}


def _hull_test(cfg, alg):
    from .kato import hull_membership, kato_complex

    if cfg.complex is not None:
        f = parse_complex(read_json(cfg.complex), alg, cfg.window)
    else:
        f = kato_complex(_module(cfg, alg), cfg.window)
    return hull_membership(f).as_dict()


def _stp(cfg, alg):
    from .functors import proj_injectives, strongly_proj_injectives

    return {"projectiveInjective": [alg.rep_label(i) for i in proj_injectives(alg)],
            "stronglyProjectiveInjective": [alg.rep_label(i) for i in strongly_proj_injectives(alg)]}


def _nu_domdim(cfg, alg):
    from .functors import nu_dominant_dimension

    d = nu_dominant_dimension(alg, cfg.cap)
    return {"value": d.value, "atLeast": d.at_least, "display": str(d), "cap": cfg.cap}


def _self_injective(cfg, alg):
    from .kato import self_injective_suite

    return self_injective_suite(alg, cfg.window).as_dict()


def _g0(mode):
    def run(cfg, alg):
        from .grothendieck import g0

        return g0(alg, mode, dim_cap=cfg.dim_cap, seed=cfg.seed).as_dict()

    return run


def _sigma_check(cfg, alg):
    from .grothendieck import build_pool, sigma, sigma_tilde
    from .kato import hull_membership, kato_complex

    pool = build_pool(alg, dim_cap=cfg.dim_cap, seed=cfg.seed)
    rows = []
    for label, x in zip(pool.labels(), pool.members):
        f = kato_complex(x, cfg.window)
        cert = hull_membership(f)
        back = sigma_tilde(pool, f, cert.l, cert.r)
        moved = sigma_tilde(pool, f, cert.l, cert.r + 1)
        rows.append({"module": label, "roundTrip": bool(np.array_equal(back, sigma(pool, x))),
                     "stableUnderRPlusOne": bool(np.array_equal(back, moved))})
    return {"generators": pool.labels(), "checks": rows,
            "allPass": all(r["roundTrip"] and r["stableUnderRPlusOne"] for r in rows)}


def _morita_check(cfg, alg_unused=None):
    from .morita import morita_pair, regular_bimodule, verify_stable_morita_type

    if cfg.m and cfg.n:
        m, n = parse_bimodule(read_json(cfg.m)), parse_bimodule(read_json(cfg.n))
    elif cfg.pair:
        alg = _algebra(cfg)
        if cfg.pair == "identity":
            m = n = regular_bimodule(alg)
        elif cfg.pair.startswith("morita"):
            extra = tuple(int(t) for t in cfg.pair.split(":")[1].split(",")) if ":" in cfg.pair else (0,)
            pr = morita_pair(alg, extra)
            m, n = pr.m, pr.n
        else:
            raise ParseError("--pair must be identity or morita[:i,j,...]")
    else:
        raise ParseError("morita-check needs --m and --n, or --algebra with --pair")
    return verify_stable_morita_type(m, n).as_dict()


HANDLERS = {
    "resolve": _resolve, "kato": _kato, "hull-test": _hull_test, "stp": _stp, "nu-domdim": _nu_domdim,
    "self-injective": _self_injective, "g0p": _g0("perfect"), "g0st": _g0("stable"),
    "sigma-check": _sigma_check, "morita-check": _morita_check,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report)."""
    from .functors import simple_projective_injectives

    saved = (modules.DECOMPOSE_TRIALS, modules.ISO_TRIALS, complexes.CHAIN_ISO_TRIALS)
    if cfg.trial_budget is not None:
        modules.DECOMPOSE_TRIALS = modules.ISO_TRIALS = complexes.CHAIN_ISO_TRIALS = cfg.trial_budget
    report = {"schema": SCHEMA, "command": cfg.command}
    try:
        warnings = []
        if cfg.command == "morita-check" and cfg.pair is None:
            result = _morita_check(cfg)
        else:
            alg = _algebra(cfg)
            if simple_projective_injectives(alg):
                warnings.append("algebra has a semisimple block; results assume there is none")
            result = HANDLERS[cfg.command](cfg, alg)
        report["result"] = _jsonable(result)
        if warnings:
            report["warnings"] = warnings
        return 0, report
    except Inconclusive as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 2, report
    except (KatoHullError, ValueError, OSError, KeyError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 1, report
    finally:
        modules.DECOMPOSE_TRIALS, modules.ISO_TRIALS, complexes.CHAIN_ISO_TRIALS = saved


def render_text(report: dict) -> str:
    lines = []

    def walk(x, indent):
        pad = "  " * indent
        if isinstance(x, dict):
            for k, v in x.items():
                if isinstance(v, (dict, list)) and v and not _flat_list(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {json.dumps(v)}")
        elif isinstance(x, list):
            for v in x:
                if isinstance(v, (dict, list)) and not _flat_list(v):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {json.dumps(v)}")

    walk(report, 0)
    return "\n".join(lines)


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(t, (dict, list)) for t in v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="katohull", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=VERBS)
    ap.add_argument("--algebra", help="algebra spec (JSON)")
    ap.add_argument("--module", help="module spec (JSON)")
    ap.add_argument("--complex", help="complex spec (JSON), for hull-test")
    ap.add_argument("--m", help="bimodule A-M-B spec, for morita-check")
    ap.add_argument("--n", help="bimodule B-N-A spec, for morita-check")
    ap.add_argument("--pair", help="built-in pair for morita-check: identity or morita[:i,...]")
    ap.add_argument("--window", type=parse_window, default=(-8, 8), help="degrees a:b (write --window=-4:4)")
    ap.add_argument("--dim-cap", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--trial-budget", type=int, default=None)
    ap.add_argument("--length", type=int, default=6, help="resolution length for resolve")
    ap.add_argument("--cap", type=int, default=8, help="term cap for nu-domdim")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.algebra, args.module, args.complex, args.m, args.n, args.pair,
                        args.window, args.dim_cap, args.seed, args.format, args.trial_budget,
                        args.length, args.cap)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    status, report = run(cfg)
    for w in report.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    if cfg.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render_text(report))
    if "error" in report:
        print(f"error: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
