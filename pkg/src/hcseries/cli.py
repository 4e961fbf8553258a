"""Command line interface: ``hcseries {info,eval,check}``.

Configuration comes from a TOML file (``--config`` or the ``HCSERIES_CONFIG``
environment variable) with tables ``[datum]``, ``[numerics]`` and ``[run]``;
command line flags override file values.  Without a file the datum is A1
with bullet "t", kappa 0.3 and q 0.3.

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration,
datum or suite selection error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:   # Python < 3.11
    import tomli as tomllib

from . import __version__, settings
from .errors import ConfigError, DatumError, HCError
from .rootdata import build_datum

DEFAULTS = {
    "datum": {"family": "A", "rank": 1, "bullet": "t", "kappa": 0.3, "q": 0.3},
    "numerics": {"truncation": 24, "factor_cutoff": 1e-15, "pole_guard": 1e-8, "seed": 0, "samples": 5,
                 "tol_scale": 1.0},
    "run": {"suites": ["all"], "output": None},
}


def load_config(path=None):
    """Merge the TOML file at ``path`` (or ``$HCSERIES_CONFIG``) over the defaults."""
    cfg = {k: dict(v) for k, v in DEFAULTS.items()}
    path = path or os.environ.get("HCSERIES_CONFIG")
    if not path:
        return cfg
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed TOML in {path}: {e}") from None
    for table, vals in raw.items():
        if table not in cfg:
            raise ConfigError(f"unknown config table [{table}]")
        if not isinstance(vals, dict):
            raise ConfigError(f"[{table}] must be a table")
        unknown = set(vals) - set(cfg[table])
        if unknown:
            raise ConfigError(f"unknown key(s) in [{table}]: {', '.join(sorted(unknown))}")
        cfg[table].update(vals)
    if isinstance(cfg["run"]["suites"], str):
        cfg["run"]["suites"] = [cfg["run"]["suites"]]
    return cfg


def apply_overrides(cfg, args):
    num = cfg["numerics"]
    for flag, key in (("trunc", "truncation"), ("seed", "seed"), ("samples", "samples"),
                      ("tol_scale", "tol_scale")):
        v = getattr(args, flag, None)
        if v is not None:
            num[key] = v
    if getattr(args, "suite", None):
        cfg["run"]["suites"] = list(args.suite)
    if getattr(args, "out", None):
        cfg["run"]["output"] = args.out
    for key in ("truncation", "seed", "samples"):
        if not isinstance(num[key], int) or num[key] < (0 if key == "seed" else 1):
            raise ConfigError(f"numerics.{key} must be a positive integer")
    for key in ("factor_cutoff", "pole_guard", "tol_scale"):
        if not isinstance(num[key], (int, float)) or num[key] <= 0:
            raise ConfigError(f"numerics.{key} must be a positive number")
    return cfg


def datum_from_config(cfg):
    d = cfg["datum"]
    try:
        return build_datum(d["family"], int(d["rank"]), d["bullet"], d["kappa"], float(d["q"]))
    except (TypeError, KeyError) as e:
        raise ConfigError(f"invalid [datum] entry: {e}") from None


def _complex_vector(text, dim, what):
    """Parse "a,b,..." with Python complex literals such as 0.3-0.1j."""
    try:
        v = np.array([complex(t.strip().replace(" ", "")) for t in text.split(",")])
    except ValueError:
        raise ConfigError(f"cannot parse {what} {text!r}") from None
    if v.size != dim:
        raise ConfigError(f"{what} needs {dim} components, got {v.size}")
    return v


def _pair(x):
    x = complex(x)
    return [x.real, x.imag]


def _matrix_pairs(M):
    return [[_pair(x) for x in row] for row in np.asarray(M)]


# ------------------------------------------------------------------ verbs
def cmd_info(D, cfg, args):
    out = {"config": cfg, "datum": D.summary(),
           "weyl_basis": [W.tolist() for W in D.weyl.mats],
           "reduced_words": [list(w) for w in D.weyl.reduced_words],
           "dual": D.dual.summary()}
    return out, 0


def cmd_eval(D, cfg, args):
    from . import cfunction as cf
    from . import connection as cn
    from . import harish_chandra as hc
    N = cfg["numerics"]["truncation"]
    z = _complex_vector(args.z, D.dim, "z") if args.z else None
    xi = _complex_vector(args.xi, D.dim, "xi") if args.xi else None
    need = {"phi": "zx", "phi-rank1": "x", "m": "zx", "C": "zx", "c-sph": "zx", "theta-lattice": "z"}
    if "z" in need[args.target] and z is None:
        raise ConfigError(f"eval {args.target} needs --z")
    if "x" in need[args.target] and xi is None:
        raise ConfigError(f"eval {args.target} needs --xi")
    res = {"target": args.target, "z": None if z is None else [_pair(v) for v in z],
           "xi": None if xi is None else [_pair(v) for v in xi]}
    t = args.target
    if t == "phi":
        val, diag = hc.HCSeries(D, xi, N)(z, full_output=True)
        res.update(value=_pair(val), truncation=N, last_level_max=float(diag["last_level_max"]))
    elif t == "phi-rank1":
        if args.x is None:
            raise ConfigError("eval phi-rank1 needs --x")
        res.update(value=_pair(hc.phi_rank_one(D, args.i - 1, complex(args.x), xi)), i=args.i, x=_pair(args.x))
    elif t == "m":
        mee, moff = cn.m_simple(D, args.i - 1, z, xi)
        res.update(i=args.i, m_ee=_pair(mee), m_off=_pair(moff))
    elif t == "C":
        W = D.weyl
        sigma = W.longest if args.sigma is None else W.from_word([int(c) - 1 for c in args.sigma.split(",")])
        M = cn.connection_matrix(D, sigma, z, xi)
        res.update(sigma_word=[i + 1 for i in M.word], matrix=_matrix_pairs(M.value))
    elif t == "c-sph":
        res.update(value=_pair(cf.c_sph(D, z, xi)))
    elif t == "theta-lattice":
        res.update(value=_pair(cf.theta_lattice(D, z)))
    return res, 0


def cmd_check(D, cfg, args):
    from .suites import SuiteContext, run_suites
    num = cfg["numerics"]
    ctx = SuiteContext(seed=num["seed"], samples=num["samples"], truncation=num["truncation"],
                       tol_scale=float(num["tol_scale"]))
    t0 = time.perf_counter()
    records, skipped = run_suites(D, cfg["run"]["suites"], ctx)
    failed = [r for r in records if not r.passed]
    report = {
        "config": cfg,
        "weyl_basis": [W.tolist() for W in D.weyl.mats],
        "records": [r.__dict__ for r in records],
        "skipped": skipped,
        "summary": {"checks": len(records), "passed": len(records) - len(failed), "failed": len(failed),
                    "wall_time": time.perf_counter() - t0},
    }
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["name", "anchor", "residual", "tolerance", "passed", "wall_time"])
            for r in records:
                w.writerow([r.name, r.anchor, f"{r.residual:.3e}", f"{r.tolerance:.1e}", r.passed,
                            f"{r.wall_time:.3f}"])
    for r in records:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.residual:9.2e} < {r.tolerance:7.1e}  {r.name}",
              file=sys.stderr)
    for name, why in skipped.items():
        print(f"SKIP  {name}: {why}", file=sys.stderr)
    return report, (1 if failed else 0)


# ------------------------------------------------------------------ parser
def build_parser():
    p = argparse.ArgumentParser(prog="hcseries", description="Harish-Chandra series toolkit")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file (default $HCSERIES_CONFIG)")
    common.add_argument("--seed", type=int)
    common.add_argument("--trunc", type=int, help="series truncation height")
    common.add_argument("--samples", type=int, help="sample points per check")
    common.add_argument("--tol-scale", type=float, dest="tol_scale", help="multiply all tolerances")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("info", parents=[common], help="print the derived datum")
    e = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    e.add_argument("target", choices=["phi", "phi-rank1", "m", "C", "c-sph", "theta-lattice"])
    e.add_argument("--z", help="comma separated complex components")
    e.add_argument("--xi", help="comma separated complex components")
    e.add_argument("--x", help="rank one variable for phi-rank1")
    e.add_argument("--i", type=int, default=1, help="simple root index, 1-based")
    e.add_argument("--sigma", help="Weyl element as a comma separated 1-based word (default w0)")
    c = sub.add_parser("check", parents=[common], help="run verification suites")
    c.add_argument("--suite", action="append", help="suite name, repeatable (default: config or all)")
    c.add_argument("--csv", help="also write a CSV summary")
    return p


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return _pair(o)
    raise TypeError(f"not serializable: {type(o)}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), args)
        D = datum_from_config(cfg)
        num = cfg["numerics"]
        with settings.numerics(pole_guard=float(num["pole_guard"]), factor_cutoff=float(num["factor_cutoff"])):
            report, code = {"info": cmd_info, "eval": cmd_eval, "check": cmd_check}[args.verb](D, cfg, args)
    except (ConfigError, DatumError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except HCError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    text = json.dumps(report, indent=2, default=_default)
    out = cfg["run"]["output"]
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
