"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage
errors and unreadable or malformed inputs. Sweep parameters may come from a
JSON file given with --config; explicit flags take precedence.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import bounds, frechet, oracle, recon, serialize, sobolev, zernike

log = logging.getLogger("eitlin")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("bounds", "oracle", "embedding", "all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved parameters of one command invocation."""

    command: str
    tol: float | None = None
    seed: int = 0
    out: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol is not None and self.tol < 0:
            raise UsageError("--tol must be nonnegative")


# defaults for sweep parameters; overridden by --config, then by flags
VERIFY_DEFAULTS = {
    "bounds_m_max": 200,
    "bounds_j_max": 20,
    "gronwall_m_max": 100,
    "gronwall_j_max": 10,
    "gronwall_step": 0.01,
    "schur_M": 500,
    "schur_j_max": 20,
    "norm_sizes": [100, 500],
    "norm_j_max": 10,
    "norm_iters": 200,
    "oracle_jmax": 6,
    "oracle_kmax": 6,
    "oracle_mmax": 10,
    "embedding_N": 50,
    "embedding_trials": 200,
    "embedding_eps": [0.1, 0.25, 0.5],
}

ORACLE_TOL = 1e-9
K1_TOL = 1e-14


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    return data


def _resolve(defaults: dict, config: dict, flags: dict) -> dict:
    unknown = set(config) - set(defaults) - {"tol", "seed"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out = dict(defaults)
    out.update({k: v for k, v in config.items() if k in defaults})
    out.update({k: v for k, v in flags.items() if v is not None and k in defaults})
    return out


# -- commands ---------------------------------------------------------------------

def cmd_assemble(cfg: RunConfig) -> int:
    p = cfg.params
    if not 1 <= p["K"] <= p["M"]:
        raise UsageError(f"need 1 <= K <= M, got M={p['M']}, K={p['K']}")
    block = frechet.assemble_block(p["j_abs"], p["M"], p["K"])
    _emit(serialize.block_to_csv(block), cfg.out)
    return EXIT_OK


def _verify_bounds(p: dict, tol: float | None) -> dict:
    k1_tol = K1_TOL if tol is None else tol
    report = bounds.domination_sweep(p["bounds_m_max"], p["bounds_j_max"], k1_tol=k1_tol)
    report = report.merge(bounds.gronwall_sweep(p["gronwall_m_max"], p["gronwall_j_max"],
                                                p["gronwall_step"]))
    report = report.merge(bounds.schur_sweep(p["schur_M"], p["schur_j_max"]))
    norms = bounds.norm_sweep(tuple(p["norm_sizes"]), p["norm_j_max"], p["norm_iters"])
    report = report.merge(norms)
    out = report.to_dict()
    out["ranges"] = {k: p[k] for k in p if k.split("_")[0] in
                     ("bounds", "gronwall", "schur", "norm")}
    out["observed_max_norm"] = norms.details["observed_max_norm"]
    out["ok"] = report.ok
    return out


def _verify_oracle(p: dict, tol: float | None) -> dict:
    tol = ORACLE_TOL if tol is None else tol
    res = oracle.max_discrepancy(p["oracle_jmax"], p["oracle_kmax"], p["oracle_mmax"])
    res["tol"] = tol
    res["ok"] = res["max_abs"] <= tol
    return res


def _verify_embedding(p: dict, seed: int) -> dict:
    res = sobolev.embedding_sweep(N=p["embedding_N"], eps_values=tuple(p["embedding_eps"]),
                                  trials=p["embedding_trials"], seed=seed)
    res["ok"] = res["violations"] == 0
    return res


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.params["suite"]
    p = cfg.params
    report = {}
    if suite in ("bounds", "all"):
        report["bounds"] = _verify_bounds(p, cfg.tol)
    if suite in ("oracle", "all"):
        report["oracle"] = _verify_oracle(p, cfg.tol)
    if suite in ("embedding", "all"):
        report["embedding"] = _verify_embedding(p, cfg.seed)
    failures = [name for name, r in report.items() if not r["ok"]]
    report["failures"] = failures
    _emit(_json(report), cfg.out)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_figure1(cfg: RunConfig) -> int:
    rows = bounds.figure1_data()
    _emit(serialize.figure1_to_csv(rows), cfg.out)
    bad = [r for r in rows if r["absF"] > r["xi"]]
    return EXIT_FAIL if bad else EXIT_OK


def cmd_forward(cfg: RunConfig) -> int:
    p = cfg.params
    eta = serialize.read_spectral(p["eta"])
    if p["mmax"] < 1:
        raise UsageError("--mmax must be >= 1")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        nd = frechet.apply(eta, p["mmax"])
    for w in caught:
        log.warning("%s", w.message)
    _emit(serialize.nd_to_csv(nd), cfg.out)
    return EXIT_OK


def cmd_recon(cfg: RunConfig) -> int:
    p = cfg.params
    nd = serialize.read_nd(p["nd"])
    mmax = p["mmax"] if p["mmax"] is not None else nd.mmax
    if mmax > nd.mmax:
        raise UsageError(f"--mmax {mmax} exceeds the data window {nd.mmax}")
    rc = recon.ReconConfig(mmax=mmax, jmax=p["jmax"], kmax=p["kmax"], alpha=p["alpha"])
    coeffs = recon.reconstruct(nd, rc)
    _emit(json.dumps(serialize.spectral_to_dict(coeffs), indent=1) + "\n", cfg.out)
    if p.get("samples_out"):
        grid = zernike.disk_grid(p["n_r"], p["n_theta"])
        vals = zernike.sample_on_grid(coeffs, grid)
        _emit(serialize.samples_to_csv(grid, vals), p["samples_out"])
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig) -> int:
    p = cfg.params
    res = _verify_oracle(p, cfg.tol)
    print(f"max |entry - quadrature| = {res['max_abs']:.3e} over {res['count']} tuples "
          f"(structural zeros {res['max_abs_zero']:.3e}); tol {res['tol']:.1e}")
    if cfg.out:
        _emit(_json(res), cfg.out)
    return EXIT_OK if res["ok"] else EXIT_FAIL


def cmd_embedding_check(cfg: RunConfig) -> int:
    p = cfg.params
    N = p["N"]
    Ms = None if p["M"] is None else [p["M"]]
    eps = tuple(p["eps"]) if p["eps"] else (0.1, 0.25, 0.5)
    if N < 2 or (Ms and not 0 <= Ms[0] < N) or any(not 0 < e <= 0.5 for e in eps):
        raise UsageError("need N >= 2, 0 <= M < N and eps in (0, 1/2]")
    res = sobolev.embedding_sweep(N=N, Ms=Ms, eps_values=eps, trials=p["trials"], seed=cfg.seed)
    res["ok"] = res["violations"] == 0
    _emit(_json(res), cfg.out)
    return EXIT_OK if res["ok"] else EXIT_FAIL


COMMANDS = {
    "assemble": cmd_assemble,
    "verify": cmd_verify,
    "figure1": cmd_figure1,
    "forward": cmd_forward,
    "recon": cmd_recon,
    "oracle-check": cmd_oracle_check,
    "embedding-check": cmd_embedding_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="check tolerance")
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--config", help="JSON file with parameters; flags override it")
    common.add_argument("-o", "--out", help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="eitlin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assemble", parents=[common], help="dump a block F^{|j|} as CSV m,k,value")
    p.add_argument("j_abs", type=int)
    p.add_argument("M", type=int)
    p.add_argument("K", type=int)

    p = sub.add_parser("verify", parents=[common], help="run invariant sweeps, JSON report")
    p.add_argument("suite", choices=SUITES)
    for key, val in VERIFY_DEFAULTS.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, list):
            kind = type(val[0])
            p.add_argument(flag, dest=key, type=kind, nargs="+", default=None)
        else:
            p.add_argument(flag, dest=key, type=type(val), default=None)

    sub.add_parser("figure1", parents=[common], help="entry vs majorant table as CSV")

    p = sub.add_parser("forward", parents=[common], help="apply F to a coefficient table")
    p.add_argument("--eta", required=True, help="SpectralPerturbation JSON")
    p.add_argument("--mmax", type=int, required=True)

    p = sub.add_parser("recon", parents=[common], help="one-step reconstruction from ND CSV")
    p.add_argument("--nd", required=True, help="NDPerturbation CSV (j,m,n,re,im)")
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--mmax", type=int, default=None, help="default: window of the data")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--samples-out", help="also write eta sampled on a disk grid as CSV")
    p.add_argument("--n-r", type=int, default=32)
    p.add_argument("--n-theta", type=int, default=64)

    p = sub.add_parser("oracle-check", parents=[common], help="closed form vs quadrature")
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--mmax", type=int, default=None)

    p = sub.add_parser("embedding-check", parents=[common], help="random-matrix embedding bound")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--M", type=int, default=None, help="single truncation (default: all 1..N-1)")
    p.add_argument("--eps", type=float, nargs="+", default=None)
    p.add_argument("--trials", type=int, default=None)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    config = _load_config(args.config)
    flags = vars(args)
    tol = args.tol if args.tol is not None else config.get("tol")
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    cmd = args.command
    if cmd == "verify":
        params = _resolve(VERIFY_DEFAULTS, config, flags)
        params["suite"] = args.suite
    elif cmd == "oracle-check":
        params = _resolve({"jmax": 6, "kmax": 6, "mmax": 10}, config, flags)
        params = {"oracle_jmax": params["jmax"], "oracle_kmax": params["kmax"],
                  "oracle_mmax": params["mmax"]}
    elif cmd == "embedding-check":
        params = _resolve({"N": 50, "M": None, "eps": [0.1, 0.25, 0.5], "trials": 1000},
                          config, flags)
    else:
        params = {k: v for k, v in flags.items()
                  if k not in ("command", "tol", "seed", "config", "out", "verbose")}
    return RunConfig(command=cmd, tol=tol, seed=int(seed), out=args.out, params=params)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _run_config(args)
        log.info("run config: %s", asdict(cfg))
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError) as exc:
        print(f"eitlin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"eitlin {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
