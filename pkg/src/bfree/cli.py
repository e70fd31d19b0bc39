"""Command-line front end: ``bfree <subcommand> [options]``.

Exit status: 0 success, 2 configuration error, 3 budget exceeded,
4 a reproduce experiment failed its expectations.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from .crt import CylinderSpec, HPoint, bfree_crt_search, crt_solve, phi_block
from .density import davenport_erdos_trace, exact_density_of_multiples, interval_density, log_density_partial
from .errors import BudgetExceeded, ConfigError, IncompatibleResidues
from .filtration import build_filtration, compute_dk, detect_a_infinity, mef_descriptor
from .report import Report, RunConfig, jsonable, render
from .reproduce import get_experiment, reproduce_catalog
from .sieve import sieve_eta
from .window import classify, window_measures

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_FAIL = 0, 2, 3, 4
_CONFIG_FLAGS = ("N", "depth", "mode", "lookahead", "confirm", "chain_threshold",
                 "boundary_threshold", "haar_ratio", "format")


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    bset = dict(data.get("bset") or {"family": "primes"})
    if args.family:
        if args.family != bset.get("family"):
            bset = {"family": args.family, "params": {}}
    params = dict(bset.get("params") or {})
    for item in args.param or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = _parse_value(value)
    bset["params"] = params
    data["bset"] = bset
    for name in _CONFIG_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            data[name] = v
    return RunConfig.from_dict(data)


def _stage_rows(table, with_dk: bool) -> list[dict[str, Any]]:
    rows = []
    for i, st in enumerate(table.stages):
        row = {"k": st.k, "s_k": st.s, "c_k": st.c}
        if with_dk:
            d = table.dk[i]
            row.update({"d_k": d.value, "s_k/d_k": st.s // d.value, "stabilized": d.stabilized,
                        "certified": d.certified})
        row.update({"A_exact": st.A_exact, "|A_k|": len(st.A), "A_k\\S_k": list(st.new_elems),
                    "S_k": list(st.S)})
        rows.append(row)
    return rows


def cmd_sieve(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B = cfg.make_bset()
    blk = sieve_eta(B, args.lo, args.hi, b_horizon=args.b_horizon)
    bits = "".join("1" if v else "0" for v in blk.bits.tolist())
    res = {"offset": blk.offset, "length": len(blk), "free_count": int(blk.bits.sum()),
           "exact": blk.exact, "b_horizon": blk.b_horizon}
    if len(blk) <= args.max_print:
        res["bits"] = bits
    notes = [] if blk.exact else [f"inexact: only b <= {blk.b_horizon} were sieved"]
    return res, notes


def cmd_density(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B = cfg.make_bset()
    method = args.method
    if method == "interval":
        est = interval_density(B, args.target, cfg.N)
    elif method == "log":
        est = log_density_partial(B, cfg.N)
    elif method == "exact":
        if not (B.is_finite or B.family == "explicit"):
            raise ConfigError("exact densities need a finite B; use --method interval")
        elems = B.elements_up_to(B.max_element())
        est = exact_density_of_multiples(elems)
        if args.target == "free":
            est = type(est)(1 - est.value, est.kind, est.horizon, method=est.method)
    else:
        cutoffs = [int(v) for v in (args.cutoffs or "10,100,1000").split(",")]
        est = davenport_erdos_trace(B, cutoffs)
    return {"target": args.target if method in ("interval", "exact") else "multiples", "method": method,
            "density": est}, []


def _table(cfg: RunConfig):
    B = cfg.make_bset()
    T = build_filtration(B, depth=cfg.depth, mode=cfg.mode, horizon=max(cfg.N, 10**6))
    compute_dk(T, lookahead=cfg.lookahead, confirm=cfg.confirm)
    return B, T


def cmd_filtration(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B, T = _table(cfg)
    res: dict[str, Any] = {"mode": T.mode, "exact": T.exact, "complete": T.complete,
                           "rows": _stage_rows(T, True)}
    if len(T.stages) >= 3:
        res["a_infinity"] = [{"value": c.value, "status": c.status, "first": c.first, "last": c.last}
                             for c in detect_a_infinity(T)]
    notes = [] if T.exact else [f"some shadows are truncations of B at {T.horizon}"]
    return res, notes


def cmd_mef(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B, T = _table(cfg)
    mef = mef_descriptor(T)
    rows = [{"k": st.k, "s_k": st.s, "d_k": d.value, "s_k/d_k": st.s // d.value, "stabilized": d.stabilized}
            for st, d in zip(T.stages, T.dk)]
    res = {"label": mef.label, "order": mef.order, "h_int_trivial": mef.h_int_trivial,
           "new_primes_appearing": mef.new_primes_appearing, "tentative": mef.tentative,
           "components": [{"p": c.p, "valuation": c.valuation, "status": c.status} for c in mef.components],
           "rows": rows}
    notes = ["descriptor is tentative: some d_k have not stabilized"] if mef.tentative else []
    return res, notes


def cmd_classify(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B, T = _table(cfg)
    rep = classify(B, T, N=cfg.N, depth=cfg.depth, chain_threshold=cfg.chain_threshold,
                   boundary_threshold=cfg.boundary_threshold, haar_ratio=cfg.haar_ratio)
    verdicts = {}
    for name in ("proximal", "toeplitz", "top_regular", "regular_toeplitz", "taut_evidence"):
        v = getattr(rep, name)
        verdicts[name] = {"verdict": v.value, "certificate": v.certificate, "note": v.note}
    res = {
        "verdicts": verdicts,
        "mef": rep.mef.label,
        "window": {"m_W": rep.window.m_W, "m_intW": rep.window.m_intW, "m_boundary": rep.window.m_boundary,
                   "boundary_bound": rep.window.boundary_bound},
        "haar_flags": [{"k": f.k, "s_k": f.s, "n": f.n, "count": f.count} for f in rep.haar_flags],
        "y_membership": rep.y_membership,
    }
    if args.format_verdicts_only:
        res = {"verdicts": {k: v["verdict"] for k, v in verdicts.items()}, "mef": rep.mef.label}
    return res, list(rep.notes)


def cmd_window(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    B, T = _table(cfg)
    wm = window_measures(B, T, cfg.N)
    rows = [{"k": k, "boundary": v} for k, v in wm.per_stage_boundary]
    res = {"m_W": wm.m_W, "m_intW": wm.m_intW, "m_boundary": wm.m_boundary,
           "boundary_bound": wm.boundary_bound, "rows": rows}
    return res, [f"boundary values are {wm.boundary_bound} bounds: M_B is approximated by B ∩ [1, N]"]


def cmd_crt(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    system = CylinderSpec.parse(args.residues)
    try:
        sol = crt_solve(system)
    except IncompatibleResidues as exc:
        return {"compatible": False, "violating_pair": list(exc.pair), "residues": list(exc.residues)}, []
    res: dict[str, Any] = {"compatible": True, "n0": sol.n0, "modulus": sol.modulus}
    if args.search:
        found = bfree_crt_search(cfg.make_bset(), system, cfg.N)
        res.update({"count": found.count, "density": found.density,
                    "relative_density": found.relative_density,
                    "first_solutions": found.solutions[: args.max_print].tolist()})
    return res, []


def cmd_phi(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    assigned = CylinderSpec.parse(args.assign).residues if args.assign else {}
    h = HPoint(assigned, default=args.default, n0=args.n0)
    blk = phi_block(cfg.make_bset(), h, args.lo, args.hi)
    bits = "".join("1" if v else "0" for v in blk.bits.tolist())
    return {"offset": blk.offset, "length": len(blk), "bits": bits, "exact": blk.exact}, []


def cmd_reproduce(cfg: RunConfig, args) -> tuple[dict, list[str]]:
    if args.list or not args.experiment:
        return {"experiments": [{"id": e.id, "title": e.title} for e in reproduce_catalog()]}, []
    exp = get_experiment(args.experiment)
    checks = exp.run(args.N)
    rows = [{"check": c.name, "expected": c.expected, "observed": c.observed,
             "status": "PASS" if c.passed else "FAIL"} for c in checks]
    status = "PASS" if all(c.passed for c in checks) else "FAIL"
    return {"experiment": exp.id, "title": exp.title, "status": status, "rows": rows}, []


COMMANDS = {
    "sieve": cmd_sieve, "density": cmd_density, "filtration": cmd_filtration, "mef": cmd_mef,
    "classify": cmd_classify, "window": cmd_window, "crt": cmd_crt, "phi": cmd_phi,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--family", help="B family name (see `bfree families`)")
    common.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="family parameter; VALUE is parsed as JSON when possible")
    common.add_argument("--N", "-N", type=int, help="horizon [1, N] for counts (default $BFREE_HORIZON or 10^7)")
    common.add_argument("--depth", type=int, help="number of filtration stages")
    common.add_argument("--mode", choices=("prefix", "saturated", "native"))
    common.add_argument("--lookahead", type=int)
    common.add_argument("--confirm", type=int)
    common.add_argument("--chain-threshold", dest="chain_threshold", type=int)
    common.add_argument("--boundary-threshold", dest="boundary_threshold", type=float)
    common.add_argument("--haar-ratio", dest="haar_ratio", type=float)
    common.add_argument("--format", choices=("table", "json", "csv"))
    common.add_argument("--timing", action="store_true", help="append wall-clock timing")

    p = argparse.ArgumentParser(prog="bfree", description="Arithmetic and dynamics of B-free systems")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("sieve", parents=[common], help="eta on an interval")
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--hi", type=int, required=True)
    s.add_argument("--b-horizon", dest="b_horizon", type=int)
    s.add_argument("--max-print", dest="max_print", type=int, default=10_000)
    d = sub.add_parser("density", parents=[common], help="densities of M_B or F_B")
    d.add_argument("--target", choices=("multiples", "free"), default="multiples")
    d.add_argument("--method", choices=("interval", "exact", "log", "davenport-erdos"), default="interval")
    d.add_argument("--cutoffs", help="comma separated increasing cutoffs K for davenport-erdos")
    for name, text in (("filtration", "stages, shadows and d_k"), ("mef", "maximal equicontinuous factor"),
                       ("window", "window measures")):
        sub.add_parser(name, parents=[common], help=text)
    c = sub.add_parser("classify", parents=[common], help="dynamical classification")
    c.add_argument("--verdicts-only", dest="format_verdicts_only", action="store_true")
    r = sub.add_parser("crt", parents=[common], help="solve a residue system (b:r,...)")
    r.add_argument("--residues", required=True, help='e.g. "4:1,6:5"')
    r.add_argument("--search", action="store_true", help="also list B-free solutions in [1, N]")
    r.add_argument("--max-print", dest="max_print", type=int, default=20)
    f = sub.add_parser("phi", parents=[common], help="the coding phi(h) on an interval")
    f.add_argument("--assign", default="", help='assigned coordinates, e.g. "3:0,5:1"')
    f.add_argument("--default", choices=("zero", "delta"), default="zero")
    f.add_argument("--n0", type=int, default=0)
    f.add_argument("--lo", type=int, required=True)
    f.add_argument("--hi", type=int, required=True)
    e = sub.add_parser("reproduce", parents=[common], help="run a named experiment")
    e.add_argument("experiment", nargs="?")
    e.add_argument("--list", action="store_true")
    sub.add_parser("families", parents=[common], help="list B families")
    return p


def _families() -> dict:
    from .bset import family_catalog

    return {"families": [{"name": f.name, "summary": f.summary, "params": f.params} for f in family_catalog()]}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        t0 = time.perf_counter()
        if args.command == "families":
            result, notes = _families(), []
        else:
            result, notes = COMMANDS[args.command](cfg, args)
        elapsed = time.perf_counter() - t0
    except ConfigError as exc:
        err.write(json.dumps({"error": "config", "type": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        err.write(json.dumps({"error": "budget", "type": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_BUDGET
    report = Report(args.command, cfg.to_dict(), result, notes,
                    {"total": elapsed} if args.timing else None)
    out.write(render(report, cfg.format))
    if args.command == "reproduce" and result.get("status") == "FAIL":
        return EXIT_FAIL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
