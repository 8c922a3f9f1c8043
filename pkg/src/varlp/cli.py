"""``varlp <norm|operator|check|verify|report> --config PATH [--out DIR] [--resolution N] [--seed S]``.

``report`` only reads ``--out`` and may omit ``--config``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from . import criteria as cr
from .config import ExperimentConfig, dumps, load_config
from .exponents import check_log_holder
from .harness import CONSISTENT, apply_operator, generate_family, TestFamily, verify_theorem
from .spaces import GridFunction, luxemburg_norm
from .weights import Weight, check_doubling

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 1, 2
GOOD = {cr.HOLDS, CONSISTENT}


class UsageError(Exception):
    pass


def _resolution(cfg: ExperimentConfig):
    return int(cfg.resolutions[-1])


def _function(cfg: ExperimentConfig, n) -> GridFunction:
    if cfg.function is None:
        raise UsageError("config needs a 'function' entry for this command")
    J = cfg.domain.interval
    kind, prm = cfg.function.kind, cfg.function.params
    if kind == "constant":
        return GridFunction.constant(prm.get("value", 1.0), J, n)
    if kind == "indicator":
        return GridFunction.indicator(prm["a"], prm["b"], J, n, prm.get("height", 1.0))
    if kind == "power":
        return generate_family(TestFamily("power", params={"gammas": [prm["gamma"]]}), (J, n))[0][1]
    return generate_family(TestFamily("random-steps", prm.get("seed", cfg.seed), 1), (J, n))[0][1]


def _payload(command, cfg, report):
    return {"command": command, "config": cfg.model_dump(), "report": report}


def _write(out: Path, name, text):
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def cmd_norm(cfg, out):
    f = _function(cfg, _resolution(cfg))
    value = luxemburg_norm(f, cfg.p())
    print(repr(float(value)))
    _write(out, "norm.json", dumps(_payload("norm", cfg, {"norm": value, "resolution": f.n})))
    return EXIT_OK


def cmd_operator(cfg, out):
    f = _function(cfg, _resolution(cfg))
    op = cfg.operator.id
    Tf = apply_operator(op, f, cfg.operator.alpha, cfg.weight("v"), cfg.weight("w"))
    out.mkdir(parents=True, exist_ok=True)
    path = out / (cfg.output.plot or "operator.csv")
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x", "value", "series"])
        for series, g in (("input", f), (op, Tf)):
            for x, y in zip(g.midpoints, g.values):
                wr.writerow([repr(float(x)), repr(float(y)), series])
    print(path)
    return EXIT_OK


def _check(cfg: ExperimentConfig):
    name = cfg.criterion
    p, J, n = cfg.p(), cfg.domain.interval, _resolution(cfg)
    v, w = cfg.weight("v"), cfg.weight("w")
    alpha = cfg.operator.alpha
    ts = cfg.t_scan()
    if name == "doubling":
        u = cfg.weights["u"].build() if "u" in cfg.weights else v
        kw = {}
        if cfg.scan.x_points is not None:
            kw["x_points"] = cfg.scan.x_points
        if cfg.scan.r_points is not None:
            kw["r_points"] = cfg.scan.r_points
        rep = check_doubling(u, J, **kw)
        return cr.TestingReport("doubling", rep.best_b, list(rep.witness) if rep.witness is not None else None,
                                {"grid": rep.scan} if hasattr(rep, "scan") else {},
                                cr.HOLDS if rep.holds else cr.FAILS)
    if name == "log_holder":
        rep = check_log_holder(p, J)
        return cr.TestingReport("log_holder", rep.best_c, rep.witness, {"resolution": rep.resolution},
                                cr.HOLDS if rep.holds else cr.FAILS, {"structural_jump": rep.structural_jump})
    if name == "sawyer_modular":
        return cr.refine(cr.sawyer_modular, cfg.resolutions, v, w, p, alpha, J)
    if name == "trace_condition":
        return cr.refine(cr.trace_condition, cfg.resolutions, v, p, alpha, J)
    if name == "sawyer_norm":
        fam = cfg.scan.intervals if isinstance(cfg.scan.intervals, list) else None
        dom = "line" if cfg.domain.kind == "line" else "halfline"
        return cr.sawyer_norm(v, w, p, alpha, dom, cfg.domain.a, fam, n)
    if name in ("hardy_D", "hardy_Dprime"):
        return cr.hardy_condition(v, w, p, cfg.q(), name.split("_")[1], ts)
    if name in ("E1", "E2"):
        return cr.condition_E(v, w, p, name, ts)
    if name == "pointwise_22":
        return cr.condition_pointwise_22(v, w, ts)
    if name == "monotone_25":
        return cr.monotone_implication_25(v, w, ts)
    raise UsageError(f"unknown criterion {name!r}")


def cmd_check(cfg, out):
    if not cfg.criterion:
        raise UsageError("config needs a 'criterion' entry for check")
    rep = _check(cfg)
    print(f"{rep.criterion}: {rep.verdict} best_constant={rep.best_constant!r} witness={rep.witness}")
    _write(out, cfg.output.report or "check.json", dumps(_payload("check", cfg, rep.to_dict())))
    return EXIT_OK if rep.verdict == cr.HOLDS else EXIT_FAIL


def cmd_verify(cfg, out):
    if not cfg.theorem:
        raise UsageError("config needs a 'theorem' entry for verify")
    rep = verify_theorem(cfg.theorem, cfg)
    print(f"{rep.theorem}: {rep.verdict} ({rep.narrative})")
    _write(out, cfg.output.report or f"verify-{cfg.theorem}.json", dumps(_payload("verify", cfg, rep.to_dict())))
    return EXIT_OK if rep.verdict == CONSISTENT else EXIT_FAIL


def _verdict_of(payload):
    rep = payload.get("report", {})
    return rep.get("verdict", cr.HOLDS)


def cmd_report(cfg, out):
    rows = []
    for path in sorted(out.glob("*.json")):
        if path.name == "summary.json":
            continue
        data = json.loads(path.read_text())
        if not isinstance(data, dict) or "command" not in data:
            continue
        rows.append({"file": path.name, "command": data["command"], "verdict": _verdict_of(data)})
    summary = {"reports": rows, "all_good": all(r["verdict"] in GOOD for r in rows)}
    _write(out, "summary.json", dumps(summary))
    for r in rows:
        print(f"{r['file']}: {r['verdict']}")
    return EXIT_OK if summary["all_good"] else EXIT_FAIL


COMMANDS = {"norm": cmd_norm, "operator": cmd_operator, "check": cmd_check, "verify": cmd_verify,
            "report": cmd_report}


def _line_of(text, loc):
    keys = [x for x in loc if isinstance(x, str)]
    if not text or not keys:
        return None
    at = text.find(f'"{keys[-1]}"')
    return text.count("\n", 0, at) + 1 if at >= 0 else None


def _config_error(err: ValidationError, path):
    try:
        text = Path(path).read_text()
    except OSError:
        text = None
    for e in err.errors():
        loc = ".".join(str(x) for x in e["loc"]) or "<root>"
        line = _line_of(text, e["loc"])
        where = f"line {line}, field {loc}" if line else f"field {loc}"
        print(f"config error at {where}: {e['msg']}", file=sys.stderr)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="varlp", description=__doc__)
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", default=None, help="config JSON, a saved report, or bundled:NAME")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--resolution", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "report" and args.config is None:
        return cmd_report(None, Path(args.out or "varlp-out"))
    if args.config is None:
        print("error: --config is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config).with_overrides(args.resolution, args.seed)
    except ValidationError as err:
        _config_error(err, args.config)
        return EXIT_CONFIG
    except (OSError, ValueError) as err:
        print(f"cannot read config: {err}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out or cfg.output.dir or "varlp-out")
    try:
        return COMMANDS[args.command](cfg, out)
    except (UsageError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
