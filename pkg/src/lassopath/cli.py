"""Command line entry point: ``lassopath {path,check-gpc,audit,generate,solve}``.

Exit codes: 0 success, 1 audit claim failed, 2 bad input, 3 degenerate
problem (X^t y = 0), 4 solver error, 5 exhaustive GPC check over budget.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import io
from .datagen import generate
from .diagnostics import parse_grid, run_audit, sample_curve
from .errors import (CombinatorialOverflow, DegenerateProblem, IterationCap, LassoPathError,
                     NotConverged, ParseError, RankDeficient)
from .gpc import DEFAULT_BUDGET, check_gpc
from .homotopy import LAMBDA_MIN_FACTOR, compute_path
from .linalg import DesignMatrix, as_response
from .oracle import exact_combinatorial_solve, proximal_solve
from .svg import curves_svg

log = logging.getLogger("lassopath")


@dataclass
class RunConfig:
    """Everything that determines a run's output files (the output directory does not)."""

    command: str
    design: Optional[str] = None
    response: Optional[str] = None
    synthetic: Optional[str] = None
    seed: int = 0
    lambda_min_factor: float = LAMBDA_MIN_FACTOR
    grid: str = "log:50"
    gpc_budget: int = DEFAULT_BUDGET
    exhaustive: bool = False
    svg: bool = False
    lam: Optional[float] = None
    method: str = "prox"

    @classmethod
    def from_args(cls, ns):
        return cls(**{k: getattr(ns, k) for k in cls.__dataclass_fields__ if hasattr(ns, k)})

    def to_dict(self):
        return asdict(self)

    def to_argv(self):
        argv = [self.command]
        if self.design is not None:
            argv += ["--design", self.design, "--response", self.response]
        if self.synthetic is not None:
            argv += ["--synthetic", self.synthetic]
        argv += ["--seed", str(self.seed), "--lambda-min-factor", repr(self.lambda_min_factor),
                 "--grid", self.grid, "--gpc-budget", str(self.gpc_budget)]
        if self.exhaustive:
            argv.append("--exhaustive")
        if self.svg:
            argv.append("--svg")
        if self.lam is not None:
            argv += ["--lambda", repr(self.lam)]
        argv += ["--method", self.method]
        return argv


def parse_synthetic(text):
    try:
        n, p, s, sigma = text.split(",")
        return int(n), int(p), int(s), float(sigma)
    except ValueError:
        raise ValueError(f"--synthetic expects N,P,S,SIGMA, got {text!r}") from None


def load_instance(cfg):
    """Returns (X, y, truth-or-None)."""
    if cfg.synthetic is not None:
        n, p, s, sigma = parse_synthetic(cfg.synthetic)
        inst = generate(n, p, s, sigma, cfg.seed)
        return DesignMatrix(inst.X), inst.y, inst
    if cfg.design is None or cfg.response is None:
        raise ValueError("give --design and --response, or --synthetic")
    X = io.read_matrix(cfg.design)
    y = io.read_vector(cfg.response)
    if y.shape[0] != X.shape[0]:
        raise ParseError(cfg.response, y.shape[0], 1,
                         f"response has {y.shape[0]} rows, design has {X.shape[0]}")
    return DesignMatrix(X), as_response(y, X.shape[0]), None


def _out(ns):
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_config(out, cfg):
    io.dump_json(out / "config.json", cfg.to_dict())


def cmd_generate(cfg, ns):
    if cfg.synthetic is None:
        raise ValueError("generate needs --synthetic N,P,S,SIGMA")
    n, p, s, sigma = parse_synthetic(cfg.synthetic)
    inst = generate(n, p, s, sigma, cfg.seed)
    out = _out(ns)
    io.write_matrix(out / "design.csv", inst.X)
    io.write_vector(out / "response.csv", inst.y)
    io.dump_json(out / "truth.json", {
        "n": n, "p": p, "s": s, "sigma": sigma, "seed": cfg.seed,
        "beta": [float(v) for v in inst.beta],
        "support": list(inst.support), "signs": list(inst.signs),
        "z": [float(v) for v in inst.z],
    })
    _write_config(out, cfg)
    return 0


def _path(cfg):
    X, y, _ = load_instance(cfg)
    return compute_path(X, y, lambda_min_factor=cfg.lambda_min_factor)


def cmd_path(cfg, ns):
    path = _path(cfg)
    out = _out(ns)
    io.dump_json(out / "path.json", io.path_to_dict(path))
    io.write_breakpoints(out / "breakpoints.csv", path)
    io.write_curve(out / "curve.csv", sample_curve(path, parse_grid(cfg.grid)))
    _write_config(out, cfg)
    print(f"tau = {path.tau!r}, {len(path.segments)} segments")
    return 0


def cmd_audit(cfg, ns):
    path = _path(cfg)
    out = _out(ns)
    spec = parse_grid(cfg.grid)
    audit = run_audit(path, spec)
    io.dump_json(out / "audit.json", audit.to_dict())
    if cfg.svg:
        rows = sample_curve(path, spec)
        lams = [r.lam for r in rows]
        svg = curves_svg(lams, [("Gamma", [r.gamma for r in rows]),
                                ("theta", [r.theta for r in rows]),
                                ("||beta||_1", [r.l1_norm for r in rows])])
        (out / "audit.svg").write_text(svg, encoding="utf-8")
    _write_config(out, cfg)
    for name, c in audit.claims.items():
        print(f"{name:22s} {c.verdict}  worst={c.worst_violation:.3e}")
    return 0 if audit.passed else 1


def cmd_check_gpc(cfg, ns):
    X, _, _ = load_instance(cfg)
    report = check_gpc(X, budget=cfg.gpc_budget, seed=cfg.seed, exhaustive=cfg.exhaustive,
                       jobs=ns.jobs or 1)
    out = _out(ns)
    io.dump_json(out / "gpc.json", report.to_dict())
    _write_config(out, cfg)
    print(f"{report.mode}: {report.pairs_checked} pairs, {len(report.violations)} violations")
    return 0


def cmd_solve(cfg, ns):
    if cfg.lam is None or cfg.lam <= 0:
        raise ValueError("solve needs --lambda > 0")
    X, y, _ = load_instance(cfg)
    if cfg.method == "exact":
        sol = exact_combinatorial_solve(X, y, cfg.lam)
    else:
        sol = proximal_solve(X, y, cfg.lam)
    out = _out(ns)
    io.dump_json(out / "solution.json", {
        "lambda": sol.lam,
        "coefficients": [float(v) for v in sol.coefficients],
        "support": list(sol.model.support), "signs": list(sol.model.signs),
        "objective": sol.objective,
        "kkt_status": sol.certificate.status.value if sol.certificate else None,
        "multiple_optima": sol.multiple_optima,
    })
    _write_config(out, cfg)
    return 0


COMMANDS = {"path": cmd_path, "check-gpc": cmd_check_gpc, "audit": cmd_audit,
            "generate": cmd_generate, "solve": cmd_solve}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--design", metavar="FILE")
    common.add_argument("--response", metavar="FILE")
    common.add_argument("--synthetic", metavar="N,P,S,SIGMA")
    common.add_argument("--seed", type=int, default=0, metavar="U64")
    common.add_argument("--lambda-min-factor", type=float, default=LAMBDA_MIN_FACTOR,
                        dest="lambda_min_factor", metavar="FLOAT")
    common.add_argument("--grid", default="log:50",
                        help="log:COUNT | explicit:v1,v2,... | midpoints")
    common.add_argument("--out", default=".", metavar="DIR")
    common.add_argument("--gpc-budget", type=int, default=DEFAULT_BUDGET, dest="gpc_budget",
                        metavar="U64")
    common.add_argument("--exhaustive", action="store_true")
    common.add_argument("--jobs", type=int, default=os.cpu_count(), metavar="N")
    common.add_argument("--svg", action="store_true")
    common.add_argument("--lambda", type=float, dest="lam", metavar="FLOAT")
    common.add_argument("--method", choices=("prox", "exact"), default="prox")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lassopath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig.from_args(ns)
    try:
        if cfg.seed < 0 or cfg.seed >= 2**64:
            raise ValueError("--seed must be an unsigned 64-bit integer")
        parse_grid(cfg.grid)
        return COMMANDS[cfg.command](cfg, ns)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateProblem as exc:
        print(json.dumps(exc.payload()), file=sys.stderr)
        return 3
    except CombinatorialOverflow as exc:
        print(json.dumps(exc.payload()), file=sys.stderr)
        return 5
    except (RankDeficient, IterationCap, NotConverged, LassoPathError) as exc:
        print(json.dumps(exc.payload()), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
