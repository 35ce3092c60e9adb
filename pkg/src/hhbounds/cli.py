"""Command-line front end.

Every command writes one report (JSON by default, CSV with ``--format csv``) and
exits 0 when every requested verification passes, 1 when one fails (the report
carries the witness), and 2 on usage or evaluation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from . import bounds, convexity
from .box import Box
from .corpus import CORPUS, CorpusEntry, CorpusSettings, run_corpus
from .errors import HHError, WeightRejectedError
from .expr import ExprSyntaxError, max_var_index, parse
from .matrix import MatrixInterval, matrix_hh_sandwich
from .quadrature import gauss_legendre

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2
CSV_COLUMNS = ("name", "lower", "mean", "upper", "quad_error", "verified")
COMMANDS = ("check-convexity", "sandwich", "fejer", "jensen", "matrix-sandwich", "corpus")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    fn: Optional[str] = None
    weight: Optional[str] = None
    box: Optional[str] = None
    matrix_a: Optional[str] = None
    matrix_b: Optional[str] = None
    rows: Optional[int] = None
    points: Optional[str] = None
    weights: Optional[str] = None
    direction: str = "convex"
    kind: str = "nfold"
    quad_nodes: int = 16
    trials: int = 10_000
    tolerance: float = 1e-9
    seed: int = 0
    format: str = "json"
    out: str = "-"
    jobs: int = 1
    inject_fn: Optional[str] = None
    inject_box: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be > 0")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.quad_nodes < 1:
            raise UsageError("--quad-nodes must be >= 1")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")

    def echo(self) -> dict[str, Any]:
        keys = {
            "check-convexity": ("fn", "box", "kind", "trials", "tolerance", "seed"),
            "sandwich": ("fn", "box", "direction", "quad_nodes", "tolerance"),
            "fejer": ("fn", "weight", "box", "direction", "quad_nodes", "trials", "tolerance", "seed"),
            "jensen": ("fn", "points", "weights", "tolerance"),
            "matrix-sandwich": ("fn", "rows", "matrix_a", "matrix_b", "direction", "quad_nodes", "tolerance"),
            "corpus": ("quad_nodes", "trials", "tolerance", "seed", "inject_fn", "inject_box"),
        }[self.command]
        return {k: getattr(self, k) for k in keys}


# --- argument grammar --------------------------------------------------------


def _floats(text: str, what: str) -> list[float]:
    try:
        values = [float(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not all(np.isfinite(values)):
        raise UsageError(f"{what}: values must be finite")
    return values


def parse_box(text: str) -> Box:
    """``"lo,hi;lo,hi;..."`` with one ``lo,hi`` pair per axis."""
    axes = []
    for part in text.split(";"):
        pair = _floats(part.strip(), "--box")
        if len(pair) != 2:
            raise UsageError(f"--box: each axis needs 'lo,hi', got {part!r}")
        axes.append(pair)
    try:
        return Box.from_intervals(axes)
    except HHError as exc:
        raise UsageError(f"--box: {exc}") from None


def parse_matrix(text: str, rows: int, what: str) -> np.ndarray:
    text = text.strip()
    if text.startswith("entries="):
        text = text[len("entries="):]
    values = _floats(text, what)
    if len(values) != rows * rows:
        raise UsageError(f"{what}: expected {rows * rows} row-major entries, got {len(values)}")
    return np.array(values).reshape(rows, rows)


def _parse_groups(text: str, what: str) -> list[list[float]]:
    return [_floats(part.strip(), what) for part in text.split(";")]


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _function(source: str, dim: int, flag: str = "--fn"):
    e = parse(source)
    if max_var_index(e) > dim:
        raise UsageError(f"{flag} uses x{max_var_index(e)} but the domain has dimension {dim}")
    return e


# --- commands ----------------------------------------------------------------


def _cmd_check(cfg: RunConfig) -> tuple[dict, int, list[dict]]:
    box = parse_box(_require(cfg.box, "--box"))
    f = _function(_require(cfg.fn, "--fn"), box.n)
    if cfg.kind not in ("nfold", "joint", "both"):
        raise UsageError("--kind must be nfold, joint or both")
    results = {}
    if cfg.kind in ("nfold", "both"):
        results["nfold"] = convexity.is_nfold_convex_fn(f, box, cfg.trials, cfg.tolerance, cfg.seed).to_dict()
    if cfg.kind in ("joint", "both"):
        results["convex"] = convexity.is_convex_fn(f, box, cfg.trials, cfg.tolerance, cfg.seed).to_dict()
    ok = all(v["status"] == "not_falsified" for v in results.values())
    rows = [{"name": k, "verified": v["status"] == "not_falsified"} for k, v in results.items()]
    return results, EXIT_OK if ok else EXIT_FAILED, rows


def _report_result(report: bounds.BoundsReport, name: str) -> tuple[dict, int, list[dict]]:
    d = report.to_dict()
    row = {k: d.get(k) for k in CSV_COLUMNS if k != "name"}
    row["name"] = name
    return {"report": d}, EXIT_OK if report.verified else EXIT_FAILED, [row]


def _cmd_sandwich(cfg: RunConfig):
    box = parse_box(_require(cfg.box, "--box"))
    f = _function(_require(cfg.fn, "--fn"), box.n)
    report = bounds.hh_sandwich(f, box, gauss_legendre(cfg.quad_nodes), cfg.tolerance, cfg.direction)
    return _report_result(report, "sandwich")


def _cmd_fejer(cfg: RunConfig):
    box = parse_box(_require(cfg.box, "--box"))
    f = _function(_require(cfg.fn, "--fn"), box.n)
    p = _function(_require(cfg.weight, "--weight"), box.n, "--weight")
    try:
        report = bounds.fejer_sandwich(
            f, p, box, gauss_legendre(cfg.quad_nodes), cfg.tolerance, cfg.direction, cfg.trials, cfg.seed
        )
    except WeightRejectedError as exc:
        results = {"rejected": True, "message": str(exc), "verdict": exc.verdict.to_dict()}
        return results, EXIT_FAILED, [{"name": "fejer", "verified": False}]
    return _report_result(report, "fejer")


def _cmd_jensen(cfg: RunConfig):
    points = _parse_groups(_require(cfg.points, "--points"), "--points")
    weights = _parse_groups(_require(cfg.weights, "--weights"), "--weights")
    try:
        inst = bounds.JensenInstance(points, weights)
    except HHError as exc:
        raise UsageError(f"jensen instance: {exc}") from None
    f = _function(_require(cfg.fn, "--fn"), inst.n)
    lhs, rhs, gap = bounds.jensen_bound(f, inst)
    ok = gap >= -cfg.tolerance
    results = {"lhs": lhs, "rhs": rhs, "gap": gap, "verified": ok, "tolerance": cfg.tolerance}
    return results, EXIT_OK if ok else EXIT_FAILED, [{"name": "jensen", "lower": lhs, "upper": rhs, "verified": ok}]


def _cmd_matrix(cfg: RunConfig):
    rows = _require(cfg.rows, "--rows")
    if rows < 1:
        raise UsageError("--rows must be >= 1")
    A = parse_matrix(_require(cfg.matrix_a, "--matrix-a"), rows, "--matrix-a")
    B = parse_matrix(_require(cfg.matrix_b, "--matrix-b"), rows, "--matrix-b")
    try:
        iv = MatrixInterval(A, B)
    except HHError as exc:
        raise UsageError(str(exc)) from None
    f = _function(_require(cfg.fn, "--fn"), rows * rows)
    report = matrix_hh_sandwich(f, iv, gauss_legendre(cfg.quad_nodes), cfg.tolerance, cfg.direction)
    return _report_result(report, "matrix-sandwich")


def _cmd_corpus(cfg: RunConfig):
    entries = CORPUS
    if cfg.inject_fn is not None:
        box = parse_box(_require(cfg.inject_box, "--inject-box"))
        _function(cfg.inject_fn, box.n, "--inject-fn")
        injected = CorpusEntry(
            "injected", "sandwich", cfg.inject_fn, tuple(box.intervals()),
            {"direction": cfg.direction}, "user-supplied entry",
        )
        entries = entries + (injected,)
    settings = CorpusSettings(cfg.seed, cfg.tolerance, cfg.quad_nodes, cfg.trials)
    summary = run_corpus(settings, entries, cfg.jobs)
    rows = [{k: r.get(k) for k in CSV_COLUMNS} for r in summary["entries"]]
    return summary, EXIT_OK if summary["failed"] == 0 else EXIT_FAILED, rows


_DISPATCH = {
    "check-convexity": _cmd_check,
    "sandwich": _cmd_sandwich,
    "fejer": _cmd_fejer,
    "jensen": _cmd_jensen,
    "matrix-sandwich": _cmd_matrix,
    "corpus": _cmd_corpus,
}


# --- output ------------------------------------------------------------------


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(doc: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_csv_cell(r.get(c)) for c in CSV_COLUMNS])
        return buf.getvalue()
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute ``cfg``; returns ``(exit_status, report_text)``."""
    doc: dict[str, Any] = {"schema": SCHEMA_VERSION, "command": cfg.command, "inputs": cfg.echo()}
    rows: list[dict] = []
    try:
        results, status, rows = _DISPATCH[cfg.command](cfg)
        doc["results"] = results
    except ExprSyntaxError as exc:
        status = EXIT_ERROR
        doc["error"] = {"type": "syntax", "message": exc.message, "span": [exc.span.start, exc.span.end]}
    except (UsageError, HHError) as exc:
        status = EXIT_ERROR
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
    doc["exit_status"] = status
    return status, render(doc, rows, cfg.format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hhbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--quad-nodes", type=int, default=16, help="Gauss-Legendre nodes per axis")
        p.add_argument("--trials", type=int, default=10_000)
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--direction", choices=("convex", "concave"), default="convex")

    p = sub.add_parser("check-convexity", help="falsify coordinatewise and/or joint convexity")
    p.add_argument("--fn", required=True)
    p.add_argument("--box", required=True, help='axes as "lo,hi;lo,hi"')
    p.add_argument("--kind", choices=("nfold", "joint", "both"), default="nfold")
    common(p)

    p = sub.add_parser("sandwich", help="midpoint <= mean <= corner average")
    p.add_argument("--fn", required=True)
    p.add_argument("--box", required=True)
    common(p)

    p = sub.add_parser("fejer", help="weighted chain with a symmetric weight")
    p.add_argument("--fn", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--box", required=True)
    common(p)

    p = sub.add_parser("jensen", help="discrete coordinatewise Jensen bound")
    p.add_argument("--fn", required=True)
    p.add_argument("--points", required=True, help='per-coordinate points "x,x;x,x,x"')
    p.add_argument("--weights", required=True, help='per-coordinate weights "a,a;a,a,a"')
    common(p)

    p = sub.add_parser("matrix-sandwich", help="chain on an elementwise matrix interval")
    p.add_argument("--fn", required=True, help="expression in x1..x{rows^2}, row-major")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--matrix-a", required=True, help="row-major entries of A")
    p.add_argument("--matrix-b", required=True, help="row-major entries of B")
    common(p)

    p = sub.add_parser("corpus", help="run the built-in regression corpus")
    p.add_argument("--jobs", type=int, default=1, help="run entries on this many threads")
    p.add_argument("--inject-fn", help="append an extra entry expected to satisfy the chain")
    p.add_argument("--inject-box")
    common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"hhbounds: {exc}", file=sys.stderr)
        return EXIT_ERROR
    status, text = run(cfg)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
