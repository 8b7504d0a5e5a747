"""Assembly of verification reports (canonical JSON, derived text)."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Any, Iterable

import numpy as np

from . import __version__
from . import families as fam
from .graded import make_space
from .suite import RowResult, notice_for

SCHEMA_VERSION = "1.0"
SCHEMA_RESOURCE = "report.schema.json"

__all__ = ["SCHEMA_VERSION", "RunConfig", "build_report", "cross_check_notices", "load_schema",
           "render_text", "to_json"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    identity: str = "all"
    N: int | None = None
    samples: int = 20
    tol: float | None = None
    seed: int = 0
    pole_margin: float = fam.DEFAULT_POLE_MARGIN
    format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not self.pole_margin > 0:
            raise ValueError("pole_margin must be positive")
        if self.N is not None and self.N < 1:
            raise ValueError("N must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def load_schema() -> dict:
    text = resources.files("qaybe").joinpath(SCHEMA_RESOURCE).read_text(encoding="utf-8")
    return json.loads(text)


def _clean(x: Any) -> Any:
    """Convert to plain JSON types; complex numbers become [re, im]."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real)), _clean(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if hasattr(x, "value"):
        return x.value
    return x


def _row_dict(res: RowResult, timings: bool) -> dict:
    spec = res.spec
    samples = []
    for idx, checks in res.checks:
        samples.append({
            "index": idx,
            "point": checks[0].point.as_dict(),
            "passed": all(c.passed for c in checks),
            "checks": [{
                "label": c.label,
                "family": c.family.value if c.family is not None else None,
                "residual_abs": c.residual_abs,
                "residual_rel": c.residual_rel,
                "tol": c.tol,
                "passed": c.passed,
                "details": c.details,
            } for c in checks],
        })
    row = {
        "identity": spec.identity.value,
        "family": spec.family.value,
        "N": spec.N,
        "expected": spec.expected,
        "control": spec.control,
        "samples_requested": res.samples_requested,
        "samples_run": res.samples_run,
        "samples_rejected": len(res.rejected),
        "rejected": [{"index": i, "reason": r} for i, r in res.rejected],
        "max_residual_rel": res.max_residual_rel,
        "tol": res.tol,
        "identity_holds": res.identity_passed,
        "passed": res.passed,
        "notice": notice_for(spec.family, spec.identity) if not res.identity_passed else None,
        "samples": samples,
    }
    if timings:
        row["seconds"] = res.seconds
    return row


def cross_check_notices(Ns: Iterable[int], seed: int, margin: float = fam.DEFAULT_POLE_MARGIN) -> dict:
    """Readings of the ambiguous formulas, measured at one seeded point per N.

    ``rcal_literal``: distance of the literal 𝓡 formula from S + tail with
    cot and with coth.  ``trig_index_range``: distance of the literal main
    formula (signed i != j, so j = -i included) from the gauge route.
    """
    rng = np.random.default_rng([seed, 0x5EED])
    out = {"rcal_literal": [], "trig_index_range": []}
    for N in sorted(set(Ns)):
        space = make_space(N)
        while True:
            h, u, v = (complex(*rng.uniform(-1, 1, 2)) for _ in range(3))
            try:
                comp = fam.rcal_compositional(space, h, u, v, margin)
                cot = fam.rel_diff(fam.rcal_literal(space, h, u, v, margin), comp)
                coth = fam.rel_diff(fam.rcal_literal(space, h, u, v, margin, hyperbolic=True), comp)
                lit = fam.r_trig_literal(space, h, u, v, margin)
                gauge_err = fam.rel_diff(fam.gauge(lit, -u, -v), fam.rcal_twisted(space, h, u, v, margin))
            except fam.PoleError:
                continue
            break
        point = {"hbar": h, "u": u, "v": v}
        out["rcal_literal"].append({"N": N, "point": point, "cot_rel_diff": cot, "coth_rel_diff": coth,
                                    "reading": "cot"})
        out["trig_index_range"].append({"N": N, "point": point, "reading": "signed i != j (includes j = -i)",
                                        "gauge_route_rel_diff": gauge_err,
                                        "passes": gauge_err <= fam.CROSS_CHECK_TOL})
    return out


def build_report(config: RunConfig, rows: list[RowResult], notices: dict | None = None,
                 timings: bool = False, extra: dict | None = None) -> dict:
    row_dicts = [_row_dict(r, timings) for r in rows]
    n_pass = sum(r["passed"] for r in row_dicts)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "qaybe",
        "version": __version__,
        "config": asdict(config),
        "summary": {
            "rows": len(row_dicts),
            "passed": n_pass,
            "failed": len(row_dicts) - n_pass,
            "status": "pass" if row_dicts and n_pass == len(row_dicts) else "fail",
        },
        "notices": notices or {},
        "rows": row_dicts,
    }
    if extra:
        report.update(extra)
    return _clean(report)


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def render_text(report: dict) -> str:
    """Human-readable summary derived from the JSON report."""
    cfg = report["config"]
    lines = [f"qaybe {report['version']}  {cfg['command']}  seed={cfg['seed']}"]
    for row in report.get("rows", []):
        status = "PASS" if row["passed"] else "FAIL"
        exp = " (expected fail)" if row["expected"] == "fail" else ""
        lines.append(
            f"{status}  {row['identity']:<20} {row['family']:<18} N={row['N']}  "
            f"run={row['samples_run']} rejected={row['samples_rejected']}  "
            f"max_rel={_fmt(row['max_residual_rel'])}{exp}")
        if row.get("notice"):
            lines.append(f"      note: {row['notice']}")
    for key, items in report.get("notices", {}).items():
        for item in items:
            desc = ", ".join(f"{k}={v}" for k, v in item.items() if k != "point")
            lines.append(f"notice {key}: {desc}")
    s = report["summary"]
    lines.append(f"{s['status'].upper()}: {s['passed']}/{s['rows']} rows")
    return "\n".join(lines) + "\n"
