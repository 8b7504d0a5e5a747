"""Command-line driver: ``qaybe {verify,suite,bench,describe}``.

Exit status: 0 when every row passes, 1 when any row fails, 2 on usage or
configuration errors (including an unwritable output path).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import families as fam
from .bench import BENCH_NS, DEFAULT_MEMORY_BUDGET_MB, run_bench
from .families import PoleError, RFamily, SpectralPoint
from .graded import GradedOp, compose, identity, make_space
from .operators import j_leg, koszul_signs, superpermutation
from .report import RunConfig, _clean, build_report, cross_check_notices, render_text, to_json
from .suite import DEFAULT_SEED, SUITE_NS, RowSpec, applicable_identities, default_suite, run_row
from .verify import Identity

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OUTPUT_DIR_ENV = "QAYBE_OUTPUT_DIR"

_DESCRIBE_DEFAULTS = {"hbar": "0.37+0.21i", "u": "0.23+0.11i", "v": "-0.41+0.17i"}
_SPECTRAL = {RFamily.TRIG_LITERAL, RFamily.TRIG_VIA_GAUGE, RFamily.RCAL, RFamily.RCAL_TWISTED,
             RFamily.S_CONST, RFamily.S_TWISTED, RFamily.F_TWIST, RFamily.G_GAUGE}


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse "a+bi", "a", "bi", "-i" and similar into a complex number."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if not s:
        raise ValueError("empty number")
    if s.endswith("i"):
        body = s[:-1]
        # split off the imaginary coefficient at the last sign not part of an exponent
        cut = max((k for k, ch in enumerate(body) if ch in "+-" and (k == 0 or body[k - 1] not in "eE")),
                  default=-1)
        if cut <= 0:
            re_part, im_part = "", body
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("", "+", "-"):
            im_part += "1"
        return complex(float(re_part) if re_part else 0.0, float(im_part))
    return complex(float(s), 0.0)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r} (use a+bi)")


def _positive_real_arg(text: str) -> float:
    z = _complex_arg(text)
    if z.imag != 0 or not z.real > 0:
        raise argparse.ArgumentTypeError(f"expected a positive real number, got {text!r}")
    return z.real


def _positive_int_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _seed_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an unsigned integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected an unsigned integer, got {text!r}")
    return n


def _family_arg(text: str) -> RFamily:
    try:
        return RFamily(text)
    except ValueError:
        names = ", ".join(f.value for f in RFamily)
        raise argparse.ArgumentTypeError(f"unknown family {text!r}; choose from {names}")


def _identity_arg(text: str) -> str:
    if text == "all":
        return text
    try:
        return Identity(text).value
    except ValueError:
        names = ", ".join(i.value for i in Identity)
        raise argparse.ArgumentTypeError(f"unknown identity {text!r}; choose from all, {names}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=_positive_int_arg, default=20)
    sampling.add_argument("--tol", type=_positive_real_arg, default=None,
                          help="relative tolerance (default: 1e-10 rational, 1e-9 trigonometric)")
    sampling.add_argument("--pole-margin", type=_positive_real_arg, default=fam.DEFAULT_POLE_MARGIN)
    sampling.add_argument("--timings", action="store_true",
                          help="record wall-clock seconds per row (reports stop being byte-reproducible)")

    p = argparse.ArgumentParser(prog="qaybe", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qaybe {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common, sampling], help="check one identity (or all) for a family")
    v.add_argument("--family", type=_family_arg, required=True)
    v.add_argument("--identity", type=_identity_arg, default="all")
    v.add_argument("--N", type=_positive_int_arg, default=3)

    s = sub.add_parser("suite", parents=[common, sampling], help="run the family x identity matrix")
    s.add_argument("--family", type=_family_arg, default=None)
    s.add_argument("--identity", type=_identity_arg, default="all")
    s.add_argument("--N", type=_positive_int_arg, default=None, help="restrict to one N (default 1, 2, 3)")

    b = sub.add_parser("bench", parents=[common], help="time construction and a three-leg residual")
    b.add_argument("--N", type=_positive_int_arg, action="append", default=None,
                   help=f"repeatable; default {' '.join(map(str, BENCH_NS))}")
    b.add_argument("--memory-budget-mb", type=_positive_real_arg, default=DEFAULT_MEMORY_BUDGET_MB)

    d = sub.add_parser("describe", parents=[common], help="list the nonzero entries of an operator")
    d.add_argument("--family", type=_family_arg, required=True)
    d.add_argument("--N", type=_positive_int_arg, default=1)
    d.add_argument("--pole-margin", type=_positive_real_arg, default=fam.DEFAULT_POLE_MARGIN)
    for name, default in _DESCRIBE_DEFAULTS.items():
        d.add_argument(f"--{name}", type=_complex_arg, default=_complex_arg(default))
    return p


# --- commands ------------------------------------------------------------------------------

def _notices_for(families, Ns, seed, margin) -> dict:
    if any(f in _SPECTRAL for f in families):
        return cross_check_notices(Ns, seed, margin)
    return {}


def cmd_verify(args) -> tuple[dict, int]:
    family = args.family
    if args.identity == "all":
        identities = applicable_identities(family)
    else:
        identities = (Identity(args.identity),)
    config = RunConfig("verify", family.value, args.identity, args.N, args.samples, args.tol, args.seed,
                       args.pole_margin, args.format, args.out)
    rows = []
    for ident in identities:
        try:
            rows.append(run_row(RowSpec(ident, family, args.N), args.samples, args.seed, args.tol,
                                args.pole_margin))
        except (ValueError, KeyError) as exc:
            raise UsageError(f"identity {ident.value} cannot be evaluated for family {family.value}: {exc}")
    report = build_report(config, rows, _notices_for([family], [args.N], args.seed, args.pole_margin),
                          timings=args.timings)
    return report, EXIT_PASS if report["summary"]["status"] == "pass" else EXIT_FAIL


def cmd_suite(args) -> tuple[dict, int]:
    Ns = (args.N,) if args.N else SUITE_NS
    specs = default_suite(Ns)
    if args.family is not None:
        specs = [s for s in specs if s.family is args.family]
    if args.identity != "all":
        specs = [s for s in specs if s.identity.value == args.identity]
    if not specs:
        raise UsageError("no suite rows match the requested family/identity")
    config = RunConfig("suite", args.family.value if args.family else None, args.identity, args.N,
                       args.samples, args.tol, args.seed, args.pole_margin, args.format, args.out)
    rows = [run_row(s, args.samples, args.seed, args.tol, args.pole_margin) for s in specs]
    report = build_report(config, rows, cross_check_notices(Ns, args.seed, args.pole_margin),
                          timings=args.timings)
    return report, EXIT_PASS if report["summary"]["status"] == "pass" else EXIT_FAIL


def cmd_bench(args) -> tuple[dict, int]:
    Ns = tuple(args.N) if args.N else BENCH_NS
    res = run_bench(Ns, args.seed, args.memory_budget_mb)
    report = {"tool": "qaybe", "version": __version__, "command": "bench", "seed": args.seed,
              "memory_budget_mb": args.memory_budget_mb, **res}
    ok = res["dense_sparse_max_gap_N2"] <= 1e-12 and all(
        r.get("aybe_residual_rel", 0.0) <= 1e-9 for r in res["results"])
    return _json_ready(report), EXIT_PASS if ok else EXIT_FAIL


def _entry_list(A: GradedOp) -> list[dict]:
    """Nonzero entries with signed indices and the coefficient of e ⊗ ... ⊗ e."""
    space = A.space
    coo = A.mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    rows, cols, vals = coo.row[order], coo.col[order], coo.data[order]
    signs = koszul_signs(space, A.legs, rows, cols)
    out = []
    d = space.dim
    for r, c, val, s in zip(rows, cols, vals, signs):
        if val == 0:
            continue
        ri = [space.index(int(r) // d ** (A.legs - 1 - t) % d) for t in range(A.legs)]
        ci = [space.index(int(c) // d ** (A.legs - 1 - t) % d) for t in range(A.legs)]
        out.append({"row": ri, "col": ci, "coefficient": complex(val * s), "stored": complex(val)})
    return out


def cmd_describe(args) -> tuple[dict, int]:
    space = make_space(args.N)
    point = SpectralPoint(hbar=args.hbar, u=args.u, v=args.v)
    op = fam.build(args.family, space, point, args.pole_margin)
    report = {"tool": "qaybe", "version": __version__, "command": "describe", "family": args.family.value,
              "N": args.N, "point": point.as_dict(), "legs": op.legs, "nnz": op.nnz,
              "is_identity": bool(fam.rel_diff(op, identity(space, op.legs)) == 0.0),
              "entries": _entry_list(op)}
    if args.family is RFamily.RATIONAL:
        P = superpermutation(space)
        JJP = compose(compose(j_leg(space, 1, 2), j_leg(space, 2, 2)), P)
        parts = [("Id", 1 / args.hbar, identity(space, 2)), ("P12", 1 / (args.u - args.v), P),
                 ("J1J2P12", 1 / (args.u + args.v), JJP)]
        total = parts[0][2] * parts[0][1] + parts[1][2] * parts[1][1] + parts[2][2] * parts[2][1]
        report["contributions"] = [{"name": n, "coefficient": c, "entries": _entry_list(X)} for n, c, X in parts]
        report["reconstruction_rel_diff"] = fam.rel_diff(op, total)
    return _json_ready(report), EXIT_PASS


# --- output ---------------------------------------------------------------------------------

def _json_ready(obj):
    return _clean(obj)


def _render_bench(rep: dict) -> str:
    lines = [f"qaybe {rep['version']} bench  seed={rep['seed']}"]
    for r in rep["results"]:
        if "aborted" in r:
            lines.append(f"N={r['N']:<3} aborted: {r['aborted']}")
            continue
        lines.append(f"N={r['N']:<3} nnz(R)={r['nnz_r_trig']:<7} build={r['construct_seconds']:.3f}s "
                     f"aybe={r['aybe_seconds']:.3f}s mult={r['multiply_seconds']:.4f}s "
                     f"rel={r['aybe_residual_rel']:.2e}")
    lines.append(f"nnz growth exponent: {rep['nnz_growth_exponent']}")
    lines.append(f"dense vs sparse max gap (N=2): {rep['dense_sparse_max_gap_N2']:.2e}")
    return "\n".join(lines) + "\n"


def _render_describe(rep: dict) -> str:
    def fmt(z):
        return f"{z[0]:+.6g}{z[1]:+.6g}i"

    def ent(e):
        units = " ⊗ ".join(f"e[{i},{j}]" for i, j in zip(e["row"], e["col"]))
        return f"  {fmt(e['coefficient'])}  {units}"

    lines = [f"{rep['family']}  N={rep['N']}  legs={rep['legs']}  nnz={rep['nnz']}"
             f"{'  (identity)' if rep['is_identity'] else ''}"]
    lines += [ent(e) for e in rep["entries"]]
    for part in rep.get("contributions", []):
        lines.append(f"contribution {part['name']}  coefficient {fmt(part['coefficient'])}")
        lines += [ent(e) for e in part["entries"]]
    if "reconstruction_rel_diff" in rep:
        lines.append(f"Id/ħ + P/(u-v) + J1J2P/(u+v) reconstruction rel diff: {rep['reconstruction_rel_diff']:.2e}")
    return "\n".join(lines) + "\n"


def _render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report) if command in ("verify", "suite") else json.dumps(report, indent=2, sort_keys=True) + "\n"
    if command in ("verify", "suite"):
        return render_text(report)
    return _render_bench(report) if command == "bench" else _render_describe(report)


def _output_path(out: str | None, command: str, fmt: str) -> Path | None:
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        name = Path(out).name if out else f"qaybe-{command}.{'json' if fmt == 'json' else 'txt'}"
        return Path(env_dir) / name
    return Path(out) if out else None


COMMANDS = {"verify": cmd_verify, "suite": cmd_suite, "bench": cmd_bench, "describe": cmd_describe}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        report, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qaybe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PoleError as exc:
        print(f"qaybe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(args.command, report, args.format)
    path = _output_path(args.out, args.command, args.format)
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"qaybe: error: cannot write {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    if code == EXIT_FAIL and args.command in ("verify", "suite"):
        for row in report["rows"]:
            if not row["passed"] and row.get("notice"):
                print(f"qaybe: {row['family']} {row['identity']}: {row['notice']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
