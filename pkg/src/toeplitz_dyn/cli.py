"""``toeplitz-dyn`` command line.

Exit codes: ``classify`` returns 0/1/2/3 for Hypercyclic / NotHypercyclic /
Indeterminate / Unsupported; every subcommand returns 64 on malformed input
and 65 when the numerical layer raises (with a JSON error body on stdout).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import export
from .classifier import ClassifyOptions, Status, classify
from .dynamics import gs_witness, orbit, transitivity_demo
from .eigensystem import antianalytic_eigen, inverse_eigen_param, residual, tridiagonal_eigenvector
from .errors import ToeplitzError
from .operators import TruncatedToeplitz, operator_norm_estimate
from .spectral import PointKind, classify_point, components, curve_box, spectrum_grid
from .symbol import (
    LaurentSymbol,
    TridiagonalSymbol,
    annulus_param_solve,
    as_tridiagonal,
    ellipse_contains,
    ellipse_intersects_unit_circle,
    ellipse_of,
    sup_norm,
    symbol_from_json,
    to_laurent,
)

log = logging.getLogger("toeplitz_dyn")

EXIT_USAGE = 64
EXIT_MODULE = 65
STATUS_EXIT = {
    Status.HYPERCYCLIC: 0,
    Status.NOT_HYPERCYCLIC: 1,
    Status.INDETERMINATE: 2,
    Status.UNSUPPORTED: 3,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which is a verdict code here
        raise UsageError(message)


# -- value parsers -------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """``"re"``, ``"re:im"`` or ``"re,im"``."""
    sep = ":" if ":" in text else ","
    parts = [p.strip() for p in text.split(sep)]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex number {text!r}")


def parse_tri(text: str) -> TridiagonalSymbol:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--tri needs three comma-separated entries a,b,c, got {text!r}")
    a, b, c = (parse_complex(p.strip()) for p in parts)
    return TridiagonalSymbol(a, b, c)


def parse_coeffs(text: str) -> LaurentSymbol:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--coeffs is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("--coeffs must be a JSON object mapping mode -> value")
    out = {}
    for k, v in data.items():
        try:
            n = int(k)
        except ValueError:
            raise UsageError(f"mode {k!r} is not an integer") from None
        if isinstance(v, (int, float)):
            out[n] = complex(v)
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
            out[n] = complex(v[0], v[1])
        else:
            raise UsageError(f"coefficient for mode {n} must be a number or [re, im]")
    return LaurentSymbol(out)


def parse_vector(text: str, dim: int) -> np.ndarray:
    """``eK`` for a basis vector, or a comma list of (complex) entries."""
    x = np.zeros(dim, dtype=complex)
    if text.startswith("e") and text[1:].isdigit():
        k = int(text[1:])
        if k >= dim:
            raise UsageError(f"basis index {k} >= dim {dim}")
        x[k] = 1.0
        return x
    vals = [parse_complex(p) for p in text.split(";")] if ";" in text else [parse_complex(p) for p in text.split()]
    if len(vals) > dim:
        raise UsageError("vector longer than dim")
    x[: len(vals)] = vals
    return x


@dataclass(frozen=True)
class RunConfig:
    command: str
    symbol: LaurentSymbol | TridiagonalSymbol
    dim: int = 1024
    grid: int = 256
    tol: float = 1e-9
    steps: int = 10
    seed: int = 42
    out: str | None = None
    fmt: str = "json"


def _symbol(args) -> LaurentSymbol | TridiagonalSymbol:
    given = [s for s in (args.tri, args.coeffs, args.symbol) if s is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --tri, --coeffs, --symbol")
    if args.tri is not None:
        return parse_tri(args.tri)
    if args.coeffs is not None:
        return parse_coeffs(args.coeffs)
    try:
        data = json.loads(Path(args.symbol).read_text())
        return symbol_from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read symbol file {args.symbol!r}: {exc}") from None


def _laurent(sym) -> LaurentSymbol:
    return to_laurent(sym) if isinstance(sym, TridiagonalSymbol) else sym


def _tri(sym) -> TridiagonalSymbol:
    tri = sym if isinstance(sym, TridiagonalSymbol) else as_tridiagonal(sym)
    if tri is None:
        raise UsageError("this subcommand needs a tridiagonal symbol (modes within -1..1)")
    return tri


def _cpx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# -- subcommands ---------------------------------------------------------------------


def cmd_classify(cfg: RunConfig, args) -> tuple[int, str]:
    v = classify(cfg.symbol, ClassifyOptions(tol=cfg.tol, diagnostics=args.diagnostics))
    return STATUS_EXIT[v.status], export.dumps(v.to_json())


def cmd_spectrum(cfg: RunConfig, args) -> tuple[int, str]:
    sym = _laurent(cfg.symbol)
    if sym.is_constant:
        raise UsageError("constant symbol: the spectrum is a single point")
    box = curve_box(sym)
    grid = spectrum_grid(sym, box, (cfg.grid, cfg.grid))
    if cfg.fmt == "csv":
        return 0, export.csv_text(["x", "y", "class", "winding"], grid.rows())
    rep = components(grid).to_json()
    return 0, export.dumps({"box": [_cpx(box[0]), _cpx(box[1])], **rep})


def cmd_winding(cfg: RunConfig, args) -> tuple[int, str]:
    sym = _laurent(cfg.symbol)
    if not args.point:
        raise UsageError("winding needs at least one --point")
    out = []
    for text in args.point:
        lam = parse_complex(text)
        pc = classify_point(sym, lam)
        row: dict[str, Any] = {"point": _cpx(lam), "kind": pc.kind.value, "winding": None}
        if pc.kind is not PointKind.ON_CURVE:
            row["winding"] = pc.winding
            row["fredholm_index"] = -pc.winding
            row["kernel_dims"] = [max(-pc.winding, 0), max(pc.winding, 0)]
        out.append(row)
    if cfg.fmt == "csv":
        rows = ((r["point"][0], r["point"][1], r["kind"], r["winding"]) for r in out)
        return 0, export.csv_text(["x", "y", "class", "winding"], rows)
    return 0, export.dumps({"points": out})


def cmd_eigen(cfg: RunConfig, args) -> tuple[int, str]:
    sym = cfg.symbol
    lsym = _laurent(sym)
    if args.z0 is not None:
        pair = tridiagonal_eigenvector(_tri(sym), parse_complex(args.z0), cfg.dim)
    elif args.lam is not None:
        pair = antianalytic_eigen(lsym, parse_complex(args.lam), cfg.dim)
    elif args.mu is not None:
        tri = _tri(sym)
        pair = tridiagonal_eigenvector(tri, inverse_eigen_param(tri, parse_complex(args.mu), cfg.tol), cfg.dim)
    else:
        raise UsageError("eigen needs --z0, --mu (tridiagonal) or --lam (anti-analytic)")
    residual(TruncatedToeplitz(lsym, cfg.dim), pair)
    if cfg.fmt == "csv":
        return 0, export.csv_text(["k", "re", "im"], export.vector_rows(pair.vector))
    return 0, export.dumps(pair.to_json(args.head))


def cmd_orbit(cfg: RunConfig, args) -> tuple[int, str]:
    T = TruncatedToeplitz(_laurent(cfg.symbol), cfg.dim)
    x = parse_vector(args.x, cfg.dim)
    tr = orbit(T, x, cfg.steps)
    if tr.contaminated:
        log.warning("orbit support reached the truncation edge; late norms are section artefacts")
    if cfg.fmt == "csv":
        return 0, export.csv_text(["step", "norm"], tr.rows())
    return 0, export.dumps(tr.to_json())


def _witness_pairs(sym, params: Sequence[str], dim: int):
    tri = as_tridiagonal(_laurent(sym))
    lsym = _laurent(sym)
    out = []
    for text in params:
        p = parse_complex(text)
        if lsym.is_antianalytic:
            pair = antianalytic_eigen(lsym, p, dim)
        elif tri is not None:
            pair = tridiagonal_eigenvector(tri, p, dim)
        else:
            raise UsageError("witness needs an anti-analytic or tridiagonal symbol")
        out.append((pair.eigenvalue, pair.vector, 1.0))
    return out


def cmd_witness(cfg: RunConfig, args) -> tuple[int, str]:
    if args.demo:
        e = np.zeros(cfg.dim, dtype=complex)
        e[0] = 1.0
        rep = transitivity_demo(_tri(cfg.symbol), e, e, K=args.k, max_steps=cfg.steps, seed=cfg.seed)
    else:
        if not args.small or not args.large:
            raise UsageError("witness needs --small and --large parameters (or --demo)")
        T = TruncatedToeplitz(_laurent(cfg.symbol), cfg.dim)
        rep = gs_witness(T, _witness_pairs(cfg.symbol, args.small, cfg.dim), _witness_pairs(cfg.symbol, args.large, cfg.dim), cfg.steps)
    if cfg.fmt == "csv":
        return 0, export.csv_text(["n", "norm_Tn_x", "norm_u_n", "approach"], rep.rows())
    return 0, export.dumps(rep.to_json())


def cmd_norm(cfg: RunConfig, args) -> tuple[int, str]:
    sym = _laurent(cfg.symbol)
    est = operator_norm_estimate(TruncatedToeplitz(sym, cfg.dim), seed=cfg.seed, method=args.method)
    return 0, export.dumps({"dim": cfg.dim, "norm": est, "sup_norm": sup_norm(sym), "method": args.method})


def cmd_ellipse(cfg: RunConfig, args) -> tuple[int, str]:
    tri = _tri(cfg.symbol)
    body: dict[str, Any] = {
        "geometry": ellipse_of(tri, cfg.tol).to_json(),
        "intersection": ellipse_intersects_unit_circle(tri, cfg.tol).to_json(),
    }
    if args.point:
        w = parse_complex(args.point[0])
        info: dict[str, Any] = {"point": _cpx(w), "containment": ellipse_contains(tri, w, cfg.tol).value}
        if info["containment"] == "Inside" and abs(tri.a) > abs(tri.c) > 0:
            r0, theta = annulus_param_solve(tri, w, cfg.tol)
            info["annulus_param"] = {"r0": r0, "theta": theta}
        body["point"] = info
    return 0, export.dumps(body)


COMMANDS = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "winding": cmd_winding,
    "eigen": cmd_eigen,
    "orbit": cmd_orbit,
    "witness": cmd_witness,
    "norm": cmd_norm,
    "ellipse": cmd_ellipse,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("symbol")
    g.add_argument("--tri", help="tridiagonal a,b,c; each entry re or re:im")
    g.add_argument("--coeffs", help='Fourier coefficients as JSON, e.g. \'{"-1":[2,0]}\'')
    g.add_argument("--symbol", help="path to a symbol JSON file")
    common.add_argument("--dim", type=int, default=1024, help="section dimension (default 1024)")
    common.add_argument("--grid", type=int, default=256, help="spectrum grid per side (default 256)")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance band (default 1e-9)")
    common.add_argument("--steps", type=int, default=10, help="orbit / witness steps (default 10)")
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = _Parser(prog="toeplitz-dyn", description="Hypercyclicity and spectra of banded Toeplitz operators on H^2.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("classify", parents=[common], help="hypercyclicity verdict")
    c.add_argument("--diagnostics", action="store_true", help="attach spectral component diagnostics")
    sub.add_parser("spectrum", parents=[common], help="spectral portrait and components")
    w = sub.add_parser("winding", parents=[common], help="winding numbers at points")
    w.add_argument("--point", action="append", help="complex point re:im (repeatable)")
    e = sub.add_parser("eigen", parents=[common], help="closed-form eigenvector and residual")
    e.add_argument("--z0", help="annulus parameter for tridiagonal symbols")
    e.add_argument("--mu", help="eigenvalue inside the ellipse (solved for z0)")
    e.add_argument("--lam", help="kernel point in the disc for anti-analytic symbols")
    e.add_argument("--head", type=int, default=16, help="coefficients shown in JSON (default 16)")
    o = sub.add_parser("orbit", parents=[common], help="orbit norms")
    o.add_argument("--x", default="e0", help="start vector: eK or re:im;re:im;...")
    wi = sub.add_parser("witness", parents=[common], help="transitivity witness")
    wi.add_argument("--small", action="append", help="parameter with |eigenvalue| < 1 (repeatable)")
    wi.add_argument("--large", action="append", help="parameter with |eigenvalue| > 1 (repeatable)")
    wi.add_argument("--demo", action="store_true", help="project e0 onto sampled eigenvectors instead")
    wi.add_argument("--k", type=int, default=12, help="eigenvectors per side for --demo")
    n = sub.add_parser("norm", parents=[common], help="operator norm of the section")
    n.add_argument("--method", choices=("lanczos", "power"), default="lanczos")
    el = sub.add_parser("ellipse", parents=[common], help="ellipse geometry of a tridiagonal symbol")
    el.add_argument("--point", action="append", help="optional point to locate")
    return p


def _setup_logging() -> None:
    level = os.environ.get("TOEPLITZ_DYN_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr, format="%(levelname)s %(message)s")


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    _setup_logging()
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig(
            args.command, _symbol(args), args.dim, args.grid, args.tol, args.steps, args.seed, args.out, args.fmt
        )
        if cfg.dim < 1 or cfg.grid < 8 or cfg.steps < 0:
            raise UsageError("need --dim >= 1, --grid >= 8, --steps >= 0")
        log.debug("running %s with %s", cfg.command, cfg)
        code, text = COMMANDS[cfg.command](cfg, args)
    except UsageError as exc:
        print(f"toeplitz-dyn: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ToeplitzError as exc:
        stdout.write(export.dumps({"error": exc.code, "message": str(exc)}))
        return EXIT_MODULE
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
