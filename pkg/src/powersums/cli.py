"""Command-line front end.

Exit codes: 0 on success, 2 when the mathematics says no (no dual form,
failed conjugacy, unrepresentable form, numeric non-convergence), 1 on
usage errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import apolarity, decompose, duality, exactla, lattice, secants
from .forms import Form, FormError, ParseError, Variance, format_form, infer_variance, parse
from .validation import parse_points

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MATH = 2

GRAMMAR = (
    "form := ['-'] term (('+'|'-') term)*; term := rational ['*' powers] | powers; "
    "powers := var ('^' int)? ('*' var ('^' int)?)*; rational := int ['/' posint]; "
    "variables x0..x9 (primal) or y0..y9 (dual)"
)


class UsageError(Exception):
    pass


class MathFailure(Exception):
    """Carries a payload to print before exiting with status 2."""

    def __init__(self, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.payload = payload or {}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _read(value: str) -> str:
    if value.startswith("@"):
        try:
            with open(value[1:], encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise UsageError(f"cannot read {value[1:]}: {exc.strerror}") from None
    return value


def _nvars_hint(text: str) -> int:
    idx = [int(c) for c, prev in zip(text[1:], text) if prev in "xy" and c.isdigit()]
    return max(idx) + 1 if idx else 1


def _form(args, flag: str = "form", required: bool = True) -> Optional[Form]:
    raw = getattr(args, flag.replace("-", "_"))
    if raw is None:
        if required:
            raise UsageError(f"--{flag} is required")
        return None
    text = _read(raw)
    nvars = args.nvars or _nvars_hint(text)
    if not args.nvars and args.points is not None:
        # the points fix the arity when the form does not mention every variable
        pts = _points(args)
        if pts:
            nvars = max(nvars, len(pts[0]))
    try:
        return parse(text, nvars, infer_variance(text))
    except (ParseError, FormError) as exc:
        raise UsageError(f"--{flag}: {exc}\ngrammar: {GRAMMAR}") from None


def _points(args, required: bool = True):
    if args.points is None:
        if required:
            raise UsageError("--points is required (semicolon-separated rational tuples, e.g. '1,0;0,1')")
        return None
    try:
        return parse_points(_read(args.points))
    except (ValueError, FormError) as exc:
        raise UsageError(f"--points: {exc}") from None


def _q(x) -> str:
    return str(x)


def _matrix(M: exactla.RationalMatrix) -> List[List[str]]:
    return [[_q(v) for v in row] for row in M.tolist()]


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise UsageError(f"--{name} is required")


# ---------------------------------------------------------------------------
# subcommands; each returns a JSON-able payload


def cmd_pair(args) -> dict:
    F = _form(args)
    G = _form(args, "dual-form")
    return {"pairing": _q(apolarity.apolar_pair(G, F))}


def cmd_polar(args) -> dict:
    F = _form(args)
    G = _form(args, "dual-form")
    return {"polar": format_form(apolarity.polarize(G, F))}


def cmd_cat(args) -> dict:
    F = _form(args)
    _require(args, "degree")
    cat = apolarity.catalecticant(F, args.degree)
    return {
        "k": cat.source_degree,
        "rank": cat.rank(),
        "shape": list(cat.matrix.shape),
        "source_basis": [format_form(Form(F.nvars, cat.source_degree, cat.source_variance, {e: 1})) for e in cat.source_basis],
        "target_basis": [format_form(Form(F.nvars, cat.target_degree, cat.target_variance, {e: 1})) for e in cat.target_basis],
        "matrix": _matrix(cat.matrix),
    }


def cmd_dual(args) -> dict:
    F = _form(args)
    try:
        Omega = duality.dual_form(F)
    except duality.DegenerateFormError as exc:
        raise MathFailure(str(exc), {"degenerate": True, "rank": exc.rank}) from None
    if Omega is None:
        raise MathFailure("no dual form: the inverse catalecticant is not a catalecticant", {"dual": None})
    pair = duality.verify_dual_pair(F, Omega)
    return {"dual": format_form(Omega), "kappa": _q(pair.kappa)}


def cmd_conjugate(args) -> dict:
    F = _form(args)
    pts = _points(args)
    verdict = duality.conjugate_tuple_check(F, pts)
    payload = {
        "verdict": "PASS" if verdict.passed else "FAIL",
        "matrix": _matrix(verdict.matrix),
        "diagonal": [_q(v) for v in verdict.diagonal],
        "squares_independent": verdict.squares_independent,
        "failures": [list(f) for f in verdict.failures],
    }
    if not verdict.passed:
        raise MathFailure("points are not mutually conjugate", payload)
    return payload


def cmd_certify(args) -> dict:
    F = _form(args)
    companion = _form(args, "dual-form", required=False)
    pts = _points(args)
    try:
        cert = duality.vsp_certify(F, pts, companion)
    except duality.ZeroCoefficientError as exc:
        raise MathFailure(str(exc), {"alphas": [_q(a) for a in exc.alphas], "zero_indices": exc.zero_indices}) from None
    except duality.NotRepresentableError as exc:
        raise MathFailure(str(exc), {"representable": False}) from None
    return cert.to_record()


def cmd_synth(args) -> dict:
    pts = _points(args)
    _require(args, "degree")
    if args.alphas is None:
        alphas = [Fraction(1)] * len(pts)
    else:
        try:
            alphas = [Fraction(a.strip()) for a in _read(args.alphas).split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--alphas: {exc}") from None
    try:
        syn = duality.power_sum_synthesize(pts, alphas, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {
        "form": format_form(syn.form),
        "powers_independent": syn.powers_independent,
        "nondegenerate": syn.nondegenerate,
    }


def cmd_sylvester(args) -> dict:
    F = _form(args)
    try:
        dec = decompose.sylvester_binary(F)
    except decompose.SylvesterObstruction as exc:
        raise MathFailure(
            str(exc),
            {
                "apolar_form": format_form(exc.apolar_form) if exc.apolar_form is not None else None,
                "rational_roots": [[_q(v) for v in r] for r in exc.rational_roots],
                "rank": exc.rank,
                "kernel_dimension": exc.kernel_dimension,
            },
        ) from None
    except FormError as exc:
        raise UsageError(str(exc)) from None
    return {
        "rank": dec.rank,
        "points": [[_q(v) for v in p] for p in dec.points],
        "alphas": [_q(a) for a in dec.alphas],
        "apolar_form": format_form(dec.apolar_form),
        "unique": dec.unique,
        "exact": dec.exact,
    }


def cmd_decompose_numeric(args) -> dict:
    F = _form(args)
    _require(args, "n", "seed")
    tol = 1e-8 if args.tol is None else args.tol
    res = decompose.numeric_waring(F, args.n, args.seed, tol)
    payload = {
        "points": [[float(x) for x in row] for row in res.points],
        "alphas": [float(a) for a in res.alphas],
        "residual": res.residual,
        "success": res.success,
        "jacobian_rank": res.jacobian_rank,
        "nullity": res.nullity,
        "expected_nullity": secants.expected_dim_vsp(F.degree, F.nvars - 1, args.n),
        "iterations": res.iterations,
        "restarts": res.restarts,
    }
    if not res.success:
        raise MathFailure(f"no convergence: best residual {res.residual:.3e} >= tol {tol:g}", payload)
    return payload


def cmd_terracini(args) -> dict:
    _require(args, "degree", "n")
    if args.nvars is None:
        raise UsageError("--nvars is required")
    seed = args.seed or 0
    smp = secants.terracini_sample(args.degree, args.nvars - 1, args.n, seed)
    return {
        "m": smp.m,
        "v": smp.v,
        "n": smp.n,
        "computed_dim": smp.dim,
        "expected_dim": smp.expected,
        "defect": smp.defect,
        "seeds": list(smp.seeds),
        "ranks": list(smp.ranks),
        "redraws": smp.redraws,
    }


def _report_row(rep: secants.RankReport) -> dict:
    return {
        "m": rep.m,
        "v": rep.v,
        "N": rep.N,
        "expected_rank": rep.expected_rank,
        "generic_rank": rep.generic_rank,
        "exceptional": rep.exceptional,
        "redraws": rep.redraws,
        "terracini": [
            {"n": r.n, "expected_dim": r.expected_dim, "computed_dim": r.computed_dim, "defect": r.defect}
            for r in rep.terracini_results
        ],
    }


def _parse_pairs(text: str):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            m, v = (int(t) for t in chunk.split(","))
            out.append((m, v))
    return out


def cmd_rank_table(args) -> dict:
    _require(args, "max-m", "max-v")
    seed = args.seed or 0
    try:
        extra = _parse_pairs(args.extra) if args.extra else []
    except ValueError:
        raise UsageError("--extra expects 'm,v;m,v'") from None
    pairs = [(m, v) for m in range(2, args.max_m + 1) for v in range(1, args.max_v + 1)]
    pairs += [p for p in extra if p not in pairs]
    with ThreadPoolExecutor() as pool:
        try:
            reports = list(pool.map(lambda p: secants.rank_report(p[0], p[1], seed), pairs))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = [_report_row(r) for r in reports]
    return {"rows": rows, "exceptional": [[r["m"], r["v"]] for r in rows if r["exceptional"]]}


def _parse_ds(text: str) -> List[int]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            out.append(int(chunk))
    return out


def cmd_surface(args) -> dict:
    _require(args, "d")
    try:
        ds = _parse_ds(str(args.d))
    except ValueError:
        raise UsageError("--d expects an integer, a list '5,6,7' or a range '5..30'") from None
    try:
        with ThreadPoolExecutor() as pool:
            reports = list(pool.map(lattice.surface_invariants, ds))
    except lattice.LatticeError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    for rep in reports:
        rec = rep.to_record()
        rec["checks"] = rep.checks()
        rows.append(rec)
    if len(rows) == 1:
        return rows[0]
    return {"rows": rows}


COMMANDS: Dict[str, Callable] = {
    "pair": cmd_pair,
    "polar": cmd_polar,
    "cat": cmd_cat,
    "dual": cmd_dual,
    "conjugate": cmd_conjugate,
    "certify": cmd_certify,
    "synth": cmd_synth,
    "sylvester": cmd_sylvester,
    "decompose-numeric": cmd_decompose_numeric,
    "terracini": cmd_terracini,
    "rank-table": cmd_rank_table,
    "surface": cmd_surface,
}

HELP = {
    "pair": "apolarity pairing <dual-form, form> of two forms of equal degree",
    "polar": "polar P_G(F) of --form F by the operator --dual-form G",
    "cat": "catalecticant matrix of --form in operator degree --degree",
    "dual": "dual form of a non-degenerate even-degree form",
    "conjugate": "conjugacy matrix of --points with respect to a quartic --form",
    "certify": "exact power-sum certificate for --form at --points",
    "synth": "sum of --degree-th powers of the linear forms --points",
    "sylvester": "exact Waring decomposition of a binary form",
    "decompose-numeric": "seeded floating-point Waring search",
    "terracini": "Terracini secant dimension for (--degree, --nvars, --n)",
    "rank-table": "expected and generic Waring ranks with Terracini checks",
    "surface": "lattice invariants of the blown-up plane for --d",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="powersums", description="Apolarity, power sums and Waring ranks in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        p.add_argument("--nvars", type=int)
        p.add_argument("--form")
        p.add_argument("--dual-form")
        p.add_argument("--points")
        p.add_argument("--alphas")
        p.add_argument("--degree", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--d")
        p.add_argument("--max-m", type=int)
        p.add_argument("--max-v", type=int)
        p.add_argument("--extra", help="additional (m,v) pairs for rank-table, e.g. '5,2;8,2'")
        p.add_argument("--json", action="store_true")
        p.add_argument("--store", metavar="PATH")
    return parser


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None and k not in ("json", "store", "command")}


def job_record(command: str, params: dict, payload: dict, status: int) -> dict:
    canon = json.dumps({"command": command, "params": params}, sort_keys=True, separators=(",", ":"))
    return {
        "command": command,
        "input_digest": hashlib.sha256(canon.encode("utf-8")).hexdigest(),
        "parameters": params,
        "result": payload,
        "status": status,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _render_table(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{key}:")
            width = max(len(str(x)) for row in value for x in row)
            for row in value:
                lines.append("  " + "  ".join(str(x).rjust(width) for x in row))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            keys = [k for k in value[0] if not isinstance(value[0][k], (list, dict))]
            lines.append(f"{key}:")
            lines.append("  " + "\t".join(keys))
            for row in value:
                lines.append("  " + "\t".join(str(row[k]) for k in keys))
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            for k, v in value.items():
                lines.append(f"  {k}: {v}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(payload: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stream.write(_render_table(payload) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handler = COMMANDS[args.command]
    status = EXIT_OK
    try:
        payload = handler(args)
    except UsageError as exc:
        sys.stderr.write(f"powersums {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except MathFailure as exc:
        payload = dict(exc.payload, error=str(exc))
        status = EXIT_MATH
    except (FormError, ValueError) as exc:
        sys.stderr.write(f"powersums {args.command}: error: {exc}\n")
        return EXIT_USAGE
    emit(payload, args.json)
    if args.store:
        rec = job_record(args.command, _params(args), payload, status)
        with open(args.store, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
