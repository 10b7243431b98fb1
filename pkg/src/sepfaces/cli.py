"""Command-line front end and on-disk formats.

Subcommands: construct, verify, path, solve, curves. Matrices travel in
a plain-text key/value container with separate real and imaginary
arrays printed at 17 significant digits, which round-trips binary64
exactly; curve samples go to CSV. Outputs are byte-stable for fixed
inputs. Exit codes: 0 success, 1 verification failure, 2 parameter or
parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bipartite import BipartiteState, partial_transpose, range_space
from .construction import (
    ConstructionParams,
    ParameterDomainError,
    VerificationReport,
    construct,
)
from .linalg import Subspace, Tolerance
from .path import BoundaryResult, PathProblem, eigenvalue_curves, find_boundary_nu
from .solver import (
    NonFiniteSolutionSetError,
    PairEquationProblem,
    PairSolutionSet,
    SearchOptions,
    solve_pair_equation,
)

__all__ = [
    "StateFileError",
    "main",
    "read_matrix_file",
    "write_curve_file",
    "write_matrix_file",
]

_MAGIC = "sepfaces-file v1"


class StateFileError(ValueError):
    """Malformed matrix file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)}{z.imag:+.17g}j"


def write_matrix_file(path, matrix: np.ndarray, kind: str,
                      dims: tuple[int, int], meta: dict | None = None) -> None:
    M = np.asarray(matrix, dtype=np.complex128)
    rows, cols = M.shape
    lines = [
        _MAGIC,
        f"kind: {kind}",
        f"dims: {dims[0]} {dims[1]}",
        f"rows: {rows}",
        f"cols: {cols}",
        f"meta generator: sepfaces {__version__}",
    ]
    for key, value in (meta or {}).items():
        lines.append(f"meta {key}: {value}")
    lines.append("matrix_re:")
    lines.extend(" ".join(_fmt(v) for v in row) for row in M.real)
    lines.append("matrix_im:")
    lines.extend(" ".join(_fmt(v) for v in row) for row in M.imag)
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_file(path):
    """Parse a matrix file; returns (kind, dims, matrix, meta)."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != _MAGIC:
        raise StateFileError(f"missing '{_MAGIC}' header", line=1)
    fields: dict[str, str] = {}
    meta: dict[str, str] = {}
    idx = 1
    while idx < len(lines) and lines[idx] != "matrix_re:":
        line = lines[idx]
        if ":" not in line:
            raise StateFileError(f"expected 'key: value', got {line!r}", line=idx + 1)
        key, value = line.split(":", 1)
        key, value = key.strip(), value.strip()
        if key.startswith("meta "):
            meta[key[5:]] = value
        else:
            fields[key] = value
        idx += 1
    for required in ("kind", "dims", "rows", "cols"):
        if required not in fields:
            raise StateFileError(f"missing field {required!r}")
    try:
        dims = tuple(int(v) for v in fields["dims"].split())
        rows, cols = int(fields["rows"]), int(fields["cols"])
    except ValueError as exc:
        raise StateFileError(f"bad header numbers: {exc}") from exc
    if len(dims) != 2:
        raise StateFileError("dims must hold two integers")

    def read_block(start: int, name: str) -> tuple[np.ndarray, int]:
        if start >= len(lines) or lines[start] != f"{name}:":
            raise StateFileError(f"expected '{name}:'", line=start + 1)
        block = np.empty((rows, cols))
        for r in range(rows):
            ln = start + 1 + r
            if ln >= len(lines):
                raise StateFileError(f"{name} is missing row {r + 1}", line=ln)
            parts = lines[ln].split()
            if len(parts) != cols:
                raise StateFileError(
                    f"{name} row {r + 1} has {len(parts)} fields, expected {cols}",
                    line=ln + 1,
                )
            try:
                block[r] = [float(p) for p in parts]
            except ValueError as exc:
                raise StateFileError(f"bad number in {name}: {exc}", line=ln + 1) from exc
        return block, start + 1 + rows

    re, idx = read_block(idx, "matrix_re")
    im, _ = read_block(idx, "matrix_im")
    matrix = re + 1j * im
    if fields["kind"] == "state":
        scale = max(np.abs(matrix).max(), 1.0)
        if np.abs(matrix - matrix.conj().T).max() > Tolerance().match_tol * scale:
            raise StateFileError("matrix flagged as a state is not Hermitian")
    return fields["kind"], dims, matrix, meta


def write_curve_file(path, curves) -> None:
    d = curves.state_eigenvalues.shape[1]
    header = "t," + ",".join(f"l{i + 1}" for i in range(d)) + "," + ",".join(
        f"m{i + 1}" for i in range(d)
    )
    rows = [header]
    for t, lam, mu in zip(curves.ts, curves.state_eigenvalues, curves.transpose_eigenvalues):
        rows.append(",".join(_fmt(v) for v in (t, *lam, *mu)))
    Path(path).write_text("\n".join(rows) + "\n")


def _solutions_lines(result: PairSolutionSet) -> list[str]:
    lines = [f"solutions: {len(result.solutions)}"]
    for i, (pv, res, param) in enumerate(
        zip(result.solutions, result.residuals, result.parameters), start=1
    ):
        s = "inf" if param is None else _fmt_complex(param)
        x = " ".join(_fmt_complex(v) for v in pv.x)
        y = " ".join(_fmt_complex(v) for v in pv.y)
        lines.append(f"  {i}: s= {s}  x= {x}  y= {y}  residual= {res:.3e}")
    return lines


def _solutions_json(result: PairSolutionSet) -> dict:
    return {
        "count": len(result.solutions),
        "parameters": [
            None if p is None else [p.real, p.imag] for p in result.parameters
        ],
        "solutions": [
            {
                "x": [[v.real, v.imag] for v in pv.x],
                "y": [[v.real, v.imag] for v in pv.y],
                "residual": res,
            }
            for pv, res in zip(result.solutions, result.residuals)
        ],
        "exhaustive_claim": result.exhaustive_claim,
        "rejected_minimum": _json_float(result.rejected_minimum),
        "grid_minimum": _json_float(result.grid_minimum),
    }


def _json_float(x: float):
    return None if math.isinf(x) else x


def _report_lines(report: VerificationReport) -> list[str]:
    p = report.params

    def mark(ok: bool) -> str:
        return "PASS" if ok else "FAIL"

    lines = [
        f"construction verification: a={p.a:g}, b={p.b:g}",
        f"  ten solutions exact             {mark(report.ten_solutions_exact)}"
        f"  defining residual {report.max_defining_residual:.3e},"
        f" membership {report.max_membership_residual:.3e}",
        f"  product states independent      {mark(report.product_states_independent)}"
        f"  gram rank {report.gram_rank}",
        f"  five-subsets span tensor space  {mark(report.five_span_tensor_space)}"
        f"  {report.five_subsets_checked - len(report.five_span_failures)}"
        f"/{report.five_subsets_checked}",
        f"  seven-subsets span conjugates   {mark(report.seven_span_conjugate_space)}"
        f"  {report.seven_subsets_checked - len(report.seven_span_failures)}"
        f"/{report.seven_subsets_checked}",
        f"  echelon cases match             {mark(report.echelon_cases_match)}"
        f"  free-column entries b/a={p.b / p.a:g}, 1/a={1 / p.a:g}",
        f"  modulus identity residual       "
        f"{mark(report.alpha8_identity_residual <= report.ALPHA8_BOUND)}"
        f"  {report.alpha8_identity_residual:.3e} (bound {report.ALPHA8_BOUND:g})",
        "  sub-simplex face counts         "
        + " ".join(f"{k}:{c}" for k, c in report.face_counts),
        f"overall: {mark(report.all_passed)}",
    ]
    return lines


def _report_json(report: VerificationReport) -> dict:
    return {
        "a": report.params.a,
        "b": report.params.b,
        "all_passed": report.all_passed,
        "ten_solutions_exact": report.ten_solutions_exact,
        "max_defining_residual": report.max_defining_residual,
        "max_membership_residual": report.max_membership_residual,
        "product_states_independent": report.product_states_independent,
        "gram_rank": report.gram_rank,
        "five_span": {
            "passed": report.five_span_tensor_space,
            "checked": report.five_subsets_checked,
            "failures": [list(f) for f in report.five_span_failures],
        },
        "seven_span": {
            "passed": report.seven_span_conjugate_space,
            "checked": report.seven_subsets_checked,
            "failures": [list(f) for f in report.seven_span_failures],
        },
        "echelon_cases_match": report.echelon_cases_match,
        "echelon_cases": [
            {"re": c.real.tolist(), "im": c.imag.tolist()} for c in report.echelon_cases
        ],
        "alpha8_identity_residual": report.alpha8_identity_residual,
        "face_counts": [list(fc) for fc in report.face_counts],
    }


def _boundary_lines(result: BoundaryResult) -> list[str]:
    lines = ["boundary search"]
    if result.degenerate:
        lines.append("  degenerate: the two endpoint states coincide; no exit exists")
        return lines
    lines += [
        f"  nu                   {result.nu:.8f}",
        f"  bracket width        {result.bracket[1] - result.bracket[0]:.3e}",
        f"  type at nu           ({result.type_at_nu.p}, {result.type_at_nu.q})",
        f"  binding side         {result.binding_side.value}",
        f"  edge certified       {'yes' if result.edge_certified else 'no'}",
    ]
    if result.pair_solutions is not None:
        lines.append(
            f"  range product vectors {len(result.pair_solutions.solutions)}"
            f"  (rejected sigma floor {result.pair_solutions.rejected_minimum:.3e})"
        )
        if not result.pair_solutions.solutions:
            lines.append("  edge state consistent: no product vector fits both ranges")
    return lines


def _boundary_json(result: BoundaryResult) -> dict:
    out = {"degenerate": result.degenerate}
    if result.degenerate:
        return out
    out.update(
        {
            "nu": result.nu,
            "bracket": list(result.bracket),
            "type_at_nu": list(result.type_at_nu),
            "binding_side": result.binding_side.value,
            "edge_certified": result.edge_certified,
        }
    )
    if result.pair_solutions is not None:
        out["range_solutions"] = _solutions_json(result.pair_solutions)
    return out


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _tolerance(args) -> Tolerance:
    return Tolerance(rank_cut=args.tol_rank) if args.tol_rank else Tolerance()


def _write_construction_files(out_dir: Path, result, as_json: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    p = result.params
    meta = {"a": _fmt(p.a), "b": _fmt(p.b)}
    write_matrix_file(out_dir / "rho0.txt", result.rho0.matrix, "state", (2, 4), meta)
    write_matrix_file(out_dir / "rho1.txt", result.rho1.matrix, "state", (2, 4), meta)
    write_matrix_file(
        out_dir / "tensor_space.txt", result.tensor_space.basis, "subspace", (2, 4), meta
    )
    write_matrix_file(
        out_dir / "conjugate_space.txt", result.conjugate_space.basis, "subspace", (2, 4), meta
    )
    sol_lines = [f"solutions: {len(result.solutions)}"]
    for i, pv in enumerate(result.solutions, start=1):
        x = " ".join(_fmt_complex(v) for v in pv.x)
        y = " ".join(_fmt_complex(v) for v in pv.y)
        sol_lines.append(f"  {i}: x= {x}  y= {y}")
    (out_dir / "solutions.txt").write_text("\n".join(sol_lines) + "\n")
    if as_json:
        (out_dir / "report.json").write_text(
            json.dumps(_report_json(result.report), indent=2, sort_keys=True) + "\n"
        )
    else:
        (out_dir / "report.txt").write_text("\n".join(_report_lines(result.report)) + "\n")


def _cmd_construct(args) -> int:
    params = ConstructionParams(args.a, args.b)
    result = construct(params, _tolerance(args))
    if args.out:
        _write_construction_files(Path(args.out), result, args.json)
    if args.json:
        _print_json(_report_json(result.report))
    else:
        print("\n".join(_report_lines(result.report)))
    return 0 if result.report.all_passed else 1


def _cmd_verify(args) -> int:
    from .construction import verify_construction

    report = verify_construction(ConstructionParams(args.a, args.b), _tolerance(args))
    if args.json:
        _print_json(_report_json(report))
    else:
        print("\n".join(_report_lines(report)))
    return 0 if report.all_passed else 1


def _path_problem(args):
    params = ConstructionParams(args.a, args.b)
    result = construct(params, _tolerance(args))
    prob = PathProblem(
        rho0=result.rho0,
        rho1=result.rho1,
        tensor_space=result.tensor_space,
        conjugate_space=result.conjugate_space,
    )
    return params, prob


def _cmd_path(args) -> int:
    params, prob = _path_problem(args)
    search = SearchOptions.for_params(
        params, **({"grid_steps": args.grid_steps} if args.grid_steps else {})
    )
    boundary = find_boundary_nu(prob, _tolerance(args), search=search)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        curves = eigenvalue_curves(prob, 0.0, args.t_max, args.samples)
        write_curve_file(out_dir / "curves.csv", curves)
        if args.json:
            (out_dir / "boundary.json").write_text(
                json.dumps(_boundary_json(boundary), indent=2, sort_keys=True) + "\n"
            )
        else:
            (out_dir / "boundary.txt").write_text("\n".join(_boundary_lines(boundary)) + "\n")
    if args.json:
        _print_json(_boundary_json(boundary))
    else:
        print("\n".join(_boundary_lines(boundary)))
    return 0


def _cmd_curves(args) -> int:
    _, prob = _path_problem(args)
    curves = eigenvalue_curves(prob, 0.0, args.t_max, args.samples)
    if args.out:
        write_curve_file(args.out, curves)
    else:
        d = curves.state_eigenvalues.shape[1]
        print(
            "t," + ",".join(f"l{i + 1}" for i in range(d)) + ","
            + ",".join(f"m{i + 1}" for i in range(d))
        )
        for t, lam, mu in zip(curves.ts, curves.state_eigenvalues,
                              curves.transpose_eigenvalues):
            print(",".join(_fmt(v) for v in (t, *lam, *mu)))
    return 0


def _load_subspace(path) -> Subspace:
    kind, _, matrix, _ = read_matrix_file(path)
    if kind != "subspace":
        raise StateFileError(f"{path}: expected kind 'subspace', got {kind!r}")
    return Subspace(matrix)


def _cmd_solve(args) -> int:
    if args.state:
        kind, dims, matrix, _ = read_matrix_file(args.state)
        if kind != "state":
            raise StateFileError(f"{args.state}: expected kind 'state', got {kind!r}")
        state = BipartiteState(tuple(dims), matrix)
        tensor_space = range_space(state)
        conjugate_space = range_space(partial_transpose(state), dims=state.dims)
    else:
        tensor_space = _load_subspace(args.d)
        conjugate_space = _load_subspace(args.e)
    search = SearchOptions(**({"grid_steps": args.grid_steps} if args.grid_steps else {}))
    result = solve_pair_equation(
        PairEquationProblem(tensor_space, conjugate_space, search)
    )
    if args.json:
        _print_json(_solutions_json(result))
    else:
        lines = _solutions_lines(result)
        if not result.solutions:
            lines.append(
                f"  edge state consistent: no product vector fits both ranges"
                f" (rejected sigma floor {result.rejected_minimum:.3e})"
            )
        print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepfaces",
        description="simplex faces of the 2x4 separable-state body and PPT edge states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_params=True):
        if need_params:
            p.add_argument("--a", type=float, required=True, help="first parameter (a > 0)")
            p.add_argument("--b", type=float, required=True,
                           help="second parameter (0 < b < 4a^3/27)")
        p.add_argument("--tol-rank", type=float, default=None,
                       help="relative rank cutoff (default 1e-9)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("construct", help="build and verify the ten-solution family")
    add_common(p)
    p.add_argument("--out", default=None, help="directory for states, bases and report")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="run the structural checks only")
    add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("path", help="locate the PPT boundary along the segment")
    add_common(p)
    p.add_argument("--t-max", type=float, default=1.6, help="curve sampling endpoint")
    p.add_argument("--samples", type=int, default=161, help="curve sample count")
    p.add_argument("--grid-steps", type=int, default=None,
                   help="grid steps per axis for the edge certification search")
    p.add_argument("--out", default=None, help="directory for curves and summary")
    p.set_defaults(func=_cmd_path)

    p = sub.add_parser("curves", help="emit eigenvalue curves along the segment")
    add_common(p)
    p.add_argument("--t-max", type=float, default=1.6)
    p.add_argument("--samples", type=int, default=161)
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("solve", help="find product vectors fitting a membership pair")
    add_common(p, need_params=False)
    p.add_argument("--d", default=None, help="tensor-space subspace file")
    p.add_argument("--e", default=None, help="conjugate-space subspace file")
    p.add_argument("--state", default=None,
                   help="state file; its ranges become the membership pair")
    p.add_argument("--grid-steps", type=int, default=None)
    p.set_defaults(func=_cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and not (args.state or (args.d and args.e)):
        parser.error("solve needs either --state or both --d and --e")
    try:
        return args.func(args)
    except (ParameterDomainError, NonFiniteSolutionSetError, StateFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
