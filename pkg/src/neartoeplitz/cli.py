"""Command-line front end.

    neartoeplitz inverse  --n 5 --b 2.5 --btilde 1.5 [--entries 1,1;2,3]
    neartoeplitz trace    --n 3 --b 2.5 --btilde 1.5 --verify
    neartoeplitz rowsums  --n 3 --b 2.5 --btilde 1.5 --verify
    neartoeplitz bounds   --n 20 --b 4 --btilde 4
    neartoeplitz compare  --n 10..28 --b 4 --btilde-grid case:pos_ge1 --seed 0
    neartoeplitz fisher   --n 20 --b 4 --btilde 4 --L 2 --k 1/2,1,2,4

Exit status: 0 on success, 2 on invalid input, 3 when the matrix is singular,
1 on any other failure (e.g. a diverging iteration).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import bounds as nb
from .bvp import DEFAULT_TOL, BvpProblem, RhsKind, fixed_point_solve
from .errors import NearToeplitzError, SingularMatrix
from .inverse import (
    DEFAULT_SINGULARITY_TOL,
    NearToeplitzSpec,
    infinity_norm_exact,
    inverse_dense,
    inverse_entry,
    is_nonsingular,
    rowsums,
    trace,
)
from .oracle import MAX_ORDER, build_matrix, oracle_inverse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SINGULAR = 0, 1, 2, 3

COMPARE_HEADER = ("n", "b", "b_tilde", "exact_norm", "bound", "gap", "log10_gap")
FISHER_HEADER = ("k", "iterations", "numerical_rate", "expected_rate")

# case:<alias> selectors for --btilde-grid, beyond the eight case names
GRID_ALIASES = {
    "pos_ge1": (nb.BoundCase.B_POS_GT, nb.BoundCase.B_POS_EQ, nb.BoundCase.B_POS_MID),
    "neg_le1": (nb.BoundCase.B_NEG_LT, nb.BoundCase.B_NEG_EQ, nb.BoundCase.B_NEG_MID),
    "all": tuple(nb.BoundCase),
}


class UsageError(ValueError):
    pass


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise UsageError(f"environment variable {name}={raw!r} is not a number") from None
    if not value > 0:
        raise UsageError(f"environment variable {name} must be positive, got {raw!r}")
    return value


def parse_int_list(text: str) -> list[int]:
    """'10..28' (inclusive), '3,5,8' or '7'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = (int(p) for p in part.split("..", 1))
                if hi < lo:
                    raise UsageError(f"--n range {part!r} is empty")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"--n: cannot parse {part!r} as an integer or range") from None
    return out


def parse_float_list(text: str, flag: str) -> list[float]:
    """Comma-separated numbers; fractions such as 1/2 are accepted."""
    out = []
    for part in text.split(","):
        try:
            out.append(float(Fraction(part.strip())))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{flag}: cannot parse {part!r} as a number") from None
    return out


def _floats(flag: str):
    def parse(text: str) -> list[float]:
        return parse_float_list(text, flag)

    parse.__name__ = "number list"
    return parse


def parse_entries(text: str, n: int) -> list[tuple[int, int]]:
    pairs = []
    for part in text.split(";"):
        try:
            i, j = (int(v) for v in part.split(","))
        except ValueError:
            raise UsageError(f"--entries: expected 'i,j;i,j', got {part!r}") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise UsageError(f"--entries: ({i},{j}) outside 1..{n}")
        pairs.append((i, j))
    return pairs


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def emit(rows: Iterable[Sequence], header: Sequence[str], fmt: str, stream) -> None:
    """CSV with a header row, or newline-delimited JSON objects."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    else:
        for row in rows:
            obj = {k: _json_value(v) for k, v in zip(header, row)}
            stream.write(json.dumps(obj, allow_nan=False) + "\n")


def _single(values: list, flag: str):
    if values is None:
        raise UsageError(f"{flag} is required")
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value for this command, got {len(values)}")
    return values[0]


def _spec_from(args) -> NearToeplitzSpec:
    n = _single(args.n, "--n")
    b = _single(args.b, "--b")
    bt = _single(args.btilde, "--btilde")
    return NearToeplitzSpec(n, b, bt)


def _oracle(spec: NearToeplitzSpec) -> np.ndarray:
    if spec.n > MAX_ORDER:
        raise UsageError(f"--verify needs n <= {MAX_ORDER}")
    return oracle_inverse(build_matrix(spec))


def cmd_inverse(args, tol: float) -> tuple[list[str], list[list]]:
    spec = _spec_from(args)
    if args.entries:
        pairs = parse_entries(args.entries, spec.n)
        return ["i", "j", "value"], [[i, j, inverse_entry(i, j, spec, tol)] for i, j in pairs]
    if spec.n > MAX_ORDER:
        raise UsageError(f"full inverse output is limited to n <= {MAX_ORDER}; use --entries")
    inv = inverse_dense(spec, tol)
    return ["i"] + [f"c{j}" for j in range(1, spec.n + 1)], [[i + 1, *row] for i, row in enumerate(inv)]


def cmd_trace(args, tol: float):
    spec = _spec_from(args)
    value = trace(spec, tol)
    if not args.verify:
        return ["n", "b", "b_tilde", "trace"], [[spec.n, spec.b, spec.b_tilde, value]]
    ref = float(np.trace(_oracle(spec)))
    return (
        ["n", "b", "b_tilde", "trace", "oracle_trace", "delta"],
        [[spec.n, spec.b, spec.b_tilde, value, ref, abs(value - ref)]],
    )


def cmd_rowsums(args, tol: float):
    spec = _spec_from(args)
    values = rowsums(spec, tol)
    idx = range(1, spec.n + 1)
    if not args.verify:
        return ["i", "rowsum"], [[i, v] for i, v in zip(idx, values)]
    ref = _oracle(spec).sum(axis=1)
    return ["i", "rowsum", "oracle_rowsum", "delta"], [[i, v, r, abs(v - r)] for i, v, r in zip(idx, values, ref)]


def cmd_bounds(args, tol: float):
    spec = _spec_from(args)
    report = nb.inf_norm_upper_bound(spec, tol)
    row = [spec.n, spec.b, spec.b_tilde, report.case_id.value, report.bound, report.interval]
    header = ["n", "b", "b_tilde", "case_id", "bound", "interval"]
    if args.verify:
        header.append("exact_norm")
        row.append(infinity_norm_exact(spec, tol))
    return header, [row]


def _grid_cases(selector: str, b: float) -> list[nb.BoundCase]:
    name = selector[len("case:") :]
    if name in GRID_ALIASES:
        cases = GRID_ALIASES[name]
    else:
        try:
            cases = (nb.BoundCase[name.upper()],)
        except KeyError:
            choices = sorted(GRID_ALIASES) + [c.name for c in nb.BoundCase]
            raise UsageError(f"--btilde-grid: unknown case {name!r}; choose from {', '.join(choices)}") from None
    return [c for c in cases if (c.positive is c) == (b > 0)]


def compare_rows(
    ns: list[int],
    bs: list[float],
    b_tildes: list[float] | None,
    grid: str | None,
    samples: int,
    seed: int,
    tol: float,
) -> Iterator[list]:
    """Rows (n, b, b_tilde, exact_norm, bound, gap, log10_gap), in input order."""
    rng = np.random.default_rng(seed)
    for n in ns:
        for b in bs:
            if grid is not None:
                cases = _grid_cases(grid, b)
                draws: list[float] = []
                for case in cases:
                    count = 1 if case.positive is nb.BoundCase.B_POS_EQ else samples
                    draws.extend(nb.sample_b_tilde(case, n, b, count, rng).tolist())
            else:
                draws = list(b_tildes)
            for bt in draws:
                spec = NearToeplitzSpec(n, b, bt)
                if not is_nonsingular(spec, tol):
                    raise SingularMatrix(f"--btilde {bt!r} is singular for n={n}, b={b!r}")
                exact = infinity_norm_exact(spec, tol)
                bound = nb.inf_norm_upper_bound(spec, tol).bound
                gap = bound - exact
                log_gap = math.log10(gap) if gap > 0 else -math.inf
                yield [n, b, bt, exact, bound, gap, log_gap]


def cmd_compare(args, tol: float):
    if args.n is None or args.b is None:
        raise UsageError("compare needs --n and --b")
    if (args.btilde is None) == (args.btilde_grid is None):
        raise UsageError("compare needs exactly one of --btilde or --btilde-grid")
    if args.btilde_grid is not None and not args.btilde_grid.startswith("case:"):
        raise UsageError("--btilde-grid must look like case:<name>")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rows = compare_rows(args.n, args.b, args.btilde, args.btilde_grid, args.samples, args.seed, tol)
    return list(COMPARE_HEADER), rows


def cmd_fisher(args, tol: float):
    spec = _spec_from(args)
    if args.k is None:
        raise UsageError("fisher needs --k")
    kind = RhsKind.FISHER if args.fisher_k else RhsKind(args.rhs)
    solve_tol = args.tol if args.tol is not None else _env_float("SOLVE_TOL", DEFAULT_TOL)
    rows = []
    for k in args.k:
        problem = BvpProblem(spec, args.L, k, kind)
        u0 = None if args.u0 is None else np.full(spec.n, args.u0)
        report = fixed_point_solve(problem, u0=u0, tol=solve_tol, max_iter=args.max_iter)
        rows.append([k, report.iterations, report.numerical_rate, report.expected_rate])
    return list(FISHER_HEADER), rows


COMMANDS = {
    "inverse": cmd_inverse,
    "trace": cmd_trace,
    "rowsums": cmd_rowsums,
    "bounds": cmd_bounds,
    "compare": cmd_compare,
    "fisher": cmd_fisher,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="neartoeplitz", description="Closed-form inverse quantities of tridiag(-1, b, -1) with corners b_tilde.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--n", type=parse_int_list, help="order: 12, 3,5,8 or 10..28")
    p.add_argument("--b", type=_floats("--b"), help="diagonal value(s), |b| > 2")
    p.add_argument("--btilde", type=_floats("--btilde"), help="corner value(s)")
    p.add_argument("--btilde-grid", help="case:<name> sweep, e.g. case:pos_ge1 or case:B_POS_SUB")
    p.add_argument("--samples", type=int, default=8, help="b_tilde draws per case for --btilde-grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--entries", help="inverse: only these entries, 'i,j;i,j'")
    p.add_argument("--verify", action="store_true", help="add dense-oracle reference columns")
    p.add_argument("--L", type=float, default=1.0, help="domain length for fisher")
    p.add_argument("--k", type=_floats("--k"), help="growth coefficients, e.g. 1/2,1,2")
    p.add_argument("--rhs", choices=[k.value for k in RhsKind], default=RhsKind.FISHER.value)
    p.add_argument("--fisher-k", action="store_true", help="use the Fisher right-hand side k u (1 - u)")
    p.add_argument("--tol", type=float, help="fixed-point stopping tolerance (default SOLVE_TOL or 1e-8)")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--u0", type=float, help="constant initial guess (default 0.5)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="write here instead of stdout")
    return p


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _env_float("SINGULARITY_TOL", DEFAULT_SINGULARITY_TOL)
        header, rows = COMMANDS[args.command](args, tol)
        rows = list(rows)
        if args.output:
            with open(args.output, "w", newline="", encoding="utf-8") as fh:
                emit(rows, header, args.format, fh)
        else:
            emit(rows, header, args.format, stdout)
    except SingularMatrix as exc:
        print(f"error: singular matrix: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (UsageError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NearToeplitzError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
