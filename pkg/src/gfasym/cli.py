"""Command-line front end.

Subcommands:

  coeff     exact coefficient a_r from the denominator recurrence
  critical  critical points for a direction, with minimality certificates
  asymp     the asymptotic expansion governing a direction
  compare   exact-vs-asymptotic sweep along a direction ray

Exit codes: 0 success, 2 parse/validation error, 3 out-of-scope
singularity structure (toral / non-simple / not minimal / non-isolated),
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf, workprec

from . import asymptotics as asy
from . import critical as crit
from .errors import (
    GFAsymError,
    NonConvergenceError,
    OutOfScopeError,
    PolyParseError,
    ValidationError,
)
from .gffile import load_gf
from .oracle import coefficient_at, extract_ray
from .poly import RationalGF
from .precision import DEFAULT_PRECISION, ComplexAP, decimal_str
from .quadrature import QuadratureSpec, xi_quadrature

INDEX_CAP = 10**6


def _parse_ints(text, what):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise PolyParseError(f"{what} must be comma-separated integers: {text!r}") from exc
    if not parts:
        raise PolyParseError(f"{what} is empty")
    return tuple(parts)


def _check_cap(index):
    if any(abs(i) > INDEX_CAP for i in index):
        raise ValidationError(
            f"index {index} exceeds the componentwise cap {INDEX_CAP}"
        )


def _load(args) -> RationalGF:
    try:
        return load_gf(args.gf)
    except OSError as exc:
        raise PolyParseError(f"cannot read {args.gf}: {exc}") from exc


def _direction(args, gf) -> crit.Direction:
    comps = _parse_ints(args.dir, "--dir")
    if len(comps) != gf.dim:
        raise ValidationError(
            f"--dir has {len(comps)} components but the function has {gf.dim} variables"
        )
    if any(c <= 0 for c in comps):
        raise ValidationError("--dir components must be positive integers")
    return crit.Direction.of(comps)


# -- routing ---------------------------------------------------------------


def _route(gf, direction, precision, grid, seed, num_terms):
    """Solve, classify, and build the expansion that governs a direction.

    Returns (expansion-or-combined, group of contributing points).
    """
    if gf.dim == 2:
        candidates = crit.solve_critical_2d(gf, direction, precision)
    else:
        candidates = crit.solve_critical_nd(
            gf, direction, precision=precision, seed=seed
        )
    if not candidates:
        raise OutOfScopeError(
            "no critical points found for this direction", kind="not_minimal"
        )
    classified = [
        crit.classify_and_attach(gf, c, grid=grid) for c in candidates
    ]
    minimal = [
        c
        for c in classified
        if c.minimality in (crit.STRICT, crit.FINITELY_MINIMAL)
    ]
    if not minimal:
        if any(c.minimality == crit.TORAL_SUSPECTED for c in classified):
            raise OutOfScopeError(
                "the governing singularities form a torus-infinite family; "
                "refusing to expand",
                kind="toral",
            )
        if any(not c.pole_simple for c in classified):
            raise OutOfScopeError(crit.NON_SIMPLE_MESSAGE, kind="non_simple")
        raise OutOfScopeError(
            "no minimal critical point governs this direction",
            kind="not_minimal",
        )
    if any(not c.pole_simple for c in minimal):
        raise OutOfScopeError(crit.NON_SIMPLE_MESSAGE, kind="non_simple")

    # group by torus and keep the group with the slowest exponential decay
    groups: dict = {}
    p = precision
    for c in minimal:
        with workprec(p):
            key = tuple(
                mpmath.nstr(abs(x.to_mpc()), 12) for x in c.coords
            )
        groups.setdefault(key, []).append(c)

    def rate(group):
        c = group[0]
        with workprec(p):
            return sum(
                float(rj) * float(mpmath.log(abs(x.to_mpc())))
                for rj, x in zip(direction.components, c.coords)
            )

    group = min(groups.values(), key=rate)

    if gf.dim == 2:
        if len(group) == 1 and group[0].minimality == crit.STRICT:
            expansion = asy.expand_2d(gf, group[0], direction, num_terms, p)
        else:
            parts = [
                asy.expand_at_sibling(gf, c.coords, direction, num_terms, p)
                for c in group
            ]
            expansion = asy.combine_finitely_minimal(parts)
    else:
        if len(group) == 1:
            expansion = asy.leading_higher_d(gf, group[0], direction, p)
        else:
            parts = [
                asy.leading_higher_d(gf, c.coords, direction, p) for c in group
            ]
            expansion = asy.combine_finitely_minimal(parts)
    return expansion, group


# -- subcommands -----------------------------------------------------------


def cmd_coeff(args) -> int:
    gf = _load(args)
    index = _parse_ints(args.index, "INDEX")
    if len(index) != gf.dim:
        raise ValidationError(
            f"index has {len(index)} components, the function {gf.dim} variables"
        )
    if any(i < 0 for i in index):
        raise ValidationError("index components must be nonnegative")
    _check_cap(index)
    value = coefficient_at(gf, index)
    print(value)
    return 0


def _point_record(gf, cp, precision):
    rec = {
        "coords": [
            [decimal_str(c.real, precision), decimal_str(c.imag, precision)]
            for c in cp.coords
        ],
        "residual": mpmath.nstr(cp.residual, 8),
        "pole_simple": cp.pole_simple,
        "minimality": cp.minimality,
        "siblings": [
            [
                [decimal_str(c.real, precision), decimal_str(c.imag, precision)]
                for c in sib
            ]
            for sib in cp.siblings
        ],
    }
    if cp.pole_simple and cp.minimality in (crit.STRICT, crit.FINITELY_MINIMAL):
        try:
            _, k, _ = asy.phase_series(gf, cp, cp.direction, 12, precision)
            rec["k"] = k
        except GFAsymError:
            pass
    return rec


def cmd_critical(args) -> int:
    gf = _load(args)
    direction = _direction(args, gf)
    precision = args.precision
    if gf.dim == 2:
        pts = crit.solve_critical_2d(gf, direction, precision)
    else:
        pts = crit.solve_critical_nd(gf, direction, precision=precision, seed=args.seed)
    records = []
    for cp in pts:
        cp = crit.classify_and_attach(gf, cp, grid=args.grid)
        records.append(_point_record(gf, cp, precision))
    if args.format == "structured":
        print(json.dumps({"direction": list(direction.components), "points": records}, indent=2))
    else:
        print(f"critical points for direction {direction}:")
        for rec in records:
            coords = ", ".join(f"({re} + {im}i)" for re, im in rec["coords"])
            print(f"  point: {coords}")
            print(
                f"    residual {rec['residual']}, simple pole: {rec['pole_simple']}, "
                f"minimality: {rec['minimality']}"
                + (f", k = {rec['k']}" if "k" in rec else "")
            )
            for sib in rec["siblings"]:
                scoords = ", ".join(f"({re} + {im}i)" for re, im in sib)
                print(f"    torus companion: {scoords}")
    return 0


def cmd_asymp(args) -> int:
    gf = _load(args)
    direction = _direction(args, gf)
    expansion, group = _route(
        gf, direction, args.precision, args.grid, args.seed, args.terms
    )
    record = asy.export_expansion(expansion)
    record["direction"] = list(direction.components)
    record["contributing_points"] = len(group)
    if args.format == "structured":
        print(json.dumps(record, indent=2))
    else:
        _print_expansion_text(record)
    return 0


def _print_expansion_text(record):
    if record.get("kind") == "finitely_minimal_sum":
        print(f"finitely minimal family: {len(record['parts'])} contributing points")
        for part in record["parts"]:
            _print_expansion_text(part)
        return
    print(f"expansion kind: {record['kind']}  (k = {record['k']}, l0 = {record['l0']})")
    print(f"  point: " + ", ".join(f"({re} + {im}i)" for re, im in record["point"]))
    print(f"  {record['formula']}")
    for l, re, im in record["terms"]:
        print(f"  C_{l} = {re} + {im} i")


@dataclass
class CompareRow:
    index: tuple[int, ...]
    exact: Fraction
    estimate: ComplexAP
    rel_error: mpf | None
    both_zero: bool
    quad_rel_error: mpf | None = None


@dataclass
class CompareReport:
    direction: tuple[int, ...]
    points: int
    terms: int
    rows: list[CompareRow]
    verdict: bool


def _ladder(upto: int):
    out = set()
    m = upto
    while m >= 1:
        out.add(m)
        m //= 2
    return sorted(out)


def build_compare_report(
    gf,
    direction,
    num_terms,
    upto,
    with_quadrature=False,
    precision=DEFAULT_PRECISION,
    grid=720,
    seed=0,
) -> CompareReport:
    if upto < 0:
        raise ValidationError("--upto must be nonnegative")
    for c in direction.components:
        if c * upto > INDEX_CAP:
            raise ValidationError(
                f"upto * direction exceeds the componentwise cap {INDEX_CAP}"
            )
    if upto == 0:
        return CompareReport(direction.components, 0, num_terms, [], True)

    expansion, group = _route(gf, direction, precision, grid, seed, num_terms)
    ray = extract_ray(gf, direction.components, upto)
    rows = []
    p = precision
    with workprec(p):
        for m in _ladder(upto):
            index = direction.index(m)
            exact = ray[m]
            est = asy.evaluate_expansion(expansion, index, num_terms)
            if isinstance(expansion, asy.CombinedExpansion):
                scale = expansion.magnitude_scale(index, num_terms)
            else:
                scale = abs(est)
            exact_mp = mpf(exact.numerator) / mpf(exact.denominator)
            if exact == 0:
                both_zero = abs(est) <= mpf("1e-8") * max(scale, mpf(1))
                rel = None
            else:
                both_zero = False
                rel = abs(est.to_mpc() - exact_mp) / abs(exact_mp)
            quad_rel = None
            if with_quadrature and exact != 0:
                spec = QuadratureSpec(tolerance=1e-14)
                total = None
                parts = (
                    expansion.parts
                    if isinstance(expansion, asy.CombinedExpansion)
                    else [expansion]
                )
                for part, cp in zip(parts, group):
                    xi = xi_quadrature(gf, cp.coords, direction, index, spec, p)
                    base = mpmath.mpc(0)
                    for rj, lb in zip(index, part.log_base):
                        base -= rj * lb.to_mpc()
                    contrib = mpmath.exp(base) * xi.to_mpc()
                    total = contrib if total is None else total + contrib
                quad_rel = abs(total - exact_mp) / abs(exact_mp)
            rows.append(
                CompareRow(index, exact, est, rel, both_zero, quad_rel)
            )
    err_rows = [r.rel_error for r in rows if r.rel_error is not None]
    tail = err_rows[len(err_rows) // 2 :]
    verdict = all(tail[i + 1] <= tail[i] for i in range(len(tail) - 1))
    return CompareReport(
        direction.components, len(group), num_terms, rows, verdict
    )


def report_to_record(report: CompareReport, precision) -> dict:
    rows = []
    for r in report.rows:
        rows.append(
            {
                "index": list(r.index),
                "exact": str(r.exact),
                "estimate": [
                    decimal_str(r.estimate.real, precision),
                    decimal_str(r.estimate.imag, precision),
                ],
                "rel_error": mpmath.nstr(r.rel_error, 8) if r.rel_error is not None else None,
                "both_zero": r.both_zero,
                "quad_rel_error": (
                    mpmath.nstr(r.quad_rel_error, 8)
                    if r.quad_rel_error is not None
                    else None
                ),
            }
        )
    return {
        "direction": list(report.direction),
        "contributing_points": report.points,
        "terms": report.terms,
        "rows": rows,
        "verdict": "yes" if report.verdict else "no",
    }


def parse_structured_report(text: str) -> dict:
    return json.loads(text)


def cmd_compare(args) -> int:
    gf = _load(args)
    direction = _direction(args, gf)
    report = build_compare_report(
        gf,
        direction,
        args.terms,
        args.upto,
        with_quadrature=args.with_quadrature,
        precision=args.precision,
        grid=args.grid,
        seed=args.seed,
    )
    record = report_to_record(report, args.precision)
    if args.format == "structured":
        print(json.dumps(record, indent=2))
        return 0
    print(
        f"direction {crit.Direction(report.direction)}, {report.points} "
        f"contributing point(s), {report.terms} term(s)"
    )
    head = f"{'index':>18} {'exact':>24} {'estimate':>24} {'rel error':>12}"
    if args.with_quadrature:
        head += f" {'quad rel err':>12}"
    print(head)
    for r in report.rows:
        idx = ",".join(str(i) for i in r.index)
        exact = str(r.exact)
        if len(exact) > 24:
            exact = exact[:21] + "..."
        est = mpmath.nstr(r.estimate.to_mpc(), 8)
        err = "zero/zero" if r.both_zero else (
            mpmath.nstr(r.rel_error, 4) if r.rel_error is not None else "-"
        )
        line = f"{idx:>18} {exact:>24} {est:>24} {err:>12}"
        if args.with_quadrature:
            q = mpmath.nstr(r.quad_rel_error, 4) if r.quad_rel_error is not None else "-"
            line += f" {q:>12}"
        print(line)
    print(f"convergence verdict: {'yes' if report.verdict else 'no'}")
    return 0


# -- entry point -------------------------------------------------------------


def _add_common(sp, need_dir=True):
    sp.add_argument("--gf", required=True, help="path to a .gf description file")
    if need_dir:
        sp.add_argument("--dir", required=True, help="direction, e.g. 1,1")
    sp.add_argument("--terms", type=int, default=1, help="expansion terms (default 1)")
    sp.add_argument(
        "--precision", type=int, default=DEFAULT_PRECISION,
        help="working precision in bits (default 128)",
    )
    sp.add_argument("--grid", type=int, default=720, help="minimality scan angles")
    sp.add_argument("--seed", type=int, default=0, help="seed for multistart solvers")
    sp.add_argument(
        "--format", choices=("text", "structured"), default="text",
        help="output format",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gfasym",
        description=(
            "coefficient asymptotics for rational multivariate generating "
            "functions near smooth minimal poles"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeff", help="exact coefficient from the recurrence oracle")
    c.add_argument("--gf", required=True)
    c.add_argument("--index", required=True, help="multi-index, e.g. 5,5")
    c.set_defaults(fn=cmd_coeff)

    k = sub.add_parser("critical", help="critical points and minimality")
    _add_common(k)
    k.set_defaults(fn=cmd_critical)

    a = sub.add_parser("asymp", help="asymptotic expansion for a direction")
    _add_common(a)
    a.set_defaults(fn=cmd_asymp)

    m = sub.add_parser("compare", help="exact vs asymptotic sweep")
    _add_common(m)
    m.add_argument("--upto", type=int, default=64, help="largest ray multiple")
    m.add_argument(
        "--with-quadrature", action="store_true",
        help="also validate against the reduced-integral oracle",
    )
    m.set_defaults(fn=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (PolyParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OutOfScopeError as exc:
        print(f"out of scope ({exc.kind}): {exc}", file=sys.stderr)
        return 3
    except NonConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
