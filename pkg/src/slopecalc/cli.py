"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import carnot, diffquot, divdiff, scalarext, verify
from .diffquot import DiffArgs
from .expr import ParseError, parse_map
from .poly import PolyError, PolyMap
from .rings import Elem, Ring, RingError, RingMismatch, _split_top, parse_ring


class UsageError(Exception):
    pass


def _ring(text: str) -> Ring:
    return parse_ring(text)


def _map(args) -> PolyMap:
    ring = _ring(args.ring)
    variables = [v.strip() for v in args.vars.split(",")] if getattr(args, "vars", None) else None
    return parse_map(args.map, ring, variables)


def _values(text: str, ring: Ring) -> list[Elem]:
    return [ring.parse(p) for p in _split_top(text) if p.strip()]


def _assignment(text: str, ring: Ring) -> dict[str, Elem]:
    out = {}
    for part in _split_top(text):
        name, eq, value = part.partition("=")
        if not eq:
            raise UsageError(f"expected name=value, got {part!r}")
        out[name.strip()] = ring.parse(value)
    return out


def _map_json(F: PolyMap, labels=None) -> dict:
    labels = list(labels or F.out_names or [f"y{j}" for j in range(F.codomain_rank)])
    return {
        "ring": str(F.ring),
        "variables": list(F.variables),
        "components": {name: c.format() for name, c in zip(labels, F.components)},
    }


class Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def emit(self, text_lines: Sequence[str], payload: dict, tsv_rows: Sequence[Sequence[str]] | None = None):
        if self.fmt == "json":
            self.stream.write(json.dumps(payload, indent=2) + "\n")
        elif self.fmt == "tsv" and tsv_rows is not None:
            for row in tsv_rows:
                self.stream.write("\t".join(row) + "\n")
        else:
            for line in text_lines:
                self.stream.write(line + "\n")


# ---------------------------------------------------------------------------
# handlers


def cmd_dq(args, out: Output) -> int:
    f = _map(args)
    k = args.k
    if args.sub == "sym":
        F = diffquot.diffk_sym(f, k)
        out.emit([f"f^[{k}] = {F.format()}"], {"k": k} | _map_json(F))
    elif args.sub == "delta":
        D = diffquot.extendedk_sym(f, k)
        out.emit([f"{n} = {c.format()}" for n, c in zip(D.out_names, D.components)], {"k": k} | _map_json(D))
    elif args.sub == "qdeform":
        G = diffquot.q_deform(f, k)
        out.emit([f"f^[{k}]_q = {G.format()}"], {"k": k, "t0": diffquot.q_time_name(k)} | _map_json(G))
    elif args.sub == "bary":
        B = diffquot.bary_diff1_sym(f)
        out.emit([f"f^[1]_bary = {B.format()}"], _map_json(B))
    elif args.sub == "eval":
        if not args.at:
            raise UsageError("dq eval needs --at name=value,...")
        values = _assignment(args.at, f.ring)
        dargs = _diff_args(values, f.domain_rank, k)
        vals = diffquot.diffk_eval(f, k, dargs)
        text = ", ".join(str(v) for v in vals)
        out.emit([f"f^]{k}[ = {text if len(vals) == 1 else f'({text})'}"], {"k": k, "value": [str(v) for v in vals]})
    return 0


def _diff_args(values: dict[str, Elem], m: int, k: int) -> DiffArgs:
    space, time = {}, {}
    for a in diffquot.all_indices(k):
        names = diffquot.space_names(m, a.bits)
        missing = [n for n in names if n not in values]
        if missing:
            raise UsageError(f"missing values for {', '.join(missing)}")
        space[a.bits] = tuple(values[n] for n in names)
    for a in diffquot.nonzero_indices(k):
        n = diffquot.time_name(a.bits)
        if n not in values:
            raise UsageError(f"missing value for {n}")
        time[a.bits] = values[n]
    extra = set(values) - set(diffquot.domain_variables(m, k))
    if extra:
        raise UsageError(f"unknown variables {', '.join(sorted(extra))}")
    return DiffArgs(k, space, time)


def cmd_divdiff(args, out: Output) -> int:
    f = _map(args)
    if f.domain_rank != 1:
        raise UsageError("divided differences need a map of one variable")
    if args.sub == "sym":
        F = divdiff.divdiff_sym(f, args.k)
        out.emit([f"f<{args.k}> = {F.format()}"], {"k": args.k} | _map_json(F))
        return 0
    if not args.points:
        raise UsageError(f"divdiff {args.sub} needs --points")
    pts = _values(args.points, f.ring)
    fn = divdiff.divdiff_rec if args.sub == "rec" else divdiff.divdiff_explicit
    vals = fn(f, pts)
    text = ", ".join(str(v) for v in vals)
    out.emit(
        [f"f<{len(pts) - 1}>({', '.join(str(p) for p in pts)}) = {text}"],
        {"points": [str(p) for p in pts], "value": [str(v) for v in vals]},
    )
    return 0


def cmd_taylor(args, out: Output) -> int:
    f = _map(args)
    coeffs = divdiff.taylor_direct(f, args.k)
    lines = [f"a_{j}(x, h) = {A.format()}" for j, A in coeffs.items()]
    payload = {
        "ring": str(f.ring),
        "coefficients": {str(j): [c.format() for c in A.components] for j, A in coeffs.items()},
    }
    out.emit(lines, payload)
    return 0


def _fmt_coeff(R: scalarext.ExtensionRing, c) -> str:
    return c.format() if hasattr(c, "format") else R.coeff.fmt_coeff(c)


def cmd_extring(args, out: Output) -> int:
    ring = _ring(args.ring)
    R = scalarext.build_extension_ring(ring, args.k, scalarext.parse_time(args.time, args.k, ring))
    times = {b: ("symbolic" if v is None else ring.fmt_coeff(v)) for b, v in R.time}
    if args.sub == "table":
        rows = [(a, b, g, _fmt_coeff(R, c)) for a, b, g, c in R.table()]
        header = [
            f"# structure constants of the order-{R.k} extension of {ring} over {R.coeff}",
            "# w_a w_b = sum_g c w_g; index = bit string; leading bit = last difference step",
            "# times: " + ", ".join(f"{scalarext.symbol_name(b)}={v}" for b, v in times.items()),
            "alpha\tbeta\tgamma\tcoefficient",
        ]
        lines = header + ["\t".join(r) for r in rows]
        payload = {
            "ring": str(ring),
            "k": R.k,
            "coefficients": str(R.coeff),
            "times": times,
            "basis": list(R.basis),
            "constants": [{"alpha": a, "beta": b, "gamma": g, "coefficient": c} for a, b, g, c in rows],
        }
        out.emit(lines, payload, [("alpha", "beta", "gamma", "coefficient")] + rows)
        return 0
    res = scalarext.automorphism_search(R)
    time_text = ", ".join(f"{scalarext.symbol_name(b)}={v}" for b, v in times.items())
    basis_text = ", ".join("w" + b for b in R.basis)
    lines = [f"automorphisms of the order-{R.k} extension of {ring} ({time_text}); columns are images of {basis_text}"]
    for i, mat in enumerate(res.matrices, 1):
        lines.append(f"#{i}: " + "; ".join(" ".join(str(x) for x in row) for row in mat))
    lines.append(f"group order: {res.order}")
    payload = {
        "ring": str(ring),
        "k": R.k,
        "times": times,
        "basis": list(R.basis),
        "automorphisms": [[list(row) for row in m] for m in res.matrices],
        "order": res.order,
    }
    out.emit(lines, payload)
    return 0


def _algebra(text: str, ring: Ring) -> carnot.CarnotAlgebra:
    name, _, arg = text.partition(":")
    if name == "heisenberg":
        return carnot.heisenberg(ring)
    if name == "abelian":
        return carnot.abelian(ring, int(arg or 1))
    if name == "filiform":
        return carnot.filiform(ring, int(arg or 3))
    return carnot.load_algebra(text)


def cmd_carnot(args, out: Output) -> int:
    ring = _ring(args.ring)
    src = _algebra(args.algebra, ring)
    tgt = _algebra(args.target, ring) if args.target else src
    names = [v.strip() for v in args.vars.split(",")] if args.vars else None
    f = parse_map(args.map, ring, names)
    if f.domain_rank != src.dim or f.codomain_rank != tgt.dim:
        raise UsageError(f"map is {f.domain_rank} -> {f.codomain_rank}, algebras have dimensions {src.dim} -> {tgt.dim}")
    x = [e.value for e in _values(args.x, ring)]
    v = [e.value for e in _values(args.v, ring)]
    t = ring.parse(args.t).value
    val = carnot.pansu_diff1(f, src, tgt, x, v, t)
    text = ", ".join(ring.fmt(c) for c in val)
    out.emit([f"f^]1[(x, v, t) = ({text})"], {"value": [ring.fmt(c) for c in val]})
    return 0


def cmd_verify(args, out: Output) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    reports = [verify.run_suite(n, args.seed) for n in names]
    lines = []
    for r in reports:
        lines.extend(r.lines())
    passed = sum(r.ok for r in reports)
    lines.append(f"summary: {passed}/{len(reports)} suites passed (seed {args.seed})")
    out.emit(lines, {"seed": args.seed, "ok": passed == len(reports), "suites": [r.as_dict() for r in reports]},
             [(r.suite, "PASS" if r.ok else "FAIL") for r in reports])
    return 0 if passed == len(reports) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slopecalc", description="Exact difference calculus over commutative rings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "tsv"), default="text")
    sub = p.add_subparsers(dest="verb", required=True)

    def map_opts(sp, need_k=True):
        sp.add_argument("--ring", default="Q", help="Q, Z/n, optionally with [params]")
        sp.add_argument("--map", required=True, help='component expressions, e.g. "(x0^2, x0*x1)"')
        sp.add_argument("--vars", help="comma-separated domain variables (default: sorted identifiers)")
        if need_k:
            sp.add_argument("--k", type=int, default=1)

    dq = sub.add_parser("dq", help="difference quotients", parents=[common])
    dq.add_argument("sub", choices=("eval", "sym", "delta", "qdeform", "bary"))
    map_opts(dq)
    dq.add_argument("--at", help="name=value list for dq eval, e.g. x_0=1,x_1=2,t_1=3")
    dq.set_defaults(handler=cmd_dq)

    dd = sub.add_parser("divdiff", help="divided differences of curves", parents=[common])
    dd.add_argument("sub", choices=("rec", "explicit", "sym"))
    map_opts(dd)
    dd.add_argument("--points", help="comma-separated points")
    dd.set_defaults(handler=cmd_divdiff)

    ty = sub.add_parser("taylor", help="Taylor coefficients of f(x + t h)", parents=[common])
    map_opts(ty, need_k=False)
    ty.add_argument("--k", type=int, default=None)
    ty.set_defaults(handler=cmd_taylor)

    ex = sub.add_parser("extring", help="scalar-extension rings", parents=[common])
    ex.add_argument("sub", choices=("table", "aut"))
    ex.add_argument("--ring", default="Q")
    ex.add_argument("--k", type=int, default=1)
    ex.add_argument("--time", default="symbolic", help="symbolic, values in bit order, or name=value pairs")
    ex.set_defaults(handler=cmd_extring)

    ca = sub.add_parser("carnot", help="Carnot groups", parents=[common])
    ca.add_argument("sub", choices=("pansu",))
    ca.add_argument("--ring", default="Q")
    ca.add_argument("--algebra", default="heisenberg", help="heisenberg, abelian:n, filiform:c, or a JSON file")
    ca.add_argument("--target", help="target algebra (default: the source)")
    ca.add_argument("--map", required=True)
    ca.add_argument("--vars")
    ca.add_argument("--x", required=True)
    ca.add_argument("--v", required=True)
    ca.add_argument("--t", required=True)
    ca.set_defaults(handler=cmd_carnot)

    ve = sub.add_parser("verify", help="run verification suites", parents=[common])
    ve.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    ve.add_argument("--seed", type=int, default=0)
    ve.set_defaults(handler=cmd_verify)
    return p


_INPUT_ERRORS = (
    UsageError,
    ParseError,
    RingError,
    PolyError,
    RingMismatch,
    ValueError,
    ArithmeticError,
    OSError,
)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, Output(args.format, stdout))
    except _INPUT_ERRORS as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
