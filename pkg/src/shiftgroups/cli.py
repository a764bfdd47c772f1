"""Command-line front end.

Every library operation is reachable through a verb path; files use the
formats defined next to each type.  Exit codes: 0 success/true/SAT,
1 false/UNSAT, 2 invalid input, 3 inconclusive (bounds exhausted).  Reports
are line-oriented "key=value" facts, or one JSON object under --structured;
given the same inputs and seed the bytes are identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import selftest as selftest_mod
from .errors import ShiftGroupsError
from .fileio import (
    format_table_text,
    format_witness_text,
    parse_function_text,
    parse_matrix_text,
    parse_table_text,
    parse_witness_text,
)
from .cocycle_lab import delta, one_b, psi_tau, rho, subgroup_membership, zero_probe
from .full_group import (
    apply as apply_table,
    cocycle_data,
    compose,
    gen_swap,
    invert,
)
from .orbit_equiv import (
    apply_witness,
    construct_eventual_conjugacy,
    derive_cocycles,
    gamma_scoe_verify,
    noncommuting_witness,
    phi_h_rho,
    psi_h,
    scoe_solve,
    verify_eventual_conjugacy,
    xi_h,
)
from .sft_core import enumerate_words, flow_invariants, format_word, parse_point
from .step_functions import (
    Outcome,
    StepFunction,
    compose_shift,
    evaluate,
    is_sigma_coboundary,
    orbit_sum,
)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3


class Report:
    """Ordered fact collector with a plain and a JSON rendering."""

    def __init__(self) -> None:
        self.facts: dict[str, object] = {}

    def add(self, key: str, value) -> None:
        self.facts[key] = value

    def function(self, key: str, f: StepFunction) -> None:
        self.facts[key] = {
            "depth": f.depth,
            "values": {format_word(w, f.spec.n): v for w, v in sorted(f.values.items())},
        }

    def emit(self, structured: bool) -> None:
        if structured:
            print(json.dumps(self.facts, sort_keys=True, separators=(",", ":")))
            return
        for key, value in self.facts.items():
            if isinstance(value, dict) and "values" in value:
                inner = " ".join(f"{w}:{v}" for w, v in value["values"].items())
                print(f"{key}=depth:{value['depth']} {inner}")
            else:
                print(f"{key}={value}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ShiftGroupsError(f"cannot read {path}: {exc}") from exc


def _matrix(path: str):
    return parse_matrix_text(_read(path))


def _bf_text(divisors) -> str:
    return "trivial" if not divisors else ",".join(str(d) for d in divisors)


def cmd_matrix(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    if args.action == "check":
        report.add("n", spec.n)
        report.add("irreducible", spec.irreducible)
        report.add("primitive", spec.primitive)
        report.add("permutation", spec.permutation)
        return EXIT_TRUE
    if args.action == "invariants":
        inv = flow_invariants(spec)
        report.add("det", inv.det_id_minus_a)
        report.add("sign", inv.sign)
        report.add("bf", _bf_text(inv.bf_group))
        return EXIT_TRUE
    words = enumerate_words(spec, args.k)
    report.add("k", args.k)
    report.add("count", len(words))
    report.add("words", " ".join(format_word(w, spec.n) for w in words))
    return EXIT_TRUE


def cmd_point(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    x = parse_point(args.point, spec)
    report.add("result", str(x.shift(args.m)))
    return EXIT_TRUE


def cmd_fn(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    f = parse_function_text(_read(args.function), spec)
    if args.action == "eval":
        if not args.point:
            raise ShiftGroupsError("fn eval needs a point literal")
        report.add("value", evaluate(f, parse_point(args.point, spec)))
        return EXIT_TRUE
    if args.action == "shift":
        report.function("result", compose_shift(f, args.m))
        return EXIT_TRUE
    if args.action == "orbitsum":
        try:
            exponent: object = int(args.exponent)
        except ValueError:
            exponent = parse_function_text(_read(args.exponent), spec)
        report.function("result", orbit_sum(f, exponent))
        return EXIT_TRUE
    # coboundary decision
    depth = args.depth if args.depth is not None else f.depth + 2
    bound = args.cycle_bound if args.cycle_bound is not None else 2 * spec.n + f.depth
    report.add("search_depth", depth)
    report.add("cycle_bound", bound)
    cert = is_sigma_coboundary(f, depth, bound)
    report.add("outcome", cert.outcome.value)
    if cert.outcome is Outcome.SAT:
        report.function("g", cert.g)
        return EXIT_TRUE
    if cert.outcome is Outcome.UNSAT:
        report.add("cycle", format_word(cert.cycle, spec.n))
        report.add("cycle_sum", cert.cycle_sum)
        return EXIT_FALSE
    return EXIT_INCONCLUSIVE


def cmd_group(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    if args.action == "swap":
        tau = gen_swap(spec, args.a, args.b, args.m)
        report.add("table", format_table_text(tau).strip().replace("\n", "; "))
        return EXIT_TRUE
    if not args.table:
        raise ShiftGroupsError(f"group {args.action} needs a table file")
    tau = parse_table_text(_read(args.table), spec)
    if args.action == "check":
        report.add("pairs", len(tau.pairs))
        report.add("table", format_table_text(tau).strip().replace("\n", "; "))
        report.add("identity", tau.is_identity())
        return EXIT_TRUE
    if args.action == "apply":
        if not args.point:
            raise ShiftGroupsError("group apply needs --point")
        report.add("result", str(apply_table(tau, parse_point(args.point, spec))))
        return EXIT_TRUE
    if args.action == "invert":
        report.add("table", format_table_text(invert(tau)).strip().replace("\n", "; "))
        return EXIT_TRUE
    if args.action == "compose":
        if not args.second:
            raise ShiftGroupsError("group compose needs --second")
        other = parse_table_text(_read(args.second), spec)
        composed = compose(tau, other)  # tau after other
        report.add("table", format_table_text(composed).strip().replace("\n", "; "))
        return EXIT_TRUE
    data = cocycle_data(tau)
    report.function("l", data.l)
    report.function("k", data.k)
    report.function("d", data.d)
    return EXIT_TRUE


def cmd_cocycle(args, report: Report) -> int:
    spec = _matrix(args.matrix)

    def need_fn():
        if not args.function:
            raise ShiftGroupsError(f"cocycle {args.action} needs --fn")
        return parse_function_text(_read(args.function), spec)

    def need_table():
        if not args.table:
            raise ShiftGroupsError(f"cocycle {args.action} needs a table file")
        return parse_table_text(_read(args.table), spec)

    if args.action == "rho":
        report.function("rho", rho(need_fn(), need_table()).table)
        return EXIT_TRUE
    if args.action == "psi":
        tau = need_table()
        report.function("result", psi_tau(tau, need_fn()))
        return EXIT_TRUE
    if args.action == "delta":
        report.function("result", delta(need_fn(), need_table()))
        return EXIT_TRUE
    if args.action == "oneb":
        report.function("result", one_b(need_fn()))
        return EXIT_TRUE
    # membership
    tau = need_table()
    fn = None
    if args.mode in ("cocycle", "coboundary"):
        if not args.function:
            raise ShiftGroupsError(f"mode {args.mode} needs --fn")
        fn = parse_function_text(_read(args.function), spec)
    result = subgroup_membership(tau, args.mode, fn)
    report.add("mode", args.mode)
    report.add("member", result.member)
    if not result.member:
        report.add("witness", format_word(result.witness, spec.n))
        report.function("residual", result.residual)
        return EXIT_FALSE
    return EXIT_TRUE


def cmd_probe(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    f = parse_function_text(_read(args.function), spec)
    result = zero_probe(f)
    report.add("zero", result.zero)
    if result.zero:
        return EXIT_TRUE
    a, b, m = result.params
    report.add("generator", f"swap a={a} b={b} m={m}")
    report.add("word", format_word(result.word, spec.n))
    report.add("value", result.value)
    return EXIT_FALSE


def cmd_coe(args, report: Report) -> int:
    h = parse_witness_text(_read(args.witness))
    if args.action == "check":
        report.add("stages", len(h.chain))
        report.add("valid", True)
        return EXIT_TRUE
    if args.action == "apply":
        direction = "inverse" if args.inverse else "forward"
        spec = h.target if args.inverse else h.source
        x = parse_point(args.point, spec)
        report.add("result", str(apply_witness(h, x, direction)))
        return EXIT_TRUE

    depth = args.depth if args.depth is not None else 8
    bound = args.bound if args.bound is not None else 16
    if args.action == "derive":
        report.add("depth", depth)
        report.add("bound", bound)
        tables = derive_cocycles(h, depth, bound)
        for name in ("k1", "l1", "c1", "k2", "l2", "c2"):
            report.function(name, getattr(tables, name))
        return EXIT_TRUE
    def need(value, what):
        if not value:
            raise ShiftGroupsError(f"coe {args.action} needs {what}")
        return value

    if args.action == "psi":
        f = parse_function_text(_read(need(args.function, "--fn")), h.target)
        report.function("result", psi_h(h, f))
        return EXIT_TRUE
    if args.action == "xi":
        tau = parse_table_text(_read(need(args.table, "--table")), h.source)
        report.add("table", format_table_text(xi_h(h, tau)).strip().replace("\n", "; "))
        return EXIT_TRUE
    if args.action == "phi":
        f = parse_function_text(_read(need(args.function, "--fn")), h.source)
        phi = parse_table_text(_read(need(args.table, "--table")), h.target)
        report.function("result", phi_h_rho(h, f, phi))
        return EXIT_TRUE
    if args.action == "scoe":
        cycle_bound = args.cycle_bound
        report.add("depth", depth)
        report.add("cycle_bound", cycle_bound if cycle_bound is not None else "default")
        cert = scoe_solve(h, search_depth=None if args.depth is None else depth,
                          cycle_bound=cycle_bound)
        report.add("outcome", cert.outcome.value)
        if cert.outcome is Outcome.SAT:
            report.function("b1", cert.b1)
            report.function("b2", cert.b2)
            report.add("pair_constant", cert.pair_constant)
            return EXIT_TRUE
        if cert.outcome is Outcome.UNSAT:
            spec = h.source if cert.cycle_space == "source" else h.target
            report.add("cycle", format_word(cert.cycle, spec.n))
            report.add("cycle_space", cert.cycle_space)
            report.add("cycle_sum", cert.cycle_sum)
            return EXIT_FALSE
        return EXIT_INCONCLUSIVE
    if args.action == "gamma":
        tau = parse_table_text(_read(need(args.table, "--table")), h.source)
        result = gamma_scoe_verify(h, tau)
        report.add("holds", result.holds)
        report.function("c1", result.c1)
        if not result.holds:
            report.function("residual", result.residual)
            return EXIT_FALSE
        return EXIT_TRUE
    if args.action == "eventual":
        report.add("depth", depth)
        if args.verify is not None:
            ok = verify_eventual_conjugacy(h, args.verify, depth)
            report.add("lag", args.verify)
            report.add("holds", ok)
            return EXIT_TRUE if ok else EXIT_FALSE
        tau = parse_table_text(_read(need(args.construct, "--verify K or --construct TABLE")),
                               h.source)
        corrected, lag = construct_eventual_conjugacy(h, tau, depth=depth)
        report.add("lag", lag)
        report.add("stages", len(corrected.chain))
        if args.out:
            Path(args.out).write_text(format_witness_text(corrected), encoding="utf-8")
            report.add("written", args.out)
        return EXIT_TRUE
    raise ShiftGroupsError(f"unknown coe action {args.action!r}")


def cmd_noncommute(args, report: Report) -> int:
    spec = _matrix(args.matrix)
    tau = parse_table_text(_read(args.table), spec)
    found = noncommuting_witness(tau)
    if found is None:
        report.add("outcome", "commutes_on_sample")
        return EXIT_INCONCLUSIVE
    gen, x = found
    report.add("generator", format_table_text(gen).strip().replace("\n", "; "))
    report.add("point", str(x))
    return EXIT_TRUE


def cmd_selftest(args, report: Report) -> int:
    ok = selftest_mod.run_selftest(seed=args.seed, only=args.suite,
                                   printer=report.add)
    report.add("all", "pass" if ok else "FAIL")
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftgroups",
        description="exact computations in one-sided topological Markov shifts")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structured", action="store_true",
                        help="emit one JSON object instead of key=value lines")
    sub = parser.add_subparsers(dest="verb", required=True)

    matrix = sub.add_parser("matrix", parents=[common])
    matrix.add_argument("action", choices=["check", "invariants", "words"])
    matrix.add_argument("matrix")
    matrix.add_argument("k", nargs="?", type=int, default=0)
    matrix.set_defaults(handler=cmd_matrix)

    point = sub.add_parser("point", parents=[common])
    point.add_argument("action", choices=["shift"])
    point.add_argument("matrix")
    point.add_argument("point")
    point.add_argument("m", type=int)
    point.set_defaults(handler=cmd_point)

    fn = sub.add_parser("fn", parents=[common])
    fn.add_argument("action", choices=["eval", "shift", "orbitsum", "coboundary"])
    fn.add_argument("matrix")
    fn.add_argument("function")
    fn.add_argument("point", nargs="?")
    fn.add_argument("--m", type=int, default=1)
    fn.add_argument("--exponent", default="1")
    fn.add_argument("--depth", type=int, default=None)
    fn.add_argument("--cycle-bound", dest="cycle_bound", type=int, default=None)
    fn.set_defaults(handler=cmd_fn)

    group = sub.add_parser("group", parents=[common])
    group.add_argument("action",
                       choices=["check", "apply", "compose", "invert", "data", "swap"])
    group.add_argument("matrix")
    group.add_argument("table", nargs="?")
    group.add_argument("--second", help="table applied first in 'compose'")
    group.add_argument("--point")
    group.add_argument("--a", type=int, default=1)
    group.add_argument("--b", type=int, default=2)
    group.add_argument("--m", type=int, default=1)
    group.set_defaults(handler=cmd_group)

    cocycle = sub.add_parser("cocycle", parents=[common])
    cocycle.add_argument("action",
                         choices=["rho", "psi", "delta", "member", "oneb"])
    cocycle.add_argument("matrix")
    cocycle.add_argument("table", nargs="?")
    cocycle.add_argument("--fn", dest="function")
    cocycle.add_argument("--mode", choices=["af", "cocycle", "coboundary"],
                         default="af")
    cocycle.set_defaults(handler=cmd_cocycle)

    probe = sub.add_parser("probe", parents=[common])
    probe.add_argument("action", choices=["zero"])
    probe.add_argument("matrix")
    probe.add_argument("function")
    probe.set_defaults(handler=cmd_probe)

    coe = sub.add_parser("coe", parents=[common])
    coe.add_argument("action",
                     choices=["check", "apply", "derive", "psi", "xi", "phi",
                              "scoe", "gamma", "eventual"])
    coe.add_argument("witness")
    coe.add_argument("point", nargs="?")
    coe.add_argument("--fn", dest="function")
    coe.add_argument("--table")
    coe.add_argument("--inverse", action="store_true")
    coe.add_argument("--depth", type=int, default=None)
    coe.add_argument("--bound", type=int, default=None)
    coe.add_argument("--cycle-bound", dest="cycle_bound", type=int, default=None)
    coe.add_argument("--verify", type=int, default=None)
    coe.add_argument("--construct")
    coe.add_argument("--out")
    coe.set_defaults(handler=cmd_coe)

    nonc = sub.add_parser("noncommute", parents=[common])
    nonc.add_argument("matrix")
    nonc.add_argument("table")
    nonc.set_defaults(handler=cmd_noncommute)

    st = sub.add_parser("selftest", parents=[common])
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--suite", default=None)
    st.set_defaults(handler=cmd_selftest)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report()
    try:
        code = args.handler(args, report)
    except ShiftGroupsError as exc:
        report.add("error", type(exc).__name__)
        report.add("message", str(exc))
        report.emit(args.structured)
        return EXIT_INVALID
    report.emit(args.structured)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
