"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 domain error (empty moduli space,
dimension mismatch), 3 verification failure. Big integers are printed as
decimal strings.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import intersections as isec
from .arith import telephone_number
from .graphs import (
    PGraph,
    aut_count,
    count_preimages,
    enumerate_pk_graphs,
    exponents_from_s_vector,
    pk_from_p,
    s_vector,
    to_dot,
)
from .partitions import HalfPartition, enumerate_partitions
from .series import (
    build_G,
    build_witten_F,
    check_string_equation,
    graded_keys,
    intersection_from_G,
)

DIRECT_CEILING = 14
GENFUN_CEILING = 20
CPK_CEILING = 8

METHODS = ("direct", "reduced", "pk", "genfun")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _exponents(args, required=True) -> tuple[int, tuple[int, ...]] | None:
    """Resolve ``--n/--k`` or ``--tau`` into ``(n, k)``."""
    if args.k is not None and args.tau is not None:
        raise UsageError("give exactly one of --k and --tau")
    if args.tau is not None:
        if any(c < 0 for c in args.tau):
            raise UsageError("--tau multiplicities must be nonnegative")
        k = exponents_from_s_vector(args.tau)
        if args.n is not None and args.n != len(k):
            raise isec.DimensionMismatchError(
                f"dimension mismatch: --n {args.n} but --tau describes {len(k)} marks"
            )
        return len(k), k
    if args.k is None:
        if required:
            raise UsageError("give one of --k or --tau")
        return None
    if args.n is None:
        raise UsageError("--k needs --n")
    if any(e < 0 for e in args.k):
        raise UsageError("exponents must be nonnegative")
    if len(args.k) != args.n:
        raise isec.DimensionMismatchError(
            f"dimension mismatch: --n {args.n} but {len(args.k)} exponents"
        )
    return args.n, tuple(args.k)


def _domain_kind(err: Exception) -> str:
    if isinstance(err, isec.EmptyModuliSpaceError):
        return "empty moduli space"
    if isinstance(err, isec.DimensionMismatchError):
        return "dimension mismatch"
    return str(err)


def cmd_integrate(args, out) -> int:
    n, k = _exponents(args)
    m = isec.PsiHatMonomial(n, k)
    m.check_top()
    if args.method == "all":
        methods = [
            name
            for name in METHODS
            if not (name == "direct" and n > DIRECT_CEILING)
            and not (name == "genfun" and n > GENFUN_CEILING)
        ]
    else:
        methods = [args.method]
        if args.method == "direct" and n > DIRECT_CEILING:
            raise UsageError(f"direct enumeration is limited to n <= {DIRECT_CEILING}")
        if args.method == "genfun" and n > GENFUN_CEILING:
            raise UsageError(f"genfun is limited to n <= {GENFUN_CEILING}")
    values = {}
    for name in methods:
        if name == "direct":
            values[name] = isec.integrate_direct(m)
        elif name == "reduced":
            values[name] = isec.integrate_reduced(m)
        elif name == "pk":
            values[name] = isec.integrate_pk(m)
        else:
            values[name] = intersection_from_G(build_G(max(n, 5)), s_vector(k))
    result = {
        "n": n,
        "k": list(k),
        "methods": {name: str(v) for name, v in values.items()},
        "agree": len(set(values.values())) == 1,
    }
    print(json.dumps(result), file=out)
    return 0


def cmd_genfun(args, out) -> int:
    if not 5 <= args.marks <= GENFUN_CEILING:
        raise UsageError(f"--marks must lie in 5..{GENFUN_CEILING}")
    if args.which == "F":
        records = build_witten_F(args.marks).to_records()
    else:
        g = build_G(args.marks)
        records = g.to_records()
        for rec in records:
            rec["tauhat"] = str(intersection_from_G(g, rec["s"]))
    print(json.dumps(records, separators=(",", ":")), file=out)
    return 0


def cmd_enumerate(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    for p in enumerate_partitions(args.n):
        if args.format == "dot":
            out.write(to_dot(p))
        else:
            rec = {"pairs": [list(q) for q in p.pairs], "singletons": list(p.singletons)}
            print(json.dumps(rec), file=out)
    return 0


def cmd_pk_graphs(args, out) -> int:
    n, k = _exponents(args)
    s = s_vector(k)
    for g in enumerate_pk_graphs(s):
        if args.format == "dot":
            out.write(to_dot(g))
        else:
            rec = {
                "forks": [list(p) for p in g.fork_pairs],
                "center": list(g.center_legs),
                "aut": str(aut_count(g)),
                "preimages": str(count_preimages(g, s)),
            }
            print(json.dumps(rec), file=out)
    return 0


def _parse_partition(text: str, n: int) -> HalfPartition:
    try:
        blocks = [[int(x) for x in b.split(",")] for b in text.split(";") if b.strip()]
        return HalfPartition.from_blocks(n, blocks)
    except ValueError as err:
        raise UsageError(f"bad --partition {text!r}: {err}")


def cmd_export_dot(args, out) -> int:
    if args.partition is not None:
        if args.n is None:
            raise UsageError("--partition needs --n")
        out.write(to_dot(PGraph(_parse_partition(args.partition, args.n))))
        return 0
    n, k = _exponents(args)
    for g in enumerate_pk_graphs(s_vector(k)):
        out.write(to_dot(g))
    return 0


# verification suite


def _telephone_recurrence(n: int) -> int:
    a, b = 1, 1
    for i in range(2, n + 1):
        a, b = b, b + (i - 1) * a
    return b


def _engine_check(item):
    n, k = item
    values = {
        "direct": isec.integrate_direct(k),
        "reduced": isec.integrate_reduced(k),
        "pk": isec.integrate_pk(k),
    }
    return n, k, values


def _cpk_check(item):
    n, k = item
    s = s_vector(k)
    fibers = Counter(pk_from_p(p, k) for p in enumerate_partitions(n))
    listed = list(enumerate_pk_graphs(s))
    if set(listed) != set(fibers) or len(listed) != len(set(listed)):
        return f"n={n} k={k}: enumerated P_k-graphs differ from projected ones"
    for g in listed:
        if count_preimages(g, s) != fibers[g]:
            return f"n={n} k={k} graph={g}: C={count_preimages(g, s)} but fiber has {fibers[g]}"
    if sum(fibers.values()) != telephone_number(n):
        return f"n={n} k={k}: preimage counts do not sum to T(n)"
    return None


def _map(fn, items, threads):
    """Ordered map, so output never depends on the worker count."""
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=4))


def cmd_verify(args, out) -> int:
    n_max = args.n_max
    if n_max < 5:
        raise UsageError("--n-max must be at least 5")
    threads = args.threads or os.cpu_count() or 1
    passed, failures = Counter(), []

    def record(name, ok, detail=""):
        if ok:
            passed[name] += 1
        else:
            failures.append(f"{name}: {detail}")

    for n in range(1, n_max + 1):
        count = sum(1 for _ in enumerate_partitions(n))
        ok = count == telephone_number(n) == _telephone_recurrence(n)
        record("telephone", ok, f"n={n}: enumerated {count}, T(n)={telephone_number(n)}")

    f = build_witten_F(max(n_max, 5))
    record("string-equation", check_string_equation(f), f"F truncated at {f.n_max}")
    g_max = min(n_max, GENFUN_CEILING)
    g = build_G(g_max)
    for name, series in (("grading-F", f), ("grading-G", g)):
        bad = [s for s in series if sum(i * c for i, c in enumerate(s)) != sum(s) - 3]
        record(name, not bad, f"ungraded monomial {bad[:1]}")
    low = [s for s in g if sum(s) <= 4]
    record("G-vanishing-window", not low, f"G has monomial {low[:1]} of degree <= 4")

    items = [
        (n, exponents_from_s_vector(s))
        for s in graded_keys(n_max, 5)
        for n in [sum(s)]
    ]
    for n, k, values in _map(_engine_check, items, threads):
        if n <= g_max:
            values["genfun"] = intersection_from_G(g, s_vector(k))
        ok = len(set(values.values())) == 1
        record("engine-agreement", ok, f"n={n} k={list(k)} values={values}")

    cpk_items = [item for item in items if item[0] <= CPK_CEILING]
    for err in _map(_cpk_check, cpk_items, threads):
        record("preimage-counts", err is None, err)

    for name in sorted(passed):
        print(f"PASS {name}: {passed[name]}", file=out)
    total = sum(passed.values())
    print(f"passed {total}, failed {len(failures)}", file=out)
    if failures:
        print(f"FAIL first counterexample -> {failures[0]}", file=out)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hassett-psi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def exponent_flags(p):
        p.add_argument("--n", type=int, help="number of marks")
        p.add_argument("--k", type=_int_list, help="dense exponents k1,...,kn")
        p.add_argument("--tau", type=_int_list, help="multiplicities s0,s1,... of each exponent")

    p = sub.add_parser("integrate", help="top intersection of psi-hat classes")
    exponent_flags(p)
    p.add_argument("--method", choices=METHODS + ("all",), default="all")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("genfun", help="dump the truncated F or G series")
    p.add_argument("--marks", type=int, required=True, help="truncation |s| <= marks")
    p.add_argument("--which", choices=("F", "G"), default="G")
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser("enumerate", help="list partitions of [n] into blocks of size <= 2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("pk-graphs", help="list canonical P_k-graphs with counts")
    exponent_flags(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_pk_graphs)

    p = sub.add_parser("export-dot", help="DOT for one P-graph or all P_k-graphs of k")
    exponent_flags(p)
    p.add_argument("--partition", help='blocks like "1,2;3;4;5"')
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("verify", help="run the cross-verification suite")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--threads", type=int, default=0, help="worker processes (default: all cores)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"hassett-psi: error: {err}", file=sys.stderr)
        return 1
    except isec.DomainError as err:
        print(json.dumps({"error": _domain_kind(err), "detail": str(err)}), file=out)
        return 2


if __name__ == "__main__":
    sys.exit(main())
