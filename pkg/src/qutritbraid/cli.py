"""Command line entry point: ``qutritbraid <subcommand>`` (or ``python -m qutritbraid``).

Output is JSON by default (sorted keys, byte-identical across runs unless
``--timestamp`` is given); ``--pretty`` prints a human-readable summary.  The
field order defaults to $QUTRITBRAID_FIELD_ORDER, else 72.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import _kernels
from .cyclo import DEFAULT_ORDER_ENV, FieldTooSmallError, cyclotomic_field, default_order

REQUIRED_DIVISOR = 72  # ninth roots of unity with sqrt 2, sqrt 3 and the 24th root A


class CheckList:
    def __init__(self):
        self.items: list[dict] = []

    def add(self, suite: str, name: str, passed: bool, detail: str = ""):
        self.items.append({"suite": suite, "name": name, "passed": bool(passed), "detail": detail})

    def guard(self, suite: str, name: str, fn: Callable[[], bool | tuple[bool, str]]):
        try:
            res = fn()
        except Exception as exc:  # a crashing check is a failing check
            self.add(suite, name, False, f"{type(exc).__name__}: {exc}")
            return
        if isinstance(res, tuple):
            self.add(suite, name, *res)
        else:
            self.add(suite, name, res)

    @property
    def passed(self) -> bool:
        return all(i["passed"] for i in self.items)


# suites

def _suite_identities(cl: CheckList, catalog):
    from .groups import identity_suite

    for c in identity_suite(catalog):
        cl.add("identities", c.name, c.passed, c.detail)


def _suite_tqft(cl: CheckList, catalog):
    from .braidsim import (ancilla_protocol, certify_ancilla, enumerate_basis, full_twist,
                           middle_braid_2211, middle_braid_phase, qutrit_space, sigma_matrix)
    from .cyclo import exp_i_pi, root_of_unity, sqrt_constant
    from .exact_linalg import ExactMatrix, scalar_multiple_of
    from .tqft import SU2Level4

    f = catalog.field
    th = SU2Level4(f)
    s = "tqft"

    def consistency():
        rep = th.consistency_check()
        return True, ", ".join(f"{k}={v}" for k, v in rep.items())

    cl.guard(s, "pentagon, hexagons, unitarity, ribbon", consistency)
    q = qutrit_space()
    cl.guard(s, "sigma_1 on 2222 ~ G1", lambda: scalar_multiple_of(
        sigma_matrix(q, 1, 1, th).matrix, catalog["G1"]) is not None)
    cl.guard(s, "sigma_2 on 2222 ~ G2", lambda: scalar_multiple_of(
        sigma_matrix(q, 2, 1, th).matrix, catalog["G2"]) is not None)
    cl.guard(s, "d1 = d3", lambda: th.quantum_dimension(1) == th.quantum_dimension(3))
    cl.guard(s, "theta_u(1,2,1) = theta_u(1,2,3)",
             lambda: th.theta_symbol(1, 2, 1) == th.theta_symbol(1, 2, 3))
    half = sqrt_constant(2, f) / 2
    i = root_of_unity(1, 4, f)
    s3 = sqrt_constant(3, f) / 2
    qubit = ExactMatrix.from_entries([[Fraction(-1, 2), i * s3], [i * s3, Fraction(-1, 2)]], f)
    q1221 = enumerate_basis((1, 2, 2, 1), 0)
    cl.guard(s, "sigma_2^-1 on 1221 ~ [[-1/2, i sqrt3/2], [i sqrt3/2, -1/2]]",
             lambda: scalar_multiple_of(sigma_matrix(q1221, 2, -1, th).matrix, qubit) is not None)
    mid = ExactMatrix.from_entries([[exp_i_pi(2, 3, f) * half, half],
                                    [exp_i_pi(-5, 6, f) * half, -i * half]], f)
    cl.guard(s, "middle braid on 2211 ~ reference matrix",
             lambda: scalar_multiple_of(middle_braid_2211(th).matrix, mid) is not None)

    def twist_swaps():
        m = full_twist(enumerate_basis((2, 2, 1, 1), 0), 2, th).matrix
        return m.entry(0, 0).is_zero() and m.entry(1, 1).is_zero()

    cl.guard(s, "full twist on 2211 swaps |0> and |2>", twist_swaps)
    cl.guard(s, "middle braid phase on 4222 equals 0222",
             lambda: middle_braid_phase(4, th) == middle_braid_phase(0, th))
    for target in ("plus", "minus"):
        cl.guard(s, f"ancilla {target} certified", lambda t=target: certify_ancilla(ancilla_protocol(t, th)))


def _suite_presentation(cl: CheckList, catalog):
    from .presentations import check_relations, gamma648_presentation, todd_coxeter

    p = gamma648_presentation()
    rep = check_relations(p, {g: catalog[g] for g in p.generators})
    for rel, ok in rep.items():
        cl.add("presentation", f"relator {rel} is the identity", ok)
    cl.guard("presentation", "coset enumeration gives 648",
             lambda: (lambda n: (n == 648, f"got {n}"))(todd_coxeter(p)))


def _suite_closure(cl: CheckList, catalog):
    from .groups import center, closure, conjugate_group

    s = "closure"
    c = catalog

    def order_of(names, want, mode="exact"):
        g = closure([c[n] for n in names], mode=mode, names=names)
        return g.order == want, f"got {g.order}"

    cl.guard(s, "|<G1t,G2t,FUMt>| = 648", lambda: order_of(["G1t", "G2t", "FUMt"], 648))
    cl.guard(s, "|<G1,G2>| = 162", lambda: order_of(["G1", "G2"], 162))
    cl.guard(s, "|<G1t,G2t,FUMt>| mod center = 216",
             lambda: order_of(["G1t", "G2t", "FUMt"], 216, "mod_center"))
    cl.guard(s, "|<G1,G2>| mod center = 54", lambda: order_of(["G1", "G2"], 54, "mod_center"))

    gt = closure([c["G1t"], c["G2t"], c["FUMt"]], names=["G1t", "G2t", "FUMt"])
    fr = closure([c["G1"], c["G2"], c["FUM"]], names=["G1", "G2", "FUM"])
    bl = closure([c["F18"], c["E"], c["Btilde"]], names=["F18", "E", "Btilde"])
    cl.guard(s, "N lies in <G1t,G2t,FUMt>", lambda: gt.contains(c["N"]))
    cl.guard(s, "center of <G1t,G2t,FUMt> has order 3", lambda: center(gt).order == 3)
    cl.guard(s, "<F18,E,Btilde> = <G1t,G2t,FUMt> as sets", lambda: bl.equal_as_sets(gt))
    cl.guard(s, "O^T Fr O = <G1t,G2t,FUMt> as sets",
             lambda: conjugate_group(fr, c["O"], transpose=True).equal_as_sets(gt))
    cl.guard(s, "J Fr J = Fr", lambda: conjugate_group(fr, c["J"]).equal_as_sets(fr))


SUITES = {
    "identities": _suite_identities,
    "tqft": _suite_tqft,
    "presentation": _suite_presentation,
    "closure": _suite_closure,
}


# commands

def _catalog(args):
    from .groups import GeneratorCatalog

    overrides = {}
    for name in getattr(args, "corrupt", None) or []:
        base = GeneratorCatalog(args.field_order)
        overrides[name] = -base[name]
    return GeneratorCatalog(args.field_order, overrides=overrides)


def cmd_verify(args) -> tuple[dict, int, str]:
    catalog = _catalog(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    cl = CheckList()
    for n in names:
        SUITES[n](cl, catalog)
    failed = [i["name"] for i in cl.items if not i["passed"]]
    report = {"suites": names, "checks": cl.items, "passed": cl.passed, "failed": failed,
              "corrupted": sorted(args.corrupt or [])}
    lines = [f"[{'PASS' if i['passed'] else 'FAIL'}] {i['suite']}: {i['name']}"
             + (f"  ({i['detail']})" if i["detail"] and not i["passed"] else "") for i in cl.items]
    lines.append(f"{len(cl.items) - len(failed)}/{len(cl.items)} checks passed")
    return report, 0 if cl.passed else 1, "\n".join(lines)


def cmd_closure(args):
    from .groups import closure, fingerprint

    catalog = _catalog(args)
    pairs = catalog.resolve(args.gens)
    mode = "mod_center" if args.mode in ("pu", "mod_center") else "exact"
    g = closure([m for _, m in pairs], mode=mode, cap=args.cap, names=[n for n, _ in pairs])
    data = g.to_json()
    fp = data["fingerprint"]
    text = (f"<{', '.join(n for n, _ in pairs)}> ({mode}): order {g.order}\n"
            f"center order {fp['center_order']}, {fp['conjugacy_classes']} conjugacy classes, "
            f"derived subgroup order {fp['derived_subgroup_order']}\n"
            f"element orders: {fp['element_orders']}")
    if args.summary:
        data = {"order": g.order, "mode": mode, "generators": data["generators"], "fingerprint": fp}
    return data, 0, text


def _parse_state(spec: str, space, field):
    from .cyclo import parse
    from .exact_linalg import StateVector

    spec = spec.strip()
    if spec.startswith("e") and spec[1:].isdigit():
        k = int(spec[1:])
        if not 1 <= k <= space.dim:
            raise ValueError(f"basis index e{k} out of range 1..{space.dim}")
        return StateVector.basis(space.dim, k - 1, field)
    if spec.startswith("label:"):
        labels = tuple(int(x) for x in spec[6:].split(","))
        return StateVector.basis(space.dim, space.index(labels), field)
    vals = [parse(x, field) for x in spec.split(";")]
    return StateVector(vals, field)


def cmd_braid(args):
    from .braidsim import enumerate_basis, parse_braid_word, word_operator
    from .tqft import SU2Level4

    th = SU2Level4(args.field_order)
    leaves = [int(x) for x in args.leaves.split(",")]
    space = enumerate_basis(leaves, args.total)
    if space.dim == 0:
        raise ValueError(f"{space.describe()} is an empty fusion space")
    word = parse_braid_word(args.word)
    op = word_operator(space, word, th)
    data = {
        "leaves": list(space.leaves),
        "total": space.total,
        "word": args.word,
        "source_basis": [list(b) for b in space.basis],
        "target_basis": [list(b) for b in op.target.basis],
        "leaf_out": list(op.target.leaves),
        "matrix": op.matrix.to_json(),
        "matrix_pretty": [[x.pretty() for x in row] for row in op.matrix.entries()],
    }
    text = f"{space.describe()} --[{args.word}]--> {op.target.describe()}\n{op.matrix.latex()}"
    if args.state:
        st = _parse_state(args.state, space, th.field)
        out = op @ st
        data["state_in"] = st.to_json()
        data["state_out"] = out.to_json()
        data["state_out_pretty"] = [x.pretty() for x in out.entries]
        text += "\nstate out: " + ", ".join(x.latex() for x in out.entries)
    return data, 0, text


def cmd_ancilla(args):
    from .braidsim import ancilla_protocol, certify_ancilla
    from .tqft import SU2Level4

    res = ancilla_protocol(args.target, SU2Level4(args.field_order))
    data = res.to_json()
    data["certified"] = certify_ancilla(res)
    text = (f"target {args.target}: start {res.start}, word {data['word']}, leaves {res.leaves}\n"
            f"state: {', '.join(x.latex() for x in res.state.entries)}\n"
            f"|coefficients|^2: {', '.join(data['moduli_squared'])}\n"
            f"reachable relative phases: {', '.join(data['reachable_relative_phases'])}\n"
            f"certified: {data['certified']}")
    return data, 0 if data["certified"] else 1, text


def cmd_coset_enum(args):
    from .presentations import gamma648_presentation, load_presentation, parse_word, todd_coxeter

    p = load_presentation(args.pres) if args.pres else gamma648_presentation()
    sub = [parse_word(w, p.generators) for w in (args.subgroup.split(";") if args.subgroup else [])]
    n = todd_coxeter(p, sub, limit=args.limit, strategy=args.strategy)
    data = {"generators": list(p.generators), "relators": p.relator_strings(),
            "subgroup": [w for w in (args.subgroup.split(";") if args.subgroup else [])],
            "strategy": args.strategy, "index": n}
    return data, 0, f"index {n}"


def cmd_dump_tqft(args):
    from .tqft import SU2Level4

    th = SU2Level4(args.field_order, gauge=args.gauge)
    data = th.dump()
    lines = [f"A = {th.A.latex()}, loop value d = {th.d.latex()}"]
    lines += [f"d_{a} = {th.quantum_dimension(a).latex()}" for a in range(5)]
    for key, fm in sorted(data["f_matrices"].items()):
        lines.append(f"F[{key}] rows {fm['rows']} cols {fm['cols']}")
    return data, 0, "\n".join(lines)


def cmd_catalog(args):
    catalog = _catalog(args)
    names = [n.strip() for n in args.names.split(",")] if args.names else list(catalog)
    data = {n: {"matrix": catalog[n].to_json(),
                "latex": [[x.latex() for x in row] for row in catalog[n].entries()]} for n in names}
    text = "\n\n".join(f"{n} =\n{catalog[n].latex()}" for n in names)
    return data, 0, text


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field-order", type=int, default=None,
                        help=f"cyclotomic field order (default ${DEFAULT_ORDER_ENV} or 72)")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    out.add_argument("--pretty", dest="fmt", action="store_const", const="pretty", help="human-readable output")
    common.add_argument("--out", type=Path, help="write output to this file instead of stdout")
    common.add_argument("--timestamp", action="store_true", help="add a generation timestamp to JSON")
    common.add_argument("--backend", choices=["numba", "numpy"], help="kernel backend")

    p = argparse.ArgumentParser(prog="qutritbraid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run exact verification suites")
    v.add_argument("--suite", choices=["all", *SUITES], default="all")
    v.add_argument("--corrupt", action="append", metavar="NAME",
                   help="negate a base catalog matrix first (negative control)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("closure", parents=[common], help="close a set of catalog matrices")
    c.add_argument("--gens", required=True, help="comma-separated catalog names, e.g. G1t,G2t,FUMt")
    c.add_argument("--mode", choices=["exact", "pu", "mod_center"], default="exact")
    c.add_argument("--cap", type=int, default=10_000)
    c.add_argument("--summary", action="store_true", help="omit the element list")
    c.set_defaults(func=cmd_closure, corrupt=None)

    b = sub.add_parser("braid", parents=[common], help="braid matrix on a fusion space")
    b.add_argument("--leaves", required=True, help="e.g. 2,2,2,2")
    b.add_argument("--total", type=int, default=0)
    b.add_argument("--word", default="", help="e.g. s2:-1,s2:1")
    b.add_argument("--state", help="e<k> (k-th basis vector), label:<x2,...>, or ';'-separated entries")
    b.set_defaults(func=cmd_braid)

    a = sub.add_parser("ancilla", parents=[common], help="prepare (|1> +- |3>)/sqrt2 on 1221")
    a.add_argument("--target", choices=["plus", "minus"], default="plus")
    a.set_defaults(func=cmd_ancilla)

    e = sub.add_parser("coset-enum", parents=[common], help="Todd-Coxeter coset enumeration")
    e.add_argument("--pres", type=Path, help="presentation file (default: the packaged order-648 one)")
    e.add_argument("--subgroup", help="';'-separated subgroup generator words")
    e.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    e.add_argument("--limit", type=int, default=100_000)
    e.set_defaults(func=cmd_coset_enum)

    d = sub.add_parser("dump-tqft", parents=[common], help="all F, R, theta and d tables")
    d.add_argument("--gauge", choices=["qutrit", "kl"], default="qutrit")
    d.set_defaults(func=cmd_dump_tqft)

    k = sub.add_parser("catalog", parents=[common], help="print the named matrices")
    k.add_argument("--names", help="comma-separated subset")
    k.set_defaults(func=cmd_catalog, corrupt=None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.field_order is None:
        args.field_order = default_order()
    if args.field_order % REQUIRED_DIVISOR:
        print(f"error: field too small: Q(zeta_{args.field_order}) lacks the ninth roots of unity, "
              f"sqrt 2 or sqrt 3 (need {REQUIRED_DIVISOR} | n)", file=sys.stderr)
        return 2
    cyclotomic_field(args.field_order)
    if args.backend:
        _kernels.set_backend(args.backend)
    try:
        data, code, text = args.func(args)
    except (ValueError, KeyError, IndexError, FieldTooSmallError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.fmt == "pretty":
        body = text + "\n"
    else:
        if args.timestamp:
            data = {"result": data, "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat()}
        body = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.out:
        args.out.write_text(body)
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
