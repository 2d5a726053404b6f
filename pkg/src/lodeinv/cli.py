"""Command line interface: ``lodeinv <command> [options]``.

Exit codes: 0 everything verified, 1 some verification left a residual,
2 usage or parse error, 3 a configured limit was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from . import config
from .diffpoly import DiffPoly, Weight
from .errors import ConfigurationError, DomainError, JetOrderLimitError, LodeInvError
from .halphen import (
    CATALOG, PowerProduct, VerificationError, arbiter_generator, chi_seq, derivative_formula_check,
    display_comparisons, fundamental_set, generator_discrepancies, invariant_derivative, phi_seq,
    printed_generator, resolved_catalog, verify_catalog,
)
from .liesym import (
    ABSOLUTE, Invariant, check_absolute, check_relative, count_report, find_relative_invariants,
    infer_index,
)
from .ratfunc import RatFunc
from .serialize import dumps, expr_to_json, fraction_pair, invariant_to_json
from .syntax import parse_rational, to_latex, to_text
from .transform import affine_family, moebius_family, verify_transformation_law

OK, RESIDUAL, USAGE, LIMIT = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    records: List[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    status: int = OK


# -- rendering -----------------------------------------------------------------------

def _text(value) -> str:
    if isinstance(value, PowerProduct):
        return " * ".join(f"({to_text(inv.expr)})" + (f"^({e})" if e != 1 else "") for inv, e in value.factors) or "1"
    if isinstance(value, (DiffPoly, RatFunc)):
        return to_text(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return ", ".join(_text(v) for v in value)
    return str(value)


def _latex(value) -> str:
    if isinstance(value, PowerProduct):
        parts = []
        for inv, e in value.factors:
            base = to_latex(inv.expr)
            (mono, c), = inv.expr.terms[:1] or [((), 1)]
            if len(inv.expr) > 1 or c != 1 or len(mono) != 1 or mono[0][1] != 1:
                base = rf"\left({base}\right)"
            parts.append(base if e == 1 else f"{base}^{{{e}}}")
        return " ".join(parts) or "1"
    if isinstance(value, (DiffPoly, RatFunc)):
        return to_latex(value)
    return _text(value)


def _jsonable(value):
    if isinstance(value, (DiffPoly, RatFunc, PowerProduct)):
        return {"text": _text(value), **expr_to_json(value)}
    if isinstance(value, Invariant):
        return invariant_to_json(value)
    if isinstance(value, Fraction):
        return fraction_pair(value)
    if isinstance(value, Weight):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return dumps(_jsonable({"command": report.command, "records": report.records,
                                "summary": report.summary, "status": report.status}), indent=2)
    lines = []
    if fmt == "latex":
        for r in report.records:
            if "expr" in r:
                lines.append(rf"{_latex_name(r['name'])} &= {_latex(r['expr'])} \\")
        for k, v in report.summary.items():
            lines.append(f"% {k}: {_text(v)}")
        return "\n".join(lines)
    for r in report.records:
        head = r.get("name", "")
        if "verdict" in r:
            head += f": {r['verdict']}"
        lines.append(head)
        for k, v in r.items():
            if k in ("name", "verdict") or v is None or v == "":
                continue
            lines.append(f"  {k}: {_text(v)}")
    if report.summary:
        lines.append("summary")
        for k, v in report.summary.items():
            lines.append(f"  {k}: {_text(v)}")
    return "\n".join(lines)


def _latex_name(name: str) -> str:
    return r"\mathrm{" + name.replace("_", r"\_") + "}"


# -- helpers ---------------------------------------------------------------------------

def _generator(args):
    return printed_generator() if args.generator == "printed" else arbiter_generator()


def _lookup(name: str, cat) -> Invariant:
    if name not in cat:
        raise DomainError(f"unknown invariant {name!r}; known: {', '.join(cat)}")
    return cat[name]


def _verify_invariant(inv: Invariant, v):
    from .halphen import check_power_product

    if isinstance(inv.expr, PowerProduct):
        return check_power_product(inv.expr, v, inv.index)
    if inv.kind == ABSOLUTE:
        return check_absolute(inv.expr, v)
    return check_relative(inv.expr, inv.index, v)


# -- commands ------------------------------------------------------------------------

def cmd_catalog(args) -> Report:
    rep = Report("catalog")
    generators = [("printed", printed_generator()), ("induced", arbiter_generator())]
    if args.generator == "printed":
        generators.reverse()
    rejected = {}
    unsound = 0
    for gname, v in generators:
        rejected[gname] = 0
        for vd in verify_catalog(v, gname):
            rec = {"name": vd.name, "generator": gname, "verdict": vd.verdict, "printed": vd.printed,
                   "kind": vd.kind, "index": vd.index, "weight": vd.weight, "order": vd.order,
                   "provenance": "printed"}
            if vd.notes:
                rec["notes"] = "; ".join(vd.notes)
            if not vd.verified:
                rejected[gname] += 1
                rec["residual_terms"] = len(vd.residual.num if isinstance(vd.residual, RatFunc) else vd.residual)
                if vd.repair is not None:
                    rec["repair"] = vd.repair.summary
                    if vd.repair.generator is not None:
                        rec["repaired_generator"] = vd.repair.generator
                        rec["repair_provenance"] = "ansatz"
                    if not vd.repair.verified:
                        unsound += 1
            rep.records.append(rec)
    rep.summary["entries"] = len(CATALOG)
    for gname, count in rejected.items():
        rep.summary[f"rejected under {gname} generator"] = count
    rep.summary["unrepaired"] = unsound
    for comp, a, b in generator_discrepancies(printed_generator(), arbiter_generator()):
        rep.summary[f"generator_discrepancy {comp}"] = f"printed {to_text(a)}; induced {to_text(b)}"
    for d in display_comparisons(_generator(args)):
        rel = d["relation"]
        rep.summary[f"display {d['name']}"] = (f"matches computed up to scalar {rel}" if rel is not None
                                               else "differs from computed")
    rep.status = RESIDUAL if any(rejected.values()) else OK
    return rep


def cmd_verify(args) -> Report:
    v = _generator(args)
    expr = parse_rational(args.expr)
    rep = Report("verify")
    if expr.is_polynomial():
        expr = expr.as_poly()
    rec = {"name": args.expr, "order": expr.max_order()}
    if args.index is None:
        if isinstance(expr, DiffPoly):
            m = infer_index(expr, v)
            if m is None:
                rec["verdict"] = "not a relative invariant"
                rep.records.append(rec)
                rep.status = RESIDUAL
                return rep
        else:
            m = Fraction(0)
    else:
        m = Fraction(args.index)
    if m == 0:
        res = check_absolute(expr, v)
    else:
        res = check_relative(expr, m, v)
    rec["verdict"] = "verified" if res.verified else "residual"
    rec["index"] = m
    if isinstance(expr, DiffPoly):
        rec["weight"] = expr.weight()
    rec["expr"] = expr
    if not res.verified:
        rec["residual"] = res.residual
        rep.status = RESIDUAL
    rep.records.append(rec)
    rep.summary["generator"] = args.generator
    return rep


def cmd_find(args) -> Report:
    v = _generator(args)
    basis = find_relative_invariants(args.weight, args.max_order, v)
    rep = Report("find")
    for i, b in enumerate(basis):
        rep.records.append({"name": f"F{i + 1}", "expr": b, "index": args.weight, "order": b.max_order(),
                            "provenance": "ansatz"})
    rep.summary.update({"weight": args.weight, "max_order": args.max_order, "dimension": len(basis),
                        "generator": args.generator})
    return rep


def cmd_generate(args) -> Report:
    v = _generator(args)
    cat = resolved_catalog(v)
    seed = _lookup(args.seed_name, cat)
    base = _lookup(args.base, cat)
    rep = Report("generate")
    failed = False
    for inv in [*phi_seq(seed, args.steps, base), *chi_seq(seed, args.steps, base)]:
        res = _verify_invariant(inv, v)
        failed |= not res.verified
        rep.records.append({"name": inv.name, "verdict": res.verdict, "kind": inv.kind, "index": inv.index,
                            "order": inv.order, "expr": inv.expr, "provenance": inv.provenance})
    rep.summary.update({"seed": seed.name, "seed_index": seed.index, "seed_order": seed.order,
                        "base": base.name, "base_index": base.index})
    rep.status = RESIDUAL if failed else OK
    return rep


def cmd_fundamental(args) -> Report:
    v = _generator(args)
    fs = fundamental_set(args.order, v, seed=args.rng_seed)
    rep = Report("fundamental")
    for inv in fs.invariants:
        rep.records.append({"name": inv.name, "verdict": "verified", "kind": inv.kind, "order": inv.order,
                            "expr": inv.expr, "provenance": inv.provenance})
    rep.summary.update({"order": args.order, "count": len(fs.invariants), "jacobian_rank": fs.rank})
    return rep


def cmd_count(args) -> Report:
    v = _generator(args)
    info = count_report(v, args.order, seed=args.rng_seed)
    rep = Report("count")
    rep.records.append({"name": f"order {args.order}", "count": info["rank_count"],
                        "three_p_plus_one": info["expected_3p_plus_1"],
                        "gamma_formula": info["formula_count"],
                        "gamma_formula_consistent": info["consistent"]})
    rep.summary["count"] = info["rank_count"]
    if not info["consistent"]:
        rep.summary["note"] = (f"closed form n+4-p(n-2) gives {info['formula_count']}, "
                               f"generic rank gives {info['rank_count']}; the closed form is inconsistent")
    return rep


def cmd_transform_check(args) -> Report:
    cat = resolved_catalog(_generator(args))
    if args.invariant:
        names = [args.invariant]
    else:
        names = [n for n, inv in cat.items() if inv.kind != ABSOLUTE]
    rep = Report("transform-check")
    failed = False
    for name in names:
        inv = _lookup(name, cat)
        if inv.kind == ABSOLUTE or not isinstance(inv.expr, DiffPoly):
            raise DomainError(f"{name} is not a polynomial relative invariant")
        for fam in (moebius_family(), affine_family()):
            law = verify_transformation_law(inv.expr, int(inv.index), fam)
            failed |= not law.verified
            rep.records.append({"name": name, "family": law.family, "verdict": "verified" if law.verified else "residual",
                                "index": inv.index, "factor_base": law.base,
                                "lower_terms_vanish": law.lower_terms_vanish,
                                "holds_with_dxi_dz": law.holds_with_xi_prime, "holds_with_xi": law.holds_with_xi})
    rep.summary["finding"] = ("relative invariants of index m acquire the factor (dxi/dz)^m; "
                              "the factor xi^m does not reproduce the transformed invariant")
    rep.status = RESIDUAL if failed else OK
    return rep


def cmd_inv_derive(args) -> Report:
    v = _generator(args)
    cat = resolved_catalog(v)
    of, wrt = _lookup(args.of, cat), _lookup(args.wrt, cat)
    if of.kind != ABSOLUTE or wrt.kind != ABSOLUTE:
        raise DomainError("invariant differentiation needs absolute invariants")
    inv, res = invariant_derivative(of, wrt, v)
    rep = Report("inv-derive")
    rep.records.append({"name": inv.name, "verdict": res.verdict, "kind": inv.kind, "order": inv.order,
                        "expr": inv.expr, "provenance": inv.provenance})
    rep.summary["closed_form_for_D(I1)/D(I0)"] = (
        "confirmed" if derivative_formula_check(cat["S1"], cat["R0"], cat["S0"]) else "refuted")
    rep.status = OK if res.verified else RESIDUAL
    return rep


COMMANDS = {
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "find": cmd_find,
    "generate": cmd_generate,
    "fundamental": cmd_fundamental,
    "count": cmd_count,
    "transform-check": cmd_transform_check,
    "inv-derive": cmd_inv_derive,
}


# -- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _common(with_seed: bool) -> argparse.ArgumentParser:
    p = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--format", choices=("text", "json", "latex"))
    p.add_argument("--max-jet-order", type=int)
    p.add_argument("--generator", choices=("printed", "induced"))
    if with_seed:
        p.add_argument("--seed", dest="rng_seed", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lodeinv", description="Differential invariants of linear ODEs in canonical form.")
    parser.add_argument("--format", choices=("text", "json", "latex"), default="text")
    parser.add_argument("--seed", dest="rng_seed", type=int, default=None, help="seed for random sampling")
    parser.add_argument("--max-jet-order", type=int, default=None)
    parser.add_argument("--generator", choices=("printed", "induced"), default="induced",
                        help="infinitesimal generator used by the checker")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(True)
    sub.add_parser("catalog", parents=[common], help="verify the printed catalog")
    p = sub.add_parser("verify", parents=[common], help="check an expression")
    p.add_argument("expr")
    p.add_argument("--index")
    p = sub.add_parser("find", parents=[common], help="solve for relative invariants")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--max-order", type=int, required=True)
    p = sub.add_parser("generate", parents=[_common(False)], help="iterate the phi/chi sequence")
    p.add_argument("--seed", dest="seed_name", required=True, help="catalog name of the seed invariant")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--base", default="S0")
    p = sub.add_parser("fundamental", parents=[common], help="fundamental absolute invariants")
    p.add_argument("--order", type=int, required=True)
    p = sub.add_parser("count", parents=[common], help="count invariants of a prolongation")
    p.add_argument("--order", type=int, required=True)
    p = sub.add_parser("transform-check", parents=[common], help="check the finite transformation law")
    p.add_argument("--invariant")
    p = sub.add_parser("inv-derive", parents=[common], help="invariant differentiation")
    p.add_argument("--of", required=True)
    p.add_argument("--wrt", required=True)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    overrides = {}
    if args.max_jet_order is not None:
        overrides["max_jet_order"] = args.max_jet_order
    if args.rng_seed is not None:
        overrides["seed"] = args.rng_seed
    try:
        with config.overridden(**overrides):
            report = COMMANDS[args.command](args)
    except (JetOrderLimitError, ConfigurationError) as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return LIMIT
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        if exc.certificate is not None:
            print(f"certificate: {_text(exc.certificate)}", file=sys.stderr)
        return RESIDUAL
    except LodeInvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    print(render(report, args.format), file=out)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
