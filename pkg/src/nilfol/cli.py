"""Command line interface: ``nilfol classify|newton|order|pullback|check``.

Every command prints one JSON document on stdout. Exit codes: 0 success,
1 parse error, 2 validation error, 3 internal inconsistency between the
classification criteria.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import sigma, takens
from .errors import NilfolError, NotClosedError, ShapeError, ValidationError
from .forms import PolyMap, invariance_defect, is_integrable, pullback, support_of_1form
from .newton import newton_of_1form, newton_of_polynomial, polyhedra_equal
from .offmesh import export_off
from .poly import DEFAULT_JET, VarContext
from .textio import (ParseError, SourceSpan, decode_input, dumps, load_json, model_from_dict,
                     order_value, parse_form_document, parse_polynomial, print_form,
                     print_polynomial, report_to_dict)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_INCONSISTENT = 0, 1, 2, 3


class InconsistentCriteria(Exception):
    def __init__(self, payload):
        super().__init__("classification criteria disagree")
        self.payload = payload


def _read_input(args) -> str:
    if args.input is not None and args.inline is not None:
        raise ValidationError("give either an input path or --inline, not both")
    if args.inline is not None:
        return args.inline
    if args.input is None:
        raise ValidationError("no input given (path, '-' for stdin, or --inline)")
    if args.input == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            data = Path(args.input).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc.strerror}",
                             SourceSpan(0, 0)) from None
    return decode_input(data)


def _is_model(text: str) -> bool:
    return text.lstrip().startswith("{")


def _load(args, text: str):
    """Return ``("model", model)`` or ``("form", form)``."""
    if _is_model(text):
        return "model", model_from_dict(load_json(text), args.signs)
    ctx = VarContext(args.vars) if args.vars else None
    return "form", parse_form_document(text, ctx)


def _model_only(args, text):
    kind, value = _load(args, text)
    if kind != "model":
        raise ValidationError("this command expects a model (JSON object)")
    return value


def _points(seq):
    return [list(p) for p in seq]


def _order_witness(m):
    bad = [[i, j] for (i, j) in sorted(m.g.support()) if 2 * i + m.s * j < m.s - 2]
    return {"low_order_terms": bad}


def _polyhedron_witness(report):
    extra = sorted(set(report.omega_vertices) - set(report.separatrix_vertices))
    missing = sorted(set(report.separatrix_vertices) - set(report.omega_vertices))
    return {"extra_vertices": _points(extra), "missing_vertices": _points(missing)}


# -- commands ---------------------------------------------------------------


def cmd_classify(args):
    m = _model_only(args, _read_input(args))
    if not isinstance(m, sigma.QuasiOrdinaryModel):
        raise ValidationError("classify needs a quasi-ordinary model (field 'P')")
    report = sigma.classify(m)
    data = report_to_dict(report)
    if not report.consistent:
        raise InconsistentCriteria({
            "error": "classification criteria disagree",
            "report": data,
            "order_witness": _order_witness(m),
            "polyhedron_witness": _polyhedron_witness(report),
        })
    return data


def cmd_newton(args):
    kind, value = _load(args, _read_input(args))
    out = {}
    if kind == "model":
        omega = sigma.build_omega(value)
        F = sigma.separatrix(value)
    else:
        omega = value
        F = None
        if args.separatrix is not None:
            F = parse_polynomial(args.separatrix, omega.context)
    if omega.degree != 1:
        raise ValidationError("the Newton polyhedron is defined for 1-forms")
    support = support_of_1form(omega)
    N = newton_of_1form(omega)
    out["vars"] = list(omega.context.names)
    out["support"] = support.as_lists()
    out["vertices"] = N.as_lists()
    if F is not None:
        NF = newton_of_polynomial(F)
        out["separatrix_vertices"] = NF.as_lists()
        out["newton_equal"] = polyhedra_equal(N, NF)
    if args.emit_off is not None:
        clip = args.clip
        if clip is None:
            clip = max((max(v) for v in N.vertices), default=0) + 1
        text = export_off(N, clip)
        Path(args.emit_off).write_text(text, encoding="utf-8", newline="\n")
        out["off"] = {"path": args.emit_off, "clip": clip}
    return out


def cmd_order(args):
    if args.s < 3:
        raise ValidationError(f"s must be >= 3, got {args.s}")
    g = parse_polynomial(args.g, sigma.G_CONTEXT)
    if g.constant_term:
        raise ValidationError("g must vanish at the origin (no constant term)")
    order = g.weighted_order((2, args.s))
    bound = args.s - 2
    return {"order": order_value(order), "threshold": bound, "satisfied": order >= bound}


def cmd_pullback(args):
    kind, value = _load(args, _read_input(args))
    if kind == "model":
        if not isinstance(value, sigma.QuasiOrdinaryModel):
            raise ValidationError("sections are defined for quasi-ordinary models")
        phi = sigma.transversal_section(value, args.section)
        eta = pullback(phi, sigma.build_omega(value))
        out = {"source": list(phi.source.names),
               "images": [print_polynomial(p) for p in phi.images],
               "form": print_form(eta),
               "support": support_of_1form(eta).as_lists()}
        if args.section is None or all(c == 1 for c in args.section):
            delta = sigma.delta_of_section(value)
            out["delta"] = print_polynomial(delta)
            out["matches_section_form"] = eta == sigma.section_form(value)
        return out
    if not args.source or not args.image:
        raise ValidationError("pulling back a form needs --source and one --image per variable")
    source = VarContext(args.source)
    images = tuple(parse_polynomial(t, source) for t in args.image)
    phi = PolyMap(source, value.context, images)
    eta = pullback(phi, value)
    out = {"source": list(source.names), "images": [print_polynomial(p) for p in images],
           "form": print_form(eta)}
    if eta.degree == 1:
        out["support"] = support_of_1form(eta).as_lists()
    return out


def _check_integrability(args, kind, value):
    omega = sigma.build_omega(value) if kind == "model" else value
    if omega.degree != 1:
        raise ValidationError("integrability is checked for 1-forms")
    out = {"kind": "integrability", "holds": is_integrable(omega)}
    if not out["holds"]:
        product = omega.wedge(omega.d())
        idx, c = next(iter(product.coeffs.items()))
        out["witness"] = {"basis": "^".join("d" + omega.context.names[i] for i in idx),
                          "coefficient": print_polynomial(c)}
    return out


def _check_invariance(args, kind, value):
    if kind == "model":
        omega = sigma.build_omega(value)
        F = sigma.cusp(value)
    else:
        omega = value
        F = None
    if args.F is not None:
        F = parse_polynomial(args.F, omega.context)
    if F is None:
        raise ValidationError("invariance of a form needs --F POLY")
    product, failures = invariance_defect(omega, F)
    out = {"kind": "invariance", "F": print_polynomial(F), "holds": not failures,
           "product": print_form(product)}
    if failures:
        idx, c, r = failures[0]
        out["witness"] = {"basis": "^".join("d" + omega.context.names[i] for i in idx),
                          "coefficient": print_polynomial(c), "remainder": print_polynomial(r)}
    return out


def _check_takens(args, kind, value):
    if kind == "model":
        raise ValidationError("the takens check expects a 1-form in (x1..xn, z)")
    out = {"kind": "takens"}
    try:
        result = takens.run_pipeline(value)
    except (ShapeError, NotClosedError) as exc:
        out["holds"] = False
        out["stage"] = "shape" if isinstance(exc, ShapeError) else "closedness"
        w = exc.witness
        witness = {"message": str(exc)}
        if isinstance(exc, ShapeError):
            witness.update({"variable": w[0], "coefficient": print_polynomial(w[1]),
                            "z_degree": w[2]})
        else:
            names = takens.x_context(value.context).names
            witness.update({"form": w[0], "basis": "^".join("d" + names[i] for i in w[1]),
                            "coefficient": print_polynomial(w[2])})
        out["witness"] = witness
        return out
    dec = result.decomposition
    out["holds"] = result.dependent
    out["loray"] = {"a": [print_polynomial(p) for p in result.loray.a],
                    "b": [print_polynomial(p) for p in result.loray.b],
                    "g": print_polynomial(result.loray.g)}
    out["w0"] = print_form(result.w0)
    out["w1"] = print_form(result.w1)
    out["f0"] = print_polynomial(dec.f0)
    out["f1"] = print_polynomial(dec.f1)
    out["mult0"] = {"f0": order_value(dec.f0.mult0()), "f1": order_value(dec.f1.mult0())}
    out["dependent"] = result.dependent
    if args.primitive is not None:
        xctx = takens.x_context(value.context)
        tctx = VarContext(("t",))
        f = parse_polynomial(args.primitive, xctx)
        h0 = parse_polynomial(args.h0 or "0", tctx)
        h1 = parse_polynomial(args.h1 or "0", tctx)
        ok = takens.verify_primitive(f, h0, h1, dec.f0, dec.f1, args.jet)
        out["primitive_verified"] = ok
        out["jet"] = args.jet
        out["holds"] = out["holds"] and ok
    return out


def _check_ord_identity(args, kind, value):
    if kind != "model" or not isinstance(value, sigma.QuasiOrdinaryModel):
        raise ValidationError("the ord-identity check needs a quasi-ordinary model")
    lhs, rhs = sigma.ord_identity(value)
    degenerate = value.g.is_zero()
    return {"kind": "ord-identity", "lhs": order_value(lhs), "rhs": order_value(rhs),
            "holds": degenerate or lhs == rhs, "degenerate": degenerate,
            "delta": print_polynomial(sigma.delta_of_section(value))}


CHECKS = {
    "integrability": _check_integrability,
    "invariance": _check_invariance,
    "takens": _check_takens,
    "ord-identity": _check_ord_identity,
}


def cmd_check(args):
    kind, value = _load(args, _read_input(args))
    return CHECKS[args.kind](args, kind, value)


# -- argument parsing -------------------------------------------------------


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _scalars(text):
    """Comma-separated rationals; one value keeps negative entries clear of option parsing."""
    from fractions import Fraction
    try:
        return [Fraction(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a list of rational numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--signs", choices=["invariant", "paper"], default=None,
                        help="sign convention for models: 'invariant' (s z df - 2 f dz) "
                             "or 'paper' (s z df + 2 f dz); default: the model's, "
                             "else invariant")
    common.add_argument("--jet", type=_positive, default=DEFAULT_JET, help="jet degree bound")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    def with_input(p):
        p.add_argument("input", nargs="?", help="input file, or '-' for stdin")
        p.add_argument("--inline", help="inline model JSON or form text")
        p.add_argument("--vars", nargs="+", help="variables when the form has no 'vars:' header")

    parser = argparse.ArgumentParser(prog="nilfol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a quasi-ordinary model")
    with_input(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("newton", parents=[common], help="Newton polyhedron of a form or model")
    with_input(p)
    p.add_argument("--separatrix", help="polynomial to compare polyhedra with")
    p.add_argument("--emit-off", metavar="PATH", help="write the clipped polyhedron as OFF")
    p.add_argument("--clip", type=_positive, help="clip cube size for OFF export")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("order", parents=[common], help="weighted order of g")
    p.add_argument("--g", required=True, help="g as a polynomial in t, z")
    p.add_argument("--s", required=True, type=int)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("pullback", parents=[common], help="pull back a form along a map")
    with_input(p)
    p.add_argument("--source", nargs="+", help="source variables of the map")
    p.add_argument("--image", action="append", help="image of one target variable (repeat)")
    p.add_argument("--section", type=_scalars, metavar="C1,...,CN",
                   help="scalars of the section (u,v) -> (c1 u, ..., cn u, v); "
                        "write --section=-1,2 when the first is negative")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("check", parents=[common], help="run one structural check")
    p.add_argument("kind", choices=sorted(CHECKS))
    with_input(p)
    p.add_argument("--F", help="hypersurface polynomial for the invariance check")
    p.add_argument("--primitive", help="f(x) for verifying f_i = h_i(f)")
    p.add_argument("--h0", help="h0(t)")
    p.add_argument("--h1", help="h1(t)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        data = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistentCriteria as exc:
        print(dumps(exc.payload, args.pretty))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except NilfolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(dumps(data, args.pretty))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
