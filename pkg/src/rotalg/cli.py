"""Command line interface: ``rotalg check|rotate|skeleton|verify|harness|render``.

Exit codes: 0 when everything checked passes, 1 when a verification fails,
2 when the input cannot be read or is not the right kind of algebra.
"""

import argparse
import json
import logging
import sys
from collections import OrderedDict

import numpy as np

from . import __version__
from .document import algebra_to_document, emit_document, fixture_names, load
from .enumeration import DEFAULT_MAX_NODES, DEFAULT_MAX_OPERATOR_SIZE, env_cap
from .errors import (
    AlgebraError,
    ClosureFailure,
    InconsistentDerivation,
    PreconditionViolated,
)
from .harness import THEOREMS, parse_theorems, run_harness
from .modal import (
    DERIVED,
    GAO,
    NMAO_MINUS,
    NMAO_PLUS,
    SIDE_CONDITIONS,
    Axiom,
    check_positivity_closure,
)
from .morphisms import verify_isomorphism
from .residuated import (
    FACTOR_ORACLE_CAP,
    _nm_minus_failures,
    check_mtl,
    check_nm_law_report,
    is_directly_indecomposable,
    negation_fixpoints,
    product_factorization,
)
from .rotation import MODES, eta, gamma, lift_modal, lower_modal, rotate, skeleton

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
ENV_MAX_NODES = "ROTALG_MAX_NODES"
ENV_MAX_OPERATOR_SIZE = "ROTALG_MAX_OPERATOR_SIZE"


class _InputError(Exception):
    pass


def _load(source):
    try:
        return load(source)
    except FileNotFoundError as exc:
        raise _InputError(str(exc)) from None
    except (AlgebraError, ValueError) as exc:
        raise _InputError(f"{source}: {exc}") from None


def _emit(doc, out):
    text = emit_document(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ check


def compliance_report(A, m=None):
    """Everything ``check`` reports, as a plain ordered dict."""
    cls = A.classification
    rep = OrderedDict()
    rep["name"] = A.name
    rep["elements"] = A.n
    rep["classification"] = cls.kind
    rep["classes"] = cls.names()
    axioms = OrderedDict()
    axioms.update(check_mtl(A).as_dict())
    if cls.mtl:
        axioms["Idem"] = _flag(A, cls.godel, np.diag(A.star) != np.arange(A.n))
        axioms.update(check_nm_law_report(A).as_dict())
        bad = _nm_minus_failures(A)
        axioms["NM- identity"] = _flag(A, not bad.any(), bad)
        if A.fixpoint is not None:
            axioms["not f = f"] = {"pass": cls.nm_plus}
    rep["algebra"] = axioms
    fix = negation_fixpoints(A)
    rep["negation fixpoints"] = [A.labels[i] for i in fix]
    if cls.mtl:
        di = is_directly_indecomposable(A)
        ev = OrderedDict((k, v) for k, v in di.evidence.items())
        rep["directly indecomposable"] = OrderedDict(value=bool(di), method=di.method,
                                                     evidence=ev)
    if m is not None:
        modal = OrderedDict()
        if cls.godel:
            groups = [("GAO", GAO), ("derived", DERIVED), ("side conditions", SIDE_CONDITIONS)]
        elif cls.nm_plus:
            groups = [("NMAO+", NMAO_PLUS)]
        elif cls.nm_minus:
            groups = [("NMAO-", NMAO_MINUS)]
        elif cls.nm:
            groups = [("NM operators", tuple(a for a in NMAO_MINUS if a is not Axiom.F))]
        else:
            groups = []
        for gname, axs in groups:
            modal[gname] = m.check(axs).as_dict()
        if cls.nm:
            modal["positivity closure"] = check_positivity_closure(A, m).as_dict()
        rep["modal"] = modal
    rep["ok"] = _report_ok(rep)
    return rep


def _flag(A, ok, bad):
    if ok:
        return {"pass": True}
    hits = np.flatnonzero(bad)
    return {"pass": False, "witness": [A.labels[int(hits[0])]] if len(hits) else []}


def _report_ok(rep):
    if "MTL" not in rep["classes"]:
        return False
    modal = rep.get("modal")
    if modal:
        for gname in ("GAO", "NMAO+", "NMAO-"):
            if gname in modal and not all(e["pass"] for e in modal[gname].values()):
                return False
    return True


def _format_report(rep):
    lines = [f"{rep['name'] or 'algebra'}: {rep['elements']} elements, "
             f"classified as {rep['classification']} ({', '.join(rep['classes']) or 'none'})"]
    lines.append("  algebra axioms:")
    for name, e in rep["algebra"].items():
        lines.append(f"    {_entry(name, e)}")
    if rep["negation fixpoints"]:
        lines.append(f"  negation fixpoints: {', '.join(rep['negation fixpoints'])}")
    if "directly indecomposable" in rep:
        di = rep["directly indecomposable"]
        lines.append(f"  directly indecomposable: {'yes' if di['value'] else 'no'} "
                     f"({di['method']})")
    for gname, group in rep.get("modal", {}).items():
        lines.append(f"  {gname}:")
        for name, e in group.items():
            lines.append(f"    {_entry(name, e)}")
    lines.append(f"  verdict: {'pass' if rep['ok'] else 'FAIL'}")
    return "\n".join(lines)


def _entry(name, e):
    if e["pass"]:
        return f"({name}) pass"
    w = e.get("witness")
    return f"({name}) FAIL" + (f" at {', '.join(map(str, w))}" if w else "")


def cmd_check(args):
    A, m, _ = _load(args.file)
    rep = compliance_report(A, m)
    if args.json:
        sys.stdout.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    else:
        print(_format_report(rep))
    return EXIT_OK if rep["ok"] else EXIT_FAIL


# ----------------------------------------------------------- constructions


def _rotated_document(R, lifted=None):
    pairs = OrderedDict((R.algebra.labels[i], [R.base.labels[p], R.base.labels[q]])
                        for i, (p, q) in enumerate(R.carrier))
    meta = OrderedDict(name=R.algebra.name, note=f"{R.mode} rotation of {R.base.name or 'input'}",
                       pairs=pairs)
    return algebra_to_document(R.algebra, lifted, meta)


def cmd_rotate(args):
    A, m, _ = _load(args.file)
    if not A.classification.godel:
        raise _InputError(f"rotate needs a Goedel algebra, got {A.classification.kind}")
    R = rotate(A, args.mode)
    lifted = None
    if args.lift:
        if m is None:
            raise _InputError("--lift needs box and diamond tables in the input")
        lifted = lift_modal(R, m)
    _emit(_rotated_document(R, lifted), args.output)
    return EXIT_OK


def cmd_skeleton(args):
    B, m, _ = _load(args.file)
    if not B.classification.nm:
        raise _InputError(f"skeleton needs an NM algebra, got {B.classification.kind}")
    S = skeleton(B)
    low = None
    if args.lower:
        if m is None:
            raise _InputError("--lower needs box and diamond tables in the input")
        low = lower_modal(B, m, S, strict=not args.lenient)
    meta = OrderedDict(name=S.algebra.name, note=f"skeleton of {B.name or 'input'}")
    _emit(algebra_to_document(S.algebra, low, meta), args.output)
    return EXIT_OK


# ------------------------------------------------------------------ verify


def _verify_godel(A, m, modes, lines):
    ok = True
    di = is_directly_indecomposable(A)
    if not di:
        raise _InputError("iso-godel needs a directly indecomposable Goedel algebra")
    for mode in modes:
        R = rotate(A, mode)
        S = skeleton(R.algebra)
        try:
            h = gamma(A, R, m, S)
        except PreconditionViolated as exc:
            lines.append(f"gamma {mode}: skipped, modal pair misses {exc.condition}")
            continue
        rep = verify_isomorphism(h)
        ok &= rep.passed
        lines.append(f"gamma {mode}: {'pass' if rep.passed else 'FAIL'}")
        lines.extend(f"  {ln}" for ln in rep.lines() if "FAIL" in ln)
    return ok


def _verify_nm(B, m, lenient, lines):
    if not is_directly_indecomposable(B):
        raise _InputError("iso-nm needs a directly indecomposable NM algebra")
    fix = negation_fixpoints(B)
    if fix and B.fixpoint is None:
        B = B.with_fixpoint(fix[0])
        if m is not None:
            m = type(m)(B, m.box, m.diamond)
    mode = "plus" if fix else "minus"
    S = skeleton(B)
    R = rotate(S.algebra, mode)
    h = eta(B, S, R, m, strict=not lenient)
    rep = verify_isomorphism(h)
    lines.append(f"eta ({mode}): {'pass' if rep.passed else 'FAIL'}")
    lines.extend(f"  {ln}" for ln in rep.lines() if "FAIL" in ln)
    return rep.passed


def _verify_di(A, lines):
    di = bool(is_directly_indecomposable(A, oracle_cap=0))
    ok = True
    lines.append(f"base: d.i.={di}")
    for mode in MODES:
        X = rotate(A, mode).algebra
        dx = bool(is_directly_indecomposable(X, oracle_cap=0))
        ok &= dx == di
        lines.append(f"NM{'+' if mode == 'plus' else '-'}: d.i.={dx} {'agrees' if dx == di else 'DISAGREES'}")
        if X.n <= FACTOR_ORACLE_CAP:
            oracle = X.n > 1 and product_factorization(X) is None
            ok &= oracle == dx
            lines.append(f"  factorization oracle: d.i.={oracle}")
    if A.n <= FACTOR_ORACLE_CAP:
        oracle = A.n > 1 and product_factorization(A) is None
        ok &= oracle == di
        lines.append(f"base factorization oracle: d.i.={oracle}")
    return ok


def cmd_verify(args):
    A, m, _ = _load(args.file)
    lines = []
    cls = A.classification
    if args.theorem == "iso-godel":
        if not cls.godel:
            raise _InputError(f"iso-godel needs a Goedel algebra, got {cls.kind}")
        modes = MODES if args.mode == "both" else (args.mode,)
        ok = _verify_godel(A, m, modes, lines)
    elif args.theorem == "iso-nm":
        if not cls.nm:
            raise _InputError(f"iso-nm needs an NM algebra, got {cls.kind}")
        ok = _verify_nm(A, m, args.lenient, lines)
    else:
        if not cls.godel:
            raise _InputError(f"di-transfer needs a Goedel algebra, got {cls.kind}")
        ok = _verify_di(A, lines)
    lines.append(f"verdict: {'pass' if ok else 'FAIL'}")
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------- harness


def cmd_harness(args):
    try:
        theorems = parse_theorems(args.theorems)
    except ValueError as exc:
        raise _InputError(str(exc)) from None
    constraints = None
    if args.constraints:
        try:
            constraints = [Axiom.parse(c) for c in args.constraints.split(",") if c.strip()]
        except ValueError as exc:
            raise _InputError(str(exc)) from None
    report = run_harness(
        max_forest_nodes=args.max_nodes, theorems=theorems, constraints=constraints,
        quotient=args.quotient_automorphisms, jobs=args.jobs,
        max_operator_size=args.max_operator_size, trees_only=args.trees_only,
        strict_p=args.strict_p,
    )
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json(timing=args.timing))
    if args.json:
        sys.stdout.write(report.to_json(timing=args.timing))
    else:
        print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


# ------------------------------------------------------------------ render


def _dot_id(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(A, m=None):
    """Graph description: solid cover edges, dashed labeled operator edges."""
    nm = A.classification.nm and not A.classification.godel
    names = ("⊟", "⟐") if nm else ("□", "◇")
    out = [f"digraph {_dot_id(A.name or 'algebra')} {{", "  rankdir=BT;",
           "  node [shape=circle, width=0.3, fontsize=11];"]
    for i, lab in enumerate(A.labels):
        out.append(f"  n{i} [label={_dot_id(lab)}];")
    for i, j in sorted(A.lattice.covers):
        out.append(f"  n{i} -> n{j} [style=solid, arrowhead=none];")
    if m is not None:
        for name, table in zip(names, (m.box, m.diamond)):
            for i, v in enumerate(table):
                out.append(f"  n{i} -> n{v} [style=dashed, label={_dot_id(name)}, "
                           f"constraint=false];")
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_render(args):
    A, m, _ = _load(args.file)
    text = render_dot(A, None if args.no_modal else m)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -------------------------------------------------------------------- main


def build_parser():
    p = argparse.ArgumentParser(
        prog="rotalg",
        description="Finite Goedel and nilpotent minimum algebras with modal operators.",
        epilog=f"Shipped fixtures: {', '.join(fixture_names())}.  Environment: "
               f"{ENV_MAX_NODES}, {ENV_MAX_OPERATOR_SIZE} set the harness caps.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="classify and report axiom compliance")
    c.add_argument("file", help="document path, fixture name, or - for stdin")
    c.add_argument("--json", action="store_true", help="machine-readable report")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("rotate", help="emit NM+(A) or NM-(A)")
    c.add_argument("file")
    c.add_argument("--mode", choices=MODES, required=True)
    c.add_argument("--lift", action="store_true", help="lift the box/diamond tables")
    c.add_argument("-o", "--output", help="write the document here instead of stdout")
    c.set_defaults(func=cmd_rotate)

    c = sub.add_parser("skeleton", help="emit the Goedel skeleton of an NM algebra")
    c.add_argument("file")
    c.add_argument("--lower", action="store_true", help="lower the operator tables")
    c.add_argument("--lenient", action="store_true",
                   help="lower even if the NMAO axioms fail (the result is still checked)")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_skeleton)

    c = sub.add_parser("verify", help="verify gamma / eta / d.i. transfer on one instance")
    c.add_argument("file")
    c.add_argument("--theorem", choices=("iso-godel", "iso-nm", "di-transfer"), required=True)
    c.add_argument("--mode", choices=MODES + ("both",), default="both",
                   help="rotation(s) used by iso-godel")
    c.add_argument("--lenient", action="store_true",
                   help="iso-nm: do not require the NMAO axioms of the attached operators")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("harness", help="exhaustive theorem sweep over generated algebras")
    c.add_argument("--max-nodes", type=int,
                   default=env_cap(ENV_MAX_NODES, DEFAULT_MAX_NODES),
                   help=f"largest forest (default {DEFAULT_MAX_NODES}, or ${ENV_MAX_NODES})")
    c.add_argument("--theorems", default="all",
                   help=f"comma-separated subset of {', '.join(THEOREMS)} or 'all'")
    c.add_argument("--quotient-automorphisms", action="store_true",
                   help="check one modal pair per automorphism orbit")
    c.add_argument("--constraints", help="comma-separated axioms for operator enumeration")
    c.add_argument("--max-operator-size", type=int,
                   default=env_cap(ENV_MAX_OPERATOR_SIZE, DEFAULT_MAX_OPERATOR_SIZE),
                   help="skip modal sweeps on larger algebras")
    c.add_argument("--trees-only", action="store_true", help="only single-rooted forests")
    c.add_argument("--strict-p", action="store_true",
                   help="count (P) failures on NM- lifts as failures")
    c.add_argument("--jobs", type=int, default=1, help="worker processes")
    c.add_argument("--report", help="write the JSON report to this file")
    c.add_argument("--json", action="store_true", help="print the JSON report")
    c.add_argument("--timing", action="store_true", help="include wall time in JSON")
    c.set_defaults(func=cmd_harness)

    c = sub.add_parser("render", help="emit a dot graph description")
    c.add_argument("file")
    c.add_argument("--format", choices=("dot",), default="dot")
    c.add_argument("--no-modal", action="store_true", help="omit operator edges")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_render)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionViolated, ClosureFailure, InconsistentDerivation) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
