"""Command line front end.

    gentlecones algebra validate --algebra kron2.json
    gentlecones word check --algebra kron2.json --band "d ~c ~a b" --scalar -1
    gentlecones complex show --algebra kron2.json --word "band: d ~c ~a b @ 2"
    gentlecones hom list --algebra kron2.json --source ... --target ...
    gentlecones cone compute --algebra kron2.json --source ... --target ...
    gentlecones cone verify --algebra kron2.json --source ... --target ... --jobs 4
    gentlecones diagram emit --algebra kron2.json --word ... --tikz out.tex

Exit status: 0 on success, 1 on a domain error (bad algebra, bad word, failed
verification), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .algebra import AlgebraError, algebra_from_dict
from .complexes import build_complex, emit_complex, emit_unfolded
from .cones import CaseNotApplicable, compute_cone
from .morphisms import enumerate_morphisms
from .oracle import verify_cone
from .scalars import FieldCtx, IrrationalRoot, OrderMismatch, parse_scalar, required_order
from .walks import WordError, parse_word, parse_word_spec

KINDS = ("graph", "quasi", "single", "double")
DOMAIN_ERRORS = (AlgebraError, WordError, CaseNotApplicable, IrrationalRoot, OrderMismatch,
                 ValueError, KeyError, OSError)


class UsageError(Exception):
    pass


def _read_algebra_dict(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _algebra(args):
    return algebra_from_dict(_read_algebra_dict(args.algebra))


def _out(args, text: str | None = None, data=None):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _word(A, spec: str, what: str):
    try:
        return parse_word_spec(spec, A)
    except WordError as e:
        raise WordError(f"{what}: {e}") from e


def _base_field(source, target, mode: str):
    order = required_order([w.scalar for w in (source, target) if w.is_band])
    return (FieldCtx.default_prime(order) if mode == "Fp" else FieldCtx.cyclotomic(order)).field


def _morphisms(args):
    A = _algebra(args)
    source = _word(A, args.source, "--source")
    target = _word(A, args.target, "--target")
    kinds = KINDS if args.kind == "auto" else (args.kind,)
    F = _base_field(source, target, args.field)
    found = enumerate_morphisms(source, target, F, kinds)
    if args.index is not None:
        if not 0 <= args.index < len(found):
            raise UsageError(f"--index {args.index} out of range (found {len(found)} morphisms)")
        found = [(args.index, found[args.index])]
    else:
        found = list(enumerate(found))
    return A, source, target, F, found


# ---------------------------------------------------------------- commands


def cmd_algebra_validate(args) -> int:
    data = _read_algebra_dict(args.algebra)
    vertices = [str(v) for v in data.get("vertices", [])]
    arrows = data.get("arrows", [])
    try:
        A = algebra_from_dict(data)
    except AlgebraError as e:
        found = e.violations or []
        _out(args, "\n".join(f"invalid: {v.kind}: {v.message}" for v in found) or f"invalid: {e}",
             {"valid": False, "violations": [v.to_dict() for v in found]})
        return 1
    _out(args, f"valid: {len(vertices)} vertices, {len(arrows)} arrows, {len(A.relations)} relations",
         {"valid": True, "vertices": len(vertices), "arrows": len(arrows), "relations": len(A.relations)})
    return 0


def cmd_word_check(args) -> int:
    A = _algebra(args)
    given = [x is not None for x in (args.string, args.band, args.word)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --string, --band, --word")
    if args.word is not None:
        w = _word(A, args.word, "--word")
    elif args.band is not None:
        w = parse_word(args.band, A, band=True, scalar=parse_scalar(args.scalar), degree_anchor=args.deg)
    elif not args.string.strip() and args.vertex is None:
        _out(args, "valid: trivial string", {"valid": True, "kind": "string", "length": 0})
        return 0
    else:
        w = parse_word(args.string, A, band=False, degree_anchor=args.deg, vertex=args.vertex)
    kind = "band" if w.is_band else "string"
    label = "trivial string" if not w.is_band and not len(w) else kind
    info = {"valid": True, "kind": kind, "length": len(w), "spec": w.spec(),
            "degrees": w.degree_profile()}
    _out(args, f"valid: {label} of length {len(w)}: {w.spec()}", info)
    return 0


def cmd_complex_show(args) -> int:
    A = _algebra(args)
    w = _word(A, args.word, "--word")
    order = required_order([w.scalar] if w.is_band else [])
    ctx = FieldCtx.default_prime(order) if args.field == "Fp" else FieldCtx.cyclotomic(order)
    C = build_complex(w, ctx.field)
    _out(args, emit_complex(C), C.to_json())
    return 0


def cmd_hom_list(args) -> int:
    _, _, _, _, found = _morphisms(args)
    rows = [dict(r.descriptor.to_json(), index=i) for i, r in found]
    text = "\n".join(f"[{i}] {r.descriptor.kind}: {json.dumps(r.descriptor.to_json(), sort_keys=True)}"
                     for i, r in found) or "no morphisms"
    _out(args, text, rows)
    return 0


def cmd_cone_compute(args) -> int:
    _, S, T, F, found = _morphisms(args)
    rows, lines = [], []
    for i, r in found:
        D = compute_cone(r.descriptor, F)
        rows.append({"index": i, "kind": r.descriptor.kind, "provenance": D.provenance,
                     "oracle_only": D.oracle_only, "summands": D.to_json()})
        lines.append(f"[{i}] {r.descriptor.kind} ({D.provenance}): {D.display(S, T)}")
    _out(args, "\n".join(lines) or "no morphisms", rows)
    return 0


def _verify_one(job):
    data, source, target, kind, index, mode, trials, seed = job
    A = algebra_from_dict(data)
    S, T = parse_word_spec(source, A), parse_word_spec(target, A)
    F = _base_field(S, T, mode)
    r = enumerate_morphisms(S, T, F, KINDS if kind == "auto" else (kind,))[index]
    D = compute_cone(r.descriptor, F)
    ctx = D.field_context(S, T, mode="prime" if mode == "Fp" else "cyclotomic")
    rep = verify_cone(r.descriptor, D, ctx, trials, seed)
    return {"index": index, "kind": r.descriptor.kind, "cone": D.display(S, T), **rep.to_json()}


def cmd_cone_verify(args) -> int:
    _, _, _, _, found = _morphisms(args)
    data = _read_algebra_dict(args.algebra)
    jobs = [(data, args.source, args.target, args.kind, i, args.field, args.trials, args.seed)
            for i, _ in found]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_verify_one, jobs))
    else:
        rows = [_verify_one(j) for j in jobs]
    lines = [f"[{r['index']}] {r['kind']}: {r['cone']}  iso: {str(r['iso']).lower()}"
             f"  (graded dims match: {str(r['graded_dims_match']).lower()}, trials {r['trials_used']},"
             f" {r['field']})" for r in rows]
    _out(args, "\n".join(lines) or "no morphisms", rows)
    return 0 if all(r["iso"] for r in rows) else 1


def cmd_diagram_emit(args) -> int:
    A = _algebra(args)
    w = _word(A, args.word, "--word")
    if args.tikz:
        with open(args.tikz, "w") as fh:
            fh.write(emit_unfolded(w, tikz=True) + "\n")
        _out(args, f"wrote {args.tikz}", {"tikz": args.tikz})
    else:
        text = emit_unfolded(w)
        _out(args, text, {"diagram": text})
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gentlecones", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="group", required=True)

    def common(p, field=True):
        p.add_argument("--algebra", required=True, help="algebra JSON file")
        p.add_argument("--json", action="store_true", help="machine readable output")
        if field:
            p.add_argument("--field", choices=("cyclo", "Fp"), default="Fp")

    def pair(p):
        common(p)
        p.add_argument("--source", required=True, help="word spec of the source complex")
        p.add_argument("--target", required=True, help="word spec of the target complex")
        p.add_argument("--kind", choices=KINDS + ("auto",), default="auto")
        p.add_argument("--index", type=int, default=None, help="only the morphism with this index")

    g = sub.add_parser("algebra").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("validate")
    common(p, field=False)
    p.set_defaults(func=cmd_algebra_validate)

    g = sub.add_parser("word").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("check")
    common(p, field=False)
    p.add_argument("--string")
    p.add_argument("--band")
    p.add_argument("--word", help="full word spec, e.g. 'band: d ~c ~a b @ -1 ; deg=1'")
    p.add_argument("--scalar", default="1")
    p.add_argument("--deg", type=int, default=0)
    p.add_argument("--vertex", default=None, help="vertex of a trivial string")
    p.set_defaults(func=cmd_word_check)

    g = sub.add_parser("complex").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("show")
    common(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_complex_show)

    g = sub.add_parser("hom").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("list")
    pair(p)
    p.set_defaults(func=cmd_hom_list)

    g = sub.add_parser("cone").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("compute")
    pair(p)
    p.set_defaults(func=cmd_cone_compute)
    p = g.add_parser("verify")
    pair(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_cone_verify)

    g = sub.add_parser("diagram").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("emit")
    common(p, field=False)
    p.add_argument("--word", required=True)
    p.add_argument("--tikz", default=None, help="write TikZ to this file")
    p.set_defaults(func=cmd_diagram_emit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as e:
        where = f" (letter {e.index})" if getattr(e, "index", None) is not None else ""
        print(f"error: {type(e).__name__}{where}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
