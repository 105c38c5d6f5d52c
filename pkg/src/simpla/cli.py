"""Command-line front end.

Exit codes: 0 success or true, 1 false or a negative result, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from contextlib import redirect_stdout
from typing import Optional, Sequence

from .bisim import distinguishing_sentence, greatest_bisim
from .correspondence import isomorphic, lem, sc
from .generators import GenParams, random_local_epistemic_model
from .intensional import (GroupFormula, check_pos_introspection, eval_k_phi_direct, expand_k_phi,
                          search_neg_introspection_counterexample)
from .models import (KripkeModel, ModelError, ModelFormatError, NotLocalEpistemic,
                     SimplicialModel, check_local_epistemic, model_to_json, properize, read_model,
                     validate)
from .normalform import anf, is_anf, nf_step, simplify
from .semantics import InadmissibleAssignment, UnmappedFreeVariable, holds, valid_on_model
from .syntax import FormulaSyntaxError, InadmissibleSubstitution, parse, random_formula, to_text
from .validity import SCHEMAS, Sat, schema, sat_bounded, soundness_suite

SYNOPSIS = """\
formula grammar (binary operators need parentheses):
  f ::= top | bot | PRED(VAR) | ~f | (f & f) | (f | f) | (f -> f)
      | [VAR:=AGENT] f | <VAR:=AGENT> f | K{VAR ...} f | Khat{VAR ...} f
model files (JSON):
  {"kind":"simplicial","agents":[...],"vertices":[{"id":"v1","color":"a"},...],
   "facets":[["v1","v2"],...],"labeling":{"p":["v1"]}}
  {"kind":"kripke","agents":[...],"worlds":[{"id":"w1","domain":["a"],"interp":{"p":["a"]}},...],
   "relations":{"a":[["w1","w1"],...]}}
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{SYNOPSIS}")
        raise SystemExit(2)


def load_model(path):
    """Read and validate a model file; the kind comes from its ``kind`` field."""
    return read_model(path)


def _default_seed() -> int:
    raw = os.environ.get("SIMPLA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SIMPLA_SEED must be an integer, got {raw!r}") from None


def _formula_text(args, attr="formula") -> str:
    text = getattr(args, attr, None)
    path = getattr(args, f"{attr}_file", None)
    if text is not None and path is not None:
        raise UsageError(f"give either --{attr} or --{attr}-file, not both")
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read().strip()
    if text is None:
        raise UsageError(f"--{attr.replace('_', '-')} is required")
    return text


def _formula(args, model=None, attr="formula"):
    agents = model.agents if model is not None else None
    return parse(_formula_text(args, attr), agents)


def _assignment(raw: Optional[str]) -> dict:
    sigma = {}
    if not raw:
        return sigma
    for item in raw.split(","):
        if "=" not in item:
            raise UsageError(f"bad --assign item {item!r}; expected var=agent")
        v, a = (s.strip() for s in item.split("=", 1))
        sigma[v] = a
    return sigma


def _point(model, p: str) -> str:
    if p not in model.points:
        raise UsageError(f"{p!r} is not a point of the model; points: {', '.join(model.points)}")
    return p


def _emit(args, text: str, payload=None):
    if args.json and payload is not None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- commands -------------------------------------------------------------


def cmd_check(args) -> int:
    model = load_model(args.model)
    f = _formula(args, model)
    sigma = _assignment(args.assign)
    if args.point is None:
        if f.fv:
            raise UsageError("checking a whole model needs a sentence; give --point for open formulas")
        ok, bad = valid_on_model(model, f)
        _emit(args, "true" if ok else f"false\ncounterexample {bad}", {"valid": ok, "counterexample": bad})
        return 0 if ok else 1
    point = _point(model, args.point)
    ok = holds(model, point, f, sigma)
    _emit(args, "true" if ok else "false", {"result": ok})
    return 0 if ok else 1


def cmd_convert(args) -> int:
    model = load_model(args.model)
    if args.to == "kripke":
        out = lem(model) if isinstance(model, SimplicialModel) else model
    else:
        out = sc(model) if isinstance(model, KripkeModel) else model
    print(json.dumps(model_to_json(out), indent=2))
    return 0


def cmd_properize(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, KripkeModel):
        raise UsageError("properize expects a kripke model")
    out, cells = properize(model)
    doc = model_to_json(out)
    if args.json:
        doc = {"model": doc, "quotient": cells}
    print(json.dumps(doc, indent=2))
    return 0


def cmd_iso(args) -> int:
    a, b = load_model(args.left), load_model(args.right)
    if a.kind != b.kind:
        raise UsageError(f"cannot compare a {a.kind} model with a {b.kind} model")
    w = isomorphic(a, b)
    if w is None:
        _emit(args, "none", {"isomorphic": False})
        return 1
    _emit(args, str(w), {"isomorphic": True, "mapping": w.mapping})
    return 0


def _two_points(args):
    a, b = load_model(args.left), load_model(args.right)
    if a.kind != b.kind:
        raise UsageError(f"cannot relate a {a.kind} model with a {b.kind} model")
    return a, _point(a, args.p), b, _point(b, args.q)


def cmd_bisim(args) -> int:
    a, p, b, q = _two_points(args)
    ok = (p, q) in greatest_bisim(a, b)
    _emit(args, "true" if ok else "false", {"bisimilar": ok})
    return 0 if ok else 1


def cmd_distinguish(args) -> int:
    a, p, b, q = _two_points(args)
    f = distinguishing_sentence(a, p, b, q)
    if f is None:
        _emit(args, "none", {"formula": None})
        return 1
    _emit(args, to_text(f), {"formula": to_text(f)})
    return 0


def cmd_nf(args) -> int:
    f = _formula(args)
    if args.step:
        x, _, a = args.step.partition("=")
        if not a:
            raise UsageError("--step expects var=agent")
        out = nf_step(f, x, a)
    else:
        if f.fv:
            raise UsageError("the normal form is defined for sentences; use --step for open formulas")
        out = anf(f)
    if args.simplify:
        out = simplify(out)
    _emit(args, to_text(out), {"formula": to_text(out), "anf": is_anf(out)})
    return 0


def cmd_kphi(args) -> int:
    model = load_model(args.model)
    phi = GroupFormula(parse(args.phi, model.agents), args.var)
    alpha = _formula(args, model)
    if args.expand:
        print(to_text(expand_k_phi(phi, alpha, model.agents)))
        return 0
    if args.point is None:
        raise UsageError("--point is required unless --expand is given")
    ok = eval_k_phi_direct(phi, alpha, model, _point(model, args.point))
    _emit(args, "true" if ok else "false", {"result": ok})
    return 0 if ok else 1


def cmd_introspect(args) -> int:
    phi = GroupFormula(parse(args.phi), args.var)
    gp = GenParams(seed=args.seed)
    models = [random_local_epistemic_model(gp.with_seed(args.seed * 1000 + k)) for k in range(args.trials)]
    alphas = [random_formula(gp.agent_names, gp.pred_names, 2, args.seed * 1000 + k) for k in range(5)]
    rep = check_pos_introspection(phi, alphas, models)
    print(f"positive: {rep}")
    w = search_neg_introspection_counterexample(phi, args.max_facets)
    if w is None:
        print(f"negative: no counterexample with at most {args.max_facets} facets")
    else:
        print(f"negative: counterexample at {w.point}, alpha = {to_text(w.alpha)}")
        print(json.dumps(model_to_json(w.model), indent=2))
    return 0 if rep.ok else 1


def cmd_axioms(args) -> int:
    names = args.schemas or [s.name for s in SCHEMAS if s.group != "mutant" or args.mutants]
    schemas = [schema(n) for n in names]
    gp = GenParams(agents=args.agents, seed=args.seed)
    rep = soundness_suite(schemas, args.trials, gp, n_models=args.models)
    print(rep.to_text())
    if args.dump:
        for stem in rep.dump(args.dump):
            print(f"counterexample written to {stem}.json / {stem}.txt", file=sys.stderr)
    bad = [r for r, s in zip(rep.rows, schemas) if r.failures and s.group != "mutant"]
    return 1 if bad else 0


def cmd_sat(args) -> int:
    f = _formula(args)
    res = sat_bounded(f, args.max_facets)
    if isinstance(res, Sat):
        _emit(args, f"sat at {res.point}\n{json.dumps(model_to_json(res.model), indent=2)}",
              {"sat": True, "point": res.point, "model": model_to_json(res.model)})
        return 0
    _emit(args, f"unsat up to {res.bound} facets", {"sat": False, "bound": res.bound})
    return 1


def cmd_validate(args) -> int:
    model = read_model(args.model, check=False)
    errors = validate(model)
    for e in errors:
        print(f"error: {e}")
    if errors:
        return 1
    print(f"ok: {model.kind} model with {len(model.points)} points")
    if isinstance(model, KripkeModel):
        report = check_local_epistemic(model)
        print(report)
        if args.json:
            print(json.dumps({k: {"ok": v.ok, "witness": v.witness} for k, v in report.items()},
                             indent=2, default=str))
    return 0


# -- wiring ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="simpla", description="Epistemic logic on impure simplicial complexes.",
                 epilog=SYNOPSIS, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formula=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if formula:
            p.add_argument("--formula")
            p.add_argument("--formula-file")

    p = sub.add_parser("check", help="evaluate a formula at a point (or on every point)")
    p.add_argument("model")
    p.add_argument("--point")
    p.add_argument("--assign", help="x=a,y=b for the free variables")
    common(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("convert", help="translate between simplicial and kripke models")
    p.add_argument("model")
    p.add_argument("--to", choices=("kripke", "simplicial"), required=True)
    common(p, formula=False)
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("properize", help="quotient a local epistemic model by its cells")
    p.add_argument("model")
    common(p, formula=False)
    p.set_defaults(run=cmd_properize)

    p = sub.add_parser("iso", help="decide isomorphism of two models")
    p.add_argument("left")
    p.add_argument("right")
    common(p, formula=False)
    p.set_defaults(run=cmd_iso)

    for name, fn in (("bisim", cmd_bisim), ("distinguish", cmd_distinguish)):
        p = sub.add_parser(name, help="bisimilarity of two points" if name == "bisim"
                           else "a sentence true at the first point and false at the second")
        p.add_argument("left")
        p.add_argument("p")
        p.add_argument("right")
        p.add_argument("q")
        common(p, formula=False)
        p.set_defaults(run=fn)

    p = sub.add_parser("nf", help="assignment normal form of a sentence")
    p.add_argument("--step", help="apply a single x=a translation instead")
    p.add_argument("--simplify", action="store_true", help="fold top/bot constants")
    common(p)
    p.set_defaults(run=cmd_nf)

    p = sub.add_parser("kphi", help="knowledge of the group defined by a formula")
    p.add_argument("model")
    p.add_argument("--phi", required=True)
    p.add_argument("--var", default="x")
    p.add_argument("--point")
    p.add_argument("--expand", action="store_true", help="print the expansion instead")
    common(p)
    p.set_defaults(run=cmd_kphi)

    p = sub.add_parser("introspect", help="introspection checks for a group formula")
    p.add_argument("--phi", required=True)
    p.add_argument("--var", default="x")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-facets", type=int, default=3)
    p.add_argument("--seed", type=int)
    common(p, formula=False)
    p.set_defaults(run=cmd_introspect)

    p = sub.add_parser("axioms", help="empirical soundness of the axiom schemas")
    p.add_argument("--schemas", nargs="*")
    p.add_argument("--mutants", action="store_true", help="include the corrupted self-test schema")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--models", type=int, default=50)
    p.add_argument("--agents", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--dump", help="directory for counterexample files")
    common(p, formula=False)
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("sat", help="bounded satisfiability search")
    p.add_argument("--max-facets", type=int)
    common(p)
    p.set_defaults(run=cmd_sat)

    p = sub.add_parser("validate", help="check a model file (and local epistemic properties)")
    p.add_argument("model")
    common(p, formula=False)
    p.set_defaults(run=cmd_validate)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        return args.run(args)
    except (UsageError, FormulaSyntaxError, InadmissibleSubstitution, UnmappedFreeVariable,
            InadmissibleAssignment, NotLocalEpistemic, ModelError, ModelFormatError,
            FileNotFoundError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def run_captured(argv: Sequence[str]) -> tuple[int, str]:
    """Run a command and return (exit code, stdout)."""
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(argv)
    return code, buf.getvalue()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
