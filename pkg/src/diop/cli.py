"""Batch command-line front end.

Every command prints a report, human-readable by default and as
``key=value`` lines with ``--machine``, and exits with

    0  all checks passed
    1  a mathematical check failed (the report carries a witness)
    2  input error (unreadable file, parse error with line and column)
    3  inconclusive (a search bound was exhausted)

Category, functor, context, algebra and convolution files are JSON; see
``fixtures/`` for one of each.  Presentations use the dioperad text format.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import dayconv as dc
from . import diagrams as dg
from . import dioperad as dp
from . import duality as du
from . import envelope as ev
from . import frobenius as fr
from . import graphcore as gc
from . import moncat as mc
from . import vbase as vb

OK, FAIL, INPUT, INCONCLUSIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


class Inconclusive(Exception):
    pass


# ---------------------------------------------------------------------------
# reports

def fmt_word(w) -> str:
    return ".".join(w) if w else "1"


def fmt(x) -> str:
    """Stable rendering of words, tuples of words, arrows and scalars."""
    if isinstance(x, mc.Arrow):
        return f"{fmt_word(x.src)}->{fmt_word(x.tgt)}:deg{x.degree}:{vb.format_matrix(x.mat)}"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (gc.ColoredDigraph, dp.FrobOp)):
        return label_text(x)
    if isinstance(x, tuple) and all(isinstance(c, str) for c in x):
        return fmt_word(x)
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(fmt(c) for c in x) + ")"
    return str(x)


@dataclass
class Report:
    command: str
    lines: list = field(default_factory=list)
    status: int = OK

    def add(self, key: str, value) -> None:
        self.lines.append((key, value if isinstance(value, str) else fmt(value)))

    def fail(self, witness) -> None:
        self.status = FAIL
        self.add("witness", witness)

    def render(self, machine: bool) -> str:
        verdict = {OK: "pass", FAIL: "fail", INPUT: "input-error", INCONCLUSIVE: "inconclusive"}
        out = []
        if machine:
            out.append(f"command={self.command}")
            out += [f"{k}={v}" for k, v in self.lines]
            out.append(f"result={verdict[self.status]}")
        else:
            out.append(f"== {self.command}")
            out += [f"  {k}: {v}" for k, v in self.lines]
            out.append(f"result: {verdict[self.status].upper()}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# loaders

def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def read_json(path) -> dict:
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e.msg} at line {e.lineno}, column {e.colno}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _need(spec: dict, key: str, where: str):
    if key not in spec:
        raise InputError(f"{where}: missing key {key!r}")
    return spec[key]


def load_algebra(spec) -> mc.FrobeniusAlgebra:
    """A builtin name (``Q``, ``dual_numbers``, ``split_pair``) or a table
    ``{"name", "degrees", "mult": {"i,j": {"k": c}}, "unit", "trace", "d"}``."""
    if isinstance(spec, str):
        spec = {"builtin": spec}
    if "builtin" in spec:
        name = spec["builtin"]
        if name not in mc.ALGEBRAS:
            raise InputError(f"unknown algebra {name!r}")
        return mc.dual_numbers(int(spec.get("d", 0))) if name == "dual_numbers" else mc.ALGEBRAS[name]()
    try:
        table = {tuple(int(i) for i in k.split(",")): {int(k2): v for k2, v in row.items()}
                 for k, row in _need(spec, "mult", "algebra").items()}
        alg = mc._alg(spec.get("name", "A"), tuple(_need(spec, "degrees", "algebra")), table,
                      _need(spec, "unit", "algebra"), _need(spec, "trace", "algebra"),
                      int(spec.get("d", 0)))
    except (ValueError, TypeError, AttributeError) as e:
        raise InputError(f"algebra table: {e}") from None
    problems = alg.check()
    if problems:
        raise InputError(f"algebra table is not a Frobenius algebra: {problems[0]}")
    return alg


def load_category(spec: dict, bound: int | None = None) -> mc.MonCat:
    kind = _need(spec, "category", "category file")
    b = bound if bound is not None else int(spec.get("bound", 3))
    gens = {k: tuple(v) for k, v in spec.get("generators", {}).items()}
    if kind == "free-modules":
        return mc.module_category(load_algebra(_need(spec, "algebra", "category file")),
                                  gens or None, b)
    if kind == "vect":
        return mc.vect_category(gens, b)
    if kind == "trivial":
        return dc.trivial_category()
    if kind == "permutations":
        return mc.PermutationCategory(bound=b)
    raise InputError(f"unknown category kind {kind!r}")


FAULTS = {
    "scaled-orientation": lambda ctx, f: du.scaled_orientation_at(ctx, tuple(f["at"]), f.get("factor", 2)),
    "zero-orientation": lambda ctx, f: du.zero_orientation(ctx),
    "scaled-counit": lambda ctx, f: du.scaled_counit_at(ctx, tuple(f["at"]), f.get("factor", 2)),
}


def load_context(spec: dict, bound: int | None = None) -> du.DualityContext:
    kind = _need(spec, "context", "context file")
    b = bound if bound is not None else int(spec.get("bound", 3))
    if kind == "identity":
        C = load_category(_need(spec, "category", "context file"), b)
        ctx = du.identity_context(C, spec.get("generators"), b)
    elif kind == "frobenius-algebra":
        gens = {k: tuple(v) for k, v in spec.get("generators", {}).items()} or None
        ctx = du.frobenius_algebra_context(load_algebra(_need(spec, "algebra", "context file")),
                                           gens, b)
    else:
        raise InputError(f"unknown context kind {kind!r}")
    if spec.get("alpha_convention"):
        ctx = du.with_context(ctx, alpha_convention=spec["alpha_convention"])
    fault = spec.get("fault")
    if fault:
        if fault.get("type") not in FAULTS:
            raise InputError(f"unknown fault {fault.get('type')!r}")
        ctx = FAULTS[fault["type"]](ctx, fault)
    return ctx


def load_functor(spec: dict, C: mc.MonCat) -> fr.FrobeniusData:
    kind = _need(spec, "functor", "functor file")
    if kind == "identity":
        data = fr.identity_frobenius(C)
    elif kind == "forgetful":
        if not isinstance(C, mc.FreeModuleCat):
            raise InputError("the forgetful functor needs a category of free modules")
        data = fr.forgetful_frobenius(C)
    else:
        raise InputError(f"unknown functor kind {kind!r}")
    if spec.get("fault") == "zero-coproduct":
        data = fr.zero_coproduct(data)
    elif spec.get("fault"):
        raise InputError(f"unknown fault {spec['fault']!r}")
    return data


def parse_biprofile(text: str) -> tuple:
    """``(a,b;c)`` -> (["a", "b"], ["c"])."""
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")) or t.count(";") != 1:
        raise InputError(f"biprofile {text!r} is not of the form (x,...;y,...)")
    ins, outs = t[1:-1].split(";")
    split = lambda s: [c.strip() for c in s.split(",") if c.strip()]
    return split(ins), split(outs)


def load_presentation(path):
    text = read_text(path)
    try:
        return dp.parse_presentation(text)
    except dp.ParseError as e:
        raise InputError(f"{path}: {e}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_check_presentation(args, rep: Report):
    P = load_presentation(args.file)
    rep.add("colors", ",".join(P.free.colors))
    for name, (ins, outs) in sorted(P.free.signature.items()):
        rep.add(f"gen.{name}", f"({','.join(ins)};{','.join(outs)})")
    rep.add("relations", len(P.relations))
    for name, l, r in P.relations:
        if l.biprofile() != r.biprofile():
            rep.fail(f"relation {name} changes the biprofile")


def cmd_compose(args, rep: Report):
    P = load_presentation(args.file)
    if args.bound_vertices:
        P.bound = args.bound_vertices
    try:
        g = dp.normalize(P.parse(args.expr))
    except dp.ParseError as e:
        raise InputError(f"expression: {e}") from None
    ins, outs = g.biprofile()
    rep.add("biprofile", f"({','.join(ins)};{','.join(outs)})")
    rep.add("vertices", P.free.size(g))
    for k, line in enumerate(gc.to_text(g).splitlines()):
        rep.add(f"graph[{k}]", line)
    if args.equals:
        try:
            h = dp.normalize(P.parse(args.equals))
        except dp.ParseError as e:
            raise InputError(f"expression: {e}") from None
        res = P.decide(g, h)
        rep.add("verdict", res.verdict)
        rep.add("chain_length", res.steps)
        if res.verdict == "distinct":
            rep.fail("the two expressions are not congruent")
        elif res.verdict == "unknown":
            rep.status = INCONCLUSIVE
            rep.add("explored", res.explored)


def label_text(lab) -> str:
    """Compact one-line rendering of an operation used as a vertex label."""
    if isinstance(lab, gc.ColoredDigraph):
        if len(lab.vertices) == 1:
            return label_text(next(iter(lab.vertices.values())).label)
        inner = gc.relabel_vertices(lab, lambda v, x: label_text(x.label))
        return "{" + " | ".join(gc.to_text(inner).splitlines()) + "}"
    if isinstance(lab, dp.FrobOp):
        return f"frob({lab.m};{lab.n})"
    return str(lab)


def cmd_envelope(args, rep: Report):
    if args.file == "frob":
        O = dp.FrobDioperad()
        sig = [((O.color,) * m, (O.color,) * n, O.generator_op(name))
               for name, (m, n) in O.GENERATORS.items()]
    else:
        O = load_presentation(args.file).free
        sig = [(ins, outs, O.generator(name)) for name, (ins, outs) in O.signature.items()]
    E = ev.PropEnvelope(O)
    ins, outs = parse_biprofile(args.biprofile)
    n = args.bound_vertices or 3
    classes = {}
    for g in gc.enumerate_connected(sig, n):
        gi, go = g.biprofile()
        if sorted(gi) != sorted(ins) or sorted(go) != sorted(outs):
            continue
        classes.setdefault(E.normal_key(g), g)
    rep.add("biprofile", args.biprofile)
    rep.add("max_vertices", n)
    rep.add("classes", len(classes))
    if E.stats.bounded:
        rep.status = INCONCLUSIVE
        rep.add("bounded_explorations", E.stats.bounded)
    if args.list:
        texts = sorted(gc.to_text(gc.relabel_vertices(E.normal_form(g), lambda v, x: label_text(x.label)))
                       for g in classes.values())
        for k, t in enumerate(texts):
            for j, line in enumerate(t.splitlines()):
                rep.add(f"class[{k}].{j}", line)


def cmd_load_cat(args, rep: Report):
    C = load_category(read_json(args.file), args.bound_words)
    rep.add("name", getattr(C, "name", type(C).__name__))
    rep.add("generators", ",".join(C.generators))
    rep.add("objects", len(C.objects()))
    if args.check:
        bad = mc.check_axioms(C, bound=min(C.bound, 2))
        rep.add("axiom_failures", len(bad))
        if bad:
            rep.fail(bad[0])


def cmd_check_frobenius(args, rep: Report):
    C = load_category(read_json(args.cat), args.bound_words)
    data = load_functor(read_json(args.functor), C)
    rep.add("functor", data.name or "G")
    rep.add("twist_degree", data.twist_degree)
    if args.twist is not None and args.twist != data.twist_degree:
        rep.fail(f"twist degree {data.twist_degree}, expected {args.twist}")
        return
    r = fr.check_frobenius(data, args.bound_words)
    for axiom in sorted(r.checked):
        rep.add(f"checked.{axiom}", r.checked[axiom])
    rep.add("degree_violations", len(r.degree_violations))
    if not r.ok:
        rep.fail(r.first())
        return
    if args.separable:
        sep, w = fr.is_separable(data, args.bound_words)
        rep.add("separable", sep)
        if not sep:
            rep.fail(("separable",) + tuple(w))


def cmd_replay_proof(args, rep: Report):
    if args.theorem != "main-theorem":
        raise InputError(f"unknown proof {args.theorem!r}")
    if not args.instance:
        raise InputError("replay-proof needs --instance FILE")
    spec = read_json(args.instance)
    ctx = load_context(spec, args.bound_words)
    insts = None
    if "instance" in spec:
        insts = [tuple(tuple(w) for w in spec["instance"])]
    try:
        r = du.replay_main_proof(ctx, insts)
    except ValueError as e:
        raise InputError(str(e)) from None
    for k, (tag, j) in enumerate(zip(r.tags, r.joins)):
        cert = "none" if j is None else f"steps={j.steps} rules={'+'.join(j.tags) or '-'}"
        rep.add(f"link[{k + 1}]", f"{tag}: {cert}")
    first = next(iter(r.values))
    rep.add("instance", first)
    for k, v in enumerate(r.values[first]):
        rep.add(f"term[{k}]", v)
    rep.add("instances", len(r.values))
    rep.add("constant", r.constant)
    rep.add("degree_violations", len(r.degree_violations))
    if not r.constant or r.degree_violations:
        bad = next((i for i, vals in r.values.items() if len(set(vals)) > 1), None)
        rep.fail(("not-constant", bad) if bad else ("degree",) + tuple(r.degree_violations[0]))
    elif not r.joined:
        rep.status = INCONCLUSIVE
        rep.add("unjoined_links", [k + 1 for k, j in enumerate(r.joins) if j is None])


def cmd_duality_verify(args, rep: Report):
    ctx = load_context(read_json(args.ctx), args.bound_words)
    r = du.verify_main_theorem(ctx)
    rep.add("context", ctx.name)
    rep.add("d", ctx.d)
    rep.add("tested_generators", ",".join(r.tested_generators))
    rep.add("bound", r.bound)
    if r.frobenius:
        for axiom in sorted(r.frobenius.checked):
            rep.add(f"checked.{axiom}", r.frobenius.checked[axiom])
        rep.add("separable", r.frobenius.separable)
    rep.add("degree_violations", len(r.degree_violations))
    if not r.ok:
        rep.fail(r.witness())


ALGEBRA_KINDS = {"frobenius": lambda ctx, spec: du.frobenius_algebra_in_context(
    ctx, tuple(spec.get("word", ["A"])))}


def cmd_transfer(args, rep: Report):
    ctx = load_context(read_json(args.ctx), args.bound_words)
    spec = read_json(args.alg)
    kind = _need(spec, "algebra", "algebra file")
    if kind not in ALGEBRA_KINDS:
        raise InputError(f"unknown algebra kind {kind!r}")
    alg = ALGEBRA_KINDS[kind](ctx, spec)
    P = dp.FrobDioperad()
    base = dp.algebra_check(P, alg.target, alg)
    rep.add("input_algebra_ok", base.ok)
    if not base.ok:
        rep.fail(("input",) + tuple(map(str, base.first())))
        return
    T = du.transfer_algebra(ctx, P, alg)
    rep.add("twist", -ctx.d)
    for name in sorted(T.generator_images):
        img = T.generator_images[name]
        rep.add(f"image.{name}", img.arrow)
    r = dp.algebra_check(T.source, T.target, T, degree_of=lambda op: op.degree)
    rep.add("relations_checked", r.checked)
    if not r.ok:
        rep.fail(r.first())


def load_convolution(cat_spec: dict, diop_spec: dict, names, bound) -> dc.ConvolutionDioperad:
    C = load_category(cat_spec, bound)
    dspec = diop_spec.get("category", "same")
    D = C if dspec == "same" else load_category(dspec, bound)
    functors = []
    for name, f in _need(diop_spec, "functors", "convolution file").items():
        kind = _need(f, "kind", f"functor {name}")
        if kind == "identity":
            functors.append(dc.identity_functor(C, name))
        elif kind == "shift":
            functors.append(dc.shift_functor(D, tuple(f["word"]), name))
        elif kind == "constant":
            functors.append(dc.constant_functor(D, tuple(f["word"]), name))
        else:
            raise InputError(f"unknown functor kind {kind!r}")
    if names:
        known = {F.name for F in functors}
        for n in names:
            if n not in known:
                raise InputError(f"functor {n!r} is not declared")
        functors = [F for F in functors if F.name in names]
    universe = [tuple(w) for w in diop_spec.get("universe", [[]])]
    known = set(C.generators)
    for w in universe:
        if not set(w) <= known:
            raise InputError(f"universe word {fmt_word(w)} is not an object of the category")
    return dc.ConvolutionDioperad(C, D, functors, universe, int(diop_spec.get("cap", 4)))


def cmd_dayconv(args, rep: Report):
    names = [n.strip() for n in args.functors.split(",")] if args.functors else None
    conv = load_convolution(read_json(args.cat), read_json(args.diop), names, args.bound_words)
    ins, outs = parse_biprofile(args.biprofile)
    try:
        sp = dc.natural_operations(conv, ins, outs, args.degree)
    except dc.ColorMismatch as e:
        raise InputError(str(e)) from None
    rep.add("colors", ",".join(conv.colors))
    rep.add("universe", conv.universe)
    rep.add("biprofile", args.biprofile)
    rep.add("unknowns", len(sp.variables))
    rep.add("limit_dim", sp.limit_dim)
    rep.add("dim", sp.dim)
    if args.list:
        for k, vec in enumerate(sp.basis):
            entries = [f"{fmt_word(x)}|{fmt(a)}|{fmt(b)}|{i},{j}|{r},{c}={v}"
                       for (x, a, b, i, j, r, c), v in zip(sp.variables, vec) if v]
            rep.add(f"basis[{k}]", " ".join(entries))


def cmd_dayconv_frobenius(args, rep: Report):
    ctx = load_context(read_json(args.ctx), args.bound_words)
    rep.add("context", ctx.name)
    try:
        cf = dc.frobenius_from_context(ctx)
    except du.OrientationRequired as e:
        rep.fail(f"orientation: {e}")
        return
    for op in (cf.mu, cf.eta, cf.eps, cf.gamma):
        bad = dc.naturality_failures(cf.conv, op)
        rep.add(f"degree.{op.name}", op.degree)
        if bad:
            rep.fail((op.name,) + bad[0][:4])
            return
    snakes = cf.snake_failures()
    rep.add("snakes", "ok" if not snakes else "fail")
    if snakes:
        rep.fail(("snake",) + snakes[0][0])
        return
    diffs = dc.duality_route_differences(cf, args.arity)
    rep.add("route_max_arity", args.arity)
    rep.add("route_differences", len(diffs))
    if diffs:
        rep.fail(("route",) + diffs[0][:3])


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diop", description=__doc__.splitlines()[0])
    p.add_argument("--bound-words", type=int, default=None, metavar="N")
    p.add_argument("--bound-vertices", type=int, default=None, metavar="N")
    p.add_argument("--machine", action="store_true", help="key=value output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-presentation")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_presentation)

    s = sub.add_parser("compose")
    s.add_argument("file")
    s.add_argument("expr")
    s.add_argument("--equals", default=None)
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("envelope")
    s.add_argument("file", help="presentation file, or 'frob'")
    s.add_argument("--biprofile", required=True)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_envelope)

    s = sub.add_parser("load-cat")
    s.add_argument("file")
    s.add_argument("--check", action="store_true")
    s.set_defaults(func=cmd_load_cat)

    s = sub.add_parser("check-frobenius")
    s.add_argument("cat")
    s.add_argument("functor")
    s.add_argument("--separable", action="store_true")
    s.add_argument("--twist", type=int, default=None)
    s.set_defaults(func=cmd_check_frobenius)

    s = sub.add_parser("replay-proof")
    s.add_argument("theorem")
    s.add_argument("--instance", default=None)
    s.set_defaults(func=cmd_replay_proof)

    s = sub.add_parser("duality-verify")
    s.add_argument("ctx")
    s.set_defaults(func=cmd_duality_verify)

    s = sub.add_parser("transfer")
    s.add_argument("ctx")
    s.add_argument("alg")
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("dayconv")
    s.add_argument("cat")
    s.add_argument("diop")
    s.add_argument("--functors", default=None)
    s.add_argument("--biprofile", required=True)
    s.add_argument("--degree", type=int, default=0)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_dayconv)

    s = sub.add_parser("dayconv-frobenius")
    s.add_argument("ctx")
    s.add_argument("--arity", type=int, default=3)
    s.set_defaults(func=cmd_dayconv_frobenius)
    return p


def run(argv, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT if e.code else OK
    for flag in ("bound_words", "bound_vertices"):
        v = getattr(args, flag)
        if v is not None and v <= 0:
            out.write(f"error: --{flag.replace('_', '-')} must be positive\n")
            return INPUT
    rep = Report(args.command)
    try:
        args.func(args, rep)
    except InputError as e:
        rep.status = INPUT
        rep.add("error", str(e))
    except (Inconclusive, dg.BoundExhausted) as e:
        rep.status = INCONCLUSIVE
        rep.add("reason", str(e))
    except mc.BoundExceeded as e:
        rep.status = INCONCLUSIVE
        rep.add("reason", f"word bound exceeded: {e}")
    out.write(rep.render(args.machine))
    return rep.status


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
