"""Command-line front end.

Exit codes: 0 success, 1 parse/type/spec errors, 2 model errors,
3 disagreement or property violations.
"""
from __future__ import annotations

import itertools
import json
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import click

from .errors import (CombinatorialBlowup, IntlabError, ModelError, ParseError, TypingError,
                     UnboundVariable, UnknownSort, Unsupported)
from .lang import (ExprFuzzer, FormalEvaluator, VectorEvaluator, VectorModel, check_hom, parse,
                   to_text, typecheck)
from .lang.parser import LogicOp, Modal
from .logic import truth_bit
from .measure import (ADD, REMOVE, CantorSet, FinitePoints, IntervalSet, MeasurableProp,
                      parse_rational)
from .modal import (CofiniteSupport, ContinuousFrame, FiniteSupport, accumulate, bits,
                    box_continuous, box_countable, box_finite, chain, count_true,
                    dia_continuous, dia_countable, dia_finite, duality_check,
                    failure_measure_at, offsets, prop_vector, truth_measure_at, values)
from .model import (Assignment, Compound, FiniteFrame, IntensionalModel, check_value,
                    enumerate_domain, load_model, model_hash, parse_value, render_value)
from .types import T, Func
from .vectors import LinMap, TensorSpace, Vec, canonical_text, embed, to_matrix

EXIT_USAGE, EXIT_MODEL, EXIT_VIOLATION = 1, 2, 3


class Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _fail(code, message):
    raise Fail(code, message)


def _run(fn):
    """Map library errors onto the exit-code contract."""
    try:
        fn()
    except Fail as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except ParseError as exc:
        click.echo(exc.caret(), err=True)
        sys.exit(EXIT_USAGE)
    except (TypingError, UnboundVariable, UnknownSort, Unsupported) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (ModelError, CombinatorialBlowup) as exc:
        click.echo(f"model error: {exc}", err=True)
        sys.exit(EXIT_MODEL)


def _load(path) -> IntensionalModel:
    return load_model(path)


def _emit(report: dict, fmt: str):
    if fmt == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
        return
    for key, val in report.items():
        if isinstance(val, list):
            click.echo(f"{key}:")
            for item in val:
                click.echo(f"  {item if not isinstance(item, dict) else _row(item)}")
            if not val:
                click.echo("  (none)")
        else:
            click.echo(f"{key}: {val}")


def _row(d: dict) -> str:
    return "  ".join(f"{k}={v}" for k, v in d.items())


def _parse_index(model: IntensionalModel, text: str | None) -> Compound:
    if text is None:
        return model.index_space[0]
    parts = [p.strip() for p in text.split(",") if p.strip()]
    labels = {}
    if all("=" in p for p in parts):
        labels = dict(p.split("=", 1) for p in parts)
    elif len(parts) == len(model.sorts):
        labels = dict(zip(model.sorts, parts))
    else:
        _fail(EXIT_USAGE, f"--at needs one index per sort ({', '.join(model.sorts)})")
    s = Compound(tuple((srt, labels.get(srt)) for srt in model.sorts))
    if s not in model.index_space:
        _fail(EXIT_USAGE, f"{text!r} is not a compound index of the model")
    return s


def _parse_assign(model, te, items) -> Assignment:
    types = te.free_types
    out = {}
    for item in items:
        if "=" not in item:
            _fail(EXIT_USAGE, f"--assign expects name=value, got {item!r}")
        name, raw = (x.strip() for x in item.split("=", 1))
        typ = types.get(name)
        if typ is None:
            continue
        if isinstance(typ, Func):
            raw = json.loads(raw)
        value = parse_value(raw, typ, model)
        try:
            check_value(value, typ, model)
        except IntlabError as exc:
            _fail(EXIT_USAGE, f"--assign {name}: {exc}")
        out[name] = value
    missing = sorted(set(types) - set(out))
    if missing:
        raise UnboundVariable(f"no --assign given for free variable(s) {', '.join(missing)}")
    return Assignment.of(out)


def _vec_text(x, model) -> str:
    """Coordinates in domain order for primitive spaces, canonical text otherwise."""
    if isinstance(x, Vec) and not isinstance(x.space, (Func, TensorSpace)):
        basis = enumerate_domain(x.space, model)
        coords = ",".join(str(x[b]) for b in basis)
        return f"({coords}) over basis {','.join(render_value(b) for b in basis)}"
    return canonical_text(x).replace("\n", "; ")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Intensional semantics, its vector embedding, and modal operators."""


# -- eval --------------------------------------------------------------------


@main.command("eval")
@click.argument("model_path", type=click.Path())
@click.argument("expr_text")
@click.option("--at", "at", help="compound index, e.g. w1,i2 or w=w1,i=i2")
@click.option("--assign", "assign", multiple=True, help="free variable binding x=ann")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def cmd_eval(model_path, expr_text, at, assign, fmt):
    """Evaluate EXPR_TEXT formally and as a vector, and compare."""
    def run():
        model = _load(model_path)
        te = typecheck(parse(expr_text, model.constants), model)
        s = _parse_index(model, at)
        g = _parse_assign(model, te, assign)
        formal = FormalEvaluator(model).eval(te, g, s)
        ve = VectorEvaluator(model)
        report = {"expr": to_text(te.expr), "type": str(te.type), "at": str(s),
                  "assignment": str(g), "formal": render_value(formal)}
        try:
            vec = ve.eval(te, g, s)
            agree = embed(formal, te.type, model) == vec
            report["vector"] = _vec_text(vec, model)
            if te.type == T:
                report["vector_bit"] = truth_bit(vec)
            if isinstance(te.expr, Modal):
                mv = ve.modal_vector(te, g)
                report["modal_vector"] = ",".join(
                    str(mv[x]) for x in model.index_space)
                report["modal_basis"] = " ".join(str(x) for x in model.index_space)
        except IntlabError as exc:
            report["vector"] = f"error: {type(exc).__name__}: {exc}"
            agree = False
        report["verdict"] = "AGREE" if agree else "DISAGREE"
        _emit(report, fmt)
        if not agree:
            sys.exit(EXIT_VIOLATION)
    _run(run)


# -- verify ------------------------------------------------------------------


def _inject(model: IntensionalModel, spec: str) -> IntensionalModel:
    """Overwrite one extension: CONST@INDEX=VALUE (INDEX like w1,i2)."""
    m = re.fullmatch(r"\s*(\w+)\s*@\s*([^=]+)=(.+)", spec)
    if not m:
        _fail(EXIT_USAGE, f"--inject-fault expects CONST@INDEX=VALUE, got {spec!r}")
    name, idx, raw = m.groups()
    if name not in model.constants:
        _fail(EXIT_USAGE, f"unknown constant {name!r}")
    typ = model.constants[name].type
    raw = raw.strip()
    if isinstance(typ, Func):
        raw = json.loads(raw)
    return model.with_extension(name, _parse_index(model, idx), parse_value(raw, typ, model))


def _hom_chunk(args):
    model_path, fault, texts = args
    model = _load(model_path)
    vm = VectorModel.from_model(model)
    if fault:
        model = _inject(model, fault)
    formal, vector = FormalEvaluator(model), VectorEvaluator(vm)
    out = []
    checked = 0
    for text in texts:
        te = typecheck(parse(text, model.constants), model)
        rep = check_hom(te, model, vm, formal, vector)
        checked += rep.checked
        for v in rep.violations:
            out.append({"suite": "hom", "expr": text, "at": v.index, "assignment": v.assignment,
                        "formal": v.formal, "vector": v.vector, "error": v.error})
    return checked, out


def _suite_hom(model_path, model, depth, seed, count, jobs, fault):
    corpus = [to_text(e) for e in ExprFuzzer(model, seed).corpus(count, depth)]
    chunks = [corpus[i::jobs] for i in range(jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_hom_chunk, [(model_path, fault, c) for c in chunks]))
    else:
        results = [_hom_chunk((model_path, fault, corpus))]
    checked = sum(c for c, _ in results)
    violations = [v for _, vs in results for v in vs]
    return {"suite": "hom", "expressions": len(corpus), "checks": checked}, violations


def _all_props(n, cap, rng):
    if 2 ** n <= cap:
        return list(itertools.product((0, 1), repeat=n))
    return [tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(cap)]


def _suite_duality(model, depth, seed, count):
    violations, checks = [], 0
    rng = random.Random(seed)
    for srt in model.sorts:
        frame = model.frames[srt]
        for combo in _all_props(len(frame.worlds), 4096, rng):
            checks += len(frame.worlds)
            for v in duality_check(frame, prop_vector(frame, combo)):
                violations.append({"suite": "duality", "sort": srt, "prop": v.prop, "at": v.at,
                                   "box": v.box, "not_dia_not": v.not_dia_not})
    # compound level: box[σ] e against not dia[σ] not e on closed propositions
    formal = FormalEvaluator(model)
    fz = ExprFuzzer(model, seed, free_vars=False)
    for e in fz.corpus(max(1, count // 4), max(1, depth - 2), types=[T]):
        for srt in model.sorts:
            box = typecheck(Modal("box", srt, e), model)
            dual = typecheck(LogicOp("not", (Modal("dia", srt, LogicOp("not", (e,))),)), model)
            for s in model.index_space:
                checks += 1
                b = formal.eval(box, Assignment.of(), s).bit
                d = formal.eval(dual, Assignment.of(), s).bit
                if b != d:
                    violations.append({"suite": "duality", "sort": srt, "prop": to_text(e),
                                       "at": str(s), "box": b, "not_dia_not": d})
    return {"suite": "duality", "checks": checks}, violations


def _suite_axioms(model, seed):
    violations, checks, included = [], 0, []
    rng = random.Random(seed)
    for srt in model.sorts:
        frame = model.frames[srt]
        n = len(frame.worlds)
        props = [prop_vector(frame, c) for c in _all_props(n, 64, rng)]
        reflexive = frame.is_reflexive
        serial = all(frame.out_degree(w) > 0 for w in frame.worlds)
        included.append(f"{srt}:K" + (",T" if reflexive else "") + (",D" if serial else ""))
        for p in props:
            bp = bits(frame, box_finite(frame, p))
            dp = bits(frame, dia_finite(frame, p))
            pb = bits(frame, p)
            for q in props:
                imp = prop_vector(frame, [int((not a) or b) for a, b in zip(pb, bits(frame, q))])
                lhs = bits(frame, box_finite(frame, imp))
                bq = bits(frame, box_finite(frame, q))
                for k, w in enumerate(frame.worlds):
                    checks += 1
                    if lhs[k] and bp[k] and not bq[k]:
                        violations.append({"suite": "axioms", "axiom": "K", "sort": srt, "at": w,
                                           "p": "".join(map(str, pb)),
                                           "q": "".join(map(str, bits(frame, q)))})
            for k, w in enumerate(frame.worlds):
                if reflexive:
                    checks += 1
                    if bp[k] and not pb[k]:
                        violations.append({"suite": "axioms", "axiom": "T", "sort": srt, "at": w,
                                           "p": "".join(map(str, pb))})
                if serial:
                    checks += 1
                    if bp[k] and not dp[k]:
                        violations.append({"suite": "axioms", "axiom": "D", "sort": srt, "at": w,
                                           "p": "".join(map(str, pb))})
    return {"suite": "axioms", "checks": checks, "included": " ".join(included)}, violations


def _sort_key(v: dict):
    return json.dumps(v, sort_keys=True)


@main.command("verify")
@click.argument("model_path", type=click.Path())
@click.option("--suite", type=click.Choice(["hom", "duality", "axioms", "all"]), default="all")
@click.option("--depth", type=click.IntRange(1, 8), default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=click.IntRange(1), default=200, show_default=True,
              help="number of generated expressions for the hom suite")
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True)
@click.option("--inject-fault", "fault", default=None,
              help="corrupt CONST@INDEX=VALUE after the vector images are cached")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def cmd_verify(model_path, suite, depth, seed, count, jobs, fault, fmt):
    """Run property suites; exit 3 if any violation is found."""
    def run():
        started = time.perf_counter()
        model = _load(model_path)
        if fault:
            _inject(model, fault)  # validate early
        suites = ["hom", "duality", "axioms"] if suite == "all" else [suite]
        results, violations = [], []
        for name in suites:
            if name == "hom":
                r, v = _suite_hom(model_path, model, depth, seed, count, jobs, fault)
            elif name == "duality":
                r, v = _suite_duality(model, depth, seed, count)
            else:
                r, v = _suite_axioms(model, seed)
            r["violations"] = len(v)
            results.append(r)
            violations.extend(v)
        report = {
            "command": f"verify --suite {suite} --depth {depth} --seed {seed} --count {count}"
                       + (f" --inject-fault {fault}" if fault else ""),
            "model_hash": model_hash(model_path),
            "results": results,
            "violations": sorted(violations, key=_sort_key),
            "status": "PASS" if not violations else "FAIL",
            "timing_s": round(time.perf_counter() - started, 3),
        }
        _emit(report, fmt)
        if violations:
            sys.exit(EXIT_VIOLATION)
    _run(run)


# -- modal -------------------------------------------------------------------

_INTERVAL = re.compile(r"\[\s*([^,\[\]()]+?)\s*,\s*([^,\[\]()]+?)\s*\)")


def parse_frame(spec: str):
    """``chain``, ``offsets:+1,+2``, ``window:a,b`` or ``edges:1-2,1-4,...``."""
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    try:
        if kind == "chain" and not rest:
            return chain()
        if kind == "offsets":
            return offsets([int(x) for x in rest.split(",")])
        if kind == "window":
            lo, hi = rest.split(",")
            return ContinuousFrame("t", parse_rational(lo), parse_rational(hi))
        if kind == "edges":
            pairs = [tuple(int(x) for x in e.split("-")) for e in rest.split(",") if e.strip()]
            n = max(max(p) for p in pairs)
            worlds = [f"w{i}" for i in range(1, n + 1)]
            return FiniteFrame.from_edges("w", worlds, [(f"w{a}", f"w{b}") for a, b in pairs])
    except (ValueError, TypeError) as exc:
        _fail(EXIT_USAGE, f"bad frame spec {spec!r}: {exc}")
    _fail(EXIT_USAGE, f"unknown frame spec {spec!r}")


def _null_or_interval(text: str):
    text = text.strip()
    m = re.fullmatch(r"cantor\[\s*(.+?)\s*,\s*(.+?)\s*\]", text)
    if m:
        return CantorSet(parse_rational(m.group(1)), parse_rational(m.group(2)))
    m = re.fullmatch(r"points\((.*)\)", text)
    if m:
        return FinitePoints([p for p in m.group(1).split(",") if p.strip()])
    pairs = _INTERVAL.findall(text)
    if pairs:
        return IntervalSet.of(*pairs)
    raise ValueError(f"cannot read {text!r} as a null set or interval")


def parse_measurable(spec: str) -> MeasurableProp:
    """``base:[0,10) remove:cantor[3,5] add:points(43/10) remove:[3,7/2)``.

    Interval modifiers change the base; null-set modifiers become exceptions.
    """
    base = IntervalSet()
    exceptions = []
    for token in re.findall(r"(base|add|remove):(\S+)", spec):
        key, val = token
        if key == "base":
            base = IntervalSet.of(*_INTERVAL.findall(val))
            continue
        item = _null_or_interval(val)
        if isinstance(item, IntervalSet):
            base = base.union(item) if key == "add" else base.difference(item)
        else:
            exceptions.append((item, ADD if key == "add" else REMOVE))
    if not re.match(r"\s*(base|add|remove):", spec):
        raise ValueError(f"continuous propositions start with base:, add: or remove:, got {spec!r}")
    return MeasurableProp(base, tuple(exceptions))


@main.command("modal")
@click.option("--frame", "frame_spec", required=True)
@click.option("--prop", "prop_spec", required=True)
@click.option("--op", type=click.Choice(["box", "dia"]), default="box")
@click.option("--at", "at", default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def cmd_modal(frame_spec, prop_spec, op, at, fmt):
    """Evaluate box/dia on a finite, countable or continuous frame."""
    def run():
        frame = parse_frame(frame_spec)
        report = {"frame": frame_spec, "prop": prop_spec, "op": op}
        try:
            if isinstance(frame, FiniteFrame):
                if not re.fullmatch(r"[01]+", prop_spec.strip()):
                    raise ValueError("finite frames take a bit string such as 1101")
                v = prop_vector(frame, prop_spec)
                result = (box_finite if op == "box" else dia_finite)(frame, v)
                report["accumulate"] = ",".join(str(x) for x in values(frame, accumulate(frame, v)))
                report[op] = "".join(map(str, bits(frame, result)))
                if at is not None:
                    w = at if at.startswith("w") else f"w{at}"
                    if w not in frame.position:
                        raise ValueError(f"unknown world {at!r}")
                    report["at"] = w
                    report["verdict"] = bits(frame, result)[frame.position[w]]
            elif isinstance(frame, ContinuousFrame):
                p = parse_measurable(prop_spec)
                if at is None:
                    raise ValueError("--at is required for continuous frames")
                t = parse_rational(at)
                tm = truth_measure_at(frame, p, t)
                fm = failure_measure_at(frame, p, t)
                verdict = (box_continuous if op == "box" else dia_continuous)(frame, p, t)
                report.update({"at": str(t), "accessible": str(frame.accessible(t)),
                               "truth_measure": f"{tm.numerator}/{tm.denominator}",
                               "failure_measure": f"{fm.numerator}/{fm.denominator}",
                               "verdict": verdict})
            else:
                kind, _, rest = prop_spec.partition(":")
                items = [int(x) for x in rest.split(",") if x.strip()]
                if kind == "support":
                    p = FiniteSupport(items)
                elif kind == "cosupport":
                    p = CofiniteSupport(items)
                else:
                    raise ValueError("countable frames take support:... or cosupport:...")
                if at is None:
                    raise ValueError("--at is required for countable frames")
                i = int(at)
                hits, degree = count_true(frame, p, i)
                verdict = (box_countable if op == "box" else dia_countable)(frame, p, i)
                report.update({"at": i, "accessible": ",".join(map(str, frame.accessible(i))),
                               "satisfied": f"{hits}/{degree}", "verdict": verdict})
        except (ValueError, IntlabError) as exc:
            _fail(EXIT_USAGE, str(exc))
        _emit(report, fmt)
    _run(run)


# -- embed-intension / check-model -------------------------------------------


@main.command("embed-intension")
@click.argument("model_path", type=click.Path())
@click.argument("constant")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def cmd_embed_intension(model_path, constant, fmt):
    """Print h(I(c)) as a linear map from the compound index space."""
    def run():
        model = _load(model_path)
        if constant not in model.constants:
            _fail(EXIT_USAGE, f"unknown constant {constant!r}")
        op: LinMap = VectorModel.from_model(model).intension_operator(constant)
        typ = model.constants[constant].type
        report = {"constant": constant, "type": f"<s,{typ}>",
                  "columns": [str(s) for s in model.index_space]}
        if not isinstance(typ, Func):
            rows = enumerate_domain(typ, model)
            mat = to_matrix(op, rows, model.index_space)
            report["rows"] = [render_value(r) for r in rows]
            report["matrix"] = [" ".join(str(x) for x in row) for row in mat]
        else:
            report["map"] = canonical_text(op).split("\n")
        _emit(report, fmt)
    _run(run)


@main.command("check-model")
@click.argument("model_path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def cmd_check_model(model_path, fmt):
    """Validate a model file and summarise it."""
    def run():
        model = _load(model_path)
        frames = []
        for srt in model.sorts:
            f = model.frames[srt]
            flags = [name for name, ok in (("reflexive", f.is_reflexive),
                     ("serial", all(f.out_degree(w) for w in f.worlds))) if ok]
            frames.append(f"{srt}: {len(f.worlds)} indices, {len(f.edges())} edges"
                          + (f" ({', '.join(flags)})" if flags else ""))
        report = {"model_hash": model_hash(model_path),
                  "sorts": frames,
                  "compound_indices": len(model.index_space),
                  "entities": ", ".join(model.entities),
                  "constants": [f"{n} : {c.type}" for n, c in sorted(model.constants.items())],
                  "status": "OK"}
        _emit(report, fmt)
    _run(run)


if __name__ == "__main__":
    main()
