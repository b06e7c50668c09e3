"""Batch command-line interface.

Subcommands: parse, eval, translate, check, axioms, equiv, atoms.  Exit
code 0 on success or all-pass, 1 on any mismatch or axiom failure, 2 on
usage, parse or input errors.  Output is deterministic: identical argv
and seed give byte-identical output.  FV_MAX_DEPTH overrides the default
quantifier-depth cap for translation.
"""

from __future__ import annotations

import argparse
import ast
import json
import os
import sys
from dataclasses import dataclass, field

from .axioms import CheckBudget, run_axiom_suite
from .formula import (ParseError, canonicalize, format_ring_formula,
                      free_variables, parse_bool_formula, parse_ring_formula)
from .residue import DEFAULT_SENTENCES
from .rings import (RingError, atom_stalks, atoms, idempotents, is_connected,
                    modular_ring, product_ring, table_ring)
from .semantics import UnboundVariableError, boolean_value, eval_direct
from .suites import available_suites, formula_suite
from .translate import (TranslationDepthError, TranslationSizeError,
                        eval_via_fv, oracle_sweep, translate)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    """Everything a subcommand run depends on, normalized from argv."""

    ring_descriptors: list = field(default_factory=list)
    formula: str = None
    suite: str = None
    assignment: dict = field(default_factory=dict)
    max_depth: int = 3
    budget: int = 64
    seed: int = 0
    json_output: bool = False


def parse_ring_descriptor(text: str):
    """zmod:<n>, product:<desc>,<desc>,... (flat), or table:@<json file>."""
    if text.startswith("zmod:"):
        return modular_ring(int(text[5:]))
    if text.startswith("product:"):
        parts = [p for p in text[8:].split(",") if p]
        if any(p.startswith("product:") for p in parts):
            raise ValueError("nested product descriptors are not supported")
        return product_ring([parse_ring_descriptor(p) for p in parts])
    if text.startswith("table:@"):
        with open(text[7:], encoding="utf-8") as fh:
            data = json.load(fh)
        size = data["size"]
        add = [data["add"][i * size:(i + 1) * size] for i in range(size)]
        mul = [data["mul"][i * size:(i + 1) * size] for i in range(size)]
        return table_ring(add, mul, data["zero"], data["one"], data.get("label"))
    raise ValueError(f"unknown ring descriptor {text!r}; "
                     "use zmod:<n>, product:..., or table:@<file>")


def _split_top_level(text: str) -> list:
    parts, depth, current = [], 0, []
    for c in text:
        if c == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        depth += c in "([{"
        depth -= c in ")]}"
        current.append(c)
    parts.append("".join(current))
    return [p for p in parts if p.strip()]


def parse_assignment(text: str, ring) -> dict:
    """x0=3,x1=(1,0) style assignment literals, validated against the ring."""
    env = {}
    for item in _split_top_level(text):
        name, _, literal = item.partition("=")
        name = name.strip()
        if not (name.startswith("x") and name[1:].isdigit()):
            raise ValueError(f"bad assignment variable {name!r}")
        value = ast.literal_eval(literal.strip())
        if isinstance(value, list):
            value = tuple(value)
        if value not in ring.elements:
            raise ValueError(f"{value!r} is not an element of {ring.label}")
        env[int(name[1:])] = value
    return env


def load_formula_file(path: str) -> list:
    """One formula per line; blank lines and # comments ignored."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


def _element_json(e):
    return e if isinstance(e, int) else str(e)


def _emit(payload: dict, as_json: bool, lines):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def cmd_parse(cfg: RunConfig, lang: str) -> int:
    if lang == "bool":
        f = parse_bool_formula(cfg.formula)
        payload = {"language": "bool", "formula": str(f),
                   "free_variables": sorted(free_variables(f))}
        _emit(payload, cfg.json_output,
              [str(f), f"free variables: {sorted(free_variables(f))}"])
        return EXIT_OK
    f = parse_ring_formula(cfg.formula)
    payload = {"language": "ring", "formula": str(f),
               "free_variables": sorted(free_variables(f)),
               "canonical": format_ring_formula(canonicalize(f))}
    _emit(payload, cfg.json_output,
          [str(f), f"free variables: {sorted(free_variables(f))}",
           f"canonical: {payload['canonical']}"])
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    ring = parse_ring_descriptor(cfg.ring_descriptors[0])
    f = parse_ring_formula(cfg.formula)
    env = cfg.assignment
    result = eval_direct(ring, f, env)
    value = boolean_value(ring, f, env).element
    payload = {"ring": ring.label, "formula": str(f),
               "assignment": {f"x{k}": _element_json(v) for k, v in sorted(env.items())},
               "result": result, "boolean_value": _element_json(value)}
    _emit(payload, cfg.json_output,
          [f"{ring.label} |= {f}  at {payload['assignment']}: {str(result).lower()}",
           f"boolean value: {value}"])
    return EXIT_OK


def cmd_translate(cfg: RunConfig) -> int:
    f = parse_ring_formula(cfg.formula)
    result = translate(f, cfg.max_depth)
    payload = result.to_json()
    lines = [f"source: {payload['source']}", f"psi: {payload['psi']}",
             f"cells ({payload['cell_count']}):"]
    lines += [f"  [{i}] {c}" for i, c in enumerate(payload["cells"])]
    _emit(payload, cfg.json_output, lines)
    return EXIT_OK


def _resolve_suite(name: str) -> list:
    if name.startswith("@"):
        return load_formula_file(name[1:])
    return [format_ring_formula(f) for f in formula_suite(name)]


def cmd_check(cfg: RunConfig) -> int:
    ring = parse_ring_descriptor(cfg.ring_descriptors[0])
    formulas = [parse_ring_formula(t) for t in _resolve_suite(cfg.suite)]
    report = oracle_sweep(ring, formulas, cfg.max_depth)
    payload = report.to_json() | {"suite": cfg.suite, "seed": cfg.seed}
    lines = [f"ring: {report.ring}",
             f"suite: {cfg.suite} ({report.formulas} formulas)",
             f"instances: {report.instances}"]
    for m in report.mismatches:
        lines.append(f"MISMATCH {m.formula} at "
                     f"{{{', '.join(f'x{k}={v}' for k, v in sorted(m.assignment.items()))}}}: "
                     f"direct={m.direct} via_fv={m.via_fv}")
    for p in report.partition_failures:
        lines.append(f"PARTITION FAILURE {p}")
    lines.append("result: " + ("PASS" if report.ok else "FAIL"))
    _emit(payload, cfg.json_output, lines)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_axioms(cfg: RunConfig) -> int:
    ring = parse_ring_descriptor(cfg.ring_descriptors[0])
    budget = CheckBudget(max_assignments=cfg.budget, seed=cfg.seed)
    reports = run_axiom_suite(ring, budget)
    ok = all(r.passed for r in reports)
    payload = {"ring": ring.label, "reports": [r.to_json() for r in reports], "ok": ok}
    lines = [f"ring: {ring.label}"]
    for r in reports:
        lines.append(f"{r.check}: {r.verdict} ({r.instances} instances)")
        if r.counterexample:
            lines.append(f"  counterexample: {json.dumps(r.counterexample)}")
    lines.append("result: " + ("PASS" if ok else "FAIL"))
    _emit(payload, cfg.json_output, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_equiv(cfg: RunConfig, sentences_arg: str) -> int:
    left = parse_ring_descriptor(cfg.ring_descriptors[0])
    right = parse_ring_descriptor(cfg.ring_descriptors[1])
    if sentences_arg == "default30":
        texts = list(DEFAULT_SENTENCES)
    else:
        texts = load_formula_file(sentences_arg)
    rows = []
    ok = True
    for text in texts:
        sentence = parse_ring_formula(text)
        if free_variables(sentence):
            raise ValueError(f"sentence has free variables: {text}")
        verdicts = (eval_direct(left, sentence), eval_direct(right, sentence),
                    eval_via_fv(left, sentence, max_quantifier_depth=cfg.max_depth),
                    eval_via_fv(right, sentence, max_quantifier_depth=cfg.max_depth))
        agree = len(set(verdicts)) == 1
        ok = ok and agree
        rows.append({"sentence": text, "left": verdicts[0], "right": verdicts[1],
                     "left_fv": verdicts[2], "right_fv": verdicts[3], "ok": agree})
    payload = {"left": left.label, "right": right.label, "sentences": rows, "ok": ok}
    lines = [f"left: {left.label}", f"right: {right.label}"]
    for row in rows:
        mark = "agree" if row["ok"] else "DISAGREE"
        lines.append(f"{mark} [{str(row['left']).lower()}] {row['sentence']}")
    lines.append("result: " + ("PASS" if ok else "FAIL"))
    _emit(payload, cfg.json_output, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_atoms(cfg: RunConfig) -> int:
    ring = parse_ring_descriptor(cfg.ring_descriptors[0])
    stalks = [{"atom": _element_json(st.unit), "size": st.size,
               "connected": is_connected(st)} for st in atom_stalks(ring)]
    payload = {"ring": ring.label, "size": ring.size,
               "idempotents": [_element_json(e) for e in idempotents(ring)],
               "atoms": [_element_json(e) for e in atoms(ring)],
               "stalks": stalks, "connected": is_connected(ring)}
    lines = [f"ring: {ring.label} ({ring.size} elements)",
             "idempotents: " + ", ".join(str(e) for e in idempotents(ring)),
             "atoms: " + ", ".join(str(e) for e in atoms(ring))]
    for st in atom_stalks(ring):
        lines.append(f"stalk at {st.unit}: {st.size} elements, "
                     f"{'connected' if is_connected(st) else 'NOT connected'}")
    lines.append(f"connected: {'yes' if is_connected(ring) else 'no'}")
    _emit(payload, cfg.json_output, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringfv",
        description="Translate ring formulas to Boolean-algebra conditions "
                    "over stalks and verify on finite rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and print it back")
    p.add_argument("formula")
    p.add_argument("--lang", choices=("ring", "bool"), default="ring")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="evaluate a formula on a ring")
    p.add_argument("--ring", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", default="")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("translate", help="translate a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check", help="compare direct and translated evaluation")
    p.add_argument("--ring", required=True)
    p.add_argument("--formula-suite", default="default-depth2",
                   help=f"one of {', '.join(available_suites())}, or @<file>")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("axioms", help="run the axiom checkers on a ring")
    p.add_argument("--ring", required=True)
    p.add_argument("--budget", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("equiv", help="compare two rings on a sentence suite")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--sentences", default="default30",
                   help="a file of sentences, or 'default30'")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("atoms", help="list idempotents, atoms and stalks")
    p.add_argument("--ring", required=True)
    p.add_argument("--json", action="store_true")
    return parser


def _default_depth() -> int:
    depth = int(os.environ.get("FV_MAX_DEPTH", 3))
    if depth < 1:
        raise ValueError("FV_MAX_DEPTH must be >= 1")
    return depth


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(json_output=getattr(args, "json", False),
                        seed=getattr(args, "seed", 0),
                        budget=getattr(args, "budget", 64))
        depth = getattr(args, "max_depth", None)
        cfg.max_depth = depth if depth is not None else _default_depth()
        if cfg.max_depth < 1:
            raise ValueError("depth cap must be >= 1")
        cfg.formula = getattr(args, "formula", None)
        if args.command == "parse":
            return cmd_parse(cfg, args.lang)
        if args.command == "eval":
            ring = parse_ring_descriptor(args.ring)
            cfg.ring_descriptors = [args.ring]
            if args.assign:
                cfg.assignment = parse_assignment(args.assign, ring)
            return cmd_eval(cfg)
        if args.command == "translate":
            return cmd_translate(cfg)
        if args.command == "check":
            cfg.ring_descriptors = [args.ring]
            cfg.suite = args.formula_suite
            return cmd_check(cfg)
        if args.command == "axioms":
            cfg.ring_descriptors = [args.ring]
            return cmd_axioms(cfg)
        if args.command == "equiv":
            cfg.ring_descriptors = [args.left, args.right]
            return cmd_equiv(cfg, args.sentences)
        if args.command == "atoms":
            cfg.ring_descriptors = [args.ring]
            return cmd_atoms(cfg)
        parser.error(f"unknown command {args.command}")
    except (ParseError, RingError, UnboundVariableError, TranslationDepthError,
            TranslationSizeError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
