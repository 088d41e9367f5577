"""Command-line front end.

Payloads go to stdout or --out; diagnostics go to stderr.  The preprocess
subcommand borrows the SAT solver exit-code convention: 0 for an ordinary
reduction, 10 when preprocessing alone proves satisfiability (empty output),
20 when it proves unsatisfiability (output is the single empty clause).
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from pathlib import Path

from .autgrp import IncompleteSearchError, find_automorphisms, project_to_literals
from .cnf import DimacsParseError, Formula, parse_dimacs, write_dimacs
from .gen import PhpSpec, gen_php, gen_random
from .groups import schreier_sims
from .metrics import compute_metrics
from .model_graph import build_model_graph, color_refinement, export_graph, prune_discrete
from .perms import (GeneratorParseError, is_semantic_symmetry, is_syntactic_symmetry,
                    parse_generators, write_generators)
from .transforms import (PipelineConfig, ReplayError, is_conflict, parse_trace,
                         preprocess_pipeline, replay_trace, serialize_trace)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_INCOMPLETE = 3


def _read_formula(path: str) -> Formula:
    return parse_dimacs(Path(path).read_text())


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload)


def _preprocess_code(f: Formula) -> int:
    if not f.clauses:
        return EXIT_SAT
    if is_conflict(f):
        return EXIT_UNSAT
    return EXIT_OK


def _preprocess_one(task: tuple[str, str, int]) -> tuple[str, int, str]:
    """Worker for --jobs fan-out; deterministic per file."""
    path, out_dir, passes = task
    try:
        f = _read_formula(path)
        result = preprocess_pipeline(f, PipelineConfig(max_passes=passes))
        target = Path(out_dir) / (Path(path).stem + ".pre.cnf")
        target.write_text(write_dimacs(result.output))
        code = _preprocess_code(result.output)
        return path, code, f"{len(f.clauses)} -> {len(result.output.clauses)} clauses"
    except (OSError, DimacsParseError) as exc:
        return path, EXIT_ERROR, str(exc)


def _cmd_preprocess(args) -> int:
    if len(args.inputs) > 1:
        if args.out is None:
            print("error: multiple inputs require --out DIRECTORY", file=sys.stderr)
            return EXIT_ERROR
        if args.trace is not None:
            print("error: --trace is only available for a single input", file=sys.stderr)
            return EXIT_ERROR
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        tasks = [(path, str(out_dir), args.passes) for path in args.inputs]
        if args.jobs > 1:
            with multiprocessing.Pool(args.jobs) as pool:
                results = pool.map(_preprocess_one, tasks)
        else:
            results = [_preprocess_one(t) for t in tasks]
        failed = False
        for path, code, message in results:
            status = {EXIT_OK: "ok", EXIT_SAT: "sat", EXIT_UNSAT: "unsat"}.get(code, "error")
            print(f"{path}: {status} ({message})", file=sys.stderr)
            failed = failed or status == "error"
        return EXIT_ERROR if failed else EXIT_OK

    f = _read_formula(args.inputs[0])
    result = preprocess_pipeline(f, PipelineConfig(max_passes=args.passes))
    _emit(write_dimacs(result.output), args.out)
    if args.trace is not None:
        Path(args.trace).write_text(serialize_trace(result.trace))
    print(f"{len(f.clauses)} -> {len(result.output.clauses)} clauses, "
          f"{len(result.trace)} steps", file=sys.stderr)
    return _preprocess_code(result.output)


def _cmd_graph(args) -> int:
    f = _read_formula(args.input)
    g = build_model_graph(f)
    if args.prune:
        g = prune_discrete(g, color_refinement(g))
    _emit(export_graph(g), args.out)
    return EXIT_OK


def _detect_group(f: Formula, budget: int):
    g = build_model_graph(f)
    perms, stats = find_automorphisms(g, node_limit=budget)
    gens = [project_to_literals(f, g, p) for p in perms]
    return schreier_sims(gens, domain_vars=f.variables()), stats


def _cmd_detect(args) -> int:
    f = _read_formula(args.input)
    g = build_model_graph(f)
    try:
        perms, stats = find_automorphisms(g, node_limit=args.budget)
    except IncompleteSearchError as exc:
        gens = [project_to_literals(f, g, p) for p in exc.generators]
        payload = "c INCOMPLETE\n" + write_generators(gens)
        _emit(payload, args.out)
        print(f"error: {exc}; wrote {len(gens)} partial generator(s)", file=sys.stderr)
        return EXIT_INCOMPLETE
    gens = [project_to_literals(f, g, p) for p in perms]
    group = schreier_sims(gens, domain_vars=f.variables())
    payload = f"c order {group.order()}\n" + write_generators(group.generators)
    _emit(payload, args.out)
    print(f"order {group.order()} ({stats.nodes_explored} nodes, "
          f"{stats.generators_found} generators)", file=sys.stderr)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    orig = _read_formula(args.original)
    pre = _read_formula(args.preprocessed)
    if not pre.literals() <= orig.literals():
        print("error: preprocessed formula mentions literals outside the original",
              file=sys.stderr)
        return EXIT_ERROR
    g_orig, _ = _detect_group(orig, args.budget)
    g_pre, _ = _detect_group(pre, args.budget)
    metrics = compute_metrics(orig, pre, g_orig, g_pre)
    sys.stdout.write(metrics.to_json() + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    f = _read_formula(args.input)
    ok = True
    if args.generators is not None:
        try:
            gens = parse_generators(Path(args.generators).read_text())
        except GeneratorParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        domain = {abs(l) for l in f.literals()}
        for i, phi in enumerate(gens, start=1):
            lifted = phi.lifted(domain | set(phi.domain_vars))
            syn = is_syntactic_symmetry(f, lifted)
            line = f"gen {i}: {'ok' if syn else 'FAIL'} syntactic"
            ok = ok and syn
            if args.semantic is not None:
                sem = is_semantic_symmetry(f, lifted, max_vars=args.semantic)
                line += f", {'ok' if sem else 'FAIL'} semantic"
                ok = ok and sem
            print(line)
    if args.trace is not None:
        if args.reduced is None:
            print("error: --trace requires --reduced", file=sys.stderr)
            return EXIT_ERROR
        expected = _read_formula(args.reduced)
        try:
            replayed = replay_trace(parse_trace(Path(args.trace).read_text()), f)
        except ReplayError as exc:
            print(f"trace: FAIL ({exc})")
            return EXIT_ERROR
        match = replayed == expected
        print(f"trace: {'ok' if match else 'FAIL (replay does not match reduced formula)'}")
        ok = ok and match
    if args.generators is None and args.trace is None:
        print("error: nothing to verify; pass a generator file and/or --trace",
              file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if ok else EXIT_ERROR


def _cmd_gen(args) -> int:
    if args.family == "php":
        f = gen_php(PhpSpec(args.pigeons, args.holes))
    else:
        f = gen_random(args.vars, args.clauses, args.width, args.seed)
    _emit(write_dimacs(f), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sympre",
        description="Symmetry-preserving CNF preprocessing and symmetry detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="run the symmetry-preserving pipeline")
    p.add_argument("inputs", nargs="+", metavar="in.cnf")
    p.add_argument("--out", help="output file (or directory with multiple inputs)")
    p.add_argument("--trace", help="write the transformation trace to this file")
    p.add_argument("--passes", type=int, default=10, help="pipeline pass cap")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for many inputs")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("graph", help="export the model graph")
    p.add_argument("input", metavar="in.cnf")
    p.add_argument("--prune", action="store_true",
                   help="refine and drop discrete-color vertices before export")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("detect", help="detect syntactic symmetries")
    p.add_argument("input", metavar="in.cnf")
    p.add_argument("--budget", type=int, default=1_000_000, help="search node budget")
    p.add_argument("--out", help="generator output file")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("metrics", help="reducible/hidden symmetry metrics for a pair")
    p.add_argument("original", metavar="orig.cnf")
    p.add_argument("preprocessed", metavar="pre.cnf")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("verify", help="check generators and/or audit a trace")
    p.add_argument("input", metavar="in.cnf")
    p.add_argument("generators", nargs="?", metavar="gens.txt")
    p.add_argument("--semantic", type=int, metavar="MAXVARS",
                   help="also run the semantic oracle up to this many variables")
    p.add_argument("--trace", help="trace file to replay against the input")
    p.add_argument("--reduced", help="expected replay result (DIMACS)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="emit benchmark formulas")
    gen_sub = p.add_subparsers(dest="family", required=True)
    php = gen_sub.add_parser("php")
    php.add_argument("pigeons", type=int)
    php.add_argument("holes", type=int)
    php.add_argument("--out")
    php.set_defaults(func=_cmd_gen)
    rnd = gen_sub.add_parser("random")
    rnd.add_argument("--vars", type=int, required=True)
    rnd.add_argument("--clauses", type=int, required=True)
    rnd.add_argument("--width", type=int, default=3)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--out")
    rnd.set_defaults(func=_cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimacsParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
