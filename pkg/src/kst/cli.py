"""Command line front end.

Every subcommand reads a space file (JSON) where one is needed and prints
either human-readable text or machine-readable JSON (``--format json``).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import KstError
from . import base_surmise, builder, projection, strings as strings_mod
from .assessment import (
    StopRule,
    extra_problem_metrics,
    make_responder,
    parallel_assessment,
    run_assessment,
)
from .io_service import load_space, space_to_doc, summarize_space, serve
from .probabilistic import ResponseParams
from .structures import Domain, check_l1_l2, classify, fringes, state_from_fringes


def _decode_all(domain, masks):
    return [sorted(domain.decode(k)) for k in masks]


def _emit(args, payload, text_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)
    return 0


def _items_arg(raw):
    return [q for q in raw.split(",") if q]


def cmd_validate(args):
    structure, _ = load_space(args.space)
    payload = summarize_space(structure)
    payload["valid"] = True
    return _emit(args, payload, [f"ok: {len(structure)} states over "
                                 f"{structure.domain.size} items"])


def cmd_classify(args):
    structure, _ = load_space(args.space)
    flags = classify(structure)
    (l1, w1), (l2, w2) = check_l1_l2(structure)
    payload = summarize_space(structure)
    payload.update({
        "l1": l1, "l1_witness": w1,
        "l2": l2, "l2_witness": w2,
    })
    lines = [f"{name}: {getattr(flags, name)}" for name in (
        "union_closed", "intersection_closed", "well_graded",
        "accessible", "discriminative", "learning_space")]
    lines.append(f"L1 (smoothness): {'pass' if l1 else f'fail, witness {w1}'}")
    lines.append(f"L2 (consistency): {'pass' if l2 else f'fail, witness {w2}'}")
    return _emit(args, payload, lines)


def cmd_base(args):
    structure, _ = load_space(args.space)
    sets = _decode_all(structure.domain, base_surmise.base(structure))
    return _emit(args, {"base": sets}, [" ".join(s) or "{}" for s in sets])


def cmd_atoms(args):
    structure, _ = load_space(args.space)
    items = [args.item] if args.item else list(structure.domain.items)
    table = {q: _decode_all(structure.domain, base_surmise.atoms_at(structure, q))
             for q in items}
    lines = [f"{q}: " + "; ".join(",".join(a) for a in atoms)
             for q, atoms in table.items()]
    return _emit(args, {"atoms": table}, lines)


def cmd_fringes(args):
    structure, _ = load_space(args.space)
    mask = structure.domain.encode(_items_arg(args.state))
    fr = fringes(structure, mask)
    d = structure.domain
    payload = {"state": sorted(d.decode(mask)),
               "inner": sorted(d.decode(fr.inner)),
               "outer": sorted(d.decode(fr.outer))}
    return _emit(args, payload, [
        f"inner fringe: {','.join(payload['inner']) or '-'}",
        f"outer fringe: {','.join(payload['outer']) or '-'}",
    ])


def cmd_project(args):
    structure, _ = load_space(args.space)
    result = projection.project(structure, _items_arg(args.items))
    sets = _decode_all(result.sub_domain, result.structure.states)
    return _emit(args, {"domain": list(result.sub_domain.items), "states": sets},
                 [" ".join(s) or "{}" for s in sets])


def cmd_children(args):
    structure, _ = load_space(args.space)
    classes = projection.partition_classes(structure, _items_arg(args.items))
    payload = []
    lines = []
    for c in classes:
        entry = {
            "trace": sorted(c.trace),
            "members": _decode_all(structure.domain, c.members),
            "common_intersection": sorted(c.common_intersection),
            "child": _decode_all(c.child_domain, c.child),
        }
        payload.append(entry)
        lines.append(f"trace {{{','.join(entry['trace'])}}}: child "
                     + "; ".join(",".join(s) or "{}" for s in entry["child"]))
    return _emit(args, {"classes": payload}, lines)


def cmd_strings(args):
    structure, _ = load_space(args.space)
    words, total = strings_mod.learning_strings(structure, limit=args.limit)
    payload = {"count": total, "strings": ["".join(w) for w in words]}
    return _emit(args, payload,
                 [f"{total} learning strings"] + ["".join(w) for w in words])


def cmd_encode(args):
    domain = Domain(_items_arg(args.domain))
    space = strings_mod.encode_space_from_strings(
        domain, [_items_arg(s) for s in args.string])
    doc = space_to_doc(space)
    return _emit(args, doc, [" ".join(s) or "{}" for s in doc["states"]])


def cmd_cover(args):
    structure, _ = load_space(args.space)
    cover = strings_mod.greedy_string_cover(structure)
    payload = {"strings": ["".join(w) for w in cover]}
    return _emit(args, payload, payload["strings"])


def _stop_rule(args):
    return StopRule(max_prob_threshold=args.threshold, max_trials=args.max_trials)


def cmd_assess_sim(args):
    structure, _ = load_space(args.space)
    master = random.Random(args.seed)
    hits = 0
    trials_used = []
    for _ in range(args.runs):
        latent = master.choice(structure.states)
        responder = make_responder(structure, latent, beta=args.beta)
        final, _, transcript = run_assessment(
            structure, None, responder, stop=_stop_rule(args),
            zeta=args.zeta, seed=master.randrange(2 ** 32))
        hits += final == latent
        trials_used.append(len(transcript))
    rate = hits / args.runs
    payload = {"runs": args.runs, "recovered": hits, "recovery_rate": rate,
               "mean_trials": sum(trials_used) / len(trials_used)}
    return _emit(args, payload, [
        f"recovery {hits}/{args.runs} = {rate:.1%}, "
        f"mean trials {payload['mean_trials']:.1f}"])


def cmd_parallel_sim(args):
    structure, _ = load_space(args.space)
    blocks = [_items_arg(b) for b in args.blocks.split(";") if b]
    master = random.Random(args.seed)
    hits = 0
    for _ in range(args.runs):
        latent = master.choice(structure.states)
        responder = make_responder(structure, latent, beta=args.beta)
        final, _ = parallel_assessment(
            structure, blocks, responder, stop=_stop_rule(args),
            zeta=args.zeta, seed=master.randrange(2 ** 32))
        hits += final == latent
    rate = hits / args.runs
    payload = {"runs": args.runs, "recovered": hits, "recovery_rate": rate,
               "blocks": blocks}
    return _emit(args, payload, [f"recovery {hits}/{args.runs} = {rate:.1%}"])


def cmd_extra_problem(args):
    structure, _ = load_space(args.space)
    params = ResponseParams(
        beta={q: args.beta for q in structure.domain.items}) if args.beta else None
    table, phi = extra_problem_metrics(structure, args.runs, params,
                                       seed=args.seed, stop=_stop_rule(args),
                                       zeta=args.zeta)
    payload = {"table": [list(table[0]), list(table[1])], "phi": phi}
    (x, y), (z, w) = table
    return _emit(args, payload, [
        f"              correct  false",
        f"in state     {x:8d} {y:6d}",
        f"not in state {z:8d} {w:6d}",
        f"phi = {phi:.4f}",
    ])


def cmd_build_query(args):
    if args.oracle == "truthful":
        reference, _ = load_space(args.oracle_space)
        domain = reference.domain
        oracle = builder.truthful_oracle(reference)
    elif args.oracle == "data":
        domain = Domain(_items_arg(args.domain))
        with open(args.transcripts, "r", encoding="utf-8") as fh:
            transcripts = [json.loads(line) for line in fh if line.strip()]
        oracle = builder.data_oracle_from_transcripts(
            transcripts, args.theta, min_count=args.min_count)
    else:  # interactive over stdin
        domain = Domain(_items_arg(args.domain))

        def ask(d, a_mask, q):
            ants = ",".join(d.decode(a_mask))
            sys.stderr.write(
                f"does failing all of {{{ants}}} entail failing {q}? [y/n] ")
            sys.stderr.flush()
            return sys.stdin.readline().strip().lower().startswith("y")

        oracle = builder.QueryOracle("interactive", ask)
    if args.routine == "adapted":
        state = builder.adapted_query_run(domain, oracle,
                                          block_limit=args.block_limit or 2)
    else:
        state = builder.adjusted_query_run(domain, oracle,
                                           block_limit=args.block_limit)
    doc = space_to_doc(state.current)
    doc["queries_asked"] = sum(1 for rec in oracle.answered if rec[3] == "asked")
    return _emit(args, doc, [
        f"{len(state.current)} states over {domain.size} items, "
        f"{doc['queries_asked']} queries asked"])


def cmd_serve(args):
    serve(port=args.port, data_dir=args.data_dir)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kst", description="knowledge space toolkit")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **spaces):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        return p

    for name, fn in (("validate", cmd_validate), ("classify", cmd_classify),
                     ("base", cmd_base), ("cover", cmd_cover)):
        add(name, fn).add_argument("space")

    p = add("atoms", cmd_atoms)
    p.add_argument("space")
    p.add_argument("--item")

    p = add("fringes", cmd_fringes)
    p.add_argument("space")
    p.add_argument("--state", required=True, help="comma separated items")

    for name, fn in (("project", cmd_project), ("children", cmd_children)):
        p = add(name, fn)
        p.add_argument("space")
        p.add_argument("--items", required=True, help="comma separated subdomain")

    p = add("strings", cmd_strings)
    p.add_argument("space")
    p.add_argument("--limit", type=int, default=1000)

    p = add("encode", cmd_encode)
    p.add_argument("--domain", required=True, help="comma separated items")
    p.add_argument("--string", action="append", required=True,
                   help="comma separated permutation; repeatable")

    def sim_flags(p):
        p.add_argument("--runs", type=int, default=200)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--zeta", type=float, default=2.0)
        p.add_argument("--threshold", type=float, default=0.95)
        p.add_argument("--max-trials", type=int, default=200)

    p = add("assess-sim", cmd_assess_sim)
    p.add_argument("space")
    sim_flags(p)

    p = add("parallel-sim", cmd_parallel_sim)
    p.add_argument("space")
    p.add_argument("--blocks", required=True,
                   help="semicolon separated comma lists, e.g. a,b;c,d")
    sim_flags(p)

    p = add("extra-problem", cmd_extra_problem)
    p.add_argument("space")
    sim_flags(p)
    p.set_defaults(runs=2000)

    p = add("build-query", cmd_build_query)
    p.add_argument("--routine", choices=("adapted", "adjusted"), default="adjusted")
    p.add_argument("--oracle", choices=("truthful", "data", "interactive"),
                   required=True)
    p.add_argument("--oracle-space", help="space file for the truthful oracle")
    p.add_argument("--domain", help="comma separated items (data/interactive)")
    p.add_argument("--transcripts", help="JSONL of item->0/1 response rows")
    p.add_argument("--theta", type=float, default=0.9)
    p.add_argument("--min-count", type=int, default=30)
    p.add_argument("--block-limit", type=int)

    p = add("serve", cmd_serve)
    p.add_argument("--port", type=int)
    p.add_argument("--data-dir")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (KstError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
