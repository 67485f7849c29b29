"""Command-line entry point: ``gen``, ``sample``, ``validate``, ``bench``, ``inspect``.

Exit codes: 0 success or pass, 1 validation failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .errors import CliqueSamplerError, PreconditionError
from .generators import gen_forest_union, gen_planted, verify_planted
from .graph import Oracle, load_graph, store_graph
from .sampler import SamplerParams, fixed, sample_clique
from .validation import (
    GroundTruth,
    check_structural_claims,
    count_cliques,
    degeneracy,
    empirical_dist_test,
    enumerate_cliques,
    exact_layering,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    k: int | None = None
    epsilon: float | None = None
    alpha: float | None = None
    tau: float | None = None
    nk_bar: float | None = None
    c: float = 1.0
    seed: int = 0
    trials: int = 1
    output: str | None = None
    flags: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return fixed(asdict(self))


def _dump(obj) -> str:
    return json.dumps(fixed(obj), sort_keys=True, separators=(",", ":"))


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.fh = sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8", newline="")

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


def _progress(args, done: int, total: int, label: str) -> None:
    if getattr(args, "progress", False):
        print(f"[{label}] {done}/{total}", file=sys.stderr, flush=True)


# ---------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    cfg = RunConfig("gen", seed=args.seed, output=args.out, extra={"mode": args.mode})
    if args.mode == "forest":
        g = gen_forest_union(args.n, args.alpha, args.edges, args.seed)
        cfg.alpha = args.alpha
        cfg.extra.update(n=args.n, edges=args.edges)
        key = None
    elif args.mode == "planted":
        inst = gen_planted(args.nprime, args.alpha, args.k, args.nk, args.seed)
        report = verify_planted(inst)
        if not report["pass"]:
            print("planted instance failed verification: " + "; ".join(report["problems"]),
                  file=sys.stderr)
            return EXIT_FAIL
        g = inst.graph
        cfg.alpha, cfg.k = args.alpha, args.k
        cfg.extra.update(nprime=args.nprime, nk=args.nk)
        key = inst.answer_key()
        key_path = args.key or (args.out + ".key.json" if args.out not in (None, "-") else None)
        if key_path:
            with open(key_path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(fixed(key), sort_keys=True, indent=1) + "\n")
            cfg.extra["key"] = key_path
    else:
        g = load_graph(args.input)
        cfg.graph = args.input
        key = None
    if args.out in (None, "-"):
        store_graph(g, sys.stdout)
    else:
        store_graph(g, args.out)
        summary = {"run_config": cfg.to_dict(), "n": g.n, "m": g.m}
        if key is not None:
            summary["achievedNk"] = key["achievedNk"]
        print(_dump(summary))
    return EXIT_OK


# ---------------------------------------------------------------- sample

def _params_from(args, graph, trial: int) -> SamplerParams:
    return SamplerParams.for_graph(
        graph, args.k, args.epsilon, alpha=args.alpha, nk_bar=args.nkbar, tau=args.tau,
        budget=args.budget, c=args.c, seed=args.seed, stream=trial,
        unsafe_params=args.unsafe_params, figure_literal=args.figure_literal,
        tau_exponent=args.tau_exponent, transcript=args.transcript)


def _sample_worker(payload):
    graph_path, ns, trials = payload
    graph = load_graph(graph_path)
    out = []
    for t in trials:
        params = _params_from(ns, graph, t)
        res = sample_clique(Oracle(graph), params)
        out.append((t, res.to_dict()))
    return out


def _sample_config(args) -> RunConfig:
    return RunConfig("sample", args.graph, args.k, args.epsilon, args.alpha, args.tau, args.nkbar,
                     args.c, args.seed, args.trials, args.out,
                     {"unsafe_params": args.unsafe_params, "figure_literal": args.figure_literal,
                      "transcript": args.transcript},
                     {"budget": args.budget, "tau_exponent": args.tau_exponent, "jobs": args.jobs})


def cmd_sample(args) -> int:
    graph = load_graph(args.graph)
    cfg = _sample_config(args).to_dict()
    _params_from(args, graph, 0).validate()
    chunks = _chunks(range(args.trials), max(1, args.jobs))
    with _Output(args.out) as fh:
        done = 0
        if args.jobs <= 1:
            results = (_sample_worker((args.graph, args, c)) for c in chunks)
        else:
            pool = ProcessPoolExecutor(max_workers=args.jobs)
            results = pool.map(_sample_worker, [(args.graph, args, c) for c in chunks])
        for batch in results:
            for trial, rec in batch:
                rec["trial"] = trial
                rec["run_config"] = cfg
                fh.write(_dump(rec) + "\n")
                done += 1
            _progress(args, done, args.trials, "sample")
        if args.jobs > 1:
            pool.shutdown()
    return EXIT_OK


def _chunks(seq, jobs: int, size: int = 200):
    items = list(seq)
    size = max(1, min(size, math.ceil(len(items) / jobs) if items else 1))
    return [items[i:i + size] for i in range(0, len(items), size)]


# ---------------------------------------------------------------- validate

def _read_counts(args, cliques) -> tuple[list[int], list[str]]:
    index = {tuple(c.sorted_ids()): i for i, c in enumerate(cliques)}
    counts = [0] * len(cliques)
    invalid = []

    def add(ids, n=1):
        key = tuple(sorted(int(v) for v in ids))
        if key not in index:
            invalid.append(list(key))
            return
        counts[index[key]] += n

    if args.samples:
        with open(args.samples, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec.get("clique"):
                    add(rec["clique"])
    if args.counts:
        with open(args.counts, encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict) and "counts" in data:
            data = data["counts"]
        if isinstance(data, dict):
            for key, n in data.items():
                add(key.replace(",", " ").split(), int(n))
        else:
            for item in data:
                add(item["clique"], int(item["count"]))
    return counts, invalid


def cmd_validate(args) -> int:
    if not args.graph or not os.path.exists(args.graph):
        print("validate needs an existing --graph file for ground truth", file=sys.stderr)
        return EXIT_USAGE
    if not (args.samples or args.counts):
        print("validate needs --samples or --counts", file=sys.stderr)
        return EXIT_USAGE
    graph = load_graph(args.graph)
    cliques = enumerate_cliques(graph, args.k)
    if not cliques:
        print(f"graph has no {args.k}-cliques; nothing to validate against", file=sys.stderr)
        return EXIT_USAGE
    counts, invalid = _read_counts(args, cliques)
    cfg = RunConfig("validate", args.graph, args.k, args.epsilon, seed=0,
                    extra={"confidence": args.confidence, "samples": args.samples,
                           "counts": args.counts})
    try:
        report = empirical_dist_test(counts, len(cliques), args.epsilon, args.confidence)
    except PreconditionError as exc:
        print(f"validate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = report.to_dict()
    out["cliques"] = [c.sorted_ids() for c in cliques]
    out["invalid_returns"] = invalid
    out["pass"] = report.passed and not invalid
    out["run_config"] = cfg.to_dict()
    with _Output(args.out) as fh:
        fh.write(_dump(out) + "\n")
    return EXIT_OK if out["pass"] else EXIT_FAIL


# ---------------------------------------------------------------- bench

BENCH_COLUMNS = ["graph", "tau", "trials", "queries_mean", "queries_p95", "queries_max",
                 "success_rate", "target_hits", "queries_to_target_median", "wall_time_s"]


def _percentile(values: list[float], q: float) -> float:
    if not values:
        return float("nan")
    s = sorted(values)
    idx = min(len(s) - 1, max(0, math.ceil(q * len(s)) - 1))
    return float(s[idx])


def _median(values: list[float]) -> float | None:
    if not values:
        return None
    s = sorted(values)
    mid = len(s) // 2
    return float(s[mid]) if len(s) % 2 else (s[mid - 1] + s[mid]) / 2


def _bench_point(graph, path: str, key: dict | None, tau: float, args) -> dict:
    target = tuple(key["hidden"]) if key else None
    queries, successes, to_target = [], 0, []
    start = time.perf_counter()
    for t in range(args.trials):
        spent = 0
        hit = False
        for call in range(args.max_calls if target else 1):
            params = SamplerParams.for_graph(
                graph, args.k, args.epsilon, alpha=args.alpha, nk_bar=args.nkbar, tau=tau,
                c=args.c, budget=args.budget, seed=args.seed,
                stream=t * max(1, args.max_calls) + call, unsafe_params=args.unsafe_params,
                figure_literal=args.figure_literal)
            res = sample_clique(Oracle(graph), params)
            spent += res.stats.total()
            if call == 0:
                queries.append(res.stats.total())
                successes += res.clique is not None
            if target and res.clique is not None and tuple(res.clique) == target:
                hit = True
                break
        if hit:
            to_target.append(spent)
        _progress(args, t + 1, args.trials, f"bench tau={tau:g}")
    wall = time.perf_counter() - start
    med = _median(to_target)
    return {"graph": os.path.basename(path), "tau": f"{tau:.6f}", "trials": args.trials,
            "queries_mean": f"{(sum(queries) / len(queries)) if queries else float('nan'):.6f}",
            "queries_p95": f"{_percentile(queries, 0.95):.6f}",
            "queries_max": f"{max(queries) if queries else float('nan'):.6f}",
            "success_rate": f"{successes / args.trials if args.trials else float('nan'):.6f}",
            "target_hits": len(to_target) if target else "",
            "queries_to_target_median": "" if med is None else f"{med:.6f}",
            "wall_time_s": f"{wall:.6f}" if args.timing else ""}


def cmd_bench(args) -> int:
    taus = [float(t) for t in args.taus.split(",") if t.strip()] if args.taus else []
    keys = args.key or []
    if keys and len(keys) != len(args.graph):
        print("pass one --key per --graph, or none", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig("bench", ",".join(args.graph), args.k, args.epsilon, args.alpha, None,
                    args.nkbar, args.c, args.seed, args.trials, args.out,
                    {"unsafe_params": args.unsafe_params, "figure_literal": args.figure_literal,
                     "timing": args.timing},
                    {"taus": taus, "max_calls": args.max_calls, "budget": args.budget})
    # The CSV stays pure (an empty sweep is exactly the header), so the run
    # config goes to a sidecar file, or to stderr when writing to stdout.
    if args.out in (None, "-"):
        print("run_config " + _dump(cfg.to_dict()), file=sys.stderr)
    else:
        with open(args.out + ".run_config.json", "w", encoding="utf-8") as side:
            side.write(_dump(cfg.to_dict()) + "\n")
    with _Output(args.out) as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for gi, path in enumerate(args.graph):
            if not taus:
                break
            graph = load_graph(path)
            key = None
            if keys:
                with open(keys[gi], encoding="utf-8") as kf:
                    key = json.load(kf)
            for tau in taus:
                writer.writerow(_bench_point(graph, path, key, tau, args))
                fh.flush()
    return EXIT_OK


# ---------------------------------------------------------------- inspect

def cmd_inspect(args) -> int:
    graph = load_graph(args.graph)
    alpha = args.alpha if args.alpha is not None else max(1, degeneracy(graph))
    gt = GroundTruth.build(graph, args.k)
    summary = gt.summary()
    out = {"n": graph.n, "m": graph.m, "degeneracy": gt.degeneracy, "alpha": alpha}
    out.update(summary["clique_counts"])
    out["H"] = summary["h"]
    beta = args.beta
    tau = args.tau if args.tau is not None else 4 * alpha / beta
    depth = {}
    for i, h in gt.h.items():
        lay = exact_layering(h.adjacency, [q for q, d in h.d_tilde.items() if d <= tau], beta)
        depth[f"H_{i}"] = lay.depth
    out["depth"] = depth
    out["layering"] = {"tau": tau, "beta": beta, "start_set": "d_tilde <= tau"}
    out["structural_claims"] = check_structural_claims(graph, alpha, args.k, gt=gt)
    out["run_config"] = RunConfig("inspect", args.graph, args.k, alpha=alpha, tau=tau,
                                  extra={"beta": beta}).to_dict()
    with _Output(args.out) as fh:
        fh.write(json.dumps(fixed(out), sort_keys=True, indent=1) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--alpha", type=float, default=None, help="arboricity bound (default: degeneracy)")
    p.add_argument("--nkbar", type=float, default=None, help="clique-count estimate (default: exact count)")
    p.add_argument("--c", type=float, default=1.0, help="budget exponent constant")
    p.add_argument("--budget", type=int, default=None, help="override the query budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unsafe-params", action="store_true", help="waive the regime preconditions")
    p.add_argument("--figure-literal", action="store_true",
                   help="use the unbalanced start-edge extension constants")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliquesampler", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate or normalize a graph file")
    g.add_argument("mode", choices=["forest", "planted", "passthrough"])
    g.add_argument("--n", type=int)
    g.add_argument("--alpha", type=int)
    g.add_argument("--edges", type=int, default=None)
    g.add_argument("--nprime", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--nk", type=int, default=1)
    g.add_argument("--in", dest="input")
    g.add_argument("--key", default=None, help="answer-key path for planted instances")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")

    s = sub.add_parser("sample", help="draw k-cliques; one JSON record per trial")
    s.add_argument("--graph", required=True)
    _add_sampling(s)
    s.add_argument("--tau", type=float, default=None)
    s.add_argument("--tau-exponent", choices=["balance", "inverse-k"], default="balance")
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--transcript", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--progress", action="store_true")
    s.add_argument("--out", default="-")

    v = sub.add_parser("validate", help="test returned cliques against exact uniformity")
    v.add_argument("--graph")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--epsilon", type=float, default=0.25)
    v.add_argument("--confidence", type=float, default=0.999)
    v.add_argument("--samples", help="JSON-lines output of the sample command")
    v.add_argument("--counts", help="JSON counts: [{clique, count}] or {'1,2,3': count}")
    v.add_argument("--out", default="-")

    b = sub.add_parser("bench", help="sweep tau and report query statistics as CSV")
    b.add_argument("--graph", action="append", required=True)
    b.add_argument("--key", action="append", help="planted answer key, one per --graph")
    _add_sampling(b)
    b.add_argument("--taus", default="1,2,4")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--max-calls", type=int, default=1,
                   help="sampler calls per trial while waiting for the target clique")
    b.add_argument("--timing", action="store_true", help="fill the wall_time_s column")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--progress", action="store_true")
    b.add_argument("--out", default="-")

    i = sub.add_parser("inspect", help="ground-truth summary of a graph")
    i.add_argument("--graph", required=True)
    i.add_argument("--k", type=int, default=3)
    i.add_argument("--alpha", type=float, default=None)
    i.add_argument("--tau", type=float, default=None)
    i.add_argument("--beta", type=float, default=0.25)
    i.add_argument("--out", default="-")
    return ap


COMMANDS = {"gen": cmd_gen, "sample": cmd_sample, "validate": cmd_validate,
            "bench": cmd_bench, "inspect": cmd_inspect}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen":
        need = {"forest": ["n", "alpha"], "planted": ["nprime", "alpha", "k"],
                "passthrough": ["input"]}[args.mode]
        missing = [f"--{m if m != 'input' else 'in'}" for m in need if getattr(args, m) is None]
        if missing:
            parser.error(f"gen {args.mode} requires {', '.join(missing)}")
    try:
        return COMMANDS[args.command](args)
    except (CliqueSamplerError, OSError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
