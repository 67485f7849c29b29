"""How the accuracy schedule drives the per-attempt success rate for k >= 3.

Each level divides its accuracy by ``2s+2`` and the extension step keeps a
start edge with probability proportional to that accuracy, so the chance that
one top-level attempt returns a clique shrinks fast. This prints the numbers
for a few small graphs.
"""

from itertools import combinations

from cliquesampler import Graph, SamplerParams, enumerate_cliques
from cliquesampler.sampler import attempt_query_ceiling, beta_schedule, build_levels


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(1, n + 1), 2)))


def main() -> None:
    for n, k in [(4, 2), (4, 3), (5, 3), (5, 4)]:
        g = complete(n)
        p = SamplerParams.for_graph(g, k, 0.25, tau=1.0, unsafe_params=True)
        top = build_levels(p)
        nk = len(enumerate_cliques(g, k))
        sched = ", ".join(f"b{e['level']}={e['beta']:.2e}" for e in beta_schedule(k, 0.25, n, p.alpha))
        y = top.normalization if k == 2 else top.edge_normalization
        rate = 2 * nk / y
        print(f"K{n}, k={k}: n_k={nk}  {sched}")
        print(f"    success per attempt ~{rate:.2e}; attempts per return ~{1 / rate:.2e}; "
              f"worst-case queries per attempt {attempt_query_ceiling(top)}")


if __name__ == "__main__":
    main()
