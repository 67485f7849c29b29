"""Walk through the library on the K4-plus-pendant graph.

Run with ``python demos/quickstart.py``.
"""

from collections import Counter

from cliquesampler import (
    GroundTruth,
    Oracle,
    SamplerParams,
    assigned_pair,
    enumerate_cliques,
    loads_graph,
    sample_clique,
)

G1 = "5 7\n1 2\n1 3\n1 4\n1 5\n2 3\n2 4\n3 4\n"


def main() -> None:
    g = loads_graph(G1)
    gt = GroundTruth.build(g, 3)
    print("clique counts:", gt.summary()["clique_counts"])

    for c in enumerate_cliques(g, 3):
        q1, q2 = assigned_pair(c)
        print(f"triangle {sorted(c.vertices)} -> assigned to {sorted(q1.vertices)}, {sorted(q2.vertices)}")

    # k = 2 runs the base edge sampler; every edge should come back about equally often.
    counts = Counter()
    queries = 0
    for stream in range(300):
        p = SamplerParams.for_graph(g, 2, 0.25, budget=10 ** 6, stream=stream, unsafe_params=True)
        out = sample_clique(Oracle(g), p)
        queries += out.stats.total()
        if out.clique:
            counts[tuple(out.clique)] += 1
    print("edge returns:", dict(sorted(counts.items())))
    print(f"mean queries per returned edge: {queries / max(1, sum(counts.values())):.0f}")


if __name__ == "__main__":
    main()
