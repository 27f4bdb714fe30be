"""Regenerate the catalog of connected graphs on 2..8 vertices, one per isomorphism class.

n <= 7 comes from the networkx graph atlas. n = 8 is built by attaching a new vertex
to every connected 7-vertex graph in every possible way (every connected graph has a
non-cut vertex, so this reaches all of them) and deduplicating by isomorphism.

Output format: one graph per line, ``n <hex>`` where bit k of the hex integer marks the
k-th pair (u, v), u < v, in lexicographic order.

    python scripts/gen_small_graphs.py > src/mobigossip/data/connected_small.txt
"""
import itertools
import sys
from collections import defaultdict

import networkx as nx


def encode(g: nx.Graph) -> str:
    n = g.number_of_nodes()
    nodes = sorted(g.nodes())
    code = 0
    for k, (u, v) in enumerate(itertools.combinations(range(n), 2)):
        if g.has_edge(nodes[u], nodes[v]):
            code |= 1 << k
    return f"{n} {code:x}"


def main() -> None:
    by_n = defaultdict(list)
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n >= 2 and nx.is_connected(g):
            by_n[n].append(g)

    buckets = defaultdict(list)
    for base in by_n[7]:
        for r in range(1, 8):
            for nbrs in itertools.combinations(range(7), r):
                g = base.copy()
                g.add_node(7)
                g.add_edges_from((7, v) for v in nbrs)
                key = (g.number_of_edges(), nx.weisfeiler_lehman_graph_hash(g, iterations=3))
                if not any(nx.is_isomorphic(g, h) for h in buckets[key]):
                    buckets[key].append(g)
    by_n[8] = [g for key in sorted(buckets) for g in buckets[key]]

    for n in sorted(by_n):
        print(f"n={n}: {len(by_n[n])}", file=sys.stderr)
        for g in by_n[n]:
            print(encode(g))


if __name__ == "__main__":
    main()
