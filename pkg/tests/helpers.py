"""Shared test utilities: instance randomization and oracle adapters."""

from __future__ import annotations

import random

from tragame import (
    AccessCategory,
    E2eFlow,
    HearabilityGraph,
    NetworkInstance,
    Route,
)


def instance_parts(instance: NetworkInstance):
    """Decompose an instance into the plain lists the oracles consume."""
    n = instance.node_count
    edges = [tuple(e) for e in instance.graph.undirected_edges]
    routes = [list(flow.route.nodes) for flow in instance.flows]
    intrinsic_vo = [
        flow.intrinsic_ac is AccessCategory.VO for flow in instance.flows
    ]
    return n, edges, routes, intrinsic_vo


def _simple_paths_from(graph: HearabilityGraph, start: int):
    """All simple paths of >= 2 nodes starting at ``start``, by DFS."""
    paths = []

    def extend(walk):
        for nxt in graph.neighbors(walk[-1]):
            if nxt in walk:
                continue
            found = walk + [nxt]
            paths.append(tuple(found))
            extend(found)

    extend([start])
    return paths


def small_instance_corpus():
    """Every <= 3-node instance: all connected labeled graphs, all route
    combinations (one flow per node over its simple paths), all AC maps."""
    from itertools import product

    graph_edge_sets = [
        (2, [(0, 1)]),
        (3, [(0, 1), (1, 2)]),
        (3, [(0, 1), (0, 2)]),
        (3, [(0, 2), (1, 2)]),
        (3, [(0, 1), (0, 2), (1, 2)]),
    ]
    for n, edges in graph_edge_sets:
        graph = HearabilityGraph.from_undirected_edges(n, edges)
        per_node_paths = [_simple_paths_from(graph, node) for node in range(n)]
        for routes in product(*per_node_paths):
            for ac_bits in range(2**n):
                flows = tuple(
                    E2eFlow(
                        route=Route(routes[i]),
                        intrinsic_ac=(
                            AccessCategory.VO
                            if ac_bits >> i & 1
                            else AccessCategory.BE
                        ),
                        flow_id=i,
                    )
                    for i in range(n)
                )
                yield NetworkInstance(graph=graph, flows=flows)


def random_instance(rng: random.Random, min_nodes: int = 2, max_nodes: int = 6):
    """Random connected instance with one sourced flow per node.

    A random spanning tree guarantees connectivity; extra edges appear
    with probability 0.3.  Routes are random self-avoiding walks of 1-4
    hops (shorter when the walk gets stuck).
    """
    n = rng.randint(min_nodes, max_nodes)
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < 0.3:
                edges.add((i, j))
    graph = HearabilityGraph.from_undirected_edges(n, sorted(edges))
    flows = []
    for start in range(n):
        target_hops = rng.randint(1, min(4, n - 1))
        walk = [start]
        while len(walk) <= target_hops:
            options = [v for v in graph.neighbors(walk[-1]) if v not in walk]
            if not options:
                break
            walk.append(rng.choice(options))
        ac = AccessCategory.VO if rng.random() < 0.5 else AccessCategory.BE
        flows.append(
            E2eFlow(route=Route(tuple(walk)), intrinsic_ac=ac, flow_id=start)
        )
    instance = NetworkInstance(graph=graph, flows=tuple(flows))
    instance.ensure_valid()
    return instance
