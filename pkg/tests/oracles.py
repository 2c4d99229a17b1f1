"""Independent brute-force oracles used to cross-check the library.

Everything here is written directly from first principles and kept free of
library internals: hop access categories are re-derived with a plain route
walk, interference neighborhoods come from networkx BFS, and equilibrium
membership is decided by exhaustive scans over the full profile space.
Slow on purpose; only suitable for small instances.
"""

from __future__ import annotations

from math import inf

import networkx as nx


def oracle_hop_acs(routes, intrinsic_vo, mask):
    """Per-flow list of (transmitting node, is_vo) under attacker bitmask.

    A source in the attacker set promotes its own BE traffic to VO; a
    transit attacker demotes incoming VO to BE; the destination transmits
    nothing.  One entry per route node except the last.
    """
    out = []
    for route, is_vo in zip(routes, intrinsic_vo):
        src = route[0]
        vo = is_vo or bool(mask >> src & 1)
        hops = [(src, vo)]
        for node in route[1:-1]:
            if vo and mask >> node & 1:
                vo = False
            hops.append((node, vo))
        out.append(hops)
    return out


def oracle_competitors(n, edges, routes, intrinsic_vo, mask, flow_id, node, radius):
    """Competitor triples for one hop entry, via networkx BFS distances."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    dist = nx.single_source_shortest_path_length(g, node)
    hops = oracle_hop_acs(routes, intrinsic_vo, mask)
    found = set()
    for fid, entries in enumerate(hops):
        for tx, vo in entries:
            if (fid, tx) == (flow_id, node):
                continue
            if dist.get(tx, inf) <= radius:
                found.add((fid, tx, "VO" if vo else "BE"))
    return found


def oracle_node_costs(n, edges, routes, intrinsic_vo, mask, radius=2):
    """Node cost vector recomputed hop by hop from the stated formulas.

    Rank of a hop: 1 + VO competitors, plus BE competitors if the hop
    itself transmits BE.  Flow aggregation keys on the intrinsic class
    (VO: sum of ranks, BE: max); node cost sums its sourced flows.
    """
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    dist = dict(nx.all_pairs_shortest_path_length(g))
    hops = oracle_hop_acs(routes, intrinsic_vo, mask)
    all_entries = [
        (fid, tx, vo)
        for fid, entries in enumerate(hops)
        for tx, vo in entries
    ]
    costs = [0] * n
    for fid, entries in enumerate(hops):
        ranks = []
        for tx, vo in entries:
            n_vo = 0
            n_be = 0
            for ofid, otx, ovo in all_entries:
                if (ofid, otx) == (fid, tx):
                    continue
                if dist[tx].get(otx, inf) > radius:
                    continue
                if ovo:
                    n_vo += 1
                else:
                    n_be += 1
            ranks.append(1 + n_vo + (0 if vo else n_be))
        cost = sum(ranks) if intrinsic_vo[fid] else max(ranks)
        costs[routes[fid][0]] += cost
    return costs


def oracle_cost_dict(n, edges, routes, intrinsic_vo, radius=2):
    """Cost vectors for every attacker bitmask, as {mask: [cost...]}."""
    return {
        mask: oracle_node_costs(n, edges, routes, intrinsic_vo, mask, radius)
        for mask in range(2**n)
    }


def oracle_similar(a, b, delta):
    if a == b:
        return True
    return abs(a - b) / max(a, b) < delta


def oracle_is_nash(cost, n, mask):
    return all(cost[mask][i] <= cost[mask ^ (1 << i)][i] for i in range(n))


def oracle_is_sce(cost, n, mask, delta):
    """Exhaustive witness search over all (node, profile) pairs."""
    for i in range(n):
        bit = mask >> i & 1
        for w in range(2**n):
            if w >> i & 1 != bit:
                continue
            if not oracle_similar(cost[mask][i], cost[w][i], delta):
                continue
            if cost[w][i] <= cost[w ^ (1 << i)][i]:
                break
        else:
            return False
    return True
