"""Rank-based per-node cost heuristic and outcome statuses.

Per-packet QoS in a contention MAC degrades with the amount of
same-or-higher-priority traffic within interference range, so we score
each hop transmission by a rank: one plus the number of competing VO
hops nearby, plus the number of competing BE hops if the transmission is
itself BE (VO transmissions do not wait behind BE).  A flow aggregates
its hop ranks according to its intrinsic category: VO flows are
delay-sensitive end to end, so ranks add up along the route; BE flows
care about throughput, which the single worst hop bottlenecks.  A node's
cost sums over the flows it sources.  Statuses compare a profile against
the all-neutral baseline: attackers either LOSE or DONT_LOSE, neutral
nodes either MIND or DONT_MIND, with the strict-increase convention.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .model import (
    AccessCategory,
    AttackerSet,
    E2eFlow,
    HopAcTable,
    NetworkInstance,
    resolve_attacks,
)


class Aggregation(enum.Enum):
    SUM = "sum"
    MAX = "max"

    def apply(self, values: list[int]) -> int:
        return sum(values) if self is Aggregation.SUM else max(values)


@dataclass(frozen=True)
class RankParams:
    """Tunable knobs of the heuristic; defaults are the calibrated ones.

    VO aggregation sums hop ranks (delay adds along a path); BE
    aggregation takes the max (throughput is bottleneck-limited).  The
    knobs exist so alternates can be evaluated, not because the defaults
    are in doubt at call sites.
    """

    interference_radius: int = 2
    vo_flow_aggregation: Aggregation = Aggregation.SUM
    be_flow_aggregation: Aggregation = Aggregation.MAX
    node_aggregation: Aggregation = Aggregation.SUM

    def __post_init__(self) -> None:
        if self.interference_radius < 1:
            raise ValueError("interference_radius must be at least 1")

    def flow_aggregation(self, ac: AccessCategory) -> Aggregation:
        if ac is AccessCategory.VO:
            return self.vo_flow_aggregation
        return self.be_flow_aggregation


class NodeStatus(enum.Enum):
    """Outcome of a profile for one node, relative to the neutral baseline."""

    LOSE = "lose"
    DONT_LOSE = "dont_lose"
    MIND = "mind"
    DONT_MIND = "dont_mind"


def competing_hflows(
    instance: NetworkInstance,
    table: HopAcTable,
    flow_id: int,
    transmitting_node: int,
    params: RankParams = RankParams(),
) -> set[tuple[int, int, AccessCategory]]:
    """Hop entries within interference range of (flow_id, node), itself excluded.

    Other hops of the same flow compete (they occupy nearby airtime), as
    do co-located hops of other flows at distance zero.
    """
    if not 0 <= flow_id < len(instance.flows):
        raise ValueError(f"unknown flow {flow_id}")
    route = instance.flows[flow_id].route
    if transmitting_node not in route.nodes[:-1]:
        raise ValueError(
            f"node {transmitting_node} does not transmit flow {flow_id}"
        )
    dist = instance.graph.hop_distances[transmitting_node]
    radius = params.interference_radius
    return {
        (fid, other, ac)
        for fid, other, ac in table.all_entries()
        if (fid, other) != (flow_id, transmitting_node) and dist[other] <= radius
    }


def hflow_rank(
    ac: AccessCategory, competitors: set[tuple[int, int, AccessCategory]]
) -> int:
    """1 + competing VO hops, plus competing BE hops when itself BE."""
    if ac is AccessCategory.VO:
        return 1 + sum(
            1 for _, _, other_ac in competitors if other_ac is AccessCategory.VO
        )
    return 1 + len(competitors)


def flow_cost(
    instance: NetworkInstance,
    table: HopAcTable,
    flow: E2eFlow,
    params: RankParams = RankParams(),
) -> int:
    """Hop ranks aggregated by the flow's INTRINSIC category.

    A demoted VO flow is still judged as voice by its user, so the
    resolved categories only enter through the ranks.
    """
    ranks = [
        hflow_rank(ac, competing_hflows(instance, table, flow.flow_id, node, params))
        for node, ac in table.flow_hops(flow.flow_id)
    ]
    return params.flow_aggregation(flow.intrinsic_ac).apply(ranks)


def node_costs(
    instance: NetworkInstance,
    attackers: AttackerSet,
    params: RankParams = RankParams(),
) -> tuple[int, ...]:
    """One-shot evaluation; build a :class:`RankCostModel` for repeated use."""
    return RankCostModel(instance, params).node_costs(attackers)


def classify_status(
    instance: NetworkInstance,
    attackers: AttackerSet,
    params: RankParams = RankParams(),
) -> tuple[NodeStatus, ...]:
    return RankCostModel(instance, params).classify(attackers)


def status_of(is_attacker: bool, cost: float, baseline_cost: float) -> NodeStatus:
    """Single-node status under the strict-increase convention."""
    worse = cost > baseline_cost
    if is_attacker:
        return NodeStatus.LOSE if worse else NodeStatus.DONT_LOSE
    return NodeStatus.MIND if worse else NodeStatus.DONT_MIND


@dataclass
class RankCostModel:
    """Memoized evaluator of the rank heuristic over attacker profiles.

    The set of hop transmissions and their interference neighborhoods are
    fixed by the instance (only categories vary with the profile), so both
    are precomputed once.  Evaluations are cached by bitmask; the cache
    only ever grows, so concurrent readers at worst recompute.
    """

    instance: NetworkInstance
    params: RankParams = RankParams()
    _entries: list[tuple[int, int]] = field(init=False, repr=False)
    _entry_neighbors: list[list[int]] = field(init=False, repr=False)
    _memo: dict[int, tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.instance.ensure_valid()
        self._entries = [
            (flow.flow_id, node)
            for flow in self.instance.flows
            for node in flow.route.nodes[:-1]
        ]
        dist = self.instance.graph.hop_distances
        radius = self.params.interference_radius
        self._entry_neighbors = [
            [
                b
                for b, (_, other) in enumerate(self._entries)
                if b != a and dist[node][other] <= radius
            ]
            for a, (_, node) in enumerate(self._entries)
        ]
        self._memo = {}

    @property
    def node_count(self) -> int:
        return self.instance.node_count

    def node_costs(self, attackers: AttackerSet | int) -> tuple[int, ...]:
        mask = attackers if isinstance(attackers, int) else attackers.mask
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        table = resolve_attacks(
            self.instance, AttackerSet(mask, self.instance.node_count)
        )
        is_vo = [ac is AccessCategory.VO for _, _, ac in table.all_entries()]
        ranks = []
        for a, neighbors in enumerate(self._entry_neighbors):
            if is_vo[a]:
                ranks.append(1 + sum(1 for b in neighbors if is_vo[b]))
            else:
                ranks.append(1 + len(neighbors))
        costs = [0] * self.instance.node_count
        pos = 0
        node_agg = self.params.node_aggregation
        for flow in self.instance.flows:
            hop_count = flow.route.hop_count
            cost = self.params.flow_aggregation(flow.intrinsic_ac).apply(
                ranks[pos : pos + hop_count]
            )
            source = flow.route.source
            if node_agg is Aggregation.SUM:
                costs[source] += cost
            else:
                costs[source] = max(costs[source], cost)
            pos += hop_count
        result = tuple(costs)
        self._memo[mask] = result
        return result

    def baseline(self) -> tuple[int, ...]:
        return self.node_costs(0)

    def classify(self, attackers: AttackerSet | int) -> tuple[NodeStatus, ...]:
        mask = attackers if isinstance(attackers, int) else attackers.mask
        base = self.baseline()
        costs = self.node_costs(mask)
        return tuple(
            status_of(bool(mask >> i & 1), costs[i], base[i])
            for i in range(self.instance.node_count)
        )
