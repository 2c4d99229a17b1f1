"""One-shot attack game: payoff table, weak NE and SCE membership.

Players are nodes, a pure strategy profile is an attacker set, and the
payoff to minimize is the rank-based node cost.  The full table over all
2^|N| profiles is built once (vectorized over bitmasks) and then every
equilibrium question is a table lookup.  A profile is a weak Nash
equilibrium when no single toggle strictly lowers the toggling node's
cost.  The self-confirming relaxation lets each node justify its choice
by any profile it cannot distinguish from the current one: same own
strategy and delta-similar own cost, where similarity of positive costs
a, b means |a - b| / max(a, b) < delta (equal values, including a
hypothetical 0/0, always count as similar).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .costs import Aggregation, RankParams
from .model import AccessCategory, AttackerSet, NetworkInstance

DEFAULT_DELTA = 0.05
DEFAULT_ENUMERATION_CAP = 20

_CHUNK = 1 << 14


def toggle(attackers: AttackerSet, node: int) -> AttackerSet:
    """Symmetric difference with {node}; involutive."""
    return attackers.toggle(node)


@dataclass(frozen=True)
class PayoffTable:
    """cost[A][i] for every profile bitmask A and node i; read-only."""

    instance: NetworkInstance
    params: RankParams
    costs: np.ndarray

    @property
    def node_count(self) -> int:
        return self.instance.node_count

    @property
    def profile_count(self) -> int:
        return self.costs.shape[0]

    def cost(self, mask: int, node: int) -> float:
        return float(self.costs[mask, node])

    def row(self, mask: int) -> tuple[float, ...]:
        return tuple(float(c) for c in self.costs[mask])


def _entry_static_data(instance: NetworkInstance):
    """Per hop entry: (flow index, source bit, intrinsic-VO flag, demote mask).

    An entry transmits VO exactly when the flow starts VO (intrinsically
    or upgraded at an attacking source) and no attacker sits on the route
    strictly after the source up to the entry's node.
    """
    flows = []
    for flow in instance.flows:
        route = flow.route.nodes
        demote = 0
        rows = []
        for pos, node in enumerate(route[:-1]):
            if pos > 0:
                demote |= 1 << node
            rows.append((flow.flow_id, 1 << route[0], demote))
        flows.append(rows)
    return flows


def build_payoff_table(
    instance: NetworkInstance,
    params: RankParams = RankParams(),
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> PayoffTable:
    """Exhaustive cost table; refuses instances beyond the enumeration cap."""
    instance.ensure_valid()
    n = instance.node_count
    if n > cap:
        raise ValueError(
            f"instance has {n} nodes, above the enumeration cap {cap}; "
            "exhaustive tables are refused rather than sampled"
        )
    flows = instance.flows
    entry_rows = [row for rows in _entry_static_data(instance) for row in rows]
    m = len(entry_rows)
    src_bits = np.array([src for _, src, _ in entry_rows], dtype=np.int64)
    demotes = np.array([dem for _, _, dem in entry_rows], dtype=np.int64)
    intrinsic = np.array(
        [
            flows[fid].intrinsic_ac is AccessCategory.VO
            for fid, _, _ in entry_rows
        ],
        dtype=bool,
    )
    dist = instance.graph.hop_distances
    entry_nodes = [
        node for flow in flows for node in flow.route.nodes[:-1]
    ]
    radius = params.interference_radius
    adjacency = np.zeros((m, m), dtype=np.float64)
    for a, node_a in enumerate(entry_nodes):
        for b, node_b in enumerate(entry_nodes):
            if a != b and dist[node_a][node_b] <= radius:
                adjacency[a, b] = 1.0
    neighbor_total = adjacency.sum(axis=1)

    flow_slices = []
    pos = 0
    for flow in flows:
        flow_slices.append((pos, pos + flow.route.hop_count))
        pos += flow.route.hop_count

    total = 1 << n
    costs = np.empty((total, n), dtype=np.float64)
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        col = masks[:, None]
        vo = (intrinsic[None, :] | ((col & src_bits[None, :]) != 0)) & (
            (col & demotes[None, :]) == 0
        )
        vo_f = vo.astype(np.float64)
        vo_counts = vo_f @ adjacency.T
        ranks = np.where(vo, 1.0 + vo_counts, 1.0 + neighbor_total[None, :])
        chunk_costs = np.zeros((len(masks), n), dtype=np.float64)
        for flow, (lo, hi) in zip(flows, flow_slices):
            agg = params.flow_aggregation(flow.intrinsic_ac)
            if agg is Aggregation.SUM:
                fc = ranks[:, lo:hi].sum(axis=1)
            else:
                fc = ranks[:, lo:hi].max(axis=1)
            src = flow.route.source
            if params.node_aggregation is Aggregation.SUM:
                chunk_costs[:, src] += fc
            else:
                chunk_costs[:, src] = np.maximum(chunk_costs[:, src], fc)
        costs[start : start + len(masks)] = chunk_costs
    costs.setflags(write=False)
    return PayoffTable(instance=instance, params=params, costs=costs)


def _similar(a: float, b: float, delta: float) -> bool:
    """|a - b| / max(a, b) < delta via the equivalent open-interval form.

    The interval form (b strictly between a*(1-delta) and a/(1-delta))
    uses the exact float bounds the vectorized census searches, keeping
    the scalar and vectorized answers bit-consistent.
    """
    if a == b:
        return True
    if a <= 0 or b <= 0:
        return False
    return a * (1.0 - delta) < b < a / (1.0 - delta)


def _check_delta(delta: float) -> None:
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")


def is_nash(table: PayoffTable, attackers: AttackerSet) -> bool:
    """No node can strictly lower its own cost by toggling."""
    mask = attackers.mask
    costs = table.costs
    return all(
        costs[mask, i] <= costs[mask ^ (1 << i), i]
        for i in range(table.node_count)
    )


def is_sce(table: PayoffTable, attackers: AttackerSet, delta: float = DEFAULT_DELTA) -> bool:
    """Every node has a same-strategy, similar-cost profile it best-responds in."""
    _check_delta(delta)
    mask = attackers.mask
    costs = table.costs
    n = table.node_count
    for i in range(n):
        bit = mask >> i & 1
        q = costs[mask, i]
        found = False
        for w in range(table.profile_count):
            if w >> i & 1 != bit:
                continue
            if costs[w, i] > costs[w ^ (1 << i), i]:
                continue
            if _similar(q, costs[w, i], delta):
                found = True
                break
        if not found:
            return False
    return True


@dataclass(frozen=True)
class EquilibriumCensus:
    ne_profiles: frozenset[int]
    sce_profiles: frozenset[int]
    ne_fraction: float
    sce_fraction: float
    delta: float

    def __post_init__(self) -> None:
        if not self.ne_profiles <= self.sce_profiles:
            raise AssertionError("every weak NE must be an SCE")


def census(table: PayoffTable, delta: float = DEFAULT_DELTA) -> EquilibriumCensus:
    """Classify all 2^|N| profiles. Vectorized; scales to the 20-node cap.

    SCE witness search per (node, own-strategy bit): candidate costs are
    the node's costs over profiles where it best-responds with that bit;
    a profile is witnessed iff a candidate lies in the open similarity
    interval around its own cost, found by binary search on the sorted
    candidates.
    """
    _check_delta(delta)
    costs = table.costs
    n = table.node_count
    total = table.profile_count
    idx = np.arange(total)
    best_response = np.empty((total, n), dtype=bool)
    for i in range(n):
        best_response[:, i] = costs[idx, i] <= costs[idx ^ (1 << i), i]
    ne_mask = best_response.all(axis=1)

    sce_mask = np.ones(total, dtype=bool)
    for i in range(n):
        member = (idx >> i & 1) == 1
        q = costs[:, i]
        for bit_value in (False, True):
            side = member == bit_value
            candidates = np.sort(q[side & best_response[:, i]])
            queries = q[side]
            if candidates.size == 0:
                witnessed = np.zeros(queries.shape, dtype=bool)
            else:
                lo = queries * (1.0 - delta)
                hi = queries / (1.0 - delta)
                left = np.searchsorted(candidates, lo, side="right")
                right = np.searchsorted(candidates, hi, side="left")
                witnessed = right > left
                # exact equality is always similar, even at zero cost
                eq_left = np.searchsorted(candidates, queries, side="left")
                eq_right = np.searchsorted(candidates, queries, side="right")
                witnessed |= eq_right > eq_left
            sce_mask[np.flatnonzero(side)[~witnessed]] = False

    ne_profiles = frozenset(int(w) for w in np.flatnonzero(ne_mask))
    sce_profiles = frozenset(int(w) for w in np.flatnonzero(sce_mask))
    return EquilibriumCensus(
        ne_profiles=ne_profiles,
        sce_profiles=sce_profiles,
        ne_fraction=len(ne_profiles) / total,
        sce_fraction=len(sce_profiles) / total,
        delta=delta,
    )


class ResponseCase(enum.Enum):
    ATTACK_BEST = "attack_best"
    ATTACK_WORST = "attack_worst"
    NEUTRAL_BEST = "neutral_best"
    NEUTRAL_WORST = "neutral_worst"


def response_case(table: PayoffTable, attackers: AttackerSet, node: int) -> ResponseCase:
    """Which of the four own-strategy cases (weak inequality favors best)."""
    mask = attackers.mask
    best = table.costs[mask, node] <= table.costs[mask ^ (1 << node), node]
    if mask >> node & 1:
        return ResponseCase.ATTACK_BEST if best else ResponseCase.ATTACK_WORST
    return ResponseCase.NEUTRAL_BEST if best else ResponseCase.NEUTRAL_WORST


class RegretFlags(NamedTuple):
    attacker_regret: tuple[bool, ...]
    neutral_regret: tuple[bool, ...]


def regret_nodes(table: PayoffTable, attackers: AttackerSet) -> RegretFlags:
    """Hindsight flags at a profile.

    An attacker regrets when leaving would lower its own cost without
    lowering any remaining attacker's; a neutral regrets when joining
    would lower its own cost without raising any still-neutral node's.
    """
    mask = attackers.mask
    costs = table.costs
    n = table.node_count
    attacker = [False] * n
    neutral = [False] * n
    for i in range(n):
        flipped = mask ^ (1 << i)
        if costs[flipped, i] >= costs[mask, i]:
            continue
        if mask >> i & 1:
            attacker[i] = all(
                costs[flipped, j] >= costs[mask, j]
                for j in range(n)
                if flipped >> j & 1
            )
        else:
            neutral[i] = all(
                costs[flipped, j] <= costs[mask, j]
                for j in range(n)
                if not flipped >> j & 1 and j != i
            )
    return RegretFlags(tuple(attacker), tuple(neutral))
