"""Network model: hearability graph, routes, e2e-flows, attack resolution.

The world is a quasi-static snapshot: nodes with directed hearability links
(built symmetric from undirected edge lists), plus a set of end-to-end
flows, each a fixed route carrying an intrinsic access category (VO or BE,
with VO enjoying statistical priority).  Attackers remap categories hop by
hop under plausibility rules: a source may promote its own BE traffic to
VO, a transit node may demote VO traffic passing through to BE, and
nothing else; destinations always behave neutrally.  Resolution is
deterministic, so a set of attackers fully determines the per-hop
categories of every flow.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence


class AccessCategory(enum.Enum):
    """MAC-layer access category; VO statistically outranks BE."""

    VO = "VO"
    BE = "BE"


class TraKind(enum.Enum):
    """Remapping event kinds: promote own source traffic or demote transit."""

    UPGRADE = "TRA+"
    DOWNGRADE = "TRA-"


class InvalidInstanceError(ValueError):
    """Raised when an operation requires a structurally valid instance."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid network instance: {lines}")


@dataclass(frozen=True)
class Violation:
    """One structural problem, with flow/node context where applicable."""

    message: str
    flow_id: int | None = None
    node: int | None = None

    def __str__(self) -> str:
        ctx = []
        if self.flow_id is not None:
            ctx.append(f"flow {self.flow_id}")
        if self.node is not None:
            ctx.append(f"node {self.node}")
        return f"{self.message} ({', '.join(ctx)})" if ctx else self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class HearabilityGraph:
    """Directed hearability links over dense node ids 0..node_count-1.

    Stored directed, but :meth:`from_undirected_edges` expands each edge in
    both directions, so instance files describe symmetric hearability.
    """

    node_count: int
    links: frozenset[tuple[int, int]]

    @classmethod
    def from_undirected_edges(
        cls, node_count: int, edges: Sequence[tuple[int, int]]
    ) -> "HearabilityGraph":
        links = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-link {i}-{j} not allowed")
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise ValueError(f"edge {i}-{j} out of range for {node_count} nodes")
            links.add((i, j))
            links.add((j, i))
        return cls(node_count=node_count, links=frozenset(links))

    def has_link(self, i: int, j: int) -> bool:
        return (i, j) in self.links

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(j for (a, j) in self.links if a == i))

    @cached_property
    def undirected_edges(self) -> tuple[tuple[int, int], ...]:
        """Canonical sorted (i < j) edge list of the symmetric closure."""
        undirected = {(min(i, j), max(i, j)) for i, j in self.links}
        return tuple(sorted(undirected))

    @cached_property
    def hop_distances(self) -> tuple[tuple[float, ...], ...]:
        """All-pairs BFS hop distances on the undirected view (inf if cut off)."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, j in self.undirected_edges:
            adj[i].append(j)
            adj[j].append(i)
        rows = []
        for src in range(self.node_count):
            dist = [float("inf")] * self.node_count
            dist[src] = 0
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v in adj[u]:
                    if dist[v] == float("inf"):
                        dist[v] = dist[u] + 1
                        queue.append(v)
            rows.append(tuple(dist))
        return tuple(rows)

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return True
        return all(d != float("inf") for d in self.hop_distances[0])


@dataclass(frozen=True)
class Route:
    """An ordered node sequence; first node is the source, last the destination.

    Construction does not enforce structural validity (so that the
    validator can report problems as data); use ``validate_instance``.
    """

    nodes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.nodes)

    def __contains__(self, node: int) -> bool:
        return node in self.nodes

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def destination(self) -> int:
        return self.nodes[-1]

    @property
    def hop_count(self) -> int:
        return len(self.nodes) - 1

    def position(self, node: int) -> int:
        return self.nodes.index(node)

    def pred(self, node: int) -> int:
        """Immediate predecessor on the route; the source is its own pred."""
        pos = self.position(node)
        return self.nodes[max(pos - 1, 0)]

    def succ(self, node: int) -> int:
        pos = self.position(node)
        if pos == len(self.nodes) - 1:
            raise ValueError(f"node {node} is the destination, no successor")
        return self.nodes[pos + 1]

    def prefix(self, node: int) -> frozenset[int]:
        """Nodes that precede or coincide with ``node`` on this route."""
        return frozenset(self.nodes[: self.position(node) + 1])


@dataclass(frozen=True)
class E2eFlow:
    route: Route
    intrinsic_ac: AccessCategory
    flow_id: int


@dataclass(frozen=True)
class NetworkInstance:
    """Immutable world a game is played on: a graph plus its offered flows."""

    graph: HearabilityGraph
    flows: tuple[E2eFlow, ...]

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_instance(self)

    def ensure_valid(self) -> None:
        if not self.validation.ok:
            raise InvalidInstanceError(self.validation.violations)


@dataclass(frozen=True)
class AttackerSet:
    """A strategy profile: the subset of nodes attacking, as a bitmask."""

    mask: int
    node_count: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.node_count):
            raise ValueError(
                f"mask {self.mask:#x} out of range for {self.node_count} nodes"
            )

    @classmethod
    def empty(cls, node_count: int) -> "AttackerSet":
        return cls(0, node_count)

    @classmethod
    def full(cls, node_count: int) -> "AttackerSet":
        return cls((1 << node_count) - 1, node_count)

    @classmethod
    def from_nodes(cls, nodes: Sequence[int], node_count: int) -> "AttackerSet":
        mask = 0
        for i in nodes:
            mask |= 1 << i
        return cls(mask, node_count)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.node_count) if self.mask >> i & 1)

    def __contains__(self, node: int) -> bool:
        return bool(self.mask >> node & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def toggle(self, node: int) -> "AttackerSet":
        """Symmetric difference with {node}; involutive."""
        if not 0 <= node < self.node_count:
            raise ValueError(f"node {node} out of range")
        return AttackerSet(self.mask ^ (1 << node), self.node_count)


@dataclass(frozen=True)
class HopAcTable:
    """Resolved per-hop access categories, one row of hops per flow.

    ``hops[flow_id]`` lists (transmitting node, category) for every route
    node except the destination, in route order.
    """

    hops: tuple[tuple[tuple[int, AccessCategory], ...], ...]

    def flow_hops(self, flow_id: int) -> tuple[tuple[int, AccessCategory], ...]:
        return self.hops[flow_id]

    def all_entries(self) -> Iterator[tuple[int, int, AccessCategory]]:
        """Yield (flow_id, transmitting node, category) over every hop."""
        for flow_id, entries in enumerate(self.hops):
            for node, ac in entries:
                yield flow_id, node, ac

    def arrival_ac(self, flow_id: int) -> AccessCategory:
        """Category the destination receives (last transmitted hop)."""
        return self.hops[flow_id][-1][1]


@dataclass(frozen=True)
class TraEvent:
    flow_id: int
    node: int
    kind: TraKind


def validate_instance(instance: NetworkInstance) -> ValidationReport:
    """Check every structural invariant; violations are data, not errors."""
    graph = instance.graph
    n = graph.node_count
    violations: list[Violation] = []
    seen_ids = set()
    sources = set()
    for idx, flow in enumerate(instance.flows):
        fid = flow.flow_id
        if fid in seen_ids:
            violations.append(Violation("duplicate flow id", flow_id=fid))
        seen_ids.add(fid)
        if fid != idx:
            violations.append(
                Violation(f"flow id must equal its position {idx}", flow_id=fid)
            )
        nodes = flow.route.nodes
        if len(nodes) < 2:
            violations.append(Violation("route shorter than one hop", flow_id=fid))
        if len(set(nodes)) != len(nodes):
            violations.append(Violation("repeated node on route", flow_id=fid))
        for node in nodes:
            if not 0 <= node < n:
                violations.append(
                    Violation("route node out of range", flow_id=fid, node=node)
                )
        for a, b in zip(nodes, nodes[1:]):
            if 0 <= a < n and 0 <= b < n and not graph.has_link(a, b):
                violations.append(
                    Violation(f"missing link {a}-{b}", flow_id=fid, node=a)
                )
        if nodes:
            sources.add(nodes[0])
    for node in range(n):
        if node not in sources:
            violations.append(Violation("node sources no flow", node=node))
    return ValidationReport(tuple(violations))


def resolve_attacks(instance: NetworkInstance, attackers: AttackerSet) -> HopAcTable:
    """Resolve every flow's per-hop categories under plausible attackers.

    At the source the category is VO if the source attacks a BE flow,
    otherwise the intrinsic one; each attacking transit node demotes an
    incoming VO to BE; once BE, a category never returns to VO downstream.
    Pure function of (instance, attackers).
    """
    instance.ensure_valid()
    mask = attackers.mask
    rows = []
    for flow in instance.flows:
        route = flow.route.nodes
        vo = flow.intrinsic_ac is AccessCategory.VO or bool(mask >> route[0] & 1)
        entries = [(route[0], AccessCategory.VO if vo else AccessCategory.BE)]
        for node in route[1:-1]:
            if vo and mask >> node & 1:
                vo = False
            entries.append((node, AccessCategory.VO if vo else AccessCategory.BE))
        rows.append(tuple(entries))
    return HopAcTable(tuple(rows))


def tra_events(instance: NetworkInstance, attackers: AttackerSet) -> list[TraEvent]:
    """Remapping events, sorted by (flow id, route position).

    Derived by diffing consecutive resolved categories: a flow has at most
    one upgrade (at its source) and one downgrade (at the first attacking
    transit node).
    """
    table = resolve_attacks(instance, attackers)
    events: list[TraEvent] = []
    for flow in instance.flows:
        entries = table.flow_hops(flow.flow_id)
        if entries[0][1] is not flow.intrinsic_ac:
            events.append(TraEvent(flow.flow_id, entries[0][0], TraKind.UPGRADE))
        for (_, prev_ac), (node, ac) in zip(entries, entries[1:]):
            if ac is not prev_ac:
                events.append(TraEvent(flow.flow_id, node, TraKind.DOWNGRADE))
    return events
