"""Random instances, Monte Carlo campaigns, and evaluation metrics.

The campaign runner plays REST many times per instance and reduces the
runs to the headline measures: NE/SCE hit rates against the census
fractions, the synthetic hit exponent, convergence stages, and the
beneficiary percentages behind the improvement rating.  Everything is
keyed off a single master seed so campaigns replay bit-identically,
including under process-parallel execution.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .costs import NodeStatus
from .game import DEFAULT_DELTA, PayoffTable, build_payoff_table, census
from .model import (
    AccessCategory,
    AttackerSet,
    E2eFlow,
    HearabilityGraph,
    NetworkInstance,
    Route,
)
from .rest import RestParams, run
from .seeding import derive_seed

DEFAULT_RADIUS = 0.4
DEFAULT_TOPOLOGY_RETRIES = 1000
DEFAULT_HOP_RETRIES = 100


class GenerationError(RuntimeError):
    """Raised when the requested parameters defeat bounded resampling."""


@dataclass(frozen=True)
class GeometricTopology:
    """Uniform points on the unit square, linked within ``radius``."""

    radius: float = DEFAULT_RADIUS
    retries: int = DEFAULT_TOPOLOGY_RETRIES

    def __post_init__(self) -> None:
        if not 0 < self.radius <= math.sqrt(2):
            raise ValueError(f"radius {self.radius} outside (0, sqrt(2)]")
        if self.retries < 1:
            raise ValueError("retries must be positive")


@dataclass(frozen=True)
class FixedFileTopology:
    """Reuse the hearability graph of a saved instance file."""

    path: str


Topology = GeometricTopology | FixedFileTopology


@dataclass(frozen=True)
class InstanceGenParams:
    node_count: int = 10
    hop_length_range: tuple[int, int] = (2, 5)
    vo_fraction: float = 0.5
    topology: Topology = GeometricTopology()
    seed: int | None = None

    def __post_init__(self) -> None:
        lo, hi = self.hop_length_range
        if not 1 <= lo <= hi <= self.node_count - 1:
            raise ValueError(
                f"hop_length_range {self.hop_length_range} outside "
                f"[1, {self.node_count - 1}]"
            )
        if not 0.0 <= self.vo_fraction <= 1.0:
            raise ValueError("vo_fraction must lie in [0, 1]")


def _geometric_graph(
    node_count: int, topology: GeometricTopology, rng: random.Random
) -> HearabilityGraph:
    for _ in range(topology.retries):
        points = [(rng.random(), rng.random()) for _ in range(node_count)]
        edges = [
            (a, b)
            for a in range(node_count)
            for b in range(a + 1, node_count)
            if math.dist(points[a], points[b]) <= topology.radius
        ]
        graph = HearabilityGraph.from_undirected_edges(node_count, edges)
        if graph.is_connected():
            return graph
    raise GenerationError(
        f"no connected geometry within {topology.retries} resamples "
        f"(radius {topology.radius})"
    )


def _simple_paths(graph: HearabilityGraph, source: int, hops: int) -> list[tuple[int, ...]]:
    """All simple paths with exactly ``hops`` links, in lexicographic order."""
    found: list[tuple[int, ...]] = []
    path = [source]
    on_path = {source}

    def extend() -> None:
        if len(path) == hops + 1:
            found.append(tuple(path))
            return
        for nxt in graph.neighbors(path[-1]):
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            extend()
            path.pop()
            on_path.remove(nxt)

    extend()
    return found


def _draw_route(
    graph: HearabilityGraph,
    source: int,
    hop_length_range: tuple[int, int],
    rng: random.Random,
) -> Route:
    lo, hi = hop_length_range
    for _ in range(DEFAULT_HOP_RETRIES):
        hops = rng.randint(lo, hi)
        paths = _simple_paths(graph, source, hops)
        if paths:
            return Route(paths[rng.randrange(len(paths))])
    raise GenerationError(
        f"node {source} has no simple path with length in {hop_length_range} "
        f"after {DEFAULT_HOP_RETRIES} draws"
    )


def gen_instance(params: InstanceGenParams, seed: int | None = None) -> NetworkInstance:
    """Draw one random instance; deterministic given the seed.

    One flow per node, hop lengths uniform over the configured range and
    routes uniform over the simple paths of the drawn length.  Exactly
    round(vo_fraction * node_count) flows are VO, chosen uniformly
    (halves round up).
    """
    rng = random.Random(params.seed if seed is None else seed)
    if isinstance(params.topology, FixedFileTopology):
        from .fileio import load_instance

        graph = load_instance(Path(params.topology.path)).graph
        if graph.node_count != params.node_count:
            raise GenerationError(
                f"fixed topology has {graph.node_count} nodes, "
                f"params want {params.node_count}"
            )
    else:
        graph = _geometric_graph(params.node_count, params.topology, rng)
    routes = [
        _draw_route(graph, source, params.hop_length_range, rng)
        for source in range(params.node_count)
    ]
    vo_count = math.floor(params.vo_fraction * params.node_count + 0.5)
    vo_flows = set(rng.sample(range(params.node_count), vo_count))
    flows = tuple(
        E2eFlow(
            route=routes[i],
            intrinsic_ac=AccessCategory.VO if i in vo_flows else AccessCategory.BE,
            flow_id=i,
        )
        for i in range(params.node_count)
    )
    instance = NetworkInstance(graph=graph, flows=flows)
    instance.ensure_valid()
    return instance


def sce_hit_exponent(sce_hits: float, sce_fraction: float) -> float | None:
    """ln(hits)/ln(fraction); None marks the nondeterminate edges.

    Fractions of 0 or 1 give no information about seeking, and zero hits
    would send the ratio to infinity; both map to None.  Perfect hits are
    damped to ln(0.999)/ln(fraction) to curb outliers.
    """
    if not 0.0 <= sce_hits <= 1.0 or not 0.0 <= sce_fraction <= 1.0:
        raise ValueError("hits and fraction must lie in [0, 1]")
    if sce_fraction in (0.0, 1.0) or sce_hits == 0.0:
        return None
    if sce_hits == 1.0:
        return math.log(0.999) / math.log(sce_fraction)
    return math.log(sce_hits) / math.log(sce_fraction)


@dataclass(frozen=True)
class HitsSummary:
    """NE/SCE hit rates over converged runs, next to the census fractions."""

    ne_hits: float
    sce_hits: float
    ne_fraction: float
    sce_fraction: float
    converged_runs: int
    timeout_runs: int

    def __iter__(self):
        return iter(
            (self.ne_hits, self.sce_hits, self.ne_fraction, self.sce_fraction)
        )


@dataclass(frozen=True)
class RunOutcome:
    """Reduction of one REST run to what the metrics need."""

    a0_mask: int
    converged: bool
    stages: int | None
    final_mask: int | None
    initial_beneficiary_pct: float | None
    eventual_beneficiary_pct: float | None


def _beneficiary_pct(
    restricted: Sequence[int], mask: int, costs: Sequence[float], base: Sequence[float]
) -> float:
    hits = sum(
        1
        for i in restricted
        if not mask >> i & 1 and costs[i] <= base[i]
    )
    return hits / len(restricted)


def _play_runs(
    instance: NetworkInstance,
    table: PayoffTable,
    rest_params: RestParams,
    runs: int,
    master_seed: int,
) -> list[RunOutcome]:
    """Independent REST runs with uniformly random A(0), per-run seeds."""
    n = instance.node_count
    base = table.row(0)
    outcomes: list[RunOutcome] = []
    for r in range(runs):
        run_seed = derive_seed(master_seed, r)
        a0_mask = random.Random(derive_seed(run_seed, 0)).getrandbits(n)
        params = RestParams(
            m=rest_params.m,
            p=rest_params.p,
            x0=rest_params.x0,
            max_stages=rest_params.max_stages,
            seed=derive_seed(run_seed, 1),
        )
        trace = run(instance, params, AttackerSet(a0_mask, n), cost_fn=table.row)
        restricted = [i for i in range(n) if not a0_mask >> i & 1]
        initial = eventual = None
        if restricted:
            initial = _beneficiary_pct(restricted, a0_mask, table.row(a0_mask), base)
        if trace.converged:
            final = trace.final_mask
            if restricted:
                eventual = _beneficiary_pct(restricted, final, table.row(final), base)
            outcomes.append(
                RunOutcome(a0_mask, True, trace.terminal.stage, final, initial, eventual)
            )
        else:
            outcomes.append(RunOutcome(a0_mask, False, None, None, initial, None))
    return outcomes


def ne_sce_hits(
    instance: NetworkInstance,
    rest_params: RestParams,
    runs: int,
    delta: float = DEFAULT_DELTA,
    master_seed: int = 0,
    table: PayoffTable | None = None,
) -> HitsSummary:
    """Fractions of converged runs whose terminal profile is an NE / SCE."""
    if table is None:
        table = build_payoff_table(instance)
    counts = census(table, delta=delta)
    outcomes = _play_runs(instance, table, rest_params, runs, master_seed)
    converged = [o for o in outcomes if o.converged]
    if converged:
        ne = sum(1 for o in converged if o.final_mask in counts.ne_profiles)
        sce = sum(1 for o in converged if o.final_mask in counts.sce_profiles)
        ne_rate, sce_rate = ne / len(converged), sce / len(converged)
    else:
        ne_rate = sce_rate = 0.0
    return HitsSummary(
        ne_hits=ne_rate,
        sce_hits=sce_rate,
        ne_fraction=counts.ne_fraction,
        sce_fraction=counts.sce_fraction,
        converged_runs=len(converged),
        timeout_runs=len(outcomes) - len(converged),
    )


@dataclass(frozen=True)
class InstanceResult:
    """Per-instance reduction of a campaign; one row of the figure CSVs."""

    instance_index: int
    ne_fraction: float
    sce_fraction: float
    ne_hits: float
    sce_hits: float
    sce_hit_exponent: float | None
    mean_convergence_stages: float | None
    initial_beneficiary_pct: float | None
    eventual_beneficiary_pct: float | None
    improved: bool | None
    converged_runs: int
    timeout_runs: int


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def evaluate_instance(
    instance: NetworkInstance,
    rest_params: RestParams,
    runs: int,
    delta: float = DEFAULT_DELTA,
    master_seed: int = 0,
    instance_index: int = 0,
) -> InstanceResult:
    """Census plus ``runs`` REST plays, reduced to one result row.

    Beneficiary percentages average over runs that left at least one node
    outside A(0); runs with A(0) = N carry no defending nodes to score.
    """
    table = build_payoff_table(instance)
    counts = census(table, delta=delta)
    outcomes = _play_runs(
        instance, table, rest_params, runs, derive_seed(master_seed, instance_index)
    )
    converged = [o for o in outcomes if o.converged]
    if converged:
        ne_rate = sum(
            1 for o in converged if o.final_mask in counts.ne_profiles
        ) / len(converged)
        sce_rate = sum(
            1 for o in converged if o.final_mask in counts.sce_profiles
        ) / len(converged)
    else:
        ne_rate = sce_rate = 0.0
    initial = _mean(
        [o.initial_beneficiary_pct for o in outcomes
         if o.initial_beneficiary_pct is not None]
    )
    eventual = _mean(
        [o.eventual_beneficiary_pct for o in converged
         if o.eventual_beneficiary_pct is not None]
    )
    improved = None
    if initial is not None and eventual is not None:
        improved = eventual > initial
    return InstanceResult(
        instance_index=instance_index,
        ne_fraction=counts.ne_fraction,
        sce_fraction=counts.sce_fraction,
        ne_hits=ne_rate,
        sce_hits=sce_rate,
        sce_hit_exponent=sce_hit_exponent(sce_rate, counts.sce_fraction),
        mean_convergence_stages=_mean([o.stages for o in converged]),
        initial_beneficiary_pct=initial,
        eventual_beneficiary_pct=eventual,
        improved=improved,
        converged_runs=len(converged),
        timeout_runs=len(outcomes) - len(converged),
    )


def improvement_rating(
    instances: Sequence[NetworkInstance],
    rest_params: RestParams,
    runs_per_instance: int,
    delta: float = DEFAULT_DELTA,
    master_seed: int = 0,
) -> tuple[float, list[InstanceResult]]:
    """Share of instances whose eventual beneficiary pct beats the initial."""
    results = [
        evaluate_instance(inst, rest_params, runs_per_instance, delta,
                          master_seed, index)
        for index, inst in enumerate(instances)
    ]
    scored = [r for r in results if r.improved is not None]
    if not scored:
        raise ValueError("no instance produced scoreable runs")
    share = sum(1 for r in scored if r.improved) / len(scored)
    return share, results


def congruity(
    status_a: Sequence[NodeStatus], status_b: Sequence[NodeStatus]
) -> float:
    """Proportion of positions with exactly matching labels."""
    if len(status_a) != len(status_b):
        raise ValueError(
            f"status vectors differ in length: {len(status_a)} vs {len(status_b)}"
        )
    if not status_a:
        raise ValueError("empty status vectors")
    agree = sum(1 for a, b in zip(status_a, status_b) if a is b)
    return agree / len(status_a)


def pd_heuristic_status(
    attackers: AttackerSet, threshold: int
) -> tuple[NodeStatus, ...]:
    """Guess all statuses from |A| alone, Prisoners'-Dilemma style.

    A crowd of attackers above the threshold is presumed self-defeating
    (attackers lose, neutrals coast); a small one is presumed parasitic
    (attackers gain, neutrals suffer).
    """
    if not 0 <= threshold <= attackers.node_count:
        raise ValueError(
            f"threshold {threshold} outside [0, {attackers.node_count}]"
        )
    crowded = len(attackers) > threshold
    return tuple(
        (NodeStatus.LOSE if crowded else NodeStatus.DONT_LOSE)
        if i in attackers
        else (NodeStatus.DONT_MIND if crowded else NodeStatus.MIND)
        for i in range(attackers.node_count)
    )


def informed_gambler_congruity(
    corpus: Mapping[int, Sequence[NodeStatus]], node_count: int
) -> tuple[dict[int, float], float]:
    """Expected congruity of marginal-probability guesses, per profile.

    The gambler knows, per node, the corpus-wide chance of LOSE when
    attacking and of MIND when neutral, and bets accordingly; the score
    is the expected number of label matches.  Nodes a corpus never shows
    on one side fall back to an even-odds 0.5 marginal.
    """
    att_seen = [0] * node_count
    att_lose = [0] * node_count
    neu_seen = [0] * node_count
    neu_mind = [0] * node_count
    for mask, statuses in corpus.items():
        if len(statuses) != node_count:
            raise ValueError(f"profile {mask}: expected {node_count} statuses")
        for i, status in enumerate(statuses):
            if mask >> i & 1:
                att_seen[i] += 1
                att_lose[i] += status is NodeStatus.LOSE
            else:
                neu_seen[i] += 1
                neu_mind[i] += status is NodeStatus.MIND
    q_att = [att_lose[i] / att_seen[i] if att_seen[i] else 0.5
             for i in range(node_count)]
    q_neu = [neu_mind[i] / neu_seen[i] if neu_seen[i] else 0.5
             for i in range(node_count)]
    per_profile: dict[int, float] = {}
    for mask, statuses in corpus.items():
        expected = 0.0
        for i, status in enumerate(statuses):
            if mask >> i & 1:
                expected += q_att[i] if status is NodeStatus.LOSE else 1 - q_att[i]
            else:
                expected += q_neu[i] if status is NodeStatus.MIND else 1 - q_neu[i]
        per_profile[mask] = expected / node_count
    mean = sum(per_profile.values()) / len(per_profile)
    return per_profile, mean


@dataclass(frozen=True)
class SweepCell:
    """Aggregates for one (m, x0) configuration across all instances."""

    m: int
    x0: float
    mean_convergence_stages: float | None
    mean_sce_hit_exponent: float | None
    nondeterminate_count: int
    mean_improvement_share: float | None
    instances: int
    timeout_runs: int


def _evaluate_worker(
    args: tuple[NetworkInstance, RestParams, int, float, int, int],
) -> InstanceResult:
    return evaluate_instance(*args)


def campaign(
    instances: Sequence[NetworkInstance],
    rest_params: RestParams,
    runs: int,
    delta: float = DEFAULT_DELTA,
    master_seed: int = 0,
    jobs: int | None = None,
) -> list[InstanceResult]:
    """Evaluate every instance; parallelism never changes the output.

    Seeds derive from (master_seed, instance index), so splitting the
    work across processes is free of cross-talk and results are merged
    back in instance order.
    """
    work = [
        (inst, rest_params, runs, delta, master_seed, index)
        for index, inst in enumerate(instances)
    ]
    if jobs is not None and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_worker, work, chunksize=1))
    else:
        results = [_evaluate_worker(item) for item in work]
    return sorted(results, key=lambda r: r.instance_index)


def sweep(
    instances: Sequence[NetworkInstance],
    m_values: Sequence[int],
    x0_values: Sequence[float],
    rest_params_base: RestParams = RestParams(),
    runs: int = 100,
    delta: float = DEFAULT_DELTA,
    master_seed: int = 0,
    jobs: int | None = None,
) -> list[SweepCell]:
    """Grid of (m, x0) cells, each a full campaign over the instances.

    Cells reuse the same instances and per-instance seed chains, so the
    grid isolates the effect of the strategy knobs.
    """
    cells: list[SweepCell] = []
    for m in m_values:
        for x0 in x0_values:
            params = RestParams(
                m=m, p=rest_params_base.p, x0=x0,
                max_stages=rest_params_base.max_stages,
            )
            results = campaign(instances, params, runs, delta, master_seed, jobs)
            stages = [
                r.mean_convergence_stages for r in results
                if r.mean_convergence_stages is not None
            ]
            exponents = [
                r.sce_hit_exponent for r in results
                if r.sce_hit_exponent is not None
            ]
            improved = [r.improved for r in results if r.improved is not None]
            cells.append(
                SweepCell(
                    m=m,
                    x0=x0,
                    mean_convergence_stages=_mean(stages),
                    mean_sce_hit_exponent=_mean(exponents),
                    nondeterminate_count=len(results) - len(exponents),
                    mean_improvement_share=(
                        sum(improved) / len(improved) if improved else None
                    ),
                    instances=len(results),
                    timeout_runs=sum(r.timeout_runs for r in results),
                )
            )
    return cells


def gen_instances(
    params: InstanceGenParams, count: int, master_seed: int = 0
) -> list[NetworkInstance]:
    """Batch of instances with per-index derived seeds."""
    return [
        gen_instance(params, derive_seed(master_seed, index))
        for index in range(count)
    ]
