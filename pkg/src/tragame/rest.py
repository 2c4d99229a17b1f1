"""REST multistage strategy: counters, sigmoid flips, satisfaction window.

Stages run in lockstep.  Each node keeps four counters recording how
stages ended for it (cost increased or not, while attacking or not) and a
window of its last m+1 stage costs.  A node is satisfied at stage k >= m
when its current cost is no worse than each of the previous m; satisfied
nodes keep their strategy, dissatisfied ones flip with a probability read
off a sigmoid of the relevant counter difference.  Once every node is
satisfied the profile can never change again (flips require
dissatisfaction and repeating costs preserve satisfaction), so the
all-satisfied stage is absorbing and taken as convergence.
"""

from __future__ import annotations

import enum
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .costs import RankCostModel, RankParams
from .model import AttackerSet, NetworkInstance

DEFAULT_M = 10
DEFAULT_P = 0.95
DEFAULT_X0 = 1.0
DEFAULT_MAX_STAGES = 100_000

CostFn = Callable[[int], Sequence[float]]


@dataclass(frozen=True)
class RestParams:
    """Strategy knobs; p < 1 is what makes convergence almost sure."""

    m: int = DEFAULT_M
    p: float = DEFAULT_P
    x0: float = DEFAULT_X0
    max_stages: int = DEFAULT_MAX_STAGES
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("satisfaction threshold m must be at least 1")
        if not 0 <= self.p < 1:
            raise ValueError("sigmoid ceiling p must lie in [0, 1)")
        if self.x0 <= 0:
            raise ValueError("sigmoid scale x0 must be positive")
        if self.max_stages < 1:
            raise ValueError("max_stages must be at least 1")


def sigmoid(x: float, p: float = DEFAULT_P, x0: float = DEFAULT_X0) -> float:
    """p / (1 + e^(-x/x0)); computed on the stable branch for either sign."""
    if x0 <= 0:
        raise ValueError("sigmoid scale x0 must be positive")
    z = x / x0
    if z >= 0:
        return p / (1.0 + math.exp(-z))
    e = math.exp(z)
    return p * e / (1.0 + e)


def satisfied(history: Sequence[float], k: int, m: int) -> bool:
    """Stage-k satisfaction: never before stage m, then a window test.

    ``history`` must hold the costs of stages k-m..k (older entries may
    be absent before stage m).
    """
    if k < m:
        return False
    if len(history) < m + 1:
        raise ValueError(f"need {m + 1} recorded costs at stage {k}")
    current = history[-1]
    return all(current <= history[-1 - lag] for lag in range(1, m + 1))


def _window_age(history: Sequence[float], m: int) -> int:
    """Longest run v <= m with current cost <= each of the previous v costs."""
    current = history[-1]
    age = 0
    for lag in range(1, min(len(history) - 1, m) + 1):
        if current <= history[-1 - lag]:
            age += 1
        else:
            break
    return age


@dataclass
class RestNodeState:
    """Per-node mutable state; counters only ever grow."""

    node: int
    is_attacker: bool
    m: int
    lose: int = 0
    dont_lose: int = 0
    mind: int = 0
    dont_mind: int = 0
    cost_history: deque = field(default_factory=deque)
    satisfaction_age: int = 0

    def __post_init__(self) -> None:
        self.cost_history = deque(self.cost_history, maxlen=self.m + 1)

    @property
    def satisfied(self) -> bool:
        return self.satisfaction_age == self.m

    @property
    def counter_total(self) -> int:
        return self.lose + self.dont_lose + self.mind + self.dont_mind

    def record_cost(self, cost: float) -> None:
        self.cost_history.append(cost)
        self.satisfaction_age = _window_age(self.cost_history, self.m)


class TerminalKind(enum.Enum):
    CONVERGED = "converged"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class Terminal:
    kind: TerminalKind
    a_inf_mask: int | None = None
    stage: int | None = None


@dataclass(frozen=True)
class StageRecord:
    stage: int
    attackers_mask: int
    costs: tuple[float, ...]
    satisfied_mask: int

    def dissatisfied_count(self, node_count: int) -> int:
        return node_count - self.satisfied_mask.bit_count()


@dataclass(frozen=True)
class RestTrace:
    params: RestParams
    a0_mask: int
    node_count: int
    stages: tuple[StageRecord, ...]
    terminal: Terminal

    @property
    def converged(self) -> bool:
        return self.terminal.kind is TerminalKind.CONVERGED

    @property
    def final_mask(self) -> int:
        return self.stages[-1].attackers_mask


def rest_step(
    states: list[RestNodeState],
    instance: NetworkInstance,
    params: RestParams,
    rng: random.Random,
    cost_fn: CostFn | None = None,
) -> int:
    """Advance one stage, mutating ``states``; returns the new bitmask.

    Membership first: a dissatisfied node consumes exactly one uniform
    draw (ascending node id) and flips with the sigmoid probability of
    its counter difference; satisfied nodes consume no draws.  Counters
    are then attributed by membership in the PREVIOUS profile, comparing
    the new stage's cost against the previous stage's.
    """
    if cost_fn is None:
        cost_fn = RankCostModel(instance).node_costs
    new_mask = 0
    for state in states:
        if state.satisfied:
            flip = False
        else:
            if state.is_attacker:
                prob = sigmoid(state.lose - state.dont_lose, params.p, params.x0)
            else:
                prob = sigmoid(state.mind - state.dont_mind, params.p, params.x0)
            flip = rng.random() < prob
        member = state.is_attacker != flip
        if member:
            new_mask |= 1 << state.node
    costs = cost_fn(new_mask)
    for state in states:
        increased = costs[state.node] > state.cost_history[-1]
        if state.is_attacker:
            if increased:
                state.lose += 1
            else:
                state.dont_lose += 1
        else:
            if increased:
                state.mind += 1
            else:
                state.dont_mind += 1
        state.is_attacker = bool(new_mask >> state.node & 1)
        state.record_cost(costs[state.node])
    return new_mask


def run(
    instance: NetworkInstance,
    params: RestParams,
    a0: AttackerSet,
    rank_params: RankParams | None = None,
    cost_fn: CostFn | None = None,
    extra_stages: int = 0,
) -> RestTrace:
    """Iterate stages until the all-satisfied absorbing state or timeout.

    ``extra_stages`` forces recording that many stages beyond convergence
    (for absorption checks); the terminal still names the first
    all-satisfied stage.
    """
    instance.ensure_valid()
    n = instance.node_count
    if cost_fn is None:
        cost_fn = RankCostModel(instance, rank_params or RankParams()).node_costs
    rng = random.Random(params.seed)
    costs0 = cost_fn(a0.mask)
    states = [
        RestNodeState(node=i, is_attacker=i in a0, m=params.m) for i in range(n)
    ]
    for state in states:
        state.record_cost(costs0[state.node])
    records = [
        StageRecord(stage=0, attackers_mask=a0.mask, costs=tuple(costs0),
                    satisfied_mask=0)
    ]
    terminal: Terminal | None = None
    remaining_extra = extra_stages
    for k in range(1, params.max_stages + 1):
        mask = rest_step(states, instance, params, rng, cost_fn)
        satisfied_mask = 0
        for state in states:
            if state.satisfied:
                satisfied_mask |= 1 << state.node
        records.append(
            StageRecord(
                stage=k,
                attackers_mask=mask,
                costs=tuple(states[i].cost_history[-1] for i in range(n)),
                satisfied_mask=satisfied_mask,
            )
        )
        if terminal is None and satisfied_mask == (1 << n) - 1:
            terminal = Terminal(
                kind=TerminalKind.CONVERGED, a_inf_mask=mask, stage=k
            )
        if terminal is not None:
            if remaining_extra == 0:
                break
            remaining_extra -= 1
    if terminal is None:
        terminal = Terminal(kind=TerminalKind.TIMEOUT)
    return RestTrace(
        params=params,
        a0_mask=a0.mask,
        node_count=n,
        stages=tuple(records),
        terminal=terminal,
    )
