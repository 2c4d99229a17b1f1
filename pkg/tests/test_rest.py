"""Sigmoid numerics, satisfaction windows, stage stepping, and full runs."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tragame import (
    AttackerSet,
    RestNodeState,
    RestParams,
    Terminal,
    TerminalKind,
    build_payoff_table,
    rest_step,
    run,
    satisfied,
    sigmoid,
)
from tragame.rest import _window_age


class ScriptedRng:
    """Feeds a fixed list of uniforms and counts how many were consumed."""

    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def random(self):
        self.calls += 1
        return self.values.pop(0)


def make_state(node, is_attacker, m, history, **counters):
    state = RestNodeState(node=node, is_attacker=is_attacker, m=m, **counters)
    for cost in history:
        state.record_cost(cost)
    return state


class TestSigmoid:
    def test_midpoint_is_half_p(self):
        assert sigmoid(0.0, p=0.95, x0=1.0) == pytest.approx(0.475, abs=1e-12)
        assert sigmoid(0.0, p=0.4, x0=7.0) == pytest.approx(0.2, abs=1e-12)

    def test_saturates_to_limits(self):
        assert sigmoid(50.0, p=0.95, x0=1.0) == pytest.approx(0.95, abs=1e-9)
        assert sigmoid(-50.0, p=0.95, x0=1.0) == pytest.approx(0.0, abs=1e-9)
        assert sigmoid(100.0, p=0.95, x0=2.0) == pytest.approx(0.95, abs=1e-9)

    def test_unit_argument(self):
        # independent evaluation of p / (1 + e^-1)
        assert sigmoid(1.0, p=0.95, x0=1.0) == pytest.approx(
            0.95 / (1.0 + math.exp(-1.0)), abs=1e-15
        )
        assert sigmoid(1.0) == pytest.approx(0.6945056496985046, abs=1e-15)

    def test_x0_rescales_the_argument(self):
        assert sigmoid(10.0, p=0.95, x0=5.0) == pytest.approx(
            sigmoid(2.0, p=0.95, x0=1.0), abs=1e-15
        )

    @given(
        st.floats(-1e6, 1e6),
        st.floats(-1e6, 1e6),
        st.floats(0.01, 1.0),
        st.floats(0.01, 100.0),
    )
    def test_nondecreasing_and_bounded(self, x, y, p, x0):
        lo, hi = sorted((x, y))
        a, b = sigmoid(lo, p, x0), sigmoid(hi, p, x0)
        assert 0.0 <= a <= b <= p

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError, match="x0"):
            sigmoid(1.0, p=0.95, x0=0.0)
        with pytest.raises(ValueError, match="x0"):
            sigmoid(1.0, p=0.95, x0=-2.0)


class TestSatisfied:
    def test_never_before_stage_m(self):
        assert not satisfied([1.0], 0, 3)
        assert not satisfied([1.0, 1.0], 1, 3)
        assert not satisfied([1.0, 1.0, 1.0], 2, 3)

    def test_window_comparison(self):
        assert satisfied([5.0, 4.0, 3.0], 2, 2)
        assert satisfied([3.0, 4.0, 3.0], 5, 2)
        assert not satisfied([3.0, 2.0, 3.0], 5, 2)
        assert satisfied([2.0, 2.0, 2.0], 2, 2)

    def test_short_history_raises(self):
        with pytest.raises(ValueError, match="recorded costs"):
            satisfied([1.0, 1.0], 5, 2)

    @given(st.lists(st.integers(1, 5), min_size=4, max_size=4))
    def test_satisfied_iff_current_is_window_minimum(self, history):
        assert satisfied(history, 3, 3) == (history[-1] == min(history))

    @given(st.lists(st.integers(1, 5), min_size=1, max_size=9))
    def test_age_m_matches_predicate(self, history):
        m = 4
        age = _window_age(history, m)
        assert 0 <= age <= m
        if len(history) >= m + 1:
            assert (age == m) == satisfied(history, m, m)

    def test_age_counts_longest_run(self):
        assert _window_age([9.0, 1.0, 5.0, 5.0], 3) == 1
        assert _window_age([9.0, 6.0, 5.0, 5.0], 3) == 3
        assert _window_age([5.0, 6.0, 7.0], 3) == 0
        assert _window_age([7.0, 6.0, 5.0], 3) == 2


class TestNodeState:
    def test_history_window_is_m_plus_one(self):
        state = make_state(0, False, 3, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        assert list(state.cost_history) == [3.0, 4.0, 5.0, 6.0]

    def test_satisfied_property_tracks_age(self):
        state = make_state(0, True, 2, [3.0, 3.0])
        assert not state.satisfied
        state.record_cost(3.0)
        assert state.satisfied
        state.record_cost(4.0)
        assert not state.satisfied


class TestRestStep:
    PARAMS = RestParams(m=3, p=0.95, x0=1.0)

    def constant_costs(self, n, value=7.0):
        return lambda mask: [value] * n

    def test_satisfied_nodes_consume_no_draws(self, line3):
        m = self.PARAMS.m
        flat = [7.0] * (m + 1)
        states = [
            make_state(0, True, m, flat),          # satisfied attacker
            make_state(1, True, m, [9.0, 7.0], lose=100),   # dissatisfied
            make_state(2, False, m, [9.0, 7.0], dont_mind=100),  # dissatisfied
        ]
        rng = ScriptedRng([0.5, 0.5])
        mask = rest_step(states, line3, self.PARAMS, rng, self.constant_costs(3))
        # node 1: sigma(+100) ~ p, 0.5 < 0.95 flips out; node 2: sigma(-100) ~ 0 stays
        assert rng.calls == 2
        assert mask == 0b001

    def test_draws_go_in_ascending_node_order(self, line3):
        m = self.PARAMS.m
        states = [
            make_state(0, True, m, [9.0] * (m + 1)),  # satisfied, no draw
            make_state(1, False, m, [9.0, 7.0]),
            make_state(2, False, m, [9.0, 7.0]),
        ]
        # counters are zero: flip probability p/2 for both dissatisfied nodes
        rng = ScriptedRng([0.01, 0.99])
        mask = rest_step(states, line3, self.PARAMS, rng, self.constant_costs(3))
        # node 1 received 0.01 (joins), node 2 received 0.99 (stays out)
        assert mask == 0b011

    def test_counters_attributed_by_previous_membership(self, line3):
        m = self.PARAMS.m
        states = [
            make_state(0, True, m, [7.0, 7.0], lose=100),      # will flip out
            make_state(1, False, m, [7.0, 7.0], mind=100),     # will flip in
        ]
        costs = {0b010: [9.0, 5.0]}
        rest_step(states, line3, self.PARAMS, ScriptedRng([0.1, 0.1]),
                  lambda mask: costs[mask])
        # node 0 left but is charged as an attacker for the 7 -> 9 increase
        assert (states[0].lose, states[0].dont_lose) == (101, 0)
        assert not states[0].is_attacker
        # node 1 joined but is credited as a neutral for the 7 -> 5 drop
        assert (states[1].mind, states[1].dont_mind) == (100, 1)
        assert states[1].is_attacker

    def test_exactly_one_counter_per_stage(self, line3):
        import random as stdlib_random

        rng = stdlib_random.Random(5)
        states = [
            RestNodeState(node=i, is_attacker=False, m=4) for i in range(3)
        ]
        fn = self.constant_costs(3)
        for state in states:
            state.record_cost(fn(0)[state.node])
        for k in range(1, 13):
            rest_step(states, line3, RestParams(m=4), rng, fn)
            assert all(state.counter_total == k for state in states)


class TestRun:
    def test_p_zero_freezes_the_initial_profile(self, line3):
        params = RestParams(m=4, p=0.0, seed=11)
        trace = run(line3, params, AttackerSet.from_nodes([0], 3))
        assert trace.converged
        # no flips ever happen, so costs repeat and stage m is all-satisfied
        assert trace.terminal.stage == params.m
        assert {rec.attackers_mask for rec in trace.stages} == {0b001}
        assert trace.stages[0].satisfied_mask == 0
        assert trace.stages[-1].satisfied_mask == 0b111

    def test_stage_zero_record(self, example10):
        a0 = AttackerSet(0b1010101010, 10)
        trace = run(example10, RestParams(seed=3), a0)
        first = trace.stages[0]
        assert first.stage == 0
        assert first.attackers_mask == a0.mask
        assert first.satisfied_mask == 0
        assert [rec.stage for rec in trace.stages] == list(range(len(trace.stages)))

    def test_no_satisfaction_during_warmup(self, example10):
        trace = run(example10, RestParams(m=10, seed=4), AttackerSet.empty(10))
        for rec in trace.stages[: trace.params.m]:
            assert rec.satisfied_mask == 0

    def test_terminal_is_first_all_satisfied_stage(self, example10):
        trace = run(example10, RestParams(seed=5), AttackerSet.empty(10))
        assert trace.converged
        full = (1 << 10) - 1
        stage = trace.terminal.stage
        assert trace.stages[stage].satisfied_mask == full
        assert all(rec.satisfied_mask != full for rec in trace.stages[:stage])
        assert trace.terminal.a_inf_mask == trace.stages[stage].attackers_mask

    def test_absorption_after_convergence(self, example10):
        trace = run(
            example10, RestParams(seed=6), AttackerSet.empty(10), extra_stages=60
        )
        assert trace.converged
        stage = trace.terminal.stage
        tail = trace.stages[stage:]
        assert len(tail) == 61
        full = (1 << 10) - 1
        assert {rec.attackers_mask for rec in tail} == {trace.terminal.a_inf_mask}
        assert all(rec.satisfied_mask == full for rec in tail)

    def test_timeout_reports_no_a_inf(self, example10):
        params = RestParams(m=10, max_stages=3, seed=7)
        trace = run(example10, params, AttackerSet.empty(10))
        assert not trace.converged
        assert trace.terminal == Terminal(kind=TerminalKind.TIMEOUT)
        assert len(trace.stages) == 4

    def test_same_seed_reproduces_the_trace(self, example10):
        a0 = AttackerSet(0b0000011111, 10)
        one = run(example10, RestParams(seed=99), a0)
        two = run(example10, RestParams(seed=99), a0)
        assert one == two

    def test_table_row_cost_fn_matches_default_model(self, example10):
        # the vectorized table and the scalar rank model must drive REST
        # through identical trajectories
        table = build_payoff_table(example10)
        a0 = AttackerSet(0b1100000011, 10)
        via_model = run(example10, RestParams(seed=21), a0)
        via_table = run(example10, RestParams(seed=21), a0, cost_fn=table.row)
        assert via_model.terminal == via_table.terminal
        assert [r.attackers_mask for r in via_model.stages] == [
            r.attackers_mask for r in via_table.stages
        ]
        assert all(
            tuple(a.costs) == tuple(b.costs)
            for a, b in zip(via_model.stages, via_table.stages)
        )

    def test_cost_fn_called_once_per_stage(self, example10):
        table = build_payoff_table(example10)
        calls = []

        def counting(mask):
            calls.append(mask)
            return table.row(mask)

        trace = run(example10, RestParams(seed=8), AttackerSet.empty(10),
                    cost_fn=counting)
        assert len(calls) == len(trace.stages)

    def test_fixture_always_converges(self, example10):
        table = build_payoff_table(example10)
        for seed in range(20):
            trace = run(
                example10,
                RestParams(m=10, max_stages=10_000, seed=seed),
                AttackerSet.empty(10),
                cost_fn=table.row,
            )
            assert trace.converged
            assert trace.terminal.stage >= trace.params.m

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            RestParams(m=0)
        with pytest.raises(ValueError):
            RestParams(p=1.0)
        with pytest.raises(ValueError):
            RestParams(p=-0.1)
        with pytest.raises(ValueError):
            RestParams(x0=0.0)
        with pytest.raises(ValueError):
            RestParams(max_stages=0)
