import pytest

from tragame import (
    AccessCategory,
    E2eFlow,
    HearabilityGraph,
    NetworkInstance,
    Route,
    bundled_instance_path,
    load_instance,
)

VO = AccessCategory.VO
BE = AccessCategory.BE


def build_instance(
    node_count: int,
    edges: list[tuple[int, int]],
    flows: list[tuple[list[int], AccessCategory]],
) -> NetworkInstance:
    graph = HearabilityGraph.from_undirected_edges(node_count, edges)
    return NetworkInstance(
        graph=graph,
        flows=tuple(
            E2eFlow(route=Route(tuple(route)), intrinsic_ac=ac, flow_id=i)
            for i, (route, ac) in enumerate(flows)
        ),
    )


@pytest.fixture(scope="session")
def example10() -> NetworkInstance:
    return load_instance(bundled_instance_path())


@pytest.fixture
def line3() -> NetworkInstance:
    """Three nodes in a row, every node sourcing one flow."""
    return build_instance(
        3,
        [(0, 1), (1, 2)],
        [([0, 1, 2], VO), ([1, 2], BE), ([2, 1, 0], BE)],
    )


@pytest.fixture
def pair2() -> NetworkInstance:
    """Smallest valid instance: two nodes, one single-hop flow each."""
    return build_instance(2, [(0, 1)], [([0, 1], BE), ([1, 0], VO)])
