"""File formats, bundled data and seed derivation."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tragame import (
    AccessCategory,
    NodeStatus,
    bundled_instance_path,
    bundled_reference_status_path,
    derive_seed,
    load_instance,
    load_status_corpus,
    read_rows,
    save_instance,
    save_status_corpus,
    write_rows,
)
from tragame.fileio import read_header

from .helpers import random_instance


class TestInstanceFiles:
    def test_bundled_fixture_shape(self, example10):
        assert example10.node_count == 10
        assert len(example10.flows) == 10
        vo = sum(
            1
            for f in example10.flows
            if f.intrinsic_ac is AccessCategory.VO
        )
        assert vo == 5
        assert sorted(f.route.source for f in example10.flows) == list(range(10))

    def test_round_trip(self, tmp_path, example10):
        path = save_instance(tmp_path / "copy.yaml", example10, {"note": "test"})
        loaded = load_instance(path)
        assert loaded.node_count == example10.node_count
        assert loaded.graph.undirected_edges == example10.graph.undirected_edges
        assert [f.route.nodes for f in loaded.flows] == [
            f.route.nodes for f in example10.flows
        ]
        assert [f.intrinsic_ac for f in loaded.flows] == [
            f.intrinsic_ac for f in example10.flows
        ]

    @given(seed=st.integers(0, 5_000))
    def test_round_trip_random(self, seed, tmp_path_factory):
        instance = random_instance(random.Random(seed))
        path = tmp_path_factory.mktemp("io") / "inst.yaml"
        save_instance(path, instance)
        loaded = load_instance(path)
        assert loaded.graph.undirected_edges == instance.graph.undirected_edges
        assert [f.route.nodes for f in loaded.flows] == [
            f.route.nodes for f in instance.flows
        ]

    def test_header_present(self, tmp_path, example10):
        path = save_instance(tmp_path / "inst.yaml", example10, {"seed": 7})
        meta = read_header(path)
        assert "tragame_version" in meta
        assert "timestamp" in meta
        assert meta["seed"] == "7"

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("nodes: 2\nedges: [[0, 1]]\n")
        with pytest.raises(ValueError, match="flows"):
            load_instance(path)


class TestStatusCorpus:
    def test_bundled_reference_loads(self):
        corpus = load_status_corpus(bundled_reference_status_path())
        assert set(corpus) == {389, 1023}
        assert all(len(statuses) == 10 for statuses in corpus.values())
        assert corpus[1023][0] is NodeStatus.LOSE
        assert corpus[389][3] is NodeStatus.MIND

    def test_round_trip(self, tmp_path):
        corpus = {
            5: (NodeStatus.LOSE, NodeStatus.DONT_MIND, NodeStatus.DONT_LOSE),
            0: (NodeStatus.DONT_MIND,) * 3,
        }
        path = save_status_corpus(tmp_path / "c.csv", corpus, {"delta": 0.05})
        assert load_status_corpus(path) == corpus

    def test_incomplete_mask_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "attacker_set_bitmask,node_id,status\n"
            "3,0,lose\n3,2,mind\n"
        )
        with pytest.raises(ValueError, match="cover"):
            load_status_corpus(path)


class TestTabularFormats:
    ROWS = [{"a": 1, "b": "x"}, {"a": 2, "b": "y"}]

    def test_csv_round_trip(self, tmp_path):
        path = write_rows(tmp_path / "t.csv", ("a", "b"), self.ROWS, {"k": "v"})
        rows = read_rows(path)
        assert [r["b"] for r in rows] == ["x", "y"]
        assert read_header(path)["k"] == "v"

    def test_json_lines_round_trip(self, tmp_path):
        path = write_rows(
            tmp_path / "t.jsonl", ("a", "b"), self.ROWS, fmt="json-lines"
        )
        rows = read_rows(path)
        assert rows == self.ROWS

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="format"):
            write_rows(tmp_path / "t.x", ("a",), [], fmt="tsv")


class TestSeedDerivation:
    def test_deterministic(self):
        assert derive_seed(42, 0) == derive_seed(42, 0)

    def test_distinct_across_indices(self):
        seeds = {derive_seed(42, i) for i in range(1000)}
        assert len(seeds) == 1000

    def test_distinct_across_masters(self):
        assert derive_seed(1, 0) != derive_seed(2, 0)

    def test_64_bit_range(self):
        for i in range(100):
            assert 0 <= derive_seed(123456789, i) < 2**64

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            derive_seed(1, -1)
