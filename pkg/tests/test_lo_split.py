"""Tests for Lo cluster extraction and Lo split manifests."""

from __future__ import annotations

import numpy as np
import pytest

from molsplit.errors import InputError
from molsplit.molio.dataset import FINGERPRINT_CSV, Dataset, Record
from molsplit.molio.fingerprint import Fingerprint
from molsplit.split import (
    STD_THRESHOLDS,
    SplitKind,
    check_lo_manifest,
    get_lo_folds,
    get_lo_split,
    select_distinct_clusters,
)
from molsplit.synthetic import make_island_dataset


def _island(prefix: str, bits: list[int], values: list[float]) -> list[Record]:
    fp = Fingerprint.from_indices(bits, 64)
    return [Record(f"{prefix}{i}", fp, value=v) for i, v in enumerate(values)]


def _dataset(*groups: list[Record]) -> Dataset:
    return Dataset(tuple(r for group in groups for r in group), source_format=FINGERPRINT_CSV)


@pytest.fixture
def island6():
    # population std of the values is exactly 1.0
    return _dataset(_island("a", [1, 2, 3], [5.0, 7.0, 5.0, 7.0, 5.0, 7.0]))


@pytest.fixture
def synthetic():
    return make_island_dataset(n_islands=6, island_size=(6, 14), n_noise=10, value_spread=1.0, seed=11)


# -- select_distinct_clusters ----------------------------------------------

class TestSelectDistinctClusters:
    def test_six_island_is_one_cluster(self, island6):
        clusters, remaining = select_distinct_clusters(island6, t=0.4, m=5, std_t=0.6)
        assert len(clusters) == 1
        assert clusters[0].members == ("a0", "a1", "a2", "a3", "a4", "a5")
        assert clusters[0].center == "a0"
        assert remaining == []

    def test_equal_values_give_no_cluster(self):
        ds = _dataset(_island("a", [1, 2, 3], [6.0] * 6))
        clusters, remaining = select_distinct_clusters(ds, m=5)
        assert clusters == []
        assert len(remaining) == 6

    def test_too_few_neighbours(self):
        ds = _dataset(_island("a", [1, 2, 3], [5.0, 7.0, 5.0, 7.0, 5.0]))
        clusters, remaining = select_distinct_clusters(ds, m=5)
        assert clusters == []
        assert remaining == ds.ids

    def test_smallest_island_first(self):
        ds = _dataset(
            _island("big", [10, 11, 12], [5.0, 7.0] * 4),
            _island("small", [1, 2, 3], [5.0, 7.0] * 3),
        )
        clusters, _ = select_distinct_clusters(ds, m=5, max_clusters=1)
        assert [c.center for c in clusters] == ["small0"]
        assert len(clusters[0].members) == 6

    def test_unlimited_takes_both(self):
        ds = _dataset(
            _island("big", [10, 11, 12], [5.0, 7.0] * 4),
            _island("small", [1, 2, 3], [5.0, 7.0] * 3),
        )
        clusters, remaining = select_distinct_clusters(ds, m=5)
        assert [c.center for c in clusters] == ["small0", "big0"]
        assert [c.cluster_id for c in clusters] == [0, 1]
        assert remaining == []

    def test_max_clusters_zero(self, island6):
        clusters, remaining = select_distinct_clusters(island6, max_clusters=0)
        assert clusters == []
        assert remaining == island6.ids

    def test_pic50_threshold_is_stricter(self):
        # population std ~0.65: valid for pKi, not for pIC50
        values = [5.0, 6.3, 5.0, 6.3, 5.0, 6.3]
        assert STD_THRESHOLDS["pki"] < float(np.std(values)) < STD_THRESHOLDS["pic50"]
        ds = _dataset(_island("a", [1, 2, 3], values))
        assert len(select_distinct_clusters(ds, std_t=STD_THRESHOLDS["pki"])[0]) == 1
        assert select_distinct_clusters(ds, std_t=STD_THRESHOLDS["pic50"])[0] == []

    def test_seed_perturbs_tie_break(self):
        ds = _dataset(
            _island("a", [1, 2, 3], [5.0, 7.0] * 3),
            _island("b", [10, 11, 12], [5.0, 7.0] * 3),
        )
        centers = {select_distinct_clusters(ds, max_clusters=1, seed=s)[0][0].center for s in range(20)}
        assert centers - {"a0"}

    def test_requires_values(self):
        ds = Dataset(tuple(Record(f"m{i}", Fingerprint.from_indices([1], 64)) for i in range(6)))
        with pytest.raises(InputError, match="no value"):
            select_distinct_clusters(ds)

    @pytest.mark.parametrize("kwargs", [{"t": 0.0}, {"t": 1.2}, {"m": 1}, {"max_clusters": -1}, {"std_t": -0.1}])
    def test_parameter_checks(self, island6, kwargs):
        with pytest.raises(InputError):
            select_distinct_clusters(island6, **kwargs)


# -- get_lo_split ----------------------------------------------------------

class TestGetLoSplit:
    def test_anchor_trains_rest_tests(self, island6):
        manifest = get_lo_split(island6, t=0.4, m=5)
        assert manifest.kind is SplitKind.LO
        fold = manifest.folds[0]
        assert fold.train == ["a0"]
        assert fold.test == ["a1", "a2", "a3", "a4", "a5"]
        assert manifest.anchors == ["a0"]
        assert manifest.removed == []

    def test_zero_clusters_is_identity(self, island6):
        manifest = get_lo_split(island6, max_clusters=0)
        assert manifest.folds[0].train == island6.ids
        assert manifest.folds[0].test == []
        assert manifest.clusters == []

    def test_records_neighbourhood_choice(self, island6):
        params = get_lo_split(island6).parameters
        assert params["neighborhood"] == "center"
        assert params["std_includes_center"] is True

    def test_synthetic_clusters_are_valid(self, synthetic):
        manifest = get_lo_split(synthetic, t=0.4, m=5, std_t=0.6)
        assert manifest.clusters
        assert check_lo_manifest(manifest, synthetic) == []
        for cluster in manifest.clusters:
            assert len(cluster.members) >= 5
            assert float(np.std(cluster.values)) > 0.6

    def test_test_members_are_grouped_by_cluster(self, synthetic):
        manifest = get_lo_split(synthetic)
        expected = [m for c in manifest.clusters for m in c.test_members]
        assert manifest.folds[0].test == expected

    def test_check_flags_moved_member(self, island6):
        manifest = get_lo_split(island6)
        fold = manifest.folds[0]
        fold.test.remove("a3")
        fold.train.append("a3")
        problems = check_lo_manifest(manifest, island6)
        assert any("expected only anchor 'a0'" in p for p in problems)

    def test_check_flags_low_spread(self, island6):
        manifest = get_lo_split(island6)
        manifest.parameters["std_threshold"] = 1.5
        assert any("value std" in p for p in check_lo_manifest(manifest, island6))


class TestGetLoFolds:
    def test_one_fold_per_seed(self, synthetic):
        manifest = get_lo_folds(synthetic, seeds=(0, 1, 2))
        assert manifest.k == 3
        assert manifest.parameters["seeds"] == [0, 1, 2]
        assert {c.fold for c in manifest.clusters} <= {0, 1, 2}
        assert check_lo_manifest(manifest, synthetic) == []

    def test_deterministic(self, synthetic):
        assert get_lo_folds(synthetic).to_json() == get_lo_folds(synthetic).to_json()
