"""
Rational heights, matrix statistics, edge vectors, PCA and feature records
"""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from periodplan import (
    DatasetError,
    DimensionMismatchError,
    Pencil,
    edge_vector,
    feature_record,
    gm_connection_at,
    matrix_stats,
    pca_fit,
    pca_transform,
    psi,
    psi_entropy,
)
from periodplan._features import (
    FeatureStore,
    PCAModel,
    matrix_channels,
    record_channels,
    timing_rows,
)
from periodplan.types import EdgeLabel


class TestHeights:
    """Test psi and its entropy variant"""

    def test_psi_values(self):
        assert psi(1) == 0.0
        assert psi(0) == 0.0
        assert psi(Fraction(3, 2)) == pytest.approx(math.log(6))
        assert psi(-5) == pytest.approx(math.log(5))
        assert psi(Fraction(-1, 7)) == pytest.approx(math.log(7))

    def test_psi_uses_lowest_terms(self):
        assert psi(Fraction(6, 4)) == psi(Fraction(3, 2))

    def test_psi_entropy(self):
        assert psi_entropy(0) == 0.0
        assert psi_entropy(Fraction(3, 2)) == pytest.approx(math.log(3) ** 2 + math.log(2) ** 2)


class TestMatrixStats:
    """Test the height statistics of matrix stacks"""

    def test_small_matrix(self):
        stats = matrix_stats([[Fraction(1, 2), 0], [3, -1]])
        assert stats.psi_sum == pytest.approx(math.log(6))
        assert stats.psi_entropy == pytest.approx(-(math.log(2) ** 2 + math.log(3) ** 2))
        assert stats.psi_nonzero == 2

    def test_zero_matrix(self):
        stats = matrix_stats([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
        assert (stats.psi_sum, stats.psi_entropy, stats.psi_nonzero) == (0.0, 0.0, 0)

    def test_scalar(self):
        assert matrix_stats(Fraction(1, 12)).psi_nonzero == 1


class TestEdgeVector:
    """Test the 70-dimensional coefficient vector"""

    def test_layout(self, fermat, v4_example):
        v = edge_vector(fermat, v4_example)
        assert v.shape == (70,)
        assert v[0] == 1.0  # x^4 of f
        assert v[34] == 1.0  # w^4 of f
        assert v[35 + 1] == 1.0  # x^3*y of g
        assert v.sum() == 8.0

    def test_rejects_non_quartic(self, fermat):
        from periodplan import Polynomial

        with pytest.raises(DimensionMismatchError):
            edge_vector(fermat, Polynomial.parse("x^3"))


class TestPCA:
    """Test the SVD compression of edge vectors"""

    def test_rank_one_data(self):
        rng = np.random.default_rng(0)
        direction = rng.normal(size=5)
        x = np.outer(rng.normal(size=40), direction) + 3.0
        model = pca_fit(x, 2)
        ratio = model.explained_variance_ratio()
        assert ratio[0] == pytest.approx(1.0)
        assert ratio[1] == pytest.approx(0.0, abs=1e-12)
        cos = abs(model.components[0] @ direction) / np.linalg.norm(direction)
        assert cos == pytest.approx(1.0)

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(20, 4))
        model = pca_fit(x, 4)
        z = pca_transform(model, x)
        assert np.allclose(model.reconstruct(z), x)

    def test_component_count(self):
        x = np.zeros((3, 5))
        with pytest.raises(DimensionMismatchError):
            pca_fit(x, 4)
        with pytest.raises(DimensionMismatchError):
            pca_fit(x, 0)

    def test_transform_dimension(self):
        model = pca_fit(np.eye(4), 2)
        with pytest.raises(DimensionMismatchError):
            model.transform(np.zeros(3))

    @pytest.mark.slow
    def test_four_term_edges_compress_to_23_components(self, four_term_vertices):
        """23 components keep 95% of the variance over the complete V_4 edge set"""
        x = np.array([edge_vector(f, g) for f, g in combinations(four_term_vertices, 2)])
        assert x.shape == (5778, 70)
        ratio = pca_fit(x, 23).explained_variance_ratio()
        assert ratio.sum() >= 0.95
        assert np.all(np.diff(ratio) <= 1e-12)

    def test_save_load(self, tmp_path):
        rng = np.random.default_rng(2)
        model = pca_fit(rng.normal(size=(10, 6)), 3)
        path = tmp_path / "pca.json"
        model.save(path, provenance={"command": "pca"})
        restored = PCAModel.load(path)
        assert restored.k == 3
        assert np.array_equal(restored.components, model.components)
        assert np.array_equal(restored.mean, model.mean)


class TestFeatureRecords:
    """Test assembly of the model inputs of one edge"""

    def test_trivial_pencil(self, fermat):
        pencil = Pencil(fermat, fermat)
        matrices = {t: gm_connection_at(pencil, t) for t in (Fraction(0), Fraction(1))}
        record = feature_record(pencil, matrices)
        assert record.edge == pencil.edge_id
        assert record.basepoints == ["0/1", "1/1"]
        assert record.stats.psi_nonzero == 0
        assert record.pca is None
        channels = record_channels(record)
        assert channels.shape == (2, 21, 21)
        assert not channels.any()

    def test_diagonal_pencil(self, diagonal_pencil):
        matrices = {t: gm_connection_at(diagonal_pencil, t) for t in (Fraction(0), Fraction(1))}
        record = feature_record(diagonal_pencil, matrices)
        assert record.stats.psi_nonzero > 0
        assert np.allclose(record_channels(record), matrix_channels(list(matrices.values())))
        assert len(record.vector) == 70

    def test_missing_basepoint(self, diagonal_pencil):
        matrices = {Fraction(0): gm_connection_at(diagonal_pencil, Fraction(0))}
        with pytest.raises(DatasetError):
            feature_record(diagonal_pencil, matrices)

    def test_with_pca(self, diagonal_pencil):
        matrices = {Fraction(0): gm_connection_at(diagonal_pencil, Fraction(0))}
        rng = np.random.default_rng(3)
        pca = pca_fit(rng.normal(size=(30, 70)), 5)
        record = feature_record(diagonal_pencil, matrices, basepoints=[Fraction(0)], pca=pca)
        assert len(record.pca) == 5

    def test_store_and_timing_rows(self, diagonal_pencil, tmp_path):
        matrices = {Fraction(0): gm_connection_at(diagonal_pencil, Fraction(0))}
        record = feature_record(diagonal_pencil, matrices, basepoints=[Fraction(0)])
        store = FeatureStore(tmp_path / "features.jsonl")
        store.append(record)
        features = store.latest()
        assert features[record.edge].stats == record.stats
        label = EdgeLabel(
            edge=record.edge, elapsed_s=0.5, success=True, order=1, degree=1, budget_s=30
        )
        missing = EdgeLabel(edge="a | b", elapsed_s=30.0, success=False, failure="timeout", budget_s=30)
        rows = timing_rows([label, missing], features)
        assert rows[0].psi_sum == pytest.approx(record.stats.psi_sum)
        assert rows[1].psi_sum is None
        assert rows[1].as_row()[2] == 0
