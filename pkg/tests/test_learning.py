"""
Networks, SGD training, ROC metrics and the product ensemble
"""

import numpy as np
import pytest

from periodplan import (
    DimensionMismatchError,
    DivergenceError,
    EnsembleModel,
    FeatureScorer,
    LearningError,
    Network,
    TrainConfig,
    UndefinedMetricError,
    build_cnn,
    build_mlp,
    ensemble_score,
    evaluate,
    roc,
    train,
    train_ensemble,
)
from periodplan._features import record_channels
from periodplan._metrics import ROC_COLUMNS, write_roc_csv
from periodplan._network import gradient, loss
from periodplan.types.features import FeatureRecord, MatrixStatsRecord
from periodplan.types.matrices import ConnectionRecord


def _zero(net: Network) -> Network:
    net.load_parameters({k: np.zeros_like(v) for k, v in net.parameters().items()})
    return net


def _numeric_gradient(net: Network, x: np.ndarray, y: np.ndarray, key: str, eps: float = 1e-6) -> np.ndarray:
    p = net.parameters()[key]
    out = np.zeros_like(p)
    for j in range(p.size):
        old = p.flat[j]
        p.flat[j] = old + eps
        up = loss(net, x, y)
        p.flat[j] = old - eps
        down = loss(net, x, y)
        p.flat[j] = old
        out.flat[j] = (up - down) / (2 * eps)
    return out


def _fake_records(n: int = 8):
    rng = np.random.default_rng(0)
    records, labels = [], {}
    for i in range(n):
        matrices = [
            ConnectionRecord(
                f=f"f{i}",
                g=f"g{i}",
                t0=t0,
                size=4,
                entries=[f"{int(v)}/{1 + i}" for v in rng.integers(-3, 4, size=16)],
            )
            for t0 in ("0/1", "1/1")
        ]
        edge = f"f{i} | g{i}"
        records.append(
            FeatureRecord(
                edge=edge,
                vector=[0.0] * 70,
                pca=rng.normal(size=3).tolist(),
                basepoints=["0/1", "1/1"],
                matrices=matrices,
                stats=MatrixStatsRecord(psi_sum=1.0, psi_entropy=-1.0, psi_nonzero=1),
            )
        )
        labels[edge] = i % 4 != 0
    return records, labels


class TestNetworks:
    """Test forward passes and exact gradients"""

    def test_zero_parameters_score_half(self):
        net = _zero(build_mlp(3, [4, 2], seed=0))
        x = np.ones((2, 3))
        assert np.allclose(net.forward(x), 0.5)
        assert loss(net, x, np.array([1.0, 0.0])) == pytest.approx(0.5)

    def test_single_sample_input(self):
        net = build_mlp(3, [2], seed=0)
        assert net.predict(np.zeros(3)).shape == (1,)
        with pytest.raises(DimensionMismatchError):
            net.forward(np.zeros((2, 4)))

    def test_mlp_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        net = build_mlp(3, [5, 4], seed=2)
        x = rng.normal(size=(6, 3))
        y = rng.integers(0, 2, size=6).astype(float)
        exact = gradient(net, x, y)
        for key in exact:
            assert np.allclose(exact[key], _numeric_gradient(net, x, y, key), atol=1e-6, rtol=1e-4), key

    def test_cnn_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        net = build_cnn(1, grid=4, conv_channels=[2], dense_width=3, seed=4)
        x = rng.normal(size=(3, 1, 4, 4))
        y = np.array([1.0, 0.0, 1.0])
        exact = gradient(net, x, y)
        assert set(exact) == set(net.parameters())
        for key in exact:
            assert np.allclose(exact[key], _numeric_gradient(net, x, y, key), atol=1e-6, rtol=1e-4), key

    def test_duplicated_batch_doubles_gradient(self):
        rng = np.random.default_rng(5)
        net = build_mlp(2, [3], seed=6)
        x = rng.normal(size=(4, 2))
        y = np.array([1.0, 0.0, 0.0, 1.0])
        single = gradient(net, x, y)
        double = gradient(net, np.concatenate([x, x]), np.concatenate([y, y]))
        for key in single:
            assert np.allclose(double[key], 2 * single[key])

    def test_save_load(self, tmp_path):
        net = build_cnn(2, grid=5, conv_channels=[2], dense_width=3, seed=1)
        path = tmp_path / "cnn.json"
        net.save(path, provenance={"command": "train"})
        restored = Network.load(path)
        x = np.random.default_rng(0).normal(size=(2, 2, 5, 5))
        assert np.array_equal(restored.forward(x), net.forward(x))
        assert restored.spec == net.spec

    def test_copy_is_independent(self):
        net = build_mlp(2, [2], seed=0)
        clone = net.copy()
        clone.parameters()["0.W"][:] = 0.0
        assert net.parameters()["0.W"].any()


class TestTraining:
    """Test minibatch SGD"""

    def test_zero_step_leaves_parameters(self):
        net = build_mlp(2, [3], seed=0)
        before = {k: v.copy() for k, v in net.parameters().items()}
        x = np.random.default_rng(0).normal(size=(10, 2))
        result = train(net, TrainConfig(gamma=0.0, epochs=3, batch_size=4), x, np.ones(10))
        assert len(result.losses) == 3
        assert result.iterations == 9
        for key, value in net.parameters().items():
            assert np.array_equal(value, before[key])

    def test_logistic_regression_separates(self):
        rng = np.random.default_rng(7)
        x = rng.normal(scale=2.0, size=(400, 2))
        x = x[np.abs(x[:, 0] + x[:, 1]) > 0.5]
        y = (x[:, 0] + x[:, 1] > 0).astype(float)
        net = build_mlp(2, [], seed=0)
        result = train(net, TrainConfig(gamma=0.5, epochs=100, batch_size=16, seed=1), x, y)
        assert result.losses[-1] < result.losses[0]
        accuracy = evaluate(net.forward(x), y.astype(bool), 0.5).accuracy
        assert accuracy >= 0.95

    def test_deterministic(self):
        x = np.random.default_rng(2).normal(size=(20, 3))
        y = (x[:, 0] > 0).astype(float)
        cfg = TrainConfig(gamma=0.1, decay=0.01, epochs=5, batch_size=3, seed=9)
        a = train(build_mlp(3, [4], seed=1), cfg, x, y)
        b = train(build_mlp(3, [4], seed=1), cfg, x, y)
        assert a.losses == b.losses
        for key, value in a.network.parameters().items():
            assert np.array_equal(value, b.network.parameters()[key])

    def test_misaligned_data(self):
        with pytest.raises(LearningError):
            train(build_mlp(2, []), TrainConfig(), np.zeros((3, 2)), np.zeros(2))

    def test_step_schedule(self):
        cfg = TrainConfig(gamma=1.0, decay=1.0)
        assert cfg.step_size(0) == 1.0
        assert cfg.step_size(3) == 0.25

    def test_loss_decreases_from_initialization(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(200, 4))
        y = (x[:, 0] - x[:, 2] > 0).astype(float)
        net = build_mlp(4, [8], seed=2)
        initial = loss(net, x, y)
        result = train(net, TrainConfig(gamma=0.05, epochs=40, batch_size=20, seed=0), x, y)
        assert result.losses[-1] < initial
        assert loss(net, x, y) == pytest.approx(result.losses[-1])

    def test_non_finite_gradient_is_never_applied(self):
        """Training stops on a NaN gradient with the last finite parameters"""
        net = build_mlp(2, [], seed=0)
        before = {k: v.copy() for k, v in net.parameters().items()}
        x = np.array([[1.0, 0.0], [np.nan, 1.0], [0.0, 1.0]])
        with pytest.raises(DivergenceError) as exc_info:
            train(net, TrainConfig(gamma=0.5, epochs=2, batch_size=3), x, np.array([1.0, 0.0, 1.0]))
        assert exc_info.value.iteration == 1
        for key, value in net.parameters().items():
            assert np.array_equal(value, before[key])


class TestMetrics:
    """Test confusion counts and ROC curves"""

    def test_evaluate_counts(self):
        c = evaluate([0.9, 0.4, 0.6, 0.1, 0.5], [True, True, False, False, True], 0.5)
        assert (c.tp, c.fp, c.fn, c.tn) == (2, 1, 1, 1)
        assert c.tpr == pytest.approx(2 / 3)
        assert c.tnr == pytest.approx(0.5)
        assert c.accuracy == pytest.approx(0.6)

    def test_perfect_scores(self):
        labels = [True, False, True, False]
        curve = roc([1.0, 0.0, 1.0, 0.0], labels)
        assert curve.auc == pytest.approx(1.0)
        assert curve.points[-1].tau == float("inf")
        assert (curve.points[-1].tp, curve.points[-1].fp) == (0, 0)
        assert (curve.points[0].tp, curve.points[0].fp) == (2, 2)

    def test_known_auc(self):
        curve = roc([0.1, 0.4, 0.35, 0.8], [False, False, True, True])
        assert curve.auc == pytest.approx(0.75)
        assert len(curve.points) == 5

    def test_random_scores(self):
        rng = np.random.default_rng(11)
        labels = rng.integers(0, 2, size=4000).astype(bool)
        assert roc(rng.random(4000), labels).auc == pytest.approx(0.5, abs=0.05)

    def test_single_class(self):
        with pytest.raises(UndefinedMetricError):
            roc([0.2, 0.7], [True, True])

    def test_length_mismatch(self):
        with pytest.raises(LearningError):
            evaluate([0.1, 0.2], [True])

    def test_write_csv(self, tmp_path):
        curve = roc([0.2, 0.7], [False, True])
        path = tmp_path / "roc.csv"
        write_roc_csv(curve, path, provenance={"command": "roc", "seed": 3})
        lines = path.read_text().splitlines()
        assert lines[0] == "# command: roc"
        assert lines[1] == "# seed: 3"
        assert lines[2] == ",".join(ROC_COLUMNS)
        assert len(lines) == 3 + len(curve.points)
        assert lines[-1].startswith("inf,0,0,1,1,")


class TestEnsemble:
    """Test the product of the MLP and CNN scores"""

    def _model(self) -> EnsembleModel:
        return EnsembleModel(
            mlp=build_mlp(3, [4], seed=0),
            cnn=build_cnn(2, grid=4, conv_channels=[2], dense_width=3, seed=1),
        )

    def test_score_is_product(self):
        model = self._model()
        records, _ = _fake_records(3)
        scores = model.score_records(records)
        vectors = np.array([r.pca for r in records])
        channels = np.stack([record_channels(r) for r in records])
        mlp = model.mlp.forward(vectors)
        assert np.allclose(scores, mlp * model.cnn.forward(channels))
        assert np.all(scores <= np.minimum(mlp, model.cnn.forward(channels)))
        assert np.all((scores > 0) & (scores < 1))
        assert np.array_equal(ensemble_score(model, vectors, channels), scores)

    @pytest.mark.parametrize("seed", range(10))
    def test_score_never_exceeds_either_network(self, seed):
        rng = np.random.default_rng(seed)
        model = EnsembleModel(
            mlp=build_mlp(3, [5], seed=seed, init_scale=3.0),
            cnn=build_cnn(2, grid=4, conv_channels=[2], dense_width=3, seed=seed + 1, init_scale=3.0),
        )
        vectors = rng.normal(scale=5.0, size=(25, 3))
        channels = rng.normal(scale=5.0, size=(25, 2, 4, 4))
        scores = ensemble_score(model, vectors, channels)
        bound = np.minimum(model.mlp.forward(vectors), model.cnn.forward(channels))
        assert np.all(scores <= bound)
        assert np.all(scores >= 0)

    def test_save_load(self, tmp_path):
        model = self._model()
        records, _ = _fake_records(4)
        path = tmp_path / "ensemble.json"
        model.save(path)
        assert np.array_equal(EnsembleModel.load(path).score_records(records), model.score_records(records))

    def test_missing_pca_vector(self):
        records, _ = _fake_records(1)
        bare = records[0].model_copy(update={"pca": None})
        with pytest.raises(LearningError):
            self._model().score_records([bare])

    def test_feature_scorer(self):
        model = self._model()
        records, _ = _fake_records(2)
        scorer = FeatureScorer(model, {r.edge: r for r in records})
        out = scorer.score([("f0", "g0"), ("x", "y"), ("g1", "f1")])
        assert out[1] == 0.0
        assert out[0] == pytest.approx(float(model.score_records([records[0]])[0]))
        assert out[2] == pytest.approx(float(model.score_records([records[1]])[0]))

    def test_train_ensemble_deterministic(self):
        records, labels = _fake_records(8)
        kwargs = dict(
            config=TrainConfig(gamma=0.1, epochs=2, batch_size=4, seed=0),
            mlp_widths=[4],
            cnn_channels=[2],
            cnn_dense=3,
            seed=0,
        )
        a = train_ensemble(records, labels, **kwargs)
        b = train_ensemble(records, labels, **kwargs)
        assert np.array_equal(a.score_records(records), b.score_records(records))
        assert a.cnn.spec.seed == 1
        assert a.cnn.spec.grid == 4
