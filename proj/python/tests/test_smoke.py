import itertools
import math
import struct

import numpy as np
import pytest

import bprank


def toy(seed=0, n1=15, n0=12, d=3):
    rng = np.random.default_rng(seed)
    return bprank.Dataset(rng.uniform(-1, 1, (n1, d)), rng.uniform(-1, 1, (n0, d)))


def oracle_moments(data):
    diffs = np.array([p - n for p, n in itertools.product(data.positives, data.negatives)])
    return diffs.mean(axis=0), diffs.T @ diffs / len(diffs)


def test_dataset_shape():
    data = toy()
    assert (data.n1, data.n0, data.dim, len(data)) == (15, 12, 3, 27)
    assert data.skew == pytest.approx(15 / 27)


def test_moments_match_pair_loop():
    data = toy()
    mu, sigma = oracle_moments(data)
    for m in (bprank.batch_moments_fast(data), bprank.batch_moments_naive(data)):
        np.testing.assert_allclose(m.mu, mu, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(m.sigma, sigma, rtol=1e-12, atol=1e-14)


def test_subsample_is_deterministic():
    data = toy()
    a = bprank.subsample_moments(data, 50, 9)
    b = bprank.subsample_moments(data, 50, 9)
    np.testing.assert_array_equal(a.mu, b.mu)
    np.testing.assert_array_equal(a.sigma, b.sigma)


def test_solver_interior_and_boundary():
    m = bprank.PairMoments(np.array([1.0, 0.0]), np.diag([2.0, 1.0]))
    w, diag = bprank.solve_erm(m, bprank.ProblemConfig(1.0, 10.0))
    np.testing.assert_allclose(w, [0.5, 0.0], atol=1e-12)
    assert not diag.constrained_active
    w, diag = bprank.solve_erm(m, bprank.ProblemConfig(1.0, 0.1))
    assert np.linalg.norm(w) == pytest.approx(0.1, rel=1e-10)
    assert diag.constrained_active
    assert diag.lambda_ == pytest.approx(8.0, rel=1e-8)


def test_auc_and_phi_risk_against_loops():
    data = toy(3)
    w = np.array([0.3, -0.2, 0.5])
    sp, sn = data.positives @ w, data.negatives @ w
    credit = sum(1.0 if a > b else 0.5 if a == b else 0.0 for a, b in itertools.product(sp, sn))
    expected_auc = credit / (data.n1 * data.n0)
    expected_phi = np.mean([0.5 * (1 - (a - b)) ** 2 for a, b in itertools.product(sp, sn)])
    assert bprank.auc(data, w) == pytest.approx(expected_auc, abs=1e-15)
    assert bprank.auc_naive(data, w) == pytest.approx(expected_auc, abs=1e-15)
    assert bprank.phi_risk(data, w) == pytest.approx(expected_phi, rel=1e-12)
    report = bprank.evaluate(data, w)
    assert report.auc + report.auc_risk == pytest.approx(1.0)
    assert report.n_pairs == data.n1 * data.n0


def test_training_entry_points():
    data = toy(4, 40, 30)
    cfg = bprank.ProblemConfig(x_star=2.0, w_star=1.0)
    w_fast = bprank.train_bbr(data, cfg)
    w_naive = bprank.train_bbr(data, cfg, naive=True)
    np.testing.assert_allclose(w_fast, w_naive, rtol=1e-10, atol=1e-12)
    w_lcbr = bprank.train_lcbr(data, 200, 1, cfg)
    assert np.linalg.norm(w_lcbr) <= 1.0 + 1e-9
    w_sgd = bprank.train_pairwise_sgd(data, 0.05, 500, 2, 1.0)
    assert np.linalg.norm(w_sgd) <= 1.0 + 1e-12


def test_synthetic_pipeline():
    spec = bprank.random_gmm_spec(4, 2, 0.5, 11)
    assert (spec.dim, spec.k) == (4, 2)
    data = bprank.sample_dataset(spec, 100, 80, 12)
    assert (data.n1, data.n0) == (100, 80)
    pm = bprank.analytic_pair_moments(spec)
    w = bprank.optimal_phi_ranker(spec, bprank.ProblemConfig(1.0, 1.0))
    assert bprank.expected_phi_risk(pm, w) <= bprank.expected_phi_risk(pm, np.zeros(4)) + 1e-12


def test_bounds_are_probabilities():
    b = bprank.BoundInputs(dim=5, x_star=1.0, w_star=1.0, rho=0.5, n=1e6, sigma_n_opnorm=0.5, epsilon=0.1)
    c1, c2 = bprank.constants_c1_c2(1.0, 1.0)
    assert (c1, c2) == (12.0, 5.0)
    for f in (bprank.theorem1_log_tail, bprank.lemma1_log_tail, bprank.theorem3_log_tail):
        p = bprank.tail_probability(f(b))
        assert 0.0 <= p <= 1.0
    assert bprank.theorem2_min_subsample(b) >= 1
    with pytest.raises(bprank.InvalidArgument):
        bprank.BoundInputs(epsilon=-1.0)


def test_model_roundtrip(tmp_path):
    path = str(tmp_path / "m.bin")
    w = np.array([1.5, -2.0, 0.25])
    bprank.save_model(path, w, 3.0)
    with open(path, "rb") as f:
        raw = f.read()
    assert raw[:8] == b"BPRMODEL"
    assert struct.unpack_from("<Q", raw, 12)[0] == 3
    w2, w_star = bprank.load_model(path)
    np.testing.assert_array_equal(w, w2)
    assert w_star == 3.0


def test_libsvm_loading(tmp_path):
    path = tmp_path / "d.svm"
    path.write_text("+1 1:0.5 3:1\n-1 2:2\n")
    data = bprank.load_libsvm(str(path))
    assert (data.n1, data.n0, data.dim) == (1, 1, 3)
    np.testing.assert_array_equal(data.positives, [[0.5, 0.0, 1.0]])
    scaled = bprank.scale_to_ball(data, 1.0)
    assert max(np.linalg.norm(scaled.negatives, axis=1)) == pytest.approx(1.0)
    bad = tmp_path / "bad.svm"
    bad.write_text("2 1:0.5\n")
    with pytest.raises(bprank.LabelError):
        bprank.load_libsvm(str(bad))
    malformed = tmp_path / "malformed.svm"
    malformed.write_text("+1 1:0.5\n-1 0:1\n")
    with pytest.raises(bprank.ParseError):
        bprank.load_libsvm(str(malformed))


def test_untrainable_dataset_raises():
    data = bprank.Dataset(np.zeros((3, 2)), np.zeros((0, 2)))
    with pytest.raises(bprank.Error):
        bprank.train_bbr(data, bprank.ProblemConfig())
    assert math.isfinite(bprank.phi_risk(toy(), np.zeros(3)))
