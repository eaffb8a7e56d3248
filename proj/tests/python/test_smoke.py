import numpy as np
import pytest

import ridgeboost as rb


def test_ridge_primal_dual_agree():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(30, 2))
    z = rng.normal(size=30)
    beta = rb.fit_ridge_primal(x, z, 0.1)
    c = rb.fit_ridge_dual(x @ x.T, z, 0.1)
    np.testing.assert_allclose(x @ beta, x @ x.T @ c, atol=1e-10)


def test_equivalence_and_contraction():
    rng = np.random.default_rng(1)
    phi = rng.normal(size=(40, 5))
    z = rng.normal(size=40)
    t = rng.normal(size=5)
    assert rb.check_equivalence(phi, z, t, 0.1) <= 1e-8 * (1 + abs(t @ rb.fit_ridge_primal(phi, z, 0.1)))
    assert 0 < rb.contraction_factor(phi, 0.1) < 1
    suite = rb.run_equivalence_suite(30, 3)
    assert suite["failures"] == 0 and suite["instances"] == 30


def test_boost_and_estimate():
    x, y = rb.draw_dataset(0.0, 200, 4)
    assert x.shape == (200, 3) and y.shape == (200,)
    model = rb.fit_boost(x, y, rb.Kernel.rbf(2.0), 200 ** -1.5, init_lambda=200 ** -0.5)
    assert model.mae_after <= model.mae_before
    est = rb.estimate(model, rb.average_derivative(x, 0, 0.1))
    assert est["ci_low"] < est["theta_hat"] < est["ci_high"]
    assert est["std_error"] > 0
    rows = rb.profile(model, [rb.counterfactual_mean(x, 2, a) for a in (-1.0, 0.0, 1.0)])
    assert [r["status"] for r in rows] == ["ok"] * 3
    report = model.audit()
    assert report["bound_holds"]


def test_functional_and_errors():
    theta = rb.missing_mean(np.array([[1.0], [3.0]]))
    assert theta(lambda u: u[:, 0] ** 2) == pytest.approx(5.0)
    with pytest.raises(rb.Error):
        rb.fit_ridge_primal(np.ones((3, 1)), np.ones(3), 0.0)


def test_cli_in_process(tmp_path):
    code, out, _ = rb.cli(["check-equivalence", "--set", "instances=6", "--out", str(tmp_path)])
    assert code == 0 and "equivalence holds" in out
    assert (tmp_path / "resolved.cfg").exists()
    code, _, err = rb.cli(["simulate", "--set", "bogus=1", "--out", str(tmp_path)])
    assert code == 2 and "bogus" in err
