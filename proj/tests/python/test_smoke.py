"""Smoke tests for the python bindings against the built extension module."""

import json
import math

import numpy as np
import pytest

import rtnmpc


def test_matrix_exponential_nilpotent():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(
        rtnmpc.matrix_exponential(m), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15
    )


def test_discretize_double_integrator():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B = np.array([[0.0], [1.0]])
    A_T, B_T = rtnmpc.discretize_exact(A, B, 0.1)
    np.testing.assert_allclose(A_T, [[1.0, 0.1], [0.0, 1.0]], atol=1e-14)
    np.testing.assert_allclose(B_T, [[0.005], [0.1]], atol=1e-12)


def test_dare_golden_ratio():
    one = np.ones((1, 1))
    P, residual = rtnmpc.solve_dare(one, one, one, one)
    assert residual <= 1e-10
    assert P[0, 0] == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-10)
    K = rtnmpc.lqr_gain(one, one, P, one)
    assert K[0, 0] == pytest.approx(-P[0, 0] / (1 + P[0, 0]), abs=1e-12)


def test_certify_default_study():
    cert = rtnmpc.certify(rtnmpc.default_config_text())
    assert cert["kappa_hat"] == pytest.approx(1.0 / 3.0, abs=1e-12)
    evals = np.linalg.eigvalsh(cert["P"])
    assert cert["a1"] == pytest.approx(evals[0], rel=1e-12)
    assert cert["a2"] == pytest.approx(evals[-1], rel=1e-12)
    assert cert["a3"] > 0
    assert cert["dare_residual"] <= 1e-10
    assert 0 < cert["T_star"] < cert["T0"]
    assert cert["T2"] <= cert["T1"] <= cert["T0"]
    assert cert["lyap_curve"].shape == (40, 2)
    assert (cert["lyap_curve"][:, 1] > 0).all()
    # derived-field formulas
    assert cert["eta"] == pytest.approx(
        cert["L_psi_u"] + cert["L_psi_x"] * cert["sigma"], rel=1e-15
    )
    assert cert["gamma_hat"] == pytest.approx(
        cert["gamma"] / math.sqrt(cert["a1"]), rel=1e-15
    )


def test_certify_is_deterministic():
    a = rtnmpc.certify(rtnmpc.default_config_text())
    b = rtnmpc.certify(rtnmpc.default_config_text())
    assert a["T_star"] == b["T_star"]
    np.testing.assert_array_equal(a["eig_curve"], b["eig_curve"])


def test_aux_eigenvalues_against_numpy():
    cert = rtnmpc.certify(rtnmpc.default_config_text())
    T = cert["T_star"] / 2
    l1, l2 = rtnmpc.aux_eigenvalues(
        cert["a_bar"], cert["mu"], cert["gamma_hat"], cert["kappa_hat"],
        cert["sigma"], cert["theta"], T,
    )
    kappa = cert["kappa_hat"] * (1 + T * cert["sigma"] * cert["theta"])
    A = np.array(
        [
            [math.sqrt(1 - T * cert["a_bar"]), math.sqrt(T * cert["mu"])],
            [T * cert["gamma_hat"], kappa],
        ]
    )
    ref = sorted(np.linalg.eigvals(A), key=abs, reverse=True)
    assert abs(l1 - ref[0]) <= 1e-12
    assert abs(l2 - ref[1]) <= 1e-12
    assert abs(l1) < 1.0


def test_simulate_certified_rollout():
    config = json.loads(rtnmpc.default_config_text())
    config["simulation"]["N"] = 300
    out = rtnmpc.simulate(json.dumps(config))
    assert not out["diverged"]
    assert out["domination_pass"]
    assert out["V"][-1] < out["V"][0]
    assert out["E"][-1] < out["E"][0]
    assert (out["margin_nu"] >= -1e-9).all()
    assert (out["margin_eps"] >= -1e-9).all()


def test_invalid_config_raises():
    with pytest.raises(rtnmpc.RtnmpcError):
        rtnmpc.certify("{}")
