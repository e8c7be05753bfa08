import math

import pytest

import icb


@pytest.fixture
def params():
    return icb.ModelParams()


@pytest.fixture
def bounds(params):
    return icb.DomainBounds(params)


def test_step_matches_free_fall_and_contact(params):
    assert icb.step_explicit(params, 1.0, 0.0) == pytest.approx(-9.81 * 0.005, abs=1e-15)
    # Resting on the ground: the impulse cancels gravity.
    assert icb.step_explicit(params, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert icb.contact_impulse(params, 0.0, 0.0) == pytest.approx(9.81 * 0.005, abs=1e-15)


def test_losses_vanish_on_model_outputs(params, bounds):
    for z, v in [(1.0, 2.0), (0.0, -3.0), (0.01, -5.0)]:
        y = icb.step_explicit(params, z, v)
        for kind in ("explicit", "naive_implicit", "violation_implicit"):
            assert icb.loss(kind, params, z, v, y, 0.25, bounds.b_lambda).value <= 1e-12


def test_unknown_loss_kind_is_rejected(params):
    with pytest.raises(Exception):
        icb.loss("squared", params, 0.0, 0.0, 0.0)


def test_bad_epsilon_is_rejected(params):
    with pytest.raises(ValueError):
        icb.loss("violation_implicit", params, 0.0, 0.0, 0.0, eps=0.0)


def test_lipschitz_constants(params):
    t = icb.lipschitz_table(params, icb.DomainBounds(params, lambda_max=15.05), 0.5)
    assert t["L_f_theta"] == pytest.approx(200.0, rel=1e-12)
    assert t["L_h_lambda"] == pytest.approx(15.05, rel=1e-12)
    assert t["L_lambda_theta_vimp"] == pytest.approx(1.0, rel=1e-12)


def test_bound_and_sample_ratio(params, bounds):
    assert icb.generalization_bound(2, 3, 1, 5, 1.0, 400) == pytest.approx(13.2, rel=1e-12)
    r = icb.sample_complexity_ratio(params, bounds)
    assert r["ratio"] >= 100


def test_graph_distance_and_qg(params, bounds):
    y = icb.step_explicit(params, 1.0, 0.5)
    assert icb.graph_distance(params, bounds, 1.0, 0.5, y).distance <= 1e-6
    r = icb.graph_distance(params, bounds, 1.0, 0.5, y + 0.1)
    assert 0 < r.distance <= 0.1 + 1e-9
    assert icb.epsilon_select(params) == 0.25
    cert = icb.qg_verify(params, bounds, 0.25, samples=200, seed=3)
    assert cert["passed"] and cert["mu"] == 1.0


def test_dataset_and_training(params, bounds):
    data = icb.generate_dataset(params, bounds, 200, seed=4)
    assert len(data) == 200
    assert icb.mean_loss("explicit", params, data) == pytest.approx(0.0, abs=1e-20)
    r = icb.train("violation_implicit", params, bounds, data, init=0.5, iterations=20000)
    assert not r["diverged"]
    assert abs(r["theta_hat"]) < 0.01
    land = icb.loss_landscape("explicit", params, [-0.5, 0.0, 0.5], data)
    assert land[1] == min(land) and math.isfinite(land[0])


def test_report_writes_tables(tmp_path):
    out = icb.run_report('{"qg": {"samples": 100}, "dataset": {"n": 20}}', str(tmp_path))
    assert not out["errors"]
    assert any(f.endswith("lipschitz_constants.csv") for f in out["files"])
