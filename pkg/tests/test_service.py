import math

import pytest
from fastapi.testclient import TestClient

from mcmimo import (
    ScenarioSpec,
    SystemConfig,
    asymptotic_rate,
    build_scenario,
    closed_form_rate,
    theta_moments,
)
from mcmimo.model import shared_reuse_map
from mcmimo.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_theta_moments_endpoint(client):
    body = client.get("/theta-moments", params={"m": 16}).json()
    tm = theta_moments(16)
    assert body["second_moment"] == 16
    assert body["mean"] == pytest.approx(tm.m1, rel=1e-12)
    assert body["variance"] == pytest.approx(tm.var, rel=1e-12)
    assert client.get("/theta-moments", params={"m": 0}).status_code == 422


def test_closed_form_endpoint(client):
    req = dict(L=2, M=8, tau=4, p_f_db=20.0, p_r_db=10.0, a=0.5, b=0.0)
    body = client.post("/rates/closed-form", json=req).json()
    config = SystemConfig(L=2, K=1, M=8, tau=4, p_f=100.0, p_r=10.0)
    betas, _ = build_scenario(ScenarioSpec(0.5, 0.0, shared_reuse_map(2)), config)
    assert body["rates"][0] == pytest.approx(closed_form_rate(betas, config, 0), rel=1e-12)
    assert body["asymptotic"][0] == pytest.approx(asymptotic_rate(betas, config, 0), rel=1e-12)


def test_closed_form_unbounded_is_null(client):
    req = dict(L=2, M=8, tau=4, a=0.0, b=0.0)
    body = client.post("/rates/closed-form", json=req).json()
    assert body["asymptotic"] == [None, None]
    assert all(math.isfinite(r) for r in body["rates"])


def test_run_experiment_endpoint(client):
    req = dict(name="theorem1_verify", trials=300, m_values=[2, 4])
    resp = client.post("/experiments/run", json=req)
    assert resp.status_code == 200
    rows = resp.json()["rows"]
    assert len(rows) == 2 * 2  # 2 M-values x 2 cells
    assert {r["M"] for r in rows} == {2, 4}
    assert all(r["closed_form"] is not None for r in rows)


def test_run_experiment_defaults_fill_in(client):
    req = dict(name="asymptote_demo", m_values=[4, 8])
    rows = client.post("/experiments/run", json=req).json()["rows"]
    assert all(r["L"] == 2 and r["K"] == 1 for r in rows)
    assert all(r["a"] == 0.5 for r in rows)


def test_unknown_experiment_rejected(client):
    assert client.post("/experiments/run", json={"name": "fig9"}).status_code == 422


def test_invalid_spec_surfaces_as_400(client):
    resp = client.post("/experiments/run", json={"name": "fig4_msweep", "m_values": []})
    assert resp.status_code == 400
    assert "m_values" in resp.json()["detail"]
