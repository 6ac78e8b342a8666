import json
import math

import pytest

import loramab


MINIMAL = {
    "deployment": {"radius_m": 500.0, "count": 20, "packet_interval_s": 50.0},
    "action_space": {
        "powers_dbm": [14.0],
        "subchannels": 2,
        "codes": [7],
        "repetitions": [1],
    },
    "horizon": {"packets_per_device": 30},
    "seed": 3,
}


def make_config(**overrides):
    cfg = json.loads(json.dumps(MINIMAL))
    cfg.update(overrides)
    return loramab.parse_config(json.dumps(cfg))


def test_parse_and_serialize_round_trip():
    cfg = make_config()
    again = loramab.parse_config(cfg.to_json())
    assert again.to_json() == cfg.to_json()


def test_unknown_field_rejected():
    bad = dict(MINIMAL, bogus=1)
    with pytest.raises(loramab.ConfigError, match="bogus"):
        loramab.parse_config(json.dumps(bad))


def test_phy_helpers():
    phy = loramab.PhyConfig()
    # R(c) = c * BW * mu / 2^c
    assert loramab.data_rate(7, phy) == pytest.approx(7 * 125e3 * 0.8 / 2**7)
    a = loramab.Action()
    a.power_dbm = 14.0
    t = loramab.airtime(7, 20, phy)
    e = loramab.tx_energy(a, 20, phy)
    p_w = 10 ** (14.0 / 10.0) * 1e-3
    p_o = 10 ** (10.0 / 10.0) * 1e-3
    assert e == pytest.approx(t * (2.0 * p_w + p_o))


def test_shaped_reward():
    assert loramab.shaped_reward(0, 2e-3, 1e-3, 0.4) == 0.0
    assert loramab.shaped_reward(1, 1e-3, 1e-3, 0.4) == 1.0
    got = loramab.shaped_reward(1, 2e-3, 1e-3, 0.4)
    assert got == pytest.approx(0.6 + 0.4 * 0.5)


def test_bandits():
    ucb = loramab.Ucb1(3, 0.1)
    k = ucb.select()
    ucb.update(k, 1.0)
    assert ucb.visits(k) == 2
    assert ucb.mean(k) == pytest.approx(0.5)

    exp3 = loramab.Exp3(4, 0.4)
    dist = exp3.distribution()
    assert sum(dist) == pytest.approx(1.0)
    assert min(dist) >= 0.4 / 4 - 1e-12
    rng = loramab.Rng(1, 0)
    k = exp3.sample(rng)
    exp3.update(k, 1.0, dist[k])
    assert exp3.weight(k) > 1.0


def test_simulate_replication_deterministic():
    cfg = make_config()
    a = loramab.simulate_replication(cfg, 0)
    b = loramab.simulate_replication(cfg, 0)
    assert len(a.packets) == len(b.packets) == 20 * 30
    assert [p.reward for p in a.packets] == [p.reward for p in b.packets]
    assert any(p.ack for p in a.packets)
    first = a.packets[0]
    assert first.action.code == 7
    assert first.energy_j > 0


def test_run_writes_artifacts(tmp_path):
    cfg = make_config()
    out = tmp_path / "out"
    summary = loramab.run(cfg, str(out))
    assert summary["packets_total"] == 20 * 30
    assert (out / "metrics.csv").exists()
    assert (out / "occupancy.csv").exists()
    assert (out / "summary.json").exists()
    head = (out / "metrics.csv").read_text().splitlines()[0]
    assert "loramab.metrics.v1" in head


def test_analytic_chain(tmp_path):
    m = loramab.AnalyticModel()
    m.phy.path_gain = 0.05
    m.radius_m = 2000.0
    m.t_rep_s = 200.0
    m.payload_bytes = 100
    edges = loramab.uniform_area_edges(2000.0, 2)
    assert edges[0] == 0.0 and edges[-1] == pytest.approx(2000.0)

    lam = 1000 / (math.pi * 2000.0**2)
    plan = loramab.make_ring_plan(m, [7, 10], edges, lam)
    ring = loramab.Ring(0.0, 1000.0)
    closed = loramab.ring_laplace_closed(5e9, ring, 1e-6, m)
    quad = loramab.ring_laplace(5e9, ring, 1e-6, m)
    assert closed == pytest.approx(quad, rel=1e-8)

    ps = loramab.success_probability(7, 500.0, plan, m)
    assert 0.0 <= ps <= 1.0
    assert loramab.noise_only_success(7, 100.0, m) > loramab.noise_only_success(7, 1900.0, m)

    obj = loramab.ring_plan_objective(plan, m, 0.02)
    best = loramab.optimize_ring_densities(m, 0.02, [7, 10], edges, lam, grid_step=0.1)
    assert loramab.ring_plan_objective(best, m, 0.02) >= obj - 1e-12
