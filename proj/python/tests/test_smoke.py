import math

import pytest

import netabc


def test_ba_network_shape():
    g = netabc.generate_ba(50, 3, rng_seed=4)
    assert g.node_count == 50
    assert g.edge_count == 3 * (50 - 3)
    assert all(g.has_edge(v, 0) for v in g.neighbors(0))


def test_path_table_on_a_path():
    g = netabc.Network.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    p = netabc.PathTable(g)
    assert p.hops(0, 3) == 3
    assert p.rho_max == 3
    split = netabc.PathTable(netabc.Network.from_edges(3, [(0, 1)]))
    assert split.hops(0, 2) is None


def test_sigmoid_midpoint():
    assert netabc.p_infect(3, 10, 0.3) == 0.1255
    p1 = netabc.p_infect(1, 10, 0.3)
    p2 = netabc.p_infect(2, 10, 0.3)
    want = (1 - p1) ** 2 * (1 - p2) ** 4 * p2
    assert math.isclose(netabc.infection_at_last_exposure_prob([2, 5], 10, 0.3), want, rel_tol=1e-12)


def test_simulation_is_reproducible_and_round_trips():
    g = netabc.generate_ba(60, 3, rng_seed=2)
    a = netabc.simulate_complex(g, 0.7, 0.3, 5, 30, rng_seed=9)
    b = netabc.simulate_complex(g, 0.7, 0.3, 5, 30, rng_seed=9)
    assert a.steps() == b.steps()
    obs = a.observe(10, 30)
    back = netabc.Trace.from_jsonl(obs.to_jsonl())
    assert back.steps() == obs.steps()
    assert back.first_step == 10


def test_summaries_and_discrepancy():
    g = netabc.generate_ba(40, 2, rng_seed=3)
    paths = netabc.PathTable(g)
    a = netabc.simulate_simple(g, 0.5, 0, 20, rng_seed=1)
    b = netabc.simulate_simple(g, 0.5, 0, 20, rng_seed=2)
    s = netabc.summarize(a, g, 5, 20)
    assert len(s["s"]) == 16
    assert all(x <= y for x, y in zip(s["s"], s["s"][1:]))
    d = netabc.discrepancy(a, b, g, paths, 5, 20)
    assert math.isclose(d["value"], d["s"] + d["G"], rel_tol=1e-14)


def test_small_inference_run():
    g = netabc.generate_ba(40, 3, rng_seed=7)
    trace = netabc.simulate_simple(g, 0.3, 4, 25, rng_seed=8)
    out = netabc.infer(g, trace, 10, 25, particles=40, steps=5, rng_seed=3, threads=1)
    assert len(out["particles"]) == 40
    support = set(trace.infected(10))
    assert all(p["seed_node"] in support for p in out["particles"])
    tol = out["tolerance"]
    assert all(x >= y for x, y in zip(tol, tol[1:]))
    assert 0.0 <= out["estimate"]["theta"] <= 1.0


def test_invalid_parameters_raise_value_error():
    g = netabc.generate_ba(10, 2)
    with pytest.raises(ValueError):
        netabc.simulate_simple(g, 1.5, 0, 5)
    with pytest.raises(ValueError):
        netabc.simulate_simple(g, 0.5, 99, 5)
    with pytest.raises(ValueError):
        netabc.Trace.from_jsonl('{"t":0,"infected":[0]}\n')
