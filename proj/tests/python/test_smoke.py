import json
import math

import pytest

import gmlkit


def test_theorem_bound():
    assert gmlkit.theorem_bound(0.5, 0.0, 1.0, 1.0, [0.1, 0.1]) == pytest.approx(0.40)
    assert gmlkit.theorem_bound(1.0, 0.0, 0.0, 5.0, [0.0, 0.0]) == pytest.approx(0.0)


def test_verify_drift():
    report = gmlkit.verify_drift(0.5, 0.0, 1.0, [4.0, 2.0, 1.0], [0.0, 0.0])
    assert report["passed"]
    bad = gmlkit.verify_drift(0.5, 0.0, 1.0, [4.0, 2.0, 3.0], [0.0, 0.0])
    assert not bad["passed"]
    assert bad["violations"] == [1]


def test_witness_helpers():
    lo, hi = gmlkit.epsilon_range(0.5)
    assert (lo, hi) == (0.0, pytest.approx(1.0))
    assert gmlkit.epsilon_range(1.0)[1] is None
    assert gmlkit.default_epsilon(0.5) == pytest.approx(0.5)
    assert gmlkit.effective_contraction(0.5) == pytest.approx(0.25)
    assert gmlkit.transport_overhead(1.0, [0.0], [2.0]) == pytest.approx(8.0)


def test_simulate_witness():
    run = gmlkit.simulate_witness([([0.0], 0.5), ([2.0], 0.5)], [5], [1.5], 30)
    assert run["effective_alpha"] == pytest.approx(0.25)
    assert len(run["w_values"]) == 31
    check = gmlkit.verify_drift(run["effective_alpha"], 0.0, 1.0, run["w_values"], run["costs"])
    assert check["passed"]


def test_toy_admissible():
    assert gmlkit.toy_admissible(0.5, 0.5)
    assert not gmlkit.toy_admissible(2.0, 0.1)


def test_covering_bound():
    assert gmlkit.covering_bound(2, 2.0, 1.0) == pytest.approx(2.0 * math.log(5.0))
    with pytest.raises(gmlkit.KernelError):
        gmlkit.covering_bound(2, 2.0, 0.0)


def test_pac():
    product, union = gmlkit.pac_chain_bound([0.01, 0.02])
    assert product == pytest.approx(0.9702)
    assert union == pytest.approx(0.97)
    assert gmlkit.pac_chain_simulate([0.01, 0.02], 10000, 7) >= union - 0.02


def test_symbolic():
    theory = "-> p\np -> q\n"
    assert gmlkit.entails(theory, "q")
    assert not gmlkit.entails(theory, "r")
    assert gmlkit.forward_chain(theory) == {"p", "q"}


def test_run_scenario():
    text = """
[system]
label=smoke
cost_mode=declared
horizon=10
initial=1.5
start=r0
seed=1
[regimes]
id=r0 dim=1 anchor=0 radius=10 mu=0 alpha=0.5
id=r1 dim=1 anchor=0 radius=10 mu=2 alpha=0.5
[arrows]
id=a01 from=r0 to=r1 map=identity cost=12
[schedule]
5 a01
"""
    report = gmlkit.run_scenario(text)
    assert report["completed"]
    assert report["terminated_at"] is None
    doc = json.loads(report["report"])
    assert doc["verdict"]["status"] == "COMPLETED"
    assert len(doc["steps"]) == 11


def test_mitchell_collapse():
    text = """
[system]
label=tiny
cost_mode=declared
horizon=1
initial=0
start=r0
seed=1
[regimes]
id=r0 dim=1 anchor=0 radius=1 alpha=0.5
"""
    report = gmlkit.mitchell_collapse(text)
    assert report["faithful"]
    assert report["obstructions"] == []
