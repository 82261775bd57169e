import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wsntrack.calibration import calibration_config, calibration_topology
from wsntrack.energy import Direction, EnergyLedger, battery_life, charge, per_packet_energy
from wsntrack.simulation import run

TX = 44 * (127 * 8 / 250_000) / 3600
RX = 49 * (127 * 8 / 250_000) / 3600


def test_per_packet_costs():
    assert per_packet_energy(44, 127, 250_000) == pytest.approx(4.9671e-5, rel=1e-4)
    assert per_packet_energy(49, 127, 250_000) == pytest.approx(5.5316e-5, rel=1e-4)
    assert per_packet_energy(44, 127, 250_000) == pytest.approx(TX, rel=1e-15)


@pytest.mark.parametrize("args", [(44, 0, 250_000), (0, 127, 250_000), (44, 127, -1)])
def test_nonpositive_inputs(args):
    with pytest.raises(ValueError):
        per_packet_energy(*args)


def test_single_and_repeated_charges():
    ledger = EnergyLedger(3, 27.0, TX, RX)
    charge(ledger, 1, Direction.TX)
    assert ledger.remaining(1) == pytest.approx(27.0 - TX, abs=1e-15)
    for _ in range(999):
        charge(ledger, 2, Direction.RX)
    assert ledger.remaining(2) == 27.0 - 999 * RX
    assert ledger.remaining(0) == 27.0


def test_depleted_node_clamps_and_flags():
    ledger = EnergyLedger(2, 1.0, 0.4, 0.4)
    assert all(ledger.charge(1, Direction.TX) for _ in range(3))
    assert ledger.is_depleted(1) and ledger.remaining(1) == 0.0
    assert ledger.charge(1, Direction.TX) is False
    assert ledger.depleted_flag[1]
    assert ledger.tx_count[1] == 3 and ledger.consumed(1) == 1.0


def test_exempt_sink_never_depletes():
    ledger = EnergyLedger(2, 1.0, 0.6, 0.6, exempt=(0,))
    for _ in range(10):
        assert ledger.charge(0, Direction.RX)
    assert not ledger.is_depleted(0)
    assert ledger.remaining(0) == 1.0 and ledger.consumed(0) == pytest.approx(6.0)


@given(st.lists(st.tuples(st.integers(0, 4), st.booleans()), max_size=200))
def test_ledger_conservation(ops):
    ledger = EnergyLedger(5, 27.0, TX, RX)
    for node, is_tx in ops:
        ledger.charge(node, Direction.TX if is_tx else Direction.RX)
    expected = ledger.tx_count.sum() * TX + ledger.rx_count.sum() * RX
    assert math.isclose(ledger.total_consumed(), expected, rel_tol=1e-12)
    assert np.allclose(ledger.consumed() + ledger.remaining(), 27.0)


def test_battery_life_cases():
    assert battery_life(0.0, 27, 2) == math.inf
    assert battery_life(27, 27, 2) == 2
    assert battery_life(0.5, 27, 2) == 108
    with pytest.raises(ValueError):
        battery_life(-1, 27, 2)


def test_extrapolated_lifetime_matches_run_to_depletion(calib_topology):
    # measure the busiest node over 30 rounds on a large battery
    probe = run(calibration_config(duration_s=60.0, init_energy_mAh=1e6), "centralized", calib_topology)
    cons = np.array([e.consumed_mAh for e in probe.energy]) / probe.rounds
    cons[0] = 0.0  # sink is mains-powered
    hot = int(np.argmax(cons))
    init = 0.05
    predicted = battery_life(cons[hot], init, 2.0)

    # then run until it actually dies on a small battery
    long = run(calibration_config(duration_s=3600.0, init_energy_mAh=init), "centralized", calib_topology)
    first = min(long.depletion_times, key=long.depletion_times.get)
    assert first == hot
    assert abs(long.depletion_times[hot] - predicted) <= 2.0


def test_remaining_non_increasing(calib_topology):
    cfg = calibration_config(duration_s=20.0)
    from wsntrack.simulation import Simulation

    sim = Simulation(cfg, "improved", calib_topology)
    sim._schedule()
    prev = sim.ledger.remaining().copy()
    while len(sim.engine.queue):
        ev = sim.engine.queue.pop()
        if ev.kind.name == "REPORTING_ROUND":
            sim._reporting_round(ev.payload)
            now = sim.ledger.remaining()
            assert (now <= prev).all()
            prev = now.copy()
