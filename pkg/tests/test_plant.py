import math

import numpy as np
import pytest

from src.plant import (BesParams, BesState, GeneratorParams, GeneratorState, PlantConfig, bes_fleet_step, bes_step,
                       generator_step)

ETA = math.sqrt(0.85)


def test_generator_zero_fixed_point():
    state, p_g = generator_step(GeneratorState(), GeneratorParams(), 0.0, 2.0)
    assert p_g == 0.0
    assert state == GeneratorState(0.0, 0.0)


def test_generator_lag_step():
    params = GeneratorParams(capacity_mw=400.0, deadband_mw=5.0, governor_tc_s=20.0, ramp_mw_per_s=100.0)
    _, p_g = generator_step(GeneratorState(), params, 100.0, 2.0)
    assert p_g == pytest.approx(100.0 * (1.0 - math.exp(-0.1)), rel=1e-12)
    assert p_g == pytest.approx(9.5163, abs=1e-4)


def test_generator_ramp_clamp():
    params = GeneratorParams(capacity_mw=400.0, deadband_mw=5.0, governor_tc_s=20.0, ramp_mw_per_s=2.0)
    state, p_g = generator_step(GeneratorState(), params, 100.0, 2.0)
    assert p_g == 4.0
    # the governor keeps its own lagged state
    assert state.governor_out_mw == pytest.approx(9.5163, abs=1e-4)


def test_generator_deadband():
    _, p_g = generator_step(GeneratorState(), GeneratorParams(deadband_mw=5.0), 4.9, 2.0)
    assert p_g == 0.0


def test_generator_limits_hold_for_random_commands():
    params = GeneratorParams(capacity_mw=100.0, deadband_mw=2.0, governor_tc_s=5.0, ramp_mw_per_s=3.0)
    rng = np.random.default_rng(0)
    state, previous = GeneratorState(), 0.0
    for cmd in rng.uniform(-400.0, 400.0, 5000):
        state, p_g = generator_step(state, params, cmd, 2.0)
        assert abs(p_g) <= 100.0
        assert abs(p_g - previous) <= 6.0 + 1e-12
        previous = p_g


def test_generator_superposition_without_nonlinearities():
    params = GeneratorParams(capacity_mw=1e12, deadband_mw=0.0, governor_tc_s=20.0, ramp_mw_per_s=1e12)
    rng = np.random.default_rng(1)
    u1, u2 = rng.normal(size=200), rng.normal(size=200)

    def run(commands):
        state, out = GeneratorState(), []
        for cmd in commands:
            state, p_g = generator_step(state, params, cmd, 2.0)
            out.append(p_g)
        return np.array(out)

    np.testing.assert_allclose(run(2.0 * u1 + 3.0 * u2), 2.0 * run(u1) + 3.0 * run(u2), rtol=1e-12, atol=1e-12)


def test_generator_rejects_non_finite_command():
    with pytest.raises(ValueError):
        generator_step(GeneratorState(), GeneratorParams(), math.nan, 2.0)


def test_bes_idle():
    state, p_e = bes_step(BesState(25.0, 0.0), BesParams(), 0.0, 2.0)
    assert p_e == 0.0
    assert state.soc_mwh == 25.0


def test_bes_discharge():
    state, p_e = bes_step(BesState(25.0, 0.0), BesParams(), 100.0, 2.0)
    assert p_e == 100.0
    assert state.soc_mwh == pytest.approx(25.0 - 100.0 * (2.0 / 3600.0) / ETA, rel=1e-12)
    assert state.soc_mwh == pytest.approx(24.939742, abs=1e-6)


def test_bes_energy_clamp_near_empty():
    state, p_e = bes_step(BesState(0.01, 0.0), BesParams(), 200.0, 2.0)
    assert p_e == pytest.approx(0.01 * ETA * 1800.0, rel=1e-12)
    assert p_e == pytest.approx(16.5952, abs=1e-4)
    assert state.soc_mwh == pytest.approx(0.0, abs=1e-12)


def test_bes_energy_clamp_near_full():
    params = BesParams()
    state, p_e = bes_step(BesState(49.99, 0.0), params, -200.0, 2.0)
    assert p_e == pytest.approx(-0.01 * 1800.0 / ETA, rel=1e-12)
    assert state.soc_mwh == pytest.approx(50.0, abs=1e-12)
    assert state.soc_mwh <= 50.0


def test_bes_power_saturation():
    _, p_e = bes_step(BesState(25.0, 0.0), BesParams(), -1000.0, 2.0)
    assert p_e == -200.0


def test_bes_round_trip_recovers_product_of_efficiencies():
    params = BesParams()
    charged, p_in = bes_step(BesState(25.0, 0.0), params, -100.0, 2.0)
    gained = charged.soc_mwh - 25.0
    # discharge exactly the stored increment
    p_out = gained * 3600.0 * params.eta_discharge / 2.0
    back, _ = bes_step(charged, params, p_out, 2.0)
    assert back.soc_mwh == pytest.approx(25.0, abs=1e-12)
    assert p_out / -p_in == pytest.approx(params.eta_charge * params.eta_discharge, rel=1e-12)
    assert params.round_trip_efficiency == pytest.approx(0.85, rel=1e-12)


def _fuzz_bes(n_lanes: int, n_steps: int, seed: int):
    params = BesParams()
    rng = np.random.default_rng(seed)
    soc0 = rng.uniform(0.0, params.energy_mwh, n_lanes)
    state = BesState(soc0.copy(), np.zeros(n_lanes))
    charged = np.zeros(n_lanes)
    discharged = np.zeros(n_lanes)
    dt = 2.0
    for _ in range(n_steps):
        cmd = rng.uniform(-300.0, 300.0, n_lanes)
        state, p = bes_step(state, params, cmd, dt)
        assert np.all(state.soc_mwh >= -1e-9) and np.all(state.soc_mwh <= params.energy_mwh + 1e-9)
        assert np.all(np.abs(p) <= params.power_mw)
        charged += np.where(p < 0.0, -p * dt * params.eta_charge / 3600.0, 0.0)
        discharged += np.where(p > 0.0, p * dt / (3600.0 * params.eta_discharge), 0.0)
    np.testing.assert_allclose(state.soc_mwh - soc0, charged - discharged, rtol=0, atol=1e-9)


def test_bes_invariants_randomized():
    _fuzz_bes(n_lanes=100, n_steps=1000, seed=0)


@pytest.mark.slow
def test_bes_invariants_million_steps():
    _fuzz_bes(n_lanes=1000, n_steps=1000, seed=1)


def test_bes_from_rating():
    params = BesParams.from_rating(200.0, 15.0, 0.85)
    assert params.energy_mwh == 50.0
    assert params.eta_charge == params.eta_discharge == pytest.approx(ETA)
    assert params.soc_ref_mwh == 25.0


@pytest.mark.parametrize('kwargs', [dict(power_mw=0.0), dict(energy_mwh=-1.0), dict(eta_charge=1.2),
                                    dict(soc_ref_mwh=60.0)])
def test_bes_params_validation(kwargs):
    with pytest.raises(ValueError):
        BesParams(**kwargs)


def test_fleet_of_identical_units_matches_aggregate():
    params = BesParams()
    units = params.split(2)
    single = BesState(30.0, 0.0)
    fleet = [BesState(15.0, 0.0), BesState(15.0, 0.0)]
    for cmd in np.random.default_rng(2).uniform(-250.0, 250.0, 2000):
        single, p_single = bes_step(single, params, cmd, 2.0)
        fleet, p_fleet = bes_fleet_step(fleet, units, cmd, 2.0)
        assert p_fleet == pytest.approx(p_single, abs=1e-9)
        assert sum(s.soc_mwh for s in fleet) == pytest.approx(single.soc_mwh, abs=1e-9)


def test_plant_config_defaults():
    plant = PlantConfig()
    assert plant.soc0_mwh == plant.soc_ref_mwh == 25.0
    with pytest.raises(ValueError):
        PlantConfig(soc0_mwh=60.0)
