import numpy as np
import pytest

from src.controllers import (REFERENCE_GAIN, Command, ControllerConfig, ControllerState, PiGains, UnitFeedback,
                             antiwindup_update, build_state_matrices, lqr_step, pi_step, pjm_step, proposed_step,
                             recharge_step, synthesize_lqr)
from src.engine import ControllerSpec, InitialConditions, run_closed_loop
from src.hindsight import SocPolicyTable
from src.plant import BesParams, GeneratorParams, PlantConfig
from tests.conftest import constant_ace

DT = 2.0


def _reference_gain_model():
    a, b = build_state_matrices(10.0, 60.0, 0.0, 0.4)
    return synthesize_lqr(a, b, np.eye(4), 1.0, gain=REFERENCE_GAIN)


def test_pjm_zero_fixed_point():
    state = ControllerState()
    next_state, cmd = pjm_step(state, 0.0, UnitFeedback(), ControllerConfig(), DT)
    assert cmd == Command(0.0, 0.0)
    assert next_state == state


def test_pjm_limiter_and_residual_split():
    cfg = ControllerConfig(rega_gains=PiGains(1.0, 0.0), ta_s=0.0, td_s=0.0, ca_mw=400.0, cd_mw=200.0,
                           neutrality_enabled=False)
    _, cmd = pjm_step(ControllerState(), -600.0, UnitFeedback(), cfg, DT)
    assert cmd.rega_mw == 400.0
    assert cmd.regd_mw == 200.0


def _mean_regd_open_loop(neutrality_gain: float, enabled: bool = True) -> float:
    cfg = ControllerConfig(rega_gains=PiGains(1.0, 0.0), ca_mw=50.0, cd_mw=200.0, neutrality_gain=neutrality_gain,
                           neutrality_enabled=enabled)
    state, regd = ControllerState(), []
    for _ in range(1800):
        state, cmd = pjm_step(state, -100.0, UnitFeedback(), cfg, DT)
        regd.append(cmd.regd_mw)
    return float(np.mean(regd))


def test_neutrality_pulls_regd_energy_toward_zero():
    without = _mean_regd_open_loop(2.0, enabled=False)
    weak = _mean_regd_open_loop(2.0)
    strong = _mean_regd_open_loop(20.0)
    assert 0.0 < strong < weak < without


def test_lqr_reference_gain_substitution():
    model = _reference_gain_model()
    cfg = ControllerConfig(soc_ref_mwh=25.0)
    _, cmd = lqr_step(ControllerState(), np.array([1.0, 0.0, 0.0, 0.0]), UnitFeedback(soc_mwh=25.0), model, cfg, DT)
    assert cmd.regd_mw == pytest.approx(-0.4309, abs=1e-12)
    _, cmd = lqr_step(ControllerState(), np.zeros(4), UnitFeedback(soc_mwh=25.0), model, cfg, DT)
    assert cmd.regd_mw == 0.0
    _, cmd = lqr_step(ControllerState(), np.array([0.0, 0.0, 0.0, 1.0]), UnitFeedback(soc_mwh=26.0), model, cfg, DT)
    assert cmd.regd_mw == pytest.approx(-8.0, abs=1e-12)


def test_lqr_regd_is_limited():
    model = _reference_gain_model()
    _, cmd = lqr_step(ControllerState(), np.array([1e4, 0.0, 0.0, 0.0]), UnitFeedback(), model,
                      ControllerConfig(cd_mw=200.0), DT)
    assert cmd.regd_mw == -200.0


def test_proposed_proportional_term():
    policy = SocPolicyTable.uniform(50.0, 3.0)
    cfg = ControllerConfig(soc_ref_mwh=25.0)
    _, cmd = proposed_step(ControllerState(), 10.0, UnitFeedback(soc_mwh=25.0), policy, cfg, DT)
    assert cmd.regd_mw == pytest.approx(-10.0, abs=1e-12)


def test_proposed_fixed_point():
    policy = SocPolicyTable.uniform(50.0, 3.0)
    _, cmd = proposed_step(ControllerState(), 0.0, UnitFeedback(soc_mwh=25.0), policy,
                           ControllerConfig(soc_ref_mwh=25.0), DT)
    assert cmd == Command(0.0, 0.0)


def test_recharge_term_discharges_overfull_storage():
    policy = SocPolicyTable.uniform(50.0, 3.0)
    cfg = ControllerConfig(soc_ref_mwh=25.0)
    _, above = proposed_step(ControllerState(), 0.0, UnitFeedback(soc_mwh=27.0), policy, cfg, DT)
    _, below = proposed_step(ControllerState(), 0.0, UnitFeedback(soc_mwh=23.0), policy, cfg, DT)
    assert above.regd_mw == pytest.approx(6.0, abs=1e-12)
    assert below.regd_mw == pytest.approx(-6.0, abs=1e-12)


def test_recharge_step_accepts_lanes():
    cfg = ControllerConfig(soc_ref_mwh=25.0)
    feedback = UnitFeedback(np.zeros(3), np.zeros(3), np.array([20.0, 25.0, 30.0]))
    _, cmd = recharge_step(ControllerState(), np.zeros(3), feedback, np.array([1.0, 2.0, 3.0]), cfg, DT)
    np.testing.assert_allclose(cmd.regd_mw, [-5.0, 0.0, 15.0])


def test_zero_policy_equals_plain_pi():
    cfg = ControllerConfig(soc_ref_mwh=25.0)
    policy = SocPolicyTable.uniform(50.0, 0.0, n_bins=10)
    rng = np.random.default_rng(0)
    s_prop, s_pi = ControllerState(), ControllerState()
    for p_ace, soc in zip(rng.normal(0, 80, 200), rng.uniform(0, 50, 200)):
        feedback = UnitFeedback(rng.normal(), rng.normal(), soc)
        s_prop, c_prop = proposed_step(s_prop, p_ace, feedback, policy, cfg, DT)
        s_pi, c_pi = pi_step(s_pi, p_ace, feedback, cfg, DT)
        assert c_prop == c_pi
    assert s_prop == s_pi


def test_commands_respect_limiters():
    cfg = ControllerConfig(ca_mw=400.0, cd_mw=200.0, soc_ref_mwh=25.0)
    policy = SocPolicyTable.uniform(50.0, 40.0)
    rng = np.random.default_rng(3)
    state = ControllerState()
    for p_ace in rng.normal(0, 2000, 500):
        state, cmd = proposed_step(state, p_ace, UnitFeedback(soc_mwh=rng.uniform(0, 50)), policy, cfg, DT)
        assert abs(cmd.rega_mw) <= 400.0 and abs(cmd.regd_mw) <= 200.0


def test_antiwindup_update_arithmetic():
    assert antiwindup_update(5.0, 10.0, 30.0, 30.0, -4.0, -4.0, DT) == 5.0 + 10.0 * DT
    assert antiwindup_update(0.0, 0.0, 100.0, 60.0, 7.0, 7.0, DT) == 40.0 * DT
    assert antiwindup_update(0.0, -50.0, 0.0, 0.0, -50.0, 0.0, DT) == -100.0 * DT
    with pytest.raises(ValueError):
        antiwindup_update(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def test_antiwindup_compares_each_command_with_its_response():
    cfg = ControllerConfig()
    state = ControllerState(i_ace_mws=0.0, p_ace_prev_mw=0.0, rega_cmd_mw=100.0, regd_cmd_mw=-50.0)
    feedback = UnitFeedback(p_g_mw=60.0, p_e_mw=0.0, soc_mwh=25.0)
    next_state, cmd = pi_step(state, 0.0, feedback, cfg, DT)
    assert next_state.i_ace_mws == pytest.approx((40.0 - 50.0) * DT)
    # the updated integral already drives this step's RegD
    assert cmd.regd_mw == pytest.approx(-0.8 * (40.0 - 50.0) * DT)
    plain, _ = pi_step(state, 0.0, feedback, ControllerConfig(antiwindup_enabled=False), DT)
    assert plain.i_ace_mws == 0.0


def _pinned_run(antiwindup: bool):
    plant = PlantConfig(generator=GeneratorParams(capacity_mw=20.0), bes=BesParams.from_rating(200.0, 15.0),
                        dt_s=DT)
    cfg = ControllerConfig(ca_mw=20.0, cd_mw=200.0, antiwindup_enabled=antiwindup, soc_ref_mwh=plant.soc_ref_mwh)
    trace = run_closed_loop(constant_ace(100.0, 3 * 1800), ControllerSpec('pi', cfg), plant, InitialConditions())
    pinned = trace.soc_mwh >= plant.bes.energy_mwh - 1e-6
    first = int(np.argmax(pinned))
    assert pinned[first:].all(), "storage must stay full once it is full"
    assert len(trace) - first >= 1800, "storage must be pinned for at least one hour"
    return trace.i_ace_mws, first


def test_antiwindup_keeps_integrator_bounded_when_storage_is_pinned():
    i_ace, first = _pinned_run(antiwindup=True)
    peak_before = np.max(np.abs(i_ace[:first]))
    assert np.max(np.abs(i_ace[first:])) <= 10.0 * peak_before


def test_plain_integrator_winds_up_when_storage_is_pinned():
    i_ace, first = _pinned_run(antiwindup=False)
    assert np.all(np.diff(i_ace[first + 2:]) > 0.0)
