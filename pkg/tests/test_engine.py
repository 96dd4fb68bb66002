import math

import numpy as np
import pandas as pd
import pytest

from src.config import RunConfig
from src.controllers import ControllerConfig
from src.engine import (COMPARED_CONTROLLERS, DEFAULT_CONFIGURATIONS, REPORT_COLUMNS, BesConfiguration,
                        ComparisonCase, ControllerSpec, InitialConditions, SimTrace, UnavailableController, compare,
                        compute_metrics, gain_soc_correlation, run_closed_loop, save_report_csv, save_trace_csv,
                        tune_weight)
from src.hindsight import SocPolicyTable, SocSamplingPlan, SweepConfig, TrainSample, build_table, sweep
from src.plant import GeneratorParams, PlantConfig
from src.signals import SynthConfig, synth_ace
from src.utils.errors import ConfigError, DataError
from tests.conftest import constant_ace


def _specs(cfg: RunConfig, policy_gain: float = 5.0):
    controller = cfg.controller_config()
    policy = SocPolicyTable.uniform(cfg.energy_mwh, policy_gain, n_bins=10)
    return (ControllerSpec('proposed', controller, policy=policy),
            ControllerSpec('lqr', controller, lqr=cfg.lqr_model()),
            ControllerSpec('pjm', controller))


def _cases(configurations):
    cases = []
    for configuration in configurations:
        cfg = RunConfig().override(cd_mw=float(configuration.power_mw), duration_min=float(configuration.duration_min))
        cases.append(ComparisonCase(configuration, cfg.plant(), _specs(cfg)))
    return cases


@pytest.mark.parametrize('kind', ['pjm', 'lqr', 'proposed', 'pi'])
def test_quiet_system_stays_at_rest(plant, kind):
    cfg = RunConfig()
    specs = {spec.kind: spec for spec in _specs(cfg)}
    specs['pi'] = ControllerSpec('pi', cfg.controller_config())
    trace = run_closed_loop(constant_ace(0.0, 300), specs[kind], plant)
    for column in (trace.p_ace_mw, trace.rega_mw, trace.regd_mw, trace.p_g_mw, trace.p_e_mw, trace.i_ace_mws):
        assert np.all(column == 0.0)
    assert np.all(trace.soc_mwh == plant.soc_ref_mwh)


def test_integral_action_removes_constant_error(plant):
    generous = PlantConfig(generator=GeneratorParams(capacity_mw=400.0, ramp_mw_per_s=10.0), bes=plant.bes)
    cfg = ControllerConfig(soc_ref_mwh=plant.soc_ref_mwh, neutrality_enabled=False)
    trace = run_closed_loop(constant_ace(-50.0, 1200), ControllerSpec('pjm', cfg), generous)
    assert np.max(np.abs(trace.p_ace_mw[900:])) < 0.5
    # the conventional units end up carrying the whole error
    assert trace.p_g_mw[-1] == pytest.approx(50.0, abs=0.5)


def test_corrected_ace_adds_previous_responses(plant, controller_cfg, synthetic_ace):
    trace = run_closed_loop(synthetic_ace, ControllerSpec('pjm', controller_cfg), plant)
    assert trace.p_ace_mw[0] == synthetic_ace.values[0]
    expected = synthetic_ace.values[1:] + trace.p_g_mw[:-1] + trace.p_e_mw[:-1]
    np.testing.assert_array_equal(trace.p_ace_mw[1:], expected)
    np.testing.assert_array_equal(trace.t_s, np.arange(len(synthetic_ace)) * 2.0)
    assert np.all((trace.soc_mwh >= 0.0) & (trace.soc_mwh <= plant.bes.energy_mwh))
    assert np.all(np.abs(trace.regd_mw) <= controller_cfg.cd_mw)
    assert np.all(np.abs(trace.rega_mw) <= controller_cfg.ca_mw)


def test_fleet_matches_single_storage(plant, controller_cfg, synthetic_ace):
    fleet = PlantConfig(generator=plant.generator, bes=plant.bes, dt_s=plant.dt_s, bes_units=4)
    single = run_closed_loop(synthetic_ace, ControllerSpec('pjm', controller_cfg), plant)
    split = run_closed_loop(synthetic_ace, ControllerSpec('pjm', controller_cfg), fleet)
    np.testing.assert_allclose(split.p_ace_mw, single.p_ace_mw, rtol=0, atol=1e-9)
    np.testing.assert_allclose(split.soc_mwh, single.soc_mwh, rtol=0, atol=1e-9)


def test_split_storage_fills_without_leaving_its_range(plant, controller_cfg):
    weak = GeneratorParams(capacity_mw=50.0)
    fleet = PlantConfig(generator=weak, bes=plant.bes, dt_s=plant.dt_s, bes_units=6)
    policy = SocPolicyTable.uniform(plant.bes.energy_mwh, 0.0, n_bins=10)
    trace = run_closed_loop(constant_ace(300.0, 3000), ControllerSpec('proposed', controller_cfg, policy=policy), fleet)
    assert np.all(trace.soc_mwh <= plant.bes.energy_mwh)
    assert trace.soc_mwh[-1] == pytest.approx(plant.bes.energy_mwh, abs=1e-9)


def test_mismatched_soc_reference(plant):
    with pytest.raises(ConfigError, match="SoC reference"):
        run_closed_loop(constant_ace(0.0, 5), ControllerSpec('pi', ControllerConfig(soc_ref_mwh=10.0)), plant)


def test_initial_conditions(plant, controller_cfg):
    trace = run_closed_loop(constant_ace(0.0, 5), ControllerSpec('pi', controller_cfg), plant,
                            InitialConditions(p_e_mw=10.0))
    assert trace.p_ace_mw[0] == 10.0
    with pytest.raises(ConfigError):
        run_closed_loop(constant_ace(0.0, 5), ControllerSpec('pi', controller_cfg), plant,
                        InitialConditions(soc0_mwh=-1.0))


def test_time_step_mismatch(plant, controller_cfg):
    with pytest.raises(ConfigError):
        run_closed_loop(constant_ace(0.0, 5, dt_s=4.0), ControllerSpec('pjm', controller_cfg), plant)


def test_controller_spec_validation(controller_cfg):
    with pytest.raises(ConfigError):
        ControllerSpec('fuzzy', controller_cfg)
    with pytest.raises(ConfigError):
        ControllerSpec('proposed', controller_cfg)
    with pytest.raises(ConfigError):
        ControllerSpec('lqr', controller_cfg)


def _trace(p_ace, soc):
    n = len(p_ace)
    zeros = np.zeros(n)
    return SimTrace(t_s=np.arange(n) * 2.0, ace_uncorrected_mw=zeros, p_ace_mw=np.asarray(p_ace, dtype=float),
                    rega_mw=zeros, regd_mw=zeros, p_g_mw=zeros, p_e_mw=zeros, soc_mwh=np.asarray(soc, dtype=float),
                    i_ace_mws=zeros)


def test_metrics():
    metrics = compute_metrics(_trace([3.0, 4.0], [26.0, 24.0]), 25.0)
    assert metrics.mean_sq_pace_mw2 == 12.5
    assert metrics.mean_sq_soc_dev_mwh2 == 1.0
    assert str(metrics) == '12.5,1'
    with pytest.raises(DataError):
        compute_metrics(_trace([], []), 25.0)


def test_trace_csv(tmp_path, plant, controller_cfg):
    trace = run_closed_loop(constant_ace(-20.0, 30), ControllerSpec('pjm', controller_cfg), plant)
    path = tmp_path / 'out' / 'trace.csv'
    save_trace_csv(trace, path)
    df = pd.read_csv(path, float_precision='round_trip')
    assert list(df.columns) == ['t_s', 'ace_uncorrected_mw', 'p_ace_mw', 'rega_mw', 'regd_mw', 'pg_mw', 'pe_mw',
                                'soc_mwh', 'i_ace_mws']
    np.testing.assert_array_equal(df['soc_mwh'].to_numpy(), trace.soc_mwh)


def test_configuration_labels():
    assert [c.label for c in DEFAULT_CONFIGURATIONS] == ['200MW/15min', '200MW/20min', '200MW/30min',
                                                         '200MW/60min', '300MW/15min', '400MW/15min']
    assert BesConfiguration.parse(' 300 MW / 15 min ') == BesConfiguration(300.0, 15.0)
    assert BesConfiguration(200, 60).energy_mwh == 200.0
    with pytest.raises(ConfigError):
        BesConfiguration.parse('200MW')


def test_compare_rows_are_ordered_and_deterministic(tmp_path):
    ace = synth_ace(SynthConfig(seed=5, horizon_s=600.0))
    cases = _cases(DEFAULT_CONFIGURATIONS)
    rows = compare(ace, cases)
    assert len(rows) == 18
    assert [r.config for r in rows] == [c.label for c in DEFAULT_CONFIGURATIONS for _ in COMPARED_CONTROLLERS]
    assert [r.controller for r in rows] == list(COMPARED_CONTROLLERS) * 6
    assert all(math.isfinite(r.mean_sq_pace_e3) and r.mean_sq_soc_dev >= 0.0 for r in rows)
    assert compare(ace, cases) == rows

    path = tmp_path / 'report.csv'
    save_report_csv(rows, path)
    df = pd.read_csv(path)
    assert list(df.columns) == REPORT_COLUMNS
    assert len(df) == 18


def test_compare_with_workers_matches_serial():
    ace = synth_ace(SynthConfig(seed=6, horizon_s=300.0))
    cases = _cases(DEFAULT_CONFIGURATIONS[:2])
    assert compare(ace, cases, workers=2) == compare(ace, cases, workers=1)


def test_compare_reports_unavailable_controllers_in_place(tmp_path):
    ace = synth_ace(SynthConfig(seed=6, horizon_s=300.0))
    full = _cases(DEFAULT_CONFIGURATIONS[:2])
    first = full[0]
    missing = UnavailableController('proposed', 'no trained policy')
    cases = [ComparisonCase(first.configuration, first.plant, (missing,) + first.controllers[1:]), full[1]]
    expected = compare(ace, full)
    rows = compare(ace, cases)
    assert [(r.config, r.controller) for r in rows] == [(r.config, r.controller) for r in expected]
    assert rows[0].error == 'no trained policy'
    assert math.isnan(rows[0].mean_sq_pace_e3) and math.isnan(rows[0].mean_sq_soc_dev)
    assert rows[1:] == expected[1:]

    path = tmp_path / 'report.csv'
    save_report_csv(rows, path)
    df = pd.read_csv(path, keep_default_na=False)
    assert list(df['error']) == ['no trained policy'] + [''] * 5


def test_tune_weight_picks_the_lowest_score(plant, controller_cfg):
    train = synth_ace(SynthConfig(seed=8, horizon_s=1800.0))
    evaluation = synth_ace(SynthConfig(seed=9, horizon_s=1800.0))
    cfg = SweepConfig(window_steps=150, plant=plant, controller=controller_cfg, stride_steps=150,
                      plan=SocSamplingPlan(n_strata=10, draws_per_start=2))
    best, table, scores = tune_weight(train, evaluation, [60.0, 10.0], cfg, n_bins=10)
    assert [s.w_e for s in scores] == [10.0, 60.0]
    best_score = min(s.score for s in scores)
    assert best == next(s.w_e for s in scores if s.score == best_score)
    assert table.n_bins == 10 and table.energy_mwh == plant.bes.energy_mwh
    with pytest.raises(ValueError):
        tune_weight(train, evaluation, [], cfg)


def test_gain_soc_correlation():
    rising = [TrainSample(0, 25.0 + d, 2.0 * abs(d), 0.0) for d in (-20.0, -10.0, 3.0, 15.0, 22.0)]
    assert gain_soc_correlation(rising, 25.0) == pytest.approx(1.0)
    flat = [TrainSample(0, e, 1.0, 0.0) for e in (1.0, 10.0, 40.0)]
    assert math.isnan(gain_soc_correlation(flat, 25.0))
    with pytest.raises(DataError):
        gain_soc_correlation(rising[:1], 25.0)


@pytest.mark.slow
def test_proposed_holds_soc_closer_without_losing_ace_quality():
    train = synth_ace(SynthConfig(seed=21))
    test = synth_ace(SynthConfig(seed=22))
    wins = 0
    for configuration in DEFAULT_CONFIGURATIONS:
        cfg = RunConfig(e0_draws=10).override(cd_mw=float(configuration.power_mw),
                                              duration_min=float(configuration.duration_min))
        sweep_cfg = SweepConfig(window_steps=cfg.window_steps, plant=cfg.plant(), controller=cfg.controller_config(),
                                w_e=cfg.we, stride_steps=cfg.window_steps,
                                plan=SocSamplingPlan(n_strata=cfg.bins, draws_per_start=cfg.e0_draws))
        policy = build_table(sweep(train, sweep_cfg), cfg.energy_mwh, cfg.bins)
        plant = cfg.plant()
        metrics = {spec.kind: compute_metrics(run_closed_loop(test, spec, plant), cfg.soc_ref_mwh)
                   for spec in (ControllerSpec('proposed', cfg.controller_config(), policy=policy),
                                ControllerSpec('lqr', cfg.controller_config(), lqr=cfg.lqr_model()),
                                ControllerSpec('pjm', cfg.controller_config()))}
        if metrics['proposed'].mean_sq_soc_dev_mwh2 <= metrics['pjm'].mean_sq_soc_dev_mwh2:
            wins += 1
        best_pace = min(metrics['lqr'].mean_sq_pace_mw2, metrics['pjm'].mean_sq_pace_mw2)
        assert metrics['proposed'].mean_sq_pace_mw2 <= 1.1 * best_pace, configuration.label
    assert wins >= 5
