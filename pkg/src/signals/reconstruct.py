import math

import numpy as np

from src.plant import BesState, GeneratorState, PlantConfig, bes_step, generator_step
from src.utils.errors import ConfigError, DataError
from .ace_series import AceSeries


def reconstruct_uncorrected(corrected: AceSeries, rega_hist: AceSeries, regd_hist: AceSeries,
                            plant: PlantConfig) -> AceSeries:
    """
    Replay the logged RegA/RegD commands through the unit models and remove the responses
    from the corrected ACE. Responses act with the same one-step delay as in the closed loop:
    uncorrected[t] = corrected[t] - (p_g[t-1] + p_e[t-1]), both zero before the first step.
    """
    n = len(corrected)
    if len(rega_hist) != n or len(regd_hist) != n:
        raise DataError(f"length mismatch: corrected {n}, RegA {len(rega_hist)}, RegD {len(regd_hist)} samples")
    for name, series in (('RegA', rega_hist), ('RegD', regd_hist)):
        if not math.isclose(series.dt_s, corrected.dt_s):
            raise DataError(f"{name} history uses dt={series.dt_s} s, corrected ACE uses dt={corrected.dt_s} s")
    if not math.isclose(corrected.dt_s, plant.dt_s):
        raise ConfigError(f"corrected ACE uses dt={corrected.dt_s} s, plant steps with dt={plant.dt_s} s")
    dt = plant.dt_s
    gen, bes = GeneratorState(), BesState(plant.soc0_mwh, 0.0)
    response = np.empty(n)
    for t in range(n):
        response[t] = gen.p_g_mw + bes.p_e_mw
        gen, _ = generator_step(gen, plant.generator, rega_hist.values[t], dt)
        bes, _ = bes_step(bes, plant.bes, regd_hist.values[t], dt)
    return AceSeries(corrected.values - response, corrected.dt_s, corrected.start_time_s)
