from .ace_series import ACE_COLUMNS, AceSeries, save_ace_csv
from .reconstruct import reconstruct_uncorrected
from .statistics import AceSummary, describe_ace, jarque_bera
from .synth import SynthConfig, synth_ace
