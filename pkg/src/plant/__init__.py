from .bes import BesParams, BesState, bes_fleet_step, bes_step
from .config import PlantConfig
from .generator import GeneratorParams, GeneratorState, generator_step
