from .run_config import RunConfig, load_run_config, parse_config_text
from .validation import ConfigProblem, evaluate_config, known_keys
