import math
from dataclasses import dataclass
from logging import ERROR, INFO, WARNING
from numbers import Integral, Real
from typing import Any, Callable, Dict, List, Optional, Tuple

CONTROLLER_CHOICES = ('pjm', 'lqr', 'proposed', 'pi')
B_CONVENTION_CHOICES = ('physical', 'literal')


@dataclass
class ConfigProblem:
    UNKNOWN_KEY = 1
    INVALID_TYPE = 2
    INVALID_VALUE = 3
    NONSTANDARD_SETTING = 4

    code: int
    key: str
    reason: str
    severity: int = ERROR  # use pythons logging levels [CRITICAL, ERROR, WARNING, INFO, NOTSET]


def _is_real(v: Any) -> bool:
    return isinstance(v, Real) and not isinstance(v, bool) and math.isfinite(v)


def _is_int(v: Any) -> bool:
    return isinstance(v, Integral) and not isinstance(v, bool)


def _vector(length: int, nonnegative: bool = False) -> Callable[[Any], bool]:
    def check(v: Any) -> bool:
        return (isinstance(v, (list, tuple)) and len(v) == length and all(_is_real(x) for x in v)
                and (not nonnegative or all(x >= 0 for x in v)))
    return check


# key -> (type check, value predicate or None, human readable constraint)
_Rule = Tuple[Callable[[Any], bool], Optional[Callable[[Any], bool]], str]
_RULES: Dict[str, _Rule] = {
    'controller': (lambda v: isinstance(v, str), lambda v: v in CONTROLLER_CHOICES,
                   f"one of {', '.join(CONTROLLER_CHOICES)}"),
    'kp': (_is_real, None, 'a finite number'),
    'ki': (_is_real, lambda v: v >= 0, '>= 0'),
    'kp_d': (_is_real, None, 'a finite number'),
    'ki_d': (_is_real, lambda v: v >= 0, '>= 0'),
    'ta_s': (_is_real, lambda v: v >= 0, '>= 0 (0 bypasses the filter)'),
    'td_s': (_is_real, lambda v: v >= 0, '>= 0 (0 bypasses the filter)'),
    'tg_s': (_is_real, lambda v: v > 0, '> 0'),
    'deadband_mw': (_is_real, lambda v: v >= 0, '>= 0'),
    'ramp_pct_per_min': (_is_real, lambda v: v > 0, '> 0'),
    'neutrality_gain': (_is_real, lambda v: v >= 0, '>= 0'),
    'neutrality_enabled': (lambda v: isinstance(v, bool), None, 'true or false'),
    'antiwindup_enabled': (lambda v: isinstance(v, bool), None, 'true or false'),
    'lqr_gain': (lambda v: v is None or _vector(4)(v), None, 'a list of 4 numbers'),
    'm_inertia': (_is_real, lambda v: v > 0, '> 0'),
    'q_diag': (lambda v: v is None or _vector(4, nonnegative=True)(v), None, 'a list of 4 numbers >= 0'),
    'r': (_is_real, lambda v: v > 0, '> 0'),
    'lqr_b_convention': (lambda v: isinstance(v, str), lambda v: v in B_CONVENTION_CHOICES,
                         f"one of {', '.join(B_CONVENTION_CHOICES)}"),
    'dt_s': (_is_real, lambda v: v > 0, '> 0'),
    'ca_mw': (_is_real, lambda v: v > 0, '> 0'),
    'cd_mw': (_is_real, lambda v: v > 0, '> 0'),
    'duration_min': (_is_real, lambda v: v > 0, '> 0'),
    'rte': (_is_real, lambda v: 0 < v <= 1, 'in (0, 1]'),
    'soc0_frac': (_is_real, lambda v: 0 <= v <= 1, 'in [0, 1]'),
    'bes_units': (_is_int, lambda v: v >= 1, 'an integer >= 1'),
    'we': (_is_real, lambda v: v >= 0, '>= 0'),
    'window_min': (_is_real, lambda v: v > 0, '> 0'),
    'bins': (_is_int, lambda v: v >= 1, 'an integer >= 1'),
    'stride_steps': (lambda v: v is None or _is_int(v), lambda v: v is None or v >= 1, 'an integer >= 1'),
    'e0_draws': (_is_int, lambda v: v >= 1, 'an integer >= 1'),
    'k_max': (lambda v: v is None or _is_real(v), lambda v: v is None or v > 0, '> 0'),
    'seed': (_is_int, lambda v: v >= 0, 'an integer >= 0'),
    'threads': (_is_int, lambda v: v >= 1, 'an integer >= 1'),
}


def known_keys() -> List[str]:
    return list(_RULES.keys())


def evaluate_config(values: Dict[str, Any]) -> List[ConfigProblem]:
    """Check every key/value pair against its constraint and collect all problems at once."""
    problems: List[ConfigProblem] = []
    for key, value in values.items():
        try:
            type_check, predicate, constraint = _RULES[key]
        except KeyError:
            problems.append(ConfigProblem(ConfigProblem.UNKNOWN_KEY, key, f"unknown key '{key}'"))
            continue
        if not type_check(value):
            problems.append(ConfigProblem(ConfigProblem.INVALID_TYPE, key,
                                          f"'{key}' must be {constraint}, got {value!r}"))
        elif predicate is not None and not predicate(value):
            problems.append(ConfigProblem(ConfigProblem.INVALID_VALUE, key,
                                          f"'{key}' must be {constraint}, got {value!r}"))

    if values.get('lqr_b_convention') == 'literal':
        problems.append(ConfigProblem(ConfigProblem.NONSTANDARD_SETTING, 'lqr_b_convention',
                                      "the literal B matrix makes positive RegD raise the SoC; "
                                      "synthesized gains will push the storage away from its reference", WARNING))
    if values.get('lqr_gain') is not None and values.get('q_diag') is not None:
        problems.append(ConfigProblem(ConfigProblem.NONSTANDARD_SETTING, 'q_diag',
                                      "q_diag is ignored because lqr_gain overrides the synthesized gain", INFO))
    return problems
