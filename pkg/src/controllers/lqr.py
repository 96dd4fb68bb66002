"""
LQR-based AGC: RegA from the pre-set PI path, RegD = -k x with x = [P_ACE, RegA, K_I*I_ACE, e - e_ref].
The gain is synthesized from the continuous algebraic Riccati equation (CARE), solved by
Newton-Kleinman iteration with a vectorized Lyapunov solve at every step.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.utils import ArrayLike, require_finite, require_positive, unwrap
from src.utils.blocks import saturate
from src.utils.errors import NumericError
from .antiwindup import integrate_ace
from .pjm import rega_path
from .state import Command, ControllerConfig, ControllerState, UnitFeedback

logger = logging.getLogger(__name__)

REFERENCE_GAIN = (0.4309, -0.0339, 0.1210, 8.0)
B_CONVENTIONS = ('physical', 'literal')


@dataclass(frozen=True, eq=False)
class LqrModel:
    a: np.ndarray
    b: np.ndarray
    q: np.ndarray
    r: float
    k: np.ndarray

    def __post_init__(self):
        for name in ('a', 'b', 'q', 'k'):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not np.allclose(self.q, self.q.T):
            raise ValueError("state cost q must be symmetric")
        if np.min(np.linalg.eigvalsh(self.q)) < -1e-12:
            raise ValueError("state cost q must be positive semidefinite")
        require_positive('r', self.r)
        if self.k.shape != (self.a.shape[0],):
            raise ValueError(f"gain must have {self.a.shape[0]} entries, got shape {self.k.shape}")


def build_state_matrices(m_inertia: float, ta_s: float, kp: float, ki: float,
                         b_convention: str = 'physical') -> Tuple[np.ndarray, np.ndarray]:
    """
    Linearized AGC model. `physical` makes the SoC state (MWh) fall by 1/3600 per MW*s of
    positive (discharging) RegD; `literal` keeps the literal +1 entry.
    """
    require_positive('m_inertia', m_inertia)
    require_positive('ta_s', ta_s)
    if b_convention not in B_CONVENTIONS:
        raise ValueError(f"b_convention must be one of {B_CONVENTIONS}, got {b_convention!r}")
    a = np.array([[-1.0 / m_inertia, 1.0 / m_inertia, 0.0, 0.0],
                  [-kp / ta_s, -1.0 / ta_s, -1.0 / ta_s, 0.0],
                  [ki, 0.0, 0.0, 0.0],
                  [0.0, 0.0, 0.0, 0.0]])
    soc_entry = 1.0 if b_convention == 'literal' else -1.0 / 3600.0
    b = np.array([1.0 / m_inertia, 0.0, 0.0, soc_entry])
    return a, b


def default_state_weights(cd_mw: float, ca_mw: float, energy_mwh: float) -> np.ndarray:
    return np.diag([1.0, (cd_mw / ca_mw) ** 2, 0.0, 1.0 / energy_mwh ** 2])


def _as_care_operands(a, b, q, r) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"a must be square, got shape {a.shape}")
    b = np.asarray(b, dtype=float).reshape(n, -1)
    q = np.atleast_2d(np.asarray(q, dtype=float))
    r = np.atleast_2d(np.asarray(r, dtype=float))
    if q.shape != (n, n) or r.shape != (b.shape[1], b.shape[1]):
        raise ValueError("q must be n x n and r must be m x m")
    if np.min(np.linalg.eigvalsh(0.5 * (r + r.T))) <= 0:
        raise ValueError("r must be positive definite")
    return a, b, q, r


def care_residual(a, b, q, r, p) -> float:
    a, b, q, r = _as_care_operands(a, b, q, r)
    p = np.atleast_2d(p)
    res = a.T @ p + p @ a - p @ b @ scipy.linalg.solve(r, b.T) @ p + q
    return float(np.linalg.norm(res, 'fro'))


def _is_hurwitz(a: np.ndarray) -> bool:
    return bool(np.max(np.linalg.eigvals(a).real) < 0)


def _solve_vectorized(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Dense solve of a Kronecker-vectorized system. A slow SoC mode leaves it ill-conditioned; the
    LinAlgWarning is logged instead of surfacing, and the CARE residual check decides acceptance.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', scipy.linalg.LinAlgWarning)
        x = scipy.linalg.solve(lhs, rhs)
    for w in caught:
        logger.debug(f"vectorized Lyapunov solve: {w.message}")
    return x


def _solve_lyapunov(a_cl: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve a_cl^T p + p a_cl = -w through the Kronecker-vectorized linear system."""
    n = a_cl.shape[0]
    eye = np.eye(n)
    lhs = np.kron(a_cl.T, eye) + np.kron(eye, a_cl.T)
    p = _solve_vectorized(lhs, -w.reshape(-1)).reshape(n, n)
    return 0.5 * (p + p.T)


def _stabilizing_gain(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Initial gain for Newton-Kleinman: zero for a Hurwitz a, otherwise Bass's shifted-Lyapunov gain."""
    n, m = b.shape
    if _is_hurwitz(a):
        return np.zeros((m, n))
    beta = 1.0 + float(np.max(np.abs(np.linalg.eigvals(a))))
    a_shift = a + beta * np.eye(n)
    eye = np.eye(n)
    lhs = np.kron(a_shift, eye) + np.kron(eye, a_shift)
    try:
        z = _solve_vectorized(lhs, (2.0 * b @ b.T).reshape(-1)).reshape(n, n)
        z = 0.5 * (z + z.T)
        if np.min(np.linalg.eigvalsh(z)) <= 0:
            raise np.linalg.LinAlgError("shifted controllability gramian is not positive definite")
        k0 = scipy.linalg.solve(z, b, assume_a='pos').T
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"(a, b) is not stabilizable: no stabilizing start ({exc})")
    if not _is_hurwitz(a - b @ k0):
        raise NumericError("(a, b) is not stabilizable: no stabilizing start")
    return k0


def solve_care(a, b, q, r, max_iter: int = 100) -> np.ndarray:
    """Stabilizing solution p of a^T p + p a - p b r^-1 b^T p + q = 0."""
    a, b, q, r = _as_care_operands(a, b, q, r)
    tol = 1e-8 * (1.0 + np.linalg.norm(q, 'fro'))
    r_inv_bt = scipy.linalg.solve(r, b.T)
    k = _stabilizing_gain(a, b)
    for iteration in range(1, max_iter + 1):
        try:
            p = _solve_lyapunov(a - b @ k, q + k.T @ r @ k)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise NumericError(f"Lyapunov solve failed in Newton-Kleinman iteration {iteration}: {exc}")
        k = r_inv_bt @ p
        residual = care_residual(a, b, q, r, p)
        if residual <= tol:
            if not _is_hurwitz(a - b @ k):
                raise NumericError("CARE solution is not stabilizing")
            logger.debug(f"CARE converged after {iteration} iterations (residual {residual:.3e})")
            return p
    raise NumericError(f"CARE did not converge in {max_iter} iterations (residual {residual:.3e})")


def synthesize_lqr(a: np.ndarray, b: np.ndarray, q: np.ndarray, r: float,
                   gain: Optional[Sequence[float]] = None) -> LqrModel:
    """LQR model with gain k = r^-1 b^T p, or with a user supplied `gain` that bypasses the CARE."""
    if gain is None:
        p = solve_care(a, b, q, r)
        k = (np.asarray(b, dtype=float).reshape(1, -1) @ p).ravel() / r
        logger.info(f"LQR gain synthesized: {np.array2string(k, precision=4)}")
    else:
        k = np.asarray(gain, dtype=float)
    return LqrModel(a=a, b=b, q=q, r=r, k=k)


def assemble_state(p_ace_mw: float, state: ControllerState, feedback: UnitFeedback, cfg: ControllerConfig,
                   dt_s: float) -> np.ndarray:
    """x at the current step; the integral already includes the previous step."""
    i_ace = integrate_ace(state, feedback, cfg, dt_s)
    return np.array([p_ace_mw, state.rega_filter_mw, cfg.rega_gains.ki * i_ace,
                     feedback.soc_mwh - cfg.soc_ref_mwh])


def lqr_step(state: ControllerState, x: ArrayLike, feedback: UnitFeedback, model: LqrModel,
             cfg: ControllerConfig, dt_s: float) -> Tuple[ControllerState, Command]:
    require_positive('dt_s', dt_s)
    x = np.asarray(x, dtype=float)
    require_finite('LQR state', x)
    p_ace = float(x[0])
    i_ace = integrate_ace(state, feedback, cfg, dt_s)
    _, rega_filter, rega = rega_path(state, p_ace, i_ace, cfg, dt_s)
    regd = saturate(-float(model.k @ x), cfg.cd_mw)

    next_state = ControllerState(
        i_ace_mws=unwrap(i_ace),
        rega_filter_mw=unwrap(rega_filter),
        regd_filter_mw=state.regd_filter_mw,
        regd_energy_mws=unwrap(state.regd_energy_mws + regd * dt_s),
        p_ace_prev_mw=p_ace,
        rega_cmd_mw=unwrap(rega),
        regd_cmd_mw=unwrap(regd))
    return next_state, Command(unwrap(rega), unwrap(regd))
