"""Closed-form reference curves for the walk on particle environments.

Everything here is a pure function of the model parameters: the critical
density, the static-environment speed, the averaged-environment speed, the
perturbative speed in terms of the environment seen from the walker, the
rate function of the homogeneous biased walk, and the antisymmetry offset
of the quenched rate function.  The estimator and CLI layers treat these
as ground truth to compare Monte Carlo output against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Walk and environment parameters.

    alpha and beta are the continuous-time jump rates toward the preferred
    direction on occupied and vacant sites; rho is the environment density;
    p is the discrete-time right-probability on occupied sites and may be
    omitted when only the continuous-time quantities are needed.
    """

    alpha: float
    beta: float
    rho: float
    p: float | None = None

    def __post_init__(self):
        if not (0.0 < self.beta < self.alpha < math.inf):
            raise ValueError(f"need 0 < beta < alpha, got alpha={self.alpha}, beta={self.beta}")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.p is not None and not (0.5 < self.p < 1.0):
            raise ValueError(f"p must lie in (1/2, 1), got {self.p}")


def rho_c(params: ModelParams) -> float:
    """Critical density alpha/(alpha+beta), always in (1/2, 1)."""
    return params.alpha / (params.alpha + params.beta)


def static_speed(params: ModelParams) -> float:
    """Asymptotic speed in a frozen Bernoulli(rho) environment.

    Zero on [1/2, rho_c] and (alpha-beta)(rho-rho_c)/(rho(1-rho_c)+rho_c(1-rho))
    above the critical density.  Densities below 1/2 are rejected; callers
    wanting that regime map through the mirror (rho, theta) -> (1-rho, -theta).
    """
    rho = params.rho
    if rho < 0.5:
        raise ValueError("static_speed is defined for rho >= 1/2; use the mirror mapping below")
    rc = rho_c(params)
    if rho <= rc:
        return 0.0
    return (params.alpha - params.beta) * (rho - rc) / (rho * (1.0 - rc) + rc * (1.0 - rho))


def mean_env_speed(params: ModelParams) -> float:
    """Speed of the discrete walk when the environment is resampled fresh
    from Bernoulli(rho) at every step: (2 rho - 1)(2p - 1)."""
    if params.p is None:
        raise ValueError("mean_env_speed needs the discrete right-probability p")
    return (2.0 * params.rho - 1.0) * (2.0 * params.p - 1.0)


def perturbative_speed(rho_tilde: float, params: ModelParams) -> float:
    """Speed (2 rho_tilde - 1)(alpha - beta) given the equilibrium density
    rho_tilde of the environment as seen from the walker."""
    if not (0.0 <= rho_tilde <= 1.0):
        raise ValueError(f"rho_tilde must lie in [0, 1], got {rho_tilde}")
    return (2.0 * rho_tilde - 1.0) * (params.alpha - params.beta)


def homogeneous_rate(theta: float, params: ModelParams) -> float:
    """Rate of decay of P(Y_t >= theta t) for the homogeneous walk that
    jumps right at rate alpha and left at rate beta.

    This is the Legendre transform of u -> alpha(e^u - 1) + beta(e^-u - 1),
    zero exactly on (-inf, alpha - beta].  The stationarity condition
    theta = alpha e^u - beta e^-u is a quadratic in e^u with root
    e^u = (theta + s) / (2 alpha), s = sqrt(theta^2 + 4 alpha beta), and
    alpha e^u + beta e^-u = s there, which gives
        theta log[(theta + s) / (2 alpha)] + (alpha + beta) - s.
    """
    alpha, beta = params.alpha, params.beta
    if theta <= alpha - beta:
        return 0.0
    s = math.sqrt(theta * theta + 4.0 * alpha * beta)
    return theta * math.log((theta + s) / (2.0 * alpha)) + (alpha + beta) - s


def quenched_symmetry_offset(theta: float, params: ModelParams) -> float:
    """Antisymmetry offset theta (2 rho - 1) log(alpha/beta) linking the
    quenched rates at -theta and +theta."""
    if theta < 0.0:
        raise ValueError("offset is defined for theta >= 0; negate through the relation instead")
    return theta * (2.0 * params.rho - 1.0) * math.log(params.alpha / params.beta)
