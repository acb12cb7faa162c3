"""Holevo quantity of the position-broadcast channel into one spin.

The averaged spin state (I + E*mu.sigma)/2 has eigenvalues (1 +- mu*E)/2,
so everything reduces to binary entropies:

    chi = H((1 + mu(tau)*E)/2) - H((1 + E)/2),

with the second term the (time-independent) entropy of the initial thermal
state.  Entropies are in bits throughout.  The module also provides the
asymptotic form chi_infinity (interference terms dropped), the short-time
quadratic growth rate, the temperature ceiling chi_M(beta), and the
phase-matching condition that drives chi to that ceiling.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from .gaussian import mu_components
from .model import (BETA_DELTA_UNDERFLOW, ModelParams, OscillatorInit,
                    ThermalEnv, warn_if_strong_coupling)

logger = logging.getLogger(__name__)

_DOMAIN_SLACK = 1e-12


def binary_entropy(p: float) -> float:
    """Shannon entropy -p*log2(p) - (1-p)*log2(1-p) in bits, 0*log0 = 0."""
    if not (-_DOMAIN_SLACK <= p <= 1.0 + _DOMAIN_SLACK):
        raise ValueError(f"probability out of range: {p!r}")
    p = min(max(p, 0.0), 1.0)
    return float(-(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0))


def _entropy_arr(p):
    return -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0)


def entropy_avg_state(mu: float, E: float) -> float:
    """Entropy of the averaged state with Bloch length mu*E."""
    if not (-_DOMAIN_SLACK <= mu <= 1.0 + _DOMAIN_SLACK):
        raise ValueError(f"mu out of range: {mu!r}")
    if not (-_DOMAIN_SLACK <= E <= 1.0 + _DOMAIN_SLACK):
        raise ValueError(f"E out of range: {E!r}")
    return binary_entropy((1.0 + min(mu, 1.0) * min(E, 1.0)) / 2.0)


def _clamp_mu(mu: float) -> float:
    if mu > 1.0:
        if mu > 1.0 + _DOMAIN_SLACK:
            raise ValueError(f"mu exceeds 1 beyond numerical slack: {mu!r}")
        logger.debug("clamping mu = 1 + %.3e to 1", mu - 1.0)
        return 1.0
    if mu < 0.0:
        raise ValueError(f"mu must be non-negative, got {mu!r}")
    return mu


@dataclass(frozen=True)
class HolevoResult:
    """Entropies (bits) of one time point: chi = S_avg - S_bar >= 0."""

    S_avg: float
    S_bar: float
    chi: float
    mu: float


def holevo_chi(mu: float, env: ThermalEnv) -> HolevoResult:
    """Holevo quantity for an averaged Bloch length mu at temperature 1/beta."""
    mu = _clamp_mu(mu)
    E = env.excess
    s_avg = binary_entropy((1.0 + mu * E) / 2.0)
    s_bar = binary_entropy((1.0 + E) / 2.0)
    return HolevoResult(S_avg=s_avg, S_bar=s_bar, chi=s_avg - s_bar, mu=mu)


def _check_env(params: ModelParams, env: ThermalEnv) -> None:
    if not math.isclose(env.delta, params.Delta, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError(
            f"environment gap {env.delta} does not match model Delta {params.Delta}")


def chi_timeseries(params: ModelParams, init: OscillatorInit, env: ThermalEnv,
                   tau_grid: Sequence[float]) -> list[HolevoResult]:
    """Pointwise Holevo quantity over an ascending grid of tau values."""
    grid = np.asarray(tau_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1 or not np.all(np.isfinite(grid)):
        raise ValueError("tau_grid must be a finite 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("tau_grid must be strictly ascending")
    _check_env(params, env)
    warn_if_strong_coupling(params, init)
    return [holevo_chi(mu_components(params, init, t).mu, env) for t in grid]


def chi_curve(params: ModelParams, init: OscillatorInit, env: ThermalEnv,
              tau_grid: Sequence[float]) -> np.ndarray:
    """chi values only, as an array (convenience wrapper for scans)."""
    return np.array([r.chi for r in chi_timeseries(params, init, env, tau_grid)])


def mu_infinity(params: ModelParams, init: OscillatorInit, tau):
    """Norm of the averaged Bloch vector with the decaying terms dropped.

    Still tau-periodic through the wave numbers k-+(tau); the cross term
    carries the fixed phase psi = 2*g_tilde*q0*sin(2*phi).
    """
    tau = np.asarray(tau, dtype=float)
    gt = params.g_tilde
    eta = init.eta(params)
    km = 2.0 * gt * (np.sin(tau + init.phi) - math.sin(init.phi))
    kp = 2.0 * gt * (np.sin(tau + init.phi) + math.sin(init.phi))
    psi = 2.0 * gt * init.q0(params) * math.sin(2.0 * init.phi)
    val = 0.25 * (np.exp(-eta * km**2 / 2.0) + np.exp(-eta * kp**2 / 2.0)
                  + 2.0 * np.exp(-eta * (km**2 + kp**2) / 4.0) * math.cos(psi))
    out = np.sqrt(np.maximum(val, 0.0))
    return float(out) if out.ndim == 0 else out


def chi_infinity(params: ModelParams, init: OscillatorInit, env: ThermalEnv, tau):
    """Asymptotic Holevo quantity chi evaluated at mu_infinity(tau)."""
    _check_env(params, env)
    mu = np.minimum(np.asarray(mu_infinity(params, init, tau)), 1.0)
    E = env.excess
    out = _entropy_arr((1.0 + mu * E) / 2.0) - binary_entropy((1.0 + E) / 2.0)
    return float(out) if out.ndim == 0 else out


def mu_infinity_bound_gap(params: ModelParams, init: OscillatorInit, tau):
    """Diagnostic: cos(g_tilde*q0*sin(2*phi)) - mu_infinity(tau).

    A claimed upper bound on mu_infinity; it cannot hold wherever the cosine
    is negative, so violations are reported rather than asserted.
    """
    bound = math.cos(params.g_tilde * init.q0(params) * math.sin(2.0 * init.phi))
    return bound - mu_infinity(params, init, tau)


@dataclass(frozen=True)
class ShortTimeCoeff:
    """Quadratic growth rate of chi: chi = Lambda*tau^2 + O(tau^3).

    Lambda keeps the cos^2(2*q*g_tilde*sin(phi)) factor of the second-order
    expansion; Lambda_simplified replaces that factor by 1, collapsing the
    bracket to 1 - (1 - 4*Delta_tilde^2)*sin^2(phi).
    """

    Lambda: float
    Lambda_simplified: float


def short_time_lambda(params: ModelParams, init: OscillatorInit,
                      env: ThermalEnv) -> ShortTimeCoeff:
    """Short-time coefficient of chi, exact at second order in g_tilde.

    The averaged Bloch length drops as mu = 1 - C*tau^2 with
    C = eta*g_tilde^2*[cos^2(phi) + 4*Delta_tilde^2*sin^2(phi)*cos^2(2*q*g_tilde*sin(phi))]
    at O(g_tilde^2), and the chain rule through the entropy gives
    Lambda = (E/2)*log2[(1+E)/(1-E)]*C.
    """
    _check_env(params, env)
    E = env.excess
    one_minus = env.one_minus_excess
    if E == 0.0:
        return ShortTimeCoeff(0.0, 0.0)
    if one_minus == 0.0:
        raise ValueError(
            "1 - E(beta) underflows for beta*Delta = "
            f"{env.beta * env.delta:.6g} (threshold {BETA_DELTA_UNDERFLOW:.6g}); "
            "the logarithmic factor of Lambda diverges")
    log_ratio = math.log2(1.0 + E) - math.log2(one_minus)
    eta, q = init.eta(params), init.q(params)
    gt, dt = params.g_tilde, params.Delta_tilde
    s2, c2 = math.sin(init.phi)**2, math.cos(init.phi)**2
    prefactor = (E / 2.0) * log_ratio * eta * gt**2
    bracket = c2 + 4.0 * dt**2 * s2 * math.cos(2.0 * q * gt * math.sin(init.phi))**2
    bracket_simplified = 1.0 - (1.0 - 4.0 * dt**2) * s2
    return ShortTimeCoeff(Lambda=prefactor * bracket,
                          Lambda_simplified=prefactor * bracket_simplified)


def chi_max(env: ThermalEnv) -> float:
    """Temperature ceiling of chi: 1 - H((1+E)/2), reaching 1 bit as beta -> inf."""
    return 1.0 - binary_entropy((1.0 + env.excess) / 2.0)


class MaximizationCondition(NamedTuple):
    psi: float
    satisfied: bool


def maximization_condition(params: ModelParams, init: OscillatorInit,
                           tol: float = 1e-9) -> MaximizationCondition:
    """Phase-matching condition psi = 2*g_tilde*q0*sin(2*phi) = pi.

    When satisfied, the two surviving interference amplitudes of
    mu_infinity are antiparallel and chi approaches its ceiling.
    """
    psi = 2.0 * params.g_tilde * init.q0(params) * math.sin(2.0 * init.phi)
    return MaximizationCondition(psi=psi, satisfied=abs(psi - math.pi) <= tol)


def solve_condition_omega(params: ModelParams, init: OscillatorInit,
                          target: float = math.pi) -> float:
    """Oscillator frequency achieving psi = target at fixed g_tilde.

    psi(Omega) = 2*g_tilde*|alpha|*sqrt(2/(M*Omega))*sin(2*phi) decreases
    monotonically from infinity to 0, so the root is unique whenever
    sin(2*phi) > 0.  Raises ValueError if the condition is unsatisfiable.
    """
    gt = params.g_tilde
    sin2phi = math.sin(2.0 * init.phi)
    amp = 2.0 * gt * init.alpha_abs * sin2phi
    if amp <= 0.0 or target <= 0.0:
        raise ValueError(
            f"psi = {amp:.6g}*sqrt(2/(M*Omega)) cannot reach {target:.6g}; "
            "the condition requires g_tilde*|alpha|*sin(2*phi) > 0")

    def gap(omega):
        return amp * math.sqrt(2.0 / (params.M * omega)) - target

    return float(brentq(gap, 1e-12, 1e12, xtol=1e-14, rtol=1e-15))
