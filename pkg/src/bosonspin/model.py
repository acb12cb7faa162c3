"""Core model: parameters, initial-state geometry, and the high-frequency
propagator of a single environment spin in Bloch form.

The central system is a harmonic oscillator (mass M, angular frequency
Omega) coupled to two-level systems through g*X*sigma_z; each spin carries
a tunneling term -(Delta/2)*sigma_x.  In the recoilless regime the
oscillator drags the environment along the classical trajectory
X(t) = X0*cos(Omega*t + phi), so a spin sees the driven Hamiltonian

    H(t) = -(Delta/2)*sigma_x + g*X0*cos(Omega*t + phi)*sigma_z.

The high-frequency expansion factorizes the propagator into a periodic
kick exp(-i*K) with K = xi*sin(.)*sigma_z, truncated at first order in
xi = g*X0/Omega, and a static part generated by

    H_F*t = -Delta_tilde*(1 - xi^2)*tau*sigma_x,

with tau = Omega*t and Delta_tilde = Delta/(2*Omega).  The resulting 2x2
unitary is kept in the quaternion-like form

    U = U0*I + i*(U1*sigma_x + U2*sigma_y + U3*sigma_z),

which makes conjugation of the thermal spin state a purely real algebra
on (U0, U1, U2, U3).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class CouplingRegimeWarning(UserWarning):
    """Sampled couplings leave the small-xi regime the propagator assumes."""


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian constants of the oscillator-spin model.

    M, Omega are the oscillator mass and angular frequency, Delta the spin
    tunneling energy and g the position-spin coupling.  The dimensionless
    couplings g_tilde = g/Omega and Delta_tilde = Delta/(2*Omega) are always
    recomputed from the stored fields.
    """

    M: float
    Omega: float
    Delta: float
    g: float

    def __post_init__(self):
        for name in ("M", "Omega", "Delta", "g"):
            _require_finite(name, getattr(self, name))
        if self.M <= 0:
            raise ValueError(f"M must be positive, got {self.M}")
        if self.Omega <= 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")
        if self.Delta < 0:
            raise ValueError(f"Delta must be non-negative, got {self.Delta}")

    @classmethod
    def with_g_tilde(cls, M, Omega, Delta, g_tilde):
        """Build parameters from the rescaled coupling g_tilde = g/Omega."""
        return cls(M=M, Omega=Omega, Delta=Delta, g=g_tilde * Omega)

    @property
    def g_tilde(self):
        return self.g / self.Omega

    @property
    def Delta_tilde(self):
        return self.Delta / (2.0 * self.Omega)


@dataclass(frozen=True)
class OscillatorInit:
    """Displaced squeezed initial state of the oscillator.

    alpha_abs and phi are the displacement magnitude and phase, r and theta
    the squeezing magnitude and phase.  The position distribution is the
    Gaussian exp(-(X-q)^2/eta)/sqrt(pi*eta) with the moments below.
    """

    alpha_abs: float
    phi: float
    r: float
    theta: float

    def __post_init__(self):
        for name in ("alpha_abs", "phi", "r", "theta"):
            _require_finite(name, getattr(self, name))
        if self.alpha_abs < 0:
            raise ValueError(f"alpha_abs must be non-negative, got {self.alpha_abs}")
        if self.r < 0:
            raise ValueError(f"r must be non-negative, got {self.r}")

    def eta(self, params: ModelParams) -> float:
        """Gaussian width parameter at t=0 (variance of X is eta/2)."""
        return (math.cosh(2 * self.r)
                + math.cos(self.theta) * math.sinh(2 * self.r)) / (params.M * params.Omega)

    def q0(self, params: ModelParams) -> float:
        """Displacement radius |alpha|*sqrt(2/(M*Omega))."""
        return math.sqrt(2.0 / (params.M * params.Omega)) * self.alpha_abs

    def q(self, params: ModelParams) -> float:
        """Mean position at t=0, q = q0*cos(phi)."""
        return self.q0(params) * math.cos(self.phi)


# Largest beta*Delta before 1-E(beta) = 2/(1+exp(beta*Delta)) underflows.
BETA_DELTA_UNDERFLOW = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ThermalEnv:
    """Thermal initial state (I + E*sigma_x)/2 of a spin with gap delta.

    beta is the inverse temperature; E = tanh(beta*delta/2) is the Bloch
    excess along sigma_x.  delta is stored so the state is self-contained.
    """

    beta: float
    delta: float

    def __post_init__(self):
        _require_finite("beta", self.beta)
        _require_finite("delta", self.delta)
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")

    @classmethod
    def for_model(cls, beta, params: ModelParams):
        return cls(beta=beta, delta=params.Delta)

    @property
    def excess(self) -> float:
        return math.tanh(self.beta * self.delta / 2.0)

    @property
    def one_minus_excess(self) -> float:
        # 1 - tanh(x/2) = 2/(1+e^x), stable for large beta*delta
        x = self.beta * self.delta
        if x > BETA_DELTA_UNDERFLOW:
            return 0.0
        return 2.0 / (1.0 + math.exp(x))

    def as_density(self) -> np.ndarray:
        return 0.5 * (IDENTITY + self.excess * SIGMA_X)


@dataclass(frozen=True)
class BlochUnitary:
    """2x2 unitary U0*I + i*(U1*sx + U2*sy + U3*sz) with real components."""

    U0: float
    U1: float
    U2: float
    U3: float

    @property
    def norm_sq(self) -> float:
        return self.U0**2 + self.U1**2 + self.U2**2 + self.U3**2

    def as_matrix(self) -> np.ndarray:
        return (self.U0 * IDENTITY
                + 1j * (self.U1 * SIGMA_X + self.U2 * SIGMA_Y + self.U3 * SIGMA_Z))


@dataclass(frozen=True)
class QubitBloch:
    """Qubit state (I + a.sigma)/2 as the Bloch vector (a1, a2, a3)."""

    a1: float
    a2: float
    a3: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.a1**2 + self.a2**2 + self.a3**2)

    def as_density(self) -> np.ndarray:
        return 0.5 * (IDENTITY
                      + self.a1 * SIGMA_X + self.a2 * SIGMA_Y + self.a3 * SIGMA_Z)


@dataclass(frozen=True)
class WaveNumbers:
    """Phase-space wave numbers entering the evolved spin state.

    k_minus and k_plus multiply X0 linearly, k multiplies X0^2, k0 is the
    X0-independent phase; delta_k = k_plus - k_minus = 4*g_tilde*sin(phi)
    is time independent while k and k0 grow linearly in tau.
    """

    k_minus: float
    k_plus: float
    delta_k: float
    k: float
    k0: float


class Dimensionless(NamedTuple):
    tau: float
    xi: float
    g_tilde: float
    Delta_tilde: float


def dimensionless(params: ModelParams, X0: float, t: float) -> Dimensionless:
    """Map (X0, t) to the dimensionless drive variables (tau, xi, g~, Delta~)."""
    return Dimensionless(
        tau=params.Omega * t,
        xi=params.g * X0 / params.Omega,
        g_tilde=params.g_tilde,
        Delta_tilde=params.Delta_tilde,
    )


def floquet_generators(xi: float, Delta_tilde: float, tau: float) -> tuple[float, float]:
    """Generator coefficients of the factorized propagator.

    Returns (hF_coeff, kick_amp): hF_coeff = -Delta_tilde*(1-xi^2)*tau is the
    sigma_x coefficient of H_F*t, and kick_amp = xi*sin(tau) is the sigma_z
    coefficient of the kick evaluated at phase argument tau.  The full
    propagator is exp(-i*kick(tau+phi)*sz) exp(-i*hF_coeff*sx) exp(+i*kick(phi)*sz).
    """
    return -Delta_tilde * (1.0 - xi**2) * tau, xi * math.sin(tau)


def _bloch_components(xi, Delta_tilde, tau, phi):
    # array-friendly core shared with the quadrature oracle
    s_minus = xi * (np.sin(tau + phi) - np.sin(phi))
    s_plus = xi * (np.sin(tau + phi) + np.sin(phi))
    theta = Delta_tilde * (1.0 - xi**2) * tau
    return (np.cos(s_minus) * np.cos(theta),
            np.cos(s_plus) * np.sin(theta),
            np.sin(s_plus) * np.sin(theta),
            -np.sin(s_minus) * np.cos(theta))


def floquet_bloch(xi: float, Delta_tilde: float, tau: float, phi: float) -> BlochUnitary:
    """High-frequency propagator in Bloch form; exactly unit norm."""
    u0, u1, u2, u3 = _bloch_components(xi, Delta_tilde, tau, phi)
    return BlochUnitary(float(u0), float(u1), float(u2), float(u3))


def evolve_thermal(U: BlochUnitary, env: ThermalEnv) -> QubitBloch:
    """Conjugate the thermal state by U; the Bloch length stays E(beta)."""
    if abs(U.norm_sq - 1.0) > 1e-9:
        raise ValueError(f"propagator is not unit-norm: |U|^2 = {U.norm_sq!r}")
    E = env.excess
    return QubitBloch(
        a1=E * (2.0 * U.U0**2 + 2.0 * U.U1**2 - 1.0),
        a2=2.0 * E * (U.U1 * U.U2 - U.U0 * U.U3),
        a3=2.0 * E * (U.U0 * U.U2 + U.U1 * U.U3),
    )


def wave_numbers(g_tilde: float, Delta_tilde: float, tau: float, phi: float) -> WaveNumbers:
    k_minus = 2.0 * g_tilde * (math.sin(tau + phi) - math.sin(phi))
    k_plus = 2.0 * g_tilde * (math.sin(tau + phi) + math.sin(phi))
    return WaveNumbers(
        k_minus=k_minus,
        k_plus=k_plus,
        delta_k=k_plus - k_minus,
        k=-2.0 * g_tilde**2 * tau * Delta_tilde,
        k0=2.0 * tau * Delta_tilde,
    )


def exponential_forms(wn: WaveNumbers, X0: float) -> tuple[complex, complex]:
    """Evolved Bloch components as complex exponential sums in X0.

    Returns (c12, c3) with a1 = E*Re(c12), a2 = E*Im(c12), a3 = E*Re(c3);
    this is the form whose Gaussian average has a closed form.
    """
    lin_m = wn.k_minus * X0
    lin_p = wn.k_plus * X0
    quad = wn.k * X0**2 + wn.k0
    c12 = 0.25 * (2.0 * np.exp(1j * lin_m) + 2.0 * np.exp(1j * lin_p)
                  + np.exp(1j * (lin_m - quad)) + np.exp(1j * (lin_m + quad))
                  - np.exp(1j * (lin_p - quad)) - np.exp(1j * (lin_p + quad)))
    half = 0.5 * wn.delta_k * X0
    c3 = 0.5 * (np.exp(1j * (-half + quad)) - np.exp(1j * (half + quad)))
    return complex(c12), complex(c3)


def initial_position_pdf(init: OscillatorInit, params: ModelParams, X0: float) -> float:
    """Gaussian density of the initial position, (pi*eta)^(-1/2) e^{-(X0-q)^2/eta}."""
    eta = init.eta(params)
    if not (eta > 0.0) or not math.isfinite(eta):
        raise ValueError(f"invalid Gaussian width eta = {eta!r}")
    return math.exp(-(X0 - init.q(params))**2 / eta) / math.sqrt(math.pi * eta)


def xi_at_3sigma(params: ModelParams, init: OscillatorInit) -> float:
    """|xi| at the 3-sigma edge of the initial position distribution."""
    edge = abs(init.q(params)) + 3.0 * math.sqrt(init.eta(params) / 2.0)
    return abs(params.g_tilde) * edge


def warn_if_strong_coupling(params: ModelParams, init: OscillatorInit,
                            threshold: float = 0.5) -> None:
    """Warn when the sampled couplings leave the small-xi expansion regime."""
    xi_edge = xi_at_3sigma(params, init)
    if xi_edge > threshold:
        warnings.warn(
            f"|xi| reaches {xi_edge:.3f} at the 3-sigma edge of p(X0) "
            f"(threshold {threshold}); the high-frequency propagator is "
            "used outside its small-coupling regime",
            CouplingRegimeWarning,
            stacklevel=3,
        )
