"""Closed-form Gaussian averages of the evolved spin state.

Averaging the conditional Bloch vector over the initial position
distribution p(X0) reduces to integrals of the form

    I[a,b,c] = (pi*eta)^(-1/2) * Integral dX0 e^{-(X0-q)^2/eta}
               * e^{i(a*X0^2 + b*X0 + c)}
             = (1 - i*a*eta)^(-1/2)
               * exp[(i*a*q^2 + i*b*q - b^2*eta/4)/(1 - i*a*eta) + i*c].

The grouped exponent above is the algebraically pre-simplified form: the
individually divergent b/a and b^2/a pieces of the naive expansion cancel
before evaluation, so the expression is regular for any a, including a=0
where it reduces to exp(-eta*b^2/4) e^{i(b*q+c)}.  The square root is the
principal branch; 1 - i*a*eta never crosses the negative real axis, so the
result is continuous in a.

The averaged Bloch vector mu(tau) combines six such integrals; the pieces
that carry the quadratic phase a = +-k decay like (1+k^2*eta^2)^(-1/4) and
are collected in the decay terms D12, D3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, OscillatorInit, wave_numbers

# Below this, a*eta is numerically indistinguishable from the a=0 limit.
_TINY_QUADRATIC_PHASE = 1e-12


@dataclass(frozen=True)
class GaussianIntegralArgs:
    """Arguments of I[a,b,c] with Gaussian weight of mean q and width eta."""

    a: float
    b: float
    c: float
    eta: float
    q: float

    def __post_init__(self):
        for name in ("a", "b", "c", "eta", "q"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")


@dataclass(frozen=True)
class MuVector:
    """Averaged Bloch components; the norm is recomputed, never stored."""

    mu1: float
    mu2: float
    mu3: float

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu1**2 + self.mu2**2 + self.mu3**2)


def _integral(a, b, c, eta, q):
    # array-friendly core of gaussian_I
    denom = 1.0 - 1j * a * eta
    exponent = (1j * a * q**2 + 1j * b * q - b**2 * eta / 4.0) / denom + 1j * c
    return denom**-0.5 * np.exp(exponent)


def gaussian_I(args: GaussianIntegralArgs) -> complex:
    """Closed form of the Gaussian-weighted quadratic-phase integral."""
    if abs(args.a) * args.eta < _TINY_QUADRATIC_PHASE:
        return complex(math.exp(-args.eta * args.b**2 / 4.0)
                       * np.exp(1j * (args.b * args.q + args.c)))
    return complex(_integral(args.a, args.b, args.c, args.eta, args.q))


def decay_terms(params: ModelParams, init: OscillatorInit, tau: float) -> tuple[complex, complex]:
    """Interference terms D12, D3 of the averaged state.

    Both carry the quadratic phase +-k = -+2*g_tilde^2*tau*Delta_tilde and
    vanish as tau -> infinity whenever g_tilde > 0 and Delta_tilde > 0.  D3
    is the Gaussian average of the c3 exponential sum,

        D3 = (1/2) * (I[k, -dk/2, k0] - I[k, dk/2, k0]),

    the form that reproduces the average of c3 in both real and imaginary
    part (checked against direct quadrature).
    """
    eta, q = init.eta(params), init.q(params)
    wn = wave_numbers(params.g_tilde, params.Delta_tilde, tau, init.phi)
    d12 = 0.5 * (_integral(-wn.k, wn.k_minus, -wn.k0, eta, q)
                 + _integral(wn.k, wn.k_minus, wn.k0, eta, q)
                 - _integral(-wn.k, wn.k_plus, -wn.k0, eta, q)
                 - _integral(wn.k, wn.k_plus, wn.k0, eta, q))
    d3 = 0.5 * (_integral(wn.k, -wn.delta_k / 2.0, wn.k0, eta, q)
                - _integral(wn.k, wn.delta_k / 2.0, wn.k0, eta, q))
    return complex(d12), complex(d3)


def mu_components(params: ModelParams, init: OscillatorInit, tau: float) -> MuVector:
    """Averaged Bloch vector of the evolved thermal spin, divided by E(beta).

    mu1 + i*mu2 is the Gaussian average of c12 and mu3 the real part of the
    average of c3:

        mu1 + i*mu2 = (1/2) * (I[0,k-,0] + I[0,k+,0] + D12(tau)),
        mu3         = Re D3(tau).
    """
    eta, q = init.eta(params), init.q(params)
    wn = wave_numbers(params.g_tilde, params.Delta_tilde, tau, init.phi)
    plane = 0.5 * (_integral(0.0, wn.k_minus, 0.0, eta, q)
                   + _integral(0.0, wn.k_plus, 0.0, eta, q))
    d12, d3 = decay_terms(params, init, tau)
    z = plane + 0.5 * d12
    return MuVector(mu1=float(z.real), mu2=float(z.imag), mu3=float(d3.real))
