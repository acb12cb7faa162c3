"""Experiment runner: time series, parameter scans and self-validation.

Each subcommand is one mode.  Configuration comes from a flat key-value
JSON file plus repeatable --set key=value overrides (flags win).  Angles
accept literal radians or tokens like "pi/3" and "2pi/3".  Outputs are
deterministic: CSV data rows never carry run metadata (only an optional
leading comment line), and floats are written in their shortest
round-trip representation.

Exit codes: 0 success, 2 configuration error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import re
import sys
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import holevo as hv
from . import model as md
from . import oracle as oc
from .gaussian import GaussianIntegralArgs, gaussian_I, mu_components

MODES = ("chi", "chi-vs-chi-infinity", "short-time", "phi-scan", "beta-scan",
         "max-condition", "validate")

_SERIES_MODES = ("chi", "chi-vs-chi-infinity", "short-time", "phi-scan", "beta-scan")

_DEFAULTS = {
    "M": 1.0, "Omega": 5.0, "Delta": 1.0, "g_tilde": 0.5,
    "alpha_abs": 1.0, "phi": "pi/3", "r": 1.0, "theta": 0.0, "beta": 10.0,
    "tau_min": 0.0, "tau_max": 40.0, "tau_points": 2001,
    "format": "csv",
    "phi_values": ["pi/2", "pi/4", "pi/6", "0"],
    "beta_values": [1, 2, 5, 10],
    "tau_cut": 0.05,
    "late_window_min": 20.0, "late_window_max": 40.0,
    "seed": 0,
}

_MODE_DEFAULTS = {
    "short-time": {"tau_max": 0.05, "tau_points": 501},
}

_KNOWN_KEYS = set(_DEFAULTS) | {"g", "mode", "output"}

_LIST_KEYS = ("phi_values", "beta_values")

_ANGLE_RE = re.compile(r"^\s*(-?)\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$")


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


def parse_angle(value) -> float:
    """Angle in radians from a number or a token like 'pi/3' or '2pi/3'."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value)
    match = _ANGLE_RE.match(text)
    if match:
        sign = -1.0 if match.group(1) else 1.0
        coeff = float(match.group(2)) if match.group(2) else 1.0
        denom = float(match.group(3)) if match.group(3) else 1.0
        return sign * coeff * math.pi / denom
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {value!r}") from None


def _fmt(value) -> str:
    """Shortest round-trip decimal text for one CSV cell."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass
class ExperimentConfig:
    """Raw key-value configuration plus typed accessors.

    The raw mapping is preserved verbatim so that serializing it and
    re-running reproduces byte-identical outputs (scan labels derive from
    the raw tokens).
    """

    mode: str
    raw: dict

    def __post_init__(self):
        unknown = set(self.raw) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "g" in self.raw and "g_tilde" in self.raw:
            raise ConfigError("provide exactly one of g / g_tilde, got both")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.tau_points < 2:
            raise ConfigError(f"tau_points must be >= 2, got {self.tau_points}")
        if not (self.tau_max > self.tau_min >= 0.0):
            raise ConfigError(
                f"need tau_max > tau_min >= 0, got [{self.tau_min}, {self.tau_max}]")
        if self.fmt not in ("csv", "json", "svg"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        try:
            self.params()
            self.init()
            self.env()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def _get(self, key):
        if key in self.raw:
            return self.raw[key]
        if self.mode in _MODE_DEFAULTS and key in _MODE_DEFAULTS[self.mode]:
            return _MODE_DEFAULTS[self.mode][key]
        return _DEFAULTS[key]

    @property
    def tau_min(self):
        return float(self._get("tau_min"))

    @property
    def tau_max(self):
        return float(self._get("tau_max"))

    @property
    def tau_points(self):
        return int(self._get("tau_points"))

    @property
    def tau_cut(self):
        return float(self._get("tau_cut"))

    @property
    def late_window(self):
        return (float(self._get("late_window_min")),
                float(self._get("late_window_max")))

    @property
    def seed(self):
        return int(self._get("seed"))

    @property
    def fmt(self):
        return str(self._get("format"))

    @property
    def output(self):
        return str(self.raw.get("output", "-"))

    def params(self) -> md.ModelParams:
        M = float(self._get("M"))
        Omega = float(self._get("Omega"))
        Delta = float(self._get("Delta"))
        if "g" in self.raw:
            return md.ModelParams(M=M, Omega=Omega, Delta=Delta,
                                  g=float(self.raw["g"]))
        return md.ModelParams.with_g_tilde(M, Omega, Delta,
                                           float(self._get("g_tilde")))

    def init(self, phi=None) -> md.OscillatorInit:
        return md.OscillatorInit(
            alpha_abs=float(self._get("alpha_abs")),
            phi=parse_angle(self._get("phi")) if phi is None else phi,
            r=float(self._get("r")),
            theta=float(self._get("theta")),
        )

    def env(self, beta=None) -> md.ThermalEnv:
        return md.ThermalEnv(
            beta=float(self._get("beta")) if beta is None else float(beta),
            delta=float(self._get("Delta")),
        )

    def tau_grid(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.tau_points)

    def scan_values(self, key) -> list[tuple[str, float]]:
        values = self._get(key)
        if isinstance(values, str):
            values = [v for v in values.split(",") if v != ""]
        if not isinstance(values, (list, tuple)) or not values:
            raise ConfigError(f"{key} must be a non-empty list")
        if key == "phi_values":
            return [(str(v), parse_angle(v)) for v in values]
        return [(_fmt(v), float(v)) for v in values]

    def effective(self) -> dict:
        """Flat dict that reproduces this run when fed back as a config file."""
        out = {"mode": self.mode}
        for key in sorted(_DEFAULTS):
            if key == "g_tilde" and "g" in self.raw:
                continue
            out[key] = self._get(key)
        if "g" in self.raw:
            out["g"] = self.raw["g"]
        return out


def load_config(mode: str, config_path=None, sets=(), output=None,
                fmt=None) -> ExperimentConfig:
    raw = {}
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        raw.update(data)
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, text = item.split("=", 1)
        key = key.strip()
        if key in _LIST_KEYS:
            raw[key] = [v for v in text.split(",") if v != ""]
            continue
        try:
            raw[key] = json.loads(text)
        except json.JSONDecodeError:
            raw[key] = text
    # flags override file values, and the subcommand overrides a mode key
    raw.pop("mode", None)
    if output is not None:
        raw["output"] = output
    if fmt is not None:
        raw["format"] = fmt
    return ExperimentConfig(mode=mode, raw=raw)


# ---------------------------------------------------------------------------
# short-time fit

@dataclass(frozen=True)
class ShortTimeFit:
    coefficient: float
    r2: float
    exponent: float
    n_points: int


def fit_short_time(tau, chi, tau_cut: float = 0.05) -> ShortTimeFit:
    """Least-squares fit of chi = c*tau^2 on 0 < tau <= tau_cut.

    The exponent is the slope of log(chi) vs log(tau) over the same window
    (positive chi only); R^2 refers to the quadratic fit.
    """
    tau = np.asarray(tau, dtype=float)
    chi = np.asarray(chi, dtype=float)
    mask = (tau > 0.0) & (tau <= tau_cut)
    if int(mask.sum()) < 5:
        raise ValueError(f"need at least 5 points in (0, {tau_cut}], "
                         f"got {int(mask.sum())}")
    t, c = tau[mask], chi[mask]
    coeff = float(np.sum(c * t**2) / np.sum(t**4))
    resid = c - coeff * t**2
    total = c - c.mean()
    ss_tot = float(np.sum(total**2))
    if ss_tot > 0.0:
        r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    else:
        r2 = 1.0 if float(np.sum(resid**2)) == 0.0 else 0.0
    pos = c > 0.0
    if int(pos.sum()) >= 2:
        exponent = float(np.polyfit(np.log(t[pos]), np.log(c[pos]), 1)[0])
    else:
        exponent = math.nan
    return ShortTimeFit(coefficient=coeff, r2=r2, exponent=exponent,
                        n_points=int(mask.sum()))


# ---------------------------------------------------------------------------
# mode runners

@dataclass
class RunResult:
    columns: list
    rows: list
    series: dict | None = None      # label -> y array, for svg output
    x: np.ndarray | None = None
    sidecar: dict | None = None
    failed_checks: list | None = None


def _late_average(params, init, env, window) -> float:
    grid = np.linspace(window[0], window[1], 1001)
    return float(hv.chi_curve(params, init, env, grid).mean())


def _run_chi(config):
    taus = config.tau_grid()
    chis = hv.chi_curve(config.params(), config.init(), config.env(), taus)
    rows = [[t, c] for t, c in zip(taus, chis)]
    return RunResult(["tau", "chi"], rows, series={"chi": chis}, x=taus)


def _run_chi_vs_inf(config):
    params, init, env = config.params(), config.init(), config.env()
    taus = config.tau_grid()
    chis = hv.chi_curve(params, init, env, taus)
    chis_inf = hv.chi_infinity(params, init, env, taus)
    rows = [[t, c, ci] for t, c, ci in zip(taus, chis, chis_inf)]
    return RunResult(["tau", "chi", "chi_infinity"], rows,
                     series={"chi": chis, "chi_infinity": np.asarray(chis_inf)},
                     x=taus)


def _run_short_time(config):
    params, init, env = config.params(), config.init(), config.env()
    taus = config.tau_grid()
    chis = hv.chi_curve(params, init, env, taus)
    fit = fit_short_time(taus, chis, config.tau_cut)
    lam = hv.short_time_lambda(params, init, env).Lambda
    sidecar = {
        "lambda_closed_form": lam,
        "lambda_fit": fit.coefficient,
        "rel_dev": abs(fit.coefficient - lam) / lam if lam > 0 else math.nan,
        "r2": fit.r2,
    }
    rows = [[t, c] for t, c in zip(taus, chis)]
    return RunResult(["tau", "chi"], rows, series={"chi": chis}, x=taus,
                     sidecar=sidecar)


def _run_phi_scan(config):
    params, env = config.params(), config.env()
    taus = config.tau_grid()
    labels, series = [], {}
    for label, value in config.scan_values("phi_values"):
        name = f"chi_{label}"
        labels.append(name)
        series[name] = hv.chi_curve(params, config.init(phi=value), env, taus)
    rows = [[t] + [series[n][i] for n in labels] for i, t in enumerate(taus)]
    return RunResult(["tau"] + labels, rows, series=series, x=taus)


def _run_beta_scan(config):
    params, init = config.params(), config.init()
    taus = config.tau_grid()
    labels, series = [], {}
    for label, value in config.scan_values("beta_values"):
        name = f"chi_{label}"
        labels.append(name)
        series[name] = hv.chi_curve(params, init, config.env(beta=value), taus)
    rows = [[t] + [series[n][i] for n in labels] for i, t in enumerate(taus)]
    return RunResult(["tau"] + labels, rows, series=series, x=taus)


def _run_max_condition(config):
    params, env = config.params(), config.env()
    rows = []
    for _, value in config.scan_values("phi_values"):
        init = config.init(phi=value)
        try:
            omega = hv.solve_condition_omega(params, init)
            run_params = md.ModelParams.with_g_tilde(
                params.M, omega, params.Delta, params.g_tilde)
        except ValueError:
            # condition unsatisfiable at this phi; report the baseline run
            omega = math.nan
            run_params = params
        psi, _ = hv.maximization_condition(run_params, init)
        rows.append([value, omega, psi,
                     _late_average(run_params, init, env, config.late_window)])
    return RunResult(["phi", "omega_solved", "psi", "chi_late_avg"], rows)


# ---------------------------------------------------------------------------
# validation suite

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    metric: float
    tolerance: float


def _check_unitarity(rng, draws=10000):
    xi = rng.uniform(-1.0, 1.0, draws)
    dt = rng.uniform(0.0, 1.0, draws)
    tau = rng.uniform(0.0, 50.0, draws)
    phi = rng.uniform(0.0, 2.0 * math.pi, draws)
    u0, u1, u2, u3 = md._bloch_components(xi, dt, tau, phi)
    worst = float(np.abs(u0**2 + u1**2 + u2**2 + u3**2 - 1.0).max())
    return CheckResult("bloch-unitarity", worst <= 1e-12, worst, 1e-12)


def _draw_integral_args(rng):
    eta = rng.uniform(0.1, 4.0)
    q = rng.uniform(-2.0, 2.0)
    a = rng.uniform(-10.0, 10.0) / eta
    c = rng.uniform(-math.pi, math.pi)
    # center b near -2aq so the integral magnitude stays well above roundoff
    width = 3.0 * math.sqrt((1.0 + a**2 * eta**2) / eta)
    b = -2.0 * a * q + 2.0 * width * rng.uniform(-1.0, 1.0)
    return GaussianIntegralArgs(a=a, b=b, c=c, eta=eta, q=q)


def _check_gaussian_oracle(rng, draws=120):
    worst = 0.0
    for _ in range(draws):
        args = _draw_integral_args(rng)
        closed = gaussian_I(args)
        numeric = oc.gaussian_quadrature_I(args)
        worst = max(worst, abs(closed - numeric) / abs(closed))
    return CheckResult("gaussian-closed-vs-quadrature", worst <= 1e-8, worst, 1e-8)


def _draw_model(rng):
    params = md.ModelParams.with_g_tilde(
        M=rng.uniform(0.5, 2.0), Omega=rng.uniform(2.0, 8.0),
        Delta=0.0, g_tilde=rng.uniform(0.05, 0.4))
    params = dataclasses.replace(
        params, Delta=2.0 * params.Omega * rng.uniform(0.0, 0.3))
    init = md.OscillatorInit(alpha_abs=rng.uniform(0.0, 1.5),
                             phi=rng.uniform(0.0, 2.0 * math.pi),
                             r=rng.uniform(0.0, 1.0),
                             theta=rng.uniform(0.0, 2.0 * math.pi))
    return params, init


def _check_mu_oracle(rng, draws=60):
    spec = oc.QuadratureSpec(node_count=1201)
    worst = 0.0
    for _ in range(draws):
        params, init = _draw_model(rng)
        env = md.ThermalEnv.for_model(rng.uniform(0.5, 10.0), params)
        tau = rng.uniform(0.0, 20.0)
        closed = mu_components(params, init, tau)
        numeric = oc.mu_numeric(params, init, env, tau, spec)
        worst = max(worst, abs(closed.mu1 - numeric.mu1),
                    abs(closed.mu2 - numeric.mu2), abs(closed.mu3 - numeric.mu3))
    return CheckResult("mu-closed-vs-gauss-hermite", worst <= 1e-6, worst, 1e-6)


def _check_commuting_limit(rng, draws=30):
    worst = 0.0
    for _ in range(draws):
        params = md.ModelParams.with_g_tilde(
            M=1.0, Omega=rng.uniform(0.5, 5.0), Delta=0.0,
            g_tilde=rng.uniform(0.1, 1.0))
        X0 = rng.uniform(-1.5, 1.5)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        t = rng.uniform(0.0, 50.0) / params.Omega
        tau, xi, _, dt = md.dimensionless(params, X0, t)
        approx = md.floquet_bloch(xi, dt, tau, phi).as_matrix()
        exact = oc.exact_propagator(params, X0, phi, t, oc.default_steps(tau))
        worst = max(worst, float(np.abs(approx - exact).max()))
    return CheckResult("commuting-limit", worst <= 1e-12, worst, 1e-12)


def _check_joint_scaling(rng=None):
    xis = (0.2, 0.1, 0.05, 0.025)
    errs = []
    for xi in xis:
        params = md.ModelParams(M=1.0, Omega=1.0, Delta=xi, g=1.0)  # Delta_tilde = xi/2
        errs.append(oc.floquet_error(params, xi, math.pi / 3, 2.0).phase_minimized)
    slope = float(np.polyfit(np.log(xis), np.log(errs), 1)[0])
    return CheckResult("floquet-joint-scaling", slope >= 1.85, slope, 1.85)


def _check_entropy_closure(rng, draws=60):
    worst = 0.0
    for _ in range(draws):
        env = md.ThermalEnv(beta=rng.uniform(0.0, 8.0), delta=1.0)
        mu = rng.uniform(0.0, 1.0)
        direction = rng.normal(size=3)
        direction *= mu / np.linalg.norm(direction)
        E = env.excess
        rho = 0.5 * (md.IDENTITY + E * (direction[0] * md.SIGMA_X
                                        + direction[1] * md.SIGMA_Y
                                        + direction[2] * md.SIGMA_Z))
        formula = hv.holevo_chi(mu, env)
        eigen_chi = oc.entropy_numeric(rho) - hv.binary_entropy((1.0 + E) / 2.0)
        worst = max(worst, abs(formula.chi - eigen_chi))
    return CheckResult("entropy-closure", worst <= 1e-8, worst, 1e-8)


def _check_pdf_normalization(rng=None):
    params = md.ModelParams.with_g_tilde(1.0, 5.0, 1.0, 0.5)
    init = md.OscillatorInit(alpha_abs=1.0, phi=math.pi / 3, r=1.0, theta=0.0)
    half = 12.0 * math.sqrt(init.eta(params))
    q = init.q(params)
    total, _ = integrate.quad(lambda x: md.initial_position_pdf(init, params, x),
                              q - half, q + half, epsabs=1e-13, limit=400)
    gap = abs(total - 1.0)
    return CheckResult("pdf-normalization", gap <= 1e-10, gap, 1e-10)


def run_validation(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        _check_unitarity(rng),
        _check_gaussian_oracle(rng),
        _check_mu_oracle(rng),
        _check_commuting_limit(rng),
        _check_joint_scaling(),
        _check_entropy_closure(rng),
        _check_pdf_normalization(),
    ]


def _run_validate(config):
    results = run_validation(config.seed)
    rows = [[r.name, "PASS" if r.passed else "FAIL", r.metric, r.tolerance]
            for r in results]
    failed = [r.name for r in results if not r.passed]
    return RunResult(["check_name", "status", "metric", "tolerance"], rows,
                     failed_checks=failed)


_RUNNERS = {
    "chi": _run_chi,
    "chi-vs-chi-infinity": _run_chi_vs_inf,
    "short-time": _run_short_time,
    "phi-scan": _run_phi_scan,
    "beta-scan": _run_beta_scan,
    "max-condition": _run_max_condition,
    "validate": _run_validate,
}


# ---------------------------------------------------------------------------
# output

def _header_comment(config: ExperimentConfig) -> str:
    fields = " ".join(f"{k}={json.dumps(v)}" for k, v in config.effective().items())
    return f"# bosonspin {fields}"


def _render_csv(result: RunResult, config: ExperimentConfig,
                no_header: bool) -> str:
    lines = []
    if not no_header:
        lines.append(_header_comment(config))
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    if result.sidecar is not None and config.output == "-":
        lines.append("# fit " + json.dumps(result.sidecar))
    return "\n".join(lines) + "\n"


def _render_json(result: RunResult, config: ExperimentConfig) -> str:
    doc = {
        "mode": config.mode,
        "config": config.effective(),
        "columns": result.columns,
        "rows": [[v if isinstance(v, str) else float(v) for v in row]
                 for row in result.rows],
    }
    if result.sidecar is not None:
        doc["fit"] = result.sidecar
    return json.dumps(doc, indent=2) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _render_svg(result: RunResult, config: ExperimentConfig) -> str:
    if result.series is None or result.x is None:
        raise ConfigError(f"svg output is not defined for mode {config.mode!r}")
    width, height = 880, 560
    left, right, top, bottom = 70, 20, 30, 50
    x = np.asarray(result.x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in result.series.items()}
    ymin = min(float(v.min()) for v in ys.values())
    ymax = max(float(v.max()) for v in ys.values())
    if ymax == ymin:
        ymax = ymin + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad
    xmin, xmax = float(x.min()), float(x.max())

    def px(v):
        return left + (v - xmin) / (xmax - xmin) * (width - left - right)

    def py(v):
        return height - bottom - (v - ymin) / (ymax - ymin) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'font-family="sans-serif" font-size="13">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{height-bottom}" x2="{width-right}" '
        f'y2="{height-bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height-bottom}" stroke="black"/>',
    ]
    for tick in np.linspace(xmin, xmax, 6):
        tx = px(tick)
        parts.append(f'<line x1="{tx:.2f}" y1="{height-bottom}" x2="{tx:.2f}" '
                     f'y2="{height-bottom+5}" stroke="black"/>')
        parts.append(f'<text x="{tx:.2f}" y="{height-bottom+20}" '
                     f'text-anchor="middle">{tick:.4g}</text>')
    for tick in np.linspace(ymin, ymax, 6):
        ty = py(tick)
        parts.append(f'<line x1="{left-5}" y1="{ty:.2f}" x2="{left}" '
                     f'y2="{ty:.2f}" stroke="black"/>')
        parts.append(f'<text x="{left-8}" y="{ty+4:.2f}" '
                     f'text-anchor="end">{tick:.4g}</text>')
    parts.append(f'<text x="{(left+width-right)/2}" y="{height-12}" '
                 f'text-anchor="middle">tau</text>')
    parts.append(f'<text x="16" y="{(top+height-bottom)/2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {(top+height-bottom)/2})">chi (bits)</text>')
    for i, (label, y) in enumerate(ys.items()):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        ly = top + 16 * (i + 1)
        parts.append(f'<line x1="{width-170}" y1="{ly-4}" x2="{width-140}" '
                     f'y2="{ly-4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{width-134}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(config: ExperimentConfig, no_header: bool = False,
        emit_config: str | None = None) -> int:
    """Execute one mode and write its artifacts; returns the exit code."""
    result = _RUNNERS[config.mode](config)
    if config.fmt == "csv":
        text = _render_csv(result, config, no_header)
    elif config.fmt == "json":
        text = _render_json(result, config)
    else:
        text = _render_svg(result, config)
    _write_text(config.output, text)
    if result.sidecar is not None and config.output != "-":
        _write_text(config.output + ".fit.json",
                    json.dumps(result.sidecar, indent=2) + "\n")
    if emit_config:
        _write_text(emit_config, json.dumps(config.effective(), indent=2) + "\n")
    if result.failed_checks:
        sys.stderr.write(json.dumps(
            {"error": "validation", "failed": result.failed_checks}) + "\n")
        return 3
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bosonspin",
        description="Holevo-bound time series, parameter scans and validation "
                    "for the oscillator-spin broadcast model.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", default=None, help="flat key-value JSON file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--output", default=None, help="output path, '-' for stdout")
        p.add_argument("--format", default=None, choices=("csv", "json", "svg"))
        p.add_argument("--no-header", action="store_true",
                       help="suppress the leading comment line in CSV output")
        p.add_argument("--emit-config", default=None, metavar="PATH",
                       help="write the effective configuration as JSON")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.mode, config_path=args.config, sets=args.set,
                             output=args.output, fmt=args.format)
        return run(config, no_header=args.no_header, emit_config=args.emit_config)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "config", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
