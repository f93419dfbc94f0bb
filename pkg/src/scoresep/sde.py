"""Mean-reverting variance-exploding diffusion process.

Forward process: ``dx = gamma * (y - x) dt + g(t) dw`` with the diffusion
coefficient ``g(t) = sigma_min * (sigma_max / sigma_min)**t *
sqrt(2 * ln(sigma_max / sigma_min))``. The state drifts from the target
spectrogram x0 toward the mixture y while noise grows geometrically; the
Gaussian transition kernel has the closed form

    mean(x0, y, t) = exp(-gamma*t) * x0 + (1 - exp(-gamma*t)) * y
    var(t) = sigma_min**2 * (r**(2t) - exp(-2*gamma*t)) * ln(r) / (gamma + ln(r))

with r = sigma_max / sigma_min. All functions are pure; complex arrays are
treated as two independent real channels, so "standard Gaussian" noise means
unit variance per real component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SdeParams:
    """Stiffness, noise bounds, and time horizon of the forward process."""

    gamma: float = 2.0
    sigma_min: float = 0.05
    sigma_max: float = 0.5
    T: float = 1.0
    t_eps: float = 0.03

    def __post_init__(self):
        if not 0 < self.sigma_min < self.sigma_max:
            raise ValueError(
                f"need 0 < sigma_min < sigma_max, got {self.sigma_min}, {self.sigma_max}"
            )
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 0 < self.t_eps < self.T:
            raise ValueError(f"need 0 < t_eps < T, got t_eps={self.t_eps} T={self.T}")

    @property
    def log_ratio(self) -> float:
        return math.log(self.sigma_max / self.sigma_min)


def diffusion_coefficient(t: float, params: SdeParams) -> float:
    """g(t); strictly increasing in t for valid parameters."""
    return (
        params.sigma_min
        * (params.sigma_max / params.sigma_min) ** t
        * math.sqrt(2.0 * params.log_ratio)
    )


def mean(x0, y, t: float, params: SdeParams):
    """Transition-kernel mean: elementwise convex combination of x0 and y."""
    x0 = np.asarray(x0)
    y = np.asarray(y)
    if x0.shape != y.shape:
        raise ValueError(f"shape mismatch: x0 {x0.shape} vs y {y.shape}")
    decay = math.exp(-params.gamma * t)
    return decay * x0 + (1.0 - decay) * y


def variance(t: float, params: SdeParams) -> float:
    """Transition-kernel variance; 0 at t = 0."""
    r2t = (params.sigma_max / params.sigma_min) ** (2.0 * t)
    lr = params.log_ratio
    return (
        params.sigma_min**2
        * (r2t - math.exp(-2.0 * params.gamma * t))
        * lr
        / (params.gamma + lr)
    )


def std(t: float, params: SdeParams) -> float:
    """Transition-kernel standard deviation sigma(t)."""
    return math.sqrt(max(variance(t, params), 0.0))


def perturb(x0, y, t: float, z, params: SdeParams):
    """Sample the forward process at time t: ``x_t = mean + sigma(t) * z``.

    z is standard Gaussian with the same shape as x0 (for complex arrays:
    independent unit-variance real and imaginary parts).
    """
    x0 = np.asarray(x0)
    z = np.asarray(z)
    if z.shape != x0.shape:
        raise ValueError(f"shape mismatch: x0 {x0.shape} vs z {z.shape}")
    return mean(x0, y, t, params) + std(t, params) * z


def complex_standard_normal(shape, rng: np.random.Generator) -> np.ndarray:
    """Complex noise with independent N(0, 1) real and imaginary parts."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def prior_sample(y, params: SdeParams, rng: np.random.Generator):
    """Sample the terminal distribution: a Gaussian centred on the mixture.

    ``x_T = y + sigma(T) * z``. Complex input gets complex noise, real input
    real noise; reproducible for a fixed generator state.
    """
    y = np.asarray(y)
    if np.iscomplexobj(y):
        z = complex_standard_normal(y.shape, rng)
    else:
        z = rng.standard_normal(y.shape)
    return y + std(params.T, params) * z


def exact_score(x, x0, y, t: float, params: SdeParams):
    """Score of the Gaussian transition kernel: ``-(x - mean) / var(t)``.

    This is the analytic ground truth the trained network approximates; it
    doubles as the oracle for sampler verification.
    """
    return -(np.asarray(x) - mean(x0, y, t, params)) / variance(t, params)


def simulate_forward(
    x0: float,
    y: float,
    t_end: float,
    params: SdeParams,
    n_paths: int,
    n_steps: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Scalar Euler-Maruyama simulation of the forward process.

    Returns the n_paths terminal values at t_end; used to cross-check the
    closed-form kernel moments against a direct discretization.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    dt = t_end / n_steps
    x = np.full(n_paths, float(x0))
    sqrt_dt = math.sqrt(dt)
    for i in range(n_steps):
        t = i * dt
        g = diffusion_coefficient(t, params)
        x += params.gamma * (y - x) * dt + g * sqrt_dt * rng.standard_normal(n_paths)
    return x
