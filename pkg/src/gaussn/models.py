"""The four bundled one-parameter statistical models.

Every model is translation form invariant: the density depends on the
observation and the parameter only through their difference (the binomial
variant inherits the property through its trigonometric carrier).  The
variants are

* ``chi2log``  exp(u - e^u) on the whole line, u = x - xi.  This is a
  chi-squared distribution with two degrees of freedom after a log
  transform of both the variable and the scale parameter.  Fisher
  information 1.
* ``gauss``    the Gaussian shift family with fixed sigma.  Fisher 1/sigma^2.
* ``trig``     (2/pi) cos^2(x - xi) on [-pi/2, pi/2].  Fisher 4.
* ``binom``    the yes/no model with response probability cos^2(xi) for
  x = 1.  Fisher 4, matching its trigonometric carrier.

All operations are pure; sampling is deterministic given the seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import logsumexp

from .errors import InputError
from .quadrature import QuadratureConfig, integrate

__all__ = [
    "ModelId",
    "ModelSpec",
    "Observations",
    "AmbiguousMaximumWarning",
    "make_model",
    "density",
    "log_density",
    "normalization_check",
    "ml_estimate",
    "sample",
]

_HALF_PI = math.pi / 2.0


class ModelId(Enum):
    CHI_SQUARED_LOG = "chi2log"
    GAUSSIAN_SHIFT = "gauss"
    TRIG_TRANSLATIONAL = "trig"
    BINOMIAL_TRIG_IRF = "binom"


class AmbiguousMaximumWarning(UserWarning):
    """The likelihood has several global maxima; the smallest one is returned."""


@dataclass(frozen=True)
class ModelSpec:
    id: ModelId
    x_domain: tuple[float, float]
    xi_domain: tuple[float, float]
    sigma_param: float = 1.0
    analytic_fisher: float | None = None

    @property
    def discrete_x(self) -> bool:
        return self.id is ModelId.BINOMIAL_TRIG_IRF


@dataclass(frozen=True)
class Observations:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise InputError("Observations needs at least one value")

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def make_model(model_id: ModelId | str, sigma: float = 1.0) -> ModelSpec:
    """Build the description of one of the bundled models.

    ``sigma`` only affects the Gaussian shift family and must be positive.
    """
    mid = ModelId(model_id) if not isinstance(model_id, ModelId) else model_id
    if not sigma > 0:
        raise InputError("sigma must be strictly positive")
    inf = math.inf
    if mid is ModelId.CHI_SQUARED_LOG:
        return ModelSpec(mid, (-inf, inf), (-inf, inf), sigma, analytic_fisher=1.0)
    if mid is ModelId.GAUSSIAN_SHIFT:
        return ModelSpec(mid, (-inf, inf), (-inf, inf), sigma, analytic_fisher=1.0 / sigma**2)
    if mid is ModelId.TRIG_TRANSLATIONAL:
        return ModelSpec(mid, (-_HALF_PI, _HALF_PI), (-_HALF_PI, _HALF_PI), sigma, analytic_fisher=4.0)
    return ModelSpec(mid, (0.0, 1.0), (-_HALF_PI, _HALF_PI), sigma, analytic_fisher=4.0)


def _check_xi(model: ModelSpec, xi: float):
    lo, hi = model.xi_domain
    if not (lo <= xi <= hi):
        raise InputError(f"parameter {xi!r} outside domain [{lo!r}, {hi!r}]")


def _check_x(model: ModelSpec, x):
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise InputError("observations must be finite")
    if model.discrete_x:
        if not np.all((xs == 0.0) | (xs == 1.0)):
            raise InputError("binomial observations must be 0 or 1")
        return
    lo, hi = model.x_domain
    if not np.all((xs >= lo) & (xs <= hi)):
        raise InputError(f"observation outside domain [{lo!r}, {hi!r}]")


def _log_density_unchecked(model: ModelSpec, x, xi):
    """Vectorized log density without domain validation.

    Internal evaluators (finite differences, posterior grids) probe slightly
    outside the nominal parameter domain; the formulas below are well defined
    there.  Values of exactly -inf mark genuine zeros of the density.
    """
    x = np.asarray(x, dtype=float)
    mid = model.id
    if mid is ModelId.CHI_SQUARED_LOG:
        u = x - xi
        return u - np.exp(u)
    if mid is ModelId.GAUSSIAN_SHIFT:
        s2 = model.sigma_param**2
        return -0.5 * math.log(2.0 * math.pi * s2) - (x - xi) ** 2 / (2.0 * s2)
    if mid is ModelId.TRIG_TRANSLATIONAL:
        c = np.cos(x - xi)
        with np.errstate(divide="ignore"):
            return math.log(2.0 / math.pi) + 2.0 * np.log(np.abs(c))
    # binomial: log cos^2(xi) for x = 1, log sin^2(xi) for x = 0
    with np.errstate(divide="ignore"):
        lc = 2.0 * np.log(np.abs(np.cos(xi)))
        ls = 2.0 * np.log(np.abs(np.sin(xi)))
    return np.where(x == 1.0, lc, ls)


def _density_unchecked(model: ModelSpec, x, xi):
    return np.exp(_log_density_unchecked(model, x, xi))


def _line_config(model: ModelSpec, center: float, cfg: QuadratureConfig | None) -> QuadratureConfig:
    """Config with the truncation window widened to cover the density.

    The default cutoff assumes an integrand concentrated near the origin at
    unit scale.  Integrals over the line models are centered at ``center``
    and, for the Gaussian family, spread over sigma, so the window must
    grow with both; a flat far-out integrand would otherwise slip past the
    negligibility check at the cutoff.
    """
    base = cfg or QuadratureConfig()
    need = abs(center) + 40.0
    if model.id is ModelId.GAUSSIAN_SHIFT:
        need = abs(center) + 12.0 * model.sigma_param
    if need <= base.tail_cutoff:
        return base
    return QuadratureConfig(
        abs_tol=base.abs_tol,
        rel_tol=base.rel_tol,
        max_subdivisions=base.max_subdivisions,
        tail_cutoff=need,
        singularity_epsilon=base.singularity_epsilon,
    )


def density(model: ModelSpec, x: float, xi: float) -> float:
    """Probability density (or probability mass, for the binomial) p(x|xi)."""
    _check_xi(model, xi)
    _check_x(model, x)
    return float(_density_unchecked(model, np.asarray(x, dtype=float), xi))


def log_density(model: ModelSpec, x: float, xi: float) -> float:
    _check_xi(model, xi)
    _check_x(model, x)
    return float(_log_density_unchecked(model, np.asarray(x, dtype=float), xi))


def normalization_check(model: ModelSpec, xi: float, cfg: QuadratureConfig | None = None) -> float:
    """Total probability over the observation domain; must come out 1."""
    _check_xi(model, xi)
    if model.discrete_x:
        return float(np.cos(xi) ** 2 + np.sin(xi) ** 2)
    if math.isinf(model.x_domain[0]):
        cfg = _line_config(model, xi, cfg)
    res = integrate(lambda xs: _density_unchecked(model, xs, xi), model.x_domain, cfg)
    return res.value


def ml_estimate(model: ModelSpec, obs: Observations) -> float:
    """Parameter value maximizing the likelihood of ``obs``.

    Closed forms exist for three variants; the trigonometric model is
    maximized by a grid scan with local refinement.  When several global
    maxima tie (possible for the trigonometric model, whose density is
    pi-periodic in the difference), the smallest maximizer is returned and
    an :class:`AmbiguousMaximumWarning` is emitted.  The binomial model
    returns the nonnegative root; cos^2 is even, so its mirror image is an
    equally good estimate.
    """
    xs = obs.as_array()
    _check_x(model, xs)
    mid = model.id
    if mid is ModelId.CHI_SQUARED_LOG:
        # argmax of sum(x_k - xi - e^(x_k - xi)) is ln(mean(e^(x_k)))
        return float(logsumexp(xs) - math.log(obs.n))
    if mid is ModelId.GAUSSIAN_SHIFT:
        return float(np.mean(xs))
    if mid is ModelId.BINOMIAL_TRIG_IRF:
        score = float(np.sum(xs))
        return float(math.acos(math.sqrt(min(max(score / obs.n, 0.0), 1.0))))
    return _ml_trig(model, xs)


def _trig_loglik(xs, grid):
    with np.errstate(divide="ignore"):
        return np.sum(2.0 * np.log(np.abs(np.cos(xs[:, None] - grid[None, :]))), axis=0)


def _ml_trig(model: ModelSpec, xs) -> float:
    lo, hi = model.xi_domain
    grid = np.linspace(lo, hi, 4001)
    ll = _trig_loglik(xs, grid)
    best = np.max(ll)
    step = grid[1] - grid[0]
    # Local maxima whose grid value is within resolution of the global one.
    candidates = []
    for i in np.flatnonzero(ll >= best - 1e-6):
        a = grid[max(i - 1, 0)] - step
        b = grid[min(i + 1, grid.size - 1)] + step
        r = minimize_scalar(
            lambda t: -_trig_loglik(xs, np.array([t]))[0],
            bounds=(max(a, lo), min(b, hi)),
            method="bounded",
            options={"xatol": 1e-12},
        )
        candidates.append((float(np.clip(r.x, lo, hi)), -float(r.fun)))
    top = max(v for _, v in candidates)
    winners = sorted({round(t, 9) for t, v in candidates if v >= top - 1e-9})
    if len(winners) > 1:
        warnings.warn(
            f"likelihood has {len(winners)} global maxima {winners}; returning the smallest",
            AmbiguousMaximumWarning,
        )
    return float(winners[0])


def _trig_cdf(x, xi):
    # antiderivative of (2/pi) cos^2(s - xi) from -pi/2
    def prim(v):
        return (v + 0.5 * math.sin(2.0 * v)) / math.pi

    return prim(x - xi) - prim(-_HALF_PI - xi)


def sample(model: ModelSpec, xi_true: float, n: int, seed: int) -> Observations:
    """Draw ``n`` observations at ``xi_true``, reproducibly for a given seed.

    The line models use exact transforms of standard generator output; the
    trigonometric model inverts its closed-form CDF by bracketed
    root-finding, so no rejection loop perturbs the stream.
    """
    _check_xi(model, xi_true)
    if n < 1:
        raise InputError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    mid = model.id
    if mid is ModelId.CHI_SQUARED_LOG:
        # e^(x - xi) is standard exponential under this density
        values = xi_true + np.log(rng.standard_exponential(n))
    elif mid is ModelId.GAUSSIAN_SHIFT:
        values = xi_true + model.sigma_param * rng.standard_normal(n)
    elif mid is ModelId.BINOMIAL_TRIG_IRF:
        values = (rng.random(n) < math.cos(xi_true) ** 2).astype(float)
    else:
        us = rng.random(n)
        values = np.empty(n)
        for i, u in enumerate(us):
            if u <= 0.0:
                values[i] = -_HALF_PI
            elif u >= 1.0:
                values[i] = _HALF_PI
            else:
                values[i] = brentq(
                    lambda x: _trig_cdf(x, xi_true) - u, -_HALF_PI, _HALF_PI, xtol=1e-14
                )
    return Observations(tuple(float(v) for v in values))
