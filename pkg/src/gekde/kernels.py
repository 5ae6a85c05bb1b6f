"""Asymmetric kernels with support on (0, inf), evaluated in the log domain.

Six kernels are provided: the generalised-exponential kernel in its
mode-at-x parameterisation (``ge``, shape ``exp(x/b)``) and mean-at-x
parameterisation (``ge2``, shape ``nu(x/b)`` built from the inverse
digamma), Chen's two gamma kernels (``gam1``, ``gam2``), and Scaillet's
inverse-Gaussian and reciprocal inverse-Gaussian kernels (``ig``, ``rig``).

Everything is computed in the log domain: the GE shape ``exp(x/b)`` and the
gamma normalising constant overflow doubles long before the practically
useful bandwidth range is exhausted.  For shapes beyond ``exp(700)`` the
product ``(shape - 1) * log1p(-exp(-z/b))`` is regrouped as
``-exp(log_shape + log(-L))``, with the asymptotic branch
``L ~ -exp(-z/b) - exp(-2 z/b)/2`` once ``z/b > 36`` (below double epsilon).

References
----------
.. [1] Chen, S. X. 2000. "Probability density function estimation using
   gamma kernels." Annals of the Institute of Statistical Mathematics
   52 (3): 471-480.
.. [2] Scaillet, O. 2004. "Density estimation using inverse and reciprocal
   inverse Gaussian kernels." Journal of Nonparametric Statistics
   16 (1-2): 217-226.
.. [3] Gupta, R. D., and D. Kundu. 1999. "Generalized exponential
   distributions." Australian & New Zealand Journal of Statistics
   41 (2): 173-188.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import BoundaryDegeneracyError, DomainError
from .specfun import (
    DEFAULT_CONFIG,
    EULER_GAMMA,
    SpecFunConfig,
    inverse_digamma,
    log_gamma,
)

__all__ = [
    "Kernel",
    "DEFAULT_KERNELS",
    "log_kernel",
    "kernel_pdf",
    "ge2_shape",
    "gam2_shape",
]

_LOG2 = math.log(2.0)
_LOG_SHAPE_DIRECT_MAX = 700.0   # largest log-shape evaluated without regrouping
_ASYMPTOTIC_U = 36.0            # z/b beyond which log1p(-e^-u) = -e^-u to machine precision
_ASYMPTOTIC_Y = 36.0            # digamma argument beyond which psi-inverse(y) = e^y + 1/2 exactly


class Kernel(enum.Enum):
    """Kernel identities, with their canonical lowercase names as values."""

    GE = "ge"
    GE2 = "ge2"
    GAM1 = "gam1"
    GAM2 = "gam2"
    IG = "ig"
    RIG = "rig"

    @classmethod
    def parse(cls, name: str) -> "Kernel":
        """Map a canonical lowercase name to a kernel; reject anything else."""
        try:
            return cls(str(name).lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise DomainError(f"unknown kernel {name!r}; expected one of: {valid}") from None


#: Kernels entering benchmarks by default; ``ig`` is opt-in.
DEFAULT_KERNELS = (Kernel.GE, Kernel.GE2, Kernel.GAM1, Kernel.GAM2, Kernel.RIG)


def _log1mexp(u):
    """log(1 - exp(-u)) for u > 0, accurate across the whole range."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(u > _LOG2, np.log1p(-np.exp(-u)), np.log(-np.expm1(-u)))


def _ge_log_pdf(log_shape, shape_m1, b, z):
    """Log density of GE(shape, rate 1/b) at z; shape passed as (log, shape-1).

    ``shape_m1`` may be inf; entries are then evaluated through the
    log-domain regrouping controlled by ``log_shape``.
    """
    u = z / b
    L = _log1mexp(u)
    if log_shape <= _LOG_SHAPE_DIRECT_MAX:
        with np.errstate(over="ignore"):
            T = shape_m1 * L
    else:
        with np.errstate(over="ignore"):
            log_negL = np.where(
                u > _ASYMPTOTIC_U,
                -u + np.log1p(0.5 * np.exp(-u)),
                np.log(-np.where(L < 0.0, L, -1.0)),
            )
            T = -np.exp(log_shape + log_negL)
    return log_shape - math.log(b) + T - u


def _log_gamma_pdf(shape, scale, z):
    """Log density of Gamma(shape, scale) at z, via log_gamma."""
    return (shape - 1.0) * np.log(z) - z / scale - shape * math.log(scale) - log_gamma(shape)


def _row_ge(x, b, z, config):
    a = x / b
    shape_m1 = math.expm1(a) if a < 709.0 else math.inf
    return _ge_log_pdf(a, shape_m1, b, z)


def _row_ge2(x, b, z, config):
    log_nu, nu = _ge2_shape_pair(x, b, config)
    return _ge_log_pdf(log_nu, nu - 1.0, b, z)


def _row_gam1(x, b, z, config):
    return _log_gamma_pdf(x / b + 1.0, b, z)


def _row_gam2(x, b, z, config):
    return _log_gamma_pdf(gam2_shape(x, b), b, z)


def _row_ig(x, b, z, config):
    return -0.5 * math.log(2.0 * math.pi * b) - 1.5 * np.log(z) - (z / x - 2.0 + x / z) / (2.0 * b * x)


def _row_rig(x, b, z, config):
    s = x - b
    return -0.5 * math.log(2.0 * math.pi * b) - 0.5 * np.log(z) - (s / (2.0 * b)) * (z / s - 2.0 + s / z)


_LOG_ROWS = {
    Kernel.GE: _row_ge,
    Kernel.GE2: _row_ge2,
    Kernel.GAM1: _row_gam1,
    Kernel.GAM2: _row_gam2,
    Kernel.IG: _row_ig,
    Kernel.RIG: _row_rig,
}


def _validate_point(kernel, x, b):
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError("bandwidth b must be positive and finite")
    if not math.isfinite(x):
        raise DomainError("evaluation point x must be finite")
    if kernel is Kernel.RIG:
        if x <= b:
            raise BoundaryDegeneracyError(
                f"RIG kernel is undefined at x={x!r} with b={b!r}: it uses x - b as a scale"
            )
    elif kernel is Kernel.GE:
        if x < 0.0:
            raise DomainError("GE kernel requires x >= 0")
    elif x <= 0.0:
        raise DomainError(f"{kernel.value} kernel requires x > 0")


def log_kernel(kernel: Kernel, x: float, b: float, z, config: SpecFunConfig = DEFAULT_CONFIG):
    """Log of the kernel density K at datum z, for the kernel located at x.

    Parameters
    ----------
    kernel : Kernel
        Which kernel to evaluate.
    x : float
        Location of the estimator's argument.  Must be positive (``ge``
        also admits x = 0, where its shape collapses to 1 and the kernel
        is a unit-rate-1/b exponential; ``rig`` needs x > b).
    b : float
        Bandwidth, positive.
    z : float or ndarray
        Strictly positive evaluation points (the data, in estimator use).

    Returns
    -------
    float or ndarray
        ln K(z).  ``exp`` of the result matches the closed-form density
        wherever the latter is evaluable in doubles.
    """
    _validate_point(kernel, x, b)
    zarr = np.asarray(z, dtype=float)
    if zarr.size and (not np.all(np.isfinite(zarr)) or np.any(zarr <= 0.0)):
        raise DomainError("kernel argument z must be positive and finite")
    out = _LOG_ROWS[kernel](x, b, zarr, config)
    if np.ndim(z) == 0:
        return float(out)
    return out


def kernel_pdf(kernel: Kernel, x: float, b: float, z, config: SpecFunConfig = DEFAULT_CONFIG):
    """Kernel density K(z); exp of :func:`log_kernel`."""
    return np.exp(log_kernel(kernel, x, b, z, config))


def ge2_shape(x: float, b: float, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Shape nu(x/b) of the mean-parameterised GE kernel.

    nu solves ``digamma(nu + 1) = x/b - EULER_GAMMA``, so that a
    GE(nu, rate 1/b) variable has mean exactly x.  Beyond
    ``x/b - EULER_GAMMA >= 36`` the closed asymptotic inverse
    ``exp(y) + 1/2`` is already exact to double precision and is used
    directly; the result overflows to inf once x/b exceeds ~710.
    """
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError("bandwidth b must be positive and finite")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError("ge2_shape requires x >= 0")
    y = x / b - EULER_GAMMA
    if y >= _ASYMPTOTIC_Y:
        if y > 709.7:
            return math.inf
        return math.exp(y) - 0.5
    return float(inverse_digamma(y, config)) - 1.0


def _ge2_shape_pair(x, b, config):
    """(log nu, nu) for the GE2 shape; nu may be inf while log nu stays finite."""
    y = x / b - EULER_GAMMA
    if y >= _ASYMPTOTIC_Y:
        nu = math.exp(y) - 0.5 if y <= 709.7 else math.inf
        return y + math.log1p(-0.5 * math.exp(-y)), nu
    nu = float(inverse_digamma(y, config)) - 1.0
    if nu <= 0.0:
        raise DomainError("ge2 kernel requires x > 0 (shape would not be positive)")
    return math.log(nu), nu


def gam2_shape(x: float, b: float) -> float:
    """Shape of Chen's boundary-corrected gamma kernel.

    ``x/b`` away from the origin (x >= 2b) and the quadratic splice
    ``(x/b)**2 / 4 + 1`` below it; the two branches meet at x = 2b.
    """
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError("bandwidth b must be positive and finite")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError("gam2_shape requires x >= 0")
    r = x / b
    if x >= 2.0 * b:
        return r
    return 0.25 * r * r + 1.0
