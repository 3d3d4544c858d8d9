"""Bosonic reservoirs: occupations, decay rates and squeezing.

Units are hbar = k_B = 1. Rates follow a flat spectral density in ``d``
spatial dimensions, ``gamma0 * |w|**d * (1 + N)`` for emission into the
bath (``w > 0``) and ``gamma0 * |w|**d * N`` for absorption (``w < 0``).
A squeezed work bath replaces ``N`` by ``N cosh 2r + sinh^2 r`` and adds
cross terms with coefficient ``squeeze_cross_rate``. The squeezing phase
is fixed to zero.
"""
from dataclasses import dataclass

import numpy as np

LABELS = ("work", "hot", "cold")
WEAK_COUPLING_RATIO = 1e-2


class DomainError(ValueError):
    pass


class WeakCouplingViolation(ValueError):
    pass


@dataclass(frozen=True)
class Bath:
    """A reservoir seen by one contact of the fridge.

    Fields may be numpy arrays (broadcastable) when a whole batch of
    fridges is evaluated at once; the scalar case is the common one.
    """

    label: str
    temperature: float
    dim: int = 3
    gamma0: float = 1e-3
    squeezing: float = 0.0
    strict: bool = False

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown bath label {self.label!r}")
        if np.any(np.asarray(self.temperature) <= 0):
            raise DomainError("temperature must be positive")
        if np.any(np.asarray(self.gamma0) <= 0):
            raise DomainError("gamma0 must be positive")
        if np.any(~np.isin(np.asarray(self.dim), (1, 2, 3))):
            raise DomainError(f"dimensionality must be 1, 2 or 3, got {self.dim}")
        r = np.asarray(self.squeezing)
        if np.any(r < 0):
            raise DomainError("squeezing must be non-negative")
        if np.any(r > 0) and self.label != "work":
            raise DomainError("only the work bath may be squeezed")
        if self.strict and np.any(
            np.asarray(self.gamma0) > WEAK_COUPLING_RATIO * np.asarray(self.temperature)
        ):
            raise WeakCouplingViolation(
                f"gamma0 must not exceed {WEAK_COUPLING_RATIO:g} * T for the {self.label} bath"
            )

    @property
    def squeezed(self):
        return bool(np.any(np.asarray(self.squeezing) > 0))

    def with_squeezing(self, r):
        return Bath(self.label, self.temperature, self.dim, self.gamma0, r, self.strict)


def _occupation(x):
    # 1 / (e^x - 1) for x > 0, written to underflow cleanly at large x
    with np.errstate(over="ignore", divide="ignore"):
        return np.exp(-x) / -np.expm1(-x)


def planck_occupation(omega, temperature):
    """Bose-Einstein occupation ``1 / (exp(omega / T) - 1)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("occupation requires omega > 0")
    if np.any(np.asarray(temperature) <= 0):
        raise DomainError("temperature must be positive")
    out = _occupation(omega / temperature)
    return float(out) if out.ndim == 0 else out


def _squeezed_occupation(n, r):
    return n * np.cosh(2 * r) + np.sinh(r) ** 2


def rate_array(omega, temperature, dim, gamma0, squeezing=0.0):
    """Vectorised decay rate for signed frequencies.

    ``omega == 0`` is allowed here and returns the continuous limit
    (``gamma0 * T * cosh 2r`` for one-dimensional baths, zero otherwise),
    which only matters at accidental level degeneracies.
    """
    omega = np.asarray(omega, dtype=float)
    temperature = np.asarray(temperature, dtype=float)
    dim = np.asarray(dim)
    absw = np.abs(omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        n = _occupation(absw / temperature)
        nr = _squeezed_occupation(n, squeezing)
        rate = gamma0 * absw**dim * np.where(omega > 0, nr + 1.0, nr)
    zero = absw == 0
    if np.any(zero):
        limit = np.where(dim == 1, gamma0 * temperature * np.cosh(2 * np.asarray(squeezing)), 0.0)
        rate = np.where(zero, limit, rate)
    return rate


def decay_rate(omega, bath):
    """Rate of the jump channel at signed Bohr frequency ``omega``.

    Positive ``omega`` is emission into the bath, negative is absorption.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0):
        raise DomainError("decay rate undefined at omega = 0")
    out = rate_array(omega, bath.temperature, bath.dim, bath.gamma0, bath.squeezing)
    return float(out) if np.ndim(out) == 0 else out


def zero_frequency_rate(bath):
    return float(rate_array(0.0, bath.temperature, bath.dim, bath.gamma0, bath.squeezing))


def squeeze_cross_rate(omega, bath):
    """Coefficient of the squeezing cross terms, ``gamma0/2 |w|^d M(|w|)``.

    ``M = sinh 2r (2N + 1) / 2``; even in the sign of ``omega``.
    """
    if bath.label != "work":
        raise DomainError("squeezing cross terms exist only for the work bath")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0):
        raise DomainError("cross rate undefined at omega = 0")
    absw = np.abs(omega)
    n = _occupation(absw / bath.temperature)
    m = np.sinh(2 * np.asarray(bath.squeezing)) * (2 * n + 1) / 2
    out = 0.5 * bath.gamma0 * absw**bath.dim * m
    return float(out) if np.ndim(out) == 0 else out


def effective_temperature_of(omega, temperature, squeezing):
    x = np.asarray(omega, dtype=float) / temperature
    t2 = np.tanh(squeezing) ** 2
    e = np.exp(-x)
    # log[(t^2 + e^x) / (1 + t^2 e^x)] rewritten in terms of e^-x
    log_ratio = np.log1p(t2 * e) - np.log(e + t2)
    with np.errstate(divide="ignore"):
        out = np.where(log_ratio > 0, omega / np.where(log_ratio > 0, log_ratio, 1.0), np.inf)
    return float(out) if np.ndim(out) == 0 else out


def effective_temperature(omega_w, bath):
    """Temperature of the Gibbs state a squeezed bath drives a gap ``omega_w`` to.

    Equals ``bath.temperature`` at zero squeezing and diverges as r -> inf.
    """
    if bath.label != "work":
        raise DomainError("effective temperature is defined for the work bath")
    if np.any(np.asarray(omega_w) <= 0):
        raise DomainError("omega_w must be positive")
    if not bath.squeezed:
        return float(bath.temperature) if np.ndim(bath.temperature) == 0 else bath.temperature
    return effective_temperature_of(omega_w, bath.temperature, bath.squeezing)
