"""Efficiencies, cooling windows, the performance bound and law checks."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .baths import DomainError, effective_temperature_of

FIRST_LAW_RTOL = 1e-9
SECOND_LAW_ATOL = 1e-9
DEAD_BAND = 1e-12
ROUNDOFF = 1e-14


class LawViolation(ArithmeticError):
    pass


def _check_order(t_w, t_h, t_c):
    if not (t_c > 0 and t_h > t_c):
        raise DomainError("need T_h > T_c > 0")
    if t_w < t_h:
        raise DomainError("need T_w >= T_h")


def work_temperature(t_w, squeezing=0.0, omega_w=None):
    """``T_w`` itself, or the squeezing-dependent effective temperature at ``omega_w``."""
    if squeezing == 0:
        return t_w
    if omega_w is None or omega_w <= 0:
        raise DomainError("a positive omega_w is needed to evaluate a squeezed work temperature")
    return effective_temperature_of(omega_w, t_w, squeezing)


def carnot_efficiency(t_w, t_h, t_c, squeezing=0.0, omega_w=None):
    """Reversible coefficient of performance for the three bath temperatures.

    With squeezing the work temperature becomes ``T_eff(omega_w, r)``, which
    tends to the power-driven limit ``T_c / (T_h - T_c)`` as r grows.
    """
    _check_order(t_w, t_h, t_c)
    if squeezing == 0:
        return (t_w - t_h) * t_c / ((t_h - t_c) * t_w)
    t_eff = work_temperature(t_w, squeezing, omega_w)
    return t_c / (t_h - t_c) * (1 - t_h / t_eff)


def cooling_window_max(t_w, t_h, t_c, squeezing=0.0, *, omega_h=None, omega_w=None):
    """Upper edge of the cooling window for fixed ``omega_h`` or fixed ``omega_w``.

    With squeezing and fixed ``omega_h`` the effective temperature depends
    on ``omega_w = omega_h - omega_c`` itself, so the edge
    ``w_c/T_c + w_w/T_eff(w_w) = w_h/T_h`` is found by root bracketing.
    """
    if (omega_h is None) == (omega_w is None):
        raise ValueError("fix exactly one of omega_h and omega_w")
    if not (t_c > 0 and t_h > t_c):
        raise DomainError("need T_h > T_c > 0")
    if squeezing == 0 and t_w < t_h:
        raise DomainError("the cooling window is empty unless T_w > T_h")
    if omega_w is not None:
        return max(omega_w * carnot_efficiency(t_w, t_h, t_c, squeezing, omega_w), 0.0)
    if squeezing == 0:
        return (t_w - t_h) * t_c / ((t_w - t_c) * t_h) * omega_h

    def balance(wc):
        ww = omega_h - wc
        return wc / t_c + ww / effective_temperature_of(ww, t_w, squeezing) - omega_h / t_h

    if balance(0.0 + 1e-15 * omega_h) >= 0:
        return 0.0
    return brentq(balance, 1e-15 * omega_h, omega_h * (1 - 1e-15), xtol=1e-14 * omega_h, rtol=1e-15)


def performance_bound(d_c, eps_c):
    if d_c not in (1, 2, 3):
        raise DomainError("cold-bath dimensionality must be 1, 2 or 3")
    return d_c / (d_c + 1) * eps_c


@dataclass
class HeatReport:
    q_w: float
    q_h: float
    q_c: float
    efficiency: float
    entropy_production: float
    first_law_residual: float
    mode: str
    t_work: float
    omega_w: float = None

    @property
    def currents(self):
        return {"work": self.q_w, "hot": self.q_h, "cold": self.q_c}


def classify(q_w, q_h, q_c, band):
    if max(abs(q_w), abs(q_h), abs(q_c)) <= band:
        return "equilibrium"

    def sign(q):
        return 0 if abs(q) <= band else (1 if q > 0 else -1)

    sw, sh, sc = sign(q_w), sign(q_h), sign(q_c)
    if sc > 0 and sw > 0 and sh < 0:
        return "chiller"
    if sc < 0:
        return "heater"
    return "engine"


def report(currents, temps, squeezing=0.0, omega_w=None, scale=0.0, strict=True):
    """Collect currents into a HeatReport and check both laws.

    ``currents`` and ``temps`` are dicts keyed 'work', 'hot', 'cold'.
    ``scale`` is the natural current scale of the generator
    (``max|L| max|H|``). Round-off in the currents is a fixed fraction of
    it, so tolerances get an absolute floor of ``ROUNDOFF * scale`` on top
    of the relative ones; this is what keeps equilibrium from tripping them.
    """
    q_w, q_h, q_c = (float(currents[k]) for k in ("work", "hot", "cold"))
    t_work = work_temperature(temps["work"], squeezing, omega_w)
    qmax = max(abs(q_w), abs(q_h), abs(q_c))
    noise = ROUNDOFF * scale
    band = max(DEAD_BAND * qmax, noise)
    resid = q_w + q_h + q_c
    sigma = -(q_w / t_work + q_h / temps["hot"] + q_c / temps["cold"])
    mode = classify(q_w, q_h, q_c, band)
    eff = q_c / q_w if mode != "equilibrium" and q_w != 0 else 0.0
    if strict:
        if abs(resid) > FIRST_LAW_RTOL * qmax + noise:
            raise LawViolation(f"first law residual {resid:.3e} exceeds {FIRST_LAW_RTOL:g} * {qmax:.3e}")
        t_min = min(t_work, temps["hot"], temps["cold"])
        if sigma < -(SECOND_LAW_ATOL + noise / t_min):
            raise LawViolation(f"negative entropy production {sigma:.3e}")
    return HeatReport(q_w, q_h, q_c, eff, sigma, resid, mode, t_work, omega_w)
