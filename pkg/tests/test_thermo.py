import numpy as np
import pytest

from qfridge import lindblad as lb
from qfridge import thermo
from qfridge.baths import DomainError
from qfridge.models import FridgeSpec, solve_fridge
from qfridge.optimize import make_baths

EPS_C_FIG4 = 2700 / 8500
WCMAX_FIG4 = 2700 / 11200 * 50
TEMPS = {"work": 170.0, "hot": 80.0, "cold": 30.0}


def test_carnot_values():
    assert thermo.carnot_efficiency(170, 80, 30) == pytest.approx(EPS_C_FIG4, rel=1e-14)
    assert thermo.carnot_efficiency(80, 80, 30) == 0.0
    assert thermo.carnot_efficiency(170, 80, 30, 40.0, omega_w=10.0) == pytest.approx(0.6, rel=1e-12)
    with pytest.raises(DomainError):
        thermo.carnot_efficiency(70, 80, 30)
    with pytest.raises(DomainError):
        thermo.carnot_efficiency(170, 80, 30, 1.0)


def test_squeezed_carnot_grows():
    eps = [thermo.carnot_efficiency(170, 80, 30, r, omega_w=40.0) for r in np.linspace(0, 3, 13)]
    assert np.all(np.diff(eps) > 0) and eps[-1] < 0.6


def test_cooling_window():
    assert thermo.cooling_window_max(170, 80, 30, omega_h=50) == pytest.approx(WCMAX_FIG4, rel=1e-14)
    assert thermo.cooling_window_max(80, 80, 30, omega_h=50) == 0.0
    assert thermo.cooling_window_max(170, 80, 30, omega_w=44) == pytest.approx(44 * EPS_C_FIG4)
    prev = WCMAX_FIG4
    for r in (0.5, 1.0, 2.0):
        w = thermo.cooling_window_max(170, 80, 30, r, omega_h=50)
        assert w > prev
        # the edge is where the constraint balances
        ww = 50 - w
        t_eff = thermo.work_temperature(170, r, ww)
        assert w / 30 + ww / t_eff == pytest.approx(50 / 80, rel=1e-12)
        prev = w
    with pytest.raises(ValueError):
        thermo.cooling_window_max(170, 80, 30)


def test_performance_bound():
    assert thermo.performance_bound(1, 0.3) == pytest.approx(0.15)
    assert thermo.performance_bound(3, 0.4) == pytest.approx(0.3)
    assert thermo.performance_bound(2, 0.0) == 0.0
    with pytest.raises(DomainError):
        thermo.performance_bound(4, 0.3)


def run(wc, wh=50.0, temps=TEMPS, r=0.0, design="three_level", g=0.0):
    baths = make_baths(temps["work"], temps["hot"], temps["cold"], 3, 1e-3, squeezing=r)
    sol = solve_fridge(FridgeSpec(design, wc, wh, g), baths)
    rep = thermo.report(sol.currents, temps, r, wh - wc, scale=lb.current_scale(sol.liouvillian))
    return rep


def test_report_modes():
    eq = run(6.0, temps={"work": 30.0, "hot": 30.0, "cold": 30.0})
    assert eq.mode == "equilibrium" and abs(eq.entropy_production) < 1e-12
    ch = run(6.0)
    assert ch.mode == "chiller"
    assert ch.efficiency == pytest.approx(6 / 44, rel=1e-10)
    assert run(WCMAX_FIG4 * 1.001).mode == "heater"


def test_report_catches_violations():
    with pytest.raises(thermo.LawViolation):
        thermo.report({"work": 1.0, "hot": -0.5, "cold": 0.2}, TEMPS)
    # heat flowing from cold to hot with no drive breaks the second law
    with pytest.raises(thermo.LawViolation):
        thermo.report({"work": 0.0, "hot": -1.0, "cold": 1.0}, TEMPS)
    rep = thermo.report({"work": 0.0, "hot": -1.0, "cold": 1.0}, TEMPS, strict=False)
    assert rep.entropy_production < 0


def test_classify_dead_band():
    assert thermo.classify(1.0, -1.0, 1e-13, 1e-12) == "engine"
    assert thermo.classify(1.0, -1.1, 0.1, 1e-12) == "chiller"
    assert thermo.classify(1e-13, 0.0, 0.0, 1e-12) == "equilibrium"


def test_ideal_efficiency_across_window():
    for design in ("three_level", "two_qubit"):
        for wc in WCMAX_FIG4 * np.array([0.01, 0.3, 0.7, 0.99]):
            rep = run(wc, design=design)
            assert rep.efficiency == pytest.approx(wc / (50 - wc), rel=1e-10)
        # closer to the edge the currents are differences of nearly equal fluxes
        rep = run(WCMAX_FIG4 * 0.9999, design=design)
        assert rep.efficiency == pytest.approx(WCMAX_FIG4 * 0.9999 / (50 - WCMAX_FIG4 * 0.9999), rel=1e-8)
    assert run(WCMAX_FIG4 * (1 - 1e-6)).efficiency == pytest.approx(EPS_C_FIG4, rel=1e-5)


def test_three_qubit_below_carnot():
    effs = [run(wc, g=1.0, design="three_qubit").efficiency for wc in WCMAX_FIG4 * np.linspace(0.05, 0.999, 60)]
    best = max(e for e in effs if e > 0)
    assert best < EPS_C_FIG4 - 1e-3


def test_superefficient_squeezed_cooling():
    r = 1.0
    wmax = thermo.cooling_window_max(170, 80, 30, r, omega_h=50)
    rep = run(0.99 * wmax, r=r)
    assert rep.mode == "chiller"
    assert rep.efficiency > EPS_C_FIG4
    assert rep.entropy_production >= 0
