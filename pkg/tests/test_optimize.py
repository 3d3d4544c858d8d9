import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from qfridge import optimize as opt
from qfridge.models import FridgeSpec, three_level_cooling_power
from qfridge.optimize import NoCoolingRegion, make_baths, maximize_cooling_power

WCMAX_FIG4 = 2700 / 11200 * 50


def closed_power(wc, wh, baths):
    return three_level_cooling_power(FridgeSpec("three_level", wc, wh), baths)


def test_golden_maximize():
    x, f = opt.golden_maximize(lambda v: -(v - np.array([0.3, -1.0])) ** 2, [0.0, -2.0], [1.0, 0.0], rtol=1e-10)
    assert np.allclose(x, [0.3, -1.0], atol=1e-9)
    assert np.allclose(f, 0.0, atol=1e-18)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fixed_omega_h_matches_scalar_oracle(d):
    b = make_baths(170.0, 80.0, 30.0, d, 1e-3)
    pt = maximize_cooling_power("three_level", b, omega_h=50.0)
    ref = minimize_scalar(
        lambda wc: -closed_power(wc, 50.0, b), bounds=(1e-3, WCMAX_FIG4), method="bounded", options={"xatol": 1e-10}
    )
    assert pt.omega_c == pytest.approx(ref.x, rel=1e-6)
    assert pt.cooling_power >= -ref.fun * (1 - 1e-12)
    assert all(pt.cooling_power >= q for q in pt.grid_neighbors)
    assert pt.efficiency == pytest.approx(pt.omega_c / pt.omega_w, rel=1e-10)
    assert pt.omega_h == pytest.approx(50.0)
    assert pt.ratio <= d / (d + 1) + 1e-3


def test_fixed_omega_w_small_carnot_limit():
    # small Carnot efficiency: the maximiser sits at x = d/(d+1)
    b = make_baths(80.5, 80.0, 30.0, 1, 1e-3)
    ww = 5.0
    pt = maximize_cooling_power("three_level", b, omega_w=ww)
    xs = np.linspace(1e-4, 1 - 1e-4, 10_000)
    q = [closed_power(x * pt.omega_c_max, x * pt.omega_c_max + ww, b) for x in xs]
    x_scan = xs[int(np.argmax(q))]
    assert pt.x == pytest.approx(x_scan, abs=2e-4)
    assert pt.x == pytest.approx(0.5, abs=2e-3)
    assert pt.omega_w == ww


def test_free_search():
    b = make_baths(170.0, 80.0, 30.0, 2, 1e-3)
    pt = maximize_cooling_power("three_level", b, omega_max=200.0, grid=24)
    assert 0 < pt.omega_w <= 200.0 and 0 < pt.x < 1
    # no fixed-omega_w optimum along the grid of work gaps beats it
    for ww in np.geomspace(1.0, 200.0, 15):
        assert maximize_cooling_power("three_level", b, omega_w=ww).cooling_power <= pt.cooling_power * (1 + 1e-9)
    with pytest.raises(ValueError):
        maximize_cooling_power("three_level", b)


def test_no_cooling_region():
    b = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
    with pytest.raises(NoCoolingRegion):
        maximize_cooling_power("three_qubit", b, omega_h=50.0, g=20.0)
    batch = opt.maximize_batch("three_qubit", b, omega_h=[50.0, 50.0], g=[20.0, 0.5])
    assert list(batch.cooling) == [False, True]
    assert np.isnan(batch.efficiency[0])


def test_three_qubit_optimum():
    b = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
    pt = maximize_cooling_power("three_qubit", b, omega_h=50.0, g=0.5)
    wcs = np.linspace(0.3, 0.99, 400) * WCMAX_FIG4
    from qfridge.models import population_currents

    q = population_currents("three_qubit", wcs, 50.0, b, 0.5).currents["cold"]
    assert pt.cooling_power >= q.max()
    assert pt.ratio < 0.75


def test_batch_is_chunk_invariant():
    a = opt.survey("two_qubit", 2, 300, 4, chunk=300)
    b = opt.survey("two_qubit", 2, 300, 4, chunk=70)
    for f in ("omega_c", "efficiency", "cooling_power"):
        assert np.array_equal(getattr(a.optimum, f), getattr(b.optimum, f))


def test_survey_threads_identical():
    a = opt.survey("three_level", 1, 400, 8, chunk=100, threads=1)
    b = opt.survey("three_level", 1, 400, 8, chunk=100, threads=3)
    assert np.array_equal(a.ratio, b.ratio)
    assert a.max_ratio() <= 0.5 + 1e-3


def test_draws_depend_only_on_seed_and_index():
    assert opt.draw_parameters(3, 17, "three_level") == opt.draw_parameters(3, 17, "three_level")
    assert opt.draw_parameters(3, 17, "three_level") != opt.draw_parameters(3, 18, "three_level")
    p = opt.draw_parameters(3, 17, "three_qubit")
    q = opt.draw_parameters(3, 17, "two_qubit")
    assert p["t_w"] == q["t_w"] and q["g"] == 0.0 and 0.01 <= p["g"] / p["omega_h"] <= 0.5
    assert p["gamma0"] <= 1e-2 * p["t_c"]


def test_characteristic_shape():
    b = make_baths(170.0, 80.0, 30.0, 3, 1e-3)
    curves = opt.performance_characteristic("three_level", b, 50.0, [0.0, 1.0], n_points=60)
    peaks = [c.cooling_power.max() for c in curves]
    for c in curves:
        assert abs(c.cooling_power[0]) < 1e-3 * c.cooling_power.max()
        assert abs(c.cooling_power[-1]) < 2e-3 * c.cooling_power.max()
        assert np.all(c.cooling_power > 0)
    assert peaks[1] > peaks[0]
    assert curves[0].efficiency.max() == pytest.approx(2700 / 8500, abs=1e-3)
