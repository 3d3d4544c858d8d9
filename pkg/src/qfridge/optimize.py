"""Maximum cooling power, efficiency at maximum power and random surveys.

Under the resonance constraint ``w_h = w_c + w_w`` fixing either ``w_h``
or ``w_w`` leaves a one-dimensional search over ``w_c``; a free
two-dimensional search over ``(w_w, w_c)`` inside a box is also offered.
Searches start on a log-spaced grid and are refined by golden sections in
log-frequency. All refinements run a fixed number of iterations, so a
batch of fridges gives bit-identical results however it is chunked.
"""
import concurrent.futures as cf
from dataclasses import dataclass, field

import numpy as np

from . import thermo
from .baths import Bath
from .models import Design, FridgeSpec, population_currents, solve_fridge

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
GRID_FLOOR = 1e-3


class NoCoolingRegion(RuntimeError):
    pass


@dataclass
class OptimumPoint:
    omega_w: float
    omega_c: float
    cooling_power: float
    efficiency: float
    eps_carnot: float
    omega_c_max: float
    grid_neighbors: tuple = ()

    @property
    def ratio(self):
        return self.efficiency / self.eps_carnot

    @property
    def x(self):
        return self.omega_c / self.omega_c_max

    @property
    def omega_h(self):
        return self.omega_c + self.omega_w


def _temps(baths):
    return baths["work"].temperature, baths["hot"].temperature, baths["cold"].temperature


def _golden_iterations(width, rtol):
    return int(np.ceil(np.log(rtol / width) / np.log(GOLDEN))) + 1


def golden_maximize(f, lo, hi, rtol=1e-6):
    """Lockstep golden-section maximisation of ``f`` over ``[lo, hi]`` (arrays).

    Iterates until the bracket is narrower than ``rtol`` (absolute, so pass
    log-variables for relative accuracy). Ties move left.
    """
    lo, hi = np.array(lo, float), np.array(hi, float)
    n_iter = _golden_iterations(float(np.max(hi - lo)), rtol)
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(n_iter):
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new = np.where(left, hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo))
        fnew = f(new)
        c, d, fc, fd = (
            np.where(left, new, d),
            np.where(left, c, new),
            np.where(left, fnew, fd),
            np.where(left, fc, fnew),
        )
    x = np.where(fc >= fd, c, d)
    return x, np.maximum(fc, fd)


def _baths_like(baths, shape_fn):
    return {k: shape_fn(b) for k, b in baths.items()}


def _expand(baths, axis_len):
    """Add a trailing grid axis to array-valued bath fields."""

    def widen(b):
        t = np.asarray(b.temperature)[..., None] if np.ndim(b.temperature) else b.temperature
        d = np.asarray(b.dim)[..., None] if np.ndim(b.dim) else b.dim
        g0 = np.asarray(b.gamma0)[..., None] if np.ndim(b.gamma0) else b.gamma0
        r = np.asarray(b.squeezing)[..., None] if np.ndim(b.squeezing) else b.squeezing
        return Bath(b.label, t, d, g0, r)

    return _baths_like(baths, widen)


def search_upper_bound(design, baths, omega_h=None, omega_w=None, g=0.0):
    """Top of the ``omega_c`` search interval (the ideal cooling window, widened by g)."""
    t_w, t_h, t_c = _temps(baths)
    r = baths["work"].squeezing
    if omega_h is not None:
        up = _window_max(t_w, t_h, t_c, r, omega_h=omega_h)
        if Design(design) is Design.THREE_QUBIT:
            up = np.minimum(up + g, omega_h * (1 - 1e-9))
        return up
    up = _window_max(t_w, t_h, t_c, r, omega_w=omega_w)
    if Design(design) is Design.THREE_QUBIT:
        up = up + g
    return up


def _window_max(t_w, t_h, t_c, r, omega_h=None, omega_w=None):
    arrays = [np.asarray(v, float) for v in (t_w, t_h, t_c, r, omega_h if omega_h is not None else omega_w)]
    b = np.broadcast_arrays(*arrays)
    flat = [a.reshape(-1) for a in b]
    out = np.array(
        [
            thermo.cooling_window_max(
                tw, th, tc, rr, **({"omega_h": w} if omega_h is not None else {"omega_w": w})
            )
            for tw, th, tc, rr, w in zip(*flat)
        ]
    )
    return out.reshape(b[0].shape) if b[0].ndim else float(out[0])


def _eps_carnot(t_w, t_h, t_c, r, omega_w):
    arrays = np.broadcast_arrays(*[np.asarray(v, float) for v in (t_w, t_h, t_c, r, omega_w)])
    flat = [a.reshape(-1) for a in arrays]
    out = np.array([thermo.carnot_efficiency(*args) for args in zip(*flat)])
    return out.reshape(arrays[0].shape)


@dataclass
class BatchOptimum:
    omega_c: np.ndarray
    omega_w: np.ndarray
    cooling_power: np.ndarray
    efficiency: np.ndarray
    omega_c_max: np.ndarray
    eps_carnot: np.ndarray
    cooling: np.ndarray
    neighbors: np.ndarray = field(default=None)

    @property
    def ratio(self):
        return self.efficiency / self.eps_carnot

    @property
    def x(self):
        return self.omega_c / self.omega_c_max


def maximize_batch(design, baths, *, omega_h=None, omega_w=None, g=0.0, grid=64, rtol=1e-6):
    """Vectorised one-dimensional maximisation of the cooling power over ``omega_c``.

    Exactly one of ``omega_h`` / ``omega_w`` is fixed (arrays of shape (B,)).
    Bath fields may be arrays of shape (B,) as well.
    """
    design = Design(design)
    if (omega_h is None) == (omega_w is None):
        raise ValueError("fix exactly one of omega_h and omega_w")
    fixed = np.atleast_1d(np.asarray(omega_h if omega_h is not None else omega_w, float))
    g = np.broadcast_to(np.asarray(g, float), fixed.shape)
    t_w, t_h, t_c = _temps(baths)
    r = baths["work"].squeezing
    by_h = omega_h is not None

    upper = np.atleast_1d(search_upper_bound(design, baths, fixed if by_h else None, None if by_h else fixed, g))
    window = np.atleast_1d(
        _window_max(t_w, t_h, t_c, r, **({"omega_h": fixed} if by_h else {"omega_w": fixed}))
    )
    valid = upper > 0
    upper = np.where(valid, upper, 1.0)

    def currents(wc, fixed_, g_, b):
        wh = fixed_ if by_h else wc + fixed_
        return population_currents(design, wc, wh, b, g_).currents

    log_lo = np.log(upper * GRID_FLOOR)
    log_hi = np.log(upper * (1 - 1e-9))
    steps = np.linspace(0.0, 1.0, grid)
    log_grid = log_lo[:, None] + (log_hi - log_lo)[:, None] * steps[None, :]
    wide = _expand(baths, grid)
    q_grid = currents(np.exp(log_grid), fixed[:, None], g[:, None], wide)["cold"]
    q_grid = np.where(valid[:, None], q_grid, -np.inf)
    k = np.argmax(q_grid, axis=1)
    cooling = q_grid[np.arange(len(k)), k] > 0

    lo = log_grid[np.arange(len(k)), np.maximum(k - 1, 0)]
    hi = log_grid[np.arange(len(k)), np.minimum(k + 1, grid - 1)]
    lo = np.where(cooling, lo, log_lo)
    hi = np.where(cooling, hi, log_lo + 1e-3)

    def objective(logwc):
        return currents(np.exp(logwc), fixed, g, baths)["cold"]

    best_log, best_q = golden_maximize(objective, lo, hi, rtol=rtol)
    grid_best = log_grid[np.arange(len(k)), k]
    use_grid = q_grid[np.arange(len(k)), k] > best_q
    best_log = np.where(use_grid, grid_best, best_log)
    wc = np.exp(best_log)
    cur = currents(wc, fixed, g, baths)
    q_c, q_w = cur["cold"], cur["work"]
    ww = fixed - wc if by_h else fixed
    with np.errstate(divide="ignore", invalid="ignore"):
        eff = np.where(cooling, q_c / q_w, np.nan)
    eps_c = _eps_carnot(t_w, t_h, t_c, r, np.where(ww > 0, ww, 1.0))
    neighbors = np.stack(
        [q_grid[np.arange(len(k)), np.maximum(k - 1, 0)], q_grid[np.arange(len(k)), np.minimum(k + 1, grid - 1)]],
        axis=1,
    )
    return BatchOptimum(wc, ww, q_c, eff, window, eps_c, cooling, neighbors)


def maximize_cooling_power(
    design, baths, *, omega_h=None, omega_w=None, g=0.0, grid=64, omega_max=None, rtol=1e-6
):
    """Design point of maximum cooling power.

    Fix ``omega_h`` or ``omega_w`` for a one-dimensional search; fix neither
    and give ``omega_max`` to search the box ``0 < w_w < omega_max``,
    ``0 < w_c < w_c,max(w_w)`` on a ``grid x grid`` mesh.
    """
    if omega_h is None and omega_w is None:
        if omega_max is None:
            raise ValueError("the free search needs omega_max")
        return _maximize_free(design, baths, omega_max, g, grid, rtol)
    res = maximize_batch(
        design,
        baths,
        omega_h=None if omega_h is None else [omega_h],
        omega_w=None if omega_w is None else [omega_w],
        g=g,
        grid=grid,
        rtol=rtol,
    )
    if not res.cooling[0]:
        raise NoCoolingRegion("cooling power is non-positive over the whole search grid")
    return OptimumPoint(
        omega_w=float(res.omega_w[0]),
        omega_c=float(res.omega_c[0]),
        cooling_power=float(res.cooling_power[0]),
        efficiency=float(res.efficiency[0]),
        eps_carnot=float(res.eps_carnot[0]),
        omega_c_max=float(res.omega_c_max[0]),
        grid_neighbors=tuple(float(v) for v in res.neighbors[0]),
    )


def _maximize_free(design, baths, omega_max, g, grid, rtol):
    t_w, t_h, t_c = _temps(baths)
    r = baths["work"].squeezing
    design = Design(design)

    def power(log_ww, x):
        ww = np.exp(log_ww)
        wcmax = _eps_carnot(t_w, t_h, t_c, r, ww) * ww
        wc = x * wcmax
        ok = wc > 0
        q = population_currents(design, np.where(ok, wc, 1.0), np.where(ok, wc, 1.0) + ww, baths, g).currents["cold"]
        return np.where(ok, q, -np.inf)

    lw = np.linspace(np.log(omega_max * GRID_FLOOR), np.log(omega_max), grid)
    lx = np.exp(np.linspace(np.log(GRID_FLOOR), np.log(1 - 1e-9), grid))
    mesh_w, mesh_x = np.meshgrid(lw, lx, indexing="ij")
    q = power(mesh_w, mesh_x)
    i, j = np.unravel_index(np.argmax(q), q.shape)
    if not q[i, j] > 0:
        raise NoCoolingRegion("cooling power is non-positive over the whole search grid")
    neighbors = tuple(
        float(q[a, b]) for a, b in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)) if 0 <= a < grid and 0 <= b < grid
    )
    best_w, best_lx, best_q = lw[i], np.log(lx[j]), q[i, j]
    w_lo, w_hi = lw[0], lw[-1]
    x_lo, x_hi = np.log(lx[0]), np.log(lx[-1])
    dw = lw[1] - lw[0]
    dx = np.log(lx[1] / lx[0])
    for _ in range(50):
        prev = (best_w, best_lx)
        lo, hi = max(best_w - dw, w_lo), min(best_w + dw, w_hi)
        w_new, q_new = golden_maximize(lambda v: power(v, np.exp(best_lx)), [lo], [hi], rtol=rtol / 10)
        if q_new[0] > best_q:
            best_w, best_q = float(w_new[0]), float(q_new[0])
        lo, hi = max(best_lx - dx, x_lo), min(best_lx + dx, x_hi)
        x_new, q_new = golden_maximize(lambda v: power(best_w, np.exp(v)), [lo], [hi], rtol=rtol / 10)
        if q_new[0] > best_q:
            best_lx, best_q = float(x_new[0]), float(q_new[0])
        dw, dx = dw / 2, dx / 2
        if abs(best_w - prev[0]) < rtol and abs(best_lx - prev[1]) < rtol:
            break
    ww = float(np.exp(best_w))
    eps_c = float(_eps_carnot(t_w, t_h, t_c, r, ww))
    wc = float(np.exp(best_lx)) * eps_c * ww
    cur = population_currents(design, wc, wc + ww, baths, g).currents
    return OptimumPoint(
        omega_w=ww,
        omega_c=wc,
        cooling_power=float(cur["cold"]),
        efficiency=float(cur["cold"] / cur["work"]),
        eps_carnot=eps_c,
        omega_c_max=eps_c * ww,
        grid_neighbors=neighbors,
    )


# performance characteristic ----------------------------------------------------


@dataclass
class Curve:
    squeezing: float
    omega_c: np.ndarray
    efficiency: np.ndarray
    cooling_power: np.ndarray
    omega_c_max: float

    @property
    def peak(self):
        k = int(np.argmax(self.cooling_power))
        return self.efficiency[k], self.cooling_power[k]


EDGE_OFFSET = 1e-4


def performance_characteristic(design, baths, omega_h, r_list, n_points=400, g=0.0):
    """Power against efficiency as ``omega_c`` sweeps the cooling window, one curve per r.

    Each point comes from the dense Liouvillian steady state. The sweep
    stops ``EDGE_OFFSET`` (relative) short of both window edges, where the
    currents vanish identically.
    """
    design = Design(design)
    t_w, t_h, t_c = _temps(baths)
    curves = []
    for r in r_list:
        b = dict(baths)
        b["work"] = baths["work"].with_squeezing(r)
        wmax = float(np.atleast_1d(search_upper_bound(design, b, omega_h=omega_h, g=g))[0])
        window = thermo.cooling_window_max(t_w, t_h, t_c, r, omega_h=omega_h)
        grid = wmax * np.linspace(EDGE_OFFSET, 1 - EDGE_OFFSET, n_points)
        eff, power = np.empty(n_points), np.empty(n_points)
        for i, wc in enumerate(grid):
            sol = solve_fridge(FridgeSpec(design, float(wc), omega_h, g), b, check_kernel=False)
            power[i] = sol.currents["cold"]
            q_w = sol.currents["work"]
            eff[i] = sol.currents["cold"] / q_w if q_w != 0 else np.nan
        curves.append(Curve(float(r), grid, eff, power, window))
    return curves


# random survey ---------------------------------------------------------------------

SAMPLING = {
    "t_c": (1.0, 10.0),
    "hot_over_cold": (1.5, 30.0),
    "work_over_hot": (1.5, 30.0),
    "omega_h_over": (0.1, 5.0),  # omega_h in [0.1 T_c, 5 T_h]
    "g_over_omega_h": (0.01, 0.5),
    "gamma0_factor": 1e-3,
}


def _loguniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def draw_parameters(seed, index, design):
    """Random fridge number ``index`` of the survey seeded by ``seed``."""
    rng = np.random.default_rng([int(seed), int(index)])
    t_c = _loguniform(rng, *SAMPLING["t_c"])
    t_h = t_c * _loguniform(rng, *SAMPLING["hot_over_cold"])
    t_w = t_h * _loguniform(rng, *SAMPLING["work_over_hot"])
    lo, hi = SAMPLING["omega_h_over"]
    omega_h = _loguniform(rng, lo * t_c, hi * t_h)
    g_frac = _loguniform(rng, *SAMPLING["g_over_omega_h"])
    g = g_frac * omega_h if Design(design) is Design.THREE_QUBIT else 0.0
    gamma0 = SAMPLING["gamma0_factor"] * min(t_c, omega_h)
    return {"t_w": t_w, "t_h": t_h, "t_c": t_c, "omega_h": omega_h, "g": g, "gamma0": gamma0}


@dataclass
class Survey:
    design: Design
    dim: int
    index: np.ndarray
    params: dict
    optimum: BatchOptimum

    @property
    def ratio(self):
        return self.optimum.ratio

    @property
    def cooling(self):
        return self.optimum.cooling

    def max_ratio(self):
        r = self.ratio[self.cooling]
        return float(np.max(r)) if r.size else float("nan")


def make_baths(t_w, t_h, t_c, dim, gamma0, squeezing=0.0, strict=False):
    return {
        "work": Bath("work", t_w, dim, gamma0, squeezing, strict),
        "hot": Bath("hot", t_h, dim, gamma0, 0.0, strict),
        "cold": Bath("cold", t_c, dim, gamma0, 0.0, strict),
    }


def _survey_chunk(design, dim, seed, indices, grid, rtol, strict):
    draws = [draw_parameters(seed, i, design) for i in indices]
    params = {k: np.array([d[k] for d in draws]) for k in draws[0]}
    baths = make_baths(params["t_w"], params["t_h"], params["t_c"], dim, params["gamma0"], strict=strict)
    opt = maximize_batch(design, baths, omega_h=params["omega_h"], g=params["g"], grid=grid, rtol=rtol)
    return params, opt


def _concat(parts):
    params = {k: np.concatenate([p[0][k] for p in parts]) for k in parts[0][0]}
    fields_ = ("omega_c", "omega_w", "cooling_power", "efficiency", "omega_c_max", "eps_carnot", "cooling", "neighbors")
    opt = BatchOptimum(**{f: np.concatenate([getattr(p[1], f) for p in parts]) for f in fields_})
    return params, opt


def survey(design, dim, n_draws, seed, *, grid=64, rtol=1e-6, chunk=2000, threads=1, strict=True):
    """Efficiency at maximum power for ``n_draws`` random fridges.

    Parameter draw ``i`` depends only on ``(seed, i)``, and the same draws are
    reused for every bath dimensionality. ``omega_h`` is fixed per draw and
    all three baths share the dimensionality ``dim``.
    """
    design = Design(design)
    chunks = [range(s, min(s + chunk, n_draws)) for s in range(0, n_draws, chunk)]
    if threads > 1 and len(chunks) > 1:
        with cf.ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_survey_chunk, *zip(*[(design, dim, seed, c, grid, rtol, strict) for c in chunks])))
    else:
        parts = [_survey_chunk(design, dim, seed, c, grid, rtol, strict) for c in chunks]
    params, opt = _concat(parts)
    return Survey(design, dim, np.arange(n_draws), params, opt)
