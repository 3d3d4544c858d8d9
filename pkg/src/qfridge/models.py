"""The three absorption-fridge designs.

Basis orderings are fixed throughout the package:

* three-level: ``|1>, |2>, |3>`` with energies ``0, w_c, w_h``; the cold
  bath drives 1-2, the work bath 2-3 and the hot bath 1-3;
* two-qubit: ``hot (x) cold``, index ``2*h + c``;
* three-qubit: ``work (x) hot (x) cold``, index ``4*w + 2*h + c``, with the
  three-body term ``g (|101><010| + h.c.)``.

Two evaluation routes exist. ``solve_fridge`` assembles the dense
Liouvillian and solves it; ``population_currents`` works directly with
energy-basis populations (the coherences decouple for every design at
non-degenerate Bohr frequencies) and is vectorised over parameter
batches for the optimiser.
"""
import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import lindblad
from .baths import DomainError, decay_rate, rate_array
from .numerics import kronecker


class InvalidSpec(ValueError):
    pass


class ResonanceViolation(InvalidSpec):
    pass


class NonPositiveFrequency(InvalidSpec):
    pass


class Design(str, enum.Enum):
    THREE_LEVEL = "three_level"
    TWO_QUBIT = "two_qubit"
    THREE_QUBIT = "three_qubit"

    @property
    def ideal(self):
        return self is not Design.THREE_QUBIT

    @property
    def dim(self):
        return {"three_level": 3, "two_qubit": 4, "three_qubit": 8}[self.value]


RESONANCE_RTOL = 1e-12


@dataclass(frozen=True)
class FridgeSpec:
    design: Design
    omega_c: float
    omega_h: float
    g: float = 0.0
    omega_w_given: float = None

    def __post_init__(self):
        object.__setattr__(self, "design", Design(self.design))
        if self.omega_c <= 0 or self.omega_h <= 0:
            raise NonPositiveFrequency("frequencies must be positive")
        if self.omega_h <= self.omega_c:
            raise NonPositiveFrequency("omega_h must exceed omega_c so that omega_w > 0")
        if self.omega_w_given is not None:
            if self.omega_w_given <= 0:
                raise NonPositiveFrequency("omega_w must be positive")
            mismatch = abs(self.omega_c + self.omega_w_given - self.omega_h)
            if mismatch > RESONANCE_RTOL * self.omega_h:
                raise ResonanceViolation(
                    f"omega_h = omega_c + omega_w violated by {mismatch:.3e}"
                )
        if self.g < 0:
            raise InvalidSpec("interaction strength g must be non-negative")
        if self.g > 0 and self.design is not Design.THREE_QUBIT:
            raise InvalidSpec("g is only meaningful for the three-qubit design")

    @classmethod
    def from_work(cls, design, omega_c, omega_w, g=0.0):
        return cls(design, omega_c, omega_c + omega_w, g, omega_w)

    @property
    def omega_w(self):
        return self.omega_h - self.omega_c

    def working_material(self):
        return build_working_material(self)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
EYE2 = np.eye(2, dtype=np.complex128)


def _ket(n, i):
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    return v


def _flip(n, i, j):
    """``|i><j| + |j><i|`` in dimension n."""
    m = np.zeros((n, n), dtype=np.complex128)
    m[i, j] = m[j, i] = 1.0
    return m


def build_working_material(spec):
    """Hamiltonian and per-bath coupling operators (keyed 'work', 'hot', 'cold')."""
    wc, wh, ww = spec.omega_c, spec.omega_h, spec.omega_w
    if spec.design is Design.THREE_LEVEL:
        h = np.diag([0.0, wc, wh]).astype(np.complex128)
        couplings = {"cold": _flip(3, 0, 1), "work": _flip(3, 1, 2), "hot": _flip(3, 0, 2)}
    elif spec.design is Design.TWO_QUBIT:
        n = np.diag([0.0, 1.0]).astype(np.complex128)
        h = wh * kronecker(n, EYE2) + wc * kronecker(EYE2, n)
        couplings = {
            "hot": kronecker(SIGMA_X, EYE2),
            "cold": kronecker(EYE2, SIGMA_X),
            # |0_h 1_c> <-> |1_h 0_c|, gap omega_h - omega_c
            "work": _flip(4, 1, 2),
        }
    elif spec.design is Design.THREE_QUBIT:
        n = np.diag([0.0, 1.0]).astype(np.complex128)
        h = (
            ww * kronecker(kronecker(n, EYE2), EYE2)
            + wh * kronecker(kronecker(EYE2, n), EYE2)
            + wc * kronecker(kronecker(EYE2, EYE2), n)
        )
        # g (|101><010| + h.c.)
        h = h + spec.g * _flip(8, 0b101, 0b010)
        couplings = {
            "work": kronecker(kronecker(SIGMA_X, EYE2), EYE2),
            "hot": kronecker(kronecker(EYE2, SIGMA_X), EYE2),
            "cold": kronecker(kronecker(EYE2, EYE2), SIGMA_X),
        }
    else:  # pragma: no cover
        raise InvalidSpec(f"unknown design {spec.design}")
    return h, couplings


# dense route ---------------------------------------------------------------


@dataclass
class FridgeSolution:
    spec: FridgeSpec
    liouvillian: lindblad.Liouvillian
    rho: np.ndarray
    currents: dict


def solve_fridge(spec, baths, check_kernel=True):
    liouv = lindblad.build_liouvillian(spec, baths)
    rho = lindblad.steady_state(liouv, check_kernel=check_kernel)
    return FridgeSolution(spec, liouv, rho, lindblad.heat_currents(liouv, rho))


# population route ----------------------------------------------------------


@lru_cache(maxsize=None)
def _population_basis(design, mixed):
    """Energy eigenbasis as (coefficients of E over (w_c, w_h, g), unitary).

    The eigenvectors do not depend on the frequencies: for the three-qubit
    design the only mixing is the resonant pair |010>, |101>, split into
    (|010> +- |101>)/sqrt 2 at w_h +- g whenever g > 0.
    """
    design = Design(design)
    if design is Design.THREE_LEVEL:
        coeffs = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        return coeffs, np.eye(3)
    if design is Design.TWO_QUBIT:
        coeffs = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=float)
        return coeffs, np.eye(4)
    coeffs, u = [], np.eye(8)
    for k in range(8):
        w, h, c = (k >> 2) & 1, (k >> 1) & 1, k & 1
        # bare energy w*(w_h - w_c) + h*w_h + c*w_c
        coeffs.append([c - w, w + h, 0.0])
    coeffs = np.array(coeffs)
    if mixed:
        s = 1 / np.sqrt(2)
        u = u.copy()
        u[:, 0b010] = s * (_ket(8, 0b010) + _ket(8, 0b101)).real
        u[:, 0b101] = s * (_ket(8, 0b010) - _ket(8, 0b101)).real
        coeffs[0b010] = [0, 1, 1]
        coeffs[0b101] = [0, 1, -1]
    return coeffs, u


@lru_cache(maxsize=None)
def population_transitions(design, mixed=False):
    """Per-bath lists ``(i, j, weight)`` with ``weight = |<i|sigma|j>|^2`` in the eigenbasis."""
    design = Design(design)
    coeffs, u = _population_basis(design, mixed)
    probe = FridgeSpec(design, 1.0, 3.0, 0.1 if mixed else 0.0)
    _, couplings = build_working_material(probe)
    out = {}
    for label, sigma in couplings.items():
        m = np.abs(u.T @ sigma @ u) ** 2
        out[label] = tuple(
            (i, j, float(m[i, j])) for i in range(len(m)) for j in range(i + 1, len(m)) if m[i, j] > 1e-14
        )
    return coeffs, out


@dataclass
class PopulationResult:
    energies: np.ndarray
    populations: np.ndarray
    currents: dict


def population_currents(design, omega_c, omega_h, baths, g=0.0):
    """Steady-state energy-basis populations and heat currents, batched.

    ``omega_c``, ``omega_h``, ``g`` and the bath fields broadcast together.
    """
    design = Design(design)
    omega_c, omega_h, g = np.broadcast_arrays(
        np.asarray(omega_c, float), np.asarray(omega_h, float), np.asarray(g, float)
    )
    mixed = False
    if design is Design.THREE_QUBIT:
        mixed = bool(np.all(g > 0))
        if not mixed and np.any(g > 0):
            raise InvalidSpec("batch mixes g = 0 and g > 0")
    coeffs, transitions = population_transitions(design, mixed)
    params = np.stack([omega_c, omega_h, g], axis=-1)
    energies = params @ coeffs.T
    n = coeffs.shape[0]
    shape = energies.shape[:-1]
    rates = np.zeros(shape + (n, n))
    per_bath = {}
    for label, trans in transitions.items():
        bath = baths[label]
        entries = []
        for i, j, weight in trans:
            gap = energies[..., j] - energies[..., i]
            down = weight * rate_array(gap, bath.temperature, bath.dim, bath.gamma0, bath.squeezing)
            up = weight * rate_array(-gap, bath.temperature, bath.dim, bath.gamma0, bath.squeezing)
            rates[..., i, j] += down
            rates[..., j, i] += up
            entries.append((i, j, gap, up, down))
        per_bath[label] = entries
    p = lindblad.pauli_steady_state(rates)
    currents = {}
    for label, entries in per_bath.items():
        q = np.zeros(shape)
        for i, j, gap, up, down in entries:
            q = q + gap * (up * p[..., i] - down * p[..., j])
        currents[label] = q
    return PopulationResult(energies, p, currents)


# diagram route -----------------------------------------------------------------


def _spanning_trees(n, edges):
    """All spanning trees of the graph on ``n`` nodes as tuples of edge indices."""
    trees = []
    for combo in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ok = True
        for k in combo:
            a, b = find(edges[k][0]), find(edges[k][1])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            trees.append(combo)
    return trees


def _orient(n, edges, tree, root):
    """Directed-edge indices of ``tree`` pointing at ``root``, plus each node's parent edge.

    Directed edge ``2k`` runs i -> j of edge k = (i, j), ``2k + 1`` the reverse.
    """
    adj = {v: [] for v in range(n)}
    for k in tree:
        i, j = edges[k]
        adj[i].append((j, k))
        adj[j].append((i, k))
    up_edge, order, seen = {}, [root], {root}
    for v in order:
        for w, k in adj[v]:
            if w not in seen:
                seen.add(w)
                up_edge[w] = (v, k)
                order.append(w)
    dirs = [2 * k + (0 if edges[k][0] == w else 1) for w, (v, k) in up_edge.items()]
    return dirs, up_edge


@lru_cache(maxsize=None)
def _diagrams(design, mixed):
    """Index tables for the cycle-flux evaluation of a design's rate graph."""
    coeffs, transitions = population_transitions(design, mixed)
    n = coeffs.shape[0]
    edges, labels, weights = [], [], []
    for label, trans in transitions.items():
        for i, j, w in trans:
            edges.append((i, j))
            labels.append(label)
            weights.append(w)
    trees = _spanning_trees(n, edges)
    root_dirs = np.array([[_orient(n, edges, t, r)[0] for t in trees] for r in range(n)])
    flux_dirs = np.empty((len(edges), len(trees), n - 1), dtype=np.int64)
    cycles = np.zeros((len(edges), len(trees), len(edges)), dtype=np.int8)
    for e, (i, j) in enumerate(edges):
        for t, tree in enumerate(trees):
            dirs, up_edge = _orient(n, edges, tree, i)
            flux_dirs[e, t] = dirs
            # cycle i -> j -> ... -> i: edge e upward, then the tree path from j down to i
            cycles[e, t, e] += 1
            v = j
            while v != i:
                parent, k = up_edge[v]
                cycles[e, t, k] += 1 if edges[k][0] == v else -1
                v = parent
    return edges, labels, np.array(weights), root_dirs, flux_dirs, cycles


def _log_rates(gap, bath):
    """log of (upward, downward) rates across a positive gap and their exact log ratio."""
    x = gap / bath.temperature
    log_n = -x - np.log(-np.expm1(-x))
    r = bath.squeezing
    if r > 0:
        n = np.exp(log_n)
        nr = n * np.cosh(2 * r) + np.sinh(r) ** 2
        log_n = np.log(nr)
        ratio = -np.log1p(1 / nr)
    else:
        ratio = -x
    base = np.log(bath.gamma0) + bath.dim * np.log(gap)
    return base + log_n, base + log_n - ratio, ratio


def diagram_currents(design, omega_c, omega_h, baths, g=0.0):
    """Steady-state populations and currents from the cycle-flux expansion.

    Every edge flux is a sum over spanning trees of positive weights times
    ``1 - exp(-A)`` for the affinity ``A`` of the cycle the tree closes,
    evaluated as ``-expm1(-A)`` from exact log rate ratios. Unlike solving
    for populations and differencing, this keeps full relative accuracy
    when the net flows are many orders below the gross transition rates.
    Scalar inputs only; all bath fields must be scalars.
    """
    design = Design(design)
    mixed = design is Design.THREE_QUBIT and g > 0
    coeffs, _ = population_transitions(design, mixed)
    edges, labels, weights, root_dirs, flux_dirs, cycles = _diagrams(design, mixed)
    energies = coeffs @ np.array([omega_c, omega_h, g], dtype=float)
    log_dir = np.empty(2 * len(edges))
    ratio = np.empty(len(edges))
    gaps = np.empty(len(edges))
    for k, ((i, j), label, w) in enumerate(zip(edges, labels, weights)):
        gap = energies[j] - energies[i]
        if gap == 0:
            raise InvalidSpec("diagram route needs nonzero transition gaps")
        up, down, lr = _log_rates(abs(gap), baths[label])
        if gap < 0:
            up, down, lr = down, up, -lr
        log_dir[2 * k], log_dir[2 * k + 1] = up + np.log(w), down + np.log(w)
        ratio[k], gaps[k] = lr, gap
    log_trees = log_dir[root_dirs].sum(axis=-1)
    shift = np.max(log_trees)
    z_root = np.exp(log_trees - shift).sum(axis=1)
    z = z_root.sum()
    log_flux = log_dir[flux_dirs].sum(axis=-1) + log_dir[0::2][:, None]
    affinity = cycles @ ratio
    flux = (np.exp(log_flux - shift) * -np.expm1(-affinity)).sum(axis=1) / z
    currents = {label: 0.0 for label in dict.fromkeys(labels)}
    for k, label in enumerate(labels):
        currents[label] += gaps[k] * flux[k]
    return PopulationResult(energies, z_root / z, currents)


# closed forms ----------------------------------------------------------------


def _three_level_rates(spec, baths):
    wc, wh, ww = spec.omega_c, spec.omega_h, spec.omega_w
    return dict(
        c=decay_rate(wc, baths["cold"]),
        mc=decay_rate(-wc, baths["cold"]),
        h=decay_rate(wh, baths["hot"]),
        mh=decay_rate(-wh, baths["hot"]),
        w=decay_rate(ww, baths["work"]),
        mw=decay_rate(-ww, baths["work"]),
    )


def _three_level_denominator(c, mc, h, mh, w, mw):
    return c * w + mh * w + mc * w + c * h + mw * h + mc * h + mh * c + mh * mw + mc * mw


def three_level_steady_populations(spec, baths):
    """Closed-form stationary populations (rho_11, rho_22, rho_33)."""
    if spec.design is not Design.THREE_LEVEL:
        raise InvalidSpec("closed form applies to the three-level design only")
    r = _three_level_rates(spec, baths)
    c, mc, h, mh, w, mw = r["c"], r["mc"], r["h"], r["mh"], r["w"], r["mw"]
    p1 = c * w + c * h + mw * h
    p2 = mh * w + mc * w + mc * h
    p3 = mh * c + mh * mw + mc * mw
    delta = p1 + p2 + p3
    return p1 / delta, p2 / delta, p3 / delta


def three_level_cooling_power(spec, baths):
    """Cold heat current of the three-level fridge.

    Thermal baths use the closed form; a squeezed work bath goes through
    the dense Liouvillian.
    """
    if spec.design is not Design.THREE_LEVEL:
        raise InvalidSpec("closed form applies to the three-level design only")
    if baths["work"].squeezed:
        return solve_fridge(spec, baths).currents["cold"]
    r = _three_level_rates(spec, baths)
    tc, th, tw = baths["cold"].temperature, baths["hot"].temperature, baths["work"].temperature
    wc, wh, ww = spec.omega_c, spec.omega_h, spec.omega_w
    balance = np.exp(-wc / tc - ww / tw) - np.exp(-wh / th)
    delta = _three_level_denominator(**r)
    return float(wc * r["h"] * r["w"] * r["c"] * balance / delta)


@dataclass
class TwoQubitBreakup:
    q1: float
    q2: float
    q1_closed: float
    q2_closed: float
    z01: tuple
    z10: tuple
    alpha: tuple
    denominators: tuple
    omegas: dict

    def component_currents(self, i):
        """Currents ``{label: Q}`` of the i-th (1 or 2) three-level component."""
        q = (self.q1, self.q2)[i - 1]
        return {"cold": self.omegas["cold"] * q, "hot": -self.omegas["hot"] * q, "work": self.omegas["work"] * q}

    @property
    def totals(self):
        s = self.q1 + self.q2
        return {"cold": self.omegas["cold"] * s, "hot": -self.omegas["hot"] * s, "work": self.omegas["work"] * s}

    @property
    def mismatch(self):
        """Largest relative gap between matrix-element and closed-form fluxes."""
        return max(
            abs(self.q1 - self.q1_closed) / max(abs(self.q1_closed), 1e-300),
            abs(self.q2 - self.q2_closed) / max(abs(self.q2_closed), 1e-300),
        )


def two_qubit_breakup(spec, baths, check_kernel=True):
    """Split the two-qubit currents into its two three-level cycles.

    Cycle 1 is ``|00> -> |01> -> |10> -> |00>`` and cycle 2 is
    ``|01> -> |10> -> |11> -> |01>`` (kets ordered hot, cold).
    """
    if spec.design is not Design.TWO_QUBIT:
        raise InvalidSpec("breakup applies to the two-qubit design only")
    if any(b.squeezed for b in baths.values()):
        raise DomainError("breakup is derived for thermal baths")
    sol = solve_fridge(spec, baths, check_kernel)
    n = 4
    lc = lindblad.unvec(sol.liouvillian.blocks["cold"] @ lindblad.vec(sol.rho), n)
    q1 = float(lc[1, 1].real)
    q2 = float(lc[3, 3].real)

    r = _three_level_rates(spec, baths)
    c, mc, h, mh, w, mw = r["c"], r["mc"], r["h"], r["mh"], r["w"], r["mw"]
    a1 = 1 / (h + c)
    a2 = 1 / (mh + mc)
    z01_1 = (h + c) / (h + c + mh)
    z10_1 = (h + c) / (h + c + mc)
    z01_2 = (mh + mc) / (mh + mc + h)
    z10_2 = (mh + mc) / (mh + mc + c)
    d1 = _three_level_denominator(
        c=z01_1 * c, mc=mc, h=z10_1 * h, mh=mh, w=z10_1 * (w + a1 * h * mc), mw=z01_1 * (mw + a1 * mh * c)
    )
    d2 = _three_level_denominator(
        c=z01_2 * mc, mc=c, h=z10_2 * mh, mh=h, w=z10_2 * (mw + a2 * mh * c), mw=z01_2 * (w + a2 * h * mc)
    )
    cycle = h * mw * mc - mh * w * c
    return TwoQubitBreakup(
        q1=q1,
        q2=q2,
        q1_closed=float(z01_1 * z10_1 * cycle / d1),
        q2_closed=float(z01_2 * z10_2 * cycle / d2),
        z01=(z01_1, z01_2),
        z10=(z10_1, z10_2),
        alpha=(a1, a2),
        denominators=(d1, d2),
        omegas={"cold": spec.omega_c, "hot": spec.omega_h, "work": spec.omega_w},
    )
