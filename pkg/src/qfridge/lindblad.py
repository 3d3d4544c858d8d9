"""LGKS generators, steady states and heat currents.

Density matrices are vectorised by stacking columns (Fortran order), so
``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import baths as _baths
from .numerics import (
    RESIDUAL_TOL,
    NotHermitian,
    dagger,
    hermitian_eigensystem,
    is_hermitian,
    kronecker,
    solve_linear,
)

FREQ_RTOL = 1e-9


class SolverError(ArithmeticError):
    pass


class DegenerateKernel(SolverError):
    pass


class NotSteady(SolverError):
    pass


@dataclass(frozen=True)
class JumpChannel:
    bath: str
    omega: float
    op: np.ndarray
    rate: float
    cross_rate: float = 0.0


@dataclass
class Liouvillian:
    h_wm: np.ndarray
    blocks: dict
    channels: list = field(default_factory=list)

    @property
    def dim(self):
        return self.h_wm.shape[0]

    @property
    def total(self):
        return sum(self.blocks.values())


def vec(rho):
    return np.asarray(rho, dtype=np.complex128).reshape(-1, order="F")


def unvec(v, n):
    return np.asarray(v).reshape((n, n), order="F")


def sandwich(a, b):
    """Superoperator of ``rho -> a @ rho @ b``."""
    return kronecker(np.asarray(b).T, a)


def _group(values, rtol, scale):
    """Cluster sorted reals whose gaps are below ``rtol * scale``."""
    groups = []
    for i in np.argsort(values, kind="stable"):
        if groups and abs(values[i] - values[groups[-1][-1]]) <= rtol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def eigenoperator_decomposition(h_wm, coupling, rtol=FREQ_RTOL):
    """Split ``coupling`` into eigenoperators of ``h_wm``.

    Returns ``[(omega, A), ...]`` sorted by omega, with
    ``[h_wm, A] = -omega A`` and ``sum(A) == coupling``. ``A(omega)`` lowers
    the energy by ``omega``.
    """
    if not is_hermitian(h_wm) or not is_hermitian(coupling):
        raise NotHermitian("h_wm and coupling must be Hermitian")
    energies, vecs = hermitian_eigensystem(h_wm)
    scale = max(np.max(np.abs(energies)), 1.0)
    levels = _group(energies, rtol, scale)
    projectors = []
    for idx in levels:
        v = vecs[:, idx]
        projectors.append((float(np.mean(energies[idx])), v @ dagger(v)))

    pieces = []
    for e_low, p_low in projectors:
        for e_high, p_high in projectors:
            a = p_low @ coupling @ p_high
            if np.max(np.abs(a)) > 1e-13 * max(np.max(np.abs(coupling)), 1e-300):
                pieces.append((e_high - e_low, a))
    if not pieces:
        return []
    omegas = np.array([w for w, _ in pieces])
    wscale = max(np.max(np.abs(omegas)), 1e-300)
    out = []
    for idx in _group(omegas, rtol, wscale):
        w = float(np.mean(omegas[idx]))
        if abs(w) <= rtol * wscale:
            w = 0.0
        out.append((w, sum(pieces[i][1] for i in idx)))
    return out


def lgks_superoperator(op, rate):
    """``rate * (A rho A^+ - {A^+ A, rho}/2)`` as an n^2 x n^2 matrix."""
    n = op.shape[0]
    eye = np.eye(n)
    ada = dagger(op) @ op
    return rate * (sandwich(op, dagger(op)) - 0.5 * sandwich(ada, eye) - 0.5 * sandwich(eye, ada))


def squeezing_superoperator(op, cross_rate):
    """``L (A rho A + A^+ rho A^+ - A^2 rho - rho A^+^2)`` as a matrix."""
    n = op.shape[0]
    eye = np.eye(n)
    ad = dagger(op)
    return cross_rate * (
        sandwich(op, op) + sandwich(ad, ad) - sandwich(op @ op, eye) - sandwich(eye, ad @ ad)
    )


def bath_channels(h_wm, coupling, bath):
    """Jump channels of one bath, with rates from the bath spectrum."""
    channels = []
    for w, a in eigenoperator_decomposition(h_wm, coupling):
        if w == 0.0:
            rate, cross = _baths.zero_frequency_rate(bath), 0.0
        else:
            rate = _baths.decay_rate(w, bath)
            cross = _baths.squeeze_cross_rate(w, bath) if bath.squeezed else 0.0
        channels.append(JumpChannel(bath.label, w, a, rate, cross))
    return channels


def dissipator(channels, n):
    out = np.zeros((n * n, n * n), dtype=np.complex128)
    for ch in channels:
        out += lgks_superoperator(ch.op, ch.rate)
        if ch.cross_rate:
            out += squeezing_superoperator(ch.op, ch.cross_rate)
    return out


def assemble_liouvillian(h_wm, couplings, baths):
    """Generator from a Hamiltonian, per-bath couplings and per-bath baths.

    ``couplings`` and ``baths`` are dicts keyed by bath label.
    """
    h_wm = np.asarray(h_wm, dtype=np.complex128)
    n = h_wm.shape[0]
    blocks, channels = {}, []
    for label, coupling in couplings.items():
        chans = bath_channels(h_wm, np.asarray(coupling, dtype=np.complex128), baths[label])
        blocks[label] = dissipator(chans, n)
        channels.extend(chans)
    return Liouvillian(h_wm, blocks, channels)


def build_liouvillian(spec, baths):
    """Liouvillian of a fridge design.

    ``spec`` is any object with a ``working_material()`` method returning
    ``(h_wm, couplings)``; ``baths`` maps labels to Bath objects.
    """
    h_wm, couplings = spec.working_material()
    return assemble_liouvillian(h_wm, couplings, baths)


def steady_state(liouv, gap_tol=1e-6, check_kernel=True):
    """Unique stationary density matrix of ``liouv.total``.

    One row of the generator is replaced by the trace condition and the
    square system is solved directly. The kernel check compares the
    second-smallest singular value with the largest; fridges whose rates
    span more than ``1/gap_tol`` trip it although their kernel is simple,
    and can skip it with ``check_kernel=False``.
    """
    n = liouv.dim
    total = liouv.total
    scale = np.max(np.abs(total))
    if scale == 0.0:
        raise DegenerateKernel("generator vanishes identically")
    gen = total / scale
    if check_kernel:
        s = np.linalg.svd(gen, compute_uv=False)
        if s[-2] < gap_tol * s[0]:
            raise DegenerateKernel(
                f"second-smallest singular value {s[-2]:.3e} suggests a degenerate kernel"
            )
    a = gen.copy()
    a[0, :] = vec(np.eye(n))
    b = np.zeros(n * n, dtype=np.complex128)
    b[0] = 1.0
    rho = unvec(solve_linear(a, b), n)
    rho = 0.5 * (rho + dagger(rho))
    resid = np.max(np.abs(gen @ vec(rho)))
    if resid > RESIDUAL_TOL:
        raise NotSteady(f"stationarity residual {resid:.3e}")
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest < -RESIDUAL_TOL:
        raise NotSteady(f"steady state has a negative eigenvalue {lowest:.3e}")
    return rho


def steady_residual(liouv, rho):
    """``max|L rho|`` relative to ``max|L|``."""
    total = liouv.total
    return float(np.max(np.abs(total @ vec(rho))) / np.max(np.abs(total)))


def heat_current(liouv, label, rho, check=True):
    """Energy per unit time flowing from bath ``label`` into the working material."""
    if check:
        resid = steady_residual(liouv, rho)
        if resid > RESIDUAL_TOL:
            raise NotSteady(f"rho is not stationary (residual {resid:.3e})")
    n = liouv.dim
    drho = unvec(liouv.blocks[label] @ vec(rho), n)
    q = np.trace(liouv.h_wm @ drho)
    scale = np.max(np.abs(liouv.h_wm)) * np.max(np.abs(liouv.blocks[label]))
    if abs(q.imag) > RESIDUAL_TOL * max(scale, abs(q.real)):
        raise NotSteady(f"heat current has imaginary part {q.imag:.3e}")
    return float(q.real)


def heat_currents(liouv, rho):
    return {label: heat_current(liouv, label, rho) for label in liouv.blocks}


def current_scale(liouv):
    """``max|L| max|H|``, the size round-off in a heat current is measured against."""
    return float(np.max(np.abs(liouv.total)) * np.max(np.abs(liouv.h_wm)))


def entropy_production(currents, temps):
    """``-sum Q_a / T_a`` over baths; both arguments are dicts keyed by label."""
    return float(-sum(currents[k] / temps[k] for k in currents))


def gibbs_state(h_wm, temperature):
    energies, vecs = hermitian_eigensystem(h_wm)
    p = np.exp(-(energies - energies[0]) / temperature)
    p /= p.sum()
    return (vecs * p) @ dagger(vecs)


# complete-positivity probes ------------------------------------------------


def kossakowski_blocks(channels):
    """2 x 2 coefficient matrices on ``(A(w), A(w)^+)`` for each w > 0 pair.

    Cross terms from both signs of the frequency are summed, so the
    off-diagonal entry is ``L(w) + L(-w)``.
    """
    out = []
    for ch in channels:
        if ch.omega < 0:
            continue
        if ch.omega == 0:
            out.append((ch.bath, 0.0, np.array([[ch.rate]])))
            continue
        tol = FREQ_RTOL * abs(ch.omega)
        partner = next(
            (p for p in channels if p.bath == ch.bath and abs(p.omega + ch.omega) <= tol), None
        )
        up = partner.rate if partner else 0.0
        cross = ch.cross_rate + (partner.cross_rate if partner else 0.0)
        out.append((ch.bath, ch.omega, np.array([[ch.rate, cross], [cross, up]])))
    return out


def kossakowski_positive(channels, tol=1e-10):
    for _, _, k in kossakowski_blocks(channels):
        scale = max(np.max(np.abs(k)), 1e-300)
        if np.min(np.linalg.eigvalsh(k)) < -tol * scale:
            return False
    return True


def choi_matrix(superop, n):
    """``sum_ij |i><j| (x) L(|i><j|)``."""
    c = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            image = unvec(superop[:, i + n * j], n)
            c[i * n : (i + 1) * n, j * n : (j + 1) * n] = image
    return c


def conditionally_completely_positive(superop, n, tol=1e-10):
    """GKSL test on the generator itself.

    ``L`` generates a CP semigroup iff its Choi matrix is Hermitian and
    positive on the complement of the maximally entangled vector.
    """
    c = choi_matrix(superop, n)
    scale = max(np.max(np.abs(c)), 1e-300)
    if np.max(np.abs(c - dagger(c))) > tol * scale:
        return False
    omega = np.eye(n).reshape(-1) / np.sqrt(n)
    proj = np.eye(n * n) - np.outer(omega, omega)
    m = proj @ c @ proj
    return bool(np.min(np.linalg.eigvalsh(0.5 * (m + dagger(m)))) >= -tol * scale)


def trace_preservation_error(superop, n):
    """``max|L^+ (identity)|``: zero for a trace-preserving generator."""
    return float(np.max(np.abs(dagger(superop) @ vec(np.eye(n)))))


def pauli_steady_state(rates):
    """Stationary populations of batched rate matrices.

    ``rates[..., j, i]`` is the transition rate i -> j (diagonal ignored).
    Returns ``p[..., n]`` summing to one.
    """
    w = np.array(rates, dtype=float)
    n = w.shape[-1]
    idx = np.arange(n)
    w[..., idx, idx] = 0.0
    w[..., idx, idx] = -w.sum(axis=-2)
    scale = np.max(np.abs(w), axis=(-2, -1), keepdims=True)
    a = w / scale
    a[..., -1, :] = 1.0
    b = np.zeros(w.shape[:-1])
    b[..., -1] = 1.0
    return np.linalg.solve(a, b[..., None])[..., 0]
