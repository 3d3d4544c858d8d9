"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays. Everything here is meant for
working materials of at most eight levels, i.e. superoperators no larger
than 64 x 64, so clarity wins over speed.
"""
import warnings

import numpy as np
from scipy import linalg as sla

PIVOT_TOL = 1e-14
HERMITIAN_TOL = 1e-12
RESIDUAL_TOL = 1e-10


class NumericsError(ArithmeticError):
    pass


class SingularMatrix(NumericsError):
    pass


class NotHermitian(NumericsError):
    pass


def as_matrix(a):
    """Return ``a`` as a 2-D complex128 array (no copy when possible)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def dagger(a):
    return np.conj(a).T


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        return False
    scale = np.max(np.abs(h)) if h.size else 0.0
    return bool(np.max(np.abs(h - dagger(h)), initial=0.0) <= tol * scale)


def kronecker(a, b):
    """Tensor product with the usual block layout.

    ``(a x b)[i*rb + k, j*cb + l] == a[i, j] * b[k, l]``.
    """
    return np.kron(as_matrix(a), as_matrix(b))


def solve_linear(a, b):
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Raises SingularMatrix when a pivot falls below ``PIVOT_TOL * max|a|``.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    b = np.asarray(b, dtype=np.complex128)
    scale = np.max(np.abs(a))
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < PIVOT_TOL * scale:
        raise SingularMatrix(
            f"pivot {np.min(pivots):.3e} below {PIVOT_TOL:g} * max|a| = {PIVOT_TOL * scale:.3e}"
        )
    return sla.lu_solve((lu, piv), b)


def _rotate(a, v, p, q):
    """One complex Jacobi rotation annihilating a[p, q] (in place)."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase the q column to make the pivot real, then a real rotation
    u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ u
    a[idx, :] = dagger(u) @ a[idx, :]
    v[:, idx] = v[:, idx] @ u
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def hermitian_eigensystem(h, max_sweeps=60):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Cyclic Jacobi sweeps. Column ``k`` of the returned matrix is the
    eigenvector for eigenvalue ``k``.
    """
    h = as_matrix(h)
    n = h.shape[0]
    if h.shape[1] != n:
        raise NotHermitian(f"matrix must be square, got {h.shape}")
    if not is_hermitian(h):
        raise NotHermitian("max|h - h^dagger| exceeds tolerance")
    a = 0.5 * (h + dagger(h))
    v = np.eye(n, dtype=np.complex128)
    scale = np.max(np.abs(a), initial=0.0)
    thresh = 1e-17 * scale
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a)))
        if np.max(off, initial=0.0) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > thresh:
                    _rotate(a, v, p, q)
    else:
        raise NumericsError("Jacobi iteration did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
