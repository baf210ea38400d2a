"""Dense complex Hermitian linear algebra for small operators.

Everything in this package runs through matrices of dimension <= 16
(qubit noise needs d = 2 and bipartite states d^2 = 4), so the kernel
favors robustness and explicit tolerances over throughput.

Basis convention for composite systems: the product ket |i>|k> sits at
row-major index ``i * d_second + k``.  The Bell vector (|00> + |11>)/sqrt(2)
is therefore (1, 0, 0, 1)/sqrt(2) in d = 2 x 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-10
DENSITY_PSD_TOL = 1e-10
MAX_DIM = 64

JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class EigenConvergenceError(RuntimeError):
    """Raised when the Jacobi iteration fails to reach the off-diagonal target."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


def as_complex_matrix(m) -> np.ndarray:
    """Coerce input to a square complex ndarray and enforce the dimension cap."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix dimension must be >= 1")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    return a


def as_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermiticity within ``tol`` and return the symmetrized matrix.

    Symmetrization only removes float-rounding noise; inputs violating the
    tolerance are rejected.
    """
    a = as_complex_matrix(m)
    asym = np.max(np.abs(a - a.conj().T))
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max |A - A^dag| = {asym:.3e} > {tol:.1e})")
    return 0.5 * (a + a.conj().T)


def as_density(m, trace_tol: float = DENSITY_TRACE_TOL, psd_tol: float = DENSITY_PSD_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -psd_tol."""
    a = as_hermitian(m)
    tr = a.trace().real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr!r} deviates from 1 by more than {trace_tol:.1e}")
    lo = eigh(a).eigenvalues[0]
    if lo < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e} < -{psd_tol:.1e}")
    return a


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the |i>|k> -> i*d_b + k index convention."""
    am = as_complex_matrix(a)
    bm = as_complex_matrix(b)
    if am.shape[0] * bm.shape[0] > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {am.shape[0] * bm.shape[0]} exceeds maximum {MAX_DIM}"
        )
    return np.kron(am, bm)


def partial_trace_first(m, dim_first: int, dim_second: int) -> np.ndarray:
    """Trace out the first tensor factor of a (dim_first*dim_second) square matrix."""
    a = as_complex_matrix(m)
    if dim_first < 1 or dim_second < 1:
        raise ValueError("subsystem dimensions must be >= 1")
    if a.shape[0] != dim_first * dim_second:
        raise ValueError(
            f"matrix dimension {a.shape[0]} != dim_first*dim_second = {dim_first * dim_second}"
        )
    blocks = a.reshape(dim_first, dim_second, dim_first, dim_second)
    return np.trace(blocks, axis1=0, axis2=2)


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition A = V diag(w) V^dag with w ascending and V unitary."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigh(h, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation zeroes one off-diagonal element a_pq: the phase of a_pq is
    absorbed into a diagonal unitary, then the classic inner rotation
    (|theta| <= pi/4, stable root of t^2 + 2*tau*t - 1 = 0) annihilates the
    remaining real coupling.  Sweeps stop once the off-diagonal Frobenius
    mass drops below 1e-14; exceeding the 100-sweep cap raises
    EigenConvergenceError carrying the residual.
    """
    a = as_hermitian(h, tol=tol).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return EigenDecomposition(np.array([a[0, 0].real]), v)

    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                inv_phase = apq.conjugate() / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # unitary restricted to the (p,q) plane:
                #   G = [[c, s], [-s*e^{-i phi}, c*e^{-i phi}]], phi = arg(a_pq)
                gqp = -s * inv_phase
                gqq = c * inv_phase
                colp = c * a[:, p] + gqp * a[:, q]
                colq = s * a[:, p] + gqq * a[:, q]
                a[:, p] = colp
                a[:, q] = colq
                rowp = c * a[p, :] + gqp.conjugate() * a[q, :]
                rowq = s * a[p, :] + gqq.conjugate() * a[q, :]
                a[p, :] = rowp
                a[q, :] = rowq
                vp = c * v[:, p] + gqp * v[:, q]
                vq = s * v[:, p] + gqq * v[:, q]
                v[:, p] = vp
                v[:, q] = vq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise EigenConvergenceError(_offdiag_norm(a), JACOBI_MAX_SWEEPS)

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def trace_norm(h) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(eigh(h).eigenvalues).sum())


def trace_inner(a, b) -> float:
    """Re tr(ab) for Hermitian a, b (the Born-rule pairing of operator and state)."""
    am = as_hermitian(a)
    bm = as_hermitian(b)
    if am.shape != bm.shape:
        raise ValueError(f"dimension mismatch: {am.shape[0]} vs {bm.shape[0]}")
    # tr(ab) = sum_ij a_ij b_ji; Hermiticity makes it real up to rounding
    return float(np.sum(am * bm.T).real)


def projector(vec) -> np.ndarray:
    """Rank-one projector |v><v| for a normalized vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
