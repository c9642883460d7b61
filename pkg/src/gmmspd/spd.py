"""Affine-invariant geometry on symmetric positive definite matrices.

The manifold SPD(n) of symmetric positive definite matrices carries the
affine-invariant Riemannian metric, invariant under congruence
P -> G^T P G for any invertible G.  Under this metric the geodesic
distance, geodesics, and exponential/logarithmic maps all have closed
forms built from the matrix square root, logarithm, and power:

    d(A, B)   = ||log(A^{-1/2} B A^{-1/2})||_F
    gamma(t)  = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}
    Exp_A(X)  = A^{1/2} exp(A^{-1/2} X A^{-1/2}) A^{1/2}
    Log_A(B)  = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}

Two scale conventions coexist in the literature: the plain Frobenius
norm of the matrix logarithm, and the distance induced by the
differential metric ds^2 = (1/2) Tr{(S^{-1} dS)^2}, which is smaller by
a factor sqrt(1/2).  Both are exposed through the ``scale`` argument
("frobenius" / "half_trace").

Every matrix function here goes through a single symmetric
eigendecomposition path; inputs are symmetrized as (M + M^T)/2 before
decomposition.  Functions accept ``SpdMatrix`` instances or plain
arrays and return plain ndarrays; wrap results in ``SpdMatrix`` when
construction-time validation is wanted.

The Jensen-Bregman LogDet distance delta(P, Q) = sqrt(J(P, Q)) with
J(P, Q) = logdet((P + Q)/2) - (1/2) logdet(PQ) is included as a
baseline for classification experiments.
"""

from __future__ import annotations

import math

import numpy as np

FROBENIUS = "frobenius"
HALF_TRACE = "half_trace"

#: Default relative eigenvalue floor used when forming matrix powers.
DEFAULT_EPSILON_REL = 1e-10


def _scale_factor(scale: str) -> float:
    if scale == FROBENIUS:
        return 1.0
    if scale == HALF_TRACE:
        return math.sqrt(0.5)
    raise ValueError(f"unknown metric scale {scale!r}; use {FROBENIUS!r} or {HALF_TRACE!r}")


def symmetrize(m) -> np.ndarray:
    """Exact symmetric part (M + M^T)/2 of a square matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return 0.5 * (m + m.T)


class SpdMatrix:
    """A validated symmetric positive definite matrix.

    The stored entries are exactly symmetric (symmetrized on
    construction) and the smallest eigenvalue must be strictly
    positive; construction fails otherwise.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = symmetrize(entries)
        if not np.all(np.isfinite(m)):
            raise ValueError("SPD matrix entries must be finite")
        w = np.linalg.eigvalsh(m)
        if w[0] <= 0.0:
            raise ValueError(f"matrix is not positive definite (min eigenvalue {w[0]:g})")
        m.setflags(write=False)
        self.entries = m

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.entries.astype(dtype)
        return self.entries

    def __repr__(self):
        return f"SpdMatrix(dim={self.dim})"


def _as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def _check_same_dim(p: np.ndarray, q: np.ndarray) -> None:
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")


def eigh(s):
    """Eigendecomposition of the symmetrized input.

    Returns (eigenvalues ascending, orthogonal eigenvectors) with
    V diag(w) V^T reconstructing the input.  Raises
    ``numpy.linalg.LinAlgError`` if the eigensolver fails to converge.
    """
    return np.linalg.eigh(symmetrize(s))


def spd_sqrt_inv_sqrt(s, epsilon_rel: float = DEFAULT_EPSILON_REL):
    """Matrix square root and inverse square root of an SPD matrix.

    Eigenvalues are floored at ``epsilon_rel`` times the largest
    eigenvalue before taking the +-1/2 powers, which keeps near-singular
    inputs finite without disturbing well-conditioned ones.
    """
    if epsilon_rel < 0:
        raise ValueError("epsilon_rel must be >= 0")
    w, v = eigh(s)
    w = np.maximum(w, epsilon_rel * w[-1])
    sq = np.sqrt(w)
    half = (v * sq) @ v.T
    neg_half = (v / sq) @ v.T
    return symmetrize(half), symmetrize(neg_half)


def _clipped_log(w: np.ndarray) -> np.ndarray:
    # guards log(0) from eigenvalues that underflow to zero; valid SPD
    # inputs never get near this floor
    return np.log(np.maximum(w, 1e-300))


def affine_distance(p, q, scale: str = FROBENIUS) -> float:
    """Geodesic distance between two SPD matrices.

    ||log(P^{-1/2} Q P^{-1/2})||_F, multiplied by sqrt(1/2) when
    ``scale`` is "half_trace".
    """
    p = _as_square(p, "P")
    q = _as_square(q, "Q")
    _check_same_dim(p, q)
    _, p_neg_half = spd_sqrt_inv_sqrt(p)
    inner = symmetrize(p_neg_half @ q @ p_neg_half)
    w = np.linalg.eigvalsh(inner)
    return _scale_factor(scale) * float(np.linalg.norm(_clipped_log(w)))


def affine_distance_presqrt(p_neg_half, q, scale: str = FROBENIUS) -> float:
    """Distance given a precomputed inverse square root of P.

    Same value as ``affine_distance(P, Q, scale)``; used to batch many
    distances against one fixed P.
    """
    p_neg_half = _as_square(p_neg_half)
    q = _as_square(q, "Q")
    _check_same_dim(p_neg_half, q)
    inner = symmetrize(p_neg_half @ q @ p_neg_half)
    w = np.linalg.eigvalsh(inner)
    return _scale_factor(scale) * float(np.linalg.norm(_clipped_log(w)))


def geodesic_point(a, b, t: float) -> np.ndarray:
    """Point gamma(t) on the geodesic from A (t=0) to B (t=1)."""
    a = _as_square(a, "A")
    b = _as_square(b, "B")
    _check_same_dim(a, b)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"geodesic parameter t={t} outside [0, 1]")
    a_half, a_neg_half = spd_sqrt_inv_sqrt(a)
    inner = symmetrize(a_neg_half @ b @ a_neg_half)
    w, v = np.linalg.eigh(inner)
    powered = (v * np.maximum(w, 1e-300) ** t) @ v.T
    return symmetrize(a_half @ powered @ a_half)


def exp_map(a, x) -> np.ndarray:
    """Riemannian exponential of tangent vector X (symmetric) at A."""
    a = _as_square(a, "A")
    x = _as_square(x, "X")
    _check_same_dim(a, x)
    a_half, a_neg_half = spd_sqrt_inv_sqrt(a)
    inner = symmetrize(a_neg_half @ x @ a_neg_half)
    w, v = np.linalg.eigh(inner)
    e = (v * np.exp(w)) @ v.T
    return symmetrize(a_half @ e @ a_half)


def log_map(a, b) -> np.ndarray:
    """Riemannian logarithm of B at A; inverse of ``exp_map``."""
    a = _as_square(a, "A")
    b = _as_square(b, "B")
    _check_same_dim(a, b)
    a_half, a_neg_half = spd_sqrt_inv_sqrt(a)
    inner = symmetrize(a_neg_half @ b @ a_neg_half)
    w, v = np.linalg.eigh(inner)
    lg = (v * _clipped_log(w)) @ v.T
    return symmetrize(a_half @ lg @ a_half)


def jbld_distance(p, q) -> float:
    """Jensen-Bregman LogDet distance sqrt(J(P, Q)).

    J(P, Q) = logdet((P + Q)/2) - (1/2)(logdet P + logdet Q); the
    square root of J is a metric on SPD matrices.
    """
    p = _as_square(p, "P")
    q = _as_square(q, "Q")
    _check_same_dim(p, q)
    _, ld_mid = np.linalg.slogdet(0.5 * (p + q))
    _, ld_p = np.linalg.slogdet(p)
    _, ld_q = np.linalg.slogdet(q)
    j = ld_mid - 0.5 * (ld_p + ld_q)
    return math.sqrt(max(j, 0.0))
