"""Projection learning via a symmetric-definite generalized eigenproblem.

Given the combined alignment matrix M and the data matrix Z (raw features
or a linear kernel), the projection A stacks the eigenvectors of

    (Z M Z.T + lam I) a = phi (Z H Z.T + eps_r I) a

belonging to the k smallest eigenvalues, where H is the centering matrix.
Minimizing the alignment losses subject to unit projected variance amounts
to exactly this pencil, so the smallest eigenvalues are the right end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import KERNELS
from .errors import NumericalError, ValidationError
from .alignment import symmetrize


@dataclass(frozen=True)
class KernelizedData:
    """Data matrix fed to the solver plus its centering matrix.

    mode is "raw" when matrix holds the (d, n) features themselves and
    "kernel" when it holds the (n, n) Gram matrix of inner products.
    """

    matrix: np.ndarray
    h: np.ndarray
    mode: str
    n_samples: int


@dataclass(frozen=True)
class Projection:
    """Learned projection with its eigenvalues, ascending."""

    a: np.ndarray
    eigenvalues: np.ndarray
    mode: str


def centering_matrix(n: int) -> np.ndarray:
    """The n x n matrix I - (1/n) 11' that removes the column mean."""
    if n < 1:
        raise ValidationError(f"centering matrix needs n >= 1, got {n}")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def gram_matrix(x, kernel: str = "none") -> KernelizedData:
    """Wrap features for the solver, optionally as a linear kernel.

    With ``kernel="none"`` the features pass through untouched; with
    ``"linear"`` the (n, n) matrix of inner products replaces them and the
    projection is later expressed in sample coordinates.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValidationError(f"features must be 2-dimensional, got shape {x.shape}")
    if kernel not in KERNELS:
        raise ValidationError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    n = x.shape[1]
    if kernel == "linear":
        return KernelizedData(matrix=symmetrize(x.T @ x), h=centering_matrix(n),
                              mode="kernel", n_samples=n)
    return KernelizedData(matrix=x, h=centering_matrix(n), mode="raw", n_samples=n)


def generalized_eigh(lhs: np.ndarray, rhs: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k smallest eigenpairs of the symmetric pencil ``lhs a = phi rhs a``.

    rhs must be positive definite.  Eigenvalues come back ascending and each
    eigenvector is scaled so its largest-magnitude entry is positive, which
    pins down the sign deterministically.
    """
    dim = lhs.shape[0]
    if k < 1 or k > dim:
        raise ValidationError(
            f"k={k} exceeds the {dim} numerically valid eigenpairs; use a smaller k"
        )
    try:
        phi, vecs = scipy.linalg.eigh(lhs, rhs)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            "generalized eigensolver failed "
            f"(cond lhs {np.linalg.cond(lhs):.3e}, cond rhs {np.linalg.cond(rhs):.3e}): {exc}"
        ) from exc
    phi_k = phi[:k]
    a = vecs[:, :k].copy()
    if not (np.isfinite(phi_k).all() and np.isfinite(a).all()):
        n_ok = int(np.isfinite(phi).cumprod().sum())
        raise NumericalError(
            f"only {n_ok} numerically valid eigenpairs "
            f"(cond lhs {np.linalg.cond(lhs):.3e}, cond rhs {np.linalg.cond(rhs):.3e}); "
            "use a smaller k"
        )
    flip = a[np.argmax(np.abs(a), axis=0), np.arange(k)] < 0
    a[:, flip] *= -1.0
    return phi_k, a


def solve_projection(data: KernelizedData, m_all, lam: float, k: int,
                     rhs_reg: float = 1e-6) -> Projection:
    """Learn the k-dimensional projection for a combined alignment matrix.

    Parameters
    ----------
    data : KernelizedData
        Output of :func:`gram_matrix`.
    m_all : ndarray (n, n)
        Symmetric combined alignment matrix.
    lam : float
        Positive ridge on the projection columns.
    k : int
        Number of eigenvectors, at most the row count of the data matrix.
    rhs_reg : float
        The constraint side receives ``rhs_reg * trace(Z H Z.T) / n`` on its
        diagonal so the pencil stays definite.

    Raises
    ------
    ValidationError
        On shape mismatches or an infeasible ``k``.
    NumericalError
        When the eigensolver fails or returns non-finite values.
    """
    z = np.asarray(data.matrix, dtype=float)
    m_all = np.asarray(m_all, dtype=float)
    n = data.n_samples
    if m_all.shape != (n, n):
        raise ValidationError(
            f"alignment matrix shape {m_all.shape} does not match {n} samples"
        )
    if lam <= 0:
        raise ValidationError(f"lam must be positive, got {lam}")
    dim = z.shape[0]
    if k > dim:
        raise ValidationError(
            f"k={k} exceeds the {dim} numerically valid eigenpairs; use a smaller k"
        )
    lhs = symmetrize(z @ m_all @ z.T) + lam * np.eye(dim)
    zhz = symmetrize(z @ data.h @ z.T)
    variance = float(np.trace(zhz))
    floor = n * np.finfo(float).eps * max(1.0, float(np.sum(z * z)))
    if variance <= floor:
        raise NumericalError(
            f"centered data has no variance (trace {variance:.3e}); "
            "the constraint side cannot be regularized"
        )
    eps_r = rhs_reg * variance / n
    rhs = zhz + eps_r * np.eye(dim)
    phi, a = generalized_eigh(lhs, rhs, k)
    return Projection(a=a, eigenvalues=phi, mode=data.mode)


def embed(proj: Projection, data: KernelizedData) -> np.ndarray:
    """Project every sample into the learned subspace, one column each."""
    if proj.mode != data.mode:
        raise ValidationError(
            f"projection mode {proj.mode!r} does not match data mode {data.mode!r}"
        )
    if proj.a.shape[0] != data.matrix.shape[0]:
        raise ValidationError(
            f"projection rows {proj.a.shape[0]} do not match data rows {data.matrix.shape[0]}"
        )
    return proj.a.T @ data.matrix


def projection_objective(proj: Projection, data: KernelizedData, m_all,
                         lam: float) -> float:
    """Value of trace(A.T Z M Z.T A) + lam ||A||_F^2 for a learned projection."""
    e = proj.a.T @ data.matrix
    return float(np.sum((e @ np.asarray(m_all, dtype=float)) * e) + lam * np.sum(proj.a ** 2))
