"""Alignment matrices coupling source and target samples.

Three symmetric matrices of size (n_s + n_t) drive the subspace solver:

* a domain term for the squared distance between the weighted source mean
  and the target mean,
* a center term for the squared distance between each projected target
  sample and its probability-weighted combination of source class centers,
* a cluster term contracting every projected sample toward its class
  center, with target memberships taken from the current soft labels.

Each builder returns a plain symmetric ndarray M such that the loss it
encodes equals ``trace(A.T @ X @ M @ X.T @ A)`` for a projection A and the
column-per-sample matrix ``X = [X_s | X_t]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError, ValidationError

# Class soft mass below this triggers a ridge on indicator Gram inversions.
RIDGE_TRIGGER = 1e-8
RIDGE_SCALE = 1e-9


@dataclass(frozen=True)
class ClassWeights:
    """Continuous class weights together with the surviving-class mask."""

    weights: np.ndarray
    mask: np.ndarray

    @property
    def masked(self) -> np.ndarray:
        return self.weights * self.mask

    @property
    def surviving(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class CenterOperators:
    """Reusable pieces of the center and cluster terms.

    y_st reconstructs each target sample from source class centers:
    ``X_s @ y_st`` has one expected center per target column.  y_c is the
    (possibly ridged) projector onto the span of the stacked class
    indicators.  mu holds the hard-label source class means, one column
    per class.
    """

    y_st: np.ndarray
    y_c: np.ndarray
    mu: np.ndarray


def symmetrize(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2.0


def compute_class_weights(p) -> ClassWeights:
    """Estimated target class proportions from a soft label matrix.

    Row sums of ``p`` are normalized to sum to one.  The mask starts as all
    ones; thresholding happens in :func:`binarize_weights`.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise ValidationError(f"soft labels must be 2-dimensional, got shape {p.shape}")
    total = p.sum()
    if total <= 0:
        raise ValidationError("soft label matrix sums to zero, cannot derive class weights")
    w = p.sum(axis=1) / total
    return ClassWeights(weights=w, mask=np.ones(w.size))


def binarize_weights(w: ClassWeights, delta: float) -> ClassWeights:
    """Zero out classes whose weight does not exceed ``delta``.

    Surviving weights are kept as-is, deliberately not renormalized, so a
    weight of exactly 0 stays 0 and the operation is idempotent.
    """
    if delta < 0:
        raise ConfigurationError(f"delta must be non-negative, got {delta}")
    mask = (w.weights > delta).astype(float)
    if mask.sum() == 0:
        raise ConfigurationError(
            f"no class survives threshold delta={delta} "
            f"(largest class weight is {w.weights.max()})"
        )
    return ClassWeights(weights=w.weights * mask, mask=mask)


def source_sample_weights(w: ClassWeights, y_s, binary: bool = False) -> np.ndarray:
    """Per-sample weights: each source sample inherits its class weight.

    With ``binary=True`` the 0/1 mask is used instead of the masked
    continuous weights.
    """
    y_s = np.asarray(y_s, dtype=float)
    values = w.mask if binary else w.masked
    if y_s.ndim != 2 or y_s.shape[1] != values.size:
        raise ValidationError(
            f"label matrix shape {y_s.shape} does not match {values.size} class weights"
        )
    omega = y_s @ values
    if omega.sum() <= 0:
        raise ConfigurationError(
            "all source sample weights are zero; every sample belongs to a masked class"
        )
    return omega


def build_m0(omega, n_t: int) -> np.ndarray:
    """Weighted mean-discrepancy matrix.

    Encodes the squared distance between the omega-weighted source mean and
    the plain target mean: with S the weight total, the source block is
    ``omega_i * omega_j / S**2``, the target block ``1 / n_t**2`` and the
    cross blocks ``-omega_i / (S * n_t)``.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size == 0:
        raise ValidationError("omega must be a non-empty vector")
    if (omega < 0).any():
        raise ValidationError("omega entries must be non-negative")
    if n_t < 1:
        raise ValidationError(f"n_t must be >= 1, got {n_t}")
    total = omega.sum()
    if total <= 0:
        raise ValidationError("omega sums to zero")
    e = np.concatenate([omega / total, -np.ones(n_t) / n_t])
    return symmetrize(np.outer(e, e))


def _ridge_eps(gram: np.ndarray, soft_mass: np.ndarray) -> float:
    """Ridge added to an indicator Gram matrix when some class lost its mass."""
    if soft_mass.min() < RIDGE_TRIGGER:
        return RIDGE_SCALE * float(np.mean(np.diag(gram)))
    return 0.0


def solve_gram_system(gram: np.ndarray, rhs: np.ndarray, eps: float) -> np.ndarray:
    """Solve ``(gram + eps I) x = rhs`` for an indicator Gram matrix."""
    g = gram + eps * np.eye(gram.shape[0])
    try:
        out = np.linalg.solve(g, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"class indicator Gram matrix is singular even after ridge {eps:g}"
        ) from exc
    if not np.isfinite(out).all():
        raise NumericalError("class indicator Gram system produced non-finite values")
    return out


def _class_projector(y_s: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Projector onto the span of stacked class indicators [Y_s; P.T]."""
    y = np.vstack([y_s, p.T])
    gram = y.T @ y
    eps = _ridge_eps(gram, p.sum(axis=1))
    return y @ solve_gram_system(gram, y.T, eps)


def build_center_operators(x_s, y_s, p) -> CenterOperators:
    """Class means and the two indicator operators shared by the loss terms.

    Parameters
    ----------
    x_s : ndarray (d, n_s)
        Source features, one column per sample.
    y_s : ndarray (n_s, C)
        One-hot source labels.
    p : ndarray (C, n_t)
        Soft target labels, already masked.
    """
    x_s = np.asarray(x_s, dtype=float)
    y_s = np.asarray(y_s, dtype=float)
    p = np.asarray(p, dtype=float)
    if x_s.shape[1] != y_s.shape[0] or y_s.shape[1] != p.shape[0]:
        raise ValidationError(
            f"inconsistent shapes: features {x_s.shape}, labels {y_s.shape}, soft labels {p.shape}"
        )
    counts = y_s.sum(axis=0)
    if (counts == 0).any():
        c = int(np.flatnonzero(counts == 0)[0])
        raise ValidationError(f"class {c} has no source samples")
    mu = (x_s @ y_s) / counts
    gram = y_s.T @ y_s
    eps = _ridge_eps(gram, p.sum(axis=1))
    y_st = y_s @ solve_gram_system(gram, p, eps)
    y_c = _class_projector(y_s, p)
    return CenterOperators(y_st=y_st, y_c=y_c, mu=mu)


def build_mp(ops: CenterOperators) -> np.ndarray:
    """Center term: distance of each target sample to its expected source center.

    Block form ``[[Y_st Y_st.T, -Y_st], [-Y_st.T, I]]`` so that
    ``trace(A.T X M X.T A) = ||A.T (X_t - X_s Y_st)||_F**2``.
    """
    y_st = np.asarray(ops.y_st, dtype=float)
    n_t = y_st.shape[1]
    m = np.block([
        [y_st @ y_st.T, -y_st],
        [-y_st.T, np.eye(n_t)],
    ])
    return symmetrize(m)


def build_mc(y_s, p) -> np.ndarray:
    """Cluster term contracting every sample toward its class center.

    Built from the projector Y_c onto stacked class indicators as
    ``(I - Y_c)(I - Y_c).T``, positive semidefinite by construction.
    """
    y_s = np.asarray(y_s, dtype=float)
    p = np.asarray(p, dtype=float)
    if y_s.ndim != 2 or p.ndim != 2 or y_s.shape[1] != p.shape[0]:
        raise ValidationError(
            f"label matrix shape {y_s.shape} does not match soft labels {p.shape}"
        )
    n = y_s.shape[0] + p.shape[1]
    residual = np.eye(n) - _class_projector(y_s, p)
    return symmetrize(residual @ residual.T)


def apply_mask(p, w: ClassWeights) -> tuple[np.ndarray, int]:
    """Zero the soft label rows of masked classes.

    Columns are not renormalized.  A column left all-zero is replaced by the
    uniform distribution over surviving classes; the number of such columns
    is returned alongside the masked matrix.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != w.mask.size:
        raise ValidationError(
            f"soft labels shape {p.shape} does not match {w.mask.size} classes"
        )
    masked = p * w.mask[:, None]
    dead = masked.sum(axis=0) == 0.0
    n_dead = int(dead.sum())
    if n_dead:
        survivors = w.mask.sum()
        if survivors == 0:
            raise ConfigurationError("cannot repair empty columns, no class survives the mask")
        masked[:, dead] = (w.mask / survivors)[:, None]
    return masked, n_dead


def combine(m0, mp, mc, alpha_p: float, alpha_c: float) -> np.ndarray:
    """Weighted sum of the three alignment terms."""
    m0 = np.asarray(m0, dtype=float)
    mp = np.asarray(mp, dtype=float)
    mc = np.asarray(mc, dtype=float)
    if not (m0.shape == mp.shape == mc.shape) or m0.ndim != 2:
        raise ValidationError(
            f"alignment matrices disagree in shape: {m0.shape}, {mp.shape}, {mc.shape}"
        )
    if alpha_p < 0 or alpha_c < 0:
        raise ValidationError("alpha_p and alpha_c must be non-negative")
    return symmetrize(m0 + alpha_p * mp + alpha_c * mc)
