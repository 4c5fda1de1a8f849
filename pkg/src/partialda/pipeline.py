"""The alternating adaptation loop and its single-shot baseline.

One round first learns a projection for the current target soft labels and
class weights, then rebuilds the cross-domain graph in the projected space,
down-weights source samples from low-mass classes and re-propagates labels.
Class weights are re-estimated from every fresh propagation, so source
classes absent from the target lose their influence over the rounds instead
of dragging the projection toward them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alignment import (
    ClassWeights,
    apply_mask,
    binarize_weights,
    build_center_operators,
    build_m0,
    build_mc,
    build_mp,
    combine,
    compute_class_weights,
    source_sample_weights,
)
from .core import AdaptationConfig, as_feature_matrix, check_label_matrix, hard_labels
from .errors import AdaptationError, ConfigurationError, ValidationError
from .graph import build_graph, propagate, reweight_graph
from .subspace import Projection, embed, gram_matrix, projection_objective, solve_projection


@dataclass(frozen=True)
class IterationRecord:
    """Per-round diagnostics of the adaptation loop."""

    objective: float
    label_change_fraction: float
    surviving_classes: int
    mask_fallbacks: int
    graph_fallbacks: int


@dataclass(frozen=True)
class AdaptationResult:
    """Final state of a run: labels, weights, projection and history."""

    projection: Projection | None
    soft_labels: np.ndarray
    hard_labels: np.ndarray
    class_weights: ClassWeights
    history: list[IterationRecord] = field(default_factory=list)
    iterations_run: int = 0


def label_change_fraction(previous, current) -> float:
    """Fraction of positions whose hard label differs between two snapshots."""
    previous = np.asarray(previous)
    current = np.asarray(current)
    if previous.shape != current.shape or previous.ndim != 1:
        raise ValidationError(
            f"length mismatch between label snapshots: {previous.shape} vs {current.shape}"
        )
    if previous.size == 0:
        raise ValidationError("empty input")
    return float(np.mean(previous != current))


def _validated_inputs(x_s, y_s, x_t):
    x_s = as_feature_matrix(x_s, "source features")
    x_t = as_feature_matrix(x_t, "target features")
    if x_s.shape[0] != x_t.shape[0]:
        raise ValidationError(
            f"source and target feature dimensions differ: {x_s.shape[0]} vs {x_t.shape[0]}"
        )
    y_s = check_label_matrix(y_s, n_samples=x_s.shape[1])
    return x_s, y_s, x_t


def adapt(x_s, y_s, x_t, config: AdaptationConfig | None = None) -> AdaptationResult:
    """Adapt source knowledge to a target domain covering fewer classes.

    Parameters
    ----------
    x_s : ndarray (d, n_s)
        Source features, one column per sample.
    y_s : ndarray (n_s, C)
        One-hot source labels; every class must occur.
    x_t : ndarray (d, n_t)
        Target features in the same coordinate system.
    config : AdaptationConfig, optional
        Loop parameters; defaults are used when omitted.

    Returns
    -------
    AdaptationResult
        Final soft and hard target labels, masked class weights, the last
        projection and one IterationRecord per completed round.

    Notes
    -----
    The run is deterministic: identical inputs give identical outputs.
    Errors raised inside round ``i`` carry an ``iteration i:`` prefix.
    """
    config = config or AdaptationConfig()
    x_s, y_s, x_t = _validated_inputs(x_s, y_s, x_t)
    n_s, n_t = x_s.shape[1], x_t.shape[1]
    dim_available = x_s.shape[0] if config.kernel == "none" else n_s + n_t
    if config.k > dim_available:
        raise ConfigurationError(
            f"k={config.k} exceeds the available dimension {dim_available} "
            f"for kernel={config.kernel!r}"
        )
    source_classes = np.argmax(y_s, axis=1)
    data = gram_matrix(np.hstack([x_s, x_t]), config.kernel)

    g0 = build_graph(x_s, x_t, config.sigma)
    p = propagate(g0, y_s)
    weights = binarize_weights(compute_class_weights(p), config.delta)
    hard_prev = hard_labels(p)

    history: list[IterationRecord] = []
    proj: Projection | None = None
    for it in range(1, config.max_iterations + 1):
        try:
            p_masked, mask_fallbacks = apply_mask(p, weights)
            omega = source_sample_weights(weights, y_s, binary=config.binary_sample_weights)
            m0 = build_m0(omega, n_t)
            ops = build_center_operators(x_s, y_s, p_masked)
            mp = build_mp(ops)
            mc = build_mc(y_s, p_masked)
            m_all = combine(m0, mp, mc, config.alpha_p, config.alpha_c)
            proj = solve_projection(data, m_all, config.lam, config.k, config.rhs_reg)

            z = embed(proj, data)
            g = build_graph(z[:, :n_s], z[:, n_s:], config.sigma)
            g, graph_fallbacks = reweight_graph(g, weights, source_classes)
            p = propagate(g, y_s)
            weights = binarize_weights(compute_class_weights(p), config.delta)
            hard = hard_labels(p)

            fraction = label_change_fraction(hard_prev, hard)
            history.append(IterationRecord(
                objective=projection_objective(proj, data, m_all, config.lam),
                label_change_fraction=fraction,
                surviving_classes=weights.surviving,
                mask_fallbacks=mask_fallbacks,
                graph_fallbacks=graph_fallbacks,
            ))
            hard_prev = hard
        except AdaptationError as exc:
            raise type(exc)(f"iteration {it}: {exc}") from exc
        if fraction <= config.convergence_tol:
            break
    return AdaptationResult(
        projection=proj,
        soft_labels=p,
        hard_labels=hard_prev,
        class_weights=weights,
        history=history,
        iterations_run=len(history),
    )


def baseline_propagate(x_s, y_s, x_t, sigma: float = 0.1) -> AdaptationResult:
    """Single unweighted propagation on the original features, no projection.

    This reproduces the initialization of :func:`adapt` and serves as the
    reference point when judging whether adaptation helped.
    """
    x_s, y_s, x_t = _validated_inputs(x_s, y_s, x_t)
    g = build_graph(x_s, x_t, sigma)
    p = propagate(g, y_s)
    return AdaptationResult(
        projection=None,
        soft_labels=p,
        hard_labels=hard_labels(p),
        class_weights=compute_class_weights(p),
        history=[],
        iterations_run=0,
    )
