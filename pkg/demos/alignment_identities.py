"""
Alignment matrices are quadratic losses in disguise
===================================================

The projection step minimizes three geometric losses at once: the gap
between the weighted source mean and the target mean, the distance of each
target to its soft mixture of source class centers, and the spread of all
samples around their class indicators.  Each loss has a closed quadratic
form tr(Aᵀ X M Xᵀ A) for a suitable matrix M built from labels and weights
alone.  This script evaluates both sides of that identity.
"""

import numpy as np

from partialda import (
    build_center_operators,
    build_m0,
    build_mc,
    build_mp,
    combine,
)

rng = np.random.default_rng(5)

# A small two-domain instance: 3 classes, 6 source and 4 target samples.
d, n_s, n_t, c = 5, 6, 4, 3
x_s = rng.standard_normal((d, n_s))
x_t = rng.standard_normal((d, n_t))
labels = np.array([0, 1, 2, 0, 1, 2])
y_s = np.zeros((n_s, c))
y_s[np.arange(n_s), labels] = 1.0
p = rng.random((c, n_t))
p /= p.sum(axis=0)  # soft target labels, one distribution per column
omega = np.array([1.0, 1.0, 0.2, 1.0, 1.0, 0.2])  # class 2 down-weighted
x = np.hstack([x_s, x_t])
a = rng.standard_normal((d, 2))  # any projection works for the identity


def quad(m):
    return float(np.trace(a.T @ x @ m @ x.T @ a))


# 1. Mean discrepancy: distance between weighted class means of the domains.
m0 = build_m0(omega, n_t)
gap = a.T @ (x_s @ omega / omega.sum() - x_t.mean(axis=1))
print(f"mean-gap loss     direct={float(gap @ gap):.6f}  via M0={quad(m0):.6f}")

# 2. Center reconstruction: each target against its soft mix of source
#    class means.
ops = build_center_operators(x_s, y_s, p)
mp = build_mp(ops)
means = np.column_stack(
    [x_s[:, y_s[:, k] == 1].mean(axis=1) for k in range(c)]
)
recon = float(np.sum((a.T @ (x_t - means @ p)) ** 2))
print(f"center loss       direct={recon:.6f}  via Mp={quad(mp):.6f}")

# 3. Cluster compactness: residual of all samples outside the span of their
#    class indicators.
mc = build_mc(y_s, p)
yy = np.vstack([y_s, p.T])
q, _ = np.linalg.qr(yy)
resid = float(np.sum((a.T @ (x - (x @ q) @ q.T)) ** 2))
print(f"cluster loss      direct={resid:.6f}  via Mc={quad(mc):.6f}")

# 4. The solver consumes one combined matrix; weights steer the trade-off.
m_all = combine(m0, mp, mc, alpha_p=1.0, alpha_c=1.0)
print(f"combined loss     sum   ={quad(m0) + quad(mp) + quad(mc):.6f}  "
      f"via M ={quad(m_all):.6f}")
