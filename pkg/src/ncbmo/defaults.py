"""Central numeric defaults.

Every tolerance, cap, and grid default lives here so call sites can
override per call while tests and the harness agree on one source.
"""
from __future__ import annotations

import numpy as np

# eigenvalue clustering: tol = CLUSTER_TOL_SCALE * (1 + opnorm(H))
CLUSTER_TOL_SCALE = 1e-8

# gram quotient: eigenvalues below DEGENERACY_TOL_SCALE * (1 + opnorm(gram)) are dropped
DEGENERACY_TOL_SCALE = 1e-10

HERMITIAN_TOL = 1e-10
UNIT_VECTOR_TOL = 1e-8

# hard caps on constructed dimensions
FOCK_DIM_CAP = 2 ** 12
MAX_TOTAL_DIM = 4096

# dyadic time grid for semigroup suprema
DYADIC_K_MIN = -20
DYADIC_K_MAX = 20

# segment-average quadrature and finite-difference step
QUAD_ORDER = 16
FD_STEP = 1e-5

# empirical-constant caps asserted by the harness
CAP_P_RATIO = 10.0
CAP_LOGN = 5.0
CAP_BMO = 100.0
CAP_VECTOR = 10.0


def dyadic_t_grid(kmin: int = DYADIC_K_MIN, kmax: int = DYADIC_K_MAX,
                  include_zero: bool = True) -> np.ndarray:
    """Time grid {2^k : kmin <= k <= kmax}, optionally with t = 0 prepended."""
    ts = [float(2.0 ** k) for k in range(kmin, kmax + 1)]
    if include_zero:
        ts = [0.0] + ts
    return np.asarray(ts, dtype=float)
