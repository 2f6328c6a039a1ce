"""Markov dilation of a Schur-multiplier semigroup on a finite tower.

The dilated algebra is M tensor G^(tensor K) where G is the Fock
representation of the exterior algebra over the unit-diagonal PSD kernel
phi. tower_embed realizes the k-th embedding
    x -> sum_{i,j} P_i x P_j tensor (s_i s_j)^(tensor k) tensor 1,
conditional_expect compresses trailing legs by the vacuum state, and their
composition reproduces powers of the Schur multiplier exactly. Normalized
traces are used throughout this module so embeddings are L2-isometries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import defaults
from .clifford import CliffordRep, build_clifford
from .doi import Kernel, schur_apply
from .matcore import (SpectralDecomposition, kron_all, op_norm, schatten_norm,
                      slice_vacuum)


@dataclass(frozen=True)
class DilationSystem:
    base: SpectralDecomposition
    phi: Kernel
    clifford: CliffordRep
    depth: int
    dims: tuple
    _pair_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def pair_product(self, i: int, j: int) -> np.ndarray:
        """s(e_i) s(e_j) on one Fock leg, memoized."""
        key = (i, j)
        if key not in self._pair_cache:
            self._pair_cache[key] = self.clifford.s_ops[i] @ self.clifford.s_ops[j]
        return self._pair_cache[key]


def iterate_kernel(phi: Kernel, k: int) -> Kernel:
    """Kernel of the k-th power of the Schur multiplier: entrywise phi^k."""
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    return Kernel(phi.spectrum, phi.values ** k, blocks=phi.blocks)


def build_dilation(D: SpectralDecomposition, phi: Kernel, depth: int,
                   max_total_dim: int = defaults.MAX_TOTAL_DIM) -> DilationSystem:
    """Assemble the depth-K tower for a PSD, unit-diagonal kernel phi."""
    if phi.blocks is not None:
        raise ValueError("dilation needs a scalar kernel on the base spectrum")
    if len(phi.spectrum) != D.n_clusters or not np.allclose(
            phi.spectrum, D.spectrum, atol=1e-12, rtol=0.0):
        raise ValueError("phi spectrum does not match decomposition")
    vals = phi.values
    if np.iscomplexobj(vals):
        if np.abs(vals.imag).max() > 1e-12:
            raise ValueError("phi must be real")
        vals = vals.real
    if np.abs(vals - vals.T).max() > 1e-12:
        raise ValueError("phi must be symmetric")
    if np.abs(np.diag(vals) - 1.0).max() > 1e-12:
        raise ValueError("phi must have unit diagonal")
    min_eig = float(np.linalg.eigvalsh(0.5 * (vals + vals.T))[0])
    if min_eig < -1e-10:
        raise ValueError(f"phi must be PSD: min eigenvalue {min_eig:.3e}")
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    rep = build_clifford(vals)
    g = rep.fock_dim
    total = D.dim * g ** depth
    if total > max_total_dim:
        raise ValueError(f"total dimension {D.dim}*{g}^{depth} = {total} exceeds "
                         f"cap {max_total_dim}; reduce depth or spectrum size")
    dims = (D.dim,) + (g,) * depth
    return DilationSystem(base=D, phi=Kernel(phi.spectrum, vals), clifford=rep,
                          depth=depth, dims=dims)


def tower_embed(S: DilationSystem, x, k: int) -> np.ndarray:
    """The k-th tower embedding of x, supported on the first k Fock legs."""
    if not 0 <= k <= S.depth:
        raise ValueError(f"leg index {k} outside [0, {S.depth}]")
    x = np.asarray(x)
    n = S.base.dim
    if x.shape != (n, n):
        raise ValueError(f"x shape {x.shape} does not match base dimension {n}")
    g = S.clifford.fock_dim
    m = S.base.n_clusters
    side = n * g ** k
    acc = np.zeros((side, side), dtype=complex)
    for i in range(m):
        Pi_x = S.base.projections[i] @ x
        for j in range(m):
            block = Pi_x @ S.base.projections[j]
            if k == 0:
                acc += block
            else:
                acc += kron_all([block] + [S.pair_product(i, j)] * k)
    if k < S.depth:
        acc = np.kron(acc, np.eye(g ** (S.depth - k)))
    return acc


def conditional_expect(S: DilationSystem, Y, m: int, expand: bool = True) -> np.ndarray:
    """Vacuum-state compression of legs m+1..K, re-tensored with identity.

    On represented elements this is the trace-preserving conditional
    expectation onto the depth-m subalgebra; expand=False returns the
    compressed matrix of side n * g^m instead.
    """
    if not 0 <= m <= S.depth:
        raise ValueError(f"leg index {m} outside [0, {S.depth}]")
    Y = np.asarray(Y)
    if Y.shape != (S.total_dim, S.total_dim):
        raise ValueError(f"Y shape {Y.shape} does not match system dimension "
                         f"{S.total_dim}")
    out = slice_vacuum(Y, S.dims, keep=1 + m, vac=S.clifford.vacuum)
    if expand and m < S.depth:
        out = np.kron(out, np.eye(S.clifford.fock_dim ** (S.depth - m)))
    return out


def semigroup_power(S: DilationSystem, x, k: int) -> np.ndarray:
    """(I_phi)^k applied to x, via the entrywise power kernel."""
    return schur_apply(iterate_kernel(S.phi, k), S.base, x)


def default_pairs(depth: int) -> list:
    return [(m, k) for k in range(depth + 1) for m in range(k + 1)]


@dataclass(frozen=True)
class DilationRow:
    m: int
    k: int
    trial: int
    defect: float


def dilation_report(S: DilationSystem, xs: Sequence, pairs=None) -> list:
    """Defect of E_m(pi_k(x)) = pi_m(T^(k-m) x) for each sample and pair."""
    pairs = default_pairs(S.depth) if pairs is None else list(pairs)
    for m, k in pairs:
        if not 0 <= m <= k <= S.depth:
            raise ValueError(f"pair {(m, k)} needs 0 <= m <= k <= {S.depth}")
    rows = []
    for trial, x in enumerate(xs):
        ks = sorted({k for _, k in pairs})
        embedded = {k: tower_embed(S, x, k) for k in ks}
        for m, k in pairs:
            lhs = conditional_expect(S, embedded[k], m)
            rhs = tower_embed(S, semigroup_power(S, x, k - m), m)
            rows.append(DilationRow(m=m, k=k, trial=trial,
                                    defect=float(op_norm(lhs - rhs))))
    return rows


def verify_dilation(S: DilationSystem, xs: Sequence, pairs=None) -> float:
    """Max dilation-identity defect over samples and (m, k) pairs."""
    rows = dilation_report(S, xs, pairs)
    return max(r.defect for r in rows) if rows else 0.0


@dataclass(frozen=True)
class PathModulusRow:
    s: int
    t: int
    trial: int
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def path_modulus_check(S: DilationSystem, xs: Sequence, pairs=None,
                       tol: float | None = 1e-9) -> list:
    """Increment bound: the squared normalized-L2 distance of two embeddings
    is controlled by 2 ||x||_2 ||x - T^(|s-t|) x||_2.

    Returns one row per (sample, pair); a violation beyond tol raises.
    """
    if pairs is None:
        pairs = [(s, t) for t in range(S.depth + 1) for s in range(t + 1)]
    rows = []
    for trial, x in enumerate(xs):
        x = np.asarray(x)
        norm_x = schatten_norm(x, 2, normalized=True)
        embedded = {}
        for s, t in pairs:
            for leg in (s, t):
                if leg not in embedded:
                    embedded[leg] = tower_embed(S, x, leg)
            diff = embedded[t] - embedded[s]
            lhs = schatten_norm(diff, 2, normalized=True) ** 2
            moved = x - semigroup_power(S, x, abs(t - s))
            rhs = 2.0 * norm_x * schatten_norm(moved, 2, normalized=True)
            rows.append(PathModulusRow(s=s, t=t, trial=trial,
                                       lhs=float(lhs), rhs=float(rhs)))
    if tol is not None:
        bad = [r for r in rows if r.lhs > r.rhs + tol]
        if bad:
            worst = max(bad, key=lambda r: r.lhs - r.rhs)
            raise ValueError(f"path increment bound violated at (s={worst.s}, "
                             f"t={worst.t}, trial={worst.trial}): "
                             f"lhs={worst.lhs:.3e} > rhs={worst.rhs:.3e}")
    return rows
