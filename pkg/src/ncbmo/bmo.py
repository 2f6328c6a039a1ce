"""Semigroup BMO norms for Schur-multiplier flows.

A SchurSemigroup pairs a spectral decomposition with a generator kernel F
and evaluates T_t as the entrywise-exponential Schur multiplier exp(-t F).
BMO norms take the sup over a time grid of the variance
T_t(x*x) - T_t(x)* T_t(x) in operator norm, square-rooted; the small-bmo
variant uses T_t(|x - T_t(x)|^2). Suprema include the closed-form t -> inf
limit read off the generator's zero pattern.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import defaults
from .doi import Kernel, fixed_mask_kernel, markov_defects, semigroup_kernel
from .matcore import SpectralDecomposition, op_norm


class SchurSemigroup:
    """Entrywise-exponential Schur flow exp(-t F) in a fixed eigenbasis."""

    def __init__(self, decomposition: SpectralDecomposition, generator: Kernel):
        if generator.blocks is not None:
            raise ValueError("lift block kernels onto the doubled decomposition first")
        if len(generator.spectrum) != decomposition.n_clusters or not np.allclose(
                generator.spectrum, decomposition.spectrum, atol=1e-12, rtol=0.0):
            raise ValueError("generator spectrum does not match decomposition")
        d = generator.generator_defects()
        if d["sym"] > 1e-12 or d["imag"] > 1e-12:
            raise ValueError(f"generator kernel must be real symmetric, defects {d}")
        if d["diag"] > 1e-12:
            raise ValueError(f"generator kernel must have zero diagonal, defect {d['diag']}")
        if d["neg"] > 0.0:
            raise ValueError(f"generator kernel must be nonnegative, defect {d['neg']}")
        self.decomposition = decomposition
        self.generator = generator
        C = decomposition.indicator()
        # generator expanded to the full eigenbasis; fixed mask marks F = 0 lines
        self._F = np.real(C @ generator.values @ C.T)
        self._fixed = (self._F <= 0.0).astype(float)
        self._V = decomposition.basis

    @property
    def dim(self) -> int:
        return self.decomposition.dim

    def kernel_at(self, t: float) -> Kernel:
        if np.isinf(t):
            return fixed_mask_kernel(self.generator)
        return semigroup_kernel(self.generator, t)

    def _to_basis(self, x: np.ndarray) -> np.ndarray:
        return self._V.conj().T @ np.asarray(x) @ self._V

    def _from_basis(self, y: np.ndarray) -> np.ndarray:
        return self._V @ y @ self._V.conj().T

    def apply(self, t: float, x) -> np.ndarray:
        """T_t(x); t = inf gives the projection onto the flow's fixed lines."""
        y = self._to_basis(x)
        mult = self._fixed if np.isinf(t) else np.exp(-float(t) * self._F)
        return self._from_basis(mult * y)

    def apply_stack(self, ts: np.ndarray, x) -> np.ndarray:
        """T_t(x) for every t in ts, stacked along the first axis."""
        y = self._to_basis(x)
        ts = np.asarray(ts, dtype=float)
        mults = np.empty((len(ts), self.dim, self.dim))
        finite = ~np.isinf(ts)
        if finite.any():
            mults[finite] = np.exp(-ts[finite, None, None] * self._F[None])
        if (~finite).any():
            mults[~finite] = self._fixed
        return np.matmul(self._V, np.matmul(mults * y[None], self._V.conj().T))

    def markov_defects(self, t_grid=None):
        return markov_defects(self.generator, t_grid)

    def transient_part(self, x) -> np.ndarray:
        """x minus the part fixed by the flow (generator-kernel zero lines).

        For a generator vanishing exactly on the diagonal this is x minus
        its block-diagonal compression sum_i P_i x P_i; the result is killed
        by T_t as t -> inf, and the map is idempotent.
        """
        y = self._to_basis(x)
        return self._from_basis((1.0 - self._fixed) * y)


def _column_variances(S: SchurSemigroup, x, ts: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    Tx = S.apply_stack(ts, x)
    Txx = S.apply_stack(ts, x.conj().T @ x)
    return Txx - np.matmul(Tx.conj().transpose(0, 2, 1), Tx)


def _grid_with_limit(t_grid, include_limit: bool) -> np.ndarray:
    if t_grid is None:
        t_grid = defaults.dyadic_t_grid()
    ts = np.asarray(t_grid, dtype=float)
    if ts.size == 0:
        raise ValueError("empty time grid")
    if include_limit and not np.isinf(ts).any():
        ts = np.append(ts, np.inf)
    return ts


def variance_min_eigenvalue(S: SchurSemigroup, x, t_grid=None) -> float:
    """Smallest eigenvalue of T_t(x*x) - T_t(x)*T_t(x) over the grid."""
    ts = _grid_with_limit(t_grid, include_limit=True)
    var = _column_variances(S, x, ts)
    var = 0.5 * (var + var.conj().transpose(0, 2, 1))
    return float(np.linalg.eigvalsh(var)[:, 0].min())


def _warn_if_fixed_part(S: SchurSemigroup, x):
    resid = S.transient_part(x) - np.asarray(x)
    if op_norm(resid) > 1e-10 * (1.0 + op_norm(x)):
        warnings.warn("x has a component fixed by the flow; the BMO seminorm "
                      "vanishes on it but the value is still computed",
                      stacklevel=3)


def bmo_column_norm(S: SchurSemigroup, x, t_grid=None,
                    include_limit: bool = True) -> float:
    """sup over the grid of the operator norm of the variance, square-rooted."""
    _warn_if_fixed_part(S, x)
    norm, _ = _column_norm_with_argmax(S, x, t_grid, include_limit)
    return norm


def _column_norm_with_argmax(S, x, t_grid, include_limit=True):
    x = np.asarray(x)
    ts = _grid_with_limit(t_grid, include_limit)
    var = _column_variances(S, x, ts)
    norms = np.linalg.norm(var, ord=2, axis=(1, 2))
    k = int(np.argmax(norms))
    return float(np.sqrt(max(norms[k], 0.0))), float(ts[k])


def bmo_row_norm(S: SchurSemigroup, x, t_grid=None,
                 include_limit: bool = True) -> float:
    """Column norm of the adjoint."""
    _warn_if_fixed_part(S, x)
    norm, _ = _column_norm_with_argmax(S, np.asarray(x).conj().T, t_grid, include_limit)
    return norm


def _small_column_with_argmax(S, x, ts):
    x = np.asarray(x)
    Tx = S.apply_stack(ts, x)
    best, arg = -1.0, ts[0]
    for t, txt in zip(ts, Tx):
        y = x - txt
        val = op_norm(S.apply(t, y.conj().T @ y))
        if val > best:
            best, arg = val, t
    return float(np.sqrt(max(best, 0.0))), float(arg)


def bmo_small_norm(S: SchurSemigroup, x, t_grid=None,
                   include_limit: bool = True) -> float:
    """sup_t of the norm of T_t(|x - T_t(x)|^2), square-rooted; max over x and x*."""
    ts = _grid_with_limit(t_grid, include_limit)
    col, _ = _small_column_with_argmax(S, x, ts)
    row, _ = _small_column_with_argmax(S, np.asarray(x).conj().T, ts)
    return max(col, row)


@dataclass(frozen=True)
class BmoReport:
    column_norm: float
    row_norm: float
    max_norm: float
    bmo_small_norm: float
    argmax_t_column: float
    argmax_t_row: float
    argmax_t_small: float
    t_grid: tuple

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if np.isinf(v) else float(v)
        return {
            "column_norm": self.column_norm,
            "row_norm": self.row_norm,
            "max_norm": self.max_norm,
            "bmo_small_norm": self.bmo_small_norm,
            "argmax_t_column": enc(self.argmax_t_column),
            "argmax_t_row": enc(self.argmax_t_row),
            "argmax_t_small": enc(self.argmax_t_small),
            "t_grid": [enc(t) for t in self.t_grid],
        }


def bmo_norm(S: SchurSemigroup, x, t_grid=None, include_limit: bool = True) -> BmoReport:
    """Column, row, and max BMO norms plus the small-bmo variant on one grid."""
    x = np.asarray(x)
    _warn_if_fixed_part(S, x)
    ts = _grid_with_limit(t_grid, include_limit)
    col, t_col = _column_norm_with_argmax(S, x, ts, include_limit=False)
    row, t_row = _column_norm_with_argmax(S, x.conj().T, ts, include_limit=False)
    small_col, t_sc = _small_column_with_argmax(S, x, ts)
    small_row, t_sr = _small_column_with_argmax(S, x.conj().T, ts)
    if small_row > small_col:
        small, t_small = small_row, t_sr
    else:
        small, t_small = small_col, t_sc
    return BmoReport(column_norm=col, row_norm=row, max_norm=max(col, row),
                     bmo_small_norm=small, argmax_t_column=t_col,
                     argmax_t_row=t_row, argmax_t_small=t_small,
                     t_grid=tuple(float(t) for t in ts))
