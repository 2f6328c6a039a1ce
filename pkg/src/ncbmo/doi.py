"""Kernels on a discrete spectrum and their Schur actions.

A Kernel stores values phi(lambda, mu) over the clustered spectrum of a
Hermitian matrix; schur_apply realizes sum_{i,j} phi_i_j P_i x P_j. Block
kernels live on spectrum x {1,2} and drive the doubled two-by-two flow.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import defaults
from .matcore import (SpectralDecomposition, decomposition_from_projections,
                      kron, op_norm)


@dataclass(frozen=True)
class Kernel:
    """Values over spectrum x spectrum, or (spectrum x {1,2})^2 when blocks is set."""
    spectrum: np.ndarray
    values: np.ndarray
    blocks: tuple | None = None

    def __post_init__(self):
        spectrum = np.asarray(self.spectrum, dtype=float)
        values = np.asarray(self.values)
        object.__setattr__(self, "spectrum", spectrum)
        object.__setattr__(self, "values", values)
        m = len(spectrum)
        side = m if self.blocks is None else m * len(self.blocks)
        if values.shape != (side, side):
            raise ValueError(f"kernel values shape {values.shape}, expected {(side, side)}")

    @property
    def side(self) -> int:
        return self.values.shape[0]

    def generator_defects(self) -> dict:
        """Diagnostics for use as a semigroup generator: symmetry, diagonal, negativity."""
        V = self.values
        return {
            "sym": float(np.abs(V - V.T).max()),
            "imag": float(np.abs(V.imag).max()) if np.iscomplexobj(V) else 0.0,
            "diag": float(np.abs(np.diag(V)).max()),
            "neg": float(max(0.0, -V.real.min())),
        }

    def to_json(self) -> dict:
        doc = {
            "spectrum": self.spectrum.tolist(),
            "values_re": np.real(self.values).tolist(),
            "values_im": np.imag(self.values).tolist(),
        }
        if self.blocks is not None:
            doc["blocks"] = list(self.blocks)
        return doc


def kernel_from_json(doc: dict) -> Kernel:
    try:
        spectrum = np.asarray(doc["spectrum"], dtype=float)
        re = np.asarray(doc["values_re"], dtype=float)
        im = np.asarray(doc["values_im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed kernel document: {exc}") from exc
    if re.shape != im.shape:
        raise ValueError(f"kernel document re/im shapes differ: {re.shape} vs {im.shape}")
    blocks = tuple(doc["blocks"]) if "blocks" in doc else None
    values = re + 1j * im if np.any(im) else re
    return Kernel(spectrum=spectrum, values=values, blocks=blocks)


def _pairwise(f: Callable, spectrum: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vals = np.asarray([float(f(lam)) for lam in spectrum])
    return vals[:, None], vals[None, :]


def difference_kernel(spectrum) -> Kernel:
    """psi(lambda, mu) = lambda - mu; its Schur action is x -> [A, x]."""
    s = np.asarray(spectrum, dtype=float)
    return Kernel(s, s[:, None] - s[None, :])


def function_difference_kernel(f: Callable, spectrum) -> Kernel:
    """psi_f(lambda, mu) = f(lambda) - f(mu); Schur action x -> [f(A), x]."""
    s = np.asarray(spectrum, dtype=float)
    fl, fm = _pairwise(f, s)
    return Kernel(s, fl - fm)


def divided_difference_kernel(f: Callable, spectrum,
                              diagonal: str = "zero",
                              fprime: Callable | None = None) -> Kernel:
    """First divided difference (f(lambda) - f(mu)) / (lambda - mu).

    diagonal="zero" leaves the diagonal at 0, so the Schur action composed
    with x -> [A, x] reproduces x -> [f(A), x] exactly. diagonal="derivative"
    fills f'(lambda) instead (analytic fprime if given, else a central
    difference), which realizes the Daletskii-Krein calculus convention.
    """
    s = np.asarray(spectrum, dtype=float)
    fl, fm = _pairwise(f, s)
    diff = s[:, None] - s[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(diff != 0.0, (fl - fm) / np.where(diff != 0.0, diff, 1.0), 0.0)
    if diagonal == "zero":
        np.fill_diagonal(vals, 0.0)
    elif diagonal == "derivative":
        if fprime is not None:
            d = np.asarray([float(fprime(lam)) for lam in s])
        else:
            h = 1e-6 * (1.0 + np.abs(s))
            d = np.asarray([(f(lam + hh) - f(lam - hh)) / (2.0 * hh)
                            for lam, hh in zip(s, h)])
        np.fill_diagonal(vals, d)
    else:
        raise ValueError(f"diagonal must be 'zero' or 'derivative', got {diagonal!r}")
    return Kernel(s, vals)


def graph_distance_kernel(f: Callable, spectrum) -> Kernel:
    """Squared Euclidean distance between graph points (lambda, f(lambda)).

    F(lambda, mu) = (lambda - mu)^2 + (f(lambda) - f(mu))^2. Because F is a
    squared distance of an embedding, exp(-t F) is positive semidefinite for
    every t >= 0, which is the complete-positivity certificate of the flow.
    """
    s = np.asarray(spectrum, dtype=float)
    fl, fm = _pairwise(f, s)
    vals = (s[:, None] - s[None, :]) ** 2 + (fl - fm) ** 2
    return Kernel(s, vals)


def block_generator_kernel(spectrum) -> Kernel:
    """Generator on spectrum x {1,2}: same-block decay by squared eigenvalue
    distance, cross-block decay by the sum of squared eigenvalues.

    Equals the squared distance of the embedding (lambda, block 1) -> (lambda, 0),
    (lambda, block 2) -> (0, lambda), so the same positivity certificate applies.
    """
    s = np.asarray(spectrum, dtype=float)
    m = len(s)
    same = (s[:, None] - s[None, :]) ** 2
    cross = s[:, None] ** 2 + s[None, :] ** 2
    vals = np.block([[same, cross], [cross, same]])
    assert vals.shape == (2 * m, 2 * m)
    return Kernel(s, vals, blocks=(1, 2))


def semigroup_kernel(generator: Kernel, t: float) -> Kernel:
    """Entrywise exp(-t * F) for t >= 0."""
    t = float(t)
    if t < 0.0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    return Kernel(generator.spectrum, np.exp(-t * generator.values), blocks=generator.blocks)


def block_kernel(spectrum, t: float) -> Kernel:
    """exp(-t F) over spectrum x {1,2} for the doubled flow."""
    return semigroup_kernel(block_generator_kernel(spectrum), t)


def fixed_mask_kernel(generator: Kernel, ztol: float = 0.0) -> Kernel:
    """Indicator of the flow's fixed lines: 1 where the generator vanishes."""
    vals = (np.abs(generator.values) <= ztol).astype(float)
    return Kernel(generator.spectrum, vals, blocks=generator.blocks)


def _check_spectra_match(K: Kernel, D: SpectralDecomposition):
    if K.blocks is not None:
        raise ValueError("block kernel needs the doubled decomposition; "
                         "use doubled_decomposition first")
    if len(K.spectrum) != D.n_clusters or not np.allclose(K.spectrum, D.spectrum,
                                                          atol=1e-12, rtol=0.0):
        raise ValueError(f"kernel spectrum {K.spectrum} does not match "
                         f"decomposition spectrum {D.spectrum}")


def schur_apply(K: Kernel, D: SpectralDecomposition, x) -> np.ndarray:
    """sum_{i,j} K(lambda_i, lambda_j) P_i x P_j, computed in the eigenbasis."""
    _check_spectra_match(K, D)
    x = np.asarray(x)
    if x.shape != (D.dim, D.dim):
        raise ValueError(f"x shape {x.shape} does not match decomposition dim {D.dim}")
    C = D.indicator()
    expanded = C @ K.values @ C.T
    V = D.basis
    y = V.conj().T @ x @ V
    return V @ (expanded * y) @ V.conj().T


@dataclass(frozen=True)
class OperatorKernel:
    """Matrix-valued kernel: values[i, j] is a side x side block."""
    spectrum: np.ndarray
    values: np.ndarray  # (m, m, side, side)

    def __post_init__(self):
        spectrum = np.asarray(self.spectrum, dtype=float)
        values = np.asarray(self.values)
        object.__setattr__(self, "spectrum", spectrum)
        object.__setattr__(self, "values", values)
        m = len(spectrum)
        if values.ndim != 4 or values.shape[:2] != (m, m) or values.shape[2] != values.shape[3]:
            raise ValueError(f"operator kernel values shape {values.shape}, "
                             f"expected ({m}, {m}, side, side)")

    @property
    def side(self) -> int:
        return self.values.shape[2]


def operator_schur_apply(K: OperatorKernel, D: SpectralDecomposition, x) -> np.ndarray:
    """sum_{i,j} K_values[i, j] tensor (P_i x P_j) on C^side tensor C^n."""
    if len(K.spectrum) != D.n_clusters or not np.allclose(K.spectrum, D.spectrum,
                                                          atol=1e-12, rtol=0.0):
        raise ValueError("operator kernel spectrum does not match decomposition")
    x = np.asarray(x)
    n, k = D.dim, K.side
    out = np.zeros((k * n, k * n), dtype=complex)
    for i, Pi in enumerate(D.projections):
        Pix = Pi @ x
        for j, Pj in enumerate(D.projections):
            out += kron(K.values[i, j], Pix @ Pj)
    return out


def doubled_decomposition(D: SpectralDecomposition,
                          outer_dim: int = 1) -> SpectralDecomposition:
    """Refined decomposition on C^outer tensor C^2 tensor C^n for block kernels.

    Projections are I_outer tensor e_aa tensor P_i with synthetic labels
    a * m + i, matching the index order of block kernel values.
    """
    m = D.n_clusters
    eye_outer = np.eye(outer_dim)
    projections = []
    for a in range(2):
        e_aa = np.zeros((2, 2))
        e_aa[a, a] = 1.0
        for P in D.projections:
            projections.append(kron(eye_outer, kron(e_aa, P)))
    labels = np.arange(2 * m, dtype=float)
    return decomposition_from_projections(labels, projections)


def lift_block_kernel(K: Kernel) -> Kernel:
    """Reindex a block kernel onto the synthetic labels of doubled_decomposition."""
    if K.blocks is None:
        raise ValueError("not a block kernel")
    labels = np.arange(K.side, dtype=float)
    return Kernel(labels, K.values)


@dataclass(frozen=True)
class MarkovReport:
    """Certificate data for exp(-t F) over a time grid."""
    t_grid: np.ndarray
    min_eigs: np.ndarray
    diag_defects: np.ndarray
    sym_defects: np.ndarray

    @property
    def min_eig(self) -> float:
        return float(self.min_eigs.min())

    @property
    def max_diag_defect(self) -> float:
        return float(self.diag_defects.max())

    @property
    def max_sym_defect(self) -> float:
        return float(self.sym_defects.max())

    def to_json(self) -> dict:
        return {
            "t_grid": self.t_grid.tolist(),
            "min_eigs": self.min_eigs.tolist(),
            "diag_defects": self.diag_defects.tolist(),
            "sym_defects": self.sym_defects.tolist(),
            "min_eig": self.min_eig,
            "max_diag_defect": self.max_diag_defect,
            "max_sym_defect": self.max_sym_defect,
        }


def markov_defects(generator: Kernel, t_grid=None) -> MarkovReport:
    """Scan exp(-t F) over the grid: kernel PSD-ness, unit diagonal, symmetry.

    A symmetric PSD kernel with unit diagonal certifies the Schur flow as a
    unital, completely positive, trace-symmetric semigroup.
    """
    if t_grid is None:
        t_grid = defaults.dyadic_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    min_eigs, diag_defs, sym_defs = [], [], []
    for t in t_grid:
        Kt = semigroup_kernel(generator, t).values
        sym_defs.append(float(np.abs(Kt - Kt.T).max()))
        diag_defs.append(float(np.abs(np.diag(Kt) - 1.0).max()))
        Ks = 0.5 * (Kt + Kt.T)
        min_eigs.append(float(np.linalg.eigvalsh(Ks)[0]))
    return MarkovReport(t_grid=t_grid, min_eigs=np.asarray(min_eigs),
                        diag_defects=np.asarray(diag_defs),
                        sym_defects=np.asarray(sym_defs))


def floor_discretize(H, l: float) -> np.ndarray:
    """Spectral flooring: replace each eigenvalue by floor(l * lambda) / l."""
    from .matcore import apply_scalar_function, eig_hermitian
    if l <= 0:
        raise ValueError(f"discretization level must be positive, got {l}")
    D = eig_hermitian(H)
    return apply_scalar_function(D, lambda u: np.floor(l * u) / l)
