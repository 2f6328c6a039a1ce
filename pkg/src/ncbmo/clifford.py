"""Fock-space representation of the exterior algebra over a real Gram matrix.

The quotient by the Gram kernel is realized spectrally: generators are
mapped to coordinates in an orthonormal basis of the non-degenerate part,
and the field operators s(e_i) are linear combinations of standard
occupation-basis (Jordan-Wigner) fields. All consumers only use the
basis-independent data: the anticommutation relation and vacuum moments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import defaults
from .matcore import kron_all, op_norm, require_hermitian


def _jw_fields(r: int) -> list:
    """Occupation-basis field operators for r orthonormal modes, side 2^r."""
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    Z = np.array([[1.0, 0.0], [0.0, -1.0]])
    I2 = np.eye(2)
    ops = []
    for k in range(r):
        ops.append(kron_all([Z] * k + [X] + [I2] * (r - 1 - k)))
    return ops


@dataclass(frozen=True)
class CliffordRep:
    """Field operators over a Gram matrix, on the Fock space of its quotient.

    isometry has orthonormal columns spanning the non-degenerate part;
    weights are the kept Gram eigenvalues, so isometry @ diag(weights)
    @ isometry.T reconstructs the Gram matrix up to the dropped part.
    """
    gram: np.ndarray
    effective_dim: int
    isometry: np.ndarray
    weights: np.ndarray
    fock_dim: int
    s_ops: tuple
    vacuum: np.ndarray

    @property
    def n_generators(self) -> int:
        return self.gram.shape[0]

    @property
    def embedding(self) -> np.ndarray:
        """d x r coordinates of the generators in the orthonormal quotient basis."""
        return self.isometry * np.sqrt(self.weights)[None, :]


def build_clifford(gram, degeneracy_tol: float | None = None,
                   fock_cap: int = defaults.FOCK_DIM_CAP) -> CliffordRep:
    """Build field operators for a real symmetric PSD Gram matrix.

    Gram eigenvalues below degeneracy_tol are quotiented away; the Fock
    dimension 2^rank must stay within fock_cap.
    """
    gram = np.asarray(gram, dtype=float) if not np.iscomplexobj(gram) \
        else np.asarray(gram)
    if np.iscomplexobj(gram):
        if np.abs(gram.imag).max() > 1e-12:
            raise ValueError("gram matrix must be real")
        gram = gram.real
    gram = require_hermitian(gram, tol=1e-10, name="gram").real
    if degeneracy_tol is None:
        degeneracy_tol = defaults.DEGENERACY_TOL_SCALE * (1.0 + op_norm(gram))
    evals, vecs = np.linalg.eigh(gram)
    if evals[0] < -1e-8:
        raise ValueError(f"gram matrix is not PSD: min eigenvalue {evals[0]:.3e}")
    keep = evals > degeneracy_tol
    r = int(keep.sum())
    if 2 ** r > fock_cap:
        raise ValueError(f"Fock dimension 2^{r} exceeds cap {fock_cap}; "
                         "shrink the spectrum or raise the cap")
    isometry = vecs[:, keep]
    weights = evals[keep]
    coords = isometry * np.sqrt(weights)[None, :]
    fields = _jw_fields(r)
    fock_dim = 2 ** r
    d = gram.shape[0]
    s_ops = []
    for i in range(d):
        s = np.zeros((fock_dim, fock_dim))
        for a in range(r):
            s += coords[i, a] * fields[a]
        s_ops.append(s)
    vacuum = np.zeros(fock_dim)
    vacuum[0] = 1.0
    return CliffordRep(gram=gram, effective_dim=r, isometry=isometry,
                       weights=weights, fock_dim=fock_dim,
                       s_ops=tuple(s_ops), vacuum=vacuum)


def field_operator(R: CliffordRep, xi) -> np.ndarray:
    """s(xi) = sum_i xi_i s(e_i) for a real coefficient vector."""
    xi = np.asarray(xi)
    if xi.shape != (R.n_generators,):
        raise ValueError(f"coefficient vector length {xi.shape} != {R.n_generators}")
    if np.iscomplexobj(xi) and np.abs(xi.imag).max() > 0:
        raise ValueError("field operators are real-linear; coefficients must be real")
    out = np.zeros((R.fock_dim, R.fock_dim))
    for c, s in zip(np.real(xi), R.s_ops):
        if c != 0.0:
            out += c * s
    return out


def vacuum_trace(R: CliffordRep, Y) -> complex:
    """Vacuum expectation <Y vac, vac>; tracial on the generated algebra."""
    Y = np.asarray(Y)
    if Y.shape != (R.fock_dim, R.fock_dim):
        raise ValueError(f"operator side {Y.shape} != Fock dimension {R.fock_dim}")
    val = complex(R.vacuum.conj() @ Y @ R.vacuum)
    return val.real if val.imag == 0.0 else val


def car_defect(R: CliffordRep, xi, eta) -> float:
    """Distance of s(xi)s(eta) + s(eta)s(xi) from 2<xi, eta> times identity."""
    sx = field_operator(R, xi)
    sy = field_operator(R, eta)
    inner = float(np.real(np.asarray(xi)) @ R.gram @ np.real(np.asarray(eta)))
    return op_norm(sx @ sy + sy @ sx - 2.0 * inner * np.eye(R.fock_dim))
