"""Dense Hermitian building blocks.

Spectral decompositions with eigenvalue clustering, functional calculus,
Schatten norms, tensor legs, and vacuum-vector compression. All matrices
are numpy arrays; shapes are validated, values are trusted.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import defaults


def _fingerprint(M: np.ndarray) -> str:
    data = np.ascontiguousarray(M)
    digest = hashlib.sha1(data.tobytes()).hexdigest()[:12]
    return f"shape={M.shape} dtype={M.dtype} fro={np.linalg.norm(M):.6e} sha1={digest}"


def _as_square(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square 2-d, got shape {M.shape}")
    return M


def hermitian_defect(H: np.ndarray) -> float:
    """Operator-norm distance from H to its Hermitian part."""
    H = _as_square(H, "H")
    return float(op_norm(H - H.conj().T))


def require_hermitian(H, tol: float | None = None, name: str = "H") -> np.ndarray:
    H = _as_square(H, name)
    if tol is None:
        tol = defaults.HERMITIAN_TOL * (1.0 + op_norm(H))
    defect = hermitian_defect(H)
    if defect > tol:
        raise ValueError(f"{name} is not Hermitian: symmetry defect {defect:.3e} "
                         f"exceeds {tol:.3e} ({_fingerprint(H)})")
    return 0.5 * (H + H.conj().T)


def op_norm(M) -> float:
    """Largest singular value."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered eigendecomposition of a Hermitian matrix.

    spectrum is strictly increasing; projections[i] is the orthogonal
    projection onto the eigenspace cluster of spectrum[i]. basis holds the
    orthonormal eigenvectors column-wise and cluster_of maps each basis
    column to its cluster index, so Schur multipliers can act in O(n^3).
    """
    source: np.ndarray
    spectrum: np.ndarray
    projections: tuple
    basis: np.ndarray
    cluster_of: np.ndarray

    @property
    def dim(self) -> int:
        return self.source.shape[0]

    @property
    def n_clusters(self) -> int:
        return len(self.spectrum)

    def indicator(self) -> np.ndarray:
        """n x m membership matrix C with C[r, i] = 1 iff basis column r sits in cluster i."""
        C = np.zeros((self.dim, self.n_clusters))
        C[np.arange(self.dim), self.cluster_of] = 1.0
        return C


def eig_hermitian(H, cluster_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix, merging near-degenerate eigenvalues.

    Adjacent eigenvalues are agglomerated while their gap is below
    cluster_tol (default CLUSTER_TOL_SCALE * (1 + opnorm(H))); each cluster
    reports the mean of its eigenvalues and the rank-summed projection.
    """
    H = require_hermitian(H)
    if cluster_tol is None:
        cluster_tol = defaults.CLUSTER_TOL_SCALE * (1.0 + op_norm(H))
    try:
        evals, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"eigensolver failed on {_fingerprint(H)}") from exc

    n = H.shape[0]
    cluster_of = np.zeros(n, dtype=int)
    for r in range(1, n):
        if evals[r] - evals[r - 1] < cluster_tol:
            cluster_of[r] = cluster_of[r - 1]
        else:
            cluster_of[r] = cluster_of[r - 1] + 1
    m = cluster_of[-1] + 1 if n else 0

    spectrum = np.zeros(m)
    projections = []
    for i in range(m):
        cols = cluster_of == i
        spectrum[i] = evals[cols].mean()
        Vi = vecs[:, cols]
        projections.append(Vi @ Vi.conj().T)
    return SpectralDecomposition(source=H, spectrum=spectrum,
                                 projections=tuple(projections),
                                 basis=vecs, cluster_of=cluster_of)


def decomposition_from_projections(labels: Sequence[float],
                                   projections: Sequence[np.ndarray],
                                   tol: float = 1e-10) -> SpectralDecomposition:
    """Assemble a decomposition from an explicit orthogonal resolution of identity.

    labels must be strictly increasing reals; projections must be Hermitian,
    idempotent, mutually orthogonal, and sum to the identity within tol.
    """
    labels = np.asarray(labels, dtype=float)
    if labels.ndim != 1 or len(labels) != len(projections):
        raise ValueError("labels and projections must have matching length")
    if len(labels) and np.any(np.diff(labels) <= 0):
        raise ValueError("labels must be strictly increasing")
    projections = tuple(np.asarray(P) for P in projections)
    n = projections[0].shape[0]
    total = np.zeros((n, n), dtype=complex)
    basis_cols = []
    cluster_of = []
    for i, P in enumerate(projections):
        P = _as_square(P, f"projections[{i}]")
        if op_norm(P @ P - P) > tol or hermitian_defect(P) > tol:
            raise ValueError(f"projections[{i}] is not an orthogonal projection")
        total = total + P
        evals, vecs = np.linalg.eigh(P)
        keep = evals > 0.5
        basis_cols.append(vecs[:, keep])
        cluster_of.extend([i] * int(keep.sum()))
    if op_norm(total - np.eye(n)) > tol:
        raise ValueError("projections do not sum to the identity")
    basis = np.hstack(basis_cols)
    source = sum(lam * P for lam, P in zip(labels, projections))
    return SpectralDecomposition(source=np.asarray(source), spectrum=labels,
                                 projections=projections, basis=basis,
                                 cluster_of=np.asarray(cluster_of, dtype=int))


def apply_scalar_function(D: SpectralDecomposition, f: Callable) -> np.ndarray:
    """Functional calculus: sum of f(lambda_i) * P_i over the clustered spectrum."""
    vals = np.asarray([f(lam) for lam in D.spectrum], dtype=complex)
    out = np.zeros((D.dim, D.dim), dtype=complex)
    for v, P in zip(vals, D.projections):
        out += v * P
    if np.allclose(out.imag, 0.0, atol=0.0):
        return out.real
    return out


def schatten_norm(M, p: float, normalized: bool = False) -> float:
    """Schatten p-norm from singular values, p in [1, inf].

    Unnormalized trace by default; normalized=True divides the trace by the
    dimension (used only where vacuum-state identities are checked).
    """
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {M.shape}")
    p = float(p)
    if p < 1.0:
        raise ValueError(f"Schatten norm needs p >= 1, got {p}")
    try:
        s = np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"svd failed on {_fingerprint(M)}") from exc
    if np.isinf(p):
        return float(s[0]) if s.size else 0.0
    total = float(np.sum(s ** p))
    if normalized:
        total /= max(M.shape)
    return total ** (1.0 / p)


def kron(A, B) -> np.ndarray:
    """Tensor-leg product, row-major on both indices."""
    return np.kron(np.asarray(A), np.asarray(B))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.asarray(mats[0])
    for M in mats[1:]:
        out = np.kron(out, M)
    return out


def slice_vacuum(Y, dims: Sequence[int], keep: int, vac) -> np.ndarray:
    """Compress trailing tensor legs by a unit-vector state.

    Y acts on a tensor product with leg dimensions dims; the first keep legs
    survive and each remaining leg is compressed by the vector state of vac
    (one shared vector, or a sequence with one vector per sliced leg).
    Returns W* Y W for the isometry W = I_(kept) tensor vac tensor ... vac.
    """
    Y = _as_square(Y, "Y")
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != Y.shape[0]:
        raise ValueError(f"dims {dims} do not factor side {Y.shape[0]}")
    if not 0 <= keep <= len(dims):
        raise ValueError(f"keep={keep} out of range for {len(dims)} legs")
    sliced = dims[keep:]
    if isinstance(vac, np.ndarray) and vac.ndim == 1:
        vacs = [vac] * len(sliced)
    else:
        vacs = [np.asarray(v) for v in vac]
    if len(vacs) != len(sliced):
        raise ValueError(f"{len(sliced)} legs to slice but {len(vacs)} vectors given")
    out = Y
    for d, v in zip(reversed(sliced), reversed(vacs)):
        v = np.asarray(v).ravel()
        if v.shape[0] != d:
            raise ValueError(f"vacuum vector length {v.shape[0]} != leg dim {d}")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > defaults.UNIT_VECTOR_TOL:
            raise ValueError(f"vacuum vector must be unit norm, got {nrm!r}")
        m = out.shape[0] // d
        T = out.reshape(m, d, m, d)
        out = np.einsum("adbe,d,e->ab", T, v.conj(), v)
    return out


def min_eigenvalue(H) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    H = require_hermitian(H)
    try:
        return float(np.linalg.eigvalsh(H)[0])
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"eigensolver failed on {_fingerprint(H)}") from exc


def is_psd(H, tol: float = 1e-10) -> bool:
    return min_eigenvalue(H) >= -tol


def matrix_to_json(M) -> dict:
    """Wire format: {"rows", "cols", "re", "im"} with row-major nested lists."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {M.shape}")
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": np.real(M).tolist(),
        "im": np.imag(M).tolist(),
    }


def matrix_from_json(d: dict) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise ValueError(f"matrix document shape mismatch: declared {(rows, cols)}, "
                         f"re {re.shape}, im {im.shape}")
    if np.any(im):
        return re + 1j * im
    return re
