import numpy as np
import pytest

from ncbmo import matcore
from conftest import random_complex, random_hermitian, rng_for


def test_eig_flip_matrix_oracle():
    D = matcore.eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(D.spectrum, [-1.0, 1.0], atol=1e-12)
    P_minus = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    P_plus = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
    assert np.allclose(D.projections[0], P_minus, atol=1e-12)
    assert np.allclose(D.projections[1], P_plus, atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError, match="symmetry defect"):
        matcore.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_rejects_non_square():
    with pytest.raises(ValueError, match="square"):
        matcore.eig_hermitian(np.zeros((2, 3)))


def test_clustering_merges_near_degenerate():
    H = np.diag([0.0, 1e-12, 1.0])
    D = matcore.eig_hermitian(H)
    assert D.n_clusters == 2
    assert abs(D.spectrum[0] - 5e-13) < 1e-12
    assert np.isclose(D.spectrum[1], 1.0)
    # rank-2 cluster projection
    assert np.isclose(np.trace(D.projections[0]).real, 2.0)


def test_clustering_gap_respects_tol():
    H = np.diag([0.0, 1e-3, 1.0])
    assert matcore.eig_hermitian(H, cluster_tol=1e-4).n_clusters == 3
    assert matcore.eig_hermitian(H, cluster_tol=1e-2).n_clusters == 2


def test_decomposition_invariants_random():
    for trial in range(8):
        rng = rng_for(11, trial)
        n = int(rng.integers(2, 9))
        H = random_hermitian(rng, n)
        D = matcore.eig_hermitian(H)
        eye = np.eye(n)
        total = sum(D.projections)
        assert np.allclose(total, eye, atol=1e-10)
        recon = sum(lam * P for lam, P in zip(D.spectrum, D.projections))
        scale = 1e-8 * (1.0 + matcore.op_norm(H))
        assert matcore.op_norm(recon - H) <= scale
        for i, P in enumerate(D.projections):
            assert matcore.op_norm(P @ P - P) <= 1e-10
            assert matcore.hermitian_defect(P) <= 1e-10
            for Q in D.projections[i + 1:]:
                assert matcore.op_norm(P @ Q) <= 1e-10
        assert np.all(np.diff(D.spectrum) > 0)


def test_apply_scalar_function_matches_direct():
    rng = rng_for(12)
    H = random_hermitian(rng, 6)
    D = matcore.eig_hermitian(H)
    sq = matcore.apply_scalar_function(D, lambda u: u * u)
    assert np.allclose(sq, H @ H, atol=1e-10)
    ident = matcore.apply_scalar_function(D, lambda u: u)
    assert np.allclose(ident, H, atol=1e-10)


def test_decomposition_from_projections_roundtrip():
    rng = rng_for(13)
    H = random_hermitian(rng, 5)
    D = matcore.eig_hermitian(H)
    D2 = matcore.decomposition_from_projections(D.spectrum, D.projections)
    assert np.allclose(D2.source, H, atol=1e-8)
    assert D2.n_clusters == D.n_clusters
    for P, Q in zip(D.projections, D2.projections):
        assert np.allclose(P, Q)


def test_decomposition_from_projections_rejects_bad_input():
    P = np.eye(2)
    with pytest.raises(ValueError, match="strictly increasing"):
        matcore.decomposition_from_projections([1.0, 0.0], [P, P])
    with pytest.raises(ValueError, match="orthogonal projection"):
        matcore.decomposition_from_projections([0.0], [np.array([[0.5, 0.0], [0.0, 0.5]])])


def test_schatten_norm_diag_oracle():
    M = np.diag([3.0, -4.0])
    assert np.isclose(matcore.schatten_norm(M, 1), 7.0)
    assert np.isclose(matcore.schatten_norm(M, 2), 5.0)
    assert np.isclose(matcore.schatten_norm(M, np.inf), 4.0)


def test_schatten_norm_monotone_in_p():
    rng = rng_for(14)
    M = random_complex(rng, 7)
    ps = [1.0, 1.5, 2.0, 4.0, 8.0, np.inf]
    vals = [matcore.schatten_norm(M, p) for p in ps]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-10


def test_schatten_norm_unitary_invariance():
    rng = rng_for(15)
    M = random_complex(rng, 6)
    Q, _ = np.linalg.qr(random_complex(rng, 6))
    for p in (1.0, 2.0, 3.0, np.inf):
        assert np.isclose(matcore.schatten_norm(Q @ M, p),
                          matcore.schatten_norm(M, p), atol=1e-10)


def test_schatten_norm_triangle_inequality():
    rng = rng_for(16)
    A = random_complex(rng, 5)
    B = random_complex(rng, 5)
    for p in (1.0, 2.0, 2.7, np.inf):
        lhs = matcore.schatten_norm(A + B, p)
        rhs = matcore.schatten_norm(A, p) + matcore.schatten_norm(B, p)
        assert lhs <= rhs + 1e-10


def test_schatten_norm_rejects_small_p():
    with pytest.raises(ValueError, match="p >= 1"):
        matcore.schatten_norm(np.eye(2), 0.5)


def test_schatten_normalized_identity():
    assert np.isclose(matcore.schatten_norm(np.eye(8), 2, normalized=True), 1.0)
    assert np.isclose(matcore.schatten_norm(np.eye(8), 2), np.sqrt(8.0))


def test_kron_diag_oracle():
    got = matcore.kron(np.diag([1.0, 2.0]), np.diag([1.0, 3.0]))
    assert np.allclose(got, np.diag([1.0, 3.0, 2.0, 6.0]))


def test_kron_mixed_product():
    rng = rng_for(17)
    A, B = random_complex(rng, 3), random_complex(rng, 4)
    C, Dm = random_complex(rng, 3), random_complex(rng, 4)
    lhs = matcore.kron(A, B) @ matcore.kron(C, Dm)
    rhs = matcore.kron(A @ C, B @ Dm)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_slice_vacuum_flip_leg_oracle():
    Y = matcore.kron(np.diag([1.0, 0.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))
    vac = np.array([1.0, 0.0])
    out = matcore.slice_vacuum(Y, dims=(2, 2), keep=1, vac=vac)
    assert np.allclose(out, np.zeros((2, 2)), atol=1e-14)


def test_slice_vacuum_factorizes_product_states():
    rng = rng_for(18)
    A = random_complex(rng, 3)
    B = random_complex(rng, 2)
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v /= np.linalg.norm(v)
    Y = matcore.kron(A, B)
    out = matcore.slice_vacuum(Y, dims=(3, 2), keep=1, vac=v)
    assert np.allclose(out, A * (v.conj() @ B @ v), atol=1e-12)


def test_slice_vacuum_multi_leg_and_adjoint():
    rng = rng_for(19)
    dims = (2, 3, 2)
    N = int(np.prod(dims))
    Y = random_complex(rng, N)
    v3 = rng.standard_normal(3); v3 = v3 / np.linalg.norm(v3)
    v2 = rng.standard_normal(2); v2 = v2 / np.linalg.norm(v2)
    out = matcore.slice_vacuum(Y, dims, keep=1, vac=[v3, v2])
    # agrees with the explicit isometry
    W = matcore.kron_all([np.eye(2), v3.reshape(-1, 1), v2.reshape(-1, 1)])
    assert np.allclose(out, W.conj().T @ Y @ W, atol=1e-12)
    # compatible with adjoints and positivity-preserving
    outT = matcore.slice_vacuum(Y.conj().T, dims, keep=1, vac=[v3, v2])
    assert np.allclose(outT, out.conj().T, atol=1e-12)
    pos = matcore.slice_vacuum(Y @ Y.conj().T, dims, keep=1, vac=[v3, v2])
    assert matcore.min_eigenvalue(pos) >= -1e-10


def test_slice_vacuum_keep_all_is_identity():
    rng = rng_for(20)
    Y = random_complex(rng, 6)
    out = matcore.slice_vacuum(Y, dims=(2, 3), keep=2, vac=[])
    assert np.allclose(out, Y)


def test_slice_vacuum_rejects_bad_args():
    Y = np.eye(4)
    with pytest.raises(ValueError, match="factor"):
        matcore.slice_vacuum(Y, dims=(3, 2), keep=1, vac=np.array([1.0, 0.0]))
    with pytest.raises(ValueError, match="unit norm"):
        matcore.slice_vacuum(Y, dims=(2, 2), keep=1, vac=np.array([1.0, 1.0]))


def test_min_eigenvalue_oracle():
    assert np.isclose(matcore.min_eigenvalue(np.array([[1.0, 1.0], [1.0, 1.0]])), 0.0,
                      atol=1e-12)
    assert matcore.is_psd(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert not matcore.is_psd(np.diag([1.0, -1.0]))


def test_matrix_json_roundtrip():
    rng = rng_for(21)
    M = random_complex(rng, 3, 5)
    doc = matcore.matrix_to_json(M)
    assert doc["rows"] == 3 and doc["cols"] == 5
    back = matcore.matrix_from_json(doc)
    assert np.allclose(back, M)
    R = np.real(M)
    assert matcore.matrix_from_json(matcore.matrix_to_json(R)).dtype.kind == "f"


def test_matrix_json_rejects_mismatch():
    doc = {"rows": 2, "cols": 2, "re": [[1.0, 0.0]], "im": [[0.0, 0.0]]}
    with pytest.raises(ValueError, match="shape mismatch"):
        matcore.matrix_from_json(doc)
    with pytest.raises(ValueError, match="malformed"):
        matcore.matrix_from_json({"rows": 1})
