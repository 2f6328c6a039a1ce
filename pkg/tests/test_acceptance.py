"""End-to-end acceptance suite.

One test per shipped criterion; each prints a single pass/fail line with the
measured quantities before asserting. Unknown-constant claims are checked
against the generous configured caps; algebraic identities are checked tight.
"""
import math

import numpy as np
import pytest

from ncbmo import bmo, clifford, dilation, doi, matcore, symbols
from ncbmo.harness import ExperimentConfig, config_from_doc, rows_to_csv, run_suite
from ncbmo.harness.instances import (gen_instance, perturbation_pair,
                                     random_contraction, random_gauss_matrix_doc,
                                     random_pwl_doc, trial_rng)
from ncbmo.harness.reports import CSV_COLUMNS, FAIL
from ncbmo.harness.suite import write_reports


def _line(num: int, ok: bool, label: str, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {status} {label}: {detail}")


def _random_spectrum(rng, max_points: int = 12) -> np.ndarray:
    m = int(rng.integers(2, max_points + 1))
    return np.sort(rng.uniform(-2.0, 2.0, size=m))


def _pwl(rng):
    f, lip, _ = symbols.scalar_from_spec(random_pwl_doc(rng))
    return f, lip


# ---------------------------------------------------------------- criterion 1


def test_criterion_01_car_relations_and_vacuum_moments():
    worst_car = 0.0
    worst_mom = 0.0
    for draw in range(50):
        rng = trial_rng(81, draw)
        d = int(rng.integers(2, 6))
        rank = int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, rank))
        gram = G @ G.T
        R = clifford.build_clifford(gram)
        eye = np.eye(d)
        fields = [clifford.field_operator(R, eye[i]) for i in range(d)]
        for i in range(d):
            for j in range(i, d):
                worst_car = max(worst_car, clifford.car_defect(R, eye[i], eye[j]))
                mom = clifford.vacuum_trace(R, fields[i] @ fields[j])
                worst_mom = max(worst_mom, abs(mom - gram[i, j]))
        xi = rng.standard_normal(d)
        eta = rng.standard_normal(d)
        worst_car = max(worst_car, clifford.car_defect(R, xi, eta))
    ok = worst_car <= 1e-9 and worst_mom <= 1e-10
    _line(1, ok, "anticommutation and vacuum moments",
          f"50 gram draws side<=5, car defect {worst_car:.2e}, "
          f"moment defect {worst_mom:.2e}")
    assert worst_car <= 1e-9
    assert worst_mom <= 1e-10


# ------------------------------------------------------------ criteria 2 and 3


@pytest.fixture(scope="module")
def dilation_systems():
    """Two towers: 2-point spectrum at depth 3 and 3-point spectrum at depth 2,
    both on a side-4 base, with 20 samples each."""
    systems = []
    for key, lam, depth in ((82, (0.2, 0.2, 1.0, 1.0), 3),
                            (83, (0.0, 0.4, 1.0, 1.0), 2)):
        rng = trial_rng(key)
        n = len(lam)
        Q = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
        A = matcore.require_hermitian(Q @ np.diag(np.asarray(lam)) @ Q.conj().T)
        D = matcore.eig_hermitian(A)
        f, _ = _pwl(rng)
        phi = doi.semigroup_kernel(doi.graph_distance_kernel(f, D.spectrum), 1.0)
        S = dilation.build_dilation(D, phi, depth=depth)
        xs = [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
              for _ in range(20)]
        systems.append((S, xs))
    return systems


def test_criterion_02_dilation_intertwining_identity(dilation_systems):
    worst = 0.0
    shapes = []
    for S, xs in dilation_systems:
        worst = max(worst, dilation.verify_dilation(S, xs))
        shapes.append(f"{S.base.n_clusters}pt/K={S.depth}/dim={S.total_dim}")
    ok = worst <= 1e-9
    _line(2, ok, "conditional expectations reproduce the flow",
          f"{', '.join(shapes)}, 20 samples each, max defect {worst:.2e}")
    assert worst <= 1e-9


def test_criterion_03_increment_bound_along_the_tower(dilation_systems):
    min_slack = math.inf
    n_pairs = 0
    for S, xs in dilation_systems:
        rows = dilation.path_modulus_check(S, xs, tol=None)
        n_pairs += len(rows)
        min_slack = min(min_slack, min(r.slack for r in rows))
    ok = min_slack >= -1e-9
    _line(3, ok, "embedding increments obey the modulus bound",
          f"{n_pairs} (sample, leg-pair) rows, min slack {min_slack:.2e}")
    assert min_slack >= -1e-9


# ------------------------------------------------------------ criteria 4 and 5


@pytest.fixture(scope="module")
def markov_draws():
    """100 draws of (spectrum <= 12 points, random slope-bounded kink f)."""
    draws = []
    for i in range(100):
        rng = trial_rng(84, i)
        spectrum = _random_spectrum(rng)
        f, _ = _pwl(rng)
        draws.append((spectrum, f))
    return draws


def test_criterion_04_semigroup_kernel_certificate(markov_draws):
    worst_eig = 0.0
    worst_diag = 0.0
    worst_sym = 0.0
    for spectrum, f in markov_draws:
        for rep in (doi.markov_defects(doi.graph_distance_kernel(f, spectrum)),
                    doi.markov_defects(doi.block_generator_kernel(spectrum))):
            worst_eig = min(worst_eig, rep.min_eig)
            worst_diag = max(worst_diag, rep.max_diag_defect)
            worst_sym = max(worst_sym, rep.max_sym_defect)
    ok = worst_eig >= -1e-10 and worst_diag <= 1e-12 and worst_sym <= 1e-12
    _line(4, ok, "kernel flows stay unital, symmetric, PSD",
          f"100 draws x 2 kernels over the dyadic grid, min eig {worst_eig:.2e}, "
          f"diag {worst_diag:.2e}, sym {worst_sym:.2e}")
    assert worst_eig >= -1e-10
    assert worst_diag <= 1e-12
    assert worst_sym <= 1e-12


def test_criterion_05_variance_positivity(markov_draws):
    worst = 0.0
    for i, (spectrum, f) in enumerate(markov_draws):
        m = spectrum.size
        D = matcore.eig_hermitian(np.diag(spectrum))
        S = bmo.SchurSemigroup(D, doi.graph_distance_kernel(f, spectrum))
        S2 = bmo.SchurSemigroup(
            doi.doubled_decomposition(D),
            doi.lift_block_kernel(doi.block_generator_kernel(spectrum)))
        rng = trial_rng(85, i)
        for _ in range(20):
            x = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
            worst = min(worst, bmo.variance_min_eigenvalue(S, x))
            x2 = rng.normal(size=(2 * m, 2 * m)) + 1j * rng.normal(size=(2 * m, 2 * m))
            worst = min(worst, bmo.variance_min_eigenvalue(S2, x2))
    ok = worst >= -1e-9
    _line(5, ok, "flow variance is positive semidefinite",
          f"200 semigroups x 20 samples, min eigenvalue {worst:.2e}")
    assert worst >= -1e-9


# ---------------------------------------------------------------- criterion 6


def test_criterion_06_exact_lipschitz_subidentities():
    cfg = ExperimentConfig(trials=20, n_list=(4, 8, 16))
    worst_r2 = -math.inf
    worst_dbl = 0.0
    worst_fact = 0.0
    worst_diag = 0.0
    for trial in range(cfg.trials):
        n = cfg.n_list[trial % len(cfg.n_list)]
        B, C, f, lip, _ = perturbation_pair(cfg, trial, n)
        fB = matcore.apply_scalar_function(matcore.eig_hermitian(B), f)
        fC = matcore.apply_scalar_function(matcore.eig_hermitian(C), f)
        r2 = (matcore.schatten_norm(fB - fC, 2.0)
              / matcore.schatten_norm(B - C, 2.0))
        worst_r2 = max(worst_r2, r2 - lip)

        A2 = np.block([[B, np.zeros_like(B)], [np.zeros_like(C), C]])
        flip = np.block([[np.zeros_like(B), np.eye(n)],
                         [np.eye(n), np.zeros_like(C)]])
        comm2 = A2 @ flip - flip @ A2
        for p in (1.5, 2.0, 4.0, 8.0, 16.0):
            want = 2.0 ** (1.0 / p) * matcore.schatten_norm(B - C, p)
            got = matcore.schatten_norm(comm2, p)
            worst_dbl = max(worst_dbl, abs(got - want) / max(1.0, want))

        inst = gen_instance(cfg, trial)
        D = matcore.eig_hermitian(inst.A)
        As = D.source
        fA = matcore.apply_scalar_function(D, inst.f)
        comm_a = As @ inst.x - inst.x @ As
        comm_f = fA @ inst.x - inst.x @ fA
        dd = doi.divided_difference_kernel(inst.f, D.spectrum)
        fact = matcore.op_norm(comm_f - doi.schur_apply(dd, D, comm_a))
        worst_fact = max(worst_fact, fact / max(1.0, matcore.op_norm(comm_f)))

        y = random_contraction(trial_rng(cfg.seed, trial, 1), inst.n)
        z = doi.schur_apply(dd, D, y)
        worst_diag = max(worst_diag,
                         matcore.op_norm(sum(P @ z @ P for P in D.projections)))
    ok = (worst_fact <= 1e-9 and worst_r2 <= 1e-9
          and worst_dbl <= 1e-9 and worst_diag <= 1e-12)
    _line(6, ok, "exact commutator and doubling identities",
          f"20 trials, factorization {worst_fact:.2e}, r(2)-slope {worst_r2:.2e}, "
          f"doubling {worst_dbl:.2e}, diagonal {worst_diag:.2e}")
    assert worst_fact <= 1e-9
    assert worst_r2 <= 1e-9
    assert worst_dbl <= 1e-9
    assert worst_diag <= 1e-12


# ---------------------------------------------------------------- criterion 7


def test_criterion_07_multiplier_transference_arithmetic():
    worst_mult = 0.0
    worst_heat = 0.0
    for draw in range(100):
        rng = trial_rng(86, draw)
        spectrum = _random_spectrum(rng)
        f, _ = _pwl(rng)
        t = float(2.0 ** rng.integers(-20, 21))
        rep = symbols.transference_defect(f, spectrum, t)
        worst_mult = max(worst_mult, rep["multiplier_defect"])
        worst_heat = max(worst_heat, rep["heat_defect"])
    ok = worst_mult <= 1e-12
    _line(7, ok, "shared arithmetic between kernels and symbols",
          f"100 (f, spectrum) draws, multiplier defect {worst_mult:.2e}, "
          f"heat defect {worst_heat:.2e}")
    assert worst_mult <= 1e-12


# ---------------------------------------------------------------- criterion 8


@pytest.fixture(scope="module")
def default_suite(tmp_path_factory):
    cfg = ExperimentConfig()
    result = run_suite(cfg)
    out = tmp_path_factory.mktemp("acceptance-reports")
    write_reports(str(out), cfg, result)
    return cfg, result, out / "report.csv"


def test_criterion_08_empirical_constant_caps(default_suite):
    cfg, result, csv_path = default_suite

    def sup_norm(names):
        vals = [r.normalized_constant for r in result.rows
                if r.experiment in names and r.normalized_constant is not None
                and r.status in ("pass", "fail")]
        return max(vals)

    sup_p = sup_norm({"lipschitz"})
    sup_logn = sup_norm({"logn"})
    sup_bmo = sup_norm({"bmo", "bmo_doi", "vector_bmo"})
    judged_p = {r.p for r in result.rows
                if r.experiment == "lipschitz" and r.status in ("pass", "fail")}
    logn_sizes = {r.n for r in result.rows if r.experiment == "logn"}
    n_fail = sum(1 for r in result.rows if r.status == FAIL)

    text = csv_path.read_text()
    lines = text.splitlines()

    ok = (n_fail == 0 and sup_p <= cfg.caps["p_ratio"]
          and sup_logn <= cfg.caps["logn"] and sup_bmo <= cfg.caps["bmo"])
    _line(8, ok, "empirical constants stay under the caps",
          f"{len(result.rows)} rows to CSV, sup p-ratio {sup_p:.3f}<=10, "
          f"sup log-growth {sup_logn:.3f}<=5, sup flow-ratio {sup_bmo:.3f}<=100")
    assert n_fail == 0
    assert sup_p <= cfg.caps["p_ratio"]
    assert sup_logn <= cfg.caps["logn"]
    assert sup_bmo <= cfg.caps["bmo"]
    assert judged_p == {1.5, 2.0, 4.0, 8.0, 16.0}
    assert max(r.n for r in result.rows if r.experiment == "lipschitz") == 64
    assert logn_sizes == {4, 8, 16, 32, 64, 128}
    assert cfg.trials == 100
    # the CSV is the primary output: header plus one line per row
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == len(result.rows) + 1
    assert text.endswith("\n")


# ---------------------------------------------------------------- criterion 9


def test_criterion_09_quadrature_identities():
    rng = trial_rng(87)
    worst_poly = 0.0
    for _ in range(5):
        coeffs = rng.uniform(-1.0, 1.0, size=32)  # degree 31
        p = np.polynomial.Polynomial(coeffs)
        P = p.integ()
        s, t = np.sort(rng.uniform(-2.0, 2.0, size=2))
        t = max(t, s + 0.3)
        h = symbols.scalar_function(p)
        got = symbols.segment_average(h, [s], [t], quad_order=16)[0, 0]
        want = (P(t) - P(s)) / (t - s)
        worst_poly = max(worst_poly, abs(got - want) / max(1.0, abs(want)))

    worst_dir = 0.0
    hmat = symbols.gauss_matrix_from_spec(random_gauss_matrix_doc(rng, 2))
    for _ in range(10):
        s, t = rng.uniform(-1.5, 1.5, size=2)
        worst_dir = max(worst_dir,
                        symbols.mean_value_identity_defect(hmat, [s], [t]))
    h2 = symbols.scalar_function(
        lambda u: np.exp(-(u[..., 0] ** 2) - 0.5 * u[..., 1] ** 2), dim=2)
    for _ in range(5):
        s = rng.uniform(-1.0, 1.0, size=2)
        t = rng.uniform(-1.0, 1.0, size=2)
        worst_dir = max(worst_dir, symbols.mean_value_identity_defect(h2, s, t))

    ok = worst_poly <= 1e-12 and worst_dir <= 1e-8
    _line(9, ok, "segment averages close the difference identity",
          f"degree-31 exactness {worst_poly:.2e}, "
          f"directional defect {worst_dir:.2e} at order 16")
    assert worst_poly <= 1e-12
    assert worst_dir <= 1e-8


# --------------------------------------------------------------- criterion 10


def test_criterion_10_byte_identical_reruns():
    doc = {"seed": 11, "trials": 4, "n_list": [4, 8], "logn_n_list": [4, 8],
           "vector_n_list": [4], "p_grid": [1.5, 2.0, 4.0]}
    cfg = config_from_doc(doc)
    first = rows_to_csv(run_suite(cfg).rows).encode()
    second = rows_to_csv(run_suite(cfg).rows).encode()
    ok = first == second and len(first.splitlines()) > 50
    _line(10, ok, "identical config reproduces the CSV byte for byte",
          f"{len(first.splitlines()) - 1} rows, {len(first)} bytes, "
          f"equal={first == second}")
    assert first == second
    assert len(first.splitlines()) > 50
