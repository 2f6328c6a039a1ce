"""Fast deterministic property checks over every core module.

These are the library's own invariants rechecked at runtime (the test suite
covers them more broadly); the CLI `verify` subcommand and the full suite run
them, in module order, before any experiment.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import bmo, clifford, dilation, doi, matcore, symbols
from .instances import random_contraction, random_hermitian_unit, random_pwl_doc


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.defect <= self.tol

    def to_doc(self) -> dict:
        return {"name": self.name, "defect": float(self.defect),
                "tol": float(self.tol), "ok": bool(self.ok)}


def run_property_checks(seed: int = 0) -> list:
    rng = np.random.default_rng([int(seed), 97])
    checks = []
    fdoc = random_pwl_doc(rng, max_kinks=12)
    f, _, _ = symbols.scalar_from_spec(fdoc)

    # matcore: spectral resolution and norms
    H = random_hermitian_unit(rng, 8)
    D = matcore.eig_hermitian(H)
    checks.append(CheckResult("matcore.eig_reconstruction",
                              matcore.op_norm(D.source - H), 1e-8))
    total = sum(D.projections)
    ortho = 0.0
    for i, P in enumerate(D.projections):
        for j, Q in enumerate(D.projections):
            if i != j:
                ortho = max(ortho, matcore.op_norm(P @ Q))
    checks.append(CheckResult(
        "matcore.projection_resolution",
        matcore.op_norm(total - np.eye(8)) + ortho, 1e-10))
    M = random_contraction(rng, 6)
    checks.append(CheckResult(
        "matcore.schatten2_frobenius",
        abs(matcore.schatten_norm(M, 2) - np.linalg.norm(M, "fro")), 1e-10))

    # clifford: anticommutation and vacuum moments
    G = rng.standard_normal((4, 6))
    gram = G @ G.T / 6.0
    rep = clifford.build_clifford(gram)
    car = 0.0
    for _ in range(6):
        xi = rng.standard_normal(4)
        eta = rng.standard_normal(4)
        car = max(car, clifford.car_defect(rep, xi, eta))
    checks.append(CheckResult("clifford.car_defect", car, 1e-9))
    moment = 0.0
    for i in range(4):
        si = clifford.field_operator(rep, np.eye(4)[i])
        for j in range(4):
            sj = clifford.field_operator(rep, np.eye(4)[j])
            moment = max(moment, abs(clifford.vacuum_trace(rep, si @ sj)
                                     - gram[i, j]))
    checks.append(CheckResult("clifford.vacuum_two_point", moment, 1e-10))

    # doi: factorization and the positivity certificate
    A = random_hermitian_unit(rng, 7)
    x = random_contraction(rng, 7)
    DA = matcore.eig_hermitian(A)
    fA = matcore.apply_scalar_function(DA, f)
    comm_a = DA.source @ x - x @ DA.source
    comm_f = fA @ x - x @ fA
    dd = doi.divided_difference_kernel(f, DA.spectrum)
    checks.append(CheckResult(
        "doi.commutator_factorization",
        matcore.op_norm(comm_f - doi.schur_apply(dd, DA, comm_a)), 1e-9))
    F = doi.graph_distance_kernel(f, DA.spectrum)
    rep_m = doi.markov_defects(F)
    worst = max(max(0.0, -rep_m.min_eigs.min()),
                rep_m.diag_defects.max(), rep_m.sym_defects.max())
    checks.append(CheckResult("doi.markov_certificate", worst, 1e-10))

    # dilation: identity defect and the path modulus
    base = matcore.eig_hermitian(np.diag([0.0, 0.5, 1.0, 1.0]))
    phi = doi.semigroup_kernel(doi.graph_distance_kernel(f, base.spectrum), 1.0)
    sysd = dilation.build_dilation(base, phi, depth=2)
    xs = [random_contraction(rng, 4) for _ in range(3)]
    checks.append(CheckResult("dilation.identity_defect",
                              dilation.verify_dilation(sysd, xs), 1e-9))
    rows = dilation.path_modulus_check(sysd, xs, tol=None)
    slack = min(r.slack for r in rows)
    checks.append(CheckResult("dilation.path_modulus", max(0.0, -slack), 1e-9))

    # symbols: transference arithmetic and quadrature identities
    tr = symbols.transference_defect(f, DA.spectrum, t=1.0)
    checks.append(CheckResult("symbols.heat_transference",
                              tr["heat_defect"], 1e-15))
    checks.append(CheckResult("symbols.multiplier_transference",
                              tr["multiplier_defect"], 1e-12))
    h = symbols.scalar_function(lambda u: u ** 3 - u,
                                partials=(lambda p: np.array([[3.0 * p[0] ** 2 - 1.0]]),))
    checks.append(CheckResult(
        "symbols.mean_value_identity",
        symbols.mean_value_identity_defect(h, [-0.8], [1.1]), 1e-12))
    g = symbols.scalar_function(lambda u: u * u)
    s, t = -0.4, 1.2
    want = (s * s + s * t + t * t) / 3.0
    got = symbols.segment_average(g, [s], [t])[0, 0]
    checks.append(CheckResult("symbols.segment_average_quadratic",
                              abs(got - want), 1e-12))

    # bmo: closed-form anchor and the variance positivity
    D2 = matcore.eig_hermitian(np.diag([0.0, 1.0]))
    F2 = doi.graph_distance_kernel(lambda u: u, D2.spectrum)
    S2 = bmo.SchurSemigroup(D2, F2)
    e12 = np.zeros((2, 2))
    e12[0, 1] = 1.0
    rep_b = bmo.bmo_norm(S2, e12)
    checks.append(CheckResult("bmo.flip_flow_closed_form",
                              abs(rep_b.max_norm - 1.0), 1e-9))
    S = bmo.SchurSemigroup(DA, F)
    vmin = bmo.variance_min_eigenvalue(S, x)
    checks.append(CheckResult("bmo.variance_positive", max(0.0, -vmin), 1e-9))
    return checks
