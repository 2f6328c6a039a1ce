"""Suite orchestration: property checks, experiments, report files."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .. import dilation, doi, matcore
from .config import ExperimentConfig
from .experiments import EXPERIMENTS, ExperimentResult
from .instances import random_contraction, random_pwl_doc, trial_rng
from .reports import FAIL, ReportRow, rows_to_csv, write_csv, write_json
from .verify import run_property_checks
from .. import symbols

EXPERIMENT_ORDER = ("lipschitz", "logn", "bmo", "vector")


@dataclass
class SuiteResult:
    checks: list = field(default_factory=list)
    experiments: list = field(default_factory=list)

    @property
    def rows(self) -> list:
        out = []
        for res in self.experiments:
            out.extend(res.rows)
        return out

    @property
    def failing_rows(self) -> list:
        return [r for r in self.rows if r.status == FAIL]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and not self.failing_rows

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary_doc(self, config: ExperimentConfig) -> dict:
        return {
            "config": config.to_doc(),
            "checks": [c.to_doc() for c in self.checks],
            "experiments": {res.name: res.summary for res in self.experiments},
            "ok": self.ok,
        }


def run_dilation_demo(config: ExperimentConfig) -> ExperimentResult:
    """Build one dilation tower from the config and certify it row by row."""
    res = ExperimentResult("dilation")
    rng = trial_rng(config.seed, 5)
    m = config.dilation_spectrum_size
    lam = np.linspace(0.0, 1.0, m)
    diag = np.concatenate([lam, lam[-1:]])  # one repeated point: a real cluster
    G = rng.standard_normal((m + 1, m + 1))
    Q, _ = np.linalg.qr(G)
    base = matcore.eig_hermitian(Q @ np.diag(diag) @ Q.T)
    f, _, _ = symbols.scalar_from_spec(random_pwl_doc(rng, max_kinks=8))
    phi = doi.semigroup_kernel(doi.graph_distance_kernel(f, base.spectrum), 1.0)
    sysd = dilation.build_dilation(base, phi, depth=config.dilation_depth)
    xs = [random_contraction(rng, base.dim) for _ in range(5)]
    for trial, x in enumerate(xs):
        defect = dilation.verify_dilation(sysd, [x])
        res.rows.append(ReportRow.judged("dilation", base.dim, None, trial,
                                         defect, defect, config.exact_tol))
        slack = min(r.slack for r in dilation.path_modulus_check(sysd, [x],
                                                                 tol=None))
        res.rows.append(ReportRow.judged("dilation_path", base.dim, None,
                                         trial, slack, max(0.0, -slack),
                                         config.exact_tol))
    res.summary = {
        "spectrum_size": int(base.n_clusters),
        "depth": int(config.dilation_depth),
        "total_dim": int(sysd.total_dim),
    }
    return res


def run_experiments(config: ExperimentConfig, names=None) -> list:
    names = EXPERIMENT_ORDER if names is None else tuple(names)
    out = []
    for name in names:
        if name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {name!r}")
        out.append(EXPERIMENTS[name](config))
    return out


def run_suite(config: ExperimentConfig, names=None,
              with_checks: bool = True) -> SuiteResult:
    result = SuiteResult()
    if with_checks:
        result.checks = run_property_checks(config.seed)
    result.experiments = run_experiments(config, names)
    return result


def write_reports(out_dir: str, config: ExperimentConfig,
                  result: SuiteResult) -> dict:
    """Emit report.csv and summary.json; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "report.csv")
    json_path = os.path.join(out_dir, "summary.json")
    write_csv(csv_path, result.rows)
    write_json(json_path, result.summary_doc(config))
    return {"csv": csv_path, "json": json_path}
