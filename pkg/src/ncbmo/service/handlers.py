"""Transport-free service handlers.

Each handler takes and returns plain JSON-safe documents; the FastAPI app and
the in-process CLI client both call these, so the two transports cannot
disagree.
"""
from __future__ import annotations

import numpy as np

from .. import bmo, doi, matcore, symbols
from ..harness.config import ConfigError, ExperimentConfig, config_from_doc
from ..harness.experiments import EXPERIMENTS
from ..harness.reports import rows_to_csv, sanitize
from ..harness.suite import run_dilation_demo
from ..harness.verify import run_property_checks


def handle_default_config() -> dict:
    return ExperimentConfig().to_doc()


def handle_verify(seed: int = 0) -> dict:
    checks = run_property_checks(int(seed))
    return {"ok": all(c.ok for c in checks),
            "checks": [c.to_doc() for c in checks]}


def _result_doc(res) -> dict:
    return {
        "name": res.name,
        "ok": res.ok,
        "rows": [row.to_doc() for row in res.rows],
        "summary": sanitize(res.summary),
        "csv": rows_to_csv(res.rows),
    }


def handle_bench(name: str, config_doc: dict = None) -> dict:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}")
    config = config_from_doc(config_doc or {})
    return _result_doc(EXPERIMENTS[name](config))


def handle_dilation(config_doc: dict = None) -> dict:
    config = config_from_doc(config_doc or {})
    return _result_doc(run_dilation_demo(config))


def _matrix_from_doc(doc: dict) -> np.ndarray:
    doc = dict(doc)
    if doc.get("im") is None:  # real matrices may omit the imaginary part
        doc["im"] = (np.zeros((doc.get("rows", 0), doc.get("cols", 0)))).tolist()
    try:
        return matcore.matrix_from_json(doc)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad matrix document: {exc}") from None


def _kernel_from_doc(doc: dict):
    doc = dict(doc)
    if doc.get("values_im") is None:
        side = len(doc.get("values_re", []))
        doc["values_im"] = np.zeros((side, side)).tolist()
    if doc.get("blocks") is None:
        doc.pop("blocks", None)
    try:
        return doi.kernel_from_json(doc)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad kernel document: {exc}") from None


def handle_eig(doc: dict) -> dict:
    M = _matrix_from_doc(doc["matrix"])
    H = matcore.require_hermitian(M)
    D = matcore.eig_hermitian(H, cluster_tol=doc.get("cluster_tol"))
    return {
        "dim": int(D.dim),
        "spectrum": D.spectrum.tolist(),
        "cluster_sizes": [int(np.rint(np.trace(P).real)) for P in D.projections],
    }


def handle_markov(doc: dict) -> dict:
    kernel = _kernel_from_doc(doc["kernel"])
    return {"report": sanitize(doi.markov_defects(kernel).to_json())}


def handle_bmo_report(doc: dict) -> dict:
    A = matcore.require_hermitian(_matrix_from_doc(doc["matrix"]))
    x = _matrix_from_doc(doc["x"])
    D = matcore.eig_hermitian(A)
    if "kernel" in doc and doc["kernel"] is not None:
        F = _kernel_from_doc(doc["kernel"])
    else:
        f, _, _ = symbols.scalar_from_spec(doc.get("function") or {"kind": "abs"})
        F = doi.graph_distance_kernel(f, D.spectrum)
    S = bmo.SchurSemigroup(D, F)
    rep = bmo.bmo_norm(S, x)
    return {"report": sanitize(rep.to_json())}
