"""Deterministic random instances: matrices, contractions, scalar functions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import symbols
from .config import ExperimentConfig


def trial_rng(*key) -> np.random.Generator:
    """Generator keyed by integers; same key, same stream, forever."""
    return np.random.default_rng([int(k) for k in key])


def random_hermitian_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = 0.5 * (G + G.conj().T)
    top = float(np.abs(np.linalg.eigvalsh(H)).max())
    return H / top if top > 0 else H


def random_contraction(rng: np.random.Generator, n: int) -> np.ndarray:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    top = float(np.linalg.norm(G, 2))
    return G / top if top > 0 else G


def offdiagonal_contraction(rng: np.random.Generator, A: np.ndarray) -> np.ndarray:
    """Contraction supported off the diagonal in A's eigenbasis, the
    commutator-adversarial pattern."""
    _, V = np.linalg.eigh(A)
    G = rng.standard_normal(A.shape) + 1j * rng.standard_normal(A.shape)
    np.fill_diagonal(G, 0.0)
    x = V @ G @ V.conj().T
    top = float(np.linalg.norm(x, 2))
    return x / top if top > 0 else x


def random_pwl_doc(rng: np.random.Generator, max_kinks: int = 32) -> dict:
    """Spec document for a random 1-Lipschitz piecewise-linear function."""
    n_kinks = int(rng.integers(2, max_kinks + 1))
    gaps = rng.uniform(0.05, 1.0, size=n_kinks - 1)
    knots = np.concatenate([[0.0], np.cumsum(gaps)])
    knots = -2.0 + 4.0 * knots / knots[-1]  # strictly increasing across [-2, 2]
    slopes = rng.uniform(-1.0, 1.0, size=n_kinks - 1)
    values = np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])
    return {"kind": "pwl", "params": {"knots": knots.tolist(),
                                      "values": values.tolist()}}


def function_doc_for(config: ExperimentConfig, rng: np.random.Generator) -> dict:
    if config.function_family == "pwl":
        return random_pwl_doc(rng, int(config.function_params.get("max_kinks", 32)))
    return {"kind": config.function_family, "params": dict(config.function_params)}


@dataclass(frozen=True)
class Instance:
    A: np.ndarray
    x: np.ndarray
    f: Callable
    lip: float
    family: str
    f_doc: dict
    x_mode: str
    n: int
    trial: int


def gen_instance(config: ExperimentConfig, trial_index: int,
                 n: int = None, family: str = None) -> Instance:
    """One benchmark instance, a pure function of (seed, trial_index)."""
    rng = trial_rng(config.seed, trial_index)
    if n is None:
        n = config.n_list[trial_index % len(config.n_list)]
    A = random_hermitian_unit(rng, n)
    x_mode = "gauss" if trial_index % 2 == 0 else "offdiag"
    if x_mode == "gauss":
        x = random_contraction(rng, n)
    else:
        x = offdiagonal_contraction(rng, A)
    doc = {"kind": family, "params": {}} if family else function_doc_for(config, rng)
    f, lip, kind = symbols.scalar_from_spec(doc)
    return Instance(A=A, x=x, f=f, lip=lip, family=kind, f_doc=doc,
                    x_mode=x_mode, n=n, trial=trial_index)


def perturbation_pair(config: ExperimentConfig, trial_index: int, n: int):
    """Pair (B, C) with a log-uniform perturbation scale, plus the function."""
    rng = trial_rng(config.seed, trial_index, 2)
    B = random_hermitian_unit(rng, n)
    scale = 10.0 ** rng.uniform(-3.0, 0.0)
    C = B + scale * random_hermitian_unit(rng, n)
    doc = function_doc_for(config, rng)
    f, lip, kind = symbols.scalar_from_spec(doc)
    return B, C, f, lip, kind


def near_crossing_pair(config: ExperimentConfig, trial_index: int, n: int):
    """Adversarial pair for sup-norm growth: eigenvalues packed at spacing
    comparable to the perturbation, where |.| loses the most."""
    rng = trial_rng(config.seed, trial_index, 3)
    lam = np.linspace(-0.5, 0.5, n)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    V, _ = np.linalg.qr(G)
    B = (V * lam) @ V.conj().T
    B = 0.5 * (B + B.conj().T)
    eps = 1.0 / n
    C = B + eps * random_hermitian_unit(rng, n)
    return B, C


def random_gauss_matrix_doc(rng: np.random.Generator, side: int,
                            n_terms: int = 3) -> dict:
    centers = rng.uniform(-1.5, 1.5, size=n_terms)
    widths = rng.uniform(0.6, 2.0, size=n_terms)
    mats_re, mats_im = [], []
    for _ in range(n_terms):
        M = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
        M = M / max(float(np.linalg.norm(M, 2)), 1e-12)
        mats_re.append(M.real.tolist())
        mats_im.append(M.imag.tolist())
    return {"kind": "gauss_matrix",
            "params": {"centers": centers.tolist(), "widths": widths.tolist(),
                       "mats_re": mats_re, "mats_im": mats_im}}
