"""Symbol machinery for multiplier transference and averaged gradients.

Holds the homogeneous slope symbol (ratio xi2/xi1 on the cone |xi2| <= |xi1|,
smoothly blended off it), the per-frequency transference identities, the
segment-averaging operator, a sampled Hormander-Mikhlin-type norm estimator,
and smooth radial cutoffs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import defaults
from .doi import divided_difference_kernel, graph_distance_kernel

_QUARTER = np.pi / 4.0
_BLEND_LEN = np.pi / 2.0


def _blend_coeffs() -> np.ndarray:
    """Quintic on [0, pi/2] matching tan's value and two derivatives at both
    cone boundaries (1, 2, 4) and (-1, 2, -4)."""
    L = _BLEND_LEN
    A = np.zeros((6, 6))
    A[0, 0] = 1.0
    A[1, 1] = 1.0
    A[2, 2] = 2.0
    for k in range(6):
        A[3, k] = L ** k
        A[4, k] = k * L ** (k - 1) if k >= 1 else 0.0
        A[5, k] = k * (k - 1) * L ** (k - 2) if k >= 2 else 0.0
    rhs = np.array([1.0, 2.0, 4.0, -1.0, 2.0, -4.0])
    return np.linalg.solve(A, rhs)


_BLEND = _blend_coeffs()


def _blend_eval(u: float, order: int = 0) -> float:
    c = np.polynomial.polynomial.polyder(_BLEND, order) if order else _BLEND
    return float(np.polynomial.polynomial.polyval(u, c))


@dataclass(frozen=True)
class HomogeneousSymbol:
    """Degree-zero symbol on the plane, determined by a pi-periodic profile."""

    def profile(self, theta: float, order: int = 0) -> float:
        """Angular profile and its derivatives: tan on |theta| <= pi/4 mod pi,
        quintic blend on the complementary arc."""
        th = (theta + _QUARTER) % np.pi - _QUARTER  # reduce to [-pi/4, 3pi/4)
        if th <= _QUARTER:
            t = np.tan(th)
            if order == 0:
                return float(t)
            if order == 1:
                return float(1.0 + t * t)
            if order == 2:
                return float(2.0 * t * (1.0 + t * t))
            raise ValueError("profile derivatives available up to order 2")
        return _blend_eval(th - _QUARTER, order)

    def eval(self, xi1: float, xi2: float) -> float:
        """Value at (xi1, xi2); exactly xi2/xi1 on the cone, 0 at the origin."""
        xi1, xi2 = float(xi1), float(xi2)
        if xi1 == 0.0 and xi2 == 0.0:
            return 0.0
        if abs(xi2) <= abs(xi1):
            return xi2 / xi1
        # off-cone: depend only on the ratio so homogeneity is exact
        if xi2 < 0.0:
            xi1, xi2 = -xi1, -xi2
        u = _QUARTER - np.arctan(xi1 / xi2)  # arc position in (0, pi/2)
        return _blend_eval(u)


def slope_symbol(xi1: float, xi2: float) -> float:
    """Module-level evaluator of the homogeneous slope symbol."""
    return HomogeneousSymbol().eval(xi1, xi2)


def transference_defect(f: Callable, spectrum, t: float) -> dict:
    """Per-frequency identities of the flow and the slope symbol.

    heat_defect compares exp(-t |(dl, df)|^2) with the semigroup kernel built
    from the squared graph distance (identical arithmetic, so 0); the
    multiplier defect compares the slope symbol at frequency (dl, df) with
    the divided difference (also 0 on the cone). Requires Lip(f) <= 1
    pairwise on the spectrum.
    """
    s = np.asarray(spectrum, dtype=float)
    if float(t) < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    fs = np.asarray([float(f(lam)) for lam in s])
    dl = s[:, None] - s[None, :]
    df = fs[:, None] - fs[None, :]
    bad = np.abs(df) > np.abs(dl) * (1.0 + 1e-9) + 1e-12
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(f"f is not 1-Lipschitz on the spectrum: "
                         f"|f({s[i]}) - f({s[j]})| = {abs(df[i, j]):.6g} > "
                         f"|{s[i]} - {s[j]}| = {abs(dl[i, j]):.6g}")
    F = graph_distance_kernel(f, s)
    heat = np.exp(-float(t) * (dl ** 2 + df ** 2))
    heat_defect = float(np.abs(heat - np.exp(-float(t) * F.values)).max())
    dd = divided_difference_kernel(f, s)
    mult_defect = 0.0
    for i in range(len(s)):
        for j in range(len(s)):
            if i == j:
                continue
            val = slope_symbol(dl[i, j], df[i, j])
            mult_defect = max(mult_defect, abs(val - dd.values[i, j]))
    return {"heat_defect": heat_defect, "multiplier_defect": float(mult_defect)}


@dataclass(frozen=True)
class OperatorFunction:
    """Matrix-valued function on R^dim with optional analytic derivatives.

    partials, when given, holds the dim first-order partial evaluators;
    derivative(alpha, point) may supply arbitrary multi-index derivatives.
    """
    dim: int
    side: int
    func: Callable
    partials: tuple | None = None
    derivative: Callable | None = None
    label: str = ""

    def _point(self, p) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=float))
        if p.shape != (self.dim,):
            raise ValueError(f"point shape {p.shape} != dimension ({self.dim},)")
        return p

    def evaluate(self, p) -> np.ndarray:
        out = np.atleast_2d(np.asarray(self.func(self._point(p))))
        if out.shape != (self.side, self.side):
            raise ValueError(f"evaluator returned shape {out.shape}, "
                             f"expected ({self.side}, {self.side})")
        return out

    def partial(self, k: int) -> "OperatorFunction":
        """First-order partial in coordinate k, analytic when available."""
        if not 0 <= k < self.dim:
            raise ValueError(f"coordinate {k} out of range")
        if self.partials is not None:
            fn = self.partials[k]
        elif self.derivative is not None:
            alpha = tuple(1 if i == k else 0 for i in range(self.dim))
            fn = lambda p, a=alpha: self.derivative(a, p)
        else:
            h = defaults.FD_STEP

            def fn(p, k=k, h=h):
                p = np.asarray(p, dtype=float)
                step = h * (1.0 + float(np.abs(p).max(initial=0.0)))
                e = np.zeros_like(p)
                e[k] = step
                return (np.asarray(self.func(p + e)) -
                        np.asarray(self.func(p - e))) / (2.0 * step)
        return OperatorFunction(dim=self.dim, side=self.side, func=fn,
                                label=f"{self.label}_d{k}")


def scalar_function(f: Callable, dim: int = 1, **kw) -> OperatorFunction:
    """Wrap a scalar callable as a 1x1 OperatorFunction."""
    return OperatorFunction(dim=dim, side=1,
                            func=lambda p: np.array([[f(p[0] if dim == 1 else p)]]),
                            **kw)


def segment_average(h: OperatorFunction, s, t, quad_order: int = None) -> np.ndarray:
    """Average of h along the segment from t to s by Gauss-Legendre quadrature.

    Exact for polynomial h of degree < 2 * quad_order; symmetric in (s, t).
    """
    order = defaults.QUAD_ORDER if quad_order is None else int(quad_order)
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    s = h._point(s)
    t = h._point(t)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    theta = 0.5 * (nodes + 1.0)
    out = np.zeros((h.side, h.side), dtype=complex)
    for th, w in zip(theta, weights):
        out += (0.5 * w) * h.evaluate(th * s + (1.0 - th) * t)
    if np.allclose(out.imag, 0.0, atol=0.0):
        return out.real
    return out


def mean_value_identity_defect(f: OperatorFunction, s, t,
                               quad_order: int = None) -> float:
    """Residual of f(t) - f(s) = sum_k (average of d_k f over [s,t]) (t_k - s_k)."""
    s = f._point(s)
    t = f._point(t)
    lhs = f.evaluate(t) - f.evaluate(s)
    acc = np.zeros_like(lhs, dtype=complex)
    for k in range(f.dim):
        acc = acc + segment_average(f.partial(k), s, t, quad_order) * (t[k] - s[k])
    return float(np.linalg.norm(lhs - acc, 2))


def _fd_derivative(h: OperatorFunction, alpha: Sequence[int], point: np.ndarray,
                   fd_step: float) -> np.ndarray:
    alpha = tuple(int(a) for a in alpha)
    order = sum(alpha)
    if order == 0:
        return h.evaluate(point)
    # step grows with derivative order to balance truncation and roundoff
    step = (1e-16 ** (1.0 / (order + 2))) * max(fd_step / defaults.FD_STEP, 1e-3) \
        * (1.0 + float(np.abs(point).max(initial=0.0)))
    k = next(i for i, a in enumerate(alpha) if a > 0)
    lower = tuple(a - 1 if i == k else a for i, a in enumerate(alpha))
    e = np.zeros(h.dim)
    e[k] = step
    hi = _fd_derivative(h, lower, point + e, fd_step)
    lo = _fd_derivative(h, lower, point - e, fd_step)
    return (hi - lo) / (2.0 * step)


def hm_derivative(h: OperatorFunction, alpha: Sequence[int], point,
                  fd_step: float = defaults.FD_STEP) -> np.ndarray:
    """Multi-index derivative: analytic when declared, nested central
    differences otherwise."""
    point = h._point(point)
    if h.derivative is not None:
        return np.atleast_2d(np.asarray(h.derivative(tuple(int(a) for a in alpha),
                                                     point)))
    return _fd_derivative(h, alpha, point, fd_step)


def _multi_indices(dim: int, max_order: int):
    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for a in range(remaining + 1):
            yield from rec(prefix + (a,), remaining - a, slots - 1)

    for order in range(max_order + 1):
        yield from rec((), order, dim)


def default_hm_grid(dim: int, r_min: float = 1e-2, r_max: float = 16.0,
                    n_radial: int = 96, n_angular: int = 16) -> np.ndarray:
    """Geometric radial shells crossed with uniform directions, origin excluded."""
    radii = np.geomspace(r_min, r_max, n_radial)
    if dim == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif dim == 2:
        ang = np.linspace(0.0, 2.0 * np.pi, n_angular, endpoint=False)
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    else:
        rng = np.random.default_rng(12345)  # fixed: grids must be deterministic
        dirs = rng.standard_normal((n_angular, dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return (radii[:, None, None] * dirs[None]).reshape(-1, dim)


def hm_norm_estimate(h: OperatorFunction, n: int = None, sample_grid=None,
                     fd_step: float = defaults.FD_STEP) -> float:
    """Sampled lower bound of max_{|alpha| <= n+2} sup_t |t|^|alpha| |d_alpha h(t)|.

    n defaults to the domain dimension. The grid must not contain the origin.
    """
    n = h.dim if n is None else int(n)
    if sample_grid is None:
        sample_grid = default_hm_grid(h.dim)
    pts = np.atleast_2d(np.asarray(sample_grid, dtype=float))
    if pts.shape[1] != h.dim:
        raise ValueError(f"grid dimension {pts.shape[1]} != {h.dim}")
    norms = np.linalg.norm(pts, axis=1)
    if norms.min(initial=np.inf) <= 0.0:
        raise ValueError("sample grid must exclude the origin")
    best = 0.0
    for alpha in _multi_indices(h.dim, n + 2):
        order = sum(alpha)
        for p, r in zip(pts, norms):
            val = np.linalg.norm(hm_derivative(h, alpha, p, fd_step), 2)
            best = max(best, (r ** order) * float(val))
    return best


def derivative_shift(h: OperatorFunction, order: int = 1) -> OperatorFunction:
    """The order-th derivative of a one-dimensional h as a function in its own
    right, keeping analytic higher derivatives available when h has them."""
    if h.dim != 1:
        raise ValueError("derivative_shift needs a one-dimensional domain")
    order = int(order)
    if h.derivative is not None:
        return OperatorFunction(
            dim=1, side=h.side,
            func=lambda p: h.derivative((order,), p),
            derivative=lambda a, p: h.derivative((a[0] + order,), p),
            label=f"{h.label}_d{order}")
    return OperatorFunction(
        dim=1, side=h.side,
        func=lambda p: _fd_derivative(h, (order,), h._point(p), defaults.FD_STEP),
        label=f"{h.label}_d{order}")


def _smooth_step(v: float) -> float:
    """C-infinity step: 0 for v <= 0, 1 for v >= 1."""
    if v <= 0.0:
        return 0.0
    if v >= 1.0:
        return 1.0
    a = np.exp(-1.0 / v)
    b = np.exp(-1.0 / (1.0 - v))
    return float(a / (a + b))


def radial_cutoff(l: float, c_target: float = None, dim: int = 1,
                  sample_grid=None) -> tuple:
    """Smooth radial plateau: 1 on |xi| <= l, 0 on |xi| >= 2l.

    Returns (OperatorFunction, report); the report holds the measured max of
    |xi|^|alpha| |d_alpha phi| over |alpha| <= dim+2 on the grid, which is
    scale-invariant in l by construction phi_l(xi) = phi_1(xi / l).
    """
    l = float(l)
    if l <= 0.0:
        raise ValueError(f"cutoff radius must be positive, got {l}")

    def fn(p, l=l):
        rho = float(np.linalg.norm(np.atleast_1d(p))) / l
        return np.array([[_smooth_step(2.0 - rho)]])

    phi = OperatorFunction(dim=dim, side=1, func=fn, label=f"cutoff_l{l:g}")
    if sample_grid is None:
        sample_grid = default_hm_grid(dim, r_min=0.05 * l, r_max=4.0 * l,
                                      n_radial=128)
    measured = hm_norm_estimate(phi, n=dim, sample_grid=sample_grid)
    report = {
        "measured": measured,
        "c_target": c_target,
        "ok": None if c_target is None else bool(measured <= c_target),
        "grid_points": int(np.atleast_2d(sample_grid).shape[0]),
    }
    return phi, report


def scalar_from_spec(doc: dict):
    """Scalar Lipschitz function from a config document.

    Kinds: "abs"; "pwl" with params {"knots", "values"} (constant beyond the
    knot range); "poly" with params {"coeffs", "domain"}; "bump" for
    u -> u^2 exp(-u^2). Returns (callable, lipschitz bound, kind).
    """
    kind = doc.get("kind")
    params = doc.get("params", {})
    if kind == "abs":
        return abs, 1.0, "abs"
    if kind == "bump":
        grid = np.linspace(-6.0, 6.0, 4001)
        dv = (2.0 * grid - 2.0 * grid ** 3) * np.exp(-grid ** 2)
        lip = float(np.abs(dv).max())

        def f(u):
            return float(u * u * np.exp(-u * u))

        return f, lip, "bump"
    if kind == "pwl":
        knots = np.asarray(params["knots"], dtype=float)
        values = np.asarray(params["values"], dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or len(knots) < 2:
            raise ValueError("pwl spec needs matching knots/values, length >= 2")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("pwl knots must be strictly increasing")
        lip = float(np.abs(np.diff(values) / np.diff(knots)).max())

        def f(u, knots=knots, values=values):
            return float(np.interp(u, knots, values))

        return f, lip, "pwl"
    if kind == "poly":
        coeffs = np.asarray(params["coeffs"], dtype=float)
        lo, hi = params.get("domain", (-2.0, 2.0))
        dcoef = np.polynomial.polynomial.polyder(coeffs)
        grid = np.linspace(lo, hi, 512)
        lip = float(np.abs(np.polynomial.polynomial.polyval(grid, dcoef)).max()) \
            if len(dcoef) else 0.0

        def f(u, coeffs=coeffs):
            return float(np.polynomial.polynomial.polyval(u, coeffs))

        return f, lip, "poly"
    raise ValueError(f"unknown scalar function kind {kind!r}")


def gauss_matrix_from_spec(doc: dict) -> OperatorFunction:
    """Matrix-valued function sum_j exp(-((u - c_j)/w_j)^2) M_j on the line,
    with analytic derivatives of all orders."""
    params = doc.get("params", {})
    centers = np.asarray(params["centers"], dtype=float)
    widths = np.asarray(params["widths"], dtype=float)
    mats = [np.asarray(m_re) + 1j * np.asarray(m_im) for m_re, m_im in
            zip(params["mats_re"], params["mats_im"])]
    if not (len(centers) == len(widths) == len(mats)) or len(mats) == 0:
        raise ValueError("gauss_matrix spec needs matching centers/widths/mats")
    if np.any(widths <= 0):
        raise ValueError("gauss_matrix widths must be positive")
    side = mats[0].shape[0]
    if any(M.shape != (side, side) for M in mats):
        raise ValueError("gauss_matrix blocks must share one square side")

    def func(p):
        u = float(np.atleast_1d(p)[0])
        out = np.zeros((side, side), dtype=complex)
        for c, w, M in zip(centers, widths, mats):
            out += np.exp(-((u - c) / w) ** 2) * M
        return out

    def derivative(alpha, p):
        (order,) = alpha
        u = float(np.atleast_1d(p)[0])
        out = np.zeros((side, side), dtype=complex)
        for c, w, M in zip(centers, widths, mats):
            z = (u - c) / w
            # d^m/du^m exp(-z^2) = (-1/w)^m H_m(z) exp(-z^2), physicists' H_m
            out += ((-1.0 / w) ** order) * _hermite(order, z) * np.exp(-z * z) * M
        return out

    return OperatorFunction(dim=1, side=side, func=func, derivative=derivative,
                            label="gauss_matrix")


def _hermite(m: int, z: float) -> float:
    h0, h1 = 1.0, 2.0 * z
    if m == 0:
        return h0
    for _ in range(m - 1):
        h0, h1 = h1, 2.0 * z * h1 - 2.0 * (_ + 1) * h0
    return h1
