"""Isotherm models and the derived scalar functions of concentration.

With two species at instantaneous exchange equilibrium and unit total
density, the adsorbed concentrations reduce to functions of the first
gas concentration c (the second is 1 - c): q1(c), q2(c), with
q1' >= 0 >= q2'.  Every solver in this package works through scalar
functions of c:

    h = q1 + q2                 f = q1 - c*h
    H = 1 + q1' - c*h'  (>= 1)  lambda = H/u
    g' = -h'/H,  g(0) = 0       G = exp(g)   (so H*G' + h'*G = 0)
    F' = 1/(H*G),  F(0) = 0
    P' = f''/H,  P(0) = 0       (rarefaction fan phase)

g, F and P have no closed form for general isotherms; they are
integrated once on a dense uniform grid and cached behind a monotone
cubic interpolant.  A model plus its caches is immutable, so one
``Thermo`` instance can be shared across concurrent runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

QUAD_TOL = 1e-10


class DomainError(ValueError):
    """Argument outside the physical domain (c in [0,1], u > 0)."""


class ModelNotValidatedError(RuntimeError):
    """Solver asked to use a model that failed or skipped validation."""


# ---------------------------------------------------------------------------
# isotherm variants


@dataclass(frozen=True)
class LinearIsotherm:
    """q1 = k1*c, q2 = k2*(1-c)."""

    k1: float
    k2: float

    def q1(self, c):
        return self.k1 * c

    def q1p(self, c):
        return self.k1 * np.ones_like(np.asarray(c, dtype=float))

    def q1pp(self, c):
        return np.zeros_like(np.asarray(c, dtype=float))

    def q2(self, c):
        return self.k2 * (1.0 - c)

    def q2p(self, c):
        return -self.k2 * np.ones_like(np.asarray(c, dtype=float))

    def q2pp(self, c):
        return np.zeros_like(np.asarray(c, dtype=float))

    def criteria(self):
        return {"k_nonnegative": min(self.k1, self.k2) >= 0.0,
                "k2_gt_k1": self.k2 > self.k1}


@dataclass(frozen=True)
class BinaryLangmuirIsotherm:
    """q_i = qs_i * k_i * c_i / (1 + k1*c1 + k2*c2), two active gases.

    Wave-curve monotonicity needs k1 >= k2 and qs1*k1 < qs2*k2 (relabel the
    gases otherwise).
    """

    qs1: float
    k1: float
    qs2: float
    k2: float

    def _den(self, c):
        return 1.0 + self.k1 * c + self.k2 * (1.0 - c)

    def q1(self, c):
        return self.qs1 * self.k1 * c / self._den(c)

    def q1p(self, c):
        return self.qs1 * self.k1 * (1.0 + self.k2) / self._den(c) ** 2

    def q1pp(self, c):
        d = self._den(c)
        return 2.0 * self.qs1 * self.k1 * (1.0 + self.k2) * (self.k2 - self.k1) / d**3

    def q2(self, c):
        return self.qs2 * self.k2 * (1.0 - c) / self._den(c)

    def q2p(self, c):
        return -self.qs2 * self.k2 * (1.0 + self.k1) / self._den(c) ** 2

    def q2pp(self, c):
        d = self._den(c)
        return 2.0 * self.qs2 * self.k2 * (1.0 + self.k1) * (self.k1 - self.k2) / d**3

    def criteria(self):
        return {
            "positive_parameters": min(self.qs1, self.k1, self.qs2, self.k2) > 0.0,
            "k1_ge_k2": self.k1 >= self.k2,
            "q1k1_lt_q2k2": self.qs1 * self.k1 < self.qs2 * self.k2,
        }


@dataclass(frozen=True)
class InertConcaveIsotherm:
    """Inert first gas (q1 = 0), active second gas with a concave isotherm.

    ``q2_c2``, ``dq2_c2``, ``d2q2_c2`` give the active isotherm and its two
    derivatives as functions of c2 = 1 - c.  Callables must accept ndarrays.
    Run :func:`validate_model` before handing the model to any solver.
    """

    q2_c2: object
    dq2_c2: object
    d2q2_c2: object

    def q1(self, c):
        return np.zeros_like(np.asarray(c, dtype=float))

    def q1p(self, c):
        return np.zeros_like(np.asarray(c, dtype=float))

    def q1pp(self, c):
        return np.zeros_like(np.asarray(c, dtype=float))

    def q2(self, c):
        return self.q2_c2(1.0 - np.asarray(c, dtype=float))

    def q2p(self, c):
        return -self.dq2_c2(1.0 - np.asarray(c, dtype=float))

    def q2pp(self, c):
        return self.d2q2_c2(1.0 - np.asarray(c, dtype=float))

    def criteria(self):
        return {}


def inert_langmuir(qsat, k):
    """Inert carrier plus a Langmuir active gas: q2*(c2) = qsat*k*c2/(1+k*c2)."""
    qsat, k = float(qsat), float(k)
    return InertConcaveIsotherm(
        q2_c2=lambda s: qsat * k * s / (1.0 + k * s),
        dq2_c2=lambda s: qsat * k / (1.0 + k * s) ** 2,
        d2q2_c2=lambda s: -2.0 * qsat * k**2 / (1.0 + k * s) ** 3,
    )


@dataclass(frozen=True)
class SwappedIsotherm:
    """Gas labels 1 and 2 exchanged: c -> 1 - c, q1 <-> q2."""

    base: object

    def q1(self, c):
        return self.base.q2(1.0 - np.asarray(c, dtype=float))

    def q1p(self, c):
        return -self.base.q2p(1.0 - np.asarray(c, dtype=float))

    def q1pp(self, c):
        return self.base.q2pp(1.0 - np.asarray(c, dtype=float))

    def q2(self, c):
        return self.base.q1(1.0 - np.asarray(c, dtype=float))

    def q2p(self, c):
        return -self.base.q1p(1.0 - np.asarray(c, dtype=float))

    def q2pp(self, c):
        return self.base.q1pp(1.0 - np.asarray(c, dtype=float))

    def criteria(self):
        return {}


def swap_labels(isotherm):
    if isinstance(isotherm, SwappedIsotherm):
        return isotherm.base
    if isinstance(isotherm, LinearIsotherm):
        return LinearIsotherm(k1=isotherm.k2, k2=isotherm.k1)
    if isinstance(isotherm, BinaryLangmuirIsotherm):
        return BinaryLangmuirIsotherm(
            qs1=isotherm.qs2, k1=isotherm.k2, qs2=isotherm.qs1, k2=isotherm.k1
        )
    return SwappedIsotherm(isotherm)


# ---------------------------------------------------------------------------
# cached antiderivatives


class _MonotoneCubic:
    """PCHIP coefficients on a uniform grid, with a fast scalar path."""

    def __init__(self, x, y):
        self._x = x
        self._x0 = x[0]
        self._dx = x[1] - x[0]
        self._n = len(x) - 1
        self._c = PchipInterpolator(x, y).c  # (4, n)

    def __call__(self, c):
        if np.ndim(c) == 0:
            k = int((c - self._x0) / self._dx)
            k = 0 if k < 0 else (self._n - 1 if k >= self._n else k)
            t = c - self._x[k]
            a3, a2, a1, a0 = self._c[0, k], self._c[1, k], self._c[2, k], self._c[3, k]
            return float(((a3 * t + a2) * t + a1) * t + a0)
        c = np.asarray(c, dtype=float)
        k = np.clip(((c - self._x0) / self._dx).astype(int), 0, self._n - 1)
        t = c - self._x[k]
        return ((self._c[0, k] * t + self._c[1, k]) * t + self._c[2, k]) * t + self._c[3, k]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _cumulative_integral(fn, grid):
    """Antiderivative of ``fn`` at the grid nodes, from grid[0].

    Composite 8-point Gauss per interval; a half-resolution pass checks the
    result against QUAD_TOL.
    """

    def pass_at(g):
        mid = 0.5 * (g[:-1] + g[1:])
        half = 0.5 * np.diff(g)
        pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = fn(pts.ravel()).reshape(pts.shape)
        return np.concatenate([[0.0], np.cumsum(half * (vals @ _GL_WEIGHTS))])

    fine = pass_at(grid)
    coarse = pass_at(grid[::2])
    err = np.max(np.abs(fine[::2] - coarse))
    if err > QUAD_TOL:
        raise ValueError(f"quadrature failed to reach tolerance ({err:.2e})")
    return fine


# ---------------------------------------------------------------------------
# evaluated thermodynamics


@dataclass(frozen=True)
class ThermoPoint:
    c: float
    q1: float
    q2: float
    h: float
    hp: float
    f: float
    fp: float
    fpp: float
    H: float
    g: float
    G: float
    F: float


class Thermo:
    """An isotherm model plus its cached derived functions."""

    def __init__(self, isotherm, n_cache=4001):
        self.isotherm = isotherm
        grid = np.linspace(0.0, 1.0, n_cache)
        g_vals = _cumulative_integral(lambda c: -self.hp(c) / self.H(c), grid)
        self._g = _MonotoneCubic(grid, g_vals)
        self._F = _MonotoneCubic(
            grid, _cumulative_integral(lambda c: 1.0 / (self.H(c) * self.G(c)), grid)
        )
        self._P = _MonotoneCubic(
            grid, _cumulative_integral(lambda c: self.fpp(c) / self.H(c), grid)
        )
        self.report = None  # filled by validate_model

    # -- analytic pieces ----------------------------------------------------

    def q1(self, c):
        return self.isotherm.q1(c)

    def q2(self, c):
        return self.isotherm.q2(c)

    def h(self, c):
        return self.isotherm.q1(c) + self.isotherm.q2(c)

    def hp(self, c):
        return self.isotherm.q1p(c) + self.isotherm.q2p(c)

    def hpp(self, c):
        return self.isotherm.q1pp(c) + self.isotherm.q2pp(c)

    def f(self, c):
        return self.isotherm.q1(c) - c * self.h(c)

    def fp(self, c):
        return self.isotherm.q1p(c) - self.h(c) - c * self.hp(c)

    def fpp(self, c):
        return self.isotherm.q1pp(c) - 2.0 * self.hp(c) - c * self.hpp(c)

    def H(self, c):
        return 1.0 + self.isotherm.q1p(c) - c * self.hp(c)

    def I(self, c):
        return c + self.isotherm.q1(c)

    # -- cached antiderivatives ----------------------------------------------

    def g(self, c):
        return self._g(c)

    def G(self, c):
        return np.exp(self._g(c))

    def F(self, c):
        return self._F(c)

    def P(self, c):
        """Antiderivative of f''/H; rarefaction phase is P(c) - P(c_foot)."""
        return self._P(c)

    # -- points and validation ----------------------------------------------

    def point(self, c):
        if not 0.0 <= c <= 1.0:
            raise DomainError(f"concentration {c} outside [0, 1]")
        c = float(c)
        return ThermoPoint(
            c=c,
            q1=float(self.q1(c)),
            q2=float(self.q2(c)),
            h=float(self.h(c)),
            hp=float(self.hp(c)),
            f=float(self.f(c)),
            fp=float(self.fp(c)),
            fpp=float(self.fpp(c)),
            H=float(self.H(c)),
            g=float(self.g(c)),
            G=float(self.G(c)),
            F=float(self.F(c)),
        )

    @property
    def validated(self):
        return self.report is not None and self.report.passed

    def require_validated(self):
        if self.report is None:
            validate_model(self)
        if not self.report.passed:
            raise ModelNotValidatedError(
                "model failed validation: " + ", ".join(self.report.failures())
            )


def eval_thermo(thermo: Thermo, c) -> ThermoPoint:
    return thermo.point(c)


def lambda_speed(tp: ThermoPoint, u) -> float:
    """Slope dt/dx of the genuinely nonlinear family at (c, u)."""
    if u <= 0.0:
        raise DomainError(f"velocity must be positive, got {u}")
    return tp.H / u


# ---------------------------------------------------------------------------
# structural validation


@dataclass(frozen=True)
class ModelReport:
    fpp_min: float
    fpp_min_c: float
    fpp_max: float
    hp_max: float
    hp_max_c: float
    H_min: float
    dS_dcminus_min: float
    dS_dcplus_max: float
    convex: bool
    monotone_h: bool
    monotone_wave_curves: bool
    recommend_swap: bool
    criteria: dict
    passed: bool

    def failures(self):
        out = []
        if not self.convex:
            out.append(f"f'' not positive (min {self.fpp_min:.3g} at c={self.fpp_min_c:.3g})")
        if not self.monotone_h:
            out.append(f"h' not nonpositive (max {self.hp_max:.3g} at c={self.hp_max_c:.3g})")
        if not self.monotone_wave_curves:
            out.append("shock curve S not monotone in its arguments")
        out.extend(name for name, ok in self.criteria.items() if not ok)
        if self.recommend_swap:
            out.append("f'' < 0 everywhere: swap the gas labels (swap_labels)")
        return out


def _shock_log_ratio(thermo, c_plus, c_minus, eps_c=1e-9):
    """S(c_plus, c_minus) = L_plus - L_minus along the shock curve.

    alpha = [f]/[c] + 1, with the limit f'(midpoint) + 1 for a degenerate
    jump; alpha + h must stay positive on an admissible shock.
    """
    dc = c_plus - c_minus
    if abs(dc) < eps_c:
        alpha = thermo.fp(0.5 * (c_plus + c_minus)) + 1.0
    else:
        alpha = (thermo.f(c_plus) - thermo.f(c_minus)) / dc + 1.0
    ap = alpha + thermo.h(c_plus)
    am = alpha + thermo.h(c_minus)
    if ap <= 0.0 or am <= 0.0:
        raise DomainError(
            f"alpha + h not positive on shock ({c_minus:.6g} -> {c_plus:.6g})"
        )
    return math.log(ap / am)


def validate_model(thermo: Thermo, n_samples: int = 201) -> ModelReport:
    """Sample the structural assumptions the solvers rely on.

    Checks f'' > 0 (genuine nonlinearity), h' <= 0, H >= 1 and the
    monotonicity of the shock curve in both arguments; never relabels the
    gases by itself, only recommends it.
    """
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    cs = np.linspace(0.0, 1.0, n_samples)
    fpp = np.asarray(thermo.fpp(cs), dtype=float)
    hp = np.asarray(thermo.hp(cs), dtype=float)
    Hs = np.asarray(thermo.H(cs), dtype=float)

    # finite differences of S along the sampled shock curve (thinned grid)
    step = 1e-6
    cs_s = cs if n_samples <= 41 else np.linspace(0.0, 1.0, 41)
    d_minus, d_plus = [], []
    curve_ok = True
    for cm in cs_s:
        for cp in cs_s:
            if cp >= cm - 1e-3:
                continue
            try:
                s0 = _shock_log_ratio(thermo, cp, cm)
                dm = step if cm + step <= 1.0 else -step
                d_minus.append((_shock_log_ratio(thermo, cp, cm + dm) - s0) / dm)
                d_plus.append((_shock_log_ratio(thermo, cp + step, cm) - s0) / step)
            except DomainError:
                curve_ok = False
    d_minus = np.asarray(d_minus, dtype=float)
    d_plus = np.asarray(d_plus, dtype=float)
    ds_min = float(np.min(d_minus)) if d_minus.size else 0.0
    ds_max = float(np.max(d_plus)) if d_plus.size else 0.0

    fd_tol = 1e-7
    convex = bool(np.min(fpp) > 0.0)
    monotone_h = bool(np.max(hp) <= 1e-12)
    monotone_curves = bool(curve_ok and ds_min >= -fd_tol and ds_max <= fd_tol)
    criteria = dict(thermo.isotherm.criteria())
    if isinstance(thermo.isotherm, InertConcaveIsotherm):
        q2pp = np.asarray(thermo.isotherm.q2pp(cs), dtype=float)
        criteria["q2_concave"] = bool(np.max(q2pp) <= 1e-12)

    report = ModelReport(
        fpp_min=float(np.min(fpp)),
        fpp_min_c=float(cs[int(np.argmin(fpp))]),
        fpp_max=float(np.max(fpp)),
        hp_max=float(np.max(hp)),
        hp_max_c=float(cs[int(np.argmax(hp))]),
        H_min=float(np.min(Hs)),
        dS_dcminus_min=ds_min,
        dS_dcplus_max=ds_max,
        convex=convex,
        monotone_h=monotone_h,
        monotone_wave_curves=monotone_curves,
        recommend_swap=bool(np.max(fpp) < 0.0),
        criteria=criteria,
        passed=convex and monotone_h and monotone_curves and all(criteria.values()),
    )
    thermo.report = report
    return report
