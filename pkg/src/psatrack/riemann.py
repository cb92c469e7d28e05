"""Exact Riemann solver for the chromatography system in (t, x) with x as
the evolution variable.

States live on one side of a jump line t = t0 + speed*(x - x0); "below"
means smaller t.  A Riemann problem between a below state and an above
state is solved by a zero-speed contact discontinuity (c continuous, u
jumps) topped by one wave of the genuinely nonlinear family:

  rarefaction  c_below < c_above   [L] = -[g]   spanning slopes z- .. z+
  shock        c_below > c_above   [L] = S(c_above, c_below)
               speed s = ([f]/[c] + 1 + h)/u  from either side

with L = ln u.  The fan is self-similar in z = t/x; inside a rarefaction
z = z- * exp(P(C) - P(c_below)) with P' = f''/H, which is monotone when
f'' > 0 and is inverted by bisection plus a Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .thermo import DomainError, Thermo, _shock_log_ratio

EPS_C = 1e-9

CONTACT = "contact"
SHOCK = "shock"
RARESTEP = "rarestep"


class ConsistencyError(RuntimeError):
    """States handed to the solver do not lie on the claimed wave curve."""


@dataclass(frozen=True)
class State:
    """A constant state: concentration c and log-velocity L = ln u."""

    c: float
    L: float

    @property
    def u(self):
        return math.exp(self.L)


@dataclass(frozen=True)
class Wave:
    """A single jump with its below (left) and above (right) states."""

    kind: str
    left: State
    right: State
    speed: float


@dataclass(frozen=True)
class RiemannFan:
    """Self-similar solution of one Riemann problem.

    ``contact`` connects below to middle at speed 0 (possibly zero
    strength); the lambda wave connects middle to above and is either
    ``shock``, a rarefaction described by (z_minus, z_plus, phi), or
    absent when the concentrations agree.
    """

    thermo: Thermo
    below: State
    middle: State
    above: State
    contact: Wave
    kind: str  # "none" | "shock" | "rarefaction"
    shock: Wave | None = None
    z_minus: float = math.nan
    z_plus: float = math.nan
    phi: float = math.nan


def _check_c(c):
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"concentration {c} outside [0, 1]")


def wave_curve_T(thermo: Thermo, c_minus, c_plus):
    """Log-velocity jump L_plus - L_minus along the lambda-wave curve."""
    _check_c(c_minus)
    _check_c(c_plus)
    if c_minus < c_plus:
        return -(thermo.g(c_plus) - thermo.g(c_minus))
    if c_minus > c_plus:
        return _shock_log_ratio(thermo, c_plus, c_minus, EPS_C)
    return 0.0


def shock_speed(thermo: Thermo, left: State, right: State):
    """Slope dt/dx of the shock joining ``left`` (below) to ``right``."""
    if left.c == right.c:
        raise ConsistencyError("shock needs distinct concentrations")
    if left.c < right.c:
        raise ConsistencyError(
            f"not an admissible shock under f'' > 0: c rises {left.c} -> {right.c}"
        )
    s_jump = _shock_log_ratio(thermo, right.c, left.c, EPS_C)
    if abs((right.L - left.L) - s_jump) > 1e-12 * (1.0 + abs(right.L) + abs(left.L)):
        raise ConsistencyError(
            f"states not on the shock curve: [L]={right.L - left.L:.17g} "
            f"vs S={s_jump:.17g}"
        )
    dc = right.c - left.c
    if abs(dc) < EPS_C:
        alpha = thermo.fp(0.5 * (left.c + right.c)) + 1.0
    else:
        alpha = (thermo.f(right.c) - thermo.f(left.c)) / dc + 1.0
    s_minus = (alpha + thermo.h(left.c)) / left.u
    s_plus = (alpha + thermo.h(right.c)) / right.u
    if abs(s_minus - s_plus) > 1e-12 * max(abs(s_minus), abs(s_plus)):
        raise ConsistencyError(f"two-sided speeds disagree: {s_minus} vs {s_plus}")
    if s_minus <= 0.0:
        raise ConsistencyError(f"nonpositive shock speed {s_minus}")
    return s_minus


def solve_riemann(thermo: Thermo, below: State, above: State) -> RiemannFan:
    """Contact plus lambda-wave between two constant states."""
    thermo.require_validated()
    middle_L = above.L - wave_curve_T(thermo, below.c, above.c)
    if abs(middle_L - below.L) <= 1e-14 * (1.0 + abs(below.L)):
        middle = below  # snap zero-strength contacts exactly
    else:
        middle = State(below.c, middle_L)
    contact = Wave(CONTACT, below, middle, 0.0)
    if below.c == above.c:
        return RiemannFan(thermo, below, middle, above, contact, "none")
    if below.c > above.c:
        shock = Wave(SHOCK, middle, above, shock_speed(thermo, middle, above))
        return RiemannFan(thermo, below, middle, above, contact, "shock", shock=shock)
    z_plus = thermo.H(above.c) / above.u
    phi = thermo.P(above.c) - thermo.P(below.c)
    z_minus = z_plus * math.exp(-phi)
    u_foot = thermo.H(below.c) / z_minus
    if abs(math.log(u_foot) - middle.L) > 1e-9 * (1.0 + abs(middle.L)):
        raise ConsistencyError("rarefaction foot velocity inconsistent with [L] = -[g]")
    return RiemannFan(
        thermo, below, middle, above, contact, "rarefaction",
        z_minus=z_minus, z_plus=z_plus, phi=phi,
    )


def sample_fan(fan: RiemannFan, z) -> State:
    """State of the self-similar fan on the ray of slope z = t/x > 0.

    z = 0 is the contact line, so the caller must pick a side; on a wave
    line the upper (larger z) side is returned.
    """
    if z <= 0.0:
        raise DomainError(f"fan is sampled for z > 0, got {z}")
    if fan.kind == "none":
        return fan.above
    if fan.kind == "shock":
        return fan.middle if z < fan.shock.speed else fan.above
    if z <= fan.z_minus:
        return fan.middle
    if z >= fan.z_plus:
        return fan.above
    th = fan.thermo
    target = th.P(fan.middle.c) + math.log(z / fan.z_minus)
    lo, hi = fan.middle.c, fan.above.c
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if th.P(mid) < target:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    for _ in range(3):  # Newton polish, P' = f''/H > 0
        c -= (th.P(c) - target) * float(th.H(c)) / float(th.fpp(c))
        c = min(max(c, fan.middle.c), fan.above.c)
    return State(float(c), math.log(th.H(c)) - math.log(z))


def discretize_rarefaction(thermo: Thermo, left: State, right: State, delta):
    """Split a rarefaction into equal-width steps chained by [L] = -[g].

    Step speeds are the characteristic slope at each step's left state,
    which keeps them inside [lambda_left, lambda_right] and strictly
    increasing; the first and last states are ``left`` and ``right``
    exactly.
    """
    if not left.c < right.c:
        raise DomainError("rarefaction needs left.c < right.c")
    if delta <= 0.0:
        raise DomainError("rarefaction step must be positive")
    n = max(1, math.ceil((right.c - left.c) / delta - 1e-12))
    cs = np.linspace(left.c, right.c, n + 1)
    states = [left]
    for k in range(1, n):
        prev = states[-1]
        states.append(State(float(cs[k]), prev.L - float(thermo.g(cs[k]) - thermo.g(cs[k - 1]))))
    chain_tail = states[-1].L - float(thermo.g(cs[n]) - thermo.g(cs[n - 1]))
    if abs(chain_tail - right.L) > 1e-9 * (1.0 + abs(right.L)):
        raise ConsistencyError("states are not connected by a rarefaction")
    states.append(right)
    waves = [
        Wave(RARESTEP, a, b, thermo.H(a.c) / a.u)
        for a, b in zip(states, states[1:])
    ]
    for w1, w2 in zip(waves, waves[1:]):
        if not w1.speed < w2.speed:
            raise ConsistencyError("rarefaction step speeds not increasing")
    return waves


def estimate_gamma(thermo: Thermo, n: int = 200):
    """Lipschitz bound of the wave curves: max |T(c+, c-)| / |c+ - c-|.

    Sampled on an n-by-n grid of ordered pairs; finite for every
    validated model.
    """
    cs = np.linspace(0.0, 1.0, n)
    g = np.asarray(thermo.g(cs), dtype=float)
    f = np.asarray(thermo.f(cs), dtype=float)
    h = np.asarray(thermo.h(cs), dtype=float)
    dcs = cs[None, :] - cs[:, None]  # c_plus minus c_minus, sign tells branch
    with np.errstate(divide="ignore", invalid="ignore"):
        rare = -(g[None, :] - g[:, None])
        alpha = (f[None, :] - f[:, None]) / dcs + 1.0
        shock = np.log((alpha + h[None, :]) / (alpha + h[:, None]))
        T = np.where(dcs > 0, rare, shock)
        ratio = np.abs(T) / np.abs(dcs)
    ratio[~np.isfinite(ratio)] = 0.0
    return float(np.max(ratio))
