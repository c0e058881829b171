"""Generating functions: closed forms, numerical extraction, verification.

The kicked lift (x, y) -> (x + y + F(x), y + F(x)) is generated by
h(x, x') = (x' - x)^2 / 2 + V(x) with F = V', through y = -d1 h and
y' = d2 h.  The closed-form families carry analytic bounds (twist
convexity constant theta, twist lower bound rho, Lipschitz and curvature
sums) used by the certified error budgets downstream.

``extract_generating_function`` rebuilds h from an arbitrary lift by the
path integral h(x,x') = int_0^x d1h(t,0) dt + int_0^x' d2h(x,t) dt, the
partials being obtained from the lift by monotone root-finding in the
fibre; ``verify_h_conditions`` checks periodicity, the strict exchange
(Monge) inequality, the twist lower bound and the convexity constant by
finite differences on a grid table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BandExceeded, NonMongeInput, TwistViolation
from .minplus import TabulatedH

TWO_PI = 2.0 * math.pi
FOUR_PI_SQ = 4.0 * math.pi * math.pi


@dataclass(frozen=True)
class GeneratingFunction:
    """Closed-form variational principle h(x, x') with analytic bounds."""

    family: str
    params: tuple[float, ...]
    h: Callable
    d1h: Callable
    d2h: Callable
    theta: float        # convexity modulus for the theta-convexity condition
    rho_min: float      # lower bound for -d12 h
    W: float            # validity half-width on |x' - x|
    v_deriv_sup: float  # sup |V'|
    v_second_sup: float  # sup |V''|

    def lip_sum(self, u_abs: float) -> float:
        """Sum of the per-argument Lipschitz bounds on |x'-x| <= u_abs."""
        return 2.0 * u_abs + self.v_deriv_sup

    def quad_sum(self) -> float:
        """Sup of |h_11| + 2|h_12| + |h_22| (band independent)."""
        return 4.0 + self.v_second_sup


def _kicked_generating(family: str, params: tuple[float, ...],
                       v: Callable, v_deriv: Callable,
                       v_deriv_sup: float, v_second_sup: float,
                       w: float) -> GeneratingFunction:
    def h(x, xp):
        u = xp - x
        return 0.5 * u * u + v(x)

    def d1h(x, xp):
        return -(xp - x) + v_deriv(x)

    def d2h(x, xp):
        return xp - x

    return GeneratingFunction(
        family=family,
        params=params,
        h=h,
        d1h=d1h,
        d2h=d2h,
        theta=1.0 + v_second_sup,
        rho_min=1.0,
        W=w,
        v_deriv_sup=v_deriv_sup,
        v_second_sup=v_second_sup,
    )


def fk_generating(k: float, w: float = 6.0) -> GeneratingFunction:
    """h(x,x') = (x'-x)^2/2 - (k/4pi^2) cos(2pi x); theta = 1+k, rho = 1."""
    if k < 0:
        raise ValueError("kick strength must be nonnegative")

    def v(x):
        return -(k / FOUR_PI_SQ) * np.cos(TWO_PI * x)

    def v_deriv(x):
        return (k / TWO_PI) * np.sin(TWO_PI * x)

    return _kicked_generating("std", (k,), v, v_deriv,
                              v_deriv_sup=k / TWO_PI, v_second_sup=k, w=w)


def two_harmonic_generating(k: float, k2: float, w: float = 6.0) -> GeneratingFunction:
    """Two-harmonic potential; theta = 1 + k + |k2|, rho = 1."""
    if k < 0:
        raise ValueError("kick strength must be nonnegative")

    def v(x):
        return (-(k / FOUR_PI_SQ) * np.cos(TWO_PI * x)
                - (k2 / (4.0 * FOUR_PI_SQ)) * np.cos(2.0 * TWO_PI * x))

    def v_deriv(x):
        return ((k / TWO_PI) * np.sin(TWO_PI * x)
                + (k2 / (2.0 * TWO_PI)) * np.sin(2.0 * TWO_PI * x))

    return _kicked_generating("two-harmonic", (k, k2), v, v_deriv,
                              v_deriv_sup=k / TWO_PI + abs(k2) / (2.0 * TWO_PI),
                              v_second_sup=k + abs(k2), w=w)


def make_generating(family: str, k: float, k2: float = 0.0,
                    w: float = 6.0) -> GeneratingFunction:
    if family == "std":
        return fk_generating(k, w)
    if family == "two-harmonic":
        return two_harmonic_generating(k, k2, w)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class ConditionReport:
    """Finite-difference verification of the variational-principle conditions."""

    h1_ok: bool
    h1_residual: float
    h3_ok: bool             # strict exchange (Monge) inequality
    h5_ok: bool             # positive twist lower bound
    h6_ok: bool             # a finite convexity constant exists
    theta_cert: float       # smallest certified convexity constant
    rho_cert: float         # largest certified twist lower bound

    @property
    def passed(self) -> bool:
        return self.h1_ok and self.h3_ok and self.h5_ok and self.h6_ok


def _discrete_cross(values: np.ndarray) -> np.ndarray:
    """v[a][d+1] + v[a+1][d-1] - v[a][d] - v[a+1][d] on interior columns."""
    rolled = np.roll(values, -1, axis=0)
    return values[:, 2:] + rolled[:, :-2] - values[:, 1:-1] - rolled[:, 1:-1]


def _discrete_theta(values: np.ndarray, n_grid: int) -> float:
    up = np.roll(values, 1, axis=0)    # row a-1
    down = np.roll(values, -1, axis=0)  # row a+1
    sec_x = up[:, 2:] - 2.0 * values[:, 1:-1] + down[:, :-2]
    sec_xp = values[:, :-2] - 2.0 * values[:, 1:-1] + values[:, 2:]
    worst = max(float(np.max(sec_x)), float(np.max(sec_xp)), 0.0)
    return worst * n_grid * n_grid


def verify_h_conditions(h, tol: float = 1e-9, *, n_grid: int = 256,
                        halfwidth: float = 2.0) -> ConditionReport:
    """Verify periodicity, Monge, twist bound and convexity on a grid.

    ``h`` is a GeneratingFunction (tabulated internally on the given grid)
    or an existing TabulatedH.  Raises NonMongeInput when the exchange
    inequality fails beyond ``tol`` at any grid quadruple.
    """
    if isinstance(h, TabulatedH):
        table = h
        h1_ok, h1_res = True, 0.0
    else:
        from .minplus import tabulate
        cells = int(min(halfwidth, h.W) * n_grid)
        table = tabulate(h, n_grid, (-cells, cells))
        rng = np.random.default_rng(20260809)
        x = rng.uniform(-2.0, 2.0, 512)
        xp = x + rng.uniform(-h.W, h.W, 512)
        h1_res = float(np.max(np.abs(h.h(x + 1.0, xp + 1.0) - h.h(x, xp))))
        h1_ok = h1_res < 1e-12
    if table.width < 3:
        raise ValueError("band too narrow to verify conditions")
    n = table.n_grid
    cross = _discrete_cross(table.values)
    min_cross = float(np.min(cross))
    if min_cross < -tol:
        raise NonMongeInput(
            f"exchange inequality violated by {-min_cross:.3e} (tol {tol:.1e})")
    rho_cert = min_cross * n * n
    theta_cert = _discrete_theta(table.values, n)
    return ConditionReport(
        h1_ok=h1_ok,
        h1_residual=h1_res,
        h3_ok=min_cross > -tol,
        h5_ok=rho_cert > 0.0,
        h6_ok=math.isfinite(theta_cert),
        theta_cert=theta_cert,
        rho_cert=rho_cert,
    )


def _fiber_solve(map_call, x: np.ndarray, target: np.ndarray,
                 tol: float = 1e-12, cap: float = 64.0) -> np.ndarray:
    """Solve f1(x, y) = target for y by bisection; f1 must increase in y."""
    x = np.asarray(x, dtype=float)
    target = np.asarray(target, dtype=float)
    lo = np.full_like(target, -1.0)
    hi = np.full_like(target, 1.0)
    for _ in range(200):
        need = map_call(x, lo)[0] > target
        if not np.any(need):
            break
        lo = np.where(need, 2.0 * lo, lo)
        if np.any(lo < -cap):
            raise TwistViolation("no lower bracket: the fibre map does not "
                                 "reach the target (twist failure)")
    else:
        raise TwistViolation("bracket expansion did not terminate")
    for _ in range(200):
        need = map_call(x, hi)[0] < target
        if not np.any(need):
            break
        hi = np.where(need, 2.0 * hi, hi)
        if np.any(hi > cap):
            raise TwistViolation("no upper bracket: the fibre map does not "
                                 "reach the target (twist failure)")
    else:
        raise TwistViolation("bracket expansion did not terminate")
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        high = map_call(x, mid)[0] > target
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
    return 0.5 * (lo + hi)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _cell_nodes(cells: np.ndarray, n_grid: int):
    """Gauss-Legendre nodes/weights on the cells [m/N, (m+1)/N]."""
    half = 0.5 / n_grid
    centers = (cells[:, None] + 0.5) / n_grid
    nodes = centers + half * _GL_NODES[None, :]
    weights = half * _GL_WEIGHTS[None, :]
    return nodes, weights


def extract_generating_function(map, n_grid: int, band: tuple[int, int]) -> TabulatedH:
    """Rebuild h on the grid from a lift, normalized to h(0,0) = 0.

    Composite 8-node Gauss-Legendre quadrature over grid cells; the
    partials come from the momentum relation by monotone root-finding in
    the fibre (TwistViolation when monotonicity fails, BandExceeded when
    the band leaves the solvable window).
    """
    d_min, d_max = int(band[0]), int(band[1])
    if d_min > d_max:
        raise BandExceeded("empty band")
    n = n_grid

    # First leg: cumulative integral of d1h(t, 0) = -y(t, 0) over x-cells.
    cells = np.arange(n)
    nodes, weights = _cell_nodes(cells, n)
    y0 = _fiber_solve(map, nodes.ravel(), np.zeros(nodes.size))
    leg1_cells = np.sum(weights * (-y0.reshape(nodes.shape)), axis=1)
    leg1 = np.concatenate(([0.0], np.cumsum(leg1_cells)))  # at x = a/N

    values = np.empty((n, d_max - d_min + 1))
    d1_max = 0.0
    d2_max = 0.0
    for a in range(n):
        m_lo = min(0, a + d_min)
        m_hi = max(0, a + d_max)
        cells = np.arange(m_lo, m_hi)
        nodes, weights = _cell_nodes(cells, n)
        x_here = np.full(nodes.size, a / n)
        y = _fiber_solve(map, x_here, nodes.ravel())
        d2 = map(x_here, y)[1].reshape(nodes.shape)
        cell_ints = np.sum(weights * d2, axis=1)
        # prefix[i] = integral from 0 to (m_lo + i)/N
        prefix = np.concatenate(([0.0], np.cumsum(cell_ints)))
        prefix -= prefix[-m_lo] if m_lo < 0 else 0.0
        targets = a + np.arange(d_min, d_max + 1)
        values[a, :] = leg1[a] + prefix[targets - m_lo]
        d2_max = max(d2_max, float(np.max(np.abs(d2))))
        y_nodes = _fiber_solve(map, np.full(targets.size, a / n),
                               targets.astype(float) / n)
        d1_max = max(d1_max, float(np.max(np.abs(y_nodes))))
    table = TabulatedH(
        values=values,
        n_grid=n,
        d_min=d_min,
        d_max=d_max,
        steps=1,
        lip=d1_max + d2_max,
        quad=None,
        theta=_discrete_theta(values, n) if values.shape[1] >= 3 else 0.0,
    )
    return table
