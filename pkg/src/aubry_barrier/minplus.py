"""Banded grid tables of variational principles and their min-plus product.

A variational principle h(x, x') is stored on the circle grid as
v[a, j] = h(a/N, (a+d)/N), d = d_min + j, so 1-periodicity in both
arguments is structural (reduce the row mod N, keep the displacement).
The product

    (A * B)(x, x') = min_y A(x, y) + B(y, x')

inherits the row/column-exchange (Monge) inequality, which makes leftmost
minimizers monotone and the divide-and-conquer kernel exact.  The naive
full-scan kernel is kept as the oracle; both kernels break ties toward the
smallest middle point and agree bitwise on Monge input.

Composite tables can be clipped to a displacement window around the
rotation line.  Any minimal segment keeps its partial displacements within
2 of linear growth, so a half-width of 3 grid units per unit of circle
already contains every sub-block of a minimizing path; a guard raises
BandExceeded if a clipped product ever sees argmin pressure at the band
edge inside the central core, and callers escalate the half-width up to
the conservative 12 + ceil|omega| before giving up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import BandExceeded, IncompatibleGrids

# Clip half-width (circle units) used by the barrier pipelines, and the
# escalation ladder tried when a clipped product reports edge pressure.
DEFAULT_CLIP_HALFWIDTH = 3.0
MAX_CLIP_HALFWIDTH_BASE = 12.0
# Half-width (circle units) of the core zone monitored by the edge guard.
CORE_HALFWIDTH = 2.0


@dataclass(frozen=True)
class TabulatedH:
    """Grid/band table of a variational principle.

    ``lip`` bounds the one-step Lipschitz constant (sum over both
    arguments) of the underlying h on the band, and ``quad`` bounds the sum
    |h_11| + 2|h_12| + |h_22| of its second derivatives (None when unknown,
    e.g. for numerically extracted tables).  ``theta`` is the twist
    convexity constant carried over from the source h; products keep it.
    """

    values: np.ndarray      # (n_grid, width) float64
    n_grid: int
    d_min: int
    d_max: int
    steps: int
    lip: float
    quad: float | None
    theta: float
    clipped: bool = False

    def __post_init__(self):
        if self.values.shape != (self.n_grid, self.d_max - self.d_min + 1):
            raise ValueError("value array does not match the declared band")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("table contains non-finite values")

    @property
    def width(self) -> int:
        return self.d_max - self.d_min + 1

    @property
    def band(self) -> tuple[int, int]:
        return (self.d_min, self.d_max)

    def column(self, d: int) -> np.ndarray:
        """All values at a fixed displacement d (one per grid row)."""
        if not self.d_min <= d <= self.d_max:
            raise BandExceeded(f"displacement {d} outside band {self.band}")
        return self.values[:, d - self.d_min]

    def at(self, a: int, d: int) -> float:
        return float(self.column(d)[a % self.n_grid])

    def shifted(self, p: int) -> "TabulatedH":
        """Reindex displacements by -p grid periods (exact, no arithmetic)."""
        if p == 0:
            return self
        return replace(self, d_min=self.d_min - p * self.n_grid,
                       d_max=self.d_max - p * self.n_grid)


@dataclass(frozen=True)
class Configuration:
    """Finite segment of a configuration in lift coordinates."""

    values: np.ndarray           # x_j .. x_k as floats
    start: int = 0
    nodes: np.ndarray | None = None  # same points as absolute grid indices

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("a configuration needs at least two points")

    @property
    def end(self) -> int:
        return self.start + len(self.values) - 1


def tabulate(h, n_grid: int, band: tuple[int, int]) -> TabulatedH:
    """Node-exact sampling of a generating function on the N-grid."""
    if n_grid < 2 or n_grid & (n_grid - 1):
        raise ValueError("n_grid must be a power of two")
    d_min, d_max = int(band[0]), int(band[1])
    w_cells = int(round(h.W * n_grid))
    if d_min < -w_cells or d_max > w_cells or d_min > d_max:
        raise BandExceeded(
            f"band {band} exceeds the validity window |d| <= {w_cells}")
    x = np.arange(n_grid, dtype=np.float64)[:, None] / n_grid
    u = np.arange(d_min, d_max + 1, dtype=np.float64)[None, :] / n_grid
    vals = np.asarray(h.h(x, x + u), dtype=np.float64)
    u_abs = max(abs(d_min), abs(d_max)) / n_grid
    return TabulatedH(
        values=vals,
        n_grid=n_grid,
        d_min=d_min,
        d_max=d_max,
        steps=1,
        lip=float(h.lip_sum(u_abs)),
        quad=float(h.quad_sum()),
        theta=float(h.theta),
    )


def _combine_quad(a: TabulatedH, b: TabulatedH) -> float | None:
    if a.quad is None or b.quad is None:
        return None
    return max(a.quad, b.quad)


def conjoin(a: TabulatedH, b: TabulatedH, *, clip: tuple[int, int] | None = None,
            kernel: str = "fast") -> TabulatedH:
    """Min-plus product with optional displacement clipping.

    With ``clip`` the output band is intersected with the given window and
    the edge guard is armed; without it the full natural band is produced.
    """
    if a.n_grid != b.n_grid:
        raise IncompatibleGrids(f"{a.n_grid} vs {b.n_grid}")
    nat_lo = a.d_min + b.d_min
    nat_hi = a.d_max + b.d_max
    if clip is None:
        c_lo, c_hi = nat_lo, nat_hi
        clipped = False
        core_jlo, core_jhi = 0, -1
    else:
        c_lo = max(nat_lo, int(clip[0]))
        c_hi = min(nat_hi, int(clip[1]))
        clipped = True
        if c_lo > c_hi:
            raise BandExceeded("clip window does not meet the natural band")
        center = (int(clip[0]) + int(clip[1])) // 2
        half = int(CORE_HALFWIDTH * a.n_grid)
        core_jlo = max(0, center - half - c_lo)
        core_jhi = min(c_hi - c_lo, center + half - c_lo)
    fn = _kernels.conjoin_fast if kernel == "fast" else _kernels.conjoin_naive
    vals, touches = fn(a.values, b.values, a.d_min, b.d_min,
                       c_lo, c_hi - c_lo + 1, core_jlo, core_jhi)
    if clipped and touches > 0:
        raise BandExceeded(
            f"{touches} argmins touched the clipped band edge in the core")
    return TabulatedH(
        values=vals,
        n_grid=a.n_grid,
        d_min=c_lo,
        d_max=c_hi,
        steps=a.steps + b.steps,
        lip=max(a.lip, b.lip),
        quad=_combine_quad(a, b),
        theta=max(a.theta, b.theta),
        clipped=clipped or a.clipped or b.clipped,
    )


def conjoin_naive(a: TabulatedH, b: TabulatedH, *,
                  clip: tuple[int, int] | None = None) -> TabulatedH:
    """Full-scan product; the oracle the fast kernel is checked against."""
    return conjoin(a, b, clip=clip, kernel="naive")


def _clip_window(s_factors: int, p: int, q: int, n_grid: int,
                 halfwidth: float) -> tuple[int, int]:
    # Window around s * (p/q) circle units, in grid displacements.
    center_num = s_factors * p * n_grid
    w_cells = int(math.ceil(halfwidth * n_grid))
    lo = center_num // q - w_cells
    hi = -((-center_num) // q) + w_cells
    return lo, hi


def power_conjunction(t: TabulatedH, q: int, p: int, *,
                      clip_halfwidth: float | None = None,
                      kernel: str = "fast") -> TabulatedH:
    """q-fold self-product with the integer shift p applied at read time.

    Binary exponentiation over the product; with ``clip_halfwidth`` every
    intermediate table is clipped to that half-width (circle units) around
    the rotation line s*(p/q).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    n = t.n_grid

    def clip_for(s: int):
        if clip_halfwidth is None:
            return None
        return _clip_window(s, p, q, n, clip_halfwidth)

    acc: TabulatedH | None = None
    s_acc = 0
    sq = t
    s_sq = 1
    remaining = q
    while True:
        if remaining & 1:
            if acc is None:
                acc, s_acc = sq, s_sq
            else:
                acc = conjoin(acc, sq, clip=clip_for(s_acc + s_sq), kernel=kernel)
                s_acc += s_sq
        remaining >>= 1
        if remaining == 0:
            break
        sq = conjoin(sq, sq, clip=clip_for(2 * s_sq), kernel=kernel)
        s_sq *= 2
    return acc.shifted(p)


def grid_error_bound(t: TabulatedH, steps: int) -> float:
    """Lipschitz rounding budget steps * lip * (2/N).

    Bounds the gap between grid-constrained and continuum minimal actions:
    a continuum minimizer rounded node-by-node moves each coordinate by at
    most 1/(2N), and each of the ``steps`` terms of the action is lip/(2N)-
    stable; the factor inflates the tight constant by 4 on purpose.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    return steps * t.lip * 2.0 / t.n_grid


def curvature_error_bound(t: TabulatedH, steps: int) -> float | None:
    """Second-order rounding budget steps * quad / (4 N^2).

    Valid for tables of C^2 principles: rounding a stationary continuum
    minimizer leaves no first-order term (interior stationarity, pinned or
    periodic ends), so each step costs at most quad/(8 N^2); the factor is
    doubled for headroom.  None when the table has no curvature bound.
    """
    if t.quad is None:
        return None
    return steps * t.quad / (4.0 * t.n_grid ** 2)


def certified_grid_error(t: TabulatedH, steps: int) -> float:
    """Best available certified discretization budget, plus float slack."""
    bound = grid_error_bound(t, steps)
    curv = curvature_error_bound(t, steps)
    if curv is not None:
        bound = min(bound, curv)
    scale = float(np.max(np.abs(t.values))) if t.values.size else 1.0
    float_slack = steps * steps * scale * 2.0 ** -53
    return bound + float_slack


def _forward_vectors(chain: list[TabulatedH], x0: int, xq: int):
    """Forward min-plus vectors along the chain, with reachability windows."""
    n = chain[0].n_grid
    length = len(chain)
    pref_lo = np.cumsum([0] + [t.d_min for t in chain])
    pref_hi = np.cumsum([0] + [t.d_max for t in chain])
    suff_lo = np.cumsum([0] + [t.d_min for t in reversed(chain)])[::-1]
    suff_hi = np.cumsum([0] + [t.d_max for t in reversed(chain)])[::-1]
    slope = (xq - x0) / length
    tube = int(math.ceil(DEFAULT_CLIP_HALFWIDTH * n))
    windows = []
    for s in range(length + 1):
        lo = max(x0 + pref_lo[s], xq - suff_hi[s])
        hi = min(x0 + pref_hi[s], xq - suff_lo[s])
        if length > 8:
            # Minimal segments stay within 2 circle units of linear growth;
            # the tube keeps mid-chain windows from growing linearly.
            lo = max(lo, int(math.floor(x0 + s * slope)) - tube)
            hi = min(hi, int(math.ceil(x0 + s * slope)) + tube)
        if lo > hi:
            raise BandExceeded("endpoints are not band-reachable along the chain")
        windows.append((int(lo), int(hi)))
    vectors = [np.zeros(1, dtype=np.float64)]
    for s, t in enumerate(chain, start=1):
        lo, hi = windows[s]
        vec = _kernels.vector_minplus(vectors[-1], windows[s - 1][0],
                                      t.values, t.d_min, lo, hi - lo + 1)
        vectors.append(vec)
    return vectors, windows


def backtrack_minimal_segment(chain: list[TabulatedH], x0: int, xq: int) -> Configuration:
    """Grid configuration achieving the chain's min-plus value from x0 to xq.

    Endpoints are absolute grid positions (the lift coordinate times N).
    The path is rebuilt from forward vectors by exact value matching, ties
    resolved toward the smallest middle point, consistently with the
    product kernels.  No argmin tables are stored.
    """
    if not chain:
        raise ValueError("empty chain")
    n = chain[0].n_grid
    if any(t.n_grid != n for t in chain):
        raise IncompatibleGrids("chain tables use different grids")
    vectors, windows = _forward_vectors(chain, x0, xq)
    final = vectors[-1]
    lo_final = windows[-1][0]
    if not (lo_final <= xq <= windows[-1][1]) or not np.isfinite(final[xq - lo_final]):
        raise BandExceeded("target position is unreachable within the bands")
    positions = [0] * (len(chain) + 1)
    positions[0], positions[-1] = x0, xq
    for s in range(len(chain) - 1, 0, -1):
        t = chain[s]
        target = vectors[s + 1][positions[s + 1] - windows[s + 1][0]]
        lo, hi = windows[s]
        found = -1
        for z in range(max(lo, positions[s + 1] - t.d_max),
                       min(hi, positions[s + 1] - t.d_min) + 1):
            val = vectors[s][z - lo]
            if not np.isfinite(val):
                continue
            if val + t.values[z % n, positions[s + 1] - z - t.d_min] == target:
                found = z
                break
        if found < 0:
            raise BandExceeded("backtracking lost the minimizing path")
        positions[s] = found
    nodes = np.array(positions, dtype=np.int64)
    return Configuration(values=nodes / n, start=0, nodes=nodes)


def chain_value(chain: list[TabulatedH], x0: int, xq: int) -> float:
    """Min-plus value of the chain between two absolute positions."""
    vectors, windows = _forward_vectors(chain, x0, xq)
    lo = windows[-1][0]
    return float(vectors[-1][xq - lo])
