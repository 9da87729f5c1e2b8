# Copyright 2024 The tfa-toolkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the 'License'). You
# may not use this file except in compliance with the License. A copy of
# the License is located at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# or in the 'license' file accompanying this file. This file is
# distributed on an 'AS IS' BASIS, WITHOUT WARRANTIES OR CONDITIONS OF
# ANY KIND, either express or implied. See the License for the specific
# language governing permissions and limitations under the License.
"""Time-frequency representations and the Grossmann-Royer / Heisenberg-Weyl operators.

Layouts:

* Grossmann-Royer transform and cross-Wigner distribution: positions on the
  signal grid, frequencies on the half-step dual grid (spacing ``dw / 2``).
  ``f(2x - t)`` is read with zero extension; periodic indexing would pair
  every sample twice over a full period of ``x``.
* STFT, ambiguity function and Heisenberg-Weyl transform: the standard
  phase grid, evaluated circularly.

Every transform is one batched FFT along the frequency axis.
"""
from __future__ import absolute_import

import enum
import logging
from dataclasses import dataclass

import numpy as np

from tfa_toolkit.exceptions import AlgorithmError, GridError, UserError, WindowError
from tfa_toolkit.grid import (PhaseGrid, SampledSignal, check_same_grid, check_same_phase_grid,
                              fourier_sum, inner)

logger = logging.getLogger(__name__)


class TFRKind(str, enum.Enum):
    GRT = 'grt'
    STFT = 'stft'
    WIGNER = 'wigner'
    AMBIGUITY = 'ambiguity'
    HW = 'hw'
    GENERIC = 'generic'


@dataclass(frozen=True, eq=False)
class TFRMatrix:
    """Complex values on a phase grid; rows index positions, columns frequencies."""

    pgrid: PhaseGrid
    values: np.ndarray
    kind: TFRKind = TFRKind.GENERIC

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.pgrid.shape:
            raise GridError(f"values of shape {values.shape} do not fit phase grid {self.pgrid.shape}")
        if not np.all(np.isfinite(values)):
            raise AlgorithmError("time-frequency representation has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'kind', TFRKind(self.kind))

    def with_values(self, values, kind=None):
        return TFRMatrix(self.pgrid, values, self.kind if kind is None else kind)

    @property
    def shape(self):
        return self.values.shape


def phase_inner(F, G):
    """``<F, G> = sum F conj(G) dx dw`` over the common phase grid."""
    check_same_phase_grid(F.pgrid, G.pgrid)
    return complex(np.vdot(G.values, F.values) * F.pgrid.cell)


def phase_norm(F):
    return float(np.sqrt(max(phase_inner(F, F).real, 0.0)))


def _check_pair(f, g):
    check_same_grid(f.grid, g.grid)


def _steps(value, step, what):
    r = float(value) / step
    k = int(round(r))
    if abs(r - k) > 1e-9 * max(1.0, abs(r)):
        raise GridError(f"{what}={value} is not a multiple of {step}")
    return k


def gr_operator_apply(f, x, w):
    """``R(x, w) f(t) = exp(4 pi i w (t - x)) f(2x - t)``, read circularly.

    ``x`` must be a grid point and ``w`` a multiple of ``dw / 2``.
    """
    grid = f.grid
    m = grid.index_of(x)
    _steps(w, grid.dw / 2, 'w')
    i = np.arange(grid.n)
    phase = np.exp(4j * np.pi * w * (grid.coords - x))
    return f.with_samples(phase * f.samples[(2 * m - i) % grid.n])


def hw_operator_apply(f, x, w):
    """``T(x, w) f(t) = exp(2 pi i w (t - x / 2)) f(t - x)``.

    ``x`` must be a multiple of ``dx`` and ``w`` a multiple of ``dw``.
    """
    grid = f.grid
    j = _steps(x, grid.dx, 'x')
    _steps(w, grid.dw, 'w')
    phase = np.exp(2j * np.pi * w * (grid.coords - x / 2))
    return f.with_samples(phase * np.roll(f.samples, j))


def gr_operator_field(f, t, pgrid=None):
    """The map ``(x, w) -> R(x, w) f(t)`` for a fixed sample point ``t``."""
    grid = f.grid
    pgrid = pgrid or PhaseGrid.half_step_of(grid)
    check_same_grid(pgrid.xgrid, grid)
    it = grid.index_of(t)
    m = np.arange(grid.n)
    X, W = pgrid.mesh()
    return TFRMatrix(pgrid, np.exp(4j * np.pi * W * (t - X)) * f.samples[(2 * m - it) % grid.n][:, None])


def hw_operator_field(f, t):
    """The map ``(x, w) -> T(x, w) f(t)`` on the standard phase grid."""
    grid = f.grid
    pgrid = PhaseGrid.standard(grid)
    it = grid.index_of(t)
    i0 = grid.origin_index
    j = np.arange(grid.n)
    X, W = pgrid.mesh()
    shifted = f.samples[(it - (j - i0)) % grid.n][:, None]
    return TFRMatrix(pgrid, np.exp(2j * np.pi * W * (t - X / 2)) * shifted, TFRKind.GENERIC)


def _midpoint_rows(pgrid, grid):
    """Indices ``J`` with ``2 y_J = 2 x0 + J dx`` for every row coordinate ``y_J``."""
    doubled = (2 * pgrid.xgrid.coords - 2 * grid.x0) / grid.dx
    J = np.rint(doubled).astype(int)
    if np.max(np.abs(doubled - J)) > 1e-9 * max(1.0, np.max(np.abs(doubled))):
        raise GridError("phase grid rows are not midpoints of the signal grid")
    return J


def grossmann_royer(f, g, pgrid=None):
    """Grossmann-Royer transform ``R_g f(x, w) = int exp(4 pi i w (t - x)) f(2x - t) conj(g(t)) dt``.

    Args:
        f (SampledSignal): analysed signal.
        g (SampledSignal): window, on the same grid.
        pgrid (PhaseGrid): defaults to the half-step grid of ``f.grid``. Any
            half-step grid whose positions are midpoints of the signal grid
            is accepted, e.g. ``PhaseGrid.weyl(f.grid)``.

    Returns:
        (TFRMatrix): kind ``GRT``.
    """
    _check_pair(f, g)
    grid = f.grid
    n = grid.n
    grid.origin_index  # raises for grids not aligned with the origin
    pgrid = pgrid or PhaseGrid.half_step_of(grid)
    if not pgrid.half_step or abs(pgrid.wgrid.dx - grid.dw / 2) > 1e-9 * grid.dw:
        raise GridError("Grossmann-Royer transform needs frequency spacing dw/2")
    J = _midpoint_rows(pgrid, grid)
    i = np.arange(n)
    L = J[:, None] - i[None, :]
    inside = (L >= 0) & (L < n)
    H = np.where(inside, f.samples[np.clip(L, 0, n - 1)], 0) * np.conj(g.samples)[None, :]
    dual = grid.dual()
    S = fourier_sum(H, grid, dual, +1, axis=1)
    nu = 2 * pgrid.wgrid.coords
    cols = np.rint((nu - dual.x0) / dual.dx).astype(int) % n
    y = pgrid.xgrid.coords
    phase = np.exp(-2j * np.pi * np.outer(y, nu))
    logger.debug("grossmann_royer: n=%d, phase grid %s", n, pgrid.shape)
    return TFRMatrix(pgrid, grid.dx * phase * S[:, cols], TFRKind.GRT)


def midpoint_grossmann_royer(f, g):
    """``R_g f(x / 2, w / 2)`` for ``(x, w)`` on the standard phase grid.

    ``2 (x / 2) - t = x - t`` spans one period, so this one is evaluated
    circularly; it equals ``exp(pi i x w) V_{g reflected} f(x, w)``.
    """
    _check_pair(f, g)
    grid = f.grid
    n = grid.n
    i0 = grid.origin_index
    pgrid = PhaseGrid.standard(grid)
    j = np.arange(n)
    H = f.samples[(j[:, None] - j[None, :] + i0) % n] * np.conj(g.samples)[None, :]
    X, W = pgrid.mesh()
    S = grid.dx * np.exp(-1j * np.pi * X * W) * fourier_sum(H, grid, pgrid.wgrid, +1, axis=1)
    return TFRMatrix(pgrid, S, TFRKind.GENERIC)


def _window_rows(g):
    """``G[j, i] = g(t_i - x_j)`` on the periodic grid."""
    n = g.grid.n
    i0 = g.grid.origin_index
    j = np.arange(n)
    return g.samples[(j[None, :] - j[:, None] + i0) % n]


def stft(f, g):
    """Short-time Fourier transform ``V_g f(x, w) = int f(t) conj(g(t - x)) exp(-2 pi i t w) dt``."""
    _check_pair(f, g)
    grid = f.grid
    pgrid = PhaseGrid.standard(grid)
    V = grid.dx * fourier_sum(f.samples[None, :] * np.conj(_window_rows(g)), grid, pgrid.wgrid, -1, axis=1)
    return TFRMatrix(pgrid, V, TFRKind.STFT)


def cross_wigner(f, g, pgrid=None):
    """Cross-Wigner distribution ``W(f, g) = 2 R_g f``."""
    R = grossmann_royer(f, g, pgrid)
    return R.with_values(2 * R.values, TFRKind.WIGNER)


def ambiguity(f, g):
    """Cross-ambiguity function ``A(f, g)(x, w) = int f(t + x/2) conj(g(t - x/2)) exp(-2 pi i t w) dt``."""
    V = stft(f, g)
    X, W = V.pgrid.mesh()
    return V.with_values(np.exp(1j * np.pi * X * W) * V.values, TFRKind.AMBIGUITY)


def hw_transform(f, g):
    """Heisenberg-Weyl transform ``T_g f(x, w) = <T(x, w) f, g>`` on the standard grid."""
    _check_pair(f, g)
    grid = f.grid
    n = grid.n
    i0 = grid.origin_index
    pgrid = PhaseGrid.standard(grid)
    j = np.arange(n)
    H = f.samples[(j[None, :] - j[:, None] + i0) % n] * np.conj(g.samples)[None, :]
    X, W = pgrid.mesh()
    T = grid.dx * np.exp(-1j * np.pi * X * W) * fourier_sum(H, grid, pgrid.wgrid, +1, axis=1)
    return TFRMatrix(pgrid, T, TFRKind.HW)


def symplectic_fourier(F):
    """``F_s F(p, q) = int int exp(-2 pi i (w p - x q)) F(x, w) dx dw``.

    The result lives on ``(dual of the w grid) x (dual of the x grid)``; on a
    standard centred grid that is the same grid again and ``F_s`` is an involution.
    """
    pg = F.pgrid
    pgrid = PhaseGrid(pg.wgrid.dual(), pg.xgrid.dual())
    Y = fourier_sum(F.values, pg.xgrid, pgrid.wgrid, +1, axis=0)
    Y = fourier_sum(Y, pg.wgrid, pgrid.xgrid, -1, axis=1)
    return TFRMatrix(pgrid, pg.cell * Y.T, TFRKind.GENERIC)


def fourier2(F):
    """Two-dimensional Fourier transform ``int int F(x, w) exp(-2 pi i (x a + w b)) dx dw``."""
    pg = F.pgrid
    pgrid = PhaseGrid(pg.xgrid.dual(), pg.wgrid.dual())
    Y = fourier_sum(F.values, pg.xgrid, pgrid.xgrid, -1, axis=0)
    Y = fourier_sum(Y, pg.wgrid, pgrid.wgrid, -1, axis=1)
    return TFRMatrix(pgrid, pg.cell * Y, TFRKind.GENERIC)


def _require_kind(R, kinds):
    if R.kind not in kinds:
        raise UserError(f"expected a representation of kind {[k.value for k in kinds]}, got {R.kind.value}")


def time_marginal(R):
    """``int R(x, w) dw``; equals ``f(x) conj(g(x)) / 2`` for ``R = R_g f``."""
    _require_kind(R, (TFRKind.GRT, TFRKind.WIGNER))
    return SampledSignal(R.pgrid.xgrid, R.values.sum(axis=1) * R.pgrid.wgrid.dx)


def freq_marginal(R):
    """``int R(x, w) dx``; equals ``f^(w) conj(g^(w)) / 2`` for ``R = R_g f``."""
    _require_kind(R, (TFRKind.GRT, TFRKind.WIGNER))
    return SampledSignal(R.pgrid.wgrid, R.values.sum(axis=0) * R.pgrid.xgrid.dx)


def grossmann_royer_synthesis(R, g):
    """``int int R(z) (R(z) g) dz`` for ``R`` on the half-step grid of ``g.grid``."""
    grid = g.grid
    n = grid.n
    check_same_phase_grid(R.pgrid, PhaseGrid.half_step_of(grid))
    dual = grid.dual()
    x = R.pgrid.xgrid.coords
    nu = 2 * R.pgrid.wgrid.coords
    B = fourier_sum(R.values * np.exp(-2j * np.pi * np.outer(x, nu)), dual, grid, +1, axis=1)
    m = np.arange(n)
    G2 = g.samples[(2 * m[:, None] - m[None, :]) % n]
    return SampledSignal(grid, R.pgrid.cell * np.sum(B * G2, axis=0))


def grossmann_royer_inverse(R, g1, g2):
    """Reconstructs ``f`` from ``R = R_{g1} f``: ``f = 4 <g2, g1>^-1 int int R(z) R(z) g2 dz``."""
    c = inner(g2, g1)
    if abs(c) < 1e-14:
        raise WindowError("windows g1, g2 are orthogonal; the inversion formula does not apply")
    out = grossmann_royer_synthesis(R, g2)
    return out.with_samples(4 * out.samples / c)
