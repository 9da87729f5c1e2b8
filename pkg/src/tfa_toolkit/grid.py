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
"""Uniform periodic grids, sampled signals and the elementary operators on them.

Conventions used throughout the package:

* a grid has ``n`` samples (a power of two), spacing ``dx`` and first coordinate
  ``x0``; it is periodic with period ``n * dx``;
* the dual spacing is ``dw = 1 / (n * dx)`` and frequency axes are stored
  centred, index 0 holding the most negative frequency;
* integrals are Riemann sums with the grid spacing as weight.
"""
from __future__ import absolute_import

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as sp_fft

from tfa_toolkit.exceptions import GridError, UserError

logger = logging.getLogger(__name__)

GRID_RTOL = 1e-9


def _is_power_of_two(n):
    return n >= 2 and (n & (n - 1)) == 0


def _close(a, b, rtol=GRID_RTOL):
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1.0)


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid ``x0 + i * dx``, ``i = 0 .. n - 1``.

    ``x0`` defaults to the centred value ``-(n / 2) * dx``.
    """

    n: int
    dx: float
    x0: float = None

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise GridError(f"grid size must be an integer, got {self.n!r}")
        if not _is_power_of_two(int(self.n)):
            raise GridError(f"grid size must be a power of two >= 2, got {self.n}")
        dx = float(self.dx)
        if not np.isfinite(dx) or dx <= 0:
            raise GridError(f"grid spacing must be positive and finite, got {self.dx!r}")
        x0 = -(int(self.n) // 2) * dx if self.x0 is None else float(self.x0)
        if not np.isfinite(x0):
            raise GridError(f"grid origin must be finite, got {self.x0!r}")
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'dx', dx)
        object.__setattr__(self, 'x0', x0)

    @classmethod
    def from_coords(cls, coords):
        """Builds the grid whose coordinates are ``coords``.

        Raises:
            GridError: if the coordinates are not strictly increasing and
                equispaced to ``1e-9`` relative, or their count is not a power of two.
        """
        t = np.asarray(coords, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise GridError("at least two coordinates are required")
        steps = np.diff(t)
        if np.any(steps <= 0):
            raise GridError("coordinates must be strictly increasing")
        dx = (t[-1] - t[0]) / (t.size - 1)
        if np.max(np.abs(steps - dx)) > GRID_RTOL * dx:
            raise GridError("coordinates are not equispaced to 1e-9 relative")
        return cls(t.size, dx, t[0])

    @property
    def dw(self):
        return 1.0 / (self.n * self.dx)

    @property
    def period(self):
        return self.n * self.dx

    @cached_property
    def coords(self):
        out = self.x0 + np.arange(self.n) * self.dx
        out.setflags(write=False)
        return out

    @property
    def origin_index(self):
        """Index of the coordinate 0; the grid must be origin-aligned."""
        r = -self.x0 / self.dx
        k = int(round(r))
        if abs(r - k) > GRID_RTOL * max(1.0, abs(r)):
            raise GridError(f"grid with x0={self.x0} is not aligned with the origin")
        return k % self.n

    def dual(self):
        return Grid1D(self.n, self.dw)

    def half_step_dual(self):
        return Grid1D(self.n, self.dw / 2)

    def midpoint(self):
        """Grid of all midpoints ``(t_i + t_j) / 2``: ``2n`` samples, spacing ``dx / 2``."""
        return Grid1D(2 * self.n, self.dx / 2, self.x0)

    def index_of(self, x):
        """Periodic index of grid point ``x``; off-grid points raise ``GridError``."""
        r = (float(x) - self.x0) / self.dx
        k = int(round(r))
        if abs(r - k) > GRID_RTOL * max(1.0, abs(r)):
            raise GridError(f"point {x} is not on the grid (dx={self.dx}, x0={self.x0})")
        return k % self.n

    def contains(self, x):
        try:
            self.index_of(x)
        except GridError:
            return False
        return True

    def same_as(self, other):
        return (isinstance(other, Grid1D) and self.n == other.n and _close(self.dx, other.dx)
                and _close(self.x0, other.x0))

    def to_dict(self):
        return {'n': self.n, 'dx': self.dx, 'x0': self.x0}


def check_same_grid(a, b):
    if not a.same_as(b):
        raise GridError(f"grid mismatch: {a} vs {b}")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples of a function of one real variable on a ``Grid1D``.

    ``conjugate_x0`` is the first coordinate of the grid this signal was
    transformed from, if any; :func:`inverse_fourier` returns there.
    """

    grid: Grid1D
    samples: np.ndarray
    conjugate_x0: float = None

    def __post_init__(self):
        values = np.array(self.samples, dtype=complex)
        if values.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise UserError("signal contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, 'samples', values)

    @classmethod
    def from_function(cls, grid, fn):
        return cls(grid, fn(grid.coords))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.n, dtype=complex))

    def with_samples(self, samples):
        return SampledSignal(self.grid, samples, self.conjugate_x0)

    @property
    def coords(self):
        return self.grid.coords

    def __len__(self):
        return self.grid.n

    def __repr__(self):
        return f"SampledSignal(n={self.grid.n}, dx={self.grid.dx}, x0={self.grid.x0})"


@dataclass(frozen=True)
class PhaseGrid:
    """Product grid of positions ``xgrid`` and frequencies ``wgrid``.

    With ``half_step`` the frequency spacing is half the dual spacing of
    ``xgrid``, the layout used by the Grossmann-Royer and Wigner transforms.
    """

    xgrid: Grid1D
    wgrid: Grid1D
    half_step: bool = False

    def __post_init__(self):
        if self.half_step and not _close(self.wgrid.dx, self.xgrid.dw / 2):
            raise GridError("half-step phase grid needs frequency spacing dw/2")

    @classmethod
    def standard(cls, grid):
        return cls(grid, grid.dual())

    @classmethod
    def half_step_of(cls, grid):
        return cls(grid, grid.half_step_dual(), half_step=True)

    @classmethod
    def weyl(cls, grid):
        """Carrier of Weyl symbols for signals on ``grid``: midpoints times ``dw/2`` steps, ``2n x 2n``."""
        mid = grid.midpoint()
        return cls(mid, mid.half_step_dual(), half_step=True)

    @property
    def shape(self):
        return (self.xgrid.n, self.wgrid.n)

    @property
    def cell(self):
        return self.xgrid.dx * self.wgrid.dx

    def mesh(self):
        """Coordinate arrays ``(X, W)`` of shape ``self.shape``."""
        return np.meshgrid(self.xgrid.coords, self.wgrid.coords, indexing='ij')

    def same_as(self, other):
        return (isinstance(other, PhaseGrid) and self.half_step == other.half_step
                and self.xgrid.same_as(other.xgrid) and self.wgrid.same_as(other.wgrid))

    def to_dict(self):
        return {'n': self.xgrid.n, 'dx': self.xgrid.dx, 'x0': self.xgrid.x0, 'half_step': self.half_step}


def check_same_phase_grid(a, b):
    if not a.same_as(b):
        raise GridError("phase grid mismatch")


def _along(vec, ndim, axis):
    shape = [1] * ndim
    shape[axis] = vec.size
    return vec.reshape(shape)


def fourier_sum(values, grid, out_grid, sign, axis=-1):
    """Evaluates ``sum_i v_i exp(sign * 2 pi i t_i w_k)`` for ``t`` on ``grid`` and ``w`` on ``out_grid``.

    The two grids must be reciprocal (same ``n`` and ``dx_t * dx_w * n == 1``),
    which turns the sum into one FFT with phase corrections on both sides.

    Args:
        values (array): samples along ``axis``.
        grid (Grid1D): input coordinates.
        out_grid (Grid1D): output coordinates.
        sign (int): +1 or -1.
        axis (int): axis of ``values`` holding the samples.

    Returns:
        (np.ndarray): complex array of the same shape as ``values``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    n = grid.n
    if out_grid.n != n or not _close(grid.dx * out_grid.dx * n, 1.0):
        raise GridError("fourier_sum needs reciprocal grids")
    values = np.asarray(values, dtype=complex)
    axis = axis % values.ndim
    if values.shape[axis] != n:
        raise GridError(f"axis {axis} has length {values.shape[axis]}, expected {n}")
    pre = np.exp(sign * 2j * np.pi * grid.coords * out_grid.x0)
    post = np.exp(sign * 2j * np.pi * grid.x0 * (out_grid.coords - out_grid.x0))
    v = values * _along(pre, values.ndim, axis)
    if sign < 0:
        y = sp_fft.fft(v, axis=axis)
    else:
        y = sp_fft.ifft(v, axis=axis, norm='forward')
    return y * _along(post, values.ndim, axis)


def fourier(f):
    """Fourier transform ``f^(w) = int f(t) exp(-2 pi i t w) dt`` on the centred dual grid."""
    dual = f.grid.dual()
    return SampledSignal(dual, f.grid.dx * fourier_sum(f.samples, f.grid, dual, -1), f.grid.x0)


def inverse_fourier(F, grid=None):
    """Inverse of :func:`fourier`.

    ``grid`` defaults to the grid ``F`` was transformed from, or the centred
    dual of ``F.grid`` when that is unknown.
    """
    if grid is not None:
        target = grid
    elif F.conjugate_x0 is not None:
        target = Grid1D(F.grid.n, F.grid.dw, F.conjugate_x0)
    else:
        target = F.grid.dual()
    return SampledSignal(target, F.grid.dx * fourier_sum(F.samples, F.grid, target, +1), F.grid.x0)


def translate(f, j):
    """``T_{j dx} f``: circular shift by ``j`` samples."""
    return f.with_samples(np.roll(f.samples, int(j)))


def modulate(f, k):
    """``M_{k dw} f``: multiplication by ``exp(2 pi i k dw t)``."""
    phase = np.exp(2j * np.pi * int(k) * f.grid.dw * f.grid.coords)
    return f.with_samples(f.samples * phase)


def reflection_indices(grid):
    i0 = grid.origin_index
    return (2 * i0 - np.arange(grid.n)) % grid.n


def reflect(f):
    """``f(-t)`` with periodic wrap about the origin sample."""
    return f.with_samples(f.samples[reflection_indices(f.grid)])


def inner(f, g):
    """``<f, g> = dx sum f conj(g)``."""
    check_same_grid(f.grid, g.grid)
    return complex(np.vdot(g.samples, f.samples) * f.grid.dx)


def norm(f):
    return float(np.sqrt(max(inner(f, f).real, 0.0)))
