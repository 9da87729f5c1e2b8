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
"""Test signals and symbols: Schwartz-class fixtures, noise and random mixtures.

Random fixtures draw from a ``SplitMix64`` stream in a fixed order, so a
seed determines them completely.
"""
from __future__ import absolute_import

import numpy as np

from tfa_toolkit.exceptions import UserError
from tfa_toolkit.grid import SampledSignal, norm
from tfa_toolkit.hermite import FT_EIGEN_SCALE, HermiteSpec, hermite_function
from tfa_toolkit.operators import Symbol2D

MIXTURE_CENTER = 1.5
MIXTURE_WIDTHS = (0.8, 1.25)
MIXTURE_MODULATION = 1.0
MIXTURE_CHIRP = 0.5


def _normalised(f):
    nrm = norm(f)
    if nrm == 0:
        raise UserError("fixture vanishes on the grid")
    return f.with_samples(f.samples / nrm)


def gaussian(grid, center=0.0, width=1.0, chirp=0.0, modulation=0.0):
    """Unit-norm ``exp(-pi ((t - c) / width)^2 + pi i chirp (t - c)^2 + 2 pi i modulation t)``."""
    if width <= 0:
        raise UserError(f"gaussian width must be positive, got {width}")
    t = grid.coords - center
    values = np.exp(-np.pi * (t / width) ** 2 + 1j * np.pi * chirp * t ** 2 + 2j * np.pi * modulation * grid.coords)
    return _normalised(SampledSignal(grid, values))


def hermite(grid, k, scale=FT_EIGEN_SCALE):
    return hermite_function(HermiteSpec(k, scale), grid)


def gaussian_mixture(grid, rng, components=3):
    """Unit-norm sum of chirped, modulated Gaussians with complex normal weights."""
    out = np.zeros(grid.n, dtype=complex)
    for _ in range(components):
        center = rng.uniform(-MIXTURE_CENTER, MIXTURE_CENTER)
        width = rng.uniform(*MIXTURE_WIDTHS)
        modulation = rng.uniform(-MIXTURE_MODULATION, MIXTURE_MODULATION)
        chirp = rng.uniform(-MIXTURE_CHIRP, MIXTURE_CHIRP)
        coeff = rng.complex_normals(1)[0]
        out += coeff * gaussian(grid, center, width, chirp, modulation).samples
    return _normalised(SampledSignal(grid, out))


def random_signal(grid, rng):
    return gaussian_mixture(grid, rng, rng.integer(1, 4))


def boxcar_noise(grid, rng, halfwidth=None):
    """Complex white noise on ``|t| < halfwidth`` (a quarter period by default), zero outside."""
    halfwidth = grid.period / 4 if halfwidth is None else halfwidth
    inside = np.abs(grid.coords) < halfwidth
    values = np.where(inside, rng.complex_normals(grid.n), 0)
    return SampledSignal(grid, values)


def gaussian_bump_symbol(pgrid, center=(0.0, 0.0), width=1.0):
    """``exp(-pi |z - center|^2 / width^2)``."""
    cx, cw = center
    return Symbol2D.from_function(pgrid, lambda x, w: np.exp(-np.pi * ((x - cx) ** 2 + (w - cw) ** 2) / width ** 2))


def disc_symbol(pgrid, radius):
    """Indicator of ``|z| <= radius``."""
    return Symbol2D.from_function(pgrid, lambda x, w: (np.hypot(x, w) <= radius).astype(float))


def constant_symbol(pgrid, value=1.0):
    return Symbol2D(pgrid, np.full(pgrid.shape, value, dtype=complex))


def random_schwartz_symbol(pgrid, rng, bumps=3, width=0.35, spread=0.3, real=False):
    """Sum of Gaussian bumps with centres in ``[-spread, spread]^2``.

    With ``real`` the weights are positive reals, otherwise complex normals.
    """
    X, W = pgrid.mesh()
    values = np.zeros(pgrid.shape, dtype=complex)
    for _ in range(bumps):
        cx = rng.uniform(-spread, spread)
        cw = rng.uniform(-spread, spread)
        coeff = rng.uniform(0.5, 1.5) if real else rng.complex_normals(1)[0]
        values += coeff * np.exp(-np.pi * ((X - cx) ** 2 + (W - cw) ** 2) / width ** 2)
    return Symbol2D(pgrid, values)
