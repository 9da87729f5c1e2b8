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
from __future__ import absolute_import

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfa_toolkit import fixtures
from tfa_toolkit.exceptions import GridError, UserError
from tfa_toolkit.grid import (Grid1D, PhaseGrid, SampledSignal, fourier, fourier_sum, inner, inverse_fourier,
                              modulate, norm, reflect, translate)


@pytest.mark.parametrize('n', [0, 1, 3, 100, 2.0, True])
def test_grid_size_must_be_power_of_two(n):
    with pytest.raises(GridError):
        Grid1D(n, 0.1)


@pytest.mark.parametrize('dx', [0, -1.0, np.inf, np.nan])
def test_grid_spacing_must_be_positive(dx):
    with pytest.raises(GridError):
        Grid1D(8, dx)


def test_centred_defaults():
    grid = Grid1D(8, 0.5)
    assert grid.x0 == -2.0
    assert grid.origin_index == 4
    assert grid.period == 4.0
    assert grid.dw == 0.25
    np.testing.assert_allclose(grid.coords, np.arange(-4, 4) * 0.5)


def test_dual_is_reciprocal():
    grid = Grid1D(64, 1.0 / 8)
    dual = grid.dual()
    assert dual.n * dual.dx * grid.dx == pytest.approx(1.0)
    assert dual.dual().same_as(grid)
    assert grid.half_step_dual().dx == pytest.approx(dual.dx / 2)


def test_index_of_is_periodic_and_rejects_off_grid():
    grid = Grid1D(8, 0.5)
    assert grid.index_of(0.0) == 4
    assert grid.index_of(2.0) == 0
    assert grid.contains(1.5)
    assert not grid.contains(0.25)
    with pytest.raises(GridError):
        grid.index_of(0.1)


def test_origin_alignment_required():
    with pytest.raises(GridError):
        Grid1D(8, 1.0, 0.5).origin_index


def test_from_coords():
    grid = Grid1D.from_coords(np.linspace(-1, 1, 16, endpoint=False))
    assert grid.same_as(Grid1D(16, 0.125))
    with pytest.raises(GridError):
        Grid1D.from_coords([0.0, 1.0, 3.0, 4.0])
    with pytest.raises(GridError):
        Grid1D.from_coords([0.0, 1.0, 2.0])


def test_signal_checks_shape_and_values():
    grid = Grid1D(4, 1.0)
    with pytest.raises(GridError):
        SampledSignal(grid, np.zeros(5))
    with pytest.raises(UserError):
        SampledSignal(grid, [0, np.nan, 0, 0])
    f = SampledSignal(grid, [1, 2, 3, 4])
    assert f.samples.dtype == complex
    assert not f.samples.flags.writeable


def test_phase_grids():
    grid = Grid1D(16, 0.25)
    half = PhaseGrid.half_step_of(grid)
    assert half.shape == (16, 16)
    assert half.cell == pytest.approx(0.25 * grid.dw / 2)
    weyl = PhaseGrid.weyl(grid)
    assert weyl.shape == (32, 32)
    assert weyl.xgrid.dx == pytest.approx(0.125)
    assert weyl.wgrid.dx == pytest.approx(grid.dw / 2)
    assert weyl.to_dict() == {'n': 32, 'dx': 0.125, 'x0': -2.0, 'half_step': True}
    with pytest.raises(GridError):
        PhaseGrid(grid, grid.dual(), half_step=True)


def test_fourier_sum_needs_reciprocal_grids():
    grid = Grid1D(8, 0.5)
    with pytest.raises(GridError):
        fourier_sum(np.ones(8), grid, Grid1D(8, 1.0), -1)


def test_fourier_of_gaussian_is_gaussian():
    grid = Grid1D(256, 1.0 / 16)
    g = SampledSignal.from_function(grid, lambda t: np.exp(-np.pi * t ** 2))
    G = fourier(g)
    np.testing.assert_allclose(G.samples, np.exp(-np.pi * G.coords ** 2), atol=1e-12)


def test_fourier_is_unitary(grid, rng):
    f = fixtures.random_signal(grid, rng)
    assert norm(fourier(f)) == pytest.approx(norm(f), rel=1e-12)
    back = inverse_fourier(fourier(f), grid)
    np.testing.assert_allclose(back.samples, f.samples, atol=1e-12)


@pytest.mark.parametrize('x0', [0.0, -3.0, 1.75])
def test_inverse_fourier_returns_to_source_grid(x0, rng):
    grid = Grid1D(64, 0.25, x0)
    f = SampledSignal(grid, rng.complex_normals(grid.n))
    F = fourier(f)
    assert F.grid.same_as(grid.dual())
    back = inverse_fourier(F)
    assert back.grid.same_as(grid)
    np.testing.assert_allclose(back.samples, f.samples, atol=1e-12)
    assert inverse_fourier(F.with_samples(2 * F.samples)).grid.same_as(grid)


def test_inverse_fourier_without_source_is_centred(rng):
    F = SampledSignal(Grid1D(16, 0.5), rng.complex_normals(16))
    assert inverse_fourier(F).grid.same_as(Grid1D(16, 0.125))


def test_reflect_translate_modulate():
    grid = Grid1D(8, 1.0)
    f = SampledSignal(grid, np.arange(8))
    np.testing.assert_array_equal(reflect(f).samples, [0, 7, 6, 5, 4, 3, 2, 1])
    np.testing.assert_array_equal(translate(f, 1).samples, [7, 0, 1, 2, 3, 4, 5, 6])
    np.testing.assert_allclose(modulate(f, 1).samples, np.arange(8) * np.exp(2j * np.pi * grid.coords / 8))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=-20, max_value=20), st.integers(min_value=-20, max_value=20))
def test_time_frequency_shifts_preserve_norm(j, k):
    grid = Grid1D(64, 1.0 / 8)
    f = fixtures.gaussian(grid, center=0.3, chirp=0.2)
    assert norm(modulate(translate(f, j), k)) == pytest.approx(1.0, rel=1e-12)


def test_inner_conjugate_linear_in_second_slot():
    grid = Grid1D(4, 1.0)
    f = SampledSignal(grid, [1, 0, 0, 0])
    g = SampledSignal(grid, [1j, 0, 0, 0])
    assert inner(f, g) == pytest.approx(-1j)
    with pytest.raises(GridError):
        inner(f, SampledSignal(Grid1D(4, 0.5), [1, 0, 0, 0]))
