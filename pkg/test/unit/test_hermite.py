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

from tfa_toolkit.exceptions import UserError
from tfa_toolkit.grid import PhaseGrid, fourier, inner
from tfa_toolkit.hermite import (MAX_ORDER, HermiteSpec, hermite_family, hermite_ft_eigen, hermite_function,
                                 hermite_tensor2)


@pytest.mark.parametrize('order', [-1, MAX_ORDER + 1, 1.5, True])
def test_order_range(order):
    with pytest.raises(UserError):
        HermiteSpec(order)


@pytest.mark.parametrize('scale', [0.0, -1.0, np.inf])
def test_scale_must_be_positive(scale):
    with pytest.raises(UserError):
        HermiteSpec(2, scale)


def test_family_is_orthonormal(grid):
    H = hermite_family(40, grid.coords * np.sqrt(2 * np.pi)) * (2 * np.pi) ** 0.25
    gram = grid.dx * H @ H.T
    np.testing.assert_allclose(gram, np.eye(41), atol=1e-10)


def test_low_orders_closed_form():
    t = np.linspace(-3, 3, 13)
    H = hermite_family(2, t)
    g = np.pi ** -0.25 * np.exp(-t ** 2 / 2)
    np.testing.assert_allclose(H[0], g)
    np.testing.assert_allclose(H[1], np.sqrt(2) * t * g)
    np.testing.assert_allclose(H[2], (2 * t ** 2 - 1) / np.sqrt(2) * g)


def test_high_order_stays_finite():
    H = hermite_family(MAX_ORDER, np.linspace(-30, 30, 101))
    assert np.all(np.isfinite(H))


@pytest.mark.parametrize('k', range(41))
def test_fourier_eigenfunctions(grid, k):
    h = hermite_ft_eigen(k, grid)
    np.testing.assert_allclose(fourier(h).samples, (-1j) ** k * h.samples, atol=1e-10)


def test_ground_state_is_unit_gaussian(grid):
    h = hermite_ft_eigen(0, grid)
    np.testing.assert_allclose(h.samples, 2 ** 0.25 * np.exp(-np.pi * grid.coords ** 2), atol=1e-14)
    assert inner(h, h).real == pytest.approx(1.0, rel=1e-12)


def test_hermite_function_scale(grid):
    h = hermite_function(HermiteSpec(1, 2.0), grid)
    expected = np.sqrt(2.0) * hermite_family(1, 2.0 * grid.coords)[1]
    np.testing.assert_allclose(h.samples, expected)


def test_tensor_product(small_grid):
    pg = PhaseGrid.standard(small_grid)
    T = hermite_tensor2(1, 2, pg)
    assert T.shape == pg.shape
    hx = hermite_family(1, pg.xgrid.coords)[1]
    hw = hermite_family(2, pg.wgrid.coords)[2]
    np.testing.assert_allclose(T, np.outer(hx, hw))
