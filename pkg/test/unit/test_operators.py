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
from mock import patch
from scipy import linalg
from scipy.special import gammainc

from tfa_toolkit import fixtures
from tfa_toolkit.exceptions import AlgorithmError, GridError, UserError, WindowError
from tfa_toolkit.grid import Grid1D, PhaseGrid, SampledSignal, inner
from tfa_toolkit.operators import (OperatorMatrix, Provenance, SingularSpectrum, Symbol2D, antiwick_to_weyl,
                                   daubechies_spectrum, hermiticity_residual, localization_apply_grt,
                                   localization_apply_stft, localization_matrix, operator_norm, rayleigh_minimum,
                                   schatten_norm, signal_grid_of_weyl, singular_values, weyl_apply, weyl_matrix)
from tfa_toolkit.tfr import grossmann_royer, phase_inner


def test_symbol_validates(standard_pgrid):
    with pytest.raises(GridError):
        Symbol2D(standard_pgrid, np.zeros((2, 2)))
    with pytest.raises(UserError):
        Symbol2D(standard_pgrid, np.full(standard_pgrid.shape, np.nan))


def test_operator_matrix_validates(small_grid):
    with pytest.raises(GridError):
        OperatorMatrix(small_grid, np.eye(3))
    with pytest.raises(AlgorithmError):
        OperatorMatrix(small_grid, np.full((32, 32), np.inf))
    M = OperatorMatrix(small_grid, np.eye(32), 'weyl')
    assert M.provenance is Provenance.WEYL


def test_localization_forms_agree(small_grid, rng, standard_pgrid):
    a = fixtures.random_schwartz_symbol(standard_pgrid, rng, width=0.5, spread=1.0)
    phi1, phi2, f = (fixtures.random_signal(small_grid, rng) for _ in range(3))
    np.testing.assert_allclose(localization_apply_grt(a, phi1, phi2, f).samples,
                               localization_apply_stft(a, phi1, phi2, f).samples, atol=1e-9)


def test_constant_symbol_gives_scaled_identity(small_grid, standard_pgrid, rng):
    phi = fixtures.gaussian(small_grid)
    f = fixtures.random_signal(small_grid, rng)
    out = localization_apply_stft(fixtures.constant_symbol(standard_pgrid, 2.0), phi, phi, f)
    np.testing.assert_allclose(out.samples, 2.0 * f.samples, atol=1e-12)


def test_localization_matrix_matches_apply(small_grid, standard_pgrid, rng):
    a = fixtures.random_schwartz_symbol(standard_pgrid, rng)
    phi1, phi2, f = (fixtures.random_signal(small_grid, rng) for _ in range(3))
    M = localization_matrix(a, phi1, phi2)
    assert M.provenance is Provenance.LOCALIZATION
    np.testing.assert_allclose(M.apply(f).samples, localization_apply_stft(a, phi1, phi2, f).samples, atol=1e-12)


def test_localization_matrix_independent_of_threads(mid_grid, rng):
    a = fixtures.random_schwartz_symbol(PhaseGrid.standard(mid_grid), rng)
    phi = fixtures.gaussian(mid_grid)
    serial = localization_matrix(a, phi, phi, n_jobs=1)
    threaded = localization_matrix(a, phi, phi, n_jobs=4)
    np.testing.assert_array_equal(serial.entries, threaded.entries)


def test_localization_rejects_unknown_form(small_grid, standard_pgrid):
    phi = fixtures.gaussian(small_grid)
    with pytest.raises(UserError):
        localization_matrix(fixtures.constant_symbol(standard_pgrid), phi, phi, form='weyl')


def test_localization_rejects_zero_window(small_grid, standard_pgrid):
    phi = fixtures.gaussian(small_grid)
    with pytest.raises(WindowError):
        localization_apply_stft(fixtures.constant_symbol(standard_pgrid), SampledSignal.zeros(small_grid), phi, phi)


def test_localization_rejects_half_step_symbol(small_grid):
    phi = fixtures.gaussian(small_grid)
    a = fixtures.constant_symbol(PhaseGrid.half_step_of(small_grid))
    with pytest.raises(GridError):
        localization_apply_grt(a, phi, phi, phi)


def test_nonnegative_symbol_gives_positive_operator(mid_grid, rng):
    pg = PhaseGrid.standard(mid_grid)
    a = fixtures.random_schwartz_symbol(pg, rng, width=0.5, spread=1.0, real=True)
    phi = fixtures.random_signal(mid_grid, rng)
    M = localization_matrix(a, phi, phi)
    assert hermiticity_residual(M) < 1e-10
    assert rayleigh_minimum(M) > -1e-12


def test_weyl_grid_round_trip(small_grid):
    assert signal_grid_of_weyl(PhaseGrid.weyl(small_grid)).same_as(small_grid)
    with pytest.raises(GridError):
        signal_grid_of_weyl(PhaseGrid.half_step_of(small_grid))


def test_weyl_of_constant_is_identity(small_grid):
    M = weyl_matrix(fixtures.constant_symbol(PhaseGrid.weyl(small_grid)))
    assert M.provenance is Provenance.WEYL
    np.testing.assert_allclose(M.entries, np.eye(32), atol=1e-10)


def test_weyl_of_position_is_multiplication(small_grid):
    wg = PhaseGrid.weyl(small_grid)
    sigma = Symbol2D.from_function(wg, lambda x, w: x + 0 * w)
    np.testing.assert_allclose(weyl_matrix(sigma).entries, np.diag(small_grid.coords), atol=1e-8)


def test_weyl_weak_form(mid_grid, rng):
    wg = PhaseGrid.weyl(mid_grid)
    sigma = fixtures.random_schwartz_symbol(wg, rng, width=0.5, spread=1.0)
    f, g = fixtures.random_signal(mid_grid, rng), fixtures.random_signal(mid_grid, rng)
    lhs = inner(weyl_apply(sigma, f), g)
    rhs = 2 * phase_inner(sigma.as_tfr(), grossmann_royer(g, f, wg))
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_real_weyl_symbol_gives_hermitian_operator(mid_grid, rng):
    sigma = fixtures.random_schwartz_symbol(PhaseGrid.weyl(mid_grid), rng, real=True)
    assert hermiticity_residual(weyl_matrix(sigma)) < 1e-12


@pytest.mark.parametrize('n', [32, 64])
def test_antiwick_to_weyl_reproduces_operator(n, rng):
    grid = Grid1D(n, 1.0 / np.sqrt(n))
    a = fixtures.random_schwartz_symbol(PhaseGrid.standard(grid), rng)
    phi1 = fixtures.gaussian(grid)
    phi2 = fixtures.gaussian(grid, center=0.1, width=0.9)
    sigma = antiwick_to_weyl(a, phi1, phi2)
    assert sigma.pgrid.same_as(PhaseGrid.weyl(grid))
    np.testing.assert_allclose(weyl_matrix(sigma).entries, localization_matrix(a, phi1, phi2).entries, atol=1e-8)


def test_singular_values_and_schatten(small_grid):
    entries = np.diag(np.r_[[3.0, 2.0, 1.0], np.zeros(29)])
    M = OperatorMatrix(small_grid, entries)
    sv = singular_values(M)
    np.testing.assert_allclose(sv.values[:4], [3, 2, 1, 0], atol=1e-14)
    assert schatten_norm(M, 1) == pytest.approx(6.0)
    assert schatten_norm(sv, 2) == pytest.approx(np.sqrt(14.0))
    assert schatten_norm(M, 'inf') == pytest.approx(3.0)
    assert operator_norm(M) == pytest.approx(3.0)
    assert schatten_norm(OperatorMatrix(small_grid, np.zeros((32, 32))), 1) == 0.0


def test_schatten_norm_decreases_in_p(small_grid, rng):
    M = OperatorMatrix(small_grid, rng.complex_normals(32 * 32).reshape(32, 32))
    norms = [schatten_norm(M, p) for p in (1, 1.5, 2, 4, np.inf)]
    assert all(a >= b for a, b in zip(norms, norms[1:]))


def test_singular_spectrum_validates():
    with pytest.raises(AlgorithmError):
        SingularSpectrum([1.0, 2.0])
    with pytest.raises(AlgorithmError):
        SingularSpectrum([1.0, -1.0])


def test_svd_failure_is_numerical(small_grid):
    M = OperatorMatrix(small_grid, np.eye(32))
    with patch('tfa_toolkit.operators.linalg.svdvals', side_effect=linalg.LinAlgError('no convergence')):
        with pytest.raises(AlgorithmError):
            singular_values(M)


def test_daubechies_gaussian_bump(grid):
    pg = PhaseGrid.standard(grid)
    spec = daubechies_spectrum(fixtures.gaussian_bump_symbol(pg), fixtures.gaussian(grid))
    k = np.arange(6)
    np.testing.assert_allclose(spec.eigenvalues[:6], 2.0 ** -(k + 1), rtol=1e-4)
    assert np.all(spec.hermite_overlaps[:6] > 1 - 1e-6)


def test_daubechies_disc(grid):
    pg = PhaseGrid.standard(grid)
    spec = daubechies_spectrum(fixtures.disc_symbol(pg, 1.0), fixtures.gaussian(grid))
    top = spec.eigenvalues[:6]
    assert np.all(np.diff(top) < 0)
    assert np.all((top > 0) & (top < 1))
    np.testing.assert_allclose(top, gammainc(np.arange(1, 7), np.pi), atol=2e-2)


def test_daubechies_rejects_non_hermitian(small_grid, standard_pgrid):
    a = Symbol2D(standard_pgrid, 1j * np.ones(standard_pgrid.shape))
    with pytest.raises(AlgorithmError):
        daubechies_spectrum(a, fixtures.gaussian(small_grid))


def test_daubechies_uses_given_matrix(small_grid, standard_pgrid):
    a = fixtures.gaussian_bump_symbol(standard_pgrid)
    g = fixtures.gaussian(small_grid)
    M = localization_matrix(a, g, g, form='grt')
    with patch('tfa_toolkit.operators.localization_matrix') as rebuilt:
        spec = daubechies_spectrum(a, g, matrix=M)
    rebuilt.assert_not_called()
    np.testing.assert_allclose(spec.eigenvalues, daubechies_spectrum(a, g).eigenvalues, atol=1e-9)


def test_daubechies_rejects_matrix_on_other_grid(small_grid, standard_pgrid):
    g = fixtures.gaussian(small_grid)
    M = OperatorMatrix(Grid1D(16, 0.25), np.eye(16))
    with pytest.raises(GridError):
        daubechies_spectrum(fixtures.constant_symbol(standard_pgrid), g, matrix=M)
