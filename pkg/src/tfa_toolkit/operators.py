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
"""Localization and Weyl operators, their matrices and spectra.

Anti-Wick symbols live on the standard phase grid of the signal grid.
Weyl symbols live on ``PhaseGrid.weyl(grid)``: positions are all midpoints
``(t_l + t_i) / 2`` and frequencies have step ``dw / 2`` over ``1 / dx``.
On that grid the midpoint rule for ``L_sigma`` is exact for constant and
linear symbols.
"""
from __future__ import absolute_import

import enum
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from tfa_toolkit.exceptions import AlgorithmError, GridError, UserError, WindowError
from tfa_toolkit.grid import Grid1D, PhaseGrid, SampledSignal, check_same_grid, check_same_phase_grid, \
    fourier_sum, reflect
from tfa_toolkit.hermite import FT_EIGEN_SCALE, MAX_ORDER, hermite_family
from tfa_toolkit.modspaces import _exponent, convolve2d, stft_adjoint
from tfa_toolkit.parallel import map_columns
from tfa_toolkit.tfr import TFRKind, TFRMatrix, grossmann_royer, midpoint_grossmann_royer, stft

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10


class Provenance(str, enum.Enum):
    LOCALIZATION = 'localization'
    WEYL = 'weyl'
    GENERIC = 'generic'


@dataclass(frozen=True, eq=False)
class Symbol2D:
    pgrid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.pgrid.shape:
            raise GridError(f"symbol of shape {values.shape} does not fit phase grid {self.pgrid.shape}")
        if not np.all(np.isfinite(values)):
            raise UserError("symbol has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, pgrid, fn):
        X, W = pgrid.mesh()
        return cls(pgrid, fn(X, W))

    def as_tfr(self):
        return TFRMatrix(self.pgrid, self.values, TFRKind.GENERIC)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """``n x n`` matrix acting on samples; quadrature weights are folded into the entries."""

    grid: Grid1D
    entries: np.ndarray
    provenance: Provenance = Provenance.GENERIC

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.grid.n, self.grid.n):
            raise GridError(f"operator of shape {entries.shape} does not act on {self.grid.n} samples")
        if not np.all(np.isfinite(entries)):
            raise AlgorithmError("operator matrix has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'provenance', Provenance(self.provenance))

    def apply(self, f):
        check_same_grid(self.grid, f.grid)
        return f.with_samples(self.entries @ f.samples)


@dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or np.any(values < 0) or np.any(np.diff(values) > 0):
            raise AlgorithmError("singular values must be nonnegative and nonincreasing")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True)
class DaubechiesSpectrum:
    eigenvalues: np.ndarray
    hermite_overlaps: np.ndarray


def _check_windows(*windows):
    for g in windows:
        if not np.any(g.samples):
            raise WindowError("window vanishes identically")


def _check_antiwick(a, grid):
    check_same_phase_grid(a.pgrid, PhaseGrid.standard(grid))


def localization_apply_stft(a, phi1, phi2, f):
    """``A f = int int a(x, w) V_phi1 f(x, w) M_w T_x phi2 dx dw``."""
    check_same_grid(phi1.grid, phi2.grid)
    _check_windows(phi1, phi2)
    _check_antiwick(a, f.grid)
    V = stft(f, phi1)
    return stft_adjoint(V.with_values(a.values * V.values), phi2)


def localization_apply_grt(a, phi1, phi2, f):
    """``A f(t) = int int a(x, w) R_{phi1 reflected} f(x/2, w/2) (R(x/2, w/2) phi2 reflected)(t) dx dw``."""
    check_same_grid(phi1.grid, phi2.grid)
    _check_windows(phi1, phi2)
    grid = f.grid
    _check_antiwick(a, grid)
    n = grid.n
    i0 = grid.origin_index
    R = midpoint_grossmann_royer(f, reflect(phi1))
    X, W = a.pgrid.mesh()
    B = fourier_sum(a.values * R.values * np.exp(-1j * np.pi * X * W), a.pgrid.wgrid, grid, +1, axis=1)
    j = np.arange(n)
    phi2r = reflect(phi2).samples[(j[:, None] - j[None, :] + i0) % n]
    return f.with_samples(a.pgrid.cell * np.sum(B * phi2r, axis=0))


_LOCALIZATION_FORMS = {'stft': localization_apply_stft, 'grt': localization_apply_grt}


def localization_matrix(a, phi1, phi2, form='stft', n_jobs=None):
    """Matrix of ``A_a^{phi1, phi2}``, one column per unit sample."""
    try:
        apply = _LOCALIZATION_FORMS[form]
    except KeyError:
        raise UserError(f"unknown localization form {form!r}")
    grid = phi1.grid
    eye = np.eye(grid.n)

    def column(i):
        return apply(a, phi1, phi2, SampledSignal(grid, eye[i])).samples

    return OperatorMatrix(grid, map_columns(column, grid.n, n_jobs), Provenance.LOCALIZATION)


def signal_grid_of_weyl(pgrid):
    """Inverse of ``PhaseGrid.weyl``."""
    if pgrid.xgrid.n % 2:
        raise GridError("Weyl phase grid must have an even number of rows")
    grid = Grid1D(pgrid.xgrid.n // 2, 2 * pgrid.xgrid.dx, pgrid.xgrid.x0)
    if not pgrid.same_as(PhaseGrid.weyl(grid)):
        raise GridError("symbol is not sampled on a Weyl phase grid")
    return grid


def weyl_matrix(sigma):
    """Midpoint rule ``M[l, i] = dx (dw / 2) sum_k sigma((t_l + t_i) / 2, w_k) exp(2 pi i w_k (t_l - t_i))``."""
    grid = signal_grid_of_weyl(sigma.pgrid)
    n = grid.n
    wgrid = sigma.pgrid.wgrid
    S = fourier_sum(sigma.values, wgrid, wgrid.dual(), +1, axis=1)
    l = np.arange(n)
    M = grid.dx * wgrid.dx * S[l[:, None] + l[None, :], l[:, None] - l[None, :] + n]
    logger.debug("weyl_matrix: n=%d", n)
    return OperatorMatrix(grid, M, Provenance.WEYL)


def weyl_apply(sigma, f):
    """``L_sigma f``; ``<L_sigma f, g> = 2 <sigma, R_f g>`` on the Weyl grid."""
    M = weyl_matrix(sigma)
    return M.apply(f)


def _embed_on_weyl(a, pgrid):
    out = np.zeros(pgrid.shape, dtype=complex)
    out[::2, ::2] = 4 * a.values
    return out


def antiwick_to_weyl(a, phi1, phi2):
    """Weyl symbol of ``A_a^{phi1, phi2}``: ``2 (a * R_{phi1} phi2)`` restricted to ``|w| < 1 / (4 dx)``.

    ``a`` is carried onto the Weyl grid with its integral preserved. Symbols
    on the Weyl grid satisfy ``sigma(x, w + 1/(2dx)) = (-1)^J sigma(x, w)``
    on row ``J``, so twice the principal band quantises to the same operator.
    """
    check_same_grid(phi1.grid, phi2.grid)
    _check_windows(phi1, phi2)
    grid = phi1.grid
    _check_antiwick(a, grid)
    n = grid.n
    pgrid = PhaseGrid.weyl(grid)
    R = grossmann_royer(phi2, phi1, pgrid)
    conv = convolve2d(TFRMatrix(pgrid, _embed_on_weyl(a, pgrid)), R.with_values(R.values, TFRKind.GENERIC))
    values = np.zeros(pgrid.shape, dtype=complex)
    band = slice(n // 2, 3 * n // 2)
    values[:, band] = 2 * conv.values[:, band]
    return Symbol2D(pgrid, values)


def singular_values(M):
    try:
        s = linalg.svdvals(M.entries)
    except (linalg.LinAlgError, ValueError) as e:
        raise AlgorithmError("singular value decomposition failed", caused_by=e)
    return SingularSpectrum(s)


def schatten_norm(M, p):
    """``l^p`` norm of the singular values; ``p = inf`` gives the operator norm."""
    p = _exponent(p)
    s = (M if isinstance(M, SingularSpectrum) else singular_values(M)).values
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    top = s[0]
    if top == 0:
        return 0.0
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def operator_norm(M):
    return schatten_norm(M, np.inf)


def hermiticity_residual(M):
    E = M.entries
    return float(np.max(np.abs(E - E.conj().T)))


def rayleigh_minimum(M):
    """Minimum of ``Re <A f, f> / <f, f>``."""
    E = M.entries
    try:
        return float(linalg.eigvalsh((E + E.conj().T) / 2)[0])
    except linalg.LinAlgError as e:
        raise AlgorithmError("eigenvalue computation failed", caused_by=e)


def daubechies_spectrum(a, g, scale=FT_EIGEN_SCALE, n_jobs=None, matrix=None):
    """Eigenvalues of ``A_a^{g, g}`` in descending order and the overlaps ``|<v_k, h_k>|``.

    ``h_k`` are the Hermite functions at ``scale``; the default matches the
    ground state ``exp(-pi t^2)``. Each eigenvector is normalised in ``L^2``
    before the overlap is taken. An already materialised ``matrix`` of the
    operator is used as is.

    Raises:
        AlgorithmError: if the localization matrix is not Hermitian to ``1e-10``.
    """
    M = matrix if matrix is not None else localization_matrix(a, g, g, n_jobs=n_jobs)
    check_same_grid(M.grid, g.grid)
    residual = hermiticity_residual(M)
    if residual > HERMITIAN_TOL:
        raise AlgorithmError(f"localization matrix is not Hermitian (residual {residual:.3e})")
    E = M.entries
    try:
        w, v = linalg.eigh((E + E.conj().T) / 2)
    except linalg.LinAlgError as e:
        raise AlgorithmError("eigendecomposition failed", caused_by=e)
    w, v = w[::-1], v[:, ::-1]
    grid = g.grid
    top = min(grid.n - 1, MAX_ORDER)
    H = np.sqrt(scale) * hermite_family(top, scale * grid.coords)
    overlaps = np.sqrt(grid.dx) * np.abs(np.sum(v[:, :top + 1].conj() * H.T, axis=0))
    logger.debug("daubechies_spectrum: n=%d, top eigenvalue %g", grid.n, w[0])
    return DaubechiesSpectrum(w, overlaps)
