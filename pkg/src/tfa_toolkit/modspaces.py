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
"""Weights, weighted mixed norms and modulation norms.

Norms are accumulated in log space: exponential weights overflow double
precision long before the norms they enter do.
"""
from __future__ import absolute_import

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sp_fft
from scipy.special import logsumexp

from tfa_toolkit.exceptions import GridError, UserError, WeightError, WindowError
from tfa_toolkit.grid import PhaseGrid, SampledSignal, check_same_grid, check_same_phase_grid, fourier, \
    fourier_sum, inner
from tfa_toolkit.tfr import TFRKind, TFRMatrix, _window_rows, stft

logger = logging.getLogger(__name__)

DECAY_SEARCH = np.pi * 0.1 * 1.1 ** np.arange(32)
DECAY_PEAK_FACTOR = 10.0
DECAY_NOISE_FLOOR = 1e-10


class WeightKind(str, enum.Enum):
    POLY_SPLIT = 'poly_split'
    POLY_RADIAL = 'poly_radial'
    EXP_FULL = 'exp_full'
    EXP_FREQ = 'exp_freq'
    BD = 'bd'
    CONST = 'const'


_WEIGHT_PARAMS = {
    WeightKind.POLY_SPLIT: ('t', 's'),
    WeightKind.POLY_RADIAL: ('s',),
    WeightKind.EXP_FULL: ('s',),
    WeightKind.EXP_FREQ: ('s',),
    WeightKind.BD: ('a', 'r', 's', 'b'),
    WeightKind.CONST: ('c',),
}


@dataclass(frozen=True)
class WeightSpec:
    """Parametric weight ``m(x, w)`` on phase space.

    Kinds and parameters:
        POLY_SPLIT  ``<x>^t <w>^s``
        POLY_RADIAL ``<z>^s = (1 + x^2 + w^2)^(s/2)``
        EXP_FULL    ``exp(s |z|)``
        EXP_FREQ    ``exp(s |w|)``
        BD          ``exp(s |z|^b) (1 + |z|)^a log(e + |z|)^r`` with ``a, r, s >= 0``, ``0 <= b <= 1``
        CONST       ``c`` (default 1)
    """

    kind: WeightKind = WeightKind.CONST
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            kind = WeightKind(self.kind)
        except ValueError as e:
            raise WeightError(f"unknown weight kind {self.kind!r}", caused_by=e)
        params = dict(self.params or {})
        if kind is WeightKind.CONST:
            params.setdefault('c', 1.0)
        expected = _WEIGHT_PARAMS[kind]
        if set(params) != set(expected):
            raise WeightError(f"weight {kind.value} takes parameters {list(expected)}, got {sorted(params)}")
        for key, value in params.items():
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)) \
                    or not np.isfinite(value):
                raise WeightError(f"weight parameter {key}={value!r} must be a finite real")
            params[key] = float(value)
        if kind is WeightKind.BD:
            if min(params['a'], params['r'], params['s']) < 0 or not 0 <= params['b'] <= 1:
                raise WeightError("BD weight needs a, r, s >= 0 and 0 <= b <= 1")
        if kind is WeightKind.CONST and params['c'] <= 0:
            raise WeightError("constant weight must be positive")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'params', params)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or 'kind' not in data:
            raise WeightError("weight must be an object with a 'kind' field")
        return cls(data['kind'], data.get('params', {}))

    def to_dict(self):
        return {'kind': self.kind.value, 'params': dict(self.params)}


@dataclass(frozen=True)
class MixedNormParams:
    """Exponents ``p`` (inner, over x) and ``q`` (outer, over w) in ``[1, inf]`` and a weight."""

    p: float = 2.0
    q: float = 2.0
    weight: WeightSpec = field(default_factory=WeightSpec)

    def __post_init__(self):
        for name in ('p', 'q'):
            value = _exponent(getattr(self, name), name)
            object.__setattr__(self, name, value)
        if isinstance(self.weight, dict):
            object.__setattr__(self, 'weight', WeightSpec.from_dict(self.weight))


def _exponent(value, name='p'):
    if isinstance(value, str) and value.strip().lower() in ('inf', 'infinity', '∞'):
        return np.inf
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise UserError(f"exponent {name}={value!r} is not a number", caused_by=e)
    if np.isnan(value) or value < 1:
        raise UserError(f"exponent {name}={value} must lie in [1, inf]")
    return value


def log_weight_eval(w, x, omega):
    """Natural logarithm of ``weight_eval``; broadcasts over array arguments."""
    x = np.abs(np.asarray(x, dtype=float))
    omega = np.abs(np.asarray(omega, dtype=float))
    p = w.params
    if w.kind is WeightKind.POLY_SPLIT:
        return 0.5 * p['t'] * np.log1p(x ** 2) + 0.5 * p['s'] * np.log1p(omega ** 2)
    if w.kind is WeightKind.POLY_RADIAL:
        return 0.5 * p['s'] * np.log1p(x ** 2 + omega ** 2)
    if w.kind is WeightKind.EXP_FULL:
        return p['s'] * np.hypot(x, omega)
    if w.kind is WeightKind.EXP_FREQ:
        return p['s'] * omega + 0 * x
    if w.kind is WeightKind.BD:
        r = np.hypot(x, omega)
        return p['s'] * r ** p['b'] + p['a'] * np.log1p(r) + p['r'] * np.log(np.log(np.e + r))
    return np.log(p['c']) + 0 * (x + omega)


def weight_eval(w, x, omega):
    """Value of the weight at ``(x, omega)``."""
    out = np.exp(log_weight_eval(w, x, omega))
    return float(out) if np.ndim(out) == 0 else out


def log_weight_grid(w, pgrid):
    X, W = pgrid.mesh()
    return log_weight_eval(w, X, W)


def weight_grid(w, pgrid):
    return np.exp(log_weight_grid(w, pgrid))


def _log_mixed(logv, p, q, d_inner, d_outer):
    """log of ``(sum_outer (sum_inner v^p d_inner)^(q/p) d_outer)^(1/q)`` for ``logv[inner, outer]``."""
    with np.errstate(divide='ignore', invalid='ignore'):
        if np.isinf(p):
            inner_part = np.max(logv, axis=0)
        else:
            inner_part = (logsumexp(p * logv, axis=0) + np.log(d_inner)) / p
        if np.isinf(q):
            return float(np.max(inner_part))
        return float((logsumexp(q * inner_part) + np.log(d_outer)) / q)


def _log_abs(values):
    with np.errstate(divide='ignore'):
        return np.log(np.abs(values))


def mixed_norm(F, params):
    """Weighted mixed norm ``(int (int |F|^p m^p dx)^(q/p) dw)^(1/q)`` by quadrature.

    Infinite exponents are maxima over the samples.
    """
    if not np.any(F.values):
        return 0.0
    logv = _log_abs(F.values) + log_weight_grid(params.weight, F.pgrid)
    return float(np.exp(_log_mixed(logv, params.p, params.q, F.pgrid.xgrid.dx, F.pgrid.wgrid.dx)))


def lebesgue_norm(f, p, t=0.0):
    """``||f <x>^t||_{L^p}``."""
    p = _exponent(p)
    if not np.any(f.samples):
        return 0.0
    logv = _log_abs(f.samples) + 0.5 * t * np.log1p(f.coords ** 2)
    with np.errstate(divide='ignore'):
        if np.isinf(p):
            return float(np.exp(np.max(logv)))
        return float(np.exp((logsumexp(p * logv) + np.log(f.grid.dx)) / p))


def _require_window(g):
    if not np.any(g.samples):
        raise WindowError("window vanishes identically")


def modulation_norm(f, g, params):
    """``||f||_{M^{p,q}_m} = ||V_g f||_{L^{p,q}_m}``."""
    _require_window(g)
    return mixed_norm(stft(f, g), params)


def stft_adjoint(F, g):
    """``V_g^* F(t) = int int F(x, w) exp(2 pi i t w) g(t - x) dx dw``."""
    grid = g.grid
    check_same_phase_grid(F.pgrid, PhaseGrid.standard(grid))
    B = fourier_sum(F.values, F.pgrid.wgrid, grid, +1, axis=1)
    return SampledSignal(grid, F.pgrid.cell * np.sum(_window_rows(g) * B, axis=0))


def stft_inverse(F, g, psi):
    """Reconstructs ``f`` from ``F = V_psi f`` with synthesis window ``g``."""
    _require_window(g)
    _require_window(psi)
    c = inner(g, psi)
    if abs(c) < 1e-14:
        raise WindowError("synthesis and analysis windows are orthogonal")
    out = stft_adjoint(F, g)
    return out.with_samples(out.samples / c)


def young_functional(p0, p1, p2):
    """``R(p) = 2 - 1/p0 - 1/p1 - 1/p2``."""
    return 2.0 - sum(1.0 / _exponent(p) for p in (p0, p1, p2))


def convolve(f, g):
    """Circular convolution ``(f * g)(t) = int f(s) g(t - s) ds``."""
    check_same_grid(f.grid, g.grid)
    c = sp_fft.ifft(sp_fft.fft(f.samples) * sp_fft.fft(g.samples))
    return f.with_samples(f.grid.dx * np.roll(c, -f.grid.origin_index))


def convolve2d(F, G):
    """Circular convolution on a phase grid with weight ``dx dw``."""
    check_same_phase_grid(F.pgrid, G.pgrid)
    pg = F.pgrid
    c = sp_fft.ifft2(sp_fft.fft2(F.values) * sp_fft.fft2(G.values))
    c = np.roll(c, (-pg.xgrid.origin_index, -pg.wgrid.origin_index), axis=(0, 1))
    return TFRMatrix(pg, pg.cell * c, TFRKind.GENERIC)


def _decay_rate(values, coords):
    a = np.abs(values)
    peak = a.max()
    if peak == 0:
        raise UserError("decay estimate of a zero signal")
    keep = a >= DECAY_NOISE_FLOOR * peak
    loga = np.log(a[keep])
    t2 = coords[keep] ** 2
    bound = np.log(DECAY_PEAK_FACTOR * peak)
    for h in DECAY_SEARCH[::-1]:
        if np.max(loga + h * t2) <= bound:
            return float(h)
    return float(DECAY_SEARCH[0])


def gaussian_decay_estimate(f):
    """Largest ``h`` in the search grid with ``max |f(t)| exp(h t^2) <= 10 max |f|``, and the same for ``f^``.

    Samples below ``1e-10`` of the peak are ignored; with no admissible
    ``h`` the search floor ``0.1 pi`` is returned.

    Returns:
        (tuple): ``(h_time, h_freq)``.
    """
    h_time = _decay_rate(f.samples, f.coords)
    F = fourier(f)
    h_freq = _decay_rate(F.samples, F.coords)
    logger.debug("decay estimate: h_time=%g h_freq=%g", h_time, h_freq)
    return h_time, h_freq


def _periodic_gaussian(grid, centers, width):
    """``phi(t - c)`` for every centre, unit-norm Gaussian, offsets wrapped into one period."""
    d = grid.coords[None, :] - np.asarray(centers)[:, None]
    d = (d + grid.period / 2) % grid.period - grid.period / 2
    return 2 ** 0.25 / np.sqrt(width) * np.exp(-np.pi * (d / width) ** 2)


@dataclass(frozen=True)
class PhaseSpaceSTFT:
    """``log |V_Phi F(z, zeta)|`` on the subsampled window positions, with the radii the weights see."""

    logv: np.ndarray
    z_radius: np.ndarray
    zeta_radius: np.ndarray
    d_inner: float
    d_outer: float

    def norm(self, params):
        logm = log_weight_eval(params.weight, self.z_radius[:, :, None, None], self.zeta_radius[None, None, :, :])
        nz = self.z_radius.size
        logv = (self.logv + logm).reshape(nz, self.logv[0, 0].size)
        return float(np.exp(_log_mixed(logv, params.p, params.q, self.d_inner, self.d_outer)))


def phase_space_stft(F, stride=None, width=1.0):
    """Four-dimensional STFT of a phase-space function through a separable Gaussian window.

    Window positions ``z`` run over the phase grid subsampled by ``stride``
    and frequencies ``zeta`` over the dual grids.

    Args:
        F (TFRMatrix): symbol or representation.
        stride (int): window position step; defaults to keeping at most 32 positions per axis.
        width (float): Gaussian window width.

    Returns:
        (PhaseSpaceSTFT): the transform, or None when ``F`` vanishes.
    """
    pg = F.pgrid
    nx, nw = pg.shape
    if stride is None:
        stride = max(1, max(nx, nw) // 32)
    if stride < 1 or nx % stride or nw % stride:
        raise GridError(f"stride {stride} does not divide the phase grid {pg.shape}")
    if not np.any(F.values):
        return None
    zx = pg.xgrid.coords[::stride]
    zw = pg.wgrid.coords[::stride]
    phix = _periodic_gaussian(pg.xgrid, zx, width)
    phiw = _periodic_gaussian(pg.wgrid, zw, width)
    zetax = pg.xgrid.dual()
    zetaw = pg.wgrid.dual()
    # frequency axis first: it does not depend on the position window
    G = pg.cell * fourier_sum(F.values[None, :, :] * phiw[:, None, :], pg.wgrid, zetaw, -1, axis=2)
    logv = np.empty((zx.size, zw.size, nx, nw))
    for a in range(zx.size):
        logv[a] = _log_abs(fourier_sum(G * phix[a][None, :, None], pg.xgrid, zetax, -1, axis=1))
    Zx, Zw = np.meshgrid(zx, zw, indexing='ij')
    Ax, Aw = np.meshgrid(zetax.coords, zetaw.coords, indexing='ij')
    return PhaseSpaceSTFT(logv, np.hypot(Zx, Zw), np.hypot(Ax, Aw),
                          stride * pg.xgrid.dx * stride * pg.wgrid.dx, zetax.dx * zetaw.dx)


def modulation_norm2d(F, params, stride=None, width=1.0):
    """Modulation norm of a phase-space function; see :func:`phase_space_stft`.

    The weight is evaluated at ``(|z|, |zeta|)``; the inner exponent ``p``
    runs over ``z``.
    """
    return modulation_norms2d(F, [params], stride, width)[0]


def modulation_norms2d(F, params_list, stride=None, width=1.0):
    """Several modulation norms of ``F`` from one transform."""
    V = phase_space_stft(F, stride, width)
    return [0.0 if V is None else V.norm(params) for params in params_list]


def moderateness_constant(m, v, points):
    """Empirical ``sup m(z1 + z2) / (v(z1) m(z2))`` over all pairs of ``points``.

    Args:
        m (WeightSpec): weight to test.
        v (WeightSpec): candidate submultiplicative weight.
        points (array): shape ``(k, 2)``, phase-space points ``(x, w)``.
    """
    z = np.asarray(points, dtype=float)
    if z.ndim != 2 or z.shape[1] != 2:
        raise UserError("points must have shape (k, 2)")
    s = z[:, None, :] + z[None, :, :]
    log_ratio = (log_weight_eval(m, s[..., 0], s[..., 1])
                 - log_weight_eval(v, z[:, 0], z[:, 1])[:, None]
                 - log_weight_eval(m, z[:, 0], z[:, 1])[None, :])
    return float(np.exp(np.max(log_ratio)))
