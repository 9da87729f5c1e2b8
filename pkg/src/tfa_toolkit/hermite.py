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
"""L2-normalised Hermite functions from the three-term recurrence."""
from __future__ import absolute_import

import logging
from dataclasses import dataclass

import numpy as np

from tfa_toolkit.exceptions import UserError
from tfa_toolkit.grid import SampledSignal

logger = logging.getLogger(__name__)

MAX_ORDER = 200
FT_EIGEN_SCALE = np.sqrt(2 * np.pi)


@dataclass(frozen=True)
class HermiteSpec:
    """Hermite function of order ``order`` evaluated as ``sqrt(scale) * psi_order(scale * t)``."""

    order: int
    scale: float = 1.0

    def __post_init__(self):
        if isinstance(self.order, bool) or not isinstance(self.order, (int, np.integer)):
            raise UserError(f"Hermite order must be an integer, got {self.order!r}")
        if not 0 <= self.order <= MAX_ORDER:
            raise UserError(f"Hermite order must lie in [0, {MAX_ORDER}], got {self.order}")
        if not np.isfinite(self.scale) or self.scale <= 0:
            raise UserError(f"Hermite scale must be positive and finite, got {self.scale!r}")


def hermite_family(max_order, t):
    """All Hermite functions ``psi_0 .. psi_max_order`` at the points ``t``.

    Args:
        max_order (int): highest order, at most ``MAX_ORDER``.
        t (array): evaluation points.

    Returns:
        (np.ndarray): array of shape ``(max_order + 1, len(t))``.
    """
    HermiteSpec(max_order)
    t = np.asarray(t, dtype=float)
    out = np.empty((max_order + 1, t.size))
    out[0] = np.pi ** -0.25 * np.exp(-t ** 2 / 2)
    if max_order >= 1:
        out[1] = np.sqrt(2.0) * t * out[0]
    for k in range(1, max_order):
        out[k + 1] = t * np.sqrt(2.0 / (k + 1)) * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def hermite_function(spec, grid):
    s = spec.scale
    values = np.sqrt(s) * hermite_family(spec.order, s * grid.coords)[spec.order]
    return SampledSignal(grid, values)


def hermite_ft_eigen(order, grid):
    """Hermite function dilated so that ``fourier(h) == (-1j) ** order * h``."""
    return hermite_function(HermiteSpec(order, FT_EIGEN_SCALE), grid)


def hermite_tensor2(k1, k2, pgrid, scale=1.0):
    """``psi_k1(x) psi_k2(w)`` on the phase grid, as a plain array."""
    hx = hermite_function(HermiteSpec(k1, scale), pgrid.xgrid).samples.real
    hw = hermite_function(HermiteSpec(k2, scale), pgrid.wgrid).samples.real
    return np.outer(hx, hw)
