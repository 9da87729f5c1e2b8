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
"""SplitMix64, the seeded generator behind every random fixture.

The update rule is written out in README.rst so that fixtures can be
regenerated bit for bit outside Python. Integer arithmetic is done on
Python ints masked to 64 bits.
"""
from __future__ import absolute_import

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64(object):
    """SplitMix64 stream.

    Uniform doubles are ``(z >> 11) * 2**-53``. Normals use one Box-Muller
    pair per draw (the sine half is discarded): ``sqrt(-2 log(1 - u1)) cos(2 pi u2)``.
    """

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform(self, low=0.0, high=1.0):
        return low + (high - low) * ((self.next_u64() >> 11) * 2.0 ** -53)

    def uniforms(self, size, low=0.0, high=1.0):
        return np.array([self.uniform(low, high) for _ in range(size)])

    def normal(self):
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, size):
        return np.array([self.normal() for _ in range(size)])

    def complex_normals(self, size):
        """Circular complex normals with unit variance: real and imaginary parts drawn alternately."""
        z = self.normals(2 * size)
        return (z[0::2] + 1j * z[1::2]) / math.sqrt(2.0)

    def integer(self, low, high):
        """Integer in ``[low, high)``."""
        return low + int(self.uniform() * (high - low))

    def spawn(self):
        """Independent child stream seeded from the next output."""
        return SplitMix64(self.next_u64())
