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

from tfa_toolkit.splitmix import MASK64, SplitMix64


def test_seed_zero_reference_outputs():
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4
    assert rng.next_u64() == 0x06C45D188009454F


def test_seed_is_masked_to_64_bits():
    assert SplitMix64(-1).state == MASK64
    assert SplitMix64(1 << 64).next_u64() == SplitMix64(0).next_u64()


def test_same_seed_same_stream():
    a, b = SplitMix64(20240611), SplitMix64(20240611)
    np.testing.assert_array_equal(a.complex_normals(50), b.complex_normals(50))
    assert a.integer(0, 1000) == b.integer(0, 1000)


def test_different_seeds_differ():
    assert SplitMix64(1).next_u64() != SplitMix64(2).next_u64()


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=MASK64))
def test_uniform_in_unit_interval(seed):
    u = SplitMix64(seed).uniforms(20)
    assert np.all((u >= 0) & (u < 1))


def test_uniform_range_and_integer_range():
    rng = SplitMix64(7)
    u = rng.uniforms(200, -2.0, 3.0)
    assert np.all((u >= -2.0) & (u < 3.0))
    k = [rng.integer(1, 4) for _ in range(200)]
    assert set(k) == {1, 2, 3}


def test_normals_are_finite_and_roughly_standard():
    z = SplitMix64(11).normals(4000)
    assert np.all(np.isfinite(z))
    assert abs(np.mean(z)) < 0.1
    assert np.std(z) == pytest.approx(1.0, abs=0.1)


def test_complex_normals_have_unit_variance():
    z = SplitMix64(3).complex_normals(4000)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.1)


def test_spawn_is_deterministic_and_advances_parent():
    parent = SplitMix64(5)
    child = parent.spawn()
    again = SplitMix64(5)
    assert child.state == again.next_u64()
    assert parent.state == again.state
    assert child.next_u64() != parent.next_u64()
