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

import os

import numpy as np
import pytest
from mock import patch

from tfa_toolkit import parallel
from tfa_toolkit.exceptions import UserError


def _column(i):
    return np.arange(5) * (i + 1)


@pytest.mark.parametrize('n_jobs, block', [(1, 32), (1, 3), (4, 3), (4, 100)])
def test_map_columns_independent_of_scheduling(n_jobs, block):
    out = parallel.map_columns(_column, 10, n_jobs=n_jobs, block=block)
    assert out.shape == (5, 10)
    np.testing.assert_array_equal(out, np.outer(np.arange(5), np.arange(1, 11)))


def test_default_threads_from_environment():
    with patch.dict(os.environ, {parallel.THREADS_ENV: '6'}):
        assert parallel.default_threads() == 6


@pytest.mark.parametrize('raw', ['zero', '0', '-2'])
def test_bad_thread_count(raw):
    with patch.dict(os.environ, {parallel.THREADS_ENV: raw}):
        with pytest.raises(UserError):
            parallel.default_threads()


def test_map_columns_uses_default_threads():
    with patch('tfa_toolkit.parallel.default_threads', return_value=1) as default:
        parallel.map_columns(_column, 3)
    default.assert_called_once_with()


def test_determinism_limits_thread_pools():
    with patch('tfa_toolkit.parallel.threadpool_limits') as limits:
        with parallel.determinism(2):
            pass
    limits.assert_called_once_with(limits=2)
