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

import logging

import numpy as np
import pytest

from tfa_toolkit import fixtures
from tfa_toolkit.grid import Grid1D, PhaseGrid
from tfa_toolkit.splitmix import SplitMix64

logger = logging.getLogger(__name__)
logging.getLogger('joblib').setLevel(logging.INFO)


def pytest_addoption(parser):
    parser.addoption('--full-verify', action='store_true', help='run every verification suite at full size')
    parser.addoption('--seed', type=int, default=20240611)


def pytest_collection_modifyitems(config, items):
    if config.getoption('--full-verify'):
        return
    skip = pytest.mark.skip(reason='needs --full-verify')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope='session', name='seed')
def fixture_seed(request):
    return request.config.getoption('--seed')


@pytest.fixture(name='rng')
def fixture_rng(seed):
    return SplitMix64(seed)


@pytest.fixture(scope='session', name='grid')
def fixture_grid():
    return Grid1D(256, 1.0 / 16)


@pytest.fixture(scope='session', name='small_grid')
def fixture_small_grid():
    return Grid1D(32, 1.0 / np.sqrt(32))


@pytest.fixture(scope='session', name='mid_grid')
def fixture_mid_grid():
    return Grid1D(64, 1.0 / 8)


@pytest.fixture(scope='session', name='window')
def fixture_window(grid):
    return fixtures.gaussian(grid)


@pytest.fixture(name='pair')
def fixture_pair(grid, rng):
    return fixtures.random_signal(grid, rng), fixtures.random_signal(grid, rng)


@pytest.fixture(scope='session', name='standard_pgrid')
def fixture_standard_pgrid(small_grid):
    return PhaseGrid.standard(small_grid)


@pytest.fixture(name='workdir')
def fixture_workdir(tmp_path):
    return str(tmp_path)
