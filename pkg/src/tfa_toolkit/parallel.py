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

import contextlib
import logging
import os

import numpy as np
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from tfa_toolkit.exceptions import UserError

logger = logging.getLogger(__name__)

THREADS_ENV = 'TFA_THREADS'


def default_threads():
    raw = os.environ.get(THREADS_ENV, '1')
    try:
        threads = int(raw)
    except ValueError as e:
        raise UserError(f"{THREADS_ENV}={raw!r} is not an integer", caused_by=e)
    if threads < 1:
        raise UserError(f"{THREADS_ENV} must be at least 1, got {threads}")
    return threads


@contextlib.contextmanager
def determinism(threads):
    """Pins the BLAS and OpenMP pools to ``threads`` while the block runs."""
    with threadpool_limits(limits=threads):
        yield


def map_columns(fn, n, n_jobs=None, block=32):
    """Stacks ``fn(i)`` for ``i = 0 .. n - 1`` as the columns of a matrix.

    Columns are evaluated in blocks on a joblib thread pool; the result does
    not depend on ``n_jobs``.
    """
    n_jobs = n_jobs or default_threads()
    blocks = [range(start, min(start + block, n)) for start in range(0, n, block)]

    def run(cols):
        return [fn(i) for i in cols]

    logger.debug("materialising %d columns in %d blocks, n_jobs=%d", n, len(blocks), n_jobs)
    if n_jobs == 1:
        parts = [run(cols) for cols in blocks]
    else:
        parts = Parallel(n_jobs=n_jobs, prefer='threads')(delayed(run)(cols) for cols in blocks)
    return np.stack([col for part in parts for col in part], axis=1)
