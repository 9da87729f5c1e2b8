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

import pytest

from tfa_toolkit.exceptions import (AlgorithmError, BaseToolkitError, GridError, PlatformError,
                                    UnsupportedFormatError, UserError, WeightError, WindowError)


@pytest.mark.parametrize('cls, code', [
    (UserError, 1), (GridError, 1), (WindowError, 1), (WeightError, 1),
    (PlatformError, 2), (AlgorithmError, 3)])
def test_exit_codes(cls, code):
    assert cls.exit_code == code
    assert issubclass(cls, BaseToolkitError)


def test_message_with_cause():
    err = UserError('bad grid', caused_by=ValueError('n=3'))
    assert str(err) == 'bad grid (caused by ValueError)'
    assert isinstance(err.caused_by, ValueError)


def test_message_from_cause_only():
    err = PlatformError(caused_by=OSError('disk full'))
    assert str(err) == 'disk full (caused by OSError)'


def test_message_default():
    assert str(AlgorithmError()) == 'unknown error occurred'


def test_unsupported_format_is_user_error():
    err = UnsupportedFormatError('application/x-npy')
    assert err.content_type == 'application/x-npy'
    assert err.exit_code == 1
    assert 'application/x-npy' in str(err)
