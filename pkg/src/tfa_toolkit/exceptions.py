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
import warnings


class BaseToolkitError(Exception):
    """Abstract base for all errors that make a toolkit command exit unsuccessfully.
    All direct sub-classes should be kept/maintained in this file.
    These errors are grouped into three categories:
        1. UserError:      a failure the user can avoid by fixing the configuration
                           or the input (e.g. a grid size that is not a power of two).
        2. PlatformError:  an I/O failure (e.g. an unreadable input file or an
                           unwritable output directory).
        3. AlgorithmError: a numerical failure (e.g. an SVD that did not converge
                           or a verification suite whose residual is too large).
    Each category carries the exit code the command line reports for it.

    Attributes:
        message     (string): Description of why this exception was raised.
        caused_by   (exception): The underlying exception that caused this
                                 exception to be raised. This should be a
                                 non-BaseToolkitError.
        exit_code   (int): process exit status for this category.
    """

    exit_code = 1

    def __init__(self, message=None, caused_by=None):
        formatted_message = BaseToolkitError._format_exception_message(message, caused_by)
        super(BaseToolkitError, self).__init__(formatted_message)
        self.message = formatted_message
        self.caused_by = caused_by

    @staticmethod
    def _format_exception_message(message, caused_by):
        """Generates the exception message.
        If a message has been explicitly passed then we use that as the exception
        message. If we also know the underlying exception type we append that
        to the message.
        If there is no message but we have an underlying exception then we use
        that exception's message and append the type of the exception.
        """
        if message:
            formatted_message = message
        elif caused_by:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                formatted_message = getattr(caused_by, "message", str(caused_by))
        else:
            formatted_message = "unknown error occurred"

        if caused_by:
            formatted_message += f" (caused by {caused_by.__class__.__name__})"

        return formatted_message


class UserError(BaseToolkitError):
    """Exception used to indicate a problem caused by mis-configuration or other user input."""

    exit_code = 1

    def __init__(self, message=None, caused_by=None):
        super(UserError, self).__init__(message, caused_by)


class PlatformError(BaseToolkitError):
    """Exception used to indicate an I/O problem (missing file, unwritable directory)."""

    exit_code = 2

    def __init__(self, message=None, caused_by=None):
        super(PlatformError, self).__init__(message, caused_by)


class AlgorithmError(BaseToolkitError):
    """Exception used to indicate a numerical failure."""

    exit_code = 3

    def __init__(self, message=None, caused_by=None):
        super(AlgorithmError, self).__init__(message, caused_by)


class GridError(UserError):
    """Invalid grid, mismatched grids or an off-grid phase-space point."""


class WindowError(UserError):
    """A window function that vanishes identically or a degenerate window pair."""


class WeightError(UserError):
    """Invalid weight parameters."""


class UnsupportedFormatError(UserError):
    """Unknown emit format or content type."""

    def __init__(self, content_type, caused_by=None):
        super(UnsupportedFormatError, self).__init__(
            f"Content type {content_type} is not supported by this toolkit", caused_by)
        self.content_type = content_type
