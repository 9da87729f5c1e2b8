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
"""Encoders and decoders for signals, representations, matrices and reports.

Every encoder is looked up by content type. CSV floats carry 17 significant
digits and are parsed with pandas' round-trip parser, so a file rereads
bit-exactly. Files are written to a temporary name in the target directory
and renamed once every part is complete.
"""
from __future__ import absolute_import

import enum
import io
import json
import logging
import os
import tempfile

import numpy as np
import pandas as pd

from tfa_toolkit.exceptions import PlatformError, UnsupportedFormatError, UserError
from tfa_toolkit.grid import GRID_RTOL, Grid1D, PhaseGrid, SampledSignal
from tfa_toolkit.operators import OperatorMatrix, Provenance, Symbol2D
from tfa_toolkit.tfr import TFRKind, TFRMatrix

logger = logging.getLogger(__name__)

CSV = 'text/csv'
JSON = 'application/json'

EMIT_FORMATS = {'csv': CSV, 'json': JSON}

FLOAT_FORMAT = '%.17g'

SIGNAL_COLUMNS = ['t', 're', 'im']
TFR_COLUMNS = ['x', 'omega', 're', 'im']
MATRIX_COLUMNS = ['row', 'col', 're', 'im']
SIDECAR_KEYS = {'n', 'dx', 'x0', 'half_step', 'kind'}


def content_type_for(emit):
    try:
        return EMIT_FORMATS[emit]
    except KeyError:
        raise UnsupportedFormatError(emit)


def _jsonable(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isnan(value):
            return 'nan'
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return obj


def _dumps(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + '\n'


def _frame_to_csv(df):
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def _read_frame(text, columns):
    try:
        df = pd.read_csv(io.StringIO(text), float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise UserError("malformed CSV", caused_by=e)
    if list(df.columns) != columns:
        raise UserError(f"expected CSV header {','.join(columns)}, got {','.join(map(str, df.columns))}")
    try:
        values = df.to_numpy(dtype=float)
    except (TypeError, ValueError) as e:
        raise UserError("CSV contains non-numeric fields", caused_by=e)
    if values.size == 0 or not np.all(np.isfinite(values)):
        raise UserError("CSV is empty or contains non-finite values")
    return values


def _signal_to_csv(f):
    return _frame_to_csv(pd.DataFrame({'t': f.coords, 're': f.samples.real, 'im': f.samples.imag}))


def _signal_to_json(f):
    return _dumps(dict(f.grid.to_dict(), re=f.samples.real, im=f.samples.imag))


def _tfr_to_csv(F):
    X, W = F.pgrid.mesh()
    df = pd.DataFrame({'x': X.ravel(), 'omega': W.ravel(), 're': F.values.real.ravel(), 'im': F.values.imag.ravel()})
    return _frame_to_csv(df)


def _tfr_to_json(F):
    return _dumps(dict(tfr_sidecar(F), re=F.values.real, im=F.values.imag))


def _matrix_to_csv(M):
    n = M.grid.n
    rows, cols = np.divmod(np.arange(n * n), n)
    df = pd.DataFrame({'row': rows, 'col': cols, 're': M.entries.real.ravel(), 'im': M.entries.imag.ravel()})
    return _frame_to_csv(df)


def _matrix_to_json(M):
    return _dumps(dict(M.grid.to_dict(), provenance=M.provenance, re=M.entries.real, im=M.entries.imag))


_signal_encoders = {CSV: _signal_to_csv, JSON: _signal_to_json}
_tfr_encoders = {CSV: _tfr_to_csv, JSON: _tfr_to_json}
_matrix_encoders = {CSV: _matrix_to_csv, JSON: _matrix_to_json}
_report_encoders = {JSON: _dumps}


def _encoder_map_for(obj):
    if isinstance(obj, SampledSignal):
        return _signal_encoders
    if isinstance(obj, (TFRMatrix, Symbol2D)):
        return _tfr_encoders
    if isinstance(obj, OperatorMatrix):
        return _matrix_encoders
    if isinstance(obj, dict):
        return _report_encoders
    raise UserError(f"no encoder for objects of type {type(obj).__name__}")


def encode(obj, content_type):
    """Serialises a signal, representation, symbol, matrix or report dict.

    Raises:
        UnsupportedFormatError: if ``content_type`` has no encoder for ``obj``.
    """
    if isinstance(obj, Symbol2D):
        obj = obj.as_tfr()
    encoders = _encoder_map_for(obj)
    try:
        return encoders[content_type](obj)
    except KeyError:
        raise UnsupportedFormatError(content_type)


def tfr_sidecar(F):
    """Sidecar ``{n, dx, x0, half_step, kind}``; ``n``, ``dx`` and ``x0`` describe the x axis."""
    side = F.pgrid.to_dict()
    side['kind'] = F.kind.value
    return side


def _derived_wgrid(xgrid, half_step):
    return xgrid.half_step_dual() if half_step else xgrid.dual()


def decode_signal(text, content_type=CSV):
    if content_type != CSV:
        raise UnsupportedFormatError(content_type)
    values = _read_frame(text, SIGNAL_COLUMNS)
    grid = Grid1D.from_coords(values[:, 0])
    return SampledSignal(grid, values[:, 1] + 1j * values[:, 2])


def decode_sidecar(text):
    try:
        side = json.loads(text)
    except json.JSONDecodeError as e:
        raise UserError("sidecar is not valid JSON", caused_by=e)
    if not isinstance(side, dict) or set(side) != SIDECAR_KEYS:
        raise UserError(f"sidecar must have exactly the keys {sorted(SIDECAR_KEYS)}")
    try:
        kind = TFRKind(side['kind'])
    except ValueError as e:
        raise UserError(f"unknown representation kind {side['kind']!r}", caused_by=e)
    xgrid = Grid1D(side['n'], side['dx'], side['x0'])
    return PhaseGrid(xgrid, _derived_wgrid(xgrid, bool(side['half_step'])), bool(side['half_step'])), kind


def decode_tfr(text, sidecar_text, content_type=CSV):
    """Reads a row-major ``x,omega,re,im`` table and checks it against its sidecar to ``1e-9`` relative."""
    if content_type != CSV:
        raise UnsupportedFormatError(content_type)
    pgrid, kind = decode_sidecar(sidecar_text)
    values = _read_frame(text, TFR_COLUMNS)
    nx, nw = pgrid.shape
    if values.shape[0] != nx * nw:
        raise UserError(f"expected {nx * nw} rows for the sidecar grid, got {values.shape[0]}")
    X, W = pgrid.mesh()
    for name, column, expected, step in (('x', values[:, 0], X.ravel(), pgrid.xgrid.dx),
                                         ('omega', values[:, 1], W.ravel(), pgrid.wgrid.dx)):
        if np.max(np.abs(column - expected)) > GRID_RTOL * max(step, np.max(np.abs(expected))):
            raise UserError(f"CSV {name} axis does not match the sidecar grid")
    return TFRMatrix(pgrid, (values[:, 2] + 1j * values[:, 3]).reshape(nx, nw), kind)


def decode_matrix(text, grid, provenance=Provenance.GENERIC, content_type=CSV):
    if content_type != CSV:
        raise UnsupportedFormatError(content_type)
    values = _read_frame(text, MATRIX_COLUMNS)
    n = grid.n
    if values.shape[0] != n * n:
        raise UserError(f"expected {n * n} matrix entries, got {values.shape[0]}")
    entries = np.zeros((n, n), dtype=complex)
    entries[values[:, 0].astype(int), values[:, 1].astype(int)] = values[:, 2] + 1j * values[:, 3]
    return OperatorMatrix(grid, entries, provenance)


def sidecar_path(path):
    return os.path.splitext(path)[0] + '.json'


def read_text(path):
    try:
        with open(path, 'r') as f:
            return f.read()
    except OSError as e:
        raise PlatformError(f"cannot read {path}", caused_by=e)


def read_json(path):
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UserError(f"{path} is not valid JSON", caused_by=e)


def read_signal(path):
    return decode_signal(read_text(path))


def read_tfr(path):
    return decode_tfr(read_text(path), read_text(sidecar_path(path)))


def write_outputs(parts):
    """Writes ``{path: text}`` atomically: every part goes to a temporary file first.

    Raises:
        PlatformError: if a directory is not writable; no target file is touched then.
    """
    staged = []
    try:
        for path, text in parts.items():
            directory = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(prefix='.tfa-', suffix='.tmp', dir=directory)
            staged.append((tmp, path))
            with os.fdopen(fd, 'w', newline='') as f:
                f.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
            logger.info("wrote %s", path)
    except OSError as e:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.remove(tmp)
        raise PlatformError("cannot write output", caused_by=e)


def write_encoded(obj, path, content_type):
    """Encodes ``obj`` to ``path``; representations in CSV get a sidecar next to them.

    Raises:
        UserError: if the sidecar would overwrite ``path`` itself.
    """
    parts = {path: encode(obj, content_type)}
    if content_type == CSV and isinstance(obj, (TFRMatrix, Symbol2D)):
        F = obj.as_tfr() if isinstance(obj, Symbol2D) else obj
        sidecar = sidecar_path(path)
        if os.path.abspath(sidecar) == os.path.abspath(path):
            raise UserError(f"CSV output {path} collides with its sidecar; use a .csv extension")
        parts[sidecar] = _dumps(tfr_sidecar(F))
    write_outputs(parts)
