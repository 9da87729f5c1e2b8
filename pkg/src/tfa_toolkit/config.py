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
"""Run configuration: defaults, then a JSON config file, then command-line flags.

Environment variables supply defaults only when they are unset:

    TFA_THREADS    worker threads and BLAS pool size (default 1)
    TFA_LOG_LEVEL  root log level (default INFO)
    TFA_SEED       seed of the fixture generator (default 20240611)
"""
from __future__ import absolute_import

import dataclasses
import logging
import os
from dataclasses import dataclass, field

from tfa_toolkit.codecs import EMIT_FORMATS, read_json
from tfa_toolkit.exceptions import UserError
from tfa_toolkit.grid import Grid1D
from tfa_toolkit.modspaces import MixedNormParams, WeightSpec, _exponent
from tfa_toolkit.verify import SUITES

logger = logging.getLogger(__name__)

DEFAULT_THREADS = 1
DEFAULT_LOG_LEVEL = 'INFO'
DEFAULT_SEED = 20240611

COMMANDS = ('tfr', 'operator', 'modnorm', 'decay', 'verify')
TFR_KINDS = ('grt', 'stft', 'wigner', 'ambiguity', 'hw')
ACTIONS = ('apply', 'materialize', 'spectrum', 'antiwick2weyl')
OPERATORS = ('localization', 'weyl')
FORMS = ('stft', 'grt')

SIGNAL_KINDS = {
    'gaussian': {'center', 'width', 'chirp', 'modulation'},
    'hermite': {'k', 'scale'},
    'file': {'path'},
    'mixture': {'components'},
    'noise': {'halfwidth'},
}
SYMBOL_KINDS = {
    'gaussian_bump': {'center', 'width'},
    'disc': {'radius'},
    'constant': {'value'},
    'random': {'bumps', 'width', 'spread', 'real'},
    'file': {'path'},
}


def _set_default_if_not_exist(env_var_name, default_value):
    if not os.getenv(env_var_name, None):
        os.environ[env_var_name] = str(default_value)


def set_env_defaults():
    _set_default_if_not_exist('TFA_THREADS', DEFAULT_THREADS)
    _set_default_if_not_exist('TFA_LOG_LEVEL', DEFAULT_LOG_LEVEL)
    _set_default_if_not_exist('TFA_SEED', DEFAULT_SEED)


def _env_int(name, default):
    raw = os.environ.get(name, str(default))
    try:
        return int(raw)
    except ValueError as e:
        raise UserError(f"{name}={raw!r} is not an integer", caused_by=e)


@dataclass
class RunConfig:
    """Every setting of a run. Fields map one to one onto config-file keys and long flags."""

    command: str = 'verify'
    n: int = 256
    dx: float = 1.0 / 16
    x0: float = None
    signal: dict = field(default_factory=lambda: {'kind': 'gaussian'})
    window: dict = field(default_factory=lambda: {'kind': 'gaussian'})
    window2: dict = None
    kind: str = 'grt'
    action: str = 'apply'
    operator: str = 'localization'
    form: str = 'stft'
    symbol: dict = field(default_factory=lambda: {'kind': 'gaussian_bump'})
    p: object = 2.0
    q: object = 2.0
    weight: dict = field(default_factory=lambda: {'kind': 'const', 'params': {}})
    schatten: list = field(default_factory=lambda: [1, 2, 'inf'])
    out: str = None
    emit: str = 'csv'
    tolerance: float = None
    seed: int = None
    threads: int = None
    suite: list = None
    input: str = None
    caps: str = None
    record_caps: bool = False
    verbose: bool = False

    @classmethod
    def field_names(cls):
        return {f.name for f in dataclasses.fields(cls)}

    def grid(self):
        return Grid1D(self.n, self.dx, self.x0)

    def norm_params(self):
        return MixedNormParams(self.p, self.q, WeightSpec.from_dict(self.weight))

    def to_dict(self):
        return dataclasses.asdict(self)


def _check_fixture(spec, kinds, what):
    if not isinstance(spec, dict) or 'kind' not in spec:
        raise UserError(f"{what} must be an object with a 'kind' field")
    kind = spec['kind']
    if kind not in kinds:
        raise UserError(f"unknown {what} kind {kind!r}; expected one of {sorted(kinds)}")
    extra = set(spec) - {'kind'} - kinds[kind]
    if extra:
        raise UserError(f"{what} of kind {kind} does not take {sorted(extra)}")
    if kind == 'file' and 'path' not in spec:
        raise UserError(f"{what} of kind file needs a path")


def _choice(value, choices, what):
    if value not in choices:
        raise UserError(f"{what} must be one of {list(choices)}, got {value!r}")


def validate(config):
    """Checks every field before any computation.

    Raises:
        UserError: on the first invalid field.
    """
    _choice(config.command, COMMANDS, 'command')
    config.grid()
    _check_fixture(config.signal, SIGNAL_KINDS, 'signal')
    _check_fixture(config.window, SIGNAL_KINDS, 'window')
    if config.window2 is not None:
        _check_fixture(config.window2, SIGNAL_KINDS, 'window2')
    _check_fixture(config.symbol, SYMBOL_KINDS, 'symbol')
    _choice(config.kind, TFR_KINDS, 'kind')
    _choice(config.action, ACTIONS, 'action')
    _choice(config.operator, OPERATORS, 'operator')
    _choice(config.form, FORMS, 'form')
    _choice(config.emit, EMIT_FORMATS, 'emit')
    config.norm_params()
    if not isinstance(config.schatten, (list, tuple)) or not config.schatten:
        raise UserError("schatten must be a non-empty list of exponents")
    for p in config.schatten:
        _exponent(p, 'schatten')
    if config.tolerance is not None and not config.tolerance > 0:
        raise UserError(f"tolerance must be positive, got {config.tolerance}")
    if not isinstance(config.seed, int) or isinstance(config.seed, bool) or config.seed < 0:
        raise UserError(f"seed must be a nonnegative integer, got {config.seed!r}")
    if not isinstance(config.threads, int) or isinstance(config.threads, bool) or config.threads < 1:
        raise UserError(f"threads must be a positive integer, got {config.threads!r}")
    for name in config.suite or []:
        _choice(name, SUITES, 'suite')
    return config


def load(overrides, config_path=None):
    """Builds the configuration from defaults, ``config_path`` and ``overrides``.

    Args:
        overrides (dict): values given on the command line; only keys present are applied.
        config_path (str): optional JSON config file.

    Returns:
        (RunConfig): validated configuration.
    """
    set_env_defaults()
    config = RunConfig(seed=_env_int('TFA_SEED', DEFAULT_SEED), threads=_env_int('TFA_THREADS', DEFAULT_THREADS))
    known = RunConfig.field_names()
    layers = []
    if config_path:
        data = read_json(config_path)
        if not isinstance(data, dict):
            raise UserError("config file must hold a JSON object")
        layers.append(('config file', data))
    layers.append(('command line', overrides))
    for origin, layer in layers:
        unknown = set(layer) - known
        if unknown:
            raise UserError(f"unknown {origin} keys: {sorted(unknown)}")
        for key, value in layer.items():
            setattr(config, key, value)
    logger.debug("configuration: %s", config)
    return validate(config)
