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
"""``tfa`` command line: tfr, operator, modnorm, decay and verify.

Exit codes: 0 success, 1 configuration or usage error, 2 I/O error,
3 numerical failure (including a failed verification suite).
"""
from __future__ import absolute_import

import argparse
import json
import logging
import os
import sys

import numpy as np

from tfa_toolkit import codecs, config as run_config, fixtures, verify
from tfa_toolkit.exceptions import AlgorithmError, BaseToolkitError, UserError
from tfa_toolkit.grid import PhaseGrid, check_same_grid, check_same_phase_grid
from tfa_toolkit.modspaces import _exponent, gaussian_decay_estimate, modulation_norm, modulation_norm2d
from tfa_toolkit.operators import (HERMITIAN_TOL, Symbol2D, antiwick_to_weyl, daubechies_spectrum,
                                   hermiticity_residual, localization_apply_grt, localization_apply_stft,
                                   localization_matrix, schatten_norm, singular_values, weyl_apply, weyl_matrix)
from tfa_toolkit.parallel import determinism
from tfa_toolkit.splitmix import SplitMix64
from tfa_toolkit.tfr import ambiguity, cross_wigner, grossmann_royer, hw_transform, stft

logger = logging.getLogger(__name__)

_TFR_BUILDERS = {
    'grt': grossmann_royer,
    'stft': stft,
    'wigner': cross_wigner,
    'ambiguity': ambiguity,
    'hw': hw_transform,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UserError(message)


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UserError(f"not valid JSON: {text!r}", caused_by=e)


def _list_arg(text):
    return [item.strip() for item in text.split(',') if item.strip()]


def _add_common(p):
    s = argparse.SUPPRESS
    p.add_argument('--config', default=None, help='JSON config file; flags given here override it')
    p.add_argument('--n', type=int, default=s, help='number of samples (power of two)')
    p.add_argument('--dx', type=float, default=s, help='sample spacing')
    p.add_argument('--x0', type=float, default=s, help='first sample point (default -n dx / 2)')
    p.add_argument('--signal', type=_json_arg, default=s, help='signal spec as JSON, e.g. {"kind": "hermite", "k": 2}')
    p.add_argument('--window', type=_json_arg, default=s, help='window spec as JSON')
    p.add_argument('--window2', type=_json_arg, default=s, help='synthesis window spec as JSON')
    p.add_argument('--seed', type=int, default=s)
    p.add_argument('--threads', type=int, default=s)
    p.add_argument('--out', default=s, help='output path (stdout when omitted)')
    p.add_argument('--emit', choices=sorted(codecs.EMIT_FORMATS), default=s)
    p.add_argument('--verbose', action='store_true', default=s)


def build_parser():
    parser = _Parser(prog='tfa', description='Time-frequency representations and localization operators.')
    sub = parser.add_subparsers(dest='command')
    s = argparse.SUPPRESS

    p = sub.add_parser('tfr', help='compute a time-frequency representation')
    _add_common(p)
    p.add_argument('--kind', choices=run_config.TFR_KINDS, default=s)

    p = sub.add_parser('operator', help='apply, materialise or analyse a localization or Weyl operator')
    _add_common(p)
    p.add_argument('--action', choices=run_config.ACTIONS, default=s)
    p.add_argument('--operator', choices=run_config.OPERATORS, default=s)
    p.add_argument('--form', choices=run_config.FORMS, default=s)
    p.add_argument('--symbol', type=_json_arg, default=s, help='symbol spec as JSON')
    p.add_argument('--schatten', type=_list_arg, default=s, help='comma-separated Schatten exponents')

    p = sub.add_parser('modnorm', help='weighted mixed modulation norm')
    _add_common(p)
    p.add_argument('--p', default=s)
    p.add_argument('--q', default=s)
    p.add_argument('--weight', type=_json_arg, default=s, help='weight as JSON, e.g. {"kind": "poly_radial", '
                                                                '"params": {"s": 1}}')
    p.add_argument('--input', default=s, help='representation CSV; its norm is taken instead of the signal\'s')

    p = sub.add_parser('decay', help='Gaussian decay rates of a signal and its Fourier transform')
    _add_common(p)

    p = sub.add_parser('verify', help='run the verification suites')
    _add_common(p)
    p.add_argument('--kind', choices=run_config.TFR_KINDS, default=s)
    p.add_argument('--suite', type=_list_arg, default=s, help='comma-separated suite names (all by default)')
    p.add_argument('--tolerance', type=float, default=s)
    p.add_argument('--input', default=s, help='representation CSV to recompute and compare bit-exactly')
    p.add_argument('--caps', default=s, help='JSON file of bounded-ratio caps')
    p.add_argument('--record-caps', dest='record_caps', action='store_true', default=s)
    return parser


def _configure_logging(verbose):
    level = logging.DEBUG if verbose else os.environ.get('TFA_LOG_LEVEL', run_config.DEFAULT_LOG_LEVEL).upper()
    if level not in logging.getLevelNamesMapping():
        raise UserError(f"TFA_LOG_LEVEL must be one of DEBUG, INFO, WARNING, ERROR, CRITICAL; got {level!r}")
    logging.basicConfig(format='%(asctime)s %(levelname)s - %(name)s - %(message)s', level=level)


def build_signal(spec, grid, rng):
    """Signal from a ``{"kind": ...}`` spec; random kinds draw from ``rng``."""
    spec = dict(spec)
    kind = spec.pop('kind')
    if kind == 'gaussian':
        return fixtures.gaussian(grid, **spec)
    if kind == 'hermite':
        return fixtures.hermite(grid, **spec)
    if kind == 'mixture':
        return fixtures.gaussian_mixture(grid, rng, **spec)
    if kind == 'noise':
        return fixtures.boxcar_noise(grid, rng, **spec)
    f = codecs.read_signal(spec['path'])
    check_same_grid(f.grid, grid)
    return f


def build_symbol(spec, pgrid, rng):
    spec = dict(spec)
    kind = spec.pop('kind')
    if kind == 'gaussian_bump':
        if 'center' in spec:
            spec['center'] = tuple(spec['center'])
        return fixtures.gaussian_bump_symbol(pgrid, **spec)
    if kind == 'disc':
        return fixtures.disc_symbol(pgrid, **spec)
    if kind == 'constant':
        return fixtures.constant_symbol(pgrid, **spec)
    if kind == 'random':
        return fixtures.random_schwartz_symbol(pgrid, rng, **spec)
    F = codecs.read_tfr(spec['path'])
    check_same_phase_grid(F.pgrid, pgrid)
    return Symbol2D(F.pgrid, F.values)


def _windows(cfg, grid, rng):
    phi1 = build_signal(cfg.window, grid, rng)
    phi2 = build_signal(cfg.window2, grid, rng) if cfg.window2 is not None else phi1
    return phi1, phi2


def _emit(obj, cfg, report=False):
    content_type = codecs.JSON if report else codecs.content_type_for(cfg.emit)
    if cfg.out:
        codecs.write_encoded(obj, cfg.out, content_type)
    else:
        sys.stdout.write(codecs.encode(obj, content_type))


def compute_tfr(cfg):
    grid = cfg.grid()
    rng = SplitMix64(cfg.seed)
    f = build_signal(cfg.signal, grid, rng)
    g = build_signal(cfg.window, grid, rng)
    return _TFR_BUILDERS[cfg.kind](f, g)


def cmd_tfr(cfg):
    F = compute_tfr(cfg)
    logger.info("computed %s on a %dx%d phase grid", F.kind.value, *F.shape)
    _emit(F, cfg)


def _operator_symbol(cfg, grid, rng):
    pgrid = PhaseGrid.weyl(grid) if cfg.operator == 'weyl' else PhaseGrid.standard(grid)
    return build_symbol(cfg.symbol, pgrid, rng)


def _spectrum_report(cfg, M, a=None, phi=None):
    report = {'provenance': M.provenance, 'n': M.grid.n, 'eigenvalues': None, 'hermite_overlaps': None}
    if a is not None and hermiticity_residual(M) <= HERMITIAN_TOL:
        spec = daubechies_spectrum(a, phi, matrix=M)
        report['eigenvalues'] = spec.eigenvalues
        report['hermite_overlaps'] = spec.hermite_overlaps
    sv = singular_values(M)
    report['singular_values'] = sv.values
    report['schatten'] = {str(p): schatten_norm(sv, _exponent(p, 'schatten')) for p in cfg.schatten}
    return report


def cmd_operator(cfg):
    grid = cfg.grid()
    rng = SplitMix64(cfg.seed)
    symbol = _operator_symbol(cfg, grid, rng)
    if cfg.operator == 'weyl':
        if cfg.action == 'antiwick2weyl':
            raise UserError("antiwick2weyl takes a localization symbol")
        if cfg.action == 'apply':
            _emit(weyl_apply(symbol, build_signal(cfg.signal, grid, rng)), cfg)
            return
        M = weyl_matrix(symbol)
        _emit(M if cfg.action == 'materialize' else _spectrum_report(cfg, M), cfg, report=cfg.action == 'spectrum')
        return
    phi1, phi2 = _windows(cfg, grid, rng)
    if cfg.action == 'apply':
        apply = localization_apply_grt if cfg.form == 'grt' else localization_apply_stft
        _emit(apply(symbol, phi1, phi2, build_signal(cfg.signal, grid, rng)), cfg)
    elif cfg.action == 'antiwick2weyl':
        _emit(antiwick_to_weyl(symbol, phi1, phi2), cfg)
    else:
        M = localization_matrix(symbol, phi1, phi2, cfg.form, n_jobs=cfg.threads)
        if cfg.action == 'materialize':
            _emit(M, cfg)
        else:
            same = cfg.window2 is None or cfg.window2 == cfg.window
            _emit(_spectrum_report(cfg, M, symbol if same else None, phi1), cfg, report=True)


def cmd_modnorm(cfg):
    params = cfg.norm_params()
    if cfg.input:
        F = codecs.read_tfr(cfg.input)
        value = modulation_norm2d(F, params)
        grid = F.pgrid.to_dict()
    else:
        grid = cfg.grid()
        rng = SplitMix64(cfg.seed)
        f = build_signal(cfg.signal, grid, rng)
        value = modulation_norm(f, build_signal(cfg.window, grid, rng), params)
        grid = grid.to_dict()
    _emit({'p': params.p, 'q': params.q, 'weight': params.weight.to_dict(), 'value': value, 'grid': grid},
          cfg, report=True)


def cmd_decay(cfg):
    grid = cfg.grid()
    f = build_signal(cfg.signal, grid, SplitMix64(cfg.seed))
    h_time, h_freq = gaussian_decay_estimate(f)
    _emit({'h_time': h_time, 'h_freq': h_freq, 'grid': grid.to_dict()}, cfg, report=True)


def _load_caps(cfg):
    """Caps named by ``--caps``, or the packaged defaults; a missing caps file is an I/O error."""
    if cfg.record_caps:
        return {}
    if not cfg.caps:
        return verify.default_caps()
    return verify.parse_caps(codecs.read_json(cfg.caps), cfg.caps)


def cmd_verify(cfg):
    if cfg.record_caps and not cfg.caps:
        raise UserError("--record-caps needs --caps to name the file to write")
    grid = cfg.grid()
    signal = None
    if cfg.signal.get('kind') == 'file':
        signal = build_signal(cfg.signal, grid, SplitMix64(cfg.seed))
    ctx = verify.VerifyContext(grid=grid, seed=cfg.seed, tolerance=cfg.tolerance, n_jobs=cfg.threads,
                               caps=_load_caps(cfg), signal=signal)
    results = verify.run_suites(cfg.suite or [], ctx)
    if cfg.input:
        results.append(verify.input_roundtrip(codecs.read_tfr(cfg.input), compute_tfr(cfg)))
    if cfg.record_caps:
        codecs.write_outputs({cfg.caps: codecs.encode(verify.record_caps(results), codecs.JSON)})
    logger.info("verification summary\n%s", verify.results_table(results).to_string(index=False))
    _emit(verify.verify_report(results), cfg, report=True)
    verify.require_passed(results)


COMMANDS = {
    'tfr': cmd_tfr,
    'operator': cmd_operator,
    'modnorm': cmd_modnorm,
    'decay': cmd_decay,
    'verify': cmd_verify,
}


def main(argv=None):
    """Runs one subcommand and returns its exit code."""
    try:
        args = vars(build_parser().parse_args(argv))
        command = args.pop('command', None)
        if command is None:
            raise UserError("a subcommand is required: " + ', '.join(COMMANDS))
        config_path = args.pop('config', None)
        _configure_logging(args.get('verbose', False))
        cfg = run_config.load(dict(args, command=command), config_path)
        with determinism(cfg.threads), np.errstate(over='ignore', under='ignore'):
            COMMANDS[command](cfg)
    except BaseToolkitError as e:
        logging.getLogger(__name__).error("%s", e)
        return e.exit_code
    except (FloatingPointError, np.linalg.LinAlgError) as e:
        logging.getLogger(__name__).error("numerical failure: %s", e)
        return AlgorithmError.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())
