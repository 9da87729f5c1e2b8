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
from mock import patch

from tfa_toolkit import codecs, fixtures, verify
from tfa_toolkit.exceptions import AlgorithmError, UserError
from tfa_toolkit.grid import Grid1D
from tfa_toolkit.tfr import grossmann_royer, stft

FAST_SUITES = ['moyal', 'marginals', 'covariance', 'plancherel', 'grt_properties', 'gr_inversion']


@pytest.fixture(name='ctx')
def fixture_ctx(seed):
    return verify.VerifyContext(seed=seed)


def _fake_ratio_suite(ctx):
    return {'a': [1.0, 2.0, 4.0], 'b': [0.5, 0.5]}


def _fake_identity_suite(ctx):
    return {'tight': verify._check(1e-12), 'fixed': verify._check(1e-3, 1e-2, overridable=False),
            'reachable': {0.1: True}}


@pytest.mark.parametrize('name', FAST_SUITES)
def test_identity_suites_pass(name, ctx):
    result = verify.run_suite(name, ctx)
    assert result.passed, result.detail
    assert result.residual <= result.tolerance
    assert 'seconds' not in result.detail


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(verify.SUITES))
def test_every_suite_passes(name, ctx):
    assert verify.run_suite(name, ctx).passed


def test_suites_are_seed_deterministic(seed):
    a = verify.run_suite('moyal', verify.VerifyContext(seed=seed))
    b = verify.run_suite('moyal', verify.VerifyContext(seed=seed))
    assert a.residual == b.residual


def test_report_is_byte_identical_across_runs(ctx):
    first = codecs.encode(verify.verify_report(verify.run_suites(['moyal', 'marginals'], ctx)), codecs.JSON)
    second = codecs.encode(verify.verify_report(verify.run_suites(['moyal', 'marginals'], ctx)), codecs.JSON)
    assert first == second


def test_unknown_suite(ctx):
    with pytest.raises(UserError):
        verify.run_suite('nonsense', ctx)


def test_streams_differ_per_suite(ctx):
    assert ctx.rng('moyal').next_u64() != ctx.rng('marginals').next_u64()


def test_user_signal_is_first_fixture(ctx, rng):
    ctx.signal = fixtures.gaussian(ctx.grid, center=0.5)
    out = ctx.signals(ctx.grid, rng, 3)
    assert out[0] is ctx.signal
    assert ctx.signals(Grid1D(64, 1.0 / 8), rng, 1)[0] is not ctx.signal


def test_tolerance_override_applies_to_overridable_checks(ctx):
    with patch.dict(verify.SUITES, {'fake': (_fake_identity_suite, False)}):
        result = verify.run_suite('fake', ctx)
        assert result.passed
        assert result.detail['reachable'] == {0.1: True}
        ctx.tolerance = 1e-15
        result = verify.run_suite('fake', ctx)
    assert not result.passed
    assert result.tolerance == 1e-15
    assert result.detail['checks']['fixed']['tolerance'] == 1e-2
    assert result.detail['checks']['fixed']['passed']


def test_uncapped_ratio_suite_reports_spread(ctx):
    with patch.dict(verify.SUITES, {'fake': (_fake_ratio_suite, True)}):
        result = verify.run_suite('fake', ctx)
    assert result.passed
    assert result.tolerance == np.inf
    assert result.residual == 4.0
    fam = result.detail['families']['a']
    assert (fam['min'], fam['max'], fam['count'], fam['spread']) == (1.0, 4.0, 3, 4.0)
    assert fam['cap'] is None
    assert verify.record_caps([result]) == {'fake/a': 6.0, 'fake/b': 0.75}


def test_capped_ratio_suite(ctx):
    ctx.caps = {'fake/a': 5.0, 'fake/b': 0.4}
    with patch.dict(verify.SUITES, {'fake': (_fake_ratio_suite, True)}):
        result = verify.run_suite('fake', ctx)
    assert not result.passed
    assert result.tolerance == 1.0
    assert result.residual == pytest.approx(1.25)
    assert result.detail['families']['a']['passed']
    assert not result.detail['families']['b']['passed']


def test_ratio_family_with_non_positive_ratio_fails(ctx):
    with patch.dict(verify.SUITES, {'fake': (lambda c: {'a': [1.0, 0.0]}, True)}):
        assert not verify.run_suite('fake', ctx).passed


def test_run_suites_selects_in_registration_order(ctx):
    calls = []
    fake = {name: ((lambda c, n=name: calls.append(n) or {'x': verify._check(0.0)}), False) for name in 'cab'}
    with patch.dict(verify.SUITES, fake, clear=True):
        results = verify.run_suites(['b', 'c'], ctx)
    assert calls == ['c', 'b']
    assert [r.name for r in results] == ['c', 'b']


def test_results_table_and_report():
    results = [verify.SuiteResult('a', 0.0, 1e-9, True), verify.SuiteResult('b', 1.0, 1e-9, False)]
    table = verify.results_table(results)
    assert list(table.columns) == ['suite', 'residual', 'tolerance', 'passed']
    assert table['passed'].tolist() == [True, False]
    report = verify.verify_report(results)
    assert not report['passed']
    assert report['note'] == verify.STABILITY_NOTE
    with pytest.raises(AlgorithmError):
        verify.require_passed(results)
    verify.require_passed(results[:1])


def test_input_roundtrip(small_grid):
    g = fixtures.gaussian(small_grid)
    R = grossmann_royer(g, g)
    assert verify.input_roundtrip(R, R).passed
    perturbed = R.with_values(R.values + 1e-15)
    result = verify.input_roundtrip(perturbed, R)
    assert not result.passed
    assert result.tolerance == 0.0
    with pytest.raises(UserError):
        verify.input_roundtrip(stft(g, g), R)


def test_packaged_caps_cover_every_ratio_suite():
    caps = verify.default_caps()
    ratio_suites = {name for name, (_, ratio) in verify.SUITES.items() if ratio}
    assert {key.split('/')[0] for key in caps} == ratio_suites
    assert all(value == 1.0 for key, value in caps.items() if key.startswith('young/'))


@pytest.mark.parametrize('caps', [[1.0], {'young/a': 0}, {'young/a': 'big'}, {'young/a': True}])
def test_parse_caps_rejects_invalid(caps):
    with pytest.raises(UserError):
        verify.parse_caps(caps)


def test_young_within_packaged_caps(ctx):
    ctx.caps = verify.default_caps()
    ctx.grid = Grid1D(64, 0.125)
    result = verify.run_suite('young', ctx)
    assert result.passed, result.detail
    assert result.tolerance == 1.0
