from __future__ import absolute_import, division, unicode_literals

from multipass.io.state import state


def test_warn_records_formatted_message():
    text = state.warn(None, 'C(tau) = %.2f', 0.25)
    assert text == 'C(tau) = 0.25'
    assert state.warnings == ['C(tau) = 0.25']


def test_record_and_reset():
    state.record(theta=0.4)
    state.seed = 3
    assert state.derived == {'theta': 0.4}
    state.reset()
    assert state.derived == {}
    assert state.warnings == []
    assert state.seed is None


def test_warnings_are_copies():
    state.warn(None, 'first')
    state.warnings.append('second')
    assert state.warnings == ['first']


def test_log_is_not_recorded():
    assert state.log(None, '%d rays left', 3) == '3 rays left'
    assert state.warnings == []


def test_log_through_parameterized(fig1_cell):
    assert state.log(fig1_cell, 'theta %.3f', 0.5) == 'theta 0.500'
