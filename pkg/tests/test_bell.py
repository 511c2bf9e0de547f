"""Inequality values, closed-form probabilities, thresholds, optimizer."""

import numpy as np
import pytest
from scipy.optimize import minimize

from qnl.bell import (MeasurementSettings, _inequality_value,
                      _qubit_block_thetas, _rotated_settings,
                      _sum_a_eq_b_plus, ad_joint_probability_closed_form,
                      ad_probability_table, catalan_constant,
                      cglmp_ad_infinite, cglmp_ad_value, cglmp_settings,
                      cglmp_value, critical_lr, infinite_threshold,
                      joint_probability, optimize_settings, probability_table)
from qnl.channels import (ChannelKind, ChannelSpec, amplitude_damping_kraus,
                          apply_local_channel, channel_output)
from qnl.errors import (DimensionMismatch, IndexOutOfRange, NoViolation,
                        UnsupportedChannel)
from qnl.gellmann import gellmann_basis
from qnl.states import (max_entangled, qutrit_family, schmidt_state,
                        to_density)

AD = ChannelKind.AMPLITUDE_DAMPING


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_settings_are_orthonormal_bases(d):
    m = cglmp_settings(d)
    for s in range(2):
        for vec in (m.a_vectors[s], m.b_vectors[s]):
            gram = vec.conj() @ vec.T
            assert np.max(np.abs(gram - np.eye(d))) < 1e-12


def test_settings_phase_structure():
    d = 3
    m = cglmp_settings(d)
    omega = np.exp(2j * np.pi / d)
    j = np.arange(d)
    # party A, second setting carries the half-step phase offset
    expect = omega ** (j * (1 + 0.5)) / np.sqrt(d)
    assert np.max(np.abs(m.a_vectors[1, 1] - expect)) < 1e-12
    expect_b = omega ** (j * (-2 - 0.25)) / np.sqrt(d)
    assert np.max(np.abs(m.b_vectors[1, 2] - expect_b)) < 1e-12


def test_settings_validation():
    d = 2
    bad = np.zeros((2, d, d), dtype=complex)
    bad[:, :, 0] = 1.0  # rows not orthogonal
    with pytest.raises(Exception):
        MeasurementSettings(d=d, a_vectors=bad, b_vectors=bad)


def test_qubit_value_is_chsh_maximum():
    bv = cglmp_value(to_density(max_entangled(2)))
    assert bv.i_d == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-12)
    assert bv.violated


def test_qutrit_value_matches_closed_form():
    # known maximum for the unoptimized settings: 4/(6 sqrt(3) - 9)
    bv = cglmp_value(to_density(max_entangled(3)))
    assert bv.i_d == pytest.approx(4.0 / (6.0 * np.sqrt(3.0) - 9.0),
                                   abs=1e-12)


def test_values_grow_with_dimension():
    vals = [cglmp_value(to_density(max_entangled(d))).i_d
            for d in range(2, 7)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < cglmp_ad_infinite(0.0)


def test_product_state_stays_below_bound():
    bv = cglmp_value(to_density(schmidt_state(3, [1.0, 0.0, 0.0])))
    assert bv.i_d <= 2.0 + 1e-12
    assert not bv.violated


def test_joint_probability_bounds_checks():
    rho = to_density(max_entangled(3))
    with pytest.raises(IndexOutOfRange):
        joint_probability(rho, 2, 0, 0, 0)
    with pytest.raises(IndexOutOfRange):
        joint_probability(rho, 0, 0, 3, 0)
    with pytest.raises(DimensionMismatch):
        joint_probability(rho, 0, 0, 0, 0, m=cglmp_settings(4))


def test_probability_tables_normalized():
    for d in (2, 3, 5):
        rho = channel_output(max_entangled(d), ChannelSpec(AD, 0.45))
        table = probability_table(rho)
        sums = table.sum(axis=(2, 3))
        assert np.max(np.abs(sums - 1.0)) < 1e-12
        assert table.min() > -1e-15


def test_outcome_shift_sums_collapse_to_single_entry():
    # for the damped max-entangled state the table only depends on the
    # outcome difference, so each shift sum is d times one entry
    d = 4
    rho = channel_output(max_entangled(d), ChannelSpec(AD, 0.3))
    table = probability_table(rho)
    for s in range(2):
        for t in range(2):
            for k in range(d):
                lhs = _sum_a_eq_b_plus(table[s, t], k)
                assert lhs == pytest.approx(d * table[s, t, k % d, 0],
                                            abs=1e-12)


def test_four_constituents_are_equal_for_damped_mes():
    d = 3
    table = ad_probability_table(d, 0.25)
    p11, p12, p21, p22 = table[0, 0], table[0, 1], table[1, 0], table[1, 1]
    from qnl.bell import _sum_b_eq_a_plus
    for k in (0, 1, -1):
        parts = [_sum_a_eq_b_plus(p11, k),
                 _sum_b_eq_a_plus(p21, k + 1),
                 _sum_a_eq_b_plus(p22, k),
                 _sum_b_eq_a_plus(p12, k)]
        assert np.max(np.abs(np.diff(parts))) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("r", [0.0, 0.5, 1.0])
def test_closed_form_probability_matches_born_rule(d, r):
    rho = channel_output(max_entangled(d), ChannelSpec(AD, r))
    born = probability_table(rho)
    for s in range(2):
        for t in range(2):
            for a in range(d):
                for b in range(d):
                    cf = ad_joint_probability_closed_form(d, r, s, t, a, b)
                    assert cf == pytest.approx(born[s, t, a, b], abs=1e-10)


def test_ad_value_closed_path_equals_kraus_path():
    d, r = 3, 0.35
    closed = cglmp_ad_value(d, r).i_d
    rho = apply_local_channel(to_density(max_entangled(d)),
                              amplitude_damping_kraus(d, r))
    assert closed == pytest.approx(cglmp_value(rho).i_d, abs=1e-12)


def test_white_noise_thresholds():
    assert critical_lr(max_entangled(2), ChannelKind.WHITE).value == \
        pytest.approx(2.0 ** -0.5, abs=1e-9)
    assert critical_lr(max_entangled(3), ChannelKind.WHITE).value == \
        pytest.approx(0.6962, abs=1e-3)
    assert critical_lr(max_entangled(4), ChannelKind.WHITE).value == \
        pytest.approx(0.6906, abs=1e-3)


def test_depol_threshold_is_sqrt_of_white():
    for d in (2, 3):
        w = critical_lr(max_entangled(d), ChannelKind.WHITE).value
        p = critical_lr(max_entangled(d), ChannelKind.DEPOLARIZING).value
        assert p == pytest.approx(np.sqrt(w), abs=1e-12)


def test_damping_threshold_values():
    assert critical_lr(max_entangled(2), AD).value == pytest.approx(
        0.7071, abs=1e-3)
    assert critical_lr(max_entangled(3), AD).value == pytest.approx(
        0.7468, abs=1e-3)


def test_family_point_thresholds_under_damping():
    val = critical_lr(qutrit_family(7 * np.pi / 18, np.pi / 4), AD).value
    assert val == pytest.approx(0.8640, abs=1e-3)
    val = critical_lr(qutrit_family(4 * np.pi / 15, np.pi / 4), AD).value
    assert val == pytest.approx(0.7429, abs=1e-3)
    val = critical_lr(qutrit_family(0.8730, 0.6449), AD).value
    assert val == pytest.approx(0.7316, abs=1e-3)


def test_no_violation_raised_for_weak_states():
    with pytest.raises(NoViolation):
        critical_lr(schmidt_state(3, [1.0, 0.0, 0.0]), ChannelKind.WHITE)
    with pytest.raises(NoViolation):
        critical_lr(schmidt_state(3, [1.0, 0.0, 0.0]), AD)
    with pytest.raises(UnsupportedChannel):
        critical_lr(max_entangled(3), ChannelKind.COLORED)


def test_white_family_minimum_prefers_middle_slot():
    # scan the family for the lowest white-noise threshold; the best state
    # carries its small coefficient on the middle level
    best = (2.0, None)
    for a in np.linspace(0.55, 1.25, 29):
        for b in np.linspace(0.35, 1.05, 29):
            bv = cglmp_value(to_density(qutrit_family(a, b)))
            if bv.i_d > 2.0 and 2.0 / bv.i_d < best[0]:
                best = (2.0 / bv.i_d, (a, b))

    def v_of(x):
        return 2.0 / cglmp_value(to_density(qutrit_family(*x))).i_d

    res = minimize(v_of, best[1], method="Nelder-Mead",
                   options={"xatol": 1e-7, "fatol": 1e-12})
    assert res.fun == pytest.approx(0.6861, abs=1e-3)
    coeffs = np.sort(qutrit_family(*res.x).coeffs)
    assert np.allclose(coeffs, [0.4888, 0.6169, 0.6169], atol=2e-3)
    # the middle Schmidt level carries the odd coefficient out
    assert qutrit_family(*res.x).coeffs[1] == pytest.approx(0.4888, abs=2e-3)


def test_catalan_constant():
    assert catalan_constant() == pytest.approx(0.9159655941772190, abs=1e-12)


def test_infinite_limit_values():
    assert cglmp_ad_infinite(0.0) == pytest.approx(2.9698, abs=1e-4)
    # quadratic decay in the damping strength
    assert cglmp_ad_infinite(0.4) == pytest.approx(
        0.36 * cglmp_ad_infinite(0.0), abs=1e-12)
    thr = infinite_threshold()
    assert thr == pytest.approx(0.8206, abs=1e-4)
    assert (1.0 - thr) ** 0 * cglmp_ad_infinite(1.0 - thr) == pytest.approx(
        2.0, abs=1e-12)


def test_finite_dimension_approaches_limit():
    i40 = cglmp_ad_value(40, 0.0).i_d
    i100 = cglmp_ad_value(100, 0.0).i_d
    lim = cglmp_ad_infinite(0.0)
    assert abs(i100 - lim) < abs(i40 - lim)
    assert abs(i100 - lim) / lim < 0.02


def test_optimizer_never_below_standard_settings():
    rho = channel_output(max_entangled(3), ChannelSpec(AD, 0.2))
    standard = cglmp_value(rho).i_d
    improved = optimize_settings(rho, restarts=1, seed=3)
    assert improved.i_d >= standard - 1e-12


def test_optimizer_certifies_colored_violation():
    v = 0.5
    rho = channel_output(max_entangled(3), ChannelSpec(ChannelKind.COLORED, v))
    assert not cglmp_value(rho).violated        # standard settings miss it
    best = optimize_settings(rho, restarts=0, seed=0)
    assert best.violated
    assert best.i_d >= 2.0 + (np.sqrt(2.0) - 1.0) * v - 1e-6


def test_optimizer_finds_nothing_in_maximally_mixed():
    from qnl.states import TwoQuditState
    rho = TwoQuditState(2, np.eye(4, dtype=complex) / 4.0)
    assert optimize_settings(rho, restarts=1, seed=0).i_d == pytest.approx(
        0.0, abs=1e-9)


def test_qubit_block_settings_known_values():
    # the two-level embedding measures levels {0,1} with the qubit
    # settings and passes level 2 through; on a state entangled only on
    # the first two levels the three-outcome inequality evaluates to
    # (1 + 3 sqrt(2))/2, and on the colored mixture to 2 + (sqrt(2)-1) v
    d = 3
    mats = gellmann_basis(d).matrices
    thetas = _qubit_block_thetas(d, mats)
    m = _rotated_settings(cglmp_settings(d), thetas, mats)
    psi = np.zeros(9, dtype=complex)
    psi[0] = psi[4] = 2.0 ** -0.5  # (|00> + |11>)/sqrt(2)
    from qnl.states import TwoQuditState
    rho = TwoQuditState(3, np.outer(psi, psi.conj()))
    assert cglmp_value(rho, m).i_d == pytest.approx(
        (1.0 + 3.0 * np.sqrt(2.0)) / 2.0, abs=1e-8)
    for v in (0.25, 0.5, 1.0):
        colored = channel_output(max_entangled(3),
                                 ChannelSpec(ChannelKind.COLORED, v))
        assert cglmp_value(colored, m).i_d == pytest.approx(
            2.0 + (np.sqrt(2.0) - 1.0) * v, abs=1e-8)


def test_rotated_settings_keep_probabilities_normalized():
    rng = np.random.default_rng(12)
    d = 3
    mats = gellmann_basis(d).matrices
    rho = channel_output(max_entangled(d), ChannelSpec(ChannelKind.WHITE, 0.6))
    for _ in range(5):
        thetas = 0.3 * rng.standard_normal((4, d * d - 1))
        m = _rotated_settings(cglmp_settings(d), thetas, mats)
        table = probability_table(rho, m)
        assert np.max(np.abs(table.sum(axis=(2, 3)) - 1.0)) < 1e-8
        assert table.min() > -1e-12
