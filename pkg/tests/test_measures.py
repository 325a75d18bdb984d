"""Measure oracles against textbook cases, closed forms against oracles, and
the retained faulty variants against both."""
import math

import numpy as np
import pytest

from qcorr.channels import ChannelSpec, kraus_apply
from qcorr.measures import (
    OptimizerSettings,
    classical_correlation,
    classical_correlation_closed,
    closed_spectrum,
    concurrence,
    concurrence_closed,
    geometric_discord,
    geometric_discord_closed,
    mutual_information,
    mutual_information_closed,
    optimal_conditional_entropy,
    quantum_discord,
    quantum_discord_closed,
    quantum_discord_xz_expanded,
    quantum_discord_y_expanded,
    uncorrected_x_concurrence,
    wootters_score,
)
from qcorr.states import initial_state, make_params

PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)


def pure(vec):
    return np.outer(vec, vec.conj())


def werner(p):
    return p * pure(PSI_MINUS) + (1.0 - p) * np.eye(4, dtype=complex) / 4.0


# ---------------------------------------------------------------------------
# concurrence
# ---------------------------------------------------------------------------

def test_concurrence_of_bell_states_is_one():
    assert concurrence(pure(PSI_MINUS)).value == pytest.approx(1.0, abs=1e-12)
    assert concurrence(pure(PHI_PLUS)).value == pytest.approx(1.0, abs=1e-12)


def test_concurrence_of_product_state_is_zero():
    rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    assert concurrence(rho).value == 0.0


def test_concurrence_of_werner_states():
    # known result: C = max(0, (3p - 1)/2)
    for p in np.linspace(0.0, 1.0, 21):
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert concurrence(werner(float(p))).value == pytest.approx(expected, abs=1e-10)


def test_concurrence_closed_at_t_zero():
    for theta in np.linspace(0.0, math.pi, 15):
        p = make_params(float(theta))
        want = 2.0 * (abs(p.xi) - abs(p.eta))
        got = concurrence_closed(p).value
        assert got == pytest.approx(max(0.0, want), abs=1e-12)
        assert concurrence(initial_state(p)).value == pytest.approx(got, abs=1e-9)


def test_concurrence_closed_y_axis_equals_lambda():
    p = make_params(math.pi / 4)
    got = concurrence_closed(p, ChannelSpec(axis="y"), 0.5).value
    assert got == pytest.approx(0.18393972058572117, abs=1e-15)


def test_concurrence_dies_exactly_at_one_third_decay():
    # mu xi = eta at mu = 1/3 for eta = 1/8, xi = 3/8
    p = make_params(math.pi / 4)
    t_death = math.log(3.0) / 2.0
    assert concurrence_closed(p, ChannelSpec(axis="z"), t_death).value == pytest.approx(
        0.0, abs=1e-15
    )


def test_everything_vanishes_at_the_balanced_angle():
    p = make_params(math.pi / 2)
    rho = initial_state(p)
    for t in (0.0, 0.8):
        for axis in "xyz":
            ch = ChannelSpec(axis=axis)
            assert concurrence_closed(p, ch, t).value == 0.0
            assert geometric_discord_closed(p, ch, t).value == pytest.approx(0.0, abs=1e-15)
            assert quantum_discord_closed(p, ch, t).value == pytest.approx(0.0, abs=1e-12)
    assert concurrence(rho).value == pytest.approx(0.0, abs=1e-9)
    assert geometric_discord(rho).value == pytest.approx(0.0, abs=1e-9)
    assert quantum_discord(rho).value == pytest.approx(0.0, abs=1e-7)


def test_wootters_score_goes_negative_past_death():
    p = make_params(math.pi / 4)
    ch = ChannelSpec(axis="z")
    t_death = math.log(math.sqrt(p.xi / p.eta))
    rho = kraus_apply(initial_state(p), ch, t_death + 0.5)
    mu = math.exp(-2.0 * (t_death + 0.5))
    assert wootters_score(rho) == pytest.approx(2.0 * (mu * p.xi - p.eta), abs=1e-10)
    assert concurrence(rho).value == 0.0


def test_concurrence_general_route_handles_negative_dust():
    # smallest eigenvalue sits between the validation floor and the clamp,
    # which forces the non-PSD fallback path
    rho = np.diag([0.5, 0.5 + 5e-11, -5e-11, 0.0]).astype(complex)
    assert concurrence(rho).value == pytest.approx(0.0, abs=1e-6)


def test_uncorrected_x_concurrence_is_visibly_wrong():
    p0 = make_params(0.0)
    ch = ChannelSpec(axis="x")
    # the faulty closed form gives 4 for a state whose concurrence is 1
    assert uncorrected_x_concurrence(p0, ch, 0.0) == pytest.approx(4.0, abs=1e-12)
    with pytest.raises(ValueError):
        uncorrected_x_concurrence(p0, ChannelSpec(axis="z"), 0.0)


# ---------------------------------------------------------------------------
# geometric discord
# ---------------------------------------------------------------------------

def test_geometric_discord_extremes():
    assert geometric_discord(pure(PSI_MINUS)).value == pytest.approx(0.5, abs=1e-13)
    product = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    assert geometric_discord(product).value == pytest.approx(0.0, abs=1e-13)


def test_geometric_discord_closed_at_t_zero():
    for theta in np.linspace(0.1, math.pi - 0.1, 9):
        p = make_params(float(theta))
        q = 1.0 - 4.0 * p.eta
        assert geometric_discord_closed(p).value == pytest.approx(q * q / 2.0, abs=1e-14)
        assert geometric_discord(initial_state(p)).value == pytest.approx(q * q / 2.0, abs=1e-12)


def test_geometric_discord_closed_spot_values():
    p = make_params(math.pi / 4)  # q = 1/2
    # dephasing at mu = 0.8: (1/4)[q^2 + mu^2(1 + q^2)] - (1/4) mu^2
    t = -math.log(0.8) / 2.0
    assert geometric_discord_closed(p, ChannelSpec(axis="z"), t).value == pytest.approx(
        0.1025, abs=1e-12
    )
    assert geometric_discord_closed(p, ChannelSpec(axis="y"), 0.5).value == pytest.approx(
        0.016916910404576588, abs=1e-15
    )


# ---------------------------------------------------------------------------
# entropic measures
# ---------------------------------------------------------------------------

def test_mutual_information_known_values():
    assert mutual_information(pure(PHI_PLUS)).value == pytest.approx(2.0, abs=1e-10)
    product = np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex)
    assert mutual_information(product).value == pytest.approx(0.0, abs=1e-12)
    p = make_params(math.pi / 4)
    assert mutual_information_closed(p).value == pytest.approx(1.188721875540867, abs=1e-13)
    assert mutual_information(initial_state(p)).value == pytest.approx(
        1.188721875540867, abs=1e-10
    )


def test_optimal_conditional_entropy_spot_value():
    p = make_params(math.pi / 4)  # q = 1/2
    rho = kraus_apply(initial_state(p), ChannelSpec(axis="z"), 0.5)
    res = optimal_conditional_entropy(rho)
    # h((1 + max(q, mu))/2) with q = 1/2 > mu = e^-1
    assert res.value == pytest.approx(0.8112781244591328, abs=1e-9)
    assert res.optimizer is not None
    u = np.array(res.optimizer.best_direction)
    assert np.linalg.norm(u) == pytest.approx(1.0, abs=1e-9)
    assert res.optimizer.refinement_iterations >= 1


def test_optimal_conditional_entropy_at_four_fifths_decay():
    # mu = 0.8 beats q = 1/2, so the bound is h(0.9)
    p = make_params(math.pi / 4)
    t = -math.log(0.8) / 2.0
    rho = kraus_apply(initial_state(p), ChannelSpec(axis="z"), t)
    res = optimal_conditional_entropy(rho)
    assert res.value == pytest.approx(0.4689955935892812, abs=1e-9)


def test_optimal_conditional_entropy_is_zero_on_initial_family():
    # a full-strength correlation direction survives at t = 0, so some
    # measurement predicts the other qubit perfectly
    for theta in (0.3, math.pi / 4, 1.4):
        res = optimal_conditional_entropy(initial_state(theta))
        assert res.value <= 1e-7


def test_optimal_conditional_entropy_validation():
    rho = initial_state(1.0)
    with pytest.raises(ValueError):
        optimal_conditional_entropy(rho, measured_side="Q")
    with pytest.raises(ValueError):
        optimal_conditional_entropy(rho, settings=OptimizerSettings(grid_points=8))


def test_measured_side_is_irrelevant_for_this_family():
    rho = kraus_apply(initial_state(1.1), ChannelSpec(axis="x"), 0.6)
    a = optimal_conditional_entropy(rho, measured_side="A").value
    b = optimal_conditional_entropy(rho, measured_side="B").value
    assert a == pytest.approx(b, abs=1e-9)


def test_classical_correlation_spot_values():
    p = make_params(math.pi / 4)
    assert classical_correlation_closed(p).value == pytest.approx(1.0, abs=1e-12)
    assert classical_correlation(initial_state(p)).value == pytest.approx(1.0, abs=1e-7)
    t = 0.5
    got = classical_correlation_closed(p, ChannelSpec(axis="z"), t).value
    assert got == pytest.approx(1.0 - 0.8112781244591328, abs=1e-13)


def test_classical_correlation_survives_y_noise_untouched():
    # the strongest correlation direction is immune to y damping
    p = make_params(math.pi / 4)
    ch = ChannelSpec(axis="y")
    for t in (0.3, 0.5, 1.2):
        assert classical_correlation_closed(p, ch, t).value == pytest.approx(1.0, abs=1e-12)
        rho = kraus_apply(initial_state(p), ch, t)
        assert classical_correlation(rho).value == pytest.approx(1.0, abs=1e-7)


def test_classical_correlation_of_product_state_is_zero():
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1.0
    assert classical_correlation(pure(ket00)).value == pytest.approx(0.0, abs=1e-9)


def test_closed_spectrum_at_half_decay():
    p = make_params(math.pi / 4)
    t = math.log(2.0) / 2.0  # mu = 1/2
    for axis in "xz":
        levels = closed_spectrum(p, ChannelSpec(axis=axis), t)
        assert np.allclose(
            sorted(levels, reverse=True),
            [9.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0],
            atol=1e-14,
        )
        rho = kraus_apply(initial_state(p), ChannelSpec(axis=axis), t)
        assert np.allclose(
            sorted(np.linalg.eigvalsh(rho), reverse=True),
            sorted(levels, reverse=True),
            atol=1e-13,
        )


def test_quantum_discord_closed_spot_values():
    p = make_params(math.pi / 4)
    assert quantum_discord_closed(p).value == pytest.approx(0.18872187554086717, abs=1e-13)
    assert quantum_discord_closed(p, ChannelSpec(axis="y"), 0.5).value == pytest.approx(
        0.024545464160185326, abs=1e-14
    )


def test_quantum_discord_textbook_endpoints():
    assert quantum_discord(pure(PSI_MINUS)).value == pytest.approx(1.0, abs=1e-7)
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1.0
    assert quantum_discord(pure(ket00)).value == pytest.approx(0.0, abs=1e-9)
    assert concurrence(np.eye(4, dtype=complex) / 4.0).value == 0.0


def test_quantum_discord_equals_mutual_information_minus_classical():
    rng = np.random.default_rng(31)
    for _ in range(4):
        theta = float(rng.uniform(0.2, math.pi - 0.2))
        t = float(rng.uniform(0.0, 2.0))
        axis = "xyz"[rng.integers(3)]
        rho = kraus_apply(initial_state(theta), ChannelSpec(axis=axis), t)
        d = quantum_discord(rho).value
        i_minus_cc = mutual_information(rho).value - classical_correlation(rho).value
        assert d == pytest.approx(i_minus_cc, abs=1e-12)


def test_quantum_discord_oracle_tracks_closed_form():
    p = make_params(2 * math.pi / 5)
    for axis in "xyz":
        ch = ChannelSpec(axis=axis)
        for t in (0.0, 0.4, 1.7):
            rho = kraus_apply(initial_state(p), ch, t)
            assert quantum_discord(rho).value == pytest.approx(
                quantum_discord_closed(p, ch, t).value, abs=1e-7
            )


def test_expanded_discord_forms_match_pipeline():
    rng = np.random.default_rng(37)
    for _ in range(30):
        theta = float(rng.uniform(0.15, math.pi - 0.15))
        t = float(rng.uniform(0.0, 3.0))
        p = make_params(theta)
        axis = "xz"[rng.integers(2)]
        ch = ChannelSpec(axis=axis)
        assert quantum_discord_xz_expanded(p, ch, t) == pytest.approx(
            quantum_discord_closed(p, ch, t).value, abs=1e-12
        )
        chy = ChannelSpec(axis="y")
        assert quantum_discord_y_expanded(p, chy, t) == pytest.approx(
            quantum_discord_closed(p, chy, t).value, abs=1e-12
        )


def test_expanded_discord_domain_errors():
    p = make_params(1.0)
    with pytest.raises(ValueError):
        quantum_discord_xz_expanded(p, ChannelSpec(axis="y"), 0.5)
    with pytest.raises(ValueError):
        quantum_discord_xz_expanded(make_params(0.0), ChannelSpec(axis="x"), 0.5)
    with pytest.raises(ValueError):
        quantum_discord_y_expanded(p, ChannelSpec(axis="x"), 0.5)
    with pytest.raises(ValueError):
        quantum_discord_y_expanded(make_params(0.0), ChannelSpec(axis="y"), 0.0)  # lam = 1


def test_measures_respect_bounds_on_random_states():
    rng = np.random.default_rng(41)
    for _ in range(6):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        assert 0.0 <= concurrence(rho).value <= 1.0 + 1e-12
        assert 0.0 <= geometric_discord(rho).value <= 0.5 + 1e-12
        assert quantum_discord(rho).value >= 0.0
        assert classical_correlation(rho).value >= 0.0
