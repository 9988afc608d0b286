import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussn import (
    InputError,
    UnsupportedModelError,
    h_closed_form,
    h_derivative_analytic,
    h_derivative_numeric,
    h_functional,
    integrate,
    make_model,
    max_abs_derivative,
)

HALF_PI = math.pi / 2.0


def test_zero_shift_is_exactly_zero(all_models):
    for model in all_models:
        ev = h_functional(model, 0.0)
        assert ev.value == 0.0
        assert ev.error_estimate == 0.0


def test_gauss_value():
    gauss = make_model("gauss")
    ev = h_functional(gauss, 0.7)
    assert ev.value == pytest.approx(-0.245, abs=1e-10)  # -delta^2/2
    assert h_closed_form(gauss, 0.7) == pytest.approx(-0.245, rel=1e-15)


def test_chi2log_values(chi2):
    # Antiderivative of the shift derivative 1 - e^delta vanishing at 0.
    ev = h_functional(chi2, 1.0)
    assert ev.value == pytest.approx(2.0 - math.e, abs=1e-8)
    ev = h_functional(chi2, -1.0)
    assert ev.value == pytest.approx(-math.exp(-1.0), abs=1e-8)
    assert h_closed_form(chi2, 0.0) == 0.0


def test_trig_values(trig):
    assert h_functional(trig, math.pi / 4.0).value == pytest.approx(-1.0, abs=1e-8)
    assert h_functional(trig, HALF_PI).value == pytest.approx(-2.0, abs=1e-8)
    assert h_closed_form(trig, math.pi / 4.0) == pytest.approx(-1.0, rel=1e-15)
    assert h_closed_form(trig, HALF_PI) == pytest.approx(-2.0, rel=1e-15)


def test_closed_form_matches_quadrature(chi2, gauss, trig):
    rng = np.random.default_rng(5)
    for model, span in ((chi2, 3.0), (gauss, 3.0), (trig, 1.5)):
        for _ in range(50):
            d = float(rng.uniform(-span, span))
            ev = h_functional(model, d)
            assert abs(ev.value - h_closed_form(model, d)) <= 1e-7, (model.id, d)


def test_nonpositive_with_unique_maximum(chi2, gauss, trig):
    for model, span in ((chi2, 3.0), (gauss, 3.0), (trig, 1.5)):
        for d in np.linspace(-span, span, 101):
            v = h_functional(model, float(d)).value
            if d == 0.0:
                assert v == 0.0
            else:
                assert v < 0.0


def test_large_shifts_stay_accurate(chi2, gauss):
    # Relative accuracy holds even when H spans hundreds of orders of
    # magnitude below zero (the skewed model grows like -e^delta).
    for d in (10.0, 50.0, -50.0, -200.0):
        got = h_functional(chi2, d).value
        want = h_closed_form(chi2, d)
        assert got == pytest.approx(want, rel=1e-12)
    assert h_functional(gauss, 12.0).value == pytest.approx(-72.0, rel=1e-12)


def test_sign_survives_tiny_shifts(chi2, gauss, trig):
    # H ~ -F delta^2 / 2 is far below the default quadrature tolerance for
    # small shifts; the cancellation-free integrand keeps the sign anyway.
    for model in (chi2, gauss, trig):
        for d in (1e-5, -1e-5, 1e-6, 1e-8, -1e-8):
            assert h_functional(model, d).value < 0.0, (model.id, d)


def test_two_argument_reduction(chi2, gauss):
    # The raw two-argument integral depends only on xi_ml - xi: shifting
    # both arguments leaves it unchanged, and it matches h_functional.
    rng = np.random.default_rng(17)
    for model in (chi2, gauss):
        def raw(m, xi):
            def f(xs):
                lp_m = _logp(model, xs - m)
                lp_x = _logp(model, xs - xi)
                out = np.exp(lp_m) * (lp_x - lp_m)
                return np.where(np.isfinite(out), out, 0.0)

            return integrate(f, (-math.inf, math.inf)).value

        for _ in range(4):
            m, xi, a = rng.uniform(-1.5, 1.5, size=3)
            v = raw(m, xi)
            assert v == pytest.approx(raw(m + a, xi + a), abs=1e-9)
            assert v == pytest.approx(h_functional(model, float(m - xi)).value, abs=1e-9)


def _logp(model, u):
    if model.id.value == "chi2log":
        return u - np.exp(u)
    return -0.5 * math.log(2.0 * math.pi) - 0.5 * u**2


@settings(max_examples=25, deadline=None)
@given(d=st.floats(0.01, 1.5))
def test_trig_mirror_symmetry(d):
    trig = make_model("trig")
    assert abs(h_functional(trig, d).value - h_functional(trig, -d).value) <= 1e-9


def test_odd_numeric_derivatives_vanish_at_zero(trig):
    assert abs(h_derivative_numeric(trig, 1, 0.0)) <= 1e-4
    assert abs(h_derivative_numeric(trig, 3, 0.0)) <= 1e-4


def test_trig_derivative_anchors(trig):
    assert h_derivative_analytic(trig, 1, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert h_derivative_analytic(trig, 2, 0.0) == pytest.approx(-4.0, rel=1e-15)
    assert h_derivative_analytic(trig, 3, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert h_derivative_analytic(trig, 4, 0.0) == pytest.approx(16.0, rel=1e-15)
    assert h_derivative_analytic(trig, 1, 0.3) == pytest.approx(-2.0 * math.sin(0.6), rel=1e-14)


def test_chi2log_derivative_orientation(chi2):
    # With delta = xi_ml - xi: first derivative 1 - e^delta, all higher
    # orders -e^delta; the third derivative at zero is -1.
    assert h_derivative_analytic(chi2, 1, 0.0) == 0.0
    assert h_derivative_analytic(chi2, 3, 0.0) == -1.0
    assert h_derivative_analytic(chi2, 2, 0.5) == pytest.approx(-math.exp(0.5), rel=1e-15)
    # numeric cross-check of the orientation
    assert h_derivative_numeric(chi2, 1, 0.5) == pytest.approx(
        1.0 - math.exp(0.5), abs=1e-6
    )


def test_numeric_matches_analytic_randomized(chi2, gauss, trig):
    rng = np.random.default_rng(8)
    for model, span in ((chi2, 2.0), (gauss, 2.0), (trig, 1.4)):
        for _ in range(7):
            d = float(rng.uniform(0.05, span) * rng.choice([-1.0, 1.0]))
            for order in (1, 2):
                got = h_derivative_numeric(model, order, d)
                want = h_derivative_analytic(model, order, d)
                assert got == pytest.approx(want, abs=1e-5), (model.id, order, d)
            for order in (3, 4):
                got = h_derivative_numeric(model, order, d)
                want = h_derivative_analytic(model, order, d)
                assert got == pytest.approx(want, abs=1e-3), (model.id, order, d)


def test_numeric_derivative_example(trig, gauss, chi2):
    assert h_derivative_numeric(trig, 1, 0.3) == pytest.approx(
        -2.0 * math.sin(0.6), abs=1e-4
    )
    assert h_derivative_numeric(gauss, 2, 1.1) == pytest.approx(-1.0, abs=1e-5)
    assert h_derivative_numeric(chi2, 2, 0.0) == pytest.approx(-1.0, abs=1e-4)


def test_max_abs_derivative(chi2, gauss, trig, binom):
    w160 = 3.0 / math.sqrt(160.0)
    assert max_abs_derivative(chi2, 3, w160) == pytest.approx(math.exp(w160), rel=1e-15)
    assert max_abs_derivative(trig, 4, 0.5) == 16.0
    assert max_abs_derivative(trig, 4, 3.0) == 16.0
    assert max_abs_derivative(binom, 4, 0.5) == 16.0  # carried by the trig family
    assert max_abs_derivative(gauss, 3, 1.0) == 0.0
    # scan of the analytic derivative agrees with the monotone closed form
    scan = max(abs(h_derivative_analytic(chi2, 3, d)) for d in np.linspace(-w160, w160, 10001))
    assert scan == pytest.approx(max_abs_derivative(chi2, 3, w160), rel=1e-9)
    # trig second derivative: |-4 cos| peaks at the window edge past pi/4
    assert max_abs_derivative(trig, 2, 0.3) == pytest.approx(4.0 * math.cos(0.0), rel=1e-6)


def test_unsupported_operations(binom, trig):
    with pytest.raises(UnsupportedModelError):
        h_closed_form(binom, 0.2)
    with pytest.raises(UnsupportedModelError):
        h_derivative_analytic(binom, 2, 0.1)
    with pytest.raises(InputError):
        h_functional(trig, 3.5)  # beyond one period
    with pytest.raises(InputError):
        h_derivative_numeric(trig, 5, 0.1)


def test_binomial_borrows_trig_h(binom, trig):
    for d in (0.3, -0.9):
        assert h_functional(binom, d).value == pytest.approx(
            h_functional(trig, d).value, abs=1e-12
        )


def test_evaluation_metadata(trig):
    ev = h_functional(trig, 0.4)
    assert ev.method == "quadrature"
    assert ev.delta == 0.4
    assert ev.error_estimate >= 0.0
