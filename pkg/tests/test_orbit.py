import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from escdyn import (
    FATOU,
    Certificate,
    EscapeConfig,
    EscapingPointNotFound,
    Verdict,
    classify,
    classify_array,
    compose,
    evaluate,
    exp_map,
    find_escaping_point,
    iterate_expr,
    orbit,
    translate,
)
from escdyn.function import Affine, _eval
from escdyn.orbit import C_TRANS

PI_I = 1j * math.pi
TWO_PI_I = 2j * math.pi
# roots of x = 0.25*exp(x), computed with mpmath at 30 digits
Q_ATTRACTING = 0.357402956181388903
X_REPELLING = 2.15329236411034965


def bisect(fn, lo, hi, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (fn(lo) > 0) == (fn(mid) > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_oracle_roots_by_bisection():
    h = lambda x: x - 0.25 * math.exp(x)
    assert abs(bisect(h, 0.0, 1.0) - Q_ATTRACTING) < 1e-15
    assert abs(bisect(h, 1.0, 3.0) - X_REPELLING) < 1e-14


def test_right_half_plane_real_part_cert():
    c = classify(FATOU, 1)
    assert c.verdict is Verdict.ESCAPING
    assert c.certificate is Certificate.REAL_PART
    assert str(c) == "Escaping RealPartCert step=0"


def test_fixed_point_is_bounded_not_attracted():
    c = classify(FATOU, PI_I)
    assert c.verdict is Verdict.BOUNDED
    assert c.certificate is Certificate.FIXED_POINT
    # multiplier f'(i pi) = 2: a repelling fixed point, never an attractor
    assert c.attractor is not None and abs(c.attractor.multiplier - 2) < 1e-12


def test_truncated_pi_still_detected_as_fixed_point():
    c = classify(FATOU, 3.14159265358979j)
    assert c.verdict is Verdict.BOUNDED
    assert c.certificate is Certificate.FIXED_POINT


def test_composite_escapes_from_fixed_point(fatou_g):
    c = classify(compose(FATOU, fatou_g), PI_I)
    assert c.verdict is Verdict.ESCAPING
    assert c.certificate is Certificate.TRANSLATION


def test_orbit_prefix():
    rec = orbit(FATOU, 0, 2)
    assert rec.values[0] == 0
    assert rec.values[1] == 2
    assert abs(rec.values[2] - (3 + math.exp(-2))) < 1e-15


def test_orbit_of_fixed_point_is_constant():
    rec = orbit(FATOU, -PI_I, 10)
    assert all(abs(v + PI_I) < 1e-14 for v in rec.values)


def test_exp_quarter_orbit_converges_to_q(exp_quarter):
    rec = orbit(exp_quarter, 0, 200)
    assert abs(rec.values[-1] - Q_ATTRACTING) < 1e-12
    c = rec.classification
    assert c.verdict is Verdict.BOUNDED
    assert c.certificate is Certificate.ATTRACTOR
    assert abs(c.attractor.point - Q_ATTRACTING) < 1e-10
    assert abs(c.attractor.multiplier - Q_ATTRACTING) < 1e-9


def test_orbit_stops_after_overflow():
    rec = orbit(exp_map(1), 3, 50)
    assert math.isinf(rec.values[-1].real)
    assert len(rec.values) < 51
    assert rec.classification.verdict is Verdict.ESCAPING


def test_orbit_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        orbit(FATOU, 0, 0)


def test_exp_quarter_real_axis_split(exp_quarter):
    assert classify(exp_quarter, X_REPELLING - 0.01).verdict is Verdict.BOUNDED
    assert classify(exp_quarter, X_REPELLING + 0.01).verdict is Verdict.ESCAPING


def test_pure_translation_escapes_at_step_zero():
    c = classify(Affine(1, 1), -5)
    assert (c.verdict, c.certificate, c.step) == (Verdict.ESCAPING, Certificate.TRANSLATION, 0)
    assert classify(Affine(1, 0), 3).verdict is Verdict.BOUNDED


def test_find_escaping_point_fatou():
    z = find_escaping_point(FATOU, (-1, 2, -1, 1))
    assert z.real > 0
    assert classify(FATOU, z).verdict is Verdict.ESCAPING


def test_find_escaping_point_exp_real(exp_quarter):
    z = find_escaping_point(exp_quarter, (3, 5, -0.1, 0.1))
    assert z.real > X_REPELLING
    assert classify(exp_quarter, z).verdict is Verdict.ESCAPING


def test_find_escaping_point_not_found(exp_quarter):
    box = (Q_ATTRACTING - 0.1, Q_ATTRACTING + 0.1, -0.1, 0.1)
    with pytest.raises(EscapingPointNotFound):
        find_escaping_point(exp_quarter, box, EscapeConfig(max_iter=20), max_level=3)


def test_find_escaping_point_rejects_degenerate_box():
    with pytest.raises(ValueError):
        find_escaping_point(FATOU, (1, 1, 0, 1))


@pytest.mark.parametrize("kw", [
    dict(max_iter=0), dict(hard_radius=1e5), dict(fatou_re_threshold=0),
    dict(bounded_capture_eps=0), dict(bounded_multiplier_margin=1), dict(max_period=0),
])
def test_escape_config_validation(kw):
    with pytest.raises(ValueError):
        EscapeConfig(**kw)


def test_overflow_seed_is_escaping():
    c = classify(FATOU, complex(math.inf, math.inf))
    assert c.certificate is Certificate.OVERFLOW


def test_translation_certificate_soundness(fatou_g):
    """Wherever TranslationCert fires for g = f + 2*pi*i, the law
    g^n(z) = f^n(z) + 2n*pi*i holds along the computed orbits."""
    xs = np.linspace(-3, 3, 41)
    grid = (xs[None, :] + 1j * xs[:, None]).ravel()
    fixed = (2 * np.arange(-3, 3) + 1) * PI_I
    pts = np.concatenate([grid, fixed])
    res = classify_array(fatou_g, pts)
    hit = pts[res.certificate == C_TRANS]
    # the fixed points of f are exactly where the law certifies escape
    assert set(np.round(fixed.imag, 9)) <= set(np.round(hit.imag[hit.real == 0], 9))
    gv, fv = hit.copy(), hit.copy()
    for n in range(1, 21):
        gv, fv = _eval(fatou_g, gv), _eval(FATOU, fv)
        ok = np.isfinite(gv) & np.isfinite(fv)
        err = np.abs(gv - (fv + 2j * n * math.pi))[ok]
        scale = (1 + np.abs(fv) + 2 * n * math.pi)[ok]
        assert np.all(err <= 1e-9 * scale)


def test_real_part_cert_threshold_is_forward_invariant():
    # Re f(z) = Re z + 1 + e^{-x} cos y > Re z + 1 - e^{-x}; above 0.05 this grows
    rng = np.random.default_rng(3)
    x = 0.05 + 5 * rng.random(2000)
    y = -50 + 100 * rng.random(2000)
    z = x + 1j * y
    fz = _eval(FATOU, z)
    assert np.all(fz.real > z.real + 1 - np.exp(-z.real) - 1e-12)
    assert np.all(1 - np.exp(-z.real) > 0)


def test_batch_independence(fatou_g):
    rng = np.random.default_rng(7)
    pts = (rng.random(300) - 0.5) * 16 + 1j * (rng.random(300) - 0.5) * 16
    f = compose(FATOU, fatou_g)
    whole = classify_array(f, pts)
    for i in range(0, 300, 37):
        single = classify(f, pts[i])
        assert single == whole.item(i)


def test_thread_sharding_identical():
    xs = np.linspace(-4, 4, 64)
    pts = (xs[None, :] + 1j * xs[:, None]).ravel()
    a = classify_array(exp_map(0.25), pts, threads=1)
    b = classify_array(exp_map(0.25), pts, threads=8)
    assert np.array_equal(a.verdict, b.verdict)
    assert np.array_equal(a.step, b.step)


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False),
       st.integers(min_value=5, max_value=60))
def test_horizon_monotonicity(z, short):
    f = compose(FATOU, translate(FATOU, TWO_PI_I))
    lo = classify(f, z, EscapeConfig(max_iter=short))
    hi = classify(f, z, EscapeConfig(max_iter=200))
    if lo.verdict is not Verdict.UNDECIDED:
        assert hi.verdict is lo.verdict


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0501, max_value=50), st.floats(min_value=-100, max_value=100))
def test_right_half_plane_property(x, y):
    c = classify(iterate_expr(FATOU, 2), complex(x, y))
    assert c.certificate is Certificate.REAL_PART and c.step == 0


def test_classify_matches_direct_iteration_for_escaping_exp():
    # the real orbit from 3 under e^z overflows after a few steps
    z, n = 3.0, 0
    while z < 1e300 and n < 10:
        z = math.exp(z) if z < 700 else math.inf
        n += 1
    c = classify(exp_map(1), 3)
    assert c.verdict is Verdict.ESCAPING and c.step <= n
    assert evaluate(exp_map(1), 3) == pytest.approx(math.exp(3))
