"""Trigonometric continuation operator: reproduction, conditioning, decay."""

import math

import mpmath as mp
import numpy as np
import pytest

from zaremba.fc import (
    FCError,
    FCSeries,
    build_fc_operator,
    fc_apply,
    fc_eval,
    fc_eval_deriv,
    half_period_nodes,
    trig_basis,
)

SF = np.linspace(0.0, math.pi, 1501)


def test_series_eval_basics():
    s = FCSeries(C=np.array([1.0]), D=np.array([0.0]))
    assert fc_eval(s, 0.3) == pytest.approx(1.0)
    s = FCSeries(C=np.array([0.0, 0.0]), D=np.array([0.0, 1.0]))
    assert fc_eval(s, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    s = FCSeries(C=np.array([0.0, 0.0, 1.0]), D=np.zeros(3))
    assert fc_eval_deriv(s, math.pi / 4) == pytest.approx(-2.0, abs=1e-14)


def test_in_band_cosine_reproduction():
    # cos(3s) with a comfortably overdetermined fit: exact coefficients
    op = build_fc_operator(32, J=5, svd_cutoff=1e-12)
    s = half_period_nodes(32)
    series = fc_apply(op, np.cos(3 * s))
    assert series.C[3] == pytest.approx(1.0, abs=1e-10)
    others = np.concatenate([series.C[:3], series.C[4:], series.D])
    assert np.max(np.abs(others)) < 1e-10
    # function-level reproduction everywhere on [0, pi]
    assert np.max(np.abs(fc_eval(series, SF) - np.cos(3 * SF))) < 1e-10


def test_constant_reproduction():
    op = build_fc_operator(32, J=5)
    series = fc_apply(op, np.ones(32))
    assert series.C[0] == pytest.approx(1.0, abs=1e-12)


def test_sine_reproduction():
    # the lowest sine mode couples to the least-visible fit direction, so
    # this check retains the full band (sigma_min ~ 7e-6 at J = 7)
    op = build_fc_operator(48, J=7, svd_cutoff=1e-8)
    s = half_period_nodes(48)
    series = fc_apply(op, np.sin(s))
    assert series.D[1] == pytest.approx(1.0, abs=1e-10)


def test_zero_maps_to_zero():
    op = build_fc_operator(24)
    series = fc_apply(op, np.zeros(24))
    assert np.all(series.C == 0) and np.all(series.D == 0)


def test_interpolation_exact_at_nodes():
    # smooth input: node values reproduced to rounding
    op = build_fc_operator(40)
    s = half_period_nodes(40)
    samples = np.exp(np.cos(s)) + 0.3 * np.sin(2 * s)
    series = fc_apply(op, samples)
    assert np.max(np.abs(fc_eval(series, s) - samples)) < 1e-11
    # rough input: still interpolatory relative to the coefficient scale
    rng = np.random.default_rng(7)
    rough = rng.standard_normal(40)
    sr = fc_apply(op, rough)
    scale = max(np.abs(sr.C).max(), np.abs(sr.D).max(), 1.0)
    assert np.max(np.abs(fc_eval(sr, s) - rough)) < 1e-12 * scale * len(sr.C)


def test_linearity():
    rng = np.random.default_rng(3)
    op = build_fc_operator(32)
    f, g = rng.standard_normal(32), rng.standard_normal(32)
    a, b = 1.7, -0.4
    s1 = fc_apply(op, a * f + b * g)
    s2a, s2b = fc_apply(op, f), fc_apply(op, g)
    assert np.allclose(s1.C, a * s2a.C + b * s2b.C, atol=1e-14)
    assert np.allclose(s1.D, a * s2a.D + b * s2b.D, atol=1e-14)


def test_complex_samples_componentwise():
    rng = np.random.default_rng(5)
    op = build_fc_operator(32)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    s = fc_apply(op, f)
    sr, si = fc_apply(op, f.real), fc_apply(op, f.imag)
    assert np.allclose(s.C, sr.C + 1j * si.C)
    assert np.allclose(s.D, sr.D + 1j * si.D)


def test_exp_fit_matches_extended_precision_oracle():
    """n=64, J=42 underdetermined raw fit: the on-interval residual equals
    the independently computed extended-precision least-squares residual
    (about 3e-4; the truncated min-norm fit wiggles between nodes)."""
    n, J = 64, 42
    op = build_fc_operator(n, J=J, svd_cutoff=1e-12, resample=False)
    s = half_period_nodes(n)
    series = fc_apply(op, np.exp(s))
    resid = np.max(np.abs(fc_eval(series, SF) - np.exp(SF)))

    mp.mp.dps = 30
    s_mp = [(i + mp.mpf(1) / 2) * mp.pi / n for i in range(n)]
    A = mp.matrix(n, 2 * J + 1)
    for r, si in enumerate(s_mp):
        A[r, 0] = 1
        for j in range(1, J + 1):
            A[r, j] = mp.cos(j * si)
            A[r, J + j] = mp.sin(j * si)
    U, S, V = mp.svd_r(A)
    y = U.T * mp.matrix([mp.e**si for si in s_mp])
    c = mp.matrix(2 * J + 1, 1)
    for i in range(S.rows):
        if S[i] > mp.mpf("1e-12") * S[0]:
            for m in range(2 * J + 1):
                c[m] += V[i, m] * y[i] / S[i]
    oracle = 0.0
    for t in [mp.pi * q / 400 for q in range(401)]:
        v = c[0]
        for j in range(1, J + 1):
            v += c[j] * mp.cos(j * t) + c[J + j] * mp.sin(j * t)
        oracle = max(oracle, abs(float(v - mp.e**t)))
    assert resid == pytest.approx(oracle, rel=0.5)
    assert resid < 5e-4


def test_smooth_function_residual_improves_100x():
    # 1/(2 - cos(s + 0.3)): approximation-limited at n=32, resolved at n=64
    res = {}
    for n in (32, 64):
        op = build_fc_operator(n, J=max(1, n // 6), svd_cutoff=1e-8)
        s = half_period_nodes(n)
        series = fc_apply(op, 1.0 / (2.0 - np.cos(s + 0.3)))
        res[n] = np.max(np.abs(fc_eval(series, SF) - 1.0 / (2.0 - np.cos(SF + 0.3))))
    assert res[32] / res[64] >= 1e2


def test_coefficient_decay_with_noisy_samples():
    n = 128
    op = build_fc_operator(n)
    s = half_period_nodes(n)
    mu = np.sin(7.9 * np.sin(s) + 0.7) / (2.0 - np.cos(s + 0.3)) + 0.2
    rng = np.random.default_rng(11)
    series = fc_apply(op, mu + 1e-12 * rng.standard_normal(n))
    mags = np.maximum(np.abs(series.C), np.abs(series.D))
    top = mags[int(0.9 * series.bandwidth):].max()
    assert top < 1e-5 * mags.max()


def test_operator_norm_reported():
    op = build_fc_operator(64)
    assert op.singular_values[0] > 0
    assert 0 < op.rank <= 2 * op.J + 1
    norm = np.linalg.norm(op.matrix, 2)
    assert norm < 1e7  # bounded resampled map


def test_config_errors():
    with pytest.raises(FCError):
        build_fc_operator(4)
    with pytest.raises(FCError):
        build_fc_operator(16, J=0)
    op = build_fc_operator(16)
    with pytest.raises(FCError):
        fc_apply(op, np.zeros(15))


def test_basis_shapes():
    s = half_period_nodes(10)
    B = trig_basis(3, s)
    assert B.shape == (10, 7)
    assert np.allclose(B[:, 0], 1.0)
