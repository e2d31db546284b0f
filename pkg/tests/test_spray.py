"""Spray coefficients and Berwald curvature: oracles and consistency."""

import numpy as np
import pytest

from mroot.corpus import CORE, antonelli_quartic2, funk1, quartic2
from mroot.metric import MetricEval
from mroot.spray import (berwald_fd, d_ainv_dy, spray_eval, spray_mroot,
                         spray_variational)

from conftest import corpus_field, corpus_probes

M2_MEMBERS = ("euclid2", "stretched_euclid2", "funk1", "perturbed_funk1",
              "hessian2", "perturbed_hessian2")
CURVED = ("quartic2_scaled", "antonelli_quartic2", "random_cubic3")


@pytest.mark.parametrize("x, y, want", [
    (0.0, 1.0, 0.5),
    (0.0, 2.0, 2.0),
    (0.5, 1.0, 1.0),
    (-0.25, 0.5, 0.1),
])
def test_interval_metric_spray_closed_form(x, y, want):
    # G = y^2 / (2 (1 - x)) for A = y^2 / (1 - x)^2
    ev = MetricEval.at(funk1(), [x], [y])
    assert spray_mroot(ev)[0] == pytest.approx(want, rel=1e-12)
    assert spray_variational(ev)[0] == pytest.approx(want, rel=1e-12)


def test_constant_coefficients_give_zero_spray():
    ev = MetricEval.at(quartic2(), [0.1, -0.3], [1.0, 0.8])
    assert np.all(spray_mroot(ev) == 0.0)
    assert np.allclose(spray_variational(ev), 0.0, atol=1e-16)


def test_scaled_quartic_spray_closed_form():
    # A = (1 + x1)(y1^4 + y2^4) gives
    # G1 = (3 y1^4 - y2^4) / (24 (1 + x1) y1^2), G2 = y1 y2 / (6 (1 + x1))
    fld = corpus_field("quartic2_scaled")
    x = np.array([0.2, 0.0])
    y = np.array([1.0, 1.0])
    G = spray_mroot(MetricEval.at(fld, x, y))
    assert G[0] == pytest.approx(2.0 / 28.8, rel=1e-13)
    assert G[1] == pytest.approx(1.0 / 7.2, rel=1e-13)


def test_exponential_quartic_spray_is_direction_only():
    # A = e^{x1} y1^4 + e^{x2} y2^4 has G^i = y_i^2 / 8 at every x
    fld = antonelli_quartic2()
    for x in ([0.0, 0.0], [0.5, -0.7], [-0.9, 0.3]):
        for y in ([1.0, 1.0], [0.8, -0.6], [-1.2, 0.5]):
            G = spray_mroot(MetricEval.at(fld, x, y))
            want = np.array(y) ** 2 / 8.0
            assert np.allclose(G, want, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("name", CORE)
def test_two_spray_routes_agree(name):
    fld = corpus_field(name)
    for p in corpus_probes(name).probes():
        ev = MetricEval.at(fld, p.x, p.y)
        g1 = spray_mroot(ev)
        g2 = spray_variational(ev)
        assert float(np.max(np.abs(g1 - g2))) <= 1e-8 * (
            1.0 + float(np.max(np.abs(g1))))


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_spray_is_two_homogeneous(lam):
    fld = corpus_field("quartic2_scaled")
    for p in corpus_probes("quartic2_scaled", bases=2, fan=4).probes():
        G = spray_mroot(MetricEval.at(fld, p.x, p.y))
        G_scaled = spray_mroot(MetricEval.at(fld, p.x, lam * p.y))
        assert float(np.max(np.abs(G_scaled - lam ** 2 * G))) <= 1e-9 * (
            1.0 + float(np.max(np.abs(G))))


def test_spray_derivatives_satisfy_euler_relations():
    # dG/dy . y = 2 G and Gamma y y / 2 = G follow from 2-homogeneity
    fld = corpus_field("random_cubic3")
    for p in corpus_probes("random_cubic3", bases=2, fan=4).probes():
        ev = MetricEval.at(fld, p.x, p.y)
        sp = spray_eval(ev)
        scale = 1.0 + float(np.max(np.abs(sp.G)))
        assert float(np.max(np.abs(sp.dG_dy @ ev.y - 2.0 * sp.G))) <= 1e-9 * scale
        half_yy = 0.5 * np.einsum("ijk,j,k->i", sp.d2G_dy2, ev.y, ev.y)
        assert float(np.max(np.abs(half_yy - sp.G))) <= 1e-9 * scale


@pytest.mark.parametrize("lam", [0.5, 3.0])
def test_connection_coefficients_are_zero_homogeneous(lam):
    fld = corpus_field("quartic2_scaled")
    for p in corpus_probes("quartic2_scaled", bases=2, fan=4).probes():
        sp = spray_eval(MetricEval.at(fld, p.x, p.y))
        sp_scaled = spray_eval(MetricEval.at(fld, p.x, lam * p.y))
        scale = 1.0 + float(np.max(np.abs(sp.d2G_dy2)))
        assert float(np.max(np.abs(
            sp_scaled.d2G_dy2 - sp.d2G_dy2))) <= 1e-9 * scale


def test_hessian_inverse_derivative_closed_form():
    # A^{11} = 1 / (12 y1^2) for the diagonal quartic, so
    # dA^{11}/dy1 = -1/6 at y = (1, 1)
    ev = MetricEval.at(quartic2(), [0.0, 0.0], [1.0, 1.0])
    D = d_ainv_dy(ev)
    assert D[0, 0, 0] == pytest.approx(-1.0 / 6.0, rel=1e-13)
    assert D[1, 1, 1] == pytest.approx(-1.0 / 6.0, rel=1e-13)
    assert D[0, 0, 1] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("name", CURVED)
def test_hessian_inverse_derivative_matches_fd(name):
    fld = corpus_field(name)
    h = 1e-5
    for p in corpus_probes(name, bases=3, fan=4, cond_cap=50.0).probes():
        ev = MetricEval.at(fld, p.x, p.y)
        D = d_ainv_dy(ev)
        for l in range(fld.n):
            yp = p.y.copy()
            ym = p.y.copy()
            yp[l] += h
            ym[l] -= h
            fd = (MetricEval.at(fld, p.x, yp).A_inv
                  - MetricEval.at(fld, p.x, ym).A_inv) / (2.0 * h)
            scale = 1.0 + float(np.max(np.abs(D[:, :, l])))
            assert float(np.max(np.abs(D[:, :, l] - fd))) <= 1e-6 * scale


@pytest.mark.parametrize("name", CURVED)
def test_berwald_tensor_matches_fd_oracle(name):
    fld = corpus_field(name)
    for p in corpus_probes(name, bases=6, fan=3, cond_cap=5.0).probes():
        sp = spray_eval(MetricEval.at(fld, p.x, p.y))
        fd = berwald_fd(fld, p.x, p.y)
        assert float(np.max(np.abs(sp.B - fd))) <= 1e-4


@pytest.mark.parametrize("name", CURVED)
def test_berwald_tensor_is_symmetric_and_annihilates_y(name):
    fld = corpus_field(name)
    for p in corpus_probes(name, bases=4, fan=4, cond_cap=50.0).probes():
        ev = MetricEval.at(fld, p.x, p.y)
        B = spray_eval(ev).B
        scale = 1.0 + float(np.max(np.abs(B)))
        for perm in ((0, 2, 1, 3), (0, 1, 3, 2), (0, 3, 2, 1)):
            assert float(np.max(np.abs(B - np.transpose(B, perm)))) <= 1e-9 * scale
        contracted = np.einsum("ijkl,l->ijk", B, ev.y)
        assert float(np.max(np.abs(contracted))) <= 1e-7 * scale


@pytest.mark.parametrize("name", M2_MEMBERS)
def test_quadratic_metrics_have_exactly_zero_berwald(name):
    # for m = 2 the spray is quadratic in y, so B vanishes identically;
    # the chain rule produces an exact zero, not merely a small number
    fld = corpus_field(name)
    for p in corpus_probes(name, bases=3, fan=4).probes():
        sp = spray_eval(MetricEval.at(fld, p.x, p.y))
        assert np.all(sp.B == 0.0)
        assert np.all(sp.E == 0.0)


def test_mean_berwald_is_half_trace():
    fld = corpus_field("random_cubic3")
    for p in corpus_probes("random_cubic3", bases=2, fan=4).probes():
        sp = spray_eval(MetricEval.at(fld, p.x, p.y))
        want = 0.5 * np.einsum("ijki->jk", sp.B)
        assert np.array_equal(sp.E, want)
        assert np.allclose(sp.E, sp.E.T, atol=1e-9 * (1 + np.abs(sp.E).max()))


def test_spray_eval_gradient_matches_fd():
    fld = corpus_field("quartic2_scaled")
    h = 1e-6
    p = next(corpus_probes("quartic2_scaled", bases=1, fan=2).probes())
    sp = spray_eval(MetricEval.at(fld, p.x, p.y))
    for j in range(2):
        yp, ym = p.y.copy(), p.y.copy()
        yp[j] += h
        ym[j] -= h
        fd = (spray_mroot(MetricEval.at(fld, p.x, yp))
              - spray_mroot(MetricEval.at(fld, p.x, ym))) / (2.0 * h)
        assert np.allclose(sp.dG_dy[:, j], fd, atol=1e-8 * (1 + np.abs(fd).max()))
