"""Probe generation: determinism, admissibility, cone handling."""

import numpy as np
import pytest

from mroot.errors import ConfigurationError
from mroot.field import SymTensorField
from mroot.metric import MetricEval
from mroot.probes import (admissible_at_all, admissible_fan, base_points,
                          generate_probe_set, sphere_fan)

from conftest import corpus_field


def test_sphere_fan_unit_norm_and_deterministic():
    fan = sphere_fan(3, 16, seed=42)
    assert fan.shape == (16, 3)
    assert np.allclose(np.linalg.norm(fan, axis=1), 1.0, atol=1e-12)
    again = sphere_fan(3, 16, seed=42)
    assert np.array_equal(fan, again)
    other = sphere_fan(3, 16, seed=43)
    assert not np.array_equal(fan, other)


def test_sphere_fan_one_dimensional_alternates_signs():
    fan = sphere_fan(1, 6, seed=0)
    assert fan.tolist() == [[1.0], [-1.0], [1.0], [-1.0], [1.0], [-1.0]]


def test_sphere_fan_rejects_empty_request():
    with pytest.raises(ConfigurationError):
        sphere_fan(2, 0, seed=0)


def test_base_points_respect_margin_and_seed():
    fld = corpus_field("quartic2_scaled")
    pts = base_points(fld, 32, seed=7)
    assert pts.shape == (32, 2)
    for (lo, hi) in fld.box:
        pad = 0.05 * (hi - lo)
        assert np.all(pts >= lo + pad - 1e-12)
        assert np.all(pts <= hi - pad + 1e-12)
    assert np.array_equal(pts, base_points(fld, 32, seed=7))
    with pytest.raises(ConfigurationError):
        base_points(fld, 0, seed=7)


def test_admissible_fan_members_are_admissible():
    fld = corpus_field("random_cubic3")
    x = np.zeros(3)
    fan = admissible_fan(fld, x, 8, seed=1)
    assert fan.shape == (8, 3)
    for y in fan:
        ev = MetricEval.at(fld, x, y)  # does not raise
        assert ev.A > 0.0


def test_admissible_fan_honors_condition_cap():
    fld = corpus_field("random_cubic3")
    x = np.zeros(3)
    fan = admissible_fan(fld, x, 8, seed=1, cond_cap=5.0)
    for y in fan:
        ev = MetricEval.at(fld, x, y)
        assert np.linalg.cond(ev.A_ij) <= 5.0


def test_thin_cone_fails_loudly():
    # A = y1^3 in two variables: the y-Hessian diag(6 y1, 0) is singular
    # everywhere, so no direction is ever admissible
    fld = SymTensorField(2, 3, {(0, 0, 0): 1.0},
                         [(-1.0, 1.0), (-1.0, 1.0)])
    with pytest.raises(ConfigurationError, match="admissible"):
        admissible_fan(fld, np.zeros(2), 4, seed=0)


def test_admissible_at_all_checks_every_base():
    fld = corpus_field("quartic2_scaled")
    xs = [np.array([-0.4, 0.0]), np.array([0.4, 0.2])]
    fan = admissible_at_all(fld, xs, 6, seed=3)
    assert fan.shape == (6, 2)
    for y in fan:
        for x in xs:
            MetricEval.at(fld, x, y)


def test_generate_probe_set_shape_and_determinism():
    fld = corpus_field("quartic2")
    ps = generate_probe_set(fld, 3, 5, seed=11)
    assert len(ps.bases) == 3
    assert all(len(f) == 5 for f in ps.fans)
    assert len(ps) == 15
    assert len(list(ps.probes())) == 15

    again = generate_probe_set(fld, 3, 5, seed=11)
    assert np.array_equal(ps.bases, again.bases)
    for f1, f2 in zip(ps.fans, again.fans):
        assert np.array_equal(f1, f2)

    other = generate_probe_set(fld, 3, 5, seed=12)
    assert not np.array_equal(ps.bases, other.bases)


def test_probe_set_iterates_base_major():
    fld = corpus_field("quartic2")
    ps = generate_probe_set(fld, 2, 3, seed=0)
    seen = list(ps.probes())
    assert np.array_equal(seen[0].x, ps.bases[0])
    assert np.array_equal(seen[3].x, ps.bases[1])
    assert np.array_equal(seen[1].y, ps.fans[0][1])


def test_fans_differ_between_bases():
    # per-base streams are split from the master seed independently
    fld = corpus_field("quartic2")
    ps = generate_probe_set(fld, 2, 6, seed=5)
    assert not np.array_equal(ps.fans[0], ps.fans[1])
