"""Projective set margins, rejection samplers, and the JSON wire format."""

import numpy as np
import pytest

from anosovcert.linalg import Subspace, proj_metric
from anosovcert.projsets import (
    BallSet,
    SetValidationError,
    SubspaceComplementSet,
    UnionSet,
    set_from_json,
)

E3 = np.eye(3)


def seeded():
    return np.random.default_rng(915)


# -- margins ---------------------------------------------------------------------

def test_ball_margin_exact_values():
    ball = BallSet(E3[0], 0.3)
    assert ball.margin(E3[0]) == pytest.approx(0.3)
    assert ball.margin(E3[1]) == pytest.approx(0.3 - 1.0)
    assert ball.margin(-5.0 * E3[0]) == pytest.approx(0.3)
    v = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    assert ball.margin(v) == pytest.approx(0.3 - np.sqrt(0.5))
    assert ball.contains(E3[0]) and not ball.contains(E3[1])


def test_ball_margin_matches_proj_metric(rng):
    center = rng.standard_normal(4)
    ball = BallSet(center, 0.25)
    for _ in range(50):
        x = rng.standard_normal(4)
        expected = 0.25 - proj_metric(x, center)
        assert ball.margin(x / np.linalg.norm(x)) == pytest.approx(expected, abs=1e-12)


def test_complement_margin_exact_values():
    comp = SubspaceComplementSet(Subspace(E3[:, :2]), 0.4)
    assert comp.margin(E3[2]) == pytest.approx(1.0 - 0.4)
    assert comp.margin(E3[0]) == pytest.approx(-0.4)
    diag = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    assert comp.margin(diag) == pytest.approx(np.sqrt(0.5) - 0.4)


def test_union_margin_is_best_part():
    u = UnionSet([BallSet(E3[0], 0.2), BallSet(E3[1], 0.5)])
    assert u.margin(E3[0]) == pytest.approx(0.2)
    assert u.margin(E3[1]) == pytest.approx(0.5)
    assert u.margin(E3[2]) == pytest.approx(-0.5)


# -- samplers ---------------------------------------------------------------------

def test_ball_sampler_stays_inside():
    ball = BallSet(np.array([1.0, 2.0, -1.0]), 0.15)
    pts = ball.sample(600, seeded())
    assert pts.shape == (600, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert np.min(ball.margin_batch(pts)) >= -1e-12


def test_ball_sampler_complex_field():
    center = np.array([1.0 + 1.0j, 0.0, 0.5j])
    ball = BallSet(center, 0.2)
    pts = ball.sample(300, seeded())
    assert np.iscomplexobj(pts)
    assert np.min(ball.margin_batch(pts)) >= -1e-12


def test_complement_sampler_stays_inside():
    comp = SubspaceComplementSet(Subspace(E3[:, :1]), 0.5)
    pts = comp.sample(400, seeded())
    assert np.min(comp.margin_batch(pts)) >= 0.0


def test_complement_sampler_raises_when_set_too_small():
    # lines within 1e-8 of the normal direction of a plane in R^3 are far too
    # rare for rejection sampling to find
    comp = SubspaceComplementSet(Subspace(E3[:, :2]), 1.0 - 1e-8)
    with pytest.raises(SetValidationError):
        comp.sample(10, seeded())


def test_union_sampler_covers_all_parts():
    a = BallSet(E3[0], 0.1)
    b = BallSet(E3[1], 0.1)
    u = UnionSet([a, b])
    pts = u.sample(512, seeded())
    in_a = a.margin_batch(pts) >= -1e-12
    in_b = b.margin_batch(pts) >= -1e-12
    assert np.all(in_a | in_b)
    assert in_a.sum() > 100 and in_b.sum() > 100


@pytest.mark.parametrize("make", [
    lambda: BallSet(np.array([1.0, 2.0, -1.0]), 0.15),
    lambda: SubspaceComplementSet(Subspace(E3[:, :1]), 0.5),
    lambda: UnionSet([BallSet(E3[0], 0.1), BallSet(E3[1], 0.3)]),
])
def test_sampler_prefixes_are_request_independent(make):
    short = make().sample(100, seeded())
    long = make().sample(700, seeded())
    assert np.array_equal(short, long[:100])


# -- validation ---------------------------------------------------------------------

def test_ball_validation():
    with pytest.raises(SetValidationError):
        BallSet(np.zeros(3), 0.2)
    with pytest.raises(SetValidationError):
        BallSet(E3[0], 0.0)
    with pytest.raises(SetValidationError):
        BallSet(E3[0], 1.0)
    with pytest.raises(SetValidationError):
        BallSet(np.eye(2), 0.2)


def test_complement_validation():
    with pytest.raises(SetValidationError):
        SubspaceComplementSet(Subspace(E3), 0.3)
    with pytest.raises(SetValidationError):
        SubspaceComplementSet(Subspace(E3[:, :1]), 0.0)


def test_union_validation():
    with pytest.raises(SetValidationError):
        UnionSet([])
    with pytest.raises(SetValidationError):
        UnionSet([BallSet(E3[0], 0.1), BallSet(np.eye(4)[0], 0.1)])
    with pytest.raises(SetValidationError):
        UnionSet([BallSet(E3[0], 0.1),
                  BallSet(np.array([1.0j, 0.0, 0.0]), 0.1)])


# -- JSON --------------------------------------------------------------------------

def test_json_round_trips():
    sets = [
        BallSet(np.array([3.0, 4.0, 0.0]), 0.15),
        SubspaceComplementSet(Subspace(E3[:, :2]), 0.4),
        UnionSet([BallSet(E3[0], 0.1),
                  SubspaceComplementSet(Subspace(E3[:, :1]), 0.3)]),
    ]
    probe = np.array([0.6, 0.0, 0.8])
    for s in sets:
        back = set_from_json(s.to_json())
        assert type(back) is type(s)
        assert back.margin(probe) == pytest.approx(s.margin(probe), abs=1e-15)


def test_json_rejects_malformed():
    with pytest.raises(SetValidationError):
        set_from_json({"center": [1, 0], "radius": 0.1})
    with pytest.raises(SetValidationError):
        set_from_json({"type": "pyramid"})
    with pytest.raises(SetValidationError):
        set_from_json([1, 2, 3])
