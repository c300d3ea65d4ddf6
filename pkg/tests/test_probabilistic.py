import random

import pytest

from kst import (
    StateDistribution,
    extend_distribution,
    project_distribution,
    uniform_distribution,
)
from kst.errors import TraceMismatch
from kst.probabilistic import ResponseParams

from conftest import make_space, random_learning_space


def test_uniform(k1, ten_item):
    u = uniform_distribution(k1)
    assert u.probs == [0.125] * 8
    u10 = uniform_distribution(ten_item)
    assert len(u10.probs) == 34
    assert abs(sum(u10.probs) - 1) < 1e-12
    tiny = uniform_distribution(make_space("ab", ["", "ab"]))
    assert tiny.probs == [0.5, 0.5]


def test_distribution_validation(k1):
    with pytest.raises(ValueError):
        StateDistribution(k1, [1.0])
    with pytest.raises(ValueError):
        StateDistribution(k1, [0.5] * 8)
    with pytest.raises(ValueError):
        StateDistribution(k1, [-0.125] + [0.125] * 6 + [0.375])


def test_projected_uniform_matches_class_sizes(projection_space):
    # class sizes over {c,d}: trace {} has 4 members, {d} and {c,d} have 2
    p = project_distribution(uniform_distribution(projection_space), "cd")
    sub = p.structure.domain
    assert abs(p.prob_of(sub.encode("")) - 0.5) < 1e-12
    assert abs(p.prob_of(sub.encode("d")) - 0.25) < 1e-12
    assert abs(p.prob_of(sub.encode("cd")) - 0.25) < 1e-12


def test_point_mass_projects_to_point_mass(projection_space):
    d = projection_space.domain
    k = d.encode("abd")
    probs = [1.0 if s == k else 0.0 for s in projection_space.states]
    p = project_distribution(StateDistribution(projection_space, probs), "cd")
    assert abs(p.prob_of(p.structure.domain.encode("d")) - 1.0) < 1e-12


def test_extension_splits_mass_uniformly(projection_space):
    proj = project_distribution(uniform_distribution(projection_space), "cd")
    sub = proj.structure.domain
    point = StateDistribution(proj.structure, [
        1.0 if s == sub.encode("d") else 0.0 for s in proj.structure.states])
    ext = extend_distribution(projection_space, "cd", point)
    d = projection_space.domain
    assert abs(ext.prob_of(d.encode("ad")) - 0.5) < 1e-12
    assert abs(ext.prob_of(d.encode("abd")) - 0.5) < 1e-12
    assert abs(sum(ext.probs) - 1) < 1e-12


def test_project_extend_project_is_identity():
    rng = random.Random(31)
    for _ in range(25):
        s = random_learning_space(rng, rng.randint(3, 5))
        items = list(s.domain.items)
        sub = rng.sample(items, rng.randint(1, len(items) - 1))
        raw = [rng.random() for _ in s.states]
        total = sum(raw)
        dist = StateDistribution(s, [x / total for x in raw])
        p = project_distribution(dist, sub)
        back = project_distribution(extend_distribution(s, sub, p), sub)
        assert back.structure == p.structure
        for a, b in zip(p.probs, back.probs):
            assert abs(a - b) < 1e-12


def test_extend_then_project_not_identity_in_general(projection_space):
    d = projection_space.domain
    probs = [0.0] * len(projection_space.states)
    probs[list(projection_space.states).index(d.encode("ad"))] = 1.0
    dist = StateDistribution(projection_space, probs)
    p = project_distribution(dist, "cd")
    roundtrip = extend_distribution(projection_space, "cd", p)
    assert roundtrip.probs != dist.probs  # mass spread over the {d}-class


def test_trace_mismatch(projection_space, k1):
    foreign = project_distribution(uniform_distribution(k1), "ab")
    with pytest.raises(TraceMismatch):
        extend_distribution(projection_space, "cd", foreign)


def test_response_params_validation():
    with pytest.raises(ValueError):
        ResponseParams(beta={"a": 1.5})
    p = ResponseParams(beta={"a": 0.1})
    assert p.beta_of("a") == 0.1
    assert p.beta_of("b") == 0.0
    assert p.eta_of("a") == 0.0
