import math
import random

import pytest

from kst import (
    BeliefState,
    Responder,
    StopRule,
    choose_final_state,
    make_responder,
    parallel_assessment,
    run_assessment,
    select_question,
    simulate_response,
    update_distribution,
    uniform_distribution,
)
from kst.assessment import extra_problem_metrics, multiplicative_update, phi_coefficient
from kst.errors import (
    BadPartition,
    InteractiveResponderNeedsExternalAnswer,
    ZetaOutOfRange,
)
from kst.probabilistic import ResponseParams, StateDistribution

from conftest import make_space, random_learning_space


@pytest.fixture
def tiny():
    return make_space("a", ["", "a"])


def test_select_question_single_item(tiny):
    belief = BeliefState.start(tiny, seed=1)
    assert select_question(belief) == "a"


def test_select_question_matches_brute_force(ten_item):
    belief = BeliefState.start(ten_item, seed=3)
    chosen = select_question(belief)
    crits = {}
    for q in ten_item.domain.items:
        bit = ten_item.domain.bit(q)
        mass = sum(p for k, p in zip(ten_item.states, belief.dist.probs) if k & bit)
        crits[q] = abs(2 * mass - 1)
    best = min(crits.values())
    assert crits[chosen] <= best + 1e-9


def test_select_question_total_on_point_mass(tiny):
    probs = [0.001, 0.999]
    belief = BeliefState.start(tiny, StateDistribution(tiny, probs), seed=0)
    assert select_question(belief) == "a"


def test_update_formula(tiny):
    belief = BeliefState.start(tiny, seed=0)
    after = update_distribution(belief, "a", 1)
    assert abs(after.dist.probs[0] - 1 / 3) < 1e-12
    assert abs(after.dist.probs[1] - 2 / 3) < 1e-12
    assert after.trial == 2
    assert after.history == (("a", 1),)


def test_update_commutativity(k2):
    rng = random.Random(8)
    for _ in range(30):
        raw = [rng.random() + 0.01 for _ in k2.states]
        total = sum(raw)
        dist = StateDistribution(k2, [x / total for x in raw])
        q1, q2 = rng.sample(list(k2.domain.items), 2)
        r1, r2 = rng.randint(0, 1), rng.randint(0, 1)
        a = multiplicative_update(multiplicative_update(dist, q1, r1, 2.0), q2, r2, 2.0)
        b = multiplicative_update(multiplicative_update(dist, q2, r2, 2.0), q1, r1, 2.0)
        for x, y in zip(a.probs, b.probs):
            assert abs(x - y) < 1e-12


def test_update_preserves_positivity_and_monotone_evidence(ten_item):
    belief = BeliefState.start(ten_item, seed=5)
    rng = random.Random(5)
    for _ in range(50):
        q = rng.choice(ten_item.domain.items)
        before = belief.dist.item_mass(q)
        belief = update_distribution(belief, q, 1)
        assert all(p > 0 for p in belief.dist.probs)
        assert abs(sum(belief.dist.probs) - 1) < 1e-9
        assert belief.dist.item_mass(q) >= before - 1e-12


def test_zeta_validation(tiny):
    belief = BeliefState.start(tiny, zeta=3.0, seed=0)
    assert update_distribution(belief, "a", 1).dist.probs[1] == 0.75
    with pytest.raises(ZetaOutOfRange):
        BeliefState.start(tiny, zeta=1.0, seed=0)
    with pytest.raises(ZetaOutOfRange):
        multiplicative_update(uniform_distribution(tiny), "a", 1, {("a", 1): 0.5})


def test_simulate_response_rules(ten_item):
    d = ten_item.domain
    latent = d.encode("cghij")
    rng = random.Random(0)
    straight = make_responder(ten_item, latent)
    assert simulate_response(straight, "c", rng) == 1
    assert simulate_response(straight, "a", rng) == 0
    with pytest.raises(InteractiveResponderNeedsExternalAnswer):
        simulate_response(Responder(kind="interactive"), "a", rng)
    # beta = 0 collapses to straight
    careless0 = make_responder(ten_item, latent, beta=0.0)
    assert careless0.kind == "straight"
    # beta = 0.1: empirical correct rate near 0.9 for a held item
    careless = make_responder(ten_item, latent, beta=0.1)
    hits = sum(simulate_response(careless, "c", rng) for _ in range(10_000))
    assert abs(hits / 10_000 - 0.9) < 0.02
    assert simulate_response(careless, "a", rng) == 0
    # lucky guesses only in the careless-lucky kind
    lucky = make_responder(ten_item, latent, beta=0.0, eta=0.25)
    wins = sum(simulate_response(lucky, "a", rng) for _ in range(10_000))
    assert abs(wins / 10_000 - 0.25) < 0.02


def test_choose_final_state(tiny, k1):
    probs = [0.0, 1.0]
    belief = BeliefState.start(tiny, StateDistribution(tiny, probs), seed=0)
    assert choose_final_state(belief) == tiny.domain.full_mask
    # exact tie between two states: roughly even split over many draws
    two = make_space("ab", ["", "a", "ab"])
    counts = {}
    for seed in range(10_000):
        dist = StateDistribution(two, [0.5, 0.5, 0.0])
        b = BeliefState.start(two, dist, seed=seed)
        chosen = choose_final_state(b)
        counts[chosen] = counts.get(chosen, 0) + 1
    assert abs(counts[0] / 10_000 - 0.5) < 0.03


def test_two_state_run_converges_fast(tiny):
    r = make_responder(tiny, tiny.domain.full_mask)
    final, fr, transcript = run_assessment(tiny, None, r, seed=4)
    assert final == tiny.domain.full_mask
    assert len(transcript) <= 10


def test_run_assessment_recovers_latent(ten_item):
    master = random.Random(2024)
    hits = 0
    for _ in range(60):
        latent = master.choice(ten_item.states)
        r = make_responder(ten_item, latent)
        final, fr, transcript = run_assessment(
            ten_item, None, r, seed=master.randrange(2 ** 32))
        hits += final == latent
        for entry in transcript:
            assert 0 < entry.max_prob <= 1
    assert hits >= 58


def test_run_assessment_deterministic(ten_item):
    latent = ten_item.domain.encode("cghij")
    r = make_responder(ten_item, latent)
    a = run_assessment(ten_item, None, r, seed=77)
    b = run_assessment(ten_item, None, r, seed=77)
    assert a[0] == b[0] and a[2] == b[2]


def test_careless_recovery_rate(ten_item):
    master = random.Random(55)
    hits = 0
    runs = 100
    for _ in range(runs):
        latent = master.choice(ten_item.states)
        r = make_responder(ten_item, latent, beta=0.1)
        final, _, _ = run_assessment(ten_item, None, r,
                                     seed=master.randrange(2 ** 32))
        hits += final == latent
    assert hits / runs >= 0.8


def test_parallel_single_block_identical(ten_item):
    all_items = list(ten_item.domain.items)
    for seed in (0, 1, 2, 3, 4):
        latent = ten_item.states[(seed * 7) % len(ten_item.states)]
        r = make_responder(ten_item, latent)
        f1, _, t1 = run_assessment(ten_item, None, r, seed=seed)
        f2, t2 = parallel_assessment(ten_item, [all_items], r, seed=seed)
        assert f1 == f2
        assert [(e.trial, e.item, e.response, e.max_prob, e.entropy) for e in t1] \
            == [(e.trial, e.item, e.response, e.max_prob, e.entropy) for e in t2]


def test_parallel_two_blocks_recovery(ten_item):
    master = random.Random(13)
    hits = 0
    runs = 60
    for _ in range(runs):
        latent = master.choice(ten_item.states)
        r = make_responder(ten_item, latent)
        final, _ = parallel_assessment(
            ten_item, [list("abcde"), list("fghij")], r,
            seed=master.randrange(2 ** 32))
        hits += final == latent
    assert hits / runs >= 0.85


def test_parallel_singletons_return_a_state(ten_item):
    latent = ten_item.domain.encode("cghij")
    r = make_responder(ten_item, latent)
    final, _ = parallel_assessment(
        ten_item, [[q] for q in ten_item.domain.items], r, seed=6)
    assert final in ten_item.state_set


def test_bad_partitions(ten_item):
    r = make_responder(ten_item, 0)
    with pytest.raises(BadPartition):
        parallel_assessment(ten_item, [list("abcde")], r)
    with pytest.raises(BadPartition):
        parallel_assessment(ten_item, [list("abcdef"), list("fghij")], r)
    with pytest.raises(BadPartition):
        parallel_assessment(ten_item, [[], list("abcdefghij")], r)


def test_extra_problem_straight(ten_item):
    table, phi = extra_problem_metrics(ten_item, 400, None, seed=10)
    (x, y), (z, w) = table
    assert x + y + z + w == 400
    assert phi > 0.97


def test_extra_problem_beta_lowers_phi(ten_item):
    params = ResponseParams(beta={q: 0.1 for q in ten_item.domain.items})
    _, phi_straight = extra_problem_metrics(ten_item, 300, None, seed=21)
    _, phi_beta = extra_problem_metrics(ten_item, 300, params, seed=21)
    assert phi_beta < phi_straight


def test_phi_algebra():
    assert phi_coefficient(((10, 0), (0, 7))) == 1.0
    assert math.isnan(phi_coefficient(((5, 5), (0, 0))))
    assert phi_coefficient(((5, 5), (5, 5))) == 0.0


def test_stop_rule_validation():
    with pytest.raises(ValueError):
        StopRule(max_prob_threshold=0.0)
    with pytest.raises(ValueError):
        StopRule(max_trials=0)


def test_trial_cap_respected(ten_item):
    latent = ten_item.domain.encode("cghij")
    r = make_responder(ten_item, latent, beta=0.4)
    _, _, transcript = run_assessment(
        ten_item, None, r, stop=StopRule(max_prob_threshold=1.0, max_trials=15),
        seed=0)
    assert len(transcript) == 15
