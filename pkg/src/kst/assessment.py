"""The stochastic assessment machine.

Half-split question selection, multiplicative belief updating, simulated
responders, the session loop, a parallel multi-block variant, and the
extra-problem validation metric.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .errors import (
    BadPartition,
    InteractiveResponderNeedsExternalAnswer,
    ZetaOutOfRange,
)
from .probabilistic import (
    ResponseParams,
    StateDistribution,
    extend_distribution,
    project_distribution,
    uniform_distribution,
)
from .projection import project
from .structures import FringePair, KnowledgeStructure, fringes, sort_key

TIE_TOL = 1e-9


def normalize_zeta(zeta, domain):
    """Turn a scalar or a {(item, response): value} table into a lookup
    function, rejecting any weight not strictly above 1."""
    if isinstance(zeta, (int, float)):
        if zeta <= 1:
            raise ZetaOutOfRange(f"zeta must exceed 1, got {zeta}")
        v = float(zeta)
        return lambda q, r: v
    table = dict(zeta)
    for key, v in table.items():
        if v <= 1:
            raise ZetaOutOfRange(f"zeta must exceed 1, got {v} for {key}")
    default = 2.0

    def lookup(q, r):
        return float(table.get((q, r), default))

    return lookup


@dataclass
class BeliefState:
    """A positive distribution over states plus the trial bookkeeping."""

    dist: StateDistribution
    trial: int
    history: tuple
    rng: random.Random
    zeta: object  # scalar or {(item, response): weight}

    @classmethod
    def start(cls, structure, initial=None, zeta=2.0, seed=0):
        dist = initial if initial is not None else uniform_distribution(structure)
        normalize_zeta(zeta, structure.domain)  # validate early
        return cls(dist=dist, trial=1, history=(), rng=random.Random(seed), zeta=zeta)

    @property
    def structure(self):
        return self.dist.structure

    def max_prob(self) -> float:
        return max(self.dist.probs)


@dataclass(frozen=True)
class Responder:
    """A response source: a simulated student or a placeholder for a human.

    ``latent`` is a state mask laid out on ``domain`` (the parent domain,
    even when blocks of a parallel run ask the questions).
    """

    kind: str  # straight | careless | careless-lucky | interactive
    domain: object = None
    latent: int | None = None
    params: ResponseParams = field(default_factory=ResponseParams)


@dataclass(frozen=True)
class StopRule:
    max_prob_threshold: float = 0.95
    max_trials: int = 200

    def __post_init__(self):
        if not 0 < self.max_prob_threshold <= 1:
            raise ValueError("threshold must lie in (0, 1]")
        if self.max_trials < 1:
            raise ValueError("max_trials must be at least 1")


@dataclass(frozen=True)
class TranscriptEntry:
    trial: int
    item: str
    response: int
    max_prob: float
    entropy: float


def _entropy(probs) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0)


def _pick_uniform(candidates, rng):
    return candidates[0] if len(candidates) == 1 else rng.choice(candidates)


def _select_item(dist: StateDistribution, rng) -> str:
    """Half-split rule: the item whose containing-states mass is nearest 1/2,
    ties broken uniformly."""
    crits = [(q, abs(2 * dist.item_mass(q) - 1)) for q in dist.structure.domain.items]
    best = min(c for _, c in crits)
    return _pick_uniform([q for q, c in crits if c <= best + TIE_TOL], rng)


def select_question(belief: BeliefState) -> str:
    return _select_item(belief.dist, belief.rng)


def multiplicative_update(dist: StateDistribution, q: str, r: int, zeta) -> StateDistribution:
    """Reweight states consistent with the response by zeta_{q,r}."""
    zf = normalize_zeta(zeta, dist.structure.domain)
    w = zf(q, int(r))
    bit = dist.structure.domain.bit(q)
    weights = [
        w if (1 if k & bit else 0) == int(r) else 1.0
        for k in dist.structure.states
    ]
    total = sum(wt * p for wt, p in zip(weights, dist.probs))
    return StateDistribution(dist.structure, [wt * p / total for wt, p in zip(weights, dist.probs)])


def update_distribution(belief: BeliefState, q: str, r: int) -> BeliefState:
    new = multiplicative_update(belief.dist, q, int(r), belief.zeta)
    return replace(belief, dist=new, trial=belief.trial + 1,
                   history=belief.history + ((q, int(r)),))


def simulate_response(responder: Responder, q: str, rng) -> int:
    if responder.kind == "interactive":
        raise InteractiveResponderNeedsExternalAnswer(
            "interactive responders take answers from outside the engine")
    if responder.latent is None or responder.domain is None:
        raise InteractiveResponderNeedsExternalAnswer("responder has no latent state")
    knows = bool(responder.latent & responder.domain.bit(q))
    if responder.kind == "straight":
        return 1 if knows else 0
    if responder.kind == "careless":
        if knows:
            return 0 if rng.random() < responder.params.beta_of(q) else 1
        return 0
    if responder.kind == "careless-lucky":
        if knows:
            return 0 if rng.random() < responder.params.beta_of(q) else 1
        return 1 if rng.random() < responder.params.eta_of(q) else 0
    raise ValueError(f"unknown responder kind {responder.kind!r}")


def _choose_final(dist: StateDistribution, rng) -> int:
    top = max(dist.probs)
    near = [k for k, p in zip(dist.structure.states, dist.probs) if p >= top - TIE_TOL]
    return _pick_uniform(near, rng)


def choose_final_state(belief: BeliefState) -> int:
    return _choose_final(belief.dist, belief.rng)


def run_assessment(structure: KnowledgeStructure, initial: StateDistribution | None,
                   responder: Responder, stop: StopRule = StopRule(),
                   zeta=2.0, seed: int = 0):
    """Full single-space session: returns (final state, its fringes, transcript)."""
    belief = BeliefState.start(structure, initial, zeta=zeta, seed=seed)
    transcript: list[TranscriptEntry] = []
    while belief.max_prob() < stop.max_prob_threshold and len(transcript) < stop.max_trials:
        q = _select_item(belief.dist, belief.rng)
        r = simulate_response(responder, q, belief.rng)
        belief = update_distribution(belief, q, r)
        transcript.append(TranscriptEntry(
            trial=belief.trial - 1, item=q, response=r,
            max_prob=belief.max_prob(), entropy=_entropy(belief.dist.probs)))
    final = _choose_final(belief.dist, belief.rng)
    return final, fringes(structure, final), transcript


def _validate_partition(structure: KnowledgeStructure, partition):
    blocks = [tuple(b) for b in partition]
    seen = set()
    for b in blocks:
        if not b:
            raise BadPartition("blocks must be non-empty")
        for q in b:
            structure.domain.bit(q)
            if q in seen:
                raise BadPartition(f"item {q!r} appears in two blocks")
            seen.add(q)
    if seen != set(structure.domain.items):
        raise BadPartition("blocks must cover the whole domain")
    return blocks


def parallel_assessment(structure: KnowledgeStructure, partition, responder: Responder,
                        stop: StopRule = StopRule(), zeta=2.0, seed: int = 0):
    """Multi-block variant: each block carries a belief over the projection
    onto its items; per trial the globally most informative item is asked,
    its block updates directly and every other block propagates through an
    extend / update / re-project step on the projection including the item.

    Returns (final state of the parent structure, transcript).  With a single
    block covering the domain the run is identical to run_assessment.
    """
    blocks = _validate_partition(structure, partition)
    parent = structure.domain
    rng = random.Random(seed)
    block_structs = []
    for b in blocks:
        if set(b) == set(parent.items):
            block_structs.append(structure)
        else:
            block_structs.append(project(structure, b).structure)
    beliefs = [uniform_distribution(s) for s in block_structs]
    owner = {q: i for i, b in enumerate(blocks) for q in b}
    # each distinct (item, response) observation is propagated into a
    # non-owning block at most once; a repeat carries no new cross-block
    # information and re-applying it over-counts the correlation
    propagated = [set() for _ in blocks]
    transcript: list[TranscriptEntry] = []

    def all_confident():
        return all(max(d.probs) >= stop.max_prob_threshold for d in beliefs)

    while not all_confident() and len(transcript) < stop.max_trials:
        crits = []
        for i, d in enumerate(beliefs):
            for q in d.structure.domain.items:
                crits.append((q, abs(2 * d.item_mass(q) - 1)))
        best = min(c for _, c in crits)
        q = _pick_uniform([it for it, c in crits if c <= best + TIE_TOL], rng)
        r = simulate_response(responder, q, rng)
        i = owner[q]
        beliefs[i] = multiplicative_update(beliefs[i], q, r, zeta)
        for j, b in enumerate(blocks):
            if j == i or (q, r) in propagated[j]:
                continue
            propagated[j].add((q, r))
            ext_items = [it for it in parent.items if it in set(b) | {q}]
            if set(ext_items) == set(parent.items):
                ext_struct = structure
            else:
                ext_struct = project(structure, ext_items).structure
            lifted = extend_distribution(ext_struct, b, beliefs[j])
            lifted = multiplicative_update(lifted, q, r, zeta)
            beliefs[j] = project_distribution(lifted, b)
        transcript.append(TranscriptEntry(
            trial=len(transcript) + 1, item=q, response=r,
            max_prob=max(beliefs[i].probs), entropy=_entropy(beliefs[i].probs)))
    union = 0
    for d in beliefs:
        part = _choose_final(d, rng)
        union |= parent.encode(d.structure.domain.decode(part))
    final = min(structure.states, key=lambda k: ((k ^ union).bit_count(), sort_key(k)))
    return final, transcript


def make_responder(structure: KnowledgeStructure, latent: int,
                   beta: float = 0.0, eta: float = 0.0) -> Responder:
    """Convenience factory choosing the simplest kind for the parameters."""
    d = structure.domain
    params = ResponseParams(
        beta={q: beta for q in d.items} if beta else {},
        eta={q: eta for q in d.items} if eta else {},
    )
    if eta:
        kind = "careless-lucky"
    elif beta:
        kind = "careless"
    else:
        kind = "straight"
    return Responder(kind=kind, domain=d, latent=latent, params=params)


def extra_problem_metrics(structure: KnowledgeStructure, runs: int,
                          params: ResponseParams | None = None,
                          seed: int = 0, stop: StopRule = StopRule(),
                          zeta=2.0):
    """Validation through one extra response per simulated assessment.

    Each run draws a latent state, runs a normal assessment, then poses one
    uniformly chosen item again as an extra problem whose response never
    feeds the updating.  The response is cross-tabulated against membership
    in the uncovered final state:

        x = in state, correct    y = in state, false
        z = out of state, correct    w = out of state, false

    Returns (((x, y), (z, w)), phi).
    """
    params = params or ResponseParams()
    master = random.Random(seed)
    x = y = z = w = 0
    for _ in range(max(1, runs)):
        latent = master.choice(structure.states)
        beta = params.beta_of(structure.domain.items[0]) if params.beta else 0.0
        eta = params.eta_of(structure.domain.items[0]) if params.eta else 0.0
        responder = make_responder(structure, latent, beta=beta, eta=eta)
        final, _, _ = run_assessment(structure, None, responder, stop=stop,
                                     zeta=zeta, seed=master.randrange(2 ** 32))
        extra_item = master.choice(structure.domain.items)
        r = simulate_response(responder, extra_item, master)
        inside = bool(final & structure.domain.bit(extra_item))
        if inside and r == 1:
            x += 1
        elif inside:
            y += 1
        elif r == 1:
            z += 1
        else:
            w += 1
    phi = phi_coefficient(((x, y), (z, w)))
    return ((x, y), (z, w)), phi


def phi_coefficient(table) -> float:
    (x, y), (z, w) = table
    denom = (x + y) * (z + w) * (x + z) * (y + w)
    if denom == 0:
        return float("nan")
    return (x * w - y * z) / math.sqrt(denom)
