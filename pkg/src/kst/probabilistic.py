"""Probability distributions over states: uniform start, projection onto a
subdomain and uniform extension back, plus response error parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TraceMismatch
from .projection import _subdomain_masks, _reencode, project
from .structures import KnowledgeStructure


@dataclass
class StateDistribution:
    """Probabilities aligned with the canonical state order of a structure."""

    structure: KnowledgeStructure
    probs: list[float]

    def __post_init__(self):
        if len(self.probs) != len(self.structure.states):
            raise ValueError("probability vector length must match the state count")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be non-negative")
        total = sum(self.probs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    def prob_of(self, mask: int) -> float:
        return self.probs[self.structure.states.index(mask)]

    def item_mass(self, item: str) -> float:
        """Total probability of the states containing the item."""
        bit = self.structure.domain.bit(item)
        return sum(p for k, p in zip(self.structure.states, self.probs) if k & bit)

    def renormalized(self) -> "StateDistribution":
        total = sum(self.probs)
        return StateDistribution(self.structure, [p / total for p in self.probs])


@dataclass(frozen=True)
class ResponseParams:
    """Careless-error and lucky-guess probabilities per item."""

    beta: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)

    def __post_init__(self):
        for table in (self.beta, self.eta):
            for q, v in table.items():
                if not 0 <= v <= 1:
                    raise ValueError(f"probability for {q!r} out of [0,1]: {v}")

    def beta_of(self, q: str) -> float:
        return self.beta.get(q, 0.0)

    def eta_of(self, q: str) -> float:
        return self.eta.get(q, 0.0)


def uniform_distribution(structure: KnowledgeStructure) -> StateDistribution:
    n = len(structure.states)
    return StateDistribution(structure, [1.0 / n] * n)


def project_distribution(dist: StateDistribution, q_prime) -> StateDistribution:
    """Aggregate the mass of every state onto its trace on Q'."""
    proj = project(dist.structure, q_prime)
    acc = {k: 0.0 for k in proj.structure.states}
    for trace, p in zip(proj.trace_of, dist.probs):
        acc[trace] += p
    out = StateDistribution(proj.structure, [acc[k] for k in proj.structure.states])
    return out.renormalized()


def extend_distribution(structure: KnowledgeStructure, q_prime,
                        p_prime: StateDistribution) -> StateDistribution:
    """Uniform extension: the mass of each trace is split evenly over the
    states sharing that trace."""
    sub, qmask = _subdomain_masks(structure, q_prime)
    parent = structure.domain
    trace_prob = dict(zip(p_prime.structure.states, p_prime.probs))
    class_size: dict[int, int] = {}
    traces = []
    for k in structure.states:
        t = _reencode(parent, sub, k & qmask)
        traces.append(t)
        class_size[t] = class_size.get(t, 0) + 1
    for t in trace_prob:
        if t not in class_size:
            raise TraceMismatch(
                f"{p_prime.structure.domain.decode(t)} is not a trace of any state")
    extra = set(class_size) - set(trace_prob)
    if extra:
        raise TraceMismatch(f"no probability given for trace {sub.decode(extra.pop())}")
    probs = [trace_prob[t] / class_size[t] for t in traces]
    return StateDistribution(structure, probs).renormalized()
