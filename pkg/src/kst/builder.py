"""Query-driven construction of knowledge and learning spaces.

Entailment machinery, the Block-1 pairwise build, hanging-state guards for
the adapted routine, and the gradation-based largest-learning-subspace
machinery behind the adjusted routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import ItemInAntecedent, NotLearningSpace, NotUnionClosed, OracleFailure
from .structures import (
    Domain,
    KnowledgeStructure,
    classify,
    fringes,
    is_union_closed,
    sort_key,
)
from .base_surmise import QuasiOrder, quasi_order_to_space


@dataclass
class QueryRelation:
    """Positive and negative answers to queries (antecedent, item).

    Antecedents are state masks; a pair whose item lies inside its antecedent
    is never stored (its answer is trivially affirmative)."""

    domain: Domain
    positives: set = field(default_factory=set)
    negatives: set = field(default_factory=set)

    def add(self, a_mask: int, q: str, answer: bool):
        if a_mask & self.domain.bit(q):
            raise ItemInAntecedent(f"item {q!r} lies in the antecedent")
        pair = (a_mask, q)
        (self.positives if answer else self.negatives).add(pair)
        if pair in self.positives and pair in self.negatives:
            raise OracleFailure(f"contradictory answers recorded for {pair}")


@dataclass
class QueryOracle:
    """An answer source for queries; ``answer_fn(domain, a_mask, q) -> bool``.

    Every answer is logged to ``answered`` as
    (antecedent items, item, answer, source)."""

    kind: str
    answer_fn: object
    answered: list = field(default_factory=list)

    def ask(self, domain: Domain, a_mask: int, q: str, source: str = "asked") -> bool:
        if a_mask & domain.bit(q):
            raise ItemInAntecedent(f"item {q!r} lies in the antecedent")
        ans = bool(self.answer_fn(domain, a_mask, q))
        self.answered.append((domain.decode(a_mask), q, ans, source))
        return ans

    def log_inferred(self, domain: Domain, a_mask: int, q: str, answer: bool):
        self.answered.append((domain.decode(a_mask), q, answer, "inferred"))


@dataclass
class BuildState:
    """Where a query run currently stands."""

    current: KnowledgeStructure
    pending: list = field(default_factory=list)
    audit: list = field(default_factory=list)


def _entails(space: KnowledgeStructure, a_mask: int, bit: int) -> bool:
    """Failing everything in A forces failing q, judged against the space."""
    return all(bool(k & a_mask) for k in space.states if k & bit)


def truthful_oracle(space: KnowledgeStructure) -> QueryOracle:
    def answer(domain, a_mask, q):
        return _entails(space, a_mask, space.domain.bit(q))
    return QueryOracle("truthful", answer)


def all_negative_oracle() -> QueryOracle:
    return QueryOracle("scripted", lambda domain, a_mask, q: False)


def scripted_oracle(domain: Domain, script, default: bool = False) -> QueryOracle:
    """Answers from a {(frozenset of items, item): bool} table."""
    table = {(frozenset(a), q): bool(v) for (a, q), v in dict(script).items()}

    def answer(d, a_mask, q):
        return table.get((frozenset(d.decode(a_mask)), q), default)

    return QueryOracle("scripted", answer)


def data_oracle_from_transcripts(transcripts, theta: float,
                                 min_count: int = 30) -> QueryOracle:
    """Empirical oracle: positive exactly when the observed probability of
    failing q given failure of every antecedent item exceeds theta, with at
    least min_count supporting observations (fewer means a negative)."""
    if not 0 < theta < 1:
        raise ValueError("theta must lie strictly between 0 and 1")
    rows = [dict(t) for t in transcripts]

    def answer(domain, a_mask, q):
        ants = domain.decode(a_mask)
        support = [r for r in rows if all(r.get(a, 1) == 0 for a in ants)]
        if len(support) < min_count:
            return False
        failed = sum(1 for r in support if r.get(q, 1) == 0)
        return failed / len(support) > theta

    return QueryOracle("data", answer)


def entailed_space(domain: Domain, rel: QueryRelation) -> KnowledgeStructure:
    """All subsets K passing, for every positive (A, q): A∩K = ∅ ⟹ q ∉ K.
    Always a knowledge space. Exponential in |Q|."""
    pos = [(a, domain.bit(q)) for a, q in rel.positives]
    states = []
    for k in range(domain.full_mask + 1):
        if all(k & a or not k & qb for a, qb in pos):
            states.append(k)
    return KnowledgeStructure(domain, states)


def space_to_entailment(space: KnowledgeStructure) -> QueryRelation:
    """Every positive pair (B, r) the space supports, over all non-empty
    antecedents avoiding r. Exponential in |Q|; the truthful oracle's table."""
    if not is_union_closed(space):
        raise NotUnionClosed("entailment tables are defined for knowledge spaces")
    domain = space.domain
    rel = QueryRelation(domain)
    for a in range(1, domain.full_mask + 1):
        for i in range(domain.size):
            bit = 1 << i
            if a & bit:
                continue
            if _entails(space, a, bit):
                rel.positives.add((a, domain.items[i]))
    return rel


def removal_set(family: KnowledgeStructure, a_mask: int, q: str) -> list[int]:
    """The states a positive answer to (A, q) disqualifies: those disjoint
    from A yet containing q."""
    bit = family.domain.bit(q)
    if a_mask & bit:
        raise ItemInAntecedent(f"item {q!r} lies in the antecedent")
    return [k for k in family.states if not k & a_mask and k & bit]


def hanging_states(structure: KnowledgeStructure):
    """Non-empty states with an empty inner fringe, and states of size at
    least two whose inner fringe is a single item."""
    hanging = []
    almost = []
    for k in structure.states:
        if not k:
            continue
        inner = fringes(structure, k).inner
        if inner == 0:
            hanging.append(k)
        elif k.bit_count() >= 2 and inner.bit_count() == 1:
            almost.append(k)
    return hanging, almost


def adapted_guard(space: KnowledgeStructure, a_mask: int, q: str):
    """Whether applying the positive (A, q) keeps the learning-space axioms:
    allowed unless some almost-hanging state L has A∩L equal to L's inner
    fringe and contains q.  Returns (allowed, witness)."""
    if not classify(space).learning_space:
        raise NotLearningSpace("the adapted guard presumes a learning space")
    bit = space.domain.bit(q)
    if a_mask & bit:
        raise ItemInAntecedent(f"item {q!r} lies in the antecedent")
    _, almost = hanging_states(space)
    for l in almost:
        if l & bit and (a_mask & l) == fringes(space, l).inner:
            return False, l
    return True, None


def block1_build(domain: Domain, oracle: QueryOracle) -> KnowledgeStructure:
    """Pairwise query block: ask ({r}, q) for item pairs, skipping any pair
    already forced by transitivity of the positives collected so far, then
    emit the space of all down-closed sets of the transitive closure."""
    n = domain.size
    pos = [[i == j for j in range(n)] for i in range(n)]

    def closure():
        c = [row[:] for row in pos]
        for m in range(n):
            for i in range(n):
                if c[i][m]:
                    for j in range(n):
                        if c[m][j]:
                            c[i][j] = True
        return c

    for ri in range(n):
        for qi in range(n):
            if ri == qi:
                continue
            a_mask = 1 << ri
            q = domain.items[qi]
            if closure()[ri][qi]:
                oracle.log_inferred(domain, a_mask, q, True)
                pos[ri][qi] = True
                continue
            if oracle.ask(domain, a_mask, q):
                pos[ri][qi] = True
    c = closure()
    order = QuasiOrder(domain, tuple(tuple(row) for row in c))
    return quasi_order_to_space(order)


def _antecedents(domain: Domain, size: int):
    for combo in combinations(range(domain.size), size):
        yield sum(1 << i for i in combo)


def adapted_query_run(domain: Domain, oracle: QueryOracle,
                      block_limit: int = 2) -> BuildState:
    """Guarded removal run: Block 1 first, then antecedents of growing size.
    Positives blocked by the guard wait in a pending queue and are retried
    in order after every successful removal.  The current structure is a
    learning space after every step."""
    current = block1_build(domain, oracle)
    state = BuildState(current=current)

    def try_apply(a_mask, q) -> bool:
        doomed = removal_set(state.current, a_mask, q)
        if not doomed:
            return True
        allowed, witness = adapted_guard(state.current, a_mask, q)
        if not allowed:
            return False
        state.current = KnowledgeStructure(
            domain, set(state.current.states) - set(doomed))
        state.audit.append((domain.decode(a_mask), q, [domain.decode(k) for k in doomed]))
        return True

    def drain_pending():
        progressed = True
        while progressed:
            progressed = False
            still = []
            for a_mask, q in state.pending:
                if try_apply(a_mask, q):
                    progressed = True
                else:
                    still.append((a_mask, q))
            state.pending = still

    for size in range(2, block_limit + 1):
        for a_mask in _antecedents(domain, size):
            for q in domain.items:
                if a_mask & domain.bit(q):
                    continue
                if not removal_set(state.current, a_mask, q):
                    continue  # answer can change nothing; skip the expert
                if oracle.ask(domain, a_mask, q):
                    if try_apply(a_mask, q):
                        drain_pending()
                    else:
                        state.pending.append((a_mask, q))
    drain_pending()
    return state


def gradations(structure: KnowledgeStructure, limit: int | None = None):
    """Maximal unit-step chains of states from the empty set to the full
    domain. Returns (chains, exact count); at most limit chains are listed."""
    from .strings import learning_strings

    words, total = learning_strings(structure, limit=limit)
    chains = []
    for w in words:
        masks = [0]
        m = 0
        for q in w:
            m |= structure.domain.bit(q)
            masks.append(m)
        chains.append(tuple(masks))
    return chains, total


def largest_learning_subspace(space: KnowledgeStructure):
    """The states lying on at least one gradation: forward-reachable from ∅
    and backward-reachable from Q through unit steps.  Returns the largest
    included learning space, or None when no gradation exists."""
    if not is_union_closed(space):
        raise NotUnionClosed("the construction presumes a knowledge space")
    sset = space.state_set
    n = space.domain.size

    def reach(start, up):
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for k in frontier:
                for i in range(n):
                    bit = 1 << i
                    if up:
                        cand = k | bit
                        ok = not k & bit
                    else:
                        cand = k & ~bit
                        ok = bool(k & bit)
                    if ok and cand in sset and cand not in seen:
                        seen.add(cand)
                        nxt.append(cand)
            frontier = nxt
        return seen

    if 0 not in sset or space.domain.full_mask not in sset:
        return None
    good = reach(0, up=True) & reach(space.domain.full_mask, up=False)
    if not good or space.domain.full_mask not in good:
        return None
    return KnowledgeStructure(space.domain, good)


def adjusted_query_run(domain: Domain, oracle: QueryOracle,
                       block_limit: int | None = None) -> BuildState:
    """Exit-on-failure removal run: start from the full power set, and for
    every positive answer strip the removal set, replace the result by its
    largest included learning space, and stop delivering the last valid
    learning space if none exists."""
    if block_limit is None:
        block_limit = max(1, domain.size - 1)
    current = KnowledgeStructure(domain, range(domain.full_mask + 1))
    state = BuildState(current=current)
    for size in range(1, block_limit + 1):
        for a_mask in _antecedents(domain, size):
            for q in domain.items:
                if a_mask & domain.bit(q):
                    continue
                doomed = removal_set(state.current, a_mask, q)
                if not doomed:
                    continue
                if not oracle.ask(domain, a_mask, q):
                    continue
                shrunk = KnowledgeStructure(
                    domain, set(state.current.states) - set(doomed))
                sub = largest_learning_subspace(shrunk)
                if sub is None:
                    state.audit.append((domain.decode(a_mask), q, "fatal: no gradation left"))
                    return state
                state.audit.append((domain.decode(a_mask), q,
                                    [domain.decode(k) for k in doomed]))
                state.current = sub
    return state
