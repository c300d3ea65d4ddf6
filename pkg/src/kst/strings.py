"""Learning words and strings: recognition, enumeration with exact counts,
the two axiomatic characterizations, string-encoded spaces and greedy covers.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import (
    MalformedString,
    MalformedWord,
    NotLearningSpace,
    RepeatedItem,
    UnknownItem,
)
from .structures import Domain, KnowledgeStructure, classify
from .base_surmise import span


def _validate_word(domain: Domain, word) -> list[str]:
    word = list(word)
    seen = set()
    for q in word:
        if q not in domain.index:
            raise UnknownItem(f"item {q!r} not in domain")
        if q in seen:
            raise RepeatedItem(f"item {q!r} repeated in word")
        seen.add(q)
    return word


def _validate_string(domain: Domain, s) -> list[str]:
    s = list(s)
    if sorted(s) != sorted(domain.items):
        raise MalformedString(f"{s!r} is not a permutation of the domain")
    return s


def is_learning_word(structure: KnowledgeStructure, word) -> bool:
    """True iff every prefix of the word determines a state."""
    word = _validate_word(structure.domain, word)
    mask = 0
    for q in word:
        mask |= structure.domain.bit(q)
        if mask not in structure.state_set:
            return False
    return True


def _step_graph(structure: KnowledgeStructure):
    """For each state, the items whose addition stays in the family."""
    d = structure.domain
    steps = {}
    for k in structure.states:
        outs = []
        for i in range(d.size):
            bit = 1 << i
            if not k & bit and k | bit in structure.state_set:
                outs.append((d.items[i], k | bit))
        steps[k] = outs
    return steps


def count_full_paths(structure: KnowledgeStructure) -> int:
    """Number of unit-step paths from the empty state to the full domain
    through states; equals the number of learning strings and of gradations."""
    steps = _step_graph(structure)
    full = structure.domain.full_mask
    memo = {full: 1}

    def count(k):
        if k not in memo:
            memo[k] = sum(count(nxt) for _, nxt in steps[k])
        return memo[k]

    return count(0) if 0 in structure.state_set else 0


def learning_strings(structure: KnowledgeStructure, limit: int | None = None):
    """Enumerate full-length learning words in lexicographic item order.

    Returns ``(words, total)``; at most ``limit`` words are emitted but the
    total is always the exact count (cheap through memoized path counts).
    """
    total = count_full_paths(structure)
    steps = _step_graph(structure)
    full = structure.domain.full_mask
    out: list[tuple[str, ...]] = []

    def dfs(k, prefix):
        if limit is not None and len(out) >= limit:
            return
        if k == full:
            out.append(tuple(prefix))
            return
        for q, nxt in steps[k]:
            dfs(nxt, prefix + [q])

    if 0 in structure.state_set:
        dfs(0, [])
    return out, total


def check_string_axioms(domain: Domain, strings):
    """Verify the three string-collection conditions; returns
    (ok, failing_condition, witness)."""
    strings = [tuple(_validate_string(domain, s)) for s in strings]
    m = domain.size
    # (i) every item appears in some string
    if not strings:
        return False, "i", None
    prefixes = {s[:i] for s in strings for i in range(m + 1)}
    # (ii) equal (k-1)-prefix sets diverging at position k
    for u in strings:
        for v in strings:
            for k in range(1, m):
                if set(u[:k - 1]) == set(v[:k - 1]) and u[k - 1] != v[k - 1]:
                    want = u[:k] + (v[k - 1],)
                    if want not in prefixes:
                        return False, "ii", {"k": k, "u": u[:k], "v": v[:k]}
    # (iii) one-item overhang of a v-prefix over a u-prefix
    for u in strings:
        for v in strings:
            for k in range(0, m):
                diff = set(v[:k + 1]) - set(u[:k])
                if len(diff) == 1:
                    q = diff.pop()
                    if u[:k] + (q,) not in prefixes:
                        return False, "iii", {"k": k, "u": u[:k], "v": v[:k + 1], "q": q}
    return True, None, None


def check_word_axioms(domain: Domain, words):
    """Verify the three word-collection conditions; returns
    (ok, failing_condition, witness)."""
    words = [tuple(_validate_word(domain, w)) for w in words]
    wset = set(words)
    used = {q for w in words for q in w}
    if used != set(domain.items):
        return False, "i", sorted(set(domain.items) - used)
    for w in words:
        for i in range(len(w)):
            if w[:i] not in wset:
                return False, "ii", {"word": w, "missing_prefix": w[:i]}
    for v in words:
        for w in words:
            overhang = set(v) - set(w)
            if overhang and not any(w + (q,) in wset for q in overhang):
                return False, "iii", {"v": v, "w": w}
    return True, None, None


def encode_space_from_strings(domain: Domain, strings) -> KnowledgeStructure:
    """All unions of prefix-determined sets of the given strings."""
    strings = [_validate_string(domain, s) for s in strings]
    prefix_sets = set()
    for s in strings:
        mask = 0
        prefix_sets.add(mask)
        for q in s:
            mask |= domain.bit(q)
            prefix_sets.add(mask)
    return span(domain, prefix_sets)


def greedy_string_cover(space: KnowledgeStructure, max_strings: int = 100_000):
    """A string set whose encoding regenerates the space, built greedily:
    repeatedly take the learning string whose prefix sets cover the most
    states not yet encoded.  An upper bound on the optimum, not the optimum.
    """
    if not classify(space).learning_space:
        raise NotLearningSpace("string covers exist only for learning spaces")
    words, total = learning_strings(space, limit=max_strings)
    if total > max_strings:
        raise ValueError(f"too many learning strings to enumerate ({total})")

    def prefix_masks(w):
        masks = {0}
        m = 0
        for q in w:
            m |= space.domain.bit(q)
            masks.add(m)
        return masks

    target = set(space.states)
    chosen: list[tuple[str, ...]] = []
    encoded: set[int] = set()
    while encoded != target:
        best = max(words, key=lambda w: (len(prefix_masks(w) - encoded), w))
        chosen.append(best)
        covered = set().union(*(prefix_masks(w) for w in chosen))
        encoded = set(span(space.domain, covered).states)
        if len(chosen) > len(words):
            raise AssertionError("cover construction failed to terminate")
    return chosen
