"""Core representation of knowledge structures.

States are plain ``int`` bitmasks over a :class:`Domain`: bit ``i`` is set
exactly when item number ``i`` belongs to the state.  All structural
predicates (union closure, wellgradedness, accessibility, the learning-space
axioms), the covering relation and fringes live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import (
    MissingEmptyOrFull,
    MultipleMatches,
    NoMatch,
    StateNotInStructure,
    UnknownItem,
)


class Domain:
    """An ordered set of item identifiers.

    The item order is fixed at creation and defines the bit layout of every
    state mask: item ``items[i]`` corresponds to bit ``i``.
    """

    __slots__ = ("items", "index", "full_mask")

    def __init__(self, items: Iterable[str]):
        items = tuple(items)
        if not items:
            raise ValueError("domain needs at least one item")
        if len(set(items)) != len(items):
            raise ValueError("domain items must be unique")
        self.items = items
        self.index = {q: i for i, q in enumerate(items)}
        self.full_mask = (1 << len(items)) - 1

    @property
    def size(self) -> int:
        return len(self.items)

    def bit(self, item: str) -> int:
        try:
            return 1 << self.index[item]
        except KeyError:
            raise UnknownItem(f"item {item!r} not in domain") from None

    def encode(self, items: Iterable[str]) -> int:
        mask = 0
        for q in items:
            mask |= self.bit(q)
        return mask

    def decode(self, mask: int) -> tuple[str, ...]:
        return tuple(q for i, q in enumerate(self.items) if mask >> i & 1)

    def __eq__(self, other):
        return isinstance(other, Domain) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        return f"Domain({list(self.items)!r})"


def sort_key(mask: int):
    """Canonical state order: by size, then lexicographically on the item
    positions (so {a} < {b} < {a,b} < {a,c})."""
    members = []
    i = 0
    m = mask
    while m:
        if m & 1:
            members.append(i)
        m >>= 1
        i += 1
    return (len(members), tuple(members))


def canonical_sort(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=sort_key))


@dataclass(frozen=True)
class PropertyFlags:
    union_closed: bool
    intersection_closed: bool
    well_graded: bool
    accessible: bool
    discriminative: bool
    learning_space: bool
    finite_space: bool

    @property
    def quasi_ordinal(self) -> bool:
        return self.union_closed and self.intersection_closed


@dataclass(frozen=True)
class FringePair:
    inner: int
    outer: int


class KnowledgeStructure:
    """A domain together with a canonically ordered family of states.

    The family always contains the empty state and the full domain; states
    are stored deduplicated in canonical order so that two structures over
    the same domain are equal iff their state tuples are equal.
    """

    __slots__ = ("domain", "states", "state_set", "had_duplicates")

    def __init__(self, domain: Domain, states: Iterable[int], *, _had_duplicates=False):
        self.domain = domain
        self.states = canonical_sort(states)
        self.state_set = frozenset(self.states)
        self.had_duplicates = _had_duplicates

    def __contains__(self, mask: int) -> bool:
        return mask in self.state_set

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other):
        return (
            isinstance(other, KnowledgeStructure)
            and self.domain == other.domain
            and self.states == other.states
        )

    def __hash__(self):
        return hash((self.domain, self.states))

    def __repr__(self):
        return f"<KnowledgeStructure |Q|={self.domain.size} |K|={len(self.states)}>"

    def decode_states(self) -> list[tuple[str, ...]]:
        return [self.domain.decode(k) for k in self.states]

    def states_containing(self, item: str) -> tuple[int, ...]:
        bit = self.domain.bit(item)
        return tuple(k for k in self.states if k & bit)


def build_structure(domain: Domain, states: Iterable[Iterable[str] | int]) -> KnowledgeStructure:
    """Build a canonical structure from item-sets (or raw masks).

    The empty state and the full domain must be present in the input; they
    are never inserted silently.  Duplicates are dropped with a warning flag
    on the result (``had_duplicates``).
    """
    masks = []
    for s in states:
        masks.append(s if isinstance(s, int) else domain.encode(s))
    dedup = set(masks)
    if 0 not in dedup or domain.full_mask not in dedup:
        raise MissingEmptyOrFull("a knowledge structure must contain the empty state and the full domain")
    return KnowledgeStructure(domain, dedup, _had_duplicates=len(dedup) < len(masks))


def is_union_closed(structure: KnowledgeStructure) -> bool:
    states = structure.states
    sset = structure.state_set
    for i, k in enumerate(states):
        for l in states[i + 1:]:
            if k | l not in sset:
                return False
    return True


def is_intersection_closed(structure: KnowledgeStructure) -> bool:
    states = structure.states
    sset = structure.state_set
    for i, k in enumerate(states):
        for l in states[i + 1:]:
            if k & l not in sset:
                return False
    return True


def is_accessible(structure: KnowledgeStructure) -> bool:
    return all(_downgrade_exists(structure, k) for k in structure.states if k)


def _downgrade_exists(structure: KnowledgeStructure, k: int) -> bool:
    m = k
    while m:
        bit = m & -m
        if k ^ bit in structure.state_set:
            return True
        m ^= bit
    return False


def _unit_neighbors(structure: KnowledgeStructure, k: int):
    """States at symmetric-difference distance 1 from k."""
    for i in range(structure.domain.size):
        other = k ^ (1 << i)
        if other in structure.state_set:
            yield other


def is_well_graded(structure: KnowledgeStructure) -> bool:
    """Every pair of states is joined by a path of unit symmetric-difference
    steps whose length equals their symmetric-difference size."""
    states = structure.states
    for src in states:
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for k in frontier:
                for n in _unit_neighbors(structure, k):
                    if n not in dist:
                        dist[n] = dist[k] + 1
                        nxt.append(n)
            frontier = nxt
        for dst in states:
            want = (src ^ dst).bit_count()
            if dist.get(dst) != want:
                return False
    return True


def is_discriminative(structure: KnowledgeStructure) -> bool:
    columns = set()
    for i in range(structure.domain.size):
        col = tuple(bool(k >> i & 1) for k in structure.states)
        if col in columns:
            return False
        columns.add(col)
    return True


def satisfies_union_of_added_items(structure: KnowledgeStructure) -> bool:
    """For every state K and items q, r: if K+{q} and K+{r} are states then
    K+{q,r} is a state."""
    sset = structure.state_set
    n = structure.domain.size
    for k in structure.states:
        ups = [b for b in (1 << i for i in range(n)) if not k & b and k | b in sset]
        for i, b1 in enumerate(ups):
            for b2 in ups[i + 1:]:
                if k | b1 | b2 not in sset:
                    return False
    return True


def classify(structure: KnowledgeStructure) -> PropertyFlags:
    """Compute all structural flags by direct definition check.

    ``learning_space`` is decided through the finite / downgradable /
    two-item-extension characterization rather than through the L1/L2
    axioms (see :func:`check_l1_l2` for those).
    """
    union_closed = is_union_closed(structure)
    accessible = is_accessible(structure)
    learning_space = accessible and satisfies_union_of_added_items(structure)
    return PropertyFlags(
        union_closed=union_closed,
        intersection_closed=is_intersection_closed(structure),
        well_graded=is_well_graded(structure),
        accessible=accessible,
        discriminative=is_discriminative(structure),
        learning_space=learning_space,
        finite_space=True,
    )


def check_l1_l2(structure: KnowledgeStructure):
    """Direct verification of the two learning-space axioms.

    Returns ``((l1, witness1), (l2, witness2))``; a witness is the first
    counterexample found, as decoded item tuples, or None.
    """
    l1, w1 = _check_l1(structure)
    l2, w2 = _check_l2(structure)
    return (l1, w1), (l2, w2)


def _check_l1(structure: KnowledgeStructure):
    # K ⊂ L must be joined by a chain adding the items of L∖K one at a time.
    sset = structure.state_set
    for k in structure.states:
        # BFS over states reachable from k by single additions within each L.
        for l in structure.states:
            if k == l or k & ~l:
                continue
            reach = {k}
            frontier = [k]
            found = False
            while frontier and not found:
                nxt = []
                for cur in frontier:
                    gap = l & ~cur
                    m = gap
                    while m:
                        bit = m & -m
                        m ^= bit
                        cand = cur | bit
                        if cand in sset and cand not in reach:
                            if cand == l:
                                found = True
                                break
                            reach.add(cand)
                            nxt.append(cand)
                    if found:
                        break
                frontier = nxt
            if not found:
                d = structure.domain
                return False, (d.decode(k), d.decode(l))
    return True, None


def _check_l2(structure: KnowledgeStructure):
    sset = structure.state_set
    d = structure.domain
    for k in structure.states:
        for i in range(d.size):
            bit = 1 << i
            if k & bit or k | bit not in sset:
                continue
            for l in structure.states:
                if l == k or k & ~l:
                    continue
                if l | bit not in sset:
                    return False, (d.decode(k), d.decode(l), d.items[i])
    return True, None


def covering_diagram(structure: KnowledgeStructure) -> list[tuple[int, int]]:
    """All covering pairs (K, L): K ⊂ L with no state strictly between."""
    states = structure.states
    edges = []
    for k in states:
        for l in states:
            if k == l or k & ~l:
                continue
            if any(a != k and a != l and not (k & ~a) and not (a & ~l) for a in states):
                continue
            edges.append((k, l))
    return edges


def fringes(structure: KnowledgeStructure, k: int) -> FringePair:
    """Inner and outer fringe of a state of the structure."""
    if k not in structure.state_set:
        raise StateNotInStructure(f"state {structure.domain.decode(k)} not in structure")
    inner = 0
    outer = 0
    for i in range(structure.domain.size):
        bit = 1 << i
        if k & bit:
            if k ^ bit in structure.state_set:
                inner |= bit
        elif k | bit in structure.state_set:
            outer |= bit
    return FringePair(inner=inner, outer=outer)


def state_from_fringes(structure: KnowledgeStructure, pair: FringePair) -> int:
    """The unique state whose fringe pair matches, found by scanning.

    Raises MultipleMatches when two states share the pair, which certifies
    that the structure is not a learning space.
    """
    matches = [k for k in structure.states if fringes(structure, k) == pair]
    if not matches:
        raise NoMatch("no state has the requested fringe pair")
    if len(matches) > 1:
        raise MultipleMatches("fringe pair is shared by several states; not a learning space")
    return matches[0]
