"""Span, base and atoms of union-closed families, surmise functions, and the
quasi-order correspondence for union- and intersection-closed families."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyClauseList, NotTransitive, NotUnionClosed, UnknownItem
from .structures import Domain, KnowledgeStructure, canonical_sort, is_union_closed, sort_key


@dataclass(frozen=True)
class SurmiseMap:
    """Per-item clause lists: clauses[q] holds the clauses (state masks) for q."""

    domain: Domain
    clauses: dict[str, tuple[int, ...]]

    def check_axioms(self):
        """Return (ok, failing_condition, witness) for the surmise axioms:
        (i) q is in every clause for q; (ii) every member of a clause has a
        clause inside it; (iii) clauses for one item are incomparable."""
        for q, cs in self.clauses.items():
            bit = self.domain.bit(q)
            for c in cs:
                if not c & bit:
                    return False, "i", (q, self.domain.decode(c))
        for q, cs in self.clauses.items():
            for c in cs:
                m = c
                while m:
                    bit = m & -m
                    m ^= bit
                    qp = self.domain.items[bit.bit_length() - 1]
                    if not any(not (cp & ~c) for cp in self.clauses.get(qp, ())):
                        return False, "ii", (q, self.domain.decode(c), qp)
        for q, cs in self.clauses.items():
            for i, c in enumerate(cs):
                for cp in cs[i + 1:]:
                    if not (c & ~cp) or not (cp & ~c):
                        return False, "iii", (q, self.domain.decode(c), self.domain.decode(cp))
        return True, None, None


@dataclass(frozen=True)
class QuasiOrder:
    """A reflexive binary relation as a row-major adjacency matrix.

    ``pairs[i][j]`` is True when item i precedes item j (i Q j).
    """

    domain: Domain
    pairs: tuple[tuple[bool, ...], ...]

    def holds(self, q: str, r: str) -> bool:
        return self.pairs[self.domain.index[q]][self.domain.index[r]]

    def is_reflexive(self) -> bool:
        return all(self.pairs[i][i] for i in range(self.domain.size))

    def is_transitive(self) -> bool:
        n = self.domain.size
        p = self.pairs
        return all(
            not (p[i][j] and p[j][k]) or p[i][k]
            for i in range(n) for j in range(n) for k in range(n)
        )

    def is_partial_order(self) -> bool:
        n = self.domain.size
        return all(
            not (self.pairs[i][j] and self.pairs[j][i]) or i == j
            for i in range(n) for j in range(n)
        )


def span(domain: Domain, family) -> KnowledgeStructure:
    """All unions of subfamilies of the given sets (the union of zero sets
    being the empty state).  Union-closed by construction; note the result
    only contains the full domain when the family covers it."""
    masks = [s if isinstance(s, int) else domain.encode(s) for s in family]
    closure = {0}
    for f in masks:
        closure |= {r | f for r in closure}
    return KnowledgeStructure(domain, closure)


def base(space: KnowledgeStructure) -> list[int]:
    """The minimal spanning subfamily of a union-closed family: every state
    that is not the union of the states strictly below it."""
    if not is_union_closed(space):
        raise NotUnionClosed("base is only defined for union-closed families")
    out = []
    for k in space.states:
        if not k:
            continue
        union_below = 0
        for l in space.states:
            if l != k and not (l & ~k):
                union_below |= l
        if union_below != k:
            out.append(k)
    return out


def atoms_at(space: KnowledgeStructure, q: str) -> list[int]:
    """The inclusion-minimal states containing q."""
    if not is_union_closed(space):
        raise NotUnionClosed("atoms are only defined for union-closed families")
    bit = space.domain.bit(q)
    holding = [k for k in space.states if k & bit]
    return [k for k in holding if not any(l != k and not (l & ~k) for l in holding)]


def surmise_function(space: KnowledgeStructure) -> SurmiseMap:
    """The surmise function of a finite union-closed family: each item is
    mapped to its atoms."""
    clauses = {q: tuple(atoms_at(space, q)) for q in space.domain.items}
    return SurmiseMap(space.domain, clauses)


def space_from_attribution(attribution: SurmiseMap) -> KnowledgeStructure:
    """The family of all sets K such that every item of K has a clause
    inside K.  Accepts any attribution (the surmise axioms are not
    required); only empty clause lists are rejected.  Exponential in |Q|.
    """
    domain = attribution.domain
    for q in domain.items:
        if not attribution.clauses.get(q):
            raise EmptyClauseList(f"item {q!r} has no clause")
    states = []
    for k in range(domain.full_mask + 1):
        ok = True
        m = k
        while m and ok:
            bit = m & -m
            m ^= bit
            q = domain.items[bit.bit_length() - 1]
            ok = any(not (c & ~k) for c in attribution.clauses[q])
        if ok:
            states.append(k)
    return KnowledgeStructure(domain, states)


def quasi_order_to_space(order: QuasiOrder) -> KnowledgeStructure:
    """All down-closed sets of a reflexive transitive relation: K is a state
    iff r in K implies q in K for every pair q Q r."""
    if not order.is_transitive():
        raise NotTransitive("relation must be transitive")
    domain = order.domain
    n = domain.size
    # per item r, the mask of items q that must accompany r
    need = [0] * n
    for r in range(n):
        for q in range(n):
            if order.pairs[q][r]:
                need[r] |= 1 << q
    states = []
    for k in range(domain.full_mask + 1):
        m = k
        ok = True
        while m and ok:
            bit = m & -m
            m ^= bit
            ok = not (need[bit.bit_length() - 1] & ~k)
        if ok:
            states.append(k)
    return KnowledgeStructure(domain, states)


def space_to_quasi_order(space: KnowledgeStructure) -> QuasiOrder:
    """q precedes r exactly when every state containing r contains q."""
    domain = space.domain
    n = domain.size
    cols = []
    for i in range(n):
        col = 0
        for idx, k in enumerate(space.states):
            if k >> i & 1:
                col |= 1 << idx
        cols.append(col)
    pairs = tuple(
        tuple(not (cols[r] & ~cols[q]) for r in range(n))  # K_q ⊇ K_r
        for q in range(n)
    )
    return QuasiOrder(domain, pairs)


def ls_check_via_atoms(space: KnowledgeStructure):
    """Learning-space test through atoms: true iff every atom is an atom at
    exactly one item.  Returns (ok, witness); the witness names an atom that
    serves two items or none."""
    if not is_union_closed(space):
        raise NotUnionClosed("atom check needs a union-closed family")
    atoms_by_item = {q: set(atoms_at(space, q)) for q in space.domain.items}
    all_atoms = set().union(*atoms_by_item.values()) if atoms_by_item else set()
    for a in sorted(all_atoms, key=sort_key):
        owners = [q for q, ats in atoms_by_item.items() if a in ats]
        if len(owners) != 1:
            return False, (space.domain.decode(a), tuple(owners))
    return True, None
