"""Traces, projections, trace-equivalence classes and children."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyOrFullSubdomain
from .structures import Domain, KnowledgeStructure, sort_key


@dataclass(frozen=True)
class ProjectionResult:
    sub_domain: Domain
    structure: KnowledgeStructure
    trace_of: tuple[int, ...]  # parent state index -> projected mask


@dataclass(frozen=True)
class ChildFamily:
    """One trace-equivalence class of the parent family.

    ``members`` are the parent states sharing the trace; ``child`` holds the
    members with their common intersection removed, re-encoded on
    ``child_domain`` (the items outside the chosen subdomain that are not in
    the common intersection).  ``to_parent`` maps child items back to parent
    item names (identity on names, kept for clarity).
    """

    trace: tuple[str, ...]
    members: tuple[int, ...]          # masks on the parent domain
    child_domain: Domain
    child: tuple[int, ...]            # masks on child_domain
    common_intersection: tuple[str, ...]

    @property
    def to_parent(self) -> dict[str, str]:
        return {q: q for q in self.child_domain.items}


def _subdomain_masks(structure: KnowledgeStructure, q_prime) -> tuple[Domain, int]:
    parent = structure.domain
    mask = parent.encode(q_prime)
    if mask == 0 or mask == parent.full_mask:
        raise EmptyOrFullSubdomain("subdomain must be a proper non-empty subset of the domain")
    sub = Domain([q for q in parent.items if parent.index[q] in _bit_positions(mask)])
    return sub, mask


def _bit_positions(mask: int):
    pos = set()
    i = 0
    while mask:
        if mask & 1:
            pos.add(i)
        mask >>= 1
        i += 1
    return pos


def _reencode(parent: Domain, sub: Domain, mask: int) -> int:
    return sub.encode(q for q in sub.items if mask & parent.bit(q))


def project(structure: KnowledgeStructure, q_prime) -> ProjectionResult:
    """The family of traces K ∩ Q' over a proper non-empty subdomain."""
    sub, qmask = _subdomain_masks(structure, q_prime)
    parent = structure.domain
    traces = [_reencode(parent, sub, k & qmask) for k in structure.states]
    return ProjectionResult(
        sub_domain=sub,
        structure=KnowledgeStructure(sub, traces),
        trace_of=tuple(traces),
    )


def partition_classes(structure: KnowledgeStructure, q_prime) -> list[ChildFamily]:
    """Group the states by their trace on Q' and fill in the children.

    Classes are ordered by the canonical order of their traces.
    """
    sub, qmask = _subdomain_masks(structure, q_prime)
    parent = structure.domain
    groups: dict[int, list[int]] = {}
    for k in structure.states:
        groups.setdefault(k & qmask, []).append(k)
    out = []
    for trace_mask in sorted(groups, key=sort_key):
        members = tuple(groups[trace_mask])
        common = members[0]
        for m in members:
            common &= m
        outside = [
            q for q in parent.items
            if not qmask & parent.bit(q) and not common & parent.bit(q)
        ]
        # a class whose members only differ inside Q' ∪ common has the
        # trivial child {∅}; give it a placeholder one-item domain view
        child_domain = Domain(outside) if outside else Domain(["__none__"])
        child = tuple(sorted(
            {child_domain.encode(q for q in outside if m & parent.bit(q)) for m in members},
            key=sort_key,
        ))
        out.append(ChildFamily(
            trace=sub.decode(_reencode(parent, sub, trace_mask)) if trace_mask else (),
            members=members,
            child_domain=child_domain,
            child=child,
            common_intersection=parent.decode(common),
        ))
    return out


def children(structure: KnowledgeStructure, q_prime) -> list[ChildFamily]:
    """The Q'-children of the structure (same classes as
    :func:`partition_classes`; alias kept for the two viewpoints)."""
    return partition_classes(structure, q_prime)


def is_union_stable(masks) -> bool:
    """Union of every non-empty subfamily is a member (pairwise suffices)."""
    sset = set(masks)
    masks = list(masks)
    for i, k in enumerate(masks):
        for l in masks[i + 1:]:
            if k | l not in sset:
                return False
    return True


def family_is_well_graded(masks) -> bool:
    """Wellgradedness of a bare family: any two members joined by a unit
    symmetric-difference path of length equal to their distance."""
    masks = list(masks)
    sset = set(masks)
    width = max((m.bit_length() for m in masks), default=0)
    for src in masks:
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for k in frontier:
                for i in range(width + 1):
                    n = k ^ (1 << i)
                    if n in sset and n not in dist:
                        dist[n] = dist[k] + 1
                        nxt.append(n)
            frontier = nxt
        for dst in masks:
            if dist.get(dst) != (src ^ dst).bit_count():
                return False
    return True
