"""Shared fixtures: the worked example spaces and random generators."""

import random
from itertools import combinations

import pytest

from kst import Domain, build_structure
from kst.strings import encode_space_from_strings


def make_space(items, sets):
    d = Domain(items)
    return build_structure(d, [d.encode(s) for s in sets])


@pytest.fixture(scope="session")
def k1():
    return make_space("abcd", ["", "a", "d", "ab", "ad", "abc", "abd", "abcd"])


@pytest.fixture(scope="session")
def k2():
    return make_space("abcd", ["", "a", "b", "c", "ab", "ac", "bc",
                               "abd", "abc", "acd", "abcd"])


@pytest.fixture(scope="session")
def k3():
    return make_space("abcd", ["", "a", "d", "ab", "cd", "abc", "bcd", "abcd"])


@pytest.fixture(scope="session")
def k4():
    return make_space("abcd", ["", "c", "d", "cd", "abc", "abd", "abcd"])


@pytest.fixture(scope="session")
def k5():
    return make_space("abcd", ["", "a", "c", "ab", "cd", "abc", "acd", "abcd"])


TEN_ITEM_STATES = [
    "", "c", "i", "g", "ci", "gi", "hi", "gh", "cg", "cgh", "chi", "cgi",
    "ghi", "cghi", "bghi", "aghi", "bcghi", "acghi", "cghij", "abghi",
    "cfghij", "bcghij", "acghij", "abcghi", "abcfghi", "abcghij", "bcfghij",
    "acfghij", "abcfghij", "bcdfghij", "acdfghij", "abcdghij", "abcdfghij",
    "abcdefghij",
]


@pytest.fixture(scope="session")
def ten_item():
    return make_space("abcdefghij", TEN_ITEM_STATES)


@pytest.fixture(scope="session")
def example_h():
    return make_space("abcde", ["", "a", "bd", "abc", "abd", "bce",
                                "abcd", "abce", "bcde", "abcde"])


@pytest.fixture(scope="session")
def strings_space():
    # the eight-state space whose learning strings are worked out by hand
    return make_space("abcd", ["", "a", "b", "ab", "bd", "abc", "abd",
                               "bcd", "abcd"])


@pytest.fixture(scope="session")
def projection_space():
    return make_space("abcd", ["", "a", "b", "ab", "ad", "abd", "acd", "abcd"])


@pytest.fixture(scope="session")
def child_counterexample_space():
    return make_space("abcd", ["", "b", "bc", "bd", "abc", "bcd", "abd", "abcd"])


@pytest.fixture(scope="session")
def hanging_example_space():
    return make_space("abcd", ["", "a", "b", "ab", "ac", "ad", "abc",
                               "abd", "acd", "abcd"])


def all_structures(n):
    """Every knowledge structure on n items (contains 0 and the full set)."""
    d = Domain("abcdefgh"[:n])
    middles = [m for m in range(d.full_mask + 1) if m not in (0, d.full_mask)]
    for r in range(len(middles) + 1):
        for combo in combinations(middles, r):
            yield build_structure(d, (0, d.full_mask) + combo)


def random_structure(rng, n):
    d = Domain("abcdefgh"[:n])
    middles = [m for m in range(1, d.full_mask) if rng.random() < 0.5]
    return build_structure(d, [0, d.full_mask] + middles)


def random_learning_space(rng, n):
    """Unions of prefix sets of random permutations form a learning space."""
    d = Domain("abcdefgh"[:n])
    perms = []
    for _ in range(rng.randint(2, n + 1)):
        p = list(d.items)
        rng.shuffle(p)
        perms.append(p)
    return encode_space_from_strings(d, perms)
