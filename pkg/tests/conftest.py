"""Shared fixtures: the reference seven-edge graph and small-group helpers."""

import itertools
import random

import pytest

from reflfact import (
    DecoratedGraph,
    GroupElement,
    GroupParams,
    Reflection,
    identity,
    multiply,
    reflections,
)


@pytest.fixture(scope="session")
def reference_graph() -> DecoratedGraph:
    """Seven ordered labeled edges on four vertices in G(6,2,4); exercises
    swaps, self-edges, repeated endpoints, and both walk directions."""
    params = GroupParams(6, 2, 4)
    return DecoratedGraph(
        params,
        (
            (3, 4, 5),
            (2, 3, 0),
            (4, 4, 2),
            (1, 2, 1),
            (3, 4, 3),
            (1, 3, 4),
            (1, 1, 1),
        ),
    )


@pytest.fixture(scope="session")
def reference_tuple(reference_graph):
    p = reference_graph.params
    return [
        Reflection(p, 3, 4, 5),
        Reflection(p, 2, 3, 0),
        Reflection(p, 4, 4, 2),
        Reflection(p, 1, 2, 1),
        Reflection(p, 3, 4, 3),
        Reflection(p, 1, 3, 4),
        Reflection(p, 1, 1, 1),
    ]


def random_element(params: GroupParams, rng: random.Random) -> GroupElement:
    perm = list(range(1, params.n + 1))
    rng.shuffle(perm)
    exps = [rng.randrange(params.r) for _ in range(params.n - 1)]
    # fix the last exponent so the sum is divisible by s
    free = rng.randrange(params.q)
    exps.append(free * params.s + (-sum(exps)) % params.s)
    return GroupElement(params, tuple(perm), tuple(exps))


def random_tuple(params: GroupParams, length: int, rng: random.Random):
    pool = reflections(params)
    return [rng.choice(pool) for _ in range(length)]


def fold_product(refs, params):
    acc = identity(params)
    for ref in refs:
        acc = multiply(ref.to_element(), acc)
    return acc


def all_elements(params: GroupParams):
    """Exhaustive group enumeration, independent of the indexing module."""
    n, r, s = params.n, params.r, params.s
    for perm in itertools.permutations(range(1, n + 1)):
        for exps in itertools.product(range(r), repeat=n):
            if sum(exps) % s == 0:
                yield GroupElement(params, perm, exps)
