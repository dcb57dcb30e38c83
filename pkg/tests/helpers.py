"""Shared generators for randomized checks."""

import random

from uminflow import And, Atom, EventExpr, FiniteOrder, Not, Or


def random_atom(rng: random.Random, elements) -> Atom:
    k = rng.randint(1, min(3, len(elements)))
    return Atom(FiniteOrder(tuple(rng.sample(list(elements), k))))


def random_event(
    rng: random.Random, elements=(0, 1, 2, 3, 4, 5), max_atoms: int = 4
) -> EventExpr:
    """A small expression over the given elements, atoms + and/or/not."""

    def build(budget: int) -> EventExpr:
        if budget == 1:
            e = random_atom(rng, elements)
        else:
            cut = rng.randint(1, budget - 1)
            left, right = build(cut), build(budget - cut)
            e = And((left, right)) if rng.random() < 0.5 else Or((left, right))
        if rng.random() < 0.3:
            e = Not(e)
        return e

    return build(rng.randint(1, max_atoms))


def random_bijection(rng: random.Random, n: int) -> dict[int, int]:
    images = list(range(n))
    rng.shuffle(images)
    return dict(enumerate(images))
