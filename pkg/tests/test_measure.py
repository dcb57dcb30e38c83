import random
from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from uminflow import (
    And,
    Atom,
    CapExceededError,
    FiniteOrder,
    FinitePoset,
    PartialPermutation,
    adjacency_event,
    evaluate,
    linear_extension_count,
    mu_adjacency,
    mu_cylinder,
    mu_exact,
    mu_weight_exact,
    mu_weight_recursive,
    parse_event,
    relabel_event,
)
from helpers import random_bijection, random_event


def test_mu_cylinder_values():
    assert mu_cylinder(FiniteOrder((4, 1, 7))) == Fraction(1, 6)
    assert mu_cylinder(FiniteOrder(())) == 1
    assert mu_cylinder(FiniteOrder(tuple(range(8)))) == Fraction(1, 40320)


def test_mu_exact_basics():
    assert mu_exact(parse_event("ord(0<1)")) == Fraction(1, 2)
    assert mu_exact(parse_event("ord(0<1)|!ord(0<1)")) == 1
    assert mu_exact(parse_event("ord(0<1)&ord(1<2)&ord(2<0)")) == 0


def test_mu_exact_support_cap():
    big = parse_event("ord(0<1<2<3<4<5<6<7<8)")
    with pytest.raises(CapExceededError):
        mu_exact(big)
    assert mu_exact(big, support_cap=9) == Fraction(1, factorial(9))


def test_weight_path_single_atom():
    for k in (1, 8, 20):
        approx = mu_weight_recursive(parse_event("ord(0<1<2)"), k)
        assert abs(approx.as_fraction() - Fraction(1, 6)) < Fraction(1, 2**k)


def test_weight_path_tautology():
    approx = mu_weight_recursive(parse_event("ord(0<1)|!ord(0<1)"), 12)
    assert abs(approx.as_fraction() - 1) < Fraction(1, 2**12)


def test_weight_precision_cap():
    with pytest.raises(CapExceededError):
        mu_weight_recursive(parse_event("ord(0<1)"), 65)


def test_weight_agrees_with_exact_oracle():
    rng = random.Random(20)
    for _ in range(200):
        e = random_event(rng)
        exact = mu_exact(e)
        assert mu_weight_exact(e) == exact
        beta = mu_weight_recursive(e, 20)
        assert abs(beta.as_fraction() - exact) < Fraction(1, 2**20)


def test_dyadic_format():
    d = mu_weight_recursive(parse_event("ord(0<1)"), 10)
    assert str(d) == "512/2^10"


def test_mu_adjacency_closed_form():
    assert mu_adjacency(0, 1, 5) == Fraction(2, 5)
    assert mu_adjacency(0, 1, 2) == 1
    for N in range(2, 11):
        for n in range(N):
            for m in range(N):
                if n != m:
                    assert mu_adjacency(n, m, N) == Fraction(2, N)


def test_mu_adjacency_matches_enumeration():
    for N in range(2, 8):
        for n in range(N):
            for m in range(n + 1, N):
                event = adjacency_event(n, m, N)
                assert mu_exact(event) == Fraction(2, N)


def test_mu_adjacency_argument_errors():
    with pytest.raises(ValueError):
        mu_adjacency(1, 1, 4)
    with pytest.raises(ValueError):
        mu_adjacency(0, 4, 4)
    with pytest.raises(ValueError):
        mu_adjacency(0, 1, 1)


def test_adjacency_monotone_vanishing():
    values = [mu_adjacency(0, 1, N) for N in range(2, 65)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] == Fraction(2, 64)


def test_linear_extension_counts():
    assert linear_extension_count(FinitePoset.antichain(3)) == 6
    assert linear_extension_count(FinitePoset.chain(4)) == 1
    v = FinitePoset.from_pairs(3, [(0, 2), (1, 2)])
    assert linear_extension_count(v) == 2


def _count_by_enumeration(p: FinitePoset) -> int:
    total = 0
    for perm in permutations(range(p.n)):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in p.relation):
            total += 1
    return total


def test_linear_extension_random_posets():
    rng = random.Random(30)
    for _ in range(60):
        n = rng.randint(1, 6)
        pairs = set()
        if n >= 2:
            for _ in range(rng.randint(0, n)):
                a, b = rng.sample(range(n), 2)
                pairs.add((min(a, b), max(a, b)))
        p = FinitePoset.from_pairs(n, pairs)
        count = linear_extension_count(p)
        assert count == _count_by_enumeration(p)
        assert count <= factorial(n)
        assert (count == factorial(n)) == p.is_antichain()


def test_linear_extension_cap():
    with pytest.raises(CapExceededError):
        linear_extension_count(FinitePoset.antichain(17))
    assert linear_extension_count(FinitePoset.chain(17), cap=17) == 1


def test_poset_validation():
    with pytest.raises(ValueError):
        FinitePoset(2, frozenset({(0, 1), (1, 0)}))
    with pytest.raises(ValueError):
        FinitePoset(2, frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        FinitePoset(3, frozenset({(0, 1), (1, 2)}))  # missing (0, 2)
    with pytest.raises(ValueError):
        FinitePoset.from_pairs(3, [(0, 1), (1, 2), (2, 0)])


def test_additivity_on_disjoint_events():
    rng = random.Random(40)
    guard = parse_event("ord(0<1)")
    for _ in range(50):
        base1 = random_event(rng, elements=(0, 1, 2, 3))
        base2 = random_event(rng, elements=(0, 1, 2, 3))
        e1 = And((base1, guard))
        e2 = And((base2, parse_event("!ord(0<1)")))
        assert mu_exact(And((e1, e2))) == 0
        from uminflow import Or

        assert mu_exact(Or((e1, e2))) == mu_exact(e1) + mu_exact(e2)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_partition_identity(k):
    # the k! relabelings of a full order on k points tile the whole space
    base = FiniteOrder(tuple(range(k)))
    total = Fraction(0)
    relabelings = []
    for perm in permutations(range(k)):
        sigma = PartialPermutation.from_mapping(dict(enumerate(perm)))
        image = FiniteOrder(tuple(sigma(e) for e in base.elements))
        relabelings.append(image)
        total += mu_cylinder(image)
    assert total == 1
    assert len(set(relabelings)) == factorial(k)
    if k >= 2:
        rng = random.Random(k)
        for _ in range(10):
            a, b = rng.sample(relabelings, 2)
            assert mu_exact(And((Atom(a), Atom(b)))) == 0


def test_invariance_under_relabeling():
    rng = random.Random(50)
    for _ in range(50):
        e = random_event(rng)
        sigma = PartialPermutation.from_mapping(random_bijection(rng, 6))
        assert mu_exact(relabel_event(sigma, e)) == mu_exact(e)


def test_adjacency_event_degenerate_window():
    event = adjacency_event(0, 1, 2)
    assert evaluate(event, {0: 0, 1: 1})
    assert mu_exact(event) == 1


def test_weight_path_degenerate_atoms():
    from uminflow import Atom, Not

    full = Atom(FiniteOrder(()))
    assert mu_weight_exact(full) == 1
    assert mu_weight_exact(Not(full)) == 0
    vacuous = Atom(FiniteOrder((5,)))
    assert mu_weight_exact(vacuous) == 1
    assert mu_weight_exact(Not(vacuous)) == 0
    assert mu_exact(vacuous) == 1
