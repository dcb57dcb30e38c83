import random
from fractions import Fraction
from itertools import combinations

import pytest

from uminflow import (
    CapExceededError,
    OrderPresentation,
    SearchBudgetError,
    back_and_forth,
    check_density,
    poset_canon_presentation,
    poset_extension_audit,
    rado_adjacent,
    rado_extension_witness,
    rational_order_less,
    rational_presentation,
    rational_presentation_variant,
    rational_value,
    universal_poset_stage,
)
from uminflow.fraisse import StageBuilder, rational_code, simplest_between


# -- rational order


def test_rational_irreflexive_total():
    for a in range(101):
        assert not rational_order_less(a, a)
        for b in range(a + 1, 101):
            assert rational_order_less(a, b) != rational_order_less(b, a)


def test_rational_transitive_sample():
    rng = random.Random(3)
    for _ in range(300):
        a, b, c = rng.sample(range(200), 3)
        if rational_order_less(a, b) and rational_order_less(b, c):
            assert rational_order_less(a, c)


def test_rational_enumeration_prefix():
    values = [rational_value(n) for n in range(9)]
    assert values == [
        Fraction(0),
        Fraction(1),
        Fraction(-1),
        Fraction(1, 2),
        Fraction(-1, 2),
        Fraction(2),
        Fraction(-2),
        Fraction(1, 3),
        Fraction(-1, 3),
    ]


def test_rational_code_inverts_value():
    for n in range(500):
        assert rational_code(rational_value(n)) == n


def test_simplest_between():
    assert simplest_between(Fraction(1, 5), Fraction(1, 4)) == Fraction(2, 9)
    assert simplest_between(Fraction(-1), Fraction(1)) == 0
    assert simplest_between(None, Fraction(-3)) == Fraction(-4)
    assert simplest_between(Fraction(5, 2), None) == Fraction(3)


def test_rational_density_witnesses():
    report = check_density(rational_presentation(), 10, 200)
    assert report.all_witnessed
    # wider scale with a larger search bound
    report = check_density(rational_presentation(), 20, 500)
    assert report.all_witnessed


def test_rational_between_search_honors_enumeration():
    # witnesses are found by scanning the fixed enumeration in code order
    for a, b in combinations(range(21), 2):
        if rational_order_less(a, b):
            lo, hi = a, b
        else:
            lo, hi = b, a
        j = next(
            c
            for c in range(600)
            if c not in (lo, hi)
            and rational_order_less(lo, c)
            and rational_order_less(c, hi)
        )
        assert rational_value(lo) < rational_value(j) < rational_value(hi)


def test_naturals_are_not_dense():
    naturals = OrderPresentation("naturals", lambda a, b: a < b)
    report = check_density(naturals, 2, 50)
    assert not report.all_witnessed
    assert (0, 1) in report.unwitnessed_pairs
    assert 0 in report.unwitnessed_endpoints  # nothing below the minimum


# -- random graph


def test_rado_bit_predicate():
    assert rado_adjacent(0, 5)  # bit 0 of 101
    assert not rado_adjacent(1, 5)  # bit 1 of 101
    with pytest.raises(ValueError):
        rado_adjacent(3, 3)


def test_rado_symmetry():
    for i in range(51):
        for j in range(51):
            if i != j:
                assert rado_adjacent(i, j) == rado_adjacent(j, i)


def test_rado_witness_examples():
    assert rado_extension_witness({0, 2}, {1}) == 5
    assert rado_extension_witness(set(), {0, 1}) == 4


def test_rado_witness_exhaustive():
    universe = range(6)
    for size in range(7):
        for chosen in combinations(universe, size):
            for a_mask in range(2 ** len(chosen)):
                A = {e for i, e in enumerate(chosen) if a_mask >> i & 1}
                B = set(chosen) - A
                z = rado_extension_witness(A, B)
                assert z not in A | B
                assert all(rado_adjacent(z, a) for a in A)
                assert not any(rado_adjacent(z, b) for b in B)


def test_rado_witness_disjointness_required():
    with pytest.raises(ValueError):
        rado_extension_witness({1}, {1, 2})


# -- universal poset stages


def test_stage_one_point():
    st = universal_poset_stage(1)
    assert st.stage.n == 1 and not st.stage.relation
    assert st.canon.to_sequence() == [0]


def test_stage_nesting():
    big = universal_poset_stage(8)
    small = universal_poset_stage(5)
    restricted = frozenset(
        (a, b) for a, b in big.stage.relation if a < 5 and b < 5
    )
    assert restricted == small.stage.relation
    assert [e for e in big.canon.to_sequence() if e < 5] == small.canon.to_sequence()


def test_stage_nesting_sweep():
    stages = {n: universal_poset_stage(n) for n in range(1, 65)}
    for n in range(2, 65):
        prev = stages[n - 1]
        rel = frozenset(
            (a, b) for a, b in stages[n].stage.relation if a < n - 1 and b < n - 1
        )
        assert rel == prev.stage.relation


def test_canon_extends_stage():
    for n in (1, 7, 23, 64):
        st = universal_poset_stage(n)
        for a, b in st.stage.relation:
            assert st.canon.less(a, b)


def test_stage_cap():
    with pytest.raises(CapExceededError):
        universal_poset_stage(65)
    universal_poset_stage(65, cap=70)


def test_stage_determinism():
    b1, b2 = StageBuilder(), StageBuilder()
    b1.grow_to(80)
    b2.grow_to(80)
    assert b1.canon == b2.canon
    assert all(b1.down[i] == b2.down[i] for i in range(80))


def test_stage_builder_concurrent_growth():
    import threading

    builder = StageBuilder()
    reference = StageBuilder()
    reference.grow_to(60)
    errors = []

    def grow(n):
        try:
            builder.grow_to(n)
        except Exception as exc:  # noqa: BLE001 - surfaced via the main thread
            errors.append(exc)

    threads = [threading.Thread(target=grow, args=(n,)) for n in (60, 35, 50, 60)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert builder.canon == reference.canon
    assert all(builder.down[i] == reference.down[i] for i in range(60))


def test_one_point_extension_audit():
    audit = poset_extension_audit(range(4), witness_bound=160, cap=200)
    assert audit.demands_checked > 50
    assert audit.complete, audit.unrealized


def test_canon_presentation_is_dense_at_small_scale():
    pres = poset_canon_presentation(cap=200)
    report = check_density(pres, 6, 160)
    assert report.all_witnessed


def test_canon_presentation_cap():
    pres = poset_canon_presentation(cap=16)
    with pytest.raises(CapExceededError):
        pres.less(0, 20)


def test_stage_json_shape():
    data = universal_poset_stage(5).to_json()
    assert set(data) == {"n", "pairs", "canon"}
    assert data["n"] == 5
    assert sorted(data["canon"]) == list(range(5))
    assert all(len(p) == 2 for p in data["pairs"])


# -- back and forth


def test_back_and_forth_identity():
    iso = back_and_forth(rational_presentation(), rational_presentation(), 40)
    assert iso.pairs == tuple((i, i) for i in range(40))


def test_back_and_forth_between_variants():
    v1, v2 = rational_presentation(), rational_presentation_variant()
    iso = back_and_forth(v1, v2, 50)
    dom = sorted(iso.domain())
    assert set(range(50)) <= iso.domain()
    assert set(range(50)) <= iso.range()
    for a in dom:
        for b in dom:
            if a != b:
                assert v1.less(a, b) == v2.less(iso(a), iso(b))


def test_back_and_forth_composition():
    v1, v2 = rational_presentation(), rational_presentation_variant()
    f = back_and_forth(v1, v2, 60)
    g = back_and_forth(v2, v1, 60)
    comp = g.compose(f)
    assert comp.domain()
    assert all(comp(a) == a for a in comp.domain())


def test_back_and_forth_budget_violation_reports():
    naturals = OrderPresentation("naturals", lambda a, b: a < b)
    v1 = rational_presentation()
    # the naturals have no point below 0, so the search for a partner of a
    # rational below everything must exhaust its budget
    with pytest.raises(SearchBudgetError) as err:
        back_and_forth(v1, naturals, 10, search_budget=200)
    assert err.value.blocking is not None
