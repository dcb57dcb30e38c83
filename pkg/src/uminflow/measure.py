"""Exact measure of order events under the unique permutation-invariant law.

Every cylinder named by a k-element finite order has measure 1/k!, and events
built from finitely many cylinders are local to their support.  Two
independent computation paths are provided: direct enumeration of all orders
on the support (``mu_exact``, the oracle) and the weight-reduction recursion
over signed cylinder conjunctions (``mu_weight_recursive``), which agrees
with the oracle and rounds to a requested dyadic precision only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .orders import (
    And,
    Atom,
    EventExpr,
    FiniteOrder,
    Not,
    Or,
    evaluate,
    support,
)

DEFAULT_SUPPORT_CAP = 8
DEFAULT_EXTENSION_CAP = 16
DEFAULT_UNION_CAP = 16
PRECISION_CAP = 64


class CapExceededError(RuntimeError):
    """A computation was requested beyond its configured resource cap."""


@dataclass(frozen=True)
class DyadicApprox:
    """A binary rational numerator/2^exponent within 2^-exponent of a target."""

    numerator: int
    exponent: int

    @classmethod
    def from_fraction(cls, value: Fraction, k: int) -> "DyadicApprox":
        return cls(round(value * 2**k), k)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2**self.exponent)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


@dataclass(frozen=True)
class FinitePoset:
    """A strict partial order on {0, ..., n-1}, stored transitively closed."""

    n: int
    relation: frozenset[tuple[int, int]]

    def __post_init__(self):
        rel = self.relation
        succ: dict[int, set[int]] = {}
        for a, b in rel:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"pair ({a}, {b}) outside range({self.n})")
            if a == b:
                raise ValueError(f"relation is not irreflexive: ({a}, {b})")
            if (b, a) in rel:
                raise ValueError(f"relation is not antisymmetric: ({a}, {b})")
            succ.setdefault(a, set()).add(b)
        empty: set[int] = set()
        for a, bs in succ.items():
            for b in bs:
                if not succ.get(b, empty) <= bs:
                    raise ValueError(f"relation is not transitive below {a}")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "FinitePoset":
        """Transitively close the given strict pairs; reject cycles."""
        succ = [set() for _ in range(n)]
        for a, b in pairs:
            succ[a].add(b)
        closed = [set(s) for s in succ]
        changed = True
        while changed:
            changed = False
            for a in range(n):
                extra = set()
                for b in closed[a]:
                    extra |= closed[b] - closed[a]
                if extra:
                    closed[a] |= extra
                    changed = True
        rel = frozenset((a, b) for a in range(n) for b in closed[a])
        return cls(n, rel)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def antichain(cls, n: int) -> "FinitePoset":
        return cls(n, frozenset())

    def less(self, a: int, b: int) -> bool:
        return (a, b) in self.relation

    def is_antichain(self) -> bool:
        return not self.relation


def mu_cylinder(l: FiniteOrder) -> Fraction:
    """Measure of the cylinder of total orders extending l: 1/k! for k elements."""
    return Fraction(1, factorial(len(l.elements)))


def mu_exact(e: EventExpr, *, support_cap: int = DEFAULT_SUPPORT_CAP) -> Fraction:
    """Oracle measure: satisfying orders on the support divided by |support|!.

    Valid because events in the cylinder algebra are determined by the
    restriction of an order to their support.
    """
    sup = sorted(support(e))
    if len(sup) > support_cap:
        raise CapExceededError(
            f"support size {len(sup)} exceeds enumeration cap {support_cap}"
        )
    count = 0
    for perm in permutations(sup):
        rank = {elt: pos for pos, elt in enumerate(perm)}
        if evaluate(e, rank):
            count += 1
    return Fraction(count, factorial(len(sup)))


# ---------------------------------------------------------------------------
# Weight recursion over signed conjunctions

_Literal = tuple[FiniteOrder, bool]  # (atom order, True = cylinder, False = complement)
_Conjunction = frozenset[_Literal]


def _signed_union(e: EventExpr) -> list[_Conjunction]:
    """Rewrite an expression as a union of conjunctions of signed atoms."""
    terms = _dnf(e, positive=True)
    return _absorb(terms)


def _dnf(e: EventExpr, positive: bool) -> list[_Conjunction]:
    if isinstance(e, Atom):
        return [frozenset([(e.order, positive)])]
    if isinstance(e, Not):
        return _dnf(e.child, not positive)
    both = e.children
    if (isinstance(e, And) and positive) or (isinstance(e, Or) and not positive):
        out: list[_Conjunction] = [frozenset()]
        for child in both:
            branches = _dnf(child, positive)
            merged = []
            for acc in out:
                for b in branches:
                    t = acc | b
                    if not _contradictory(t):
                        merged.append(t)
            out = _dedupe(merged)
        return out
    out = []
    for child in both:
        out.extend(_dnf(child, positive))
    return _dedupe(out)


def _contradictory(term: _Conjunction) -> bool:
    return any((order, not sign) in term for order, sign in term)


def _dedupe(terms: list[_Conjunction]) -> list[_Conjunction]:
    seen = set()
    out = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _absorb(terms: list[_Conjunction]) -> list[_Conjunction]:
    """Drop any conjunction contained in (hence denoting a subset of) another."""
    out = []
    for t in terms:
        if not any(other < t for other in terms):
            out.append(t)
    return _dedupe(out)


def _literal_key(lit: _Literal):
    return (lit[1], lit[0].elements)


def _mu_conjunction(term: _Conjunction, memo: dict) -> Fraction:
    """The weight recursion: peel negated factors until none remain."""
    if term in memo:
        return memo[term]
    negated = sorted((lit for lit in term if not lit[1]), key=_literal_key)
    if not negated:
        result = _mu_positive(term)
    else:
        z = negated[0]
        rest = term - {z}
        with_z = rest | {(z[0], True)}
        result = _mu_conjunction(rest, memo) - _mu_conjunction(with_z, memo)
    memo[term] = result
    return result


def _mu_positive(term: _Conjunction) -> Fraction:
    """Exact measure of an intersection of cylinders via extension counting."""
    elements: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    for order, _sign in term:
        elements |= order.element_set
        pairs |= set(order.pairs())
    if not elements:
        return Fraction(1)
    index = {e: i for i, e in enumerate(sorted(elements))}
    m = len(index)
    pred = [0] * m
    for a, b in pairs:
        pred[index[b]] |= 1 << index[a]
    count = _count_extensions(m, pred)
    return Fraction(count, factorial(m))


def _count_extensions(n: int, pred: list[int]) -> int:
    """Downset dynamic program; cyclic inputs yield 0 since nothing is placeable."""
    dp = [0] * (1 << n)
    dp[0] = 1
    for mask in range(1, 1 << n):
        total = 0
        rest = mask
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            if pred[x] & mask == pred[x] & ~low:
                total += dp[mask ^ low]
            rest ^= low
        dp[mask] = total
    return dp[(1 << n) - 1]


def _mu_union(terms: list[_Conjunction], memo: dict, union_cap: int) -> Fraction:
    """Inclusion-exclusion over a union of signed conjunctions."""
    if len(terms) > union_cap:
        raise CapExceededError(
            f"union of {len(terms)} conjunctions exceeds cap {union_cap}"
        )
    if not terms:
        return Fraction(0)
    total = Fraction(0)
    n = len(terms)
    for mask in range(1, 1 << n):
        merged: _Conjunction = frozenset()
        rest = mask
        while rest:
            low = rest & -rest
            merged = merged | terms[low.bit_length() - 1]
            rest ^= low
        if _contradictory(merged):
            continue
        sign = -1 if bin(mask).count("1") % 2 == 0 else 1
        total += sign * _mu_conjunction(merged, memo)
    return total


def mu_weight_exact(e: EventExpr, *, union_cap: int = DEFAULT_UNION_CAP) -> Fraction:
    """The weight-recursion path kept exact (no rounding)."""
    terms = _signed_union(e)
    memo: dict = {}
    return _mu_union(terms, memo, union_cap)


def mu_weight_recursive(
    e: EventExpr,
    k: int,
    *,
    union_cap: int = DEFAULT_UNION_CAP,
) -> DyadicApprox:
    """Dyadic approximation of the measure within 2^-k via the weight recursion.

    The expression is first rewritten as a union of conjunctions of signed
    atoms; the union is handled by inclusion-exclusion and each conjunction by
    peeling negated factors one at a time.  Weight-0 terms are evaluated
    exactly, so the only error is the final rounding.
    """
    if k > PRECISION_CAP:
        raise CapExceededError(f"precision 2^-{k} exceeds cap 2^-{PRECISION_CAP}")
    exact = mu_weight_exact(e, union_cap=union_cap)
    return DyadicApprox.from_fraction(exact, k)


# ---------------------------------------------------------------------------
# The adjacency family and linear extension counting


def adjacency_event(n: int, m: int, N: int) -> EventExpr:
    """The event that no j < N lies strictly between n and m.

    Equivalently: n and m are adjacent in the order restricted to {0,...,N-1}.
    """
    _check_adjacency_args(n, m, N)
    clauses = []
    for j in range(N):
        if j == n or j == m:
            continue
        between = Or(
            (
                Atom(FiniteOrder((n, j, m))),
                Atom(FiniteOrder((m, j, n))),
            )
        )
        clauses.append(Not(between))
    if not clauses:
        return Atom(FiniteOrder(()))
    if len(clauses) == 1:
        return clauses[0]
    return And(tuple(clauses))


def mu_adjacency(n: int, m: int, N: int) -> Fraction:
    """Exact measure of adjacency_event(n, m, N): 2(N-1)(N-2)!/N! = 2/N."""
    _check_adjacency_args(n, m, N)
    return Fraction(2, N)


def _check_adjacency_args(n: int, m: int, N: int):
    if n == m:
        raise ValueError("the two points must differ")
    if N < 2:
        raise ValueError("window size must be at least 2")
    if not (0 <= n < N and 0 <= m < N):
        raise ValueError(f"points must lie inside the window range({N})")


def linear_extension_count(
    p: FinitePoset, *, cap: int = DEFAULT_EXTENSION_CAP
) -> int:
    """Exact number of total orders on {0,...,n-1} extending the poset."""
    if p.n > cap:
        raise CapExceededError(f"poset size {p.n} exceeds extension-count cap {cap}")
    pred = [0] * p.n
    for a, b in p.relation:
        pred[b] |= 1 << a
    return _count_extensions(p.n, pred)
