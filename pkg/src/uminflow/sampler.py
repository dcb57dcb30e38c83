"""Seed-deterministic sampling of random total orders and finite-level tests.

Each element of N gets an independent 256-bit key derived from the seed; the
sampled order is the order of the keys.  Key order is exchangeable, so every
k-element cylinder has frequency 1/k!, which pins the sampled law down as the
unique invariant one.  Test families package shrinking event sequences whose
exact measures come from the measure module; a verdict reports the deepest
level a sampled prefix lands in.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import factorial
from typing import Callable, Iterable, Sequence

from .fraisse import DEFAULT_POSET_CAP, OrderPresentation, universal_poset_stage
from .measure import (
    DEFAULT_EXTENSION_CAP,
    adjacency_event,
    linear_extension_count,
    mu_adjacency,
)
from .orders import (
    And,
    Atom,
    EventExpr,
    FiniteOrder,
    Or,
    OrderPrefix,
    evaluate,
    support,
)

SAMPLE_SIZE_CAP = 10**6
KEY_BITS = 256


class MLLevelUnavailable(RuntimeError):
    """No event of small enough measure is reachable within the caps."""


def _digest(tag: bytes, seed: int, n: int) -> bytes:
    material = tag + (seed % 2**64).to_bytes(8, "big") + n.to_bytes(8, "big")
    return hashlib.sha256(material).digest()


class RandomOrderStream:
    """A lazily revealed random total order on N, determined by the seed.

    Single-owner mutable (the key table grows on demand); drive distinct
    seeds concurrently instead of sharing one stream.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._keys: dict[int, int] = {}
        self.tie_events: list[tuple[int, int]] = []
        self.max_prefix_requested = 0

    def key(self, n: int) -> int:
        k = self._keys.get(n)
        if k is None:
            k = int.from_bytes(_digest(b"uminflow-order", self.seed, n), "big")
            self._keys[n] = k
        return k

    def less(self, a: int, b: int) -> bool:
        ka, kb = self.key(a), self.key(b)
        if ka == kb and a != b:
            # 2^-256 per pair; the key budget is exhausted, fall back to index
            self.tie_events.append((min(a, b), max(a, b)))
            return a < b
        return ka < kb

    def prefix(self, N: int) -> OrderPrefix:
        if N > SAMPLE_SIZE_CAP:
            raise ValueError(f"prefix size {N} exceeds cap {SAMPLE_SIZE_CAP}")
        self.max_prefix_requested = max(self.max_prefix_requested, N)
        seq = sorted(range(N), key=lambda x: (self.key(x), x))
        for i in range(N - 1):
            if self.key(seq[i]) == self.key(seq[i + 1]):
                self.tie_events.append((min(seq[i], seq[i + 1]), max(seq[i], seq[i + 1])))
        return OrderPrefix.from_sequence(seq)

    def presentation(self) -> OrderPresentation:
        return OrderPresentation(
            f"stream-{self.seed}",
            self.less,
            lambda n: Fraction(self.key(n), 2**KEY_BITS),
        )


def sample_prefix(seed: int, N: int) -> OrderPrefix:
    """A uniform draw over the N! orders on {0,...,N-1}; same seed, same order."""
    return RandomOrderStream(seed).prefix(N)


class PresentationOrderSource:
    """A fixed decidable order exposed through the prefix interface, so that
    structured orders can be run through the same tests as sampled ones."""

    def __init__(self, pres: OrderPresentation):
        self.pres = pres
        self.max_prefix_requested = 0

    def prefix(self, N: int) -> OrderPrefix:
        self.max_prefix_requested = max(self.max_prefix_requested, N)
        seq = sorted(range(N), key=cmp_to_key(self._cmp))
        return OrderPrefix.from_sequence(seq)

    def _cmp(self, a: int, b: int) -> int:
        if a == b:
            return 0
        return -1 if self.pres.less(a, b) else 1


def sample_bits(seed: int, count: int) -> str:
    """A deterministic fair-coin bit string, independent of the order keys."""
    chunks = []
    block = 0
    while 256 * len(chunks) < count:
        chunks.append(_digest(b"uminflow-bits", seed, block))
        block += 1
    bits = "".join(f"{byte:08b}" for chunk in chunks for byte in chunk)
    return bits[:count]


# ---------------------------------------------------------------------------
# Test families


@dataclass(frozen=True)
class TestLevel:
    """One level of a shrinking family: an event and its exact measure."""

    k: int
    event: EventExpr
    exact_measure: Fraction


@dataclass(frozen=True, eq=False)
class MLTestFamily:
    """A named family of events with measure at level k at most 2^-k."""

    name: str
    level_fn: Callable[[int], TestLevel]

    def level(self, k: int) -> TestLevel:
        lvl = self.level_fn(k)
        if lvl.exact_measure > Fraction(1, 2**k):
            raise AssertionError(
                f"family {self.name} level {k} has measure {lvl.exact_measure}"
            )
        return lvl


def density_test_family(n_pair: tuple[int, int]) -> MLTestFamily:
    """Levels assert that the pair stays adjacent inside a growing window.

    Level k uses window size N(k) = 2^(k+1) * max(2, n+1, m+1), so the exact
    measure 2/N(k) is at most 2^-k.
    """
    n, m = n_pair
    if n == m:
        raise ValueError("the two points must differ")

    def level(k: int) -> TestLevel:
        N = 2 ** (k + 1) * max(2, n + 1, m + 1)
        return TestLevel(k, adjacency_event(n, m, N), mu_adjacency(n, m, N))

    return MLTestFamily(f"density({n},{m})", level)


def unbounded_test_family(n: int) -> MLTestFamily:
    """Levels assert that n stays extremal among {0,...,N(k)}.

    Being minimal and being maximal in a window of w points each have
    measure 1/w and cannot happen together, so the level measure is exactly
    2/(N(k)+1) <= 2^-k for N(k) = max(2^(k+1)-1, n+1).
    """

    def level(k: int) -> TestLevel:
        N = max(2 ** (k + 1) - 1, n + 1)
        others = [j for j in range(N + 1) if j != n]
        is_min = And(tuple(Atom(FiniteOrder((n, j))) for j in others))
        is_max = And(tuple(Atom(FiniteOrder((j, n))) for j in others))
        return TestLevel(k, Or((is_min, is_max)), Fraction(2, N + 1))

    return MLTestFamily(f"unbounded({n})", level)


def poset_level_measure(
    N: int,
    *,
    poset_cap: int = DEFAULT_POSET_CAP,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
) -> Fraction:
    """Exact measure of the event of extending stage N of the universal poset."""
    stage = universal_poset_stage(N, cap=poset_cap)
    return Fraction(
        linear_extension_count(stage.stage, cap=extension_cap), factorial(N)
    )


def poset_extension_test(
    o: OrderPrefix, N: int, *, cap: int = DEFAULT_POSET_CAP
) -> bool:
    """Whether the prefix linearly extends stage N of the universal poset."""
    stage = universal_poset_stage(N, cap=cap)
    if o.n < N:
        raise ValueError(f"prefix of size {o.n} cannot be tested against stage {N}")
    return all(o.less(a, b) for a, b in stage.stage.relation)


def poset_test_family(
    *,
    poset_cap: int = DEFAULT_POSET_CAP,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
) -> MLTestFamily:
    """Levels assert extension of ever-larger stages of the universal poset.

    There is no a-priori window schedule; level k searches for the least
    stage whose exact extension measure drops below 2^-k, and raises
    MLLevelUnavailable once the exact-counting cap is hit.
    """

    def level(k: int) -> TestLevel:
        bound = Fraction(1, 2**k)
        for N in range(1, min(poset_cap, extension_cap) + 1):
            measure = poset_level_measure(
                N, poset_cap=poset_cap, extension_cap=extension_cap
            )
            if measure <= bound:
                stage = universal_poset_stage(N, cap=poset_cap)
                event = And(
                    tuple(
                        Atom(FiniteOrder((a, b)))
                        for a, b in sorted(stage.stage.relation)
                    )
                )
                return TestLevel(k, event, measure)
        raise MLLevelUnavailable(
            f"no stage within cap has extension measure below 2^-{k}"
        )

    return MLTestFamily("poset-extension", level)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class LevelResult:
    k: int
    exact_measure: Fraction
    member: bool


@dataclass(frozen=True)
class FamilyVerdict:
    family: str
    levels: tuple[LevelResult, ...]
    verdict: str

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "levels": [
                {"k": r.k, "exact_mu": str(r.exact_measure), "member": r.member}
                for r in self.levels
            ],
            "verdict": self.verdict,
        }


def run_ml_tests(
    stream, families: Iterable[MLTestFamily], depth: int
) -> list[FamilyVerdict]:
    """Evaluate membership of the stream in each family level up to depth.

    Only the prefix covering the level event's support is ever read.  The
    verdict names the greatest failed level, or reports a pass to the depth
    actually reached (test budget exhaustion is a verdict, not an error).
    """
    out = []
    for family in families:
        levels: list[LevelResult] = []
        exhausted_at: int | None = None
        for k in range(1, depth + 1):
            try:
                lvl = family.level(k)
            except MLLevelUnavailable:
                exhausted_at = k
                break
            sup = support(lvl.event)
            prefix = stream.prefix(max(sup) + 1 if sup else 0)
            levels.append(
                LevelResult(k, lvl.exact_measure, evaluate(lvl.event, prefix))
            )
        failed = [r.k for r in levels if r.member]
        if failed:
            verdict = f"fails level {max(failed)}"
        else:
            verdict = f"passes to depth {levels[-1].k if levels else 0}"
        if exhausted_at is not None:
            verdict += f" (level budget exhausted at {exhausted_at})"
        out.append(FamilyVerdict(family.name, tuple(levels), verdict))
    return out


# ---------------------------------------------------------------------------
# The bitstream <-> graph codec


@dataclass(frozen=True)
class GraphPrefix:
    """A finite simple graph on {0,...,n-1}; edges stored as (i, j), i < j."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j}) for {self.n} vertices")

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return (min(i, j), max(i, j)) in self.edges

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def pair_code(i: int, j: int) -> int:
    """The fixed pairing bijection: colex rank of the pair {i < j}."""
    if i == j:
        raise ValueError("pairs have two distinct members")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def code_pair(c: int) -> tuple[int, int]:
    j = 1
    while j * (j + 1) // 2 <= c:
        j += 1
    return c - j * (j - 1) // 2, j


def _vertex_count(n_bits: int) -> int:
    v = 0
    while v * (v - 1) // 2 < n_bits:
        v += 1
    return v


def _as_bits(bits) -> list[int]:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError("bit strings contain only 0 and 1")
        return [int(c) for c in bits]
    return [int(b) for b in bits]


def graph_from_bits(bits: str | Sequence[int]) -> GraphPrefix:
    """Decode a bit string into a graph: bit pair_code({i,j}) is the edge {i,j}."""
    values = _as_bits(bits)
    n = _vertex_count(len(values))
    edges = frozenset(code_pair(c) for c, b in enumerate(values) if b)
    return GraphPrefix(n, edges)


def bits_from_graph(g: GraphPrefix) -> str:
    """Inverse of graph_from_bits on graphs with a full triangular bit count."""
    return "".join(
        "1" if code_pair(c) in g.edges else "0" for c in range(g.n * (g.n - 1) // 2)
    )


def graph_extension_witness(
    g: GraphPrefix, A: Iterable[int], B: Iterable[int]
) -> int | None:
    """Least vertex adjacent to all of A and none of B, if one exists."""
    A, B = set(A), set(B)
    if A & B:
        raise ValueError(f"demand sets intersect: {sorted(A & B)}")
    for z in range(g.n):
        if z in A or z in B:
            continue
        if all(g.adjacent(z, a) for a in A) and not any(g.adjacent(z, b) for b in B):
            return z
    return None
