"""Recursive presentations of three universal countable structures.

A presentation is a decidable relation on N: the dense linear order without
endpoints (compare by a fixed enumeration of the rationals), the random graph
(a binary-digit adjacency predicate), and a universal poset built in stages by
a deterministic demand-filling construction together with a distinguished
linear extension of it.  Isomorphisms between order presentations are produced
by the effective back-and-forth procedure.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, count, product
from math import gcd
from typing import Callable, Iterable, Iterator

from .measure import CapExceededError, FinitePoset
from .orders import OrderPrefix, PartialPermutation

DEFAULT_POSET_CAP = 64
DEFAULT_SEARCH_BUDGET = 1 << 16


class SearchBudgetError(RuntimeError):
    """A witness search was abandoned; the presentation is not homogeneous
    at the explored scale, or the budget is too small for it."""

    def __init__(self, message: str, blocking: int):
        super().__init__(message)
        self.blocking = blocking


@dataclass(frozen=True, eq=False)
class OrderPresentation:
    """A total, decidable, irreflexive comparison predicate on N.

    ``value_fn`` (optional) realizes the order by rational values;
    ``locate_fn`` (optional) finds an element strictly inside an open value
    interval (either end may be None for unbounded).  Both are capabilities
    used to steer witness searches; the comparison predicate alone determines
    the structure.
    """

    name: str
    less_fn: Callable[[int, int], bool]
    value_fn: Callable[[int], Fraction] | None = None
    locate_fn: Callable[[Fraction | None, Fraction | None, Fraction], int] | None = None

    def less(self, a: int, b: int) -> bool:
        return self.less_fn(a, b)


@dataclass(frozen=True, eq=False)
class GraphPresentation:
    """A symmetric, irreflexive, decidable adjacency predicate on N."""

    name: str
    adj_fn: Callable[[int, int], bool]

    def adjacent(self, i: int, j: int) -> bool:
        return self.adj_fn(i, j)


# ---------------------------------------------------------------------------
# The rational order


_rational_values: list[Fraction] = [Fraction(0)]
_rational_positive: Iterator[Fraction] | None = None
_rational_lock = threading.Lock()


def _positive_rationals() -> Iterator[Fraction]:
    """Reduced positive fractions in breadth-first order of numerator+denominator."""
    for total in count(2):
        for p in range(1, total):
            q = total - p
            if gcd(p, q) == 1:
                yield Fraction(p, q)


def rational_value(n: int) -> Fraction:
    """The fixed bijection N -> Q: 0, then each positive rational and its negative."""
    global _rational_positive
    with _rational_lock:
        if _rational_positive is None:
            _rational_positive = _positive_rationals()
        while len(_rational_values) <= n:
            r = next(_rational_positive)
            _rational_values.append(r)
            _rational_values.append(-r)
    return _rational_values[n]


def rational_order_less(a: int, b: int) -> bool:
    """Dense order without endpoints on N, compared through rational_value."""
    return rational_value(a) < rational_value(b)


_totient_cumulative = [0, 0]  # cumulative #reduced positive fractions with p+q < s


def _extend_totients(s: int):
    if s < len(_totient_cumulative):
        return
    top = max(2 * len(_totient_cumulative), s + 1)
    phi = list(range(top))
    for d in range(2, top):
        if phi[d] == d:  # d prime
            for mult in range(d, top, d):
                phi[mult] -= phi[mult] // d
    cum = [0, 0, 0]  # cum[s] = number of reduced fractions with p + q < s
    for d in range(2, top):
        cum.append(cum[-1] + phi[d])
    del _totient_cumulative[:]
    _totient_cumulative.extend(cum)


def rational_code(value: Fraction) -> int:
    """Inverse of rational_value: the code enumerating the given rational."""
    if value == 0:
        return 0
    p, q = abs(value.numerator), value.denominator
    s = p + q
    with _rational_lock:
        _extend_totients(s)
        base = _totient_cumulative[s]
    offset = sum(1 for p2 in range(1, p) if gcd(p2, s) == 1)
    index = base + offset
    return 2 * index + 1 if value > 0 else 2 * index + 2


def _simplest_positive(lo: Fraction, hi: Fraction | None) -> Fraction:
    """Smallest-complexity rational strictly inside (lo, hi), 0 <= lo."""
    n = lo.numerator // lo.denominator + 1
    if hi is None or n < hi:
        return Fraction(n)
    whole = lo.numerator // lo.denominator
    frac_lo = lo - whole
    inner_lo = 1 / (hi - whole)
    inner_hi = None if frac_lo == 0 else 1 / frac_lo
    return whole + 1 / _simplest_positive(inner_lo, inner_hi)


def simplest_between(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    """A low-complexity rational strictly inside the open interval."""
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if (lo is None or lo < 0) and (hi is None or hi > 0):
        return Fraction(0)
    if hi is not None and hi <= 0:
        mirrored = _simplest_positive(-hi, None if lo is None else -lo)
        return -mirrored
    return _simplest_positive(lo if lo is not None else Fraction(0), hi)


def rational_near(
    lo: Fraction | None, hi: Fraction | None, target: Fraction
) -> Fraction:
    """A modest-complexity rational strictly inside the interval, close to
    the target (within a sixteenth of the interval when it is bounded)."""
    if lo is None:
        lo = min(target, hi) - 1 if hi is not None else target - 1
    if hi is None:
        hi = max(target, lo) + 1
    tolerance = (hi - lo) / 16
    cur_lo, cur_hi = lo, hi
    best = simplest_between(cur_lo, cur_hi)
    for _ in range(64):
        if abs(best - target) <= tolerance:
            break
        if best < target:
            cur_lo = best
        else:
            cur_hi = best
        best = simplest_between(cur_lo, cur_hi)
    return best


def _locate_rational(
    lo: Fraction | None, hi: Fraction | None, target: Fraction
) -> int:
    return rational_code(rational_near(lo, hi, target))


def rational_presentation() -> OrderPresentation:
    return OrderPresentation(
        "rational-v1", rational_order_less, rational_value, _locate_rational
    )


def rational_presentation_variant() -> OrderPresentation:
    """A second recursive dense order: the same values read through a
    re-enumeration that swaps each even code with its odd successor."""
    return OrderPresentation(
        "rational-v2",
        lambda a, b: rational_value(a ^ 1) < rational_value(b ^ 1),
        lambda a: rational_value(a ^ 1),
        lambda lo, hi, target: _locate_rational(lo, hi, target) ^ 1,
    )


# ---------------------------------------------------------------------------
# The random graph


def rado_adjacent(i: int, j: int) -> bool:
    """Binary-digit adjacency: for i < j, test bit i of j; symmetrized."""
    if i == j:
        raise ValueError("adjacency is irreflexive")
    lo, hi = (i, j) if i < j else (j, i)
    return (hi >> lo) & 1 == 1


def rado_presentation() -> GraphPresentation:
    return GraphPresentation("rado-v1", rado_adjacent)


def rado_extension_witness(A: Iterable[int], B: Iterable[int]) -> int:
    """A point adjacent to everything in A and nothing in B.

    The bit pattern of sum(2^a for a in A) realizes the demand whenever the
    candidate is fresh and dominates B; otherwise shifting it above
    max(A u B) always does.
    """
    A, B = set(A), set(B)
    if A & B:
        raise ValueError(f"demand sets intersect: {sorted(A & B)}")
    z = sum(1 << a for a in A)
    if A and _valid_witness(z, A, B):
        return z
    return z + (1 << (max(A | B, default=-1) + 1))


def _valid_witness(z: int, A: set[int], B: set[int]) -> bool:
    if z in A | B:
        return False
    return all(rado_adjacent(z, a) for a in A) and not any(
        rado_adjacent(z, b) for b in B
    )


# ---------------------------------------------------------------------------
# The universal poset with its distinguished linear extension
#
# Points are added one at a time.  A fixed dovetailed stream of demands is
# scanned in order, and each new point realizes the first demand that is
# consistent with the current stage and not yet witnessed.  Demand kinds:
#
#   genesis            the first point
#   just_above e       a point directly above e in the linear extension,
#                      above exactly e's lower set in the poset
#   just_below e       the dual
#   pattern s, p       a point with prescribed relation (below/above/
#                      incomparable) to every element of {0..s-1}
#   between u, v       a point strictly between u and v in the linear
#                      extension, incomparable to everything
#
# Full pattern pools are emitted for domains up to 4 elements so that every
# one-point extension demand over {0,...,3} is eventually realized; the
# interval demands are delayed so that each of the first ten points carries
# at least one strict relation, and an infinite tail of larger patterns keeps
# the construction fair.

_PENDING, _LIVE, _DEAD, _MET = 0, 1, 2, 3

_FULL_PATTERN_ROUNDS = 4
_BETWEEN_DELAY = 11
_TAIL_CHUNK = 2


def _grade_patterns(s: int) -> Iterator[tuple[int, ...]]:
    """Patterns over {0..s-1} with at least one relation: 0 incomparable,
    1 below the new point, 2 above it; fewest relations first."""
    for r in range(1, s + 1):
        for positions in combinations(range(s), r):
            for signs in product((1, 2), repeat=r):
                p = [0] * s
                for i, sign in zip(positions, signs):
                    p[i] = sign
                yield tuple(p)


def _tail_patterns() -> Iterator[tuple[str, int, tuple[int, ...]]]:
    for s in count(_FULL_PATTERN_ROUNDS + 1):
        for p in _grade_patterns(s):
            yield ("pattern", s, p)


def _demand_stream() -> Iterator[tuple]:
    yield ("genesis",)
    tail = _tail_patterns()
    for r in count(1):
        e = r - 1
        yield ("just_above", e)
        yield ("just_below", e)
        if r <= _FULL_PATTERN_ROUNDS:
            for p in _grade_patterns(r):
                yield ("pattern", r, p)
        if r >= _BETWEEN_DELAY:
            m = r - _BETWEEN_DELAY
            for j in range(m):
                yield ("between", m, j)
                yield ("between", j, m)
        for _ in range(_TAIL_CHUNK):
            yield next(tail)


class StageBuilder:
    """Deterministic incremental construction of the poset and its extension."""

    def __init__(self):
        self.canon: list[int] = []
        self.pos: dict[int, int] = {}
        self.down: list[set[int]] = []
        self.up: list[set[int]] = []
        self._stream = _demand_stream()
        self._demands: list[tuple] = []
        self._status: list[int] = []
        self._needs: list[tuple[frozenset, frozenset, frozenset] | None] = []
        self._pending: set[int] = set()
        self._live: set[int] = set()
        self._lock = threading.RLock()

    @property
    def n(self) -> int:
        return len(self.canon)

    def grow_to(self, n: int):
        with self._lock:
            while self.n < n:
                self._step()

    # -- demand bookkeeping

    def _needed(self, d: tuple) -> int:
        kind = d[0]
        if kind == "genesis":
            return 0
        if kind in ("just_above", "just_below"):
            return d[1] + 1
        if kind == "pattern":
            return d[1]
        return max(d[1], d[2]) + 1  # between

    def _materialize(self, idx: int):
        while len(self._demands) <= idx:
            d = next(self._stream)
            self._demands.append(d)
            self._status.append(_PENDING)
            self._needs.append(None)
            self._pending.add(len(self._demands) - 1)

    def _classify(self, idx: int):
        """Decide consistency once all referenced elements exist; static after."""
        d = self._demands[idx]
        kind = d[0]
        if kind == "genesis":
            self._needs[idx] = (frozenset(), frozenset(), frozenset())
            self._set_live(idx)
            return
        if kind == "just_above":
            e = d[1]
            below = frozenset(self.down[e]) & frozenset(range(e + 1))
            incomp = frozenset(range(e + 1)) - below
            self._needs[idx] = (below, frozenset(), incomp)
            self._set_live(idx)
            return
        if kind == "just_below":
            e = d[1]
            above = frozenset(self.up[e]) & frozenset(range(e + 1))
            incomp = frozenset(range(e + 1)) - above
            self._needs[idx] = (frozenset(), above, incomp)
            self._set_live(idx)
            return
        if kind == "pattern":
            s, p = d[1], d[2]
            D = frozenset(i for i in range(s) if p[i] == 1)
            U = frozenset(i for i in range(s) if p[i] == 2)
            I = frozenset(i for i in range(s) if p[i] == 0)
            down_all: set[int] = set()
            for x in D:
                down_all |= self.down[x]
            up_all: set[int] = set()
            for x in U:
                up_all |= self.up[x]
            consistent = (
                down_all & set(range(s)) == set(D)
                and up_all & set(range(s)) == set(U)
                and all(u in self.up[a] for a in D for u in U)
            )
            if not consistent:
                self._status[idx] = _DEAD
                return
            self._needs[idx] = (D, U, I)
            self._set_live(idx)
            return
        # between
        u, v = d[1], d[2]
        if self.pos[u] >= self.pos[v]:
            self._status[idx] = _DEAD
            return
        self._needs[idx] = (frozenset(), frozenset(), frozenset())
        self._set_live(idx)

    def _set_live(self, idx: int):
        self._status[idx] = _LIVE
        self._live.add(idx)
        for x in range(self.n):
            if self._witnesses(idx, x):
                self._status[idx] = _MET
                self._live.discard(idx)
                return

    def _witnesses(self, idx: int, x: int) -> bool:
        d = self._demands[idx]
        kind = d[0]
        if kind == "genesis":
            return True
        if kind == "between":
            return self.pos[d[1]] < self.pos[x] < self.pos[d[2]]
        s = d[1] + 1 if kind in ("just_above", "just_below") else d[1]
        if x < s:
            return False
        below, above, incomp = self._needs[idx]
        down_x, up_x = self.down[x], self.up[x]
        return (
            all(i in down_x for i in below)
            and all(i in up_x for i in above)
            and all(i not in down_x and i not in up_x for i in incomp)
        )

    # -- construction steps

    def _step(self):
        n = self.n
        for idx in sorted(self._pending):
            if self._needed(self._demands[idx]) <= n:
                self._pending.discard(idx)
                self._classify(idx)
        idx = 0
        while True:
            self._materialize(idx)
            status = self._status[idx]
            if status == _LIVE:
                break
            if status == _PENDING and self._needed(self._demands[idx]) <= n:
                self._pending.discard(idx)
                self._classify(idx)
                if self._status[idx] == _LIVE:
                    break
            idx += 1
        self._realize(idx)

    def _realize(self, idx: int):
        d = self._demands[idx]
        kind = d[0]
        x = self.n
        if kind == "genesis":
            below: set[int] = set()
            above: set[int] = set()
            gap = 0
        elif kind == "between":
            below, above = set(), set()
            gap = self.pos[d[1]] + 1
        elif kind == "just_above":
            below = set(self.down[d[1]])
            above = set()
            gap = max(self.pos[y] for y in below) + 1
        elif kind == "just_below":
            below = set()
            above = set(self.up[d[1]])
            gap = min(self.pos[u] for u in above)
        else:  # pattern
            D, U, _ = self._needs[idx]
            below = set()
            for a in D:
                below |= self.down[a]
            above = set()
            for u in U:
                above |= self.up[u]
            if above:
                gap = min(self.pos[u] for u in above)
            elif below:
                gap = max(self.pos[y] for y in below) + 1
            else:
                gap = 0
        self.down.append(below | {x})
        self.up.append(above | {x})
        for y in below:
            self.up[y].add(x)
        for u in above:
            self.down[u].add(x)
        self.canon.insert(gap, x)
        self.pos = {e: i for i, e in enumerate(self.canon)}
        self._status[idx] = _MET
        self._live.discard(idx)
        for j in sorted(self._live):
            if self._witnesses(j, x):
                self._status[j] = _MET
                self._live.discard(j)

    # -- snapshots

    def stage_pairs(self, n: int) -> frozenset[tuple[int, int]]:
        return frozenset(
            (a, b) for b in range(n) for a in self.down[b] if a != b and a < n
        )

    def canon_sequence(self, n: int) -> list[int]:
        return [e for e in self.canon if e < n]

    def canon_less(self, a: int, b: int) -> bool:
        self.grow_to(max(a, b) + 1)
        return self.pos[a] < self.pos[b]


@dataclass(frozen=True)
class PosetStage:
    """A stage of the universal poset with its linear extension prefix."""

    stage: FinitePoset
    canon: OrderPrefix

    def __post_init__(self):
        for a, b in self.stage.relation:
            if not self.canon.less(a, b):
                raise ValueError(f"extension violates {a} < {b}")

    def to_json(self) -> dict:
        return {
            "n": self.stage.n,
            "pairs": sorted(self.stage.relation),
            "canon": self.canon.to_sequence(),
        }


_shared_builder = StageBuilder()


def universal_poset_stage(N: int, *, cap: int = DEFAULT_POSET_CAP) -> PosetStage:
    """Stage N of the deterministic generic construction.

    Stages are nested: the relation and extension of stage N restricted to
    {0,...,M-1} equal those of stage M.
    """
    if N > cap:
        raise CapExceededError(f"stage {N} exceeds poset cap {cap}")
    _shared_builder.grow_to(N)
    stage = FinitePoset(N, _shared_builder.stage_pairs(N))
    canon = OrderPrefix.from_sequence(_shared_builder.canon_sequence(N))
    return PosetStage(stage, canon)


def poset_canon_presentation(*, cap: int = DEFAULT_POSET_CAP) -> OrderPresentation:
    """The linear extension of the universal poset as an order on all of N."""

    def less(a: int, b: int) -> bool:
        if max(a, b) >= cap:
            raise CapExceededError(f"element {max(a, b)} beyond poset cap {cap}")
        return _shared_builder.canon_less(a, b)

    return OrderPresentation("poset-canon", less)


@dataclass(frozen=True)
class ExtensionAudit:
    """Outcome of the bounded one-point extension audit."""

    base: tuple[int, ...]
    witness_bound: int
    demands_checked: int
    unrealized: tuple[tuple, ...]

    @property
    def complete(self) -> bool:
        return not self.unrealized


def poset_extension_audit(
    base: Iterable[int] = range(4),
    witness_bound: int = DEFAULT_POSET_CAP,
    *,
    cap: int = DEFAULT_POSET_CAP,
) -> ExtensionAudit:
    """Check that every admissible demand (A, B, Z) over the base elements is
    realized by some point below the witness bound."""
    base = tuple(sorted(base))
    stage = universal_poset_stage(witness_bound, cap=cap)
    rel = stage.stage.relation
    checked = 0
    unrealized = []
    for assignment in product((0, 1, 2, 3), repeat=len(base)):
        A = {e for e, a in zip(base, assignment) if a == 1}
        B = {e for e, a in zip(base, assignment) if a == 2}
        Z = {e for e, a in zip(base, assignment) if a == 3}
        if not _demand_admissible(A, B, Z, rel):
            continue
        checked += 1
        witness = None
        for x in range(witness_bound):
            if x in A | B | Z:
                continue
            if (
                all((a, x) in rel for a in A)
                and all((x, b) in rel for b in B)
                and all((z, x) not in rel and (x, z) not in rel for z in Z)
            ):
                witness = x
                break
        if witness is None:
            unrealized.append((tuple(sorted(A)), tuple(sorted(B)), tuple(sorted(Z))))
    return ExtensionAudit(base, witness_bound, checked, tuple(unrealized))


def _demand_admissible(A: set, B: set, Z: set, rel: frozenset) -> bool:
    if not all((a, b) in rel for a in A for b in B):
        return False
    if any((z, a) in rel for a in A for z in Z):
        return False
    if any((b, z) in rel for b in B for z in Z):
        return False
    return True


# ---------------------------------------------------------------------------
# Density reports and back-and-forth


@dataclass
class DensityReport:
    """Witness table for density and unboundedness at a finite scale."""

    presentation: str
    n: int
    search_bound: int
    between: dict[tuple[int, int], int | None]
    below: dict[int, int | None]
    above: dict[int, int | None]

    @property
    def unwitnessed_pairs(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.between.items() if v is None)

    @property
    def unwitnessed_endpoints(self) -> list[int]:
        bad = {k for k, v in self.below.items() if v is None}
        bad |= {k for k, v in self.above.items() if v is None}
        return sorted(bad)

    @property
    def all_witnessed(self) -> bool:
        return not self.unwitnessed_pairs and not self.unwitnessed_endpoints


def check_density(
    pres: OrderPresentation, n: int, search_bound: int
) -> DensityReport:
    """Search witnesses j <= search_bound for betweenness of every pair
    a != b <= n and for points below and above every a <= n."""
    between: dict[tuple[int, int], int | None] = {}
    for a in range(n + 1):
        for b in range(n + 1):
            if a == b or not pres.less(a, b):
                continue
            between[(a, b)] = next(
                (
                    j
                    for j in range(search_bound + 1)
                    if j != a and j != b and pres.less(a, j) and pres.less(j, b)
                ),
                None,
            )
    below: dict[int, int | None] = {}
    above: dict[int, int | None] = {}
    for a in range(n + 1):
        below[a] = next(
            (j for j in range(search_bound + 1) if j != a and pres.less(j, a)), None
        )
        above[a] = next(
            (k for k in range(search_bound + 1) if k != a and pres.less(a, k)), None
        )
    return DensityReport(pres.name, n, search_bound, between, below, above)


def back_and_forth(
    pres_a: OrderPresentation,
    pres_b: OrderPresentation,
    n: int,
    *,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> PartialPermutation:
    """A partial order-isomorphism whose domain and range cover {0,...,n-1}.

    Alternates forth steps (map the least unmapped point to the least
    compatible image) with back steps.  Deterministic given the
    presentations; a witness search that exceeds the budget raises
    SearchBudgetError naming the blocking point.
    """
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def covered() -> bool:
        return all(i in fwd for i in range(n)) and all(i in bwd for i in range(n))

    def extend(pres_x, pres_y, x, pairs: dict[int, int], taken: dict[int, int]) -> int:
        # The map is an order isomorphism at every step, so "compatible with
        # every mapped pair" collapses to lying strictly between the images
        # of x's nearest mapped neighbours.
        lo = hi = None
        for x0, y0 in pairs.items():
            if pres_x.less(x0, x):
                if lo is None or pres_x.less(lo[0], x0):
                    lo = (x0, y0)
            elif hi is None or pres_x.less(x0, hi[0]):
                hi = (x0, y0)
        for y in range(search_budget):
            if y in taken:
                continue
            if lo is not None and not pres_y.less(lo[1], y):
                continue
            if hi is not None and not pres_y.less(y, hi[1]):
                continue
            return y
        raise SearchBudgetError(f"no partner for {x} within budget", blocking=x)

    while not covered():
        a = next(i for i in count() if i not in fwd)
        b = extend(pres_a, pres_b, a, fwd, bwd)
        fwd[a], bwd[b] = b, a
        if covered():
            break
        b = next(i for i in count() if i not in bwd)
        a = extend(pres_b, pres_a, b, bwd, fwd)
        fwd[a], bwd[b] = b, a
    return PartialPermutation.from_mapping(fwd)
