"""Permutation prefixes that transport a recursive dense order onto a sampled one.

A depth-n certificate records a partial permutation sigma with
a <_tau b  iff  sigma(a) <_xi sigma(b) over its whole domain: the finite,
checkable part of "sigma carries tau to the sampled order".  Full membership
in the randomizer set is a tail property and is never asserted; certificates
only ever claim their verified depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .fraisse import (
    DEFAULT_POSET_CAP,
    DEFAULT_SEARCH_BUDGET,
    OrderPresentation,
    SearchBudgetError,
    universal_poset_stage,
)
from .measure import DEFAULT_EXTENSION_CAP, linear_extension_count
from .orders import OrderPrefix, PartialPermutation, act
from .sampler import KEY_BITS, RandomOrderStream

_KEY_SPACE = 2**KEY_BITS
_SCAN_CHUNKS = (1 << 10, 1 << 12, 1 << 14)


@dataclass(frozen=True)
class RandomizerCertificate:
    """A verified-depth witness that sigma carries tau onto the seeded order."""

    sigma: PartialPermutation
    tau_id: str
    seed: int
    n: int

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "tau": self.tau_id,
            "pairs": [list(p) for p in self.sigma.pairs],
            "depth": self.n,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RandomizerCertificate":
        sigma = PartialPermutation(tuple((a, b) for a, b in data["pairs"]))
        return cls(sigma, data["tau"], data["seed"], data["depth"])


def _surrogate_values(pres: OrderPresentation):
    """Rational stand-ins for a presentation without a value function,
    assigned in code order by midpoints and unit end steps."""
    cache: dict[int, Fraction] = {}

    def value(a: int) -> Fraction:
        for k in range(len(cache), a + 1):
            below = [v for c, v in cache.items() if pres.less(c, k)]
            above = [v for c, v in cache.items() if pres.less(k, c)]
            if below and above:
                v = (max(below) + min(above)) / 2
            elif below:
                v = max(below) + 1
            elif above:
                v = min(above) - 1
            else:
                v = Fraction(0)
            cache[k] = v
        return cache[a]

    return value


def _scan_keys(xi, taken, lo_key: int, hi_key: int, target: int, budget: int) -> int:
    """Stream index with key inside (lo_key, hi_key) closest to the target.

    Scans in growing chunks and stops once a few candidates have been seen:
    picking near-target keys (rather than the least index) is what keeps
    later interval demands from collapsing.
    """
    best = None
    best_dist = None
    seen = 0
    start = 0
    for end in (*_SCAN_CHUNKS, budget):
        for b in range(start, min(end, budget)):
            if b in taken:
                continue
            k = xi.key(b)
            if not lo_key < k < hi_key:
                continue
            seen += 1
            d = abs(k - target)
            if best_dist is None or d < best_dist:
                best, best_dist = b, d
        if seen >= 3 or (best is not None and end >= budget):
            return best
        start = end
    if best is not None:
        return best
    raise SearchBudgetError(
        f"stream gap of width {(hi_key - lo_key) / 2**KEY_BITS:.3g} "
        "has no index within budget",
        blocking=target,
    )


def _scan_codes(
    pres, value, taken, v_lo, v_hi, target: Fraction | None, budget: int
) -> int:
    """Code with value inside (v_lo, v_hi): nearest the target when one is
    given, else the least code (used at the ends, where no scale exists)."""
    best = None
    best_dist = None
    start = 0
    for end in (*_SCAN_CHUNKS, budget):
        for c in range(start, min(end, budget)):
            if c in taken:
                continue
            v = value(c)
            if v_lo is not None and not v_lo < v:
                continue
            if v_hi is not None and not v < v_hi:
                continue
            if target is None:
                return c
            d = abs(v - target)
            if best_dist is None or d < best_dist:
                best, best_dist = c, d
        if best is not None:
            return best
        start = end
    raise SearchBudgetError(
        f"{pres.name} interval ({v_lo}, {v_hi}) has no code within budget",
        blocking=0,
    )


def compute_randomizer(
    tau: OrderPresentation,
    xi: RandomOrderStream,
    n: int,
    *,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> RandomizerCertificate:
    """Back-and-forth between tau and the stream's order, to depth n.

    Greedy least-index images wedge quickly here: nested order demands (for
    example a chain of values shrinking toward a point) cut the feasible key
    interval by a random factor each step, so the witness index blows up
    exponentially with depth.  Images are instead chosen near the key
    proportional to the element's position in value space, which keeps the
    shrinkage polynomial; the stream still reveals keys on demand and a
    search past the budget raises with the blocking demand.
    """
    value = tau.value_fn if tau.value_fn is not None else _surrogate_values(tau)
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def forth():
        a = next(i for i in range(n + len(fwd) + 1) if i not in fwd)
        va = value(a)
        lo = hi = None  # (value, image key) neighbours of a in tau
        for a0, b0 in fwd.items():
            v0 = value(a0)
            if v0 < va:
                if lo is None or v0 > lo[0]:
                    lo = (v0, xi.key(b0))
            elif hi is None or v0 < hi[0]:
                hi = (v0, xi.key(b0))
        lo_key = lo[1] if lo is not None else 0
        hi_key = hi[1] if hi is not None else _KEY_SPACE
        if lo is not None and hi is not None:
            t = (va - lo[0]) / (hi[0] - lo[0])
        elif lo is not None:
            t = Fraction(1, 10)  # new maximum: leave most key space above
        elif hi is not None:
            t = Fraction(9, 10)  # new minimum: leave most key space below
        else:
            t = Fraction(1, 2)
        target = lo_key + int(t * (hi_key - lo_key))
        b = _scan_keys(xi, bwd, lo_key, hi_key, target, search_budget)
        fwd[a], bwd[b] = b, a

    def back():
        b = next(i for i in range(n + len(bwd) + 1) if i not in bwd)
        kb = xi.key(b)
        lo = hi = None  # (key, preimage value) neighbours of b in the stream
        for b0, a0 in bwd.items():
            k0 = xi.key(b0)
            if k0 < kb:
                if lo is None or k0 > lo[0]:
                    lo = (k0, value(a0))
            elif hi is None or k0 < hi[0]:
                hi = (k0, value(a0))
        v_lo = lo[1] if lo is not None else None
        v_hi = hi[1] if hi is not None else None
        if v_lo is not None and v_hi is not None:
            t = Fraction(kb - lo[0], hi[0] - lo[0])
            target = v_lo + t * (v_hi - v_lo)
        elif v_lo is not None:
            target = v_lo + 1
        elif v_hi is not None:
            target = v_hi - 1
        else:
            target = Fraction(0)
        if tau.locate_fn is not None:
            a = tau.locate_fn(v_lo, v_hi, target)
        else:
            interior = v_lo is not None and v_hi is not None
            a = _scan_codes(
                tau, value, fwd, v_lo, v_hi, target if interior else None,
                search_budget,
            )
        fwd[a], bwd[b] = b, a

    def covered() -> bool:
        return all(i in fwd for i in range(n)) and all(i in bwd for i in range(n))

    while not covered():
        forth()
        if covered():
            break
        back()
    return RandomizerCertificate(
        PartialPermutation.from_mapping(fwd), tau.name, xi.seed, n
    )


def verify_certificate(
    c: RandomizerCertificate, tau: OrderPresentation, xi: RandomOrderStream
) -> bool:
    """Re-derive the stream order and check the invariant over every pair."""
    if c.seed != xi.seed:
        raise ValueError(f"certificate seed {c.seed} does not match stream {xi.seed}")
    if c.tau_id != tau.name:
        raise ValueError(
            f"certificate source {c.tau_id!r} does not match presentation {tau.name!r}"
        )
    items = c.sigma.pairs
    for i, (a, fa) in enumerate(items):
        for b, fb in items[i + 1 :]:
            if tau.less(a, b) != xi.less(fa, fb):
                return False
    return True


def conjugation_check(
    sigma: PartialPermutation,
    pi: PartialPermutation,
    tau: OrderPresentation,
    xi_prefix: OrderPrefix,
) -> bool:
    """The prefix image of conjugating the randomizer set by a permutation.

    Checks that sigma carries tau to the prefix order exactly when
    sigma o pi^-1 carries pi.tau to it, and reports whether the two sides
    agree (they must, in both the holding and the failing case).
    """
    dom = sorted(sigma.domain())
    if any(sigma(a) >= xi_prefix.n for a in dom):
        raise ValueError("sigma maps outside the prefix domain")
    if not pi.domain() >= set(dom):
        raise ValueError("pi is not defined on sigma's domain")

    lhs = all(
        tau.less(a, b) == xi_prefix.less(sigma(a), sigma(b))
        for a in dom
        for b in dom
        if a != b
    )

    pi_inv = pi.inverse()
    sigma_conj = sigma.compose(pi_inv)  # sigma o pi^-1, defined on pi(dom)

    def pi_tau_less(x: int, y: int) -> bool:
        return tau.less(pi_inv(x), pi_inv(y))

    conj_dom = sorted(sigma_conj.domain())
    rhs = all(
        pi_tau_less(x, y) == xi_prefix.less(sigma_conj(x), sigma_conj(y))
        for x in conj_dom
        for y in conj_dom
        if x != y
    )
    return lhs == rhs


@dataclass(frozen=True)
class ObstructionReport:
    """Every stage automorphism leaves the distinguished extension trapped."""

    n: int
    automorphism_count: int
    trapped_count: int
    event_measure: Fraction

    @property
    def all_trapped(self) -> bool:
        return self.trapped_count == self.automorphism_count


def stage_automorphisms(n: int, *, cap: int = DEFAULT_POSET_CAP):
    """All relation-preserving bijections of stage n of the universal poset."""
    rel = universal_poset_stage(n, cap=cap).stage.relation
    for perm in permutations(range(n)):
        if all(((perm[a], perm[b]) in rel) == ((a, b) in rel)
               for a in range(n) for b in range(n) if a != b):
            yield PartialPermutation(tuple(enumerate(perm)))


def poset_automorphism_obstruction(
    n: int,
    *,
    cap: int = DEFAULT_POSET_CAP,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
) -> ObstructionReport:
    """Demonstrate at finite scale why no stage automorphism randomizes.

    Acting on the stage's own linear extension by any automorphism lands
    back inside the extension event, whose exact measure shrinks with n.
    """
    stage = universal_poset_stage(n, cap=cap)
    rel = stage.stage.relation
    canon = stage.canon
    total = 0
    trapped = 0
    for g in stage_automorphisms(n, cap=cap):
        total += 1
        image = act(g, canon)
        if all(image.less(a, b) for a, b in rel):
            trapped += 1
    measure = Fraction(
        linear_extension_count(stage.stage, cap=extension_cap), factorial(n)
    )
    return ObstructionReport(n, total, trapped, measure)
