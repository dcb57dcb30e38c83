"""Exact measures of order events.

The space of total orders of the naturals carries exactly one probability
measure invariant under all permutations.  On the cylinder named by a finite
order of k points it must weigh 1/k!, and every boolean combination of
cylinders is decided by finitely many points, so its measure is an exact
rational.  This script walks through the two independent computation paths.
"""

from uminflow import (
    FiniteOrder,
    adjacency_event,
    mu_adjacency,
    mu_cylinder,
    mu_exact,
    mu_weight_recursive,
    parse_event,
    print_event,
)

# A cylinder: all total orders extending 3 < 1 < 4.  Three points, so 1/3!.
chain = FiniteOrder((3, 1, 4))
print("cylinder 3<1<4:", mu_cylinder(chain))

# Boolean events are written in a small grammar.
event = parse_event("ord(0<1) & !ord(2<3)")
print(f"mu({print_event(event)}) =", mu_exact(event))

# Two paths to the same number: enumerate every order on the support, or
# rewrite to signed conjunctions and peel negated factors recursively.
# The recursive path rounds to a requested dyadic precision at the end.
for k in (4, 10, 20):
    print(f"  weight recursion at 2^-{k}:", mu_weight_recursive(event, k))

# Unsatisfiable constraints get measure zero, tautologies measure one.
print("cyclic:", mu_exact(parse_event("ord(0<1)&ord(1<2)&ord(2<0)")))
print("tautology:", mu_exact(parse_event("ord(0<1)|!ord(0<1)")))

# The adjacency family: the chance that nothing among {0..N-1} separates a
# fixed pair is exactly 2/N, which vanishes as the window grows.  This is the
# engine behind the density randomness test.
print("\nwindow N  mu(pair stays adjacent)")
for N in (2, 4, 8, 16, 32, 64):
    closed = mu_adjacency(0, 1, N)
    print(f"{N:8d}  {closed}")
    if N <= 7:
        assert mu_exact(adjacency_event(0, 1, N)) == closed

# Invariance in action: relabelling the points does not move the measure.
from uminflow import PartialPermutation, relabel_event

sigma = PartialPermutation.from_mapping({0: 2, 1: 0, 2: 3, 3: 1})
print("\noriginal:", mu_exact(event), "| relabeled:", mu_exact(relabel_event(sigma, event)))
