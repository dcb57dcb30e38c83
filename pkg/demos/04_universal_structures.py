"""Three universal countable structures with decidable presentations.

The dense linear order without endpoints, the random graph, and the
universal poset (with a distinguished linear extension) are each presented
here as concrete decidable relations on the naturals, and the back-and-forth
procedure turns any two presentations of the dense order into an explicit
isomorphism.
"""

from uminflow import (
    back_and_forth,
    check_density,
    poset_canon_presentation,
    poset_extension_audit,
    rado_adjacent,
    rado_extension_witness,
    rational_presentation,
    rational_presentation_variant,
    rational_value,
    universal_poset_stage,
)

# -- the dense order: naturals enumerate the rationals breadth-first
print("first codes as rationals:", [str(rational_value(n)) for n in range(9)])
report = check_density(rational_presentation(), 10, search_bound=200)
print("dense + unbounded on codes <= 10:", report.all_witnessed)

# -- the random graph: adjacency by binary digits
print("\n0 ~ 5:", rado_adjacent(0, 5), " 1 ~ 5:", rado_adjacent(1, 5))
# one point adjacent to all of A and none of B, in closed form
for A, B in (({0, 2}, {1}), (set(), {0, 1}), ({1, 3, 5}, {0, 2, 4})):
    z = rado_extension_witness(A, B)
    print(f"witness for A={sorted(A)}, B={sorted(B)}: {z}")

# -- the universal poset, grown one point per unmet demand
stage = universal_poset_stage(10)
print("\nstage 10 relation:", sorted(stage.stage.relation))
print("stage 10 extension:", stage.canon.to_sequence())
print("nested:", universal_poset_stage(6).stage.relation
      == frozenset((a, b) for a, b in stage.stage.relation if a < 6 and b < 6))

audit = poset_extension_audit(range(4), witness_bound=160, cap=200)
print(f"one-point extension audit over {{0..3}}: "
      f"{audit.demands_checked} demands, complete={audit.complete}")

canon_density = check_density(poset_canon_presentation(cap=200), 6, 160)
print("distinguished extension dense at small scale:", canon_density.all_witnessed)

# -- back and forth between two presentations of the dense order
v1, v2 = rational_presentation(), rational_presentation_variant()
iso = back_and_forth(v1, v2, 30)
print(f"\nisomorphism covering 0..29 both sides: {len(iso.pairs)} pairs")
dom = sorted(iso.domain())
assert all(v1.less(a, b) == v2.less(iso(a), iso(b))
           for a in dom for b in dom if a != b)
print("order preserved on the whole domain: True")
print("identity when both sides agree:",
      back_and_forth(v1, v1, 10).pairs == tuple((i, i) for i in range(10)))
