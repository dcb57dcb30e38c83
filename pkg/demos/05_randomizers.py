"""Permutation prefixes that carry a recursive dense order onto a sample.

A randomizer moves a fixed recursive copy of the dense order onto an order
that passes randomness tests.  Membership is a tail property, so the artifact
only ever certifies finite depths: sigma below is checked pairwise on its
whole domain.  Conjugating by any permutation translates one certificate
family into another, and no automorphism of the universal poset can do the
job because it keeps the distinguished extension trapped in a shrinking
event.
"""

import random

from uminflow import (
    PartialPermutation,
    RandomOrderStream,
    compute_randomizer,
    conjugation_check,
    poset_automorphism_obstruction,
    rational_presentation,
    verify_certificate,
)

tau = rational_presentation()
stream = RandomOrderStream(31)
cert = compute_randomizer(tau, stream, 60)
print("certificate depth:", cert.n)
print("domain covers 0..59:", cert.sigma.domain() >= set(range(60)))
print("first pairs:", cert.sigma.pairs[:6])

fresh = RandomOrderStream(31)
print("verifies against a re-derived stream:", verify_certificate(cert, tau, fresh))

# corrupting any pair is caught
pairs = dict(cert.sigma.pairs)
a, b = sorted(pairs)[:2]
pairs[a], pairs[b] = pairs[b], pairs[a]
broken = cert.__class__(PartialPermutation.from_mapping(pairs), cert.tau_id, cert.seed, cert.n)
print("corrupted copy verifies:", verify_certificate(broken, tau, RandomOrderStream(31)))

# conjugation: sigma randomizes tau exactly when sigma o pi^-1 randomizes pi.tau
rng = random.Random(0)
images = list(range(10))
rng.shuffle(images)
mapping = dict(enumerate(images))
mapping.update({a: a for a in cert.sigma.domain() if a >= 10})
pi = PartialPermutation.from_mapping(mapping)
xi_prefix = RandomOrderStream(31).prefix(max(cert.sigma.range()) + 1)
print("conjugation identity holds:", conjugation_check(cert.sigma, pi, tau, xi_prefix))

# the obstruction: every stage automorphism leaves the distinguished
# extension inside the extension event, whose measure shrinks with the stage
print("\nstage  automorphisms  trapped  event measure")
for n in (1, 4, 6, 8):
    rep = poset_automorphism_obstruction(n)
    print(f"{n:5d}  {rep.automorphism_count:13d}  {str(rep.all_trapped):7s} {rep.event_measure}")
