"""Sampling the invariant law on total orders.

Give every natural number an independent 256-bit key and order by key: any
k points are equally likely to appear in any of the k! arrangements, which is
precisely the cylinder law of the unique invariant measure.  Everything is
determined by the seed, and prefixes of one stream are consistent.
"""

import sys
from collections import Counter
from math import sqrt

from uminflow import RandomOrderStream, sample_prefix

# Deterministic and consistent sampling.
stream = RandomOrderStream(2024)
print("prefix of size 8: ", stream.prefix(8).to_sequence())
print("prefix of size 12:", stream.prefix(12).to_sequence())
assert stream.prefix(12).restrict(8) == stream.prefix(8)
assert sample_prefix(2024, 8) == stream.prefix(8)

# Frequency study at N = 4: each of the 24 orders should appear with
# frequency 1/24 up to sampling error.  Pass a trial count to rerun bigger.
trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
counts = Counter(tuple(sample_prefix(seed, 4).to_sequence()) for seed in range(trials))

p = 1 / 24
tolerance = 4 * sqrt(p * (1 - p) / trials)
print(f"\n{trials} seeds, expected frequency {p:.5f}, tolerance {tolerance:.5f}")
print("order        frequency   deviation")
worst = 0.0
for order, count in sorted(counts.items()):
    freq = count / trials
    worst = max(worst, abs(freq - p))
    print(f"{order}  {freq:.5f}     {freq - p:+.5f}")
print(f"\nseen {len(counts)}/24 orders, worst deviation {worst:.5f}",
      "(within tolerance)" if worst <= tolerance else "(OUTSIDE tolerance)")
