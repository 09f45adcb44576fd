"""
Classifying generalized squares and pentagrams
==============================================

Arbitrary nonzero coefficients are first rescaled to a reduced form. Over an
odd prime the reduced system is either full rank, hence classically solvable,
or uniform, where a single linear combination s of the right-hand sides
decides everything: s = 0 gives a classical solution, s != 0 rules out
quantum solutions altogether.
"""

import itertools

from lcsmod.families import PentagramSpec, ReducedSquare, SquareSpec, classify, classify_square, reduce_spec
from lcsmod.lcs import classically_satisfiable

# %% One spec, end to end.
spec = SquareSpec(7, [3, 1, 5, 2, 2, 6, 1, 4, 1, 6, 2, 3, 1, 1, 4, 2, 5, 3], [1, 0, 2, 0, 0, 1])
red = reduce_spec(spec)
print("reduced gammas:", red.gammas, "reduced b:", red.b, "uniform:", red.uniform)
c = classify(spec)
print(c.kind, "via", c.method, "->", c.assignment.tolist())

# %% The uniform regime at d = 3: the phase s splits the 729 right-hand sides.
counts = {}
for b in itertools.product(range(3), repeat=6):
    c = classify_square(ReducedSquare(3, (1,) * 6, b))
    counts[c.kind] = counts.get(c.kind, 0) + 1
print("d=3, all gammas 1:", counts)

# %% A no-quantum instance comes with its reason.
c = classify(SquareSpec(5, [1] * 18, [0, 0, 0, 0, 0, 1]))
print(c.kind)
print("  relation:   ", c.witness.relation_str())
print("  consequence:", c.verdict.consequence)

# %% Pentagram with phase zero, and agreement with a direct solve.
spec = PentagramSpec(7, [1] * 20, [3, 1, 1, 1, 0])
c = classify(spec)
print("pentagram:", c.kind, c.assignment.tolist(), "direct solve agrees:",
      classically_satisfiable(spec.lcs()) is not None)

# %% Composite moduli beyond +-1 coefficients are refused, not guessed.
print(classify(SquareSpec(9, [2] + [1] * 17, [0] * 6)).reason)
