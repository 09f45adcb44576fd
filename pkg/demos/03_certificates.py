"""
Checkable certificates in the solution group
============================================

A certificate writes a word as a product of conjugated relators; checking it
is nothing more than free reduction. Reflecting every word turns a
certificate for w into one for its reversal, which combined with w itself
forces J^{2c} = e.
"""

from lcsmod.families import ReducedSquare, square_witness
from lcsmod.solution_group import (
    expand_certificate,
    free_reduce,
    no_quantum_verdict,
    presentation_from_lcs,
    reflect_certificate,
    verify_certificate,
    word_str,
)

d, gamma, delta = 5, 2, 3
b = (1, 0, 2, 0, 0, 4)
red = ReducedSquare(d, (gamma,) * 3 + (delta,) * 3, b)
P = presentation_from_lcs(red.lcs())
print(f"presentation: {P.n} generators plus J, {len(P)} relators")

wit = square_witness(gamma, delta, b, d)
print("relation:", wit.relation_str())
print("target word:", word_str(wit.target))
print("pairs:", len(wit.certificate.pairs))

raw = expand_certificate(P, wit.certificate)
print(f"expanded length {len(raw)}, reduced length {len(free_reduce(raw))}")
print("certificate verifies:", verify_certificate(P, wit.certificate))

reflected = reflect_certificate(P, wit.certificate)
print("reflected target:", word_str(reflected.target))
print("reflected certificate verifies:", verify_certificate(P, reflected))

verdict = no_quantum_verdict(P, wit)
print("J-power certificate target:", word_str(verdict.j_certificate.target))
print("conclusion:", verdict.consequence)
