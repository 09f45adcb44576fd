"""
Operator solutions of the magic square
======================================

The standard magic square over Z_2 has no classical solution, yet nine
two-qubit Pauli operators satisfy every row and column up to a sign.
This script checks that symbolically and with explicit 4x4 matrices, then
shows the even-dimension generalisation and the odd-dimension extraction
of classical values from Pauli solutions.
"""

import numpy as np

from lcsmod import pauli
from lcsmod.lcs import classically_satisfiable, magic_square
from lcsmod.zd_linalg import matrix

# %% The classical system is unsatisfiable for every modulus.
for d in (2, 3, 4, 5):
    print(f"d={d}: classical solution = {classically_satisfiable(magic_square(d))}")

# %% The qubit operator grid.
lcs, A = pauli.qubit_square_solution()
for r in range(3):
    print("   ".join(f"{str(A[3 * r + c]):>12}" for c in range(3)))
print("symbolic check:", pauli.verify_quantum_solution(lcs, A))
print("dense check:   ", pauli.verify_quantum_solution_dense(lcs, A))

third = np.eye(4)
for j in (2, 5, 8):
    third = third @ pauli.to_dense(A[j])
print("third column product equals -I:", np.allclose(third, -np.eye(4)))

# %% Dimension D = 2t: two qudits still solve the square, with omega^t = -1 in the third column.
for t in (1, 2, 3):
    lcs, A = pauli.table1_solution(t, "left" if t % 2 else "right")
    print(f"D={2 * t}: solution verified = {pauli.verify_quantum_solution(lcs, A)}, "
          f"third column = {pauli.row_product(lcs, A, 5)}")

# %% Odd D: commuting Pauli solutions always carry a classical solution.
rng = np.random.default_rng(0)
M = matrix([[1, 2, 0, 1], [0, 1, 1, 2]], 5)
lcs, A = pauli.random_quantum_solution(rng, M, n=2)
print("random system rhs:", lcs.b.tolist())
for j, op in enumerate(A.ops):
    print(f"  x{j + 1} -> {op}   value {int(pauli.value(op))}")
print("extracted assignment:", pauli.extract_classical(lcs, A).tolist())
