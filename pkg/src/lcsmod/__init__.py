"""Linear constraint systems over Z_d: classical solving, generalized Pauli
quantum solutions, solution-group certificates, and the magic square and
pentagram families."""

from .errors import *  # noqa: F401,F403
from .families import (
    Classification,
    FamilySpec,
    PentagramSpec,
    ReducedPentagram,
    ReducedSquare,
    ReducedSystem,
    SquareSpec,
    Transformation,
    classify,
    classify_pentagram,
    classify_square,
    lemma_solution_pentagram,
    lemma_solution_square,
    pentagram_lcs,
    pentagram_witness,
    pullback_solution,
    reduce_pentagram,
    reduce_square,
    square_lcs,
    square_witness,
)
from .lcs import (
    Assignment,
    Lcs,
    classically_satisfiable,
    magic_pentagram,
    magic_square,
    parse_lcs,
    serialize_lcs,
    shared_row_pairs,
    verify_classical,
)
from .pauli import (
    PauliAssignment,
    PauliOp,
    commutes,
    extract_classical,
    mul,
    pow_,
    tensor,
    value,
    verify_quantum_solution,
    verify_quantum_solution_dense,
)
from .solution_group import (
    ConjugationCertificate,
    PhaseCommutationWitness,
    Presentation,
    expand_certificate,
    free_reduce,
    no_quantum_verdict,
    presentation_from_lcs,
    reflect,
    reflect_certificate,
    relator_letters_commute,
    verify_certificate,
)
from .zd_linalg import (
    ZdMatrix,
    ZdVector,
    ZMod,
    brute_force_solve,
    half_inverse,
    inv_mod,
    rank_mod_p,
    smith_diagonalize,
    solve_linear_system,
)
