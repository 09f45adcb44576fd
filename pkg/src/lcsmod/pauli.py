"""Generalized Pauli operators on n qudits of local dimension D.

An operator is stored symplectically as ``zeta**phase * Z[z] X[x]`` with
``zeta = exp(i*pi/D)`` (so ``omega = zeta**2``), Z-part to the left of the
X-part, and

    X = sum_j |j+1><j|,    Z = sum_j omega**j |j><j|.

These definitions give ``Z X = omega X Z``, hence ``X^q Z^r = omega^(-qr) Z^r X^q``,
which fixes the phase rule used by :func:`mul`. Working with a 2D-th root keeps
qubit operators such as ``Y = i X Z`` in the same phase group.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EvenDimension,
    NonDthRootPhase,
    NotAQuantumSolution,
    ParseError,
    TooLarge,
    VariantParityMismatch,
)
from .lcs import Assignment, Lcs, magic_pentagram, magic_square, shared_row_pairs, verify_classical
from .zd_linalg import ZMod, ZdMatrix, ZdVector, half_inverse, kernel_generators

DENSE_LIMIT = 4096


@dataclass(frozen=True)
class PauliOp:
    D: int
    phase: int
    z: tuple[int, ...]
    x: tuple[int, ...]

    def __post_init__(self):
        if self.D < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.D}")
        if len(self.z) != len(self.x) or not self.z:
            raise DimensionMismatch("z and x must be non-empty and of equal length")
        object.__setattr__(self, "phase", int(self.phase) % (2 * self.D))
        object.__setattr__(self, "z", tuple(int(v) % self.D for v in self.z))
        object.__setattr__(self, "x", tuple(int(v) % self.D for v in self.x))

    @property
    def n(self) -> int:
        return len(self.z)

    @classmethod
    def identity(cls, n: int, D: int) -> "PauliOp":
        return cls(D, 0, (0,) * n, (0,) * n)

    @classmethod
    def scalar(cls, k: int, n: int, D: int) -> "PauliOp":
        """omega**k times the identity."""
        return cls(D, 2 * k, (0,) * n, (0,) * n)

    def is_identity(self) -> bool:
        return self.phase == 0 and not any(self.z) and not any(self.x)

    def is_scalar(self) -> bool:
        return not any(self.z) and not any(self.x)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return mul(self, other)

    def __pow__(self, k: int) -> "PauliOp":
        return pow_(self, k)

    def __matmul__(self, other: "PauliOp") -> "PauliOp":
        return tensor(self, other)

    def __str__(self):
        names = []
        for p, q in zip(self.z, self.x):
            s = (f"Z{p}" if p else "") + (f"X{q}" if q else "")
            names.append(s or "I")
        return f"z^{self.phase}·" + "⊗".join(names) if self.phase else "⊗".join(names)


def _check_pair(s: PauliOp, t: PauliOp):
    if s.D != t.D or s.n != t.n:
        raise DimensionMismatch(f"(n, D) = {(s.n, s.D)} vs {(t.n, t.D)}")


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def mul(s: PauliOp, t: PauliOp) -> PauliOp:
    _check_pair(s, t)
    phase = s.phase + t.phase - 2 * _dot(s.x, t.z)
    return PauliOp(s.D, phase, tuple(a + b for a, b in zip(s.z, t.z)), tuple(a + b for a, b in zip(s.x, t.x)))


def pow_(s: PauliOp, k: int) -> PauliOp:
    """s**k for any integer k, via the closed form zeta^(k a) omega^(-(p.q) k(k-1)/2)."""
    k = int(k)
    phase = k * s.phase - _dot(s.z, s.x) * k * (k - 1)
    return PauliOp(s.D, phase, tuple(k * v for v in s.z), tuple(k * v for v in s.x))


def tensor(s: PauliOp, t: PauliOp) -> PauliOp:
    if s.D != t.D:
        raise DimensionMismatch(f"local dimensions differ: {s.D} vs {t.D}")
    return PauliOp(s.D, s.phase + t.phase, s.z + t.z, s.x + t.x)


def symplectic_form(s: PauliOp, t: PauliOp) -> int:
    """p.s - q.r mod D for s ~ Z[p]X[q], t ~ Z[r]X[s]."""
    _check_pair(s, t)
    return (_dot(s.z, t.x) - _dot(s.x, t.z)) % s.D


def commutes(s: PauliOp, t: PauliOp) -> bool:
    return symplectic_form(s, t) == 0


def single(D: int, z: int = 0, x: int = 0, phase: int = 0) -> PauliOp:
    return PauliOp(D, phase, (z,), (x,))


def from_string(spec: str, D: int = 2) -> PauliOp:
    """Parse letters such as ``"XYZ"`` or ``"IX"`` into a tensor product.

    ``Y`` is only accepted for D = 2, where it is the usual ``i X Z``.
    """
    op = None
    for ch in spec:
        if ch == "I":
            f = single(D)
        elif ch == "X":
            f = single(D, x=1)
        elif ch == "Z":
            f = single(D, z=1)
        elif ch == "Y":
            if D != 2:
                raise ValueError("Y is only defined for qubits")
            # i X Z = i * omega^-1 Z X = zeta^(1 - 2) Z X
            f = single(D, z=1, x=1, phase=-1)
        else:
            raise ValueError(f"unknown Pauli letter {ch!r}")
        op = f if op is None else tensor(op, f)
    if op is None:
        raise ValueError("empty Pauli string")
    return op


# -- dense oracle --------------------------------------------------------------


def _dense_size(D: int, n: int) -> int:
    size = D**n
    if size > DENSE_LIMIT:
        raise TooLarge(f"D^n = {size} exceeds dense limit {DENSE_LIMIT}")
    return size


def shift_dense(D: int) -> np.ndarray:
    return np.roll(np.eye(D, dtype=complex), 1, axis=0)


def clock_dense(D: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(D) / D))


def to_dense(s: PauliOp) -> np.ndarray:
    _dense_size(s.D, s.n)
    X, Z = shift_dense(s.D), clock_dense(s.D)
    out = np.array([[np.exp(1j * np.pi * s.phase / s.D)]])
    for p, q in zip(s.z, s.x):
        out = np.kron(out, np.linalg.matrix_power(Z, p) @ np.linalg.matrix_power(X, q))
    return out


def parity_dense(D: int, n: int = 1) -> np.ndarray:
    """The n-fold tensor power of sum_j |-j><j|."""
    _dense_size(D, n)
    P = np.zeros((D, D), dtype=complex)
    for j in range(D):
        P[(-j) % D, j] = 1
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, P)
    return out


# -- the parity value map -------------------------------------------------------


def value(s: PauliOp) -> ZMod:
    """v(s) in Z_D with omega**v(s) = tr(parity^{(x)n} s), for odd D.

    For s = omega^k Z[p] X[q] this is k + 2^{-1} p.q.
    """
    if s.D % 2 == 0:
        raise EvenDimension(f"the parity trace vanishes for odd x-exponents when D={s.D} is even")
    if s.phase % 2:
        raise NonDthRootPhase(f"phase zeta^{s.phase} is not a power of omega")
    k = s.phase // 2
    return ZMod(k + half_inverse(s.D).value * _dot(s.z, s.x), s.D)


# -- quantum solutions ----------------------------------------------------------


@dataclass(frozen=True)
class PauliAssignment:
    ops: tuple[PauliOp, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise DimensionMismatch("empty assignment")
        n, D = self.ops[0].n, self.ops[0].D
        if any(o.n != n or o.D != D for o in self.ops):
            raise DimensionMismatch("all operators must share (n, D)")

    @property
    def D(self) -> int:
        return self.ops[0].D

    @property
    def n(self) -> int:
        return self.ops[0].n

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, j):
        return self.ops[j]


def row_product(lcs: Lcs, A: PauliAssignment, i: int) -> PauliOp:
    """Left-to-right product of A_j^{M_ij} along row i."""
    out = PauliOp.identity(A.n, A.D)
    for j, c in enumerate(lcs.M.rows[i]):
        if c:
            out = mul(out, pow_(A[j], c))
    return out


def _check_solution_shape(lcs: Lcs, A: PauliAssignment):
    if len(A) != lcs.n:
        raise DimensionMismatch(f"{len(A)} operators for {lcs.n} variables")
    if A.D != lcs.d:
        raise DimensionMismatch(f"local dimension {A.D} does not match modulus {lcs.d}")


def quantum_solution_failures(lcs: Lcs, A: PauliAssignment) -> list[str]:
    """Human-readable list of violated conditions; empty for a valid solution."""
    _check_solution_shape(lcs, A)
    d = lcs.d
    problems = []
    for j, op in enumerate(A.ops):
        if not pow_(op, d).is_identity():
            problems.append(f"{lcs.label(j)}^{d} != I")
    for j, k in sorted(shared_row_pairs(lcs)):
        if not commutes(A[j], A[k]):
            problems.append(f"{lcs.label(j)} and {lcs.label(k)} share a row but do not commute")
    for i in range(lcs.m):
        if row_product(lcs, A, i) != PauliOp.scalar(lcs.b[i], A.n, A.D):
            problems.append(f"row {i + 1} product != omega^{lcs.b[i]} I")
    return problems


def verify_quantum_solution(lcs: Lcs, A: PauliAssignment) -> bool:
    return not quantum_solution_failures(lcs, A)


def verify_quantum_solution_dense(lcs: Lcs, A: PauliAssignment, tol: float = 1e-12) -> bool:
    """Same three conditions checked on explicit matrices."""
    _check_solution_shape(lcs, A)
    d = lcs.d
    mats = [to_dense(op) for op in A.ops]
    eye = np.eye(mats[0].shape[0])
    omega = np.exp(2j * np.pi / d)
    for U in mats:
        if np.linalg.norm(np.linalg.matrix_power(U, d) - eye) > tol:
            return False
    for j, k in shared_row_pairs(lcs):
        if np.linalg.norm(mats[j] @ mats[k] - mats[k] @ mats[j]) > tol:
            return False
    for i in range(lcs.m):
        P = eye.astype(complex)
        for j, c in enumerate(lcs.M.rows[i]):
            if c:
                P = P @ np.linalg.matrix_power(mats[j], c)
        if np.linalg.norm(P - omega ** lcs.b[i] * eye) > tol:
            return False
    return True


def extract_classical(lcs: Lcs, A: PauliAssignment) -> Assignment:
    """Classical solution (v(A_1), ..., v(A_n)) from a Pauli quantum solution, D odd."""
    if A.D % 2 == 0:
        raise EvenDimension(f"no value map exists for even D={A.D}")
    failures = quantum_solution_failures(lcs, A)
    if failures:
        raise NotAQuantumSolution("; ".join(failures))
    a = ZdVector(tuple(value(op).value for op in A.ops), lcs.d)
    assert verify_classical(lcs, a)
    return a


def scalar_assignment(a, n: int, D: int) -> PauliAssignment:
    """A_j = omega^{a_j} I."""
    return PauliAssignment(tuple(PauliOp.scalar(int(v), n, D) for v in a))


# -- concrete solutions ---------------------------------------------------------


def mermin_square_qubits() -> PauliAssignment:
    grid = ["ZX", "XZ", "YY", "ZI", "IZ", "ZZ", "IX", "XI", "XX"]
    return PauliAssignment(tuple(from_string(s) for s in grid))


def mermin_pentagram_qubits() -> PauliAssignment:
    ops = ["XXX", "YYX", "YXY", "XYY", "IIX", "IXI", "XII", "YII", "IYI", "IIY"]
    return PauliAssignment(tuple(from_string(s) for s in ops))


def table1_solution(t: int, variant: str = "left") -> tuple[Lcs, PauliAssignment]:
    """Two-qudit solution of the D = 2t square whose third column multiplies to omega^t I = -I.

    ``left`` requires odd t, ``right`` requires even t.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if variant not in ("left", "right"):
        raise ValueError(f"variant must be 'left' or 'right', got {variant!r}")
    if (variant == "left") != (t % 2 == 1):
        raise VariantParityMismatch(f"variant {variant!r} needs {'odd' if variant == 'left' else 'even'} t, got {t}")
    D = 2 * t

    def Z(e):
        return single(D, z=e)

    def X(e):
        return single(D, x=e)

    I = single(D)
    if variant == "left":
        ops = [
            Z(t) @ X(t), X(t) @ Z(t), (X(t) * Z(t)) @ (Z(t) * X(t)),
            Z(t) @ I, I @ Z(t), Z(t) @ Z(t),
            I @ X(t), X(t) @ I, X(t) @ X(t),
        ]
    else:
        ops = [
            Z(t + 1) @ X(t + 1), X(t) @ Z(t), (X(t) * Z(t - 1)) @ (Z(t) * X(t - 1)),
            Z(t - 1) @ I, I @ Z(t), Z(t + 1) @ Z(t),
            I @ X(t - 1), X(t) @ I, X(t) @ X(t + 1),
        ]
    return magic_square(D, (0, 0, 0, 0, 0, t)), PauliAssignment(tuple(ops))


def qubit_square_solution() -> tuple[Lcs, PauliAssignment]:
    return magic_square(2), mermin_square_qubits()


def qubit_pentagram_solution() -> tuple[Lcs, PauliAssignment]:
    return magic_pentagram(2), mermin_pentagram_qubits()


# -- file format ----------------------------------------------------------------


def assignment_to_dict(A: PauliAssignment) -> dict:
    return {
        "D": A.D,
        "n": A.n,
        "ops": [{"phase2D": o.phase, "z": list(o.z), "x": list(o.x)} for o in A.ops],
    }


def serialize_assignment(A: PauliAssignment) -> str:
    return json.dumps(assignment_to_dict(A), sort_keys=True)


def assignment_from_dict(doc) -> PauliAssignment:
    if not isinstance(doc, dict) or not {"D", "n", "ops"} <= set(doc):
        raise ParseError("expected an object with 'D', 'n' and 'ops'", "$")
    D, n = doc["D"], doc["n"]
    if not isinstance(D, int) or isinstance(D, bool) or D < 2:
        raise ParseError("D must be an integer >= 2", "D")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("n must be a positive integer", "n")
    if not isinstance(doc["ops"], list) or not doc["ops"]:
        raise ParseError("expected a non-empty list", "ops")
    ops = []
    for k, o in enumerate(doc["ops"]):
        where = f"ops[{k}]"
        if not isinstance(o, dict) or set(o) != {"phase2D", "z", "x"}:
            raise ParseError("operator needs exactly 'phase2D', 'z', 'x'", where)
        for key in ("z", "x"):
            v = o[key]
            if not isinstance(v, list) or len(v) != n or not all(isinstance(e, int) for e in v):
                raise ParseError(f"expected {n} integers", f"{where}.{key}")
        if not isinstance(o["phase2D"], int):
            raise ParseError("expected an integer", f"{where}.phase2D")
        ops.append(PauliOp(D, o["phase2D"], tuple(o["z"]), tuple(o["x"])))
    return PauliAssignment(tuple(ops))


def parse_assignment(text: str) -> PauliAssignment:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return assignment_from_dict(doc)


def random_pauli(rng, n: int, D: int, phase_step: int = 2) -> PauliOp:
    """Uniform random operator; ``phase_step=2`` keeps phases in powers of omega."""
    phase = phase_step * int(rng.integers(0, 2 * D // phase_step))
    return PauliOp(D, phase, tuple(int(v) for v in rng.integers(0, D, n)), tuple(int(v) for v in rng.integers(0, D, n)))


def pauli_product(ops: Sequence[PauliOp]) -> PauliOp:
    out = PauliOp.identity(ops[0].n, ops[0].D)
    for o in ops:
        out = mul(out, o)
    return out


def random_quantum_solution(rng, M: ZdMatrix, n: int = 2) -> tuple[Lcs, PauliAssignment]:
    """A random Pauli quantum solution of (M, b) for a right-hand side b it determines.

    Every operator is omega^k sigma^u tau^v for two commuting operators
    sigma, tau, with the exponent columns u, v drawn from the kernel of M, so
    each row multiplies to a scalar. That scalar defines b. Requires odd D
    so that every operator has order dividing D.
    """
    D = M.modulus
    if D % 2 == 0:
        raise EvenDimension(f"random solutions need odd D, got {D}")
    sigma = random_pauli(rng, n, D)
    tau = random_pauli(rng, n, D)
    while not commutes(sigma, tau):
        tau = random_pauli(rng, n, D)
    gens = kernel_generators(M)
    cols = []
    for _ in range(2):
        col = [0] * M.shape[1]
        for g in gens:
            c = int(rng.integers(0, D))
            col = [(a + c * v) % D for a, v in zip(col, g)]
        cols.append(col)
    ops = []
    for j in range(M.shape[1]):
        k = int(rng.integers(0, D))
        ops.append(mul(PauliOp.scalar(k, n, D), mul(pow_(sigma, cols[0][j]), pow_(tau, cols[1][j]))))
    A = PauliAssignment(tuple(ops))
    probe = Lcs(D, M, ZdVector((0,) * M.shape[0], D))
    b = []
    for i in range(M.shape[0]):
        r = row_product(probe, A, i)
        assert r.is_scalar() and r.phase % 2 == 0
        b.append(r.phase // 2)
    return probe.with_rhs(b), A
