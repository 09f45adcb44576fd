"""Exact linear algebra over the ring Z_d for arbitrary d >= 2.

Matrices and vectors are immutable and always stored reduced into [0, d).
Solving works for composite d through a Smith-style diagonalisation
computed directly over Z_d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CompositeModulus,
    DimensionMismatch,
    EvenModulus,
    LcsError,
    NotInvertible,
    TooLarge,
)

BRUTE_FORCE_CAP = 10**6


def _check_modulus(d: int) -> int:
    d = int(d)
    if d < 2:
        raise LcsError(f"modulus must be >= 2, got {d}")
    return d


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % p for p in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class ZMod:
    """An element of Z_d."""

    value: int
    modulus: int

    def __post_init__(self):
        d = _check_modulus(self.modulus)
        object.__setattr__(self, "modulus", d)
        object.__setattr__(self, "value", int(self.value) % d)

    def _coerce(self, other) -> int:
        if isinstance(other, ZMod):
            if other.modulus != self.modulus:
                raise DimensionMismatch(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other):
        return ZMod(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return ZMod(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return ZMod(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return ZMod(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ZMod(-self.value, self.modulus)

    def __eq__(self, other):
        if isinstance(other, ZMod):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


@dataclass(frozen=True)
class ZdVector:
    entries: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        d = _check_modulus(self.modulus)
        object.__setattr__(self, "modulus", d)
        object.__setattr__(self, "entries", tuple(int(v) % d for v in self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def tolist(self) -> list[int]:
        return list(self.entries)


@dataclass(frozen=True)
class ZdMatrix:
    rows: tuple[tuple[int, ...], ...]
    modulus: int

    def __post_init__(self):
        d = _check_modulus(self.modulus)
        rows = tuple(tuple(int(v) % d for v in row) for row in self.rows)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "modulus", d)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zeros(cls, m: int, n: int, d: int) -> "ZdMatrix":
        return cls(tuple((0,) * n for _ in range(m)), d)

    @classmethod
    def identity(cls, n: int, d: int) -> "ZdMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), d)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def matvec(self, x: Sequence[int]) -> ZdVector:
        if len(x) != self.shape[1]:
            raise DimensionMismatch(f"vector of length {len(x)} against {self.shape[1]} columns")
        d = self.modulus
        return ZdVector(tuple(sum(a * int(b) for a, b in zip(row, x)) % d for row in self.rows), d)


def as_vector(x, d: int) -> ZdVector:
    if isinstance(x, ZdVector):
        if x.modulus != d:
            raise DimensionMismatch(f"vector modulus {x.modulus} does not match {d}")
        return x
    return ZdVector(tuple(int(v) for v in x), d)


def inv_mod(a: ZMod | int, d: int | None = None) -> ZMod:
    """Multiplicative inverse of ``a`` modulo d (extended gcd)."""
    if not isinstance(a, ZMod):
        if d is None:
            raise TypeError("modulus required when passing a plain int")
        a = ZMod(a, d)
    try:
        return ZMod(pow(a.value, -1, a.modulus), a.modulus)
    except ValueError:
        raise NotInvertible(f"{a.value} is not invertible modulo {a.modulus}") from None


def half_inverse(d: int) -> ZMod:
    """2^{-1} mod d, which is (d+1)/2 for odd d."""
    d = _check_modulus(d)
    if d % 2 == 0:
        raise EvenModulus(f"2 has no inverse modulo even d={d}")
    return ZMod((d + 1) // 2, d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _solve_scalar(a: int, c: int, d: int) -> int | None:
    """Smallest nonnegative z with a*z = c (mod d), or None."""
    g = math.gcd(a, d)
    if c % g:
        return None
    if g == d:
        return 0
    m = d // g
    return (c // g) * pow((a // g) % m, -1, m) % m


def smith_diagonalize(M: ZdMatrix):
    """Diagonalise M over Z_d by invertible row and column operations.

    Returns ``(S, U, V)`` as nested lists with ``U @ M @ V == S (mod d)`` and S
    zero off the diagonal. U and V have determinant 1, so they stay invertible
    over Z_d. Each diagonal entry divides d up to a unit, which is all the
    solver needs; the divisibility chain of the full normal form is not
    enforced.
    """
    d = M.modulus
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_mix(i, k, a, b, c, e, mats):
        # (row_i, row_k) <- (a*row_i + b*row_k, c*row_i + e*row_k)
        for X in mats:
            ri, rk = X[i], X[k]
            X[i] = [(a * x + b * y) % d for x, y in zip(ri, rk)]
            X[k] = [(c * x + e * y) % d for x, y in zip(ri, rk)]

    def col_mix(j, k, a, b, c, e, mats):
        for X in mats:
            for r in X:
                x, y = r[j], r[k]
                r[j] = (a * x + b * y) % d
                r[k] = (c * x + e * y) % d

    for t in range(min(m, n)):
        # pivot: entry generating the largest ideal, i.e. smallest gcd with d
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    g = math.gcd(A[i][j], d)
                    if best is None or g < best[0]:
                        best = (g, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            A[t], A[pi] = A[pi], A[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for X in (A, V):
                for r in X:
                    r[t], r[pj] = r[pj], r[t]
        while True:
            done = True
            for i in range(t + 1, m):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                k = _solve_scalar(a, b, d)
                if k is not None:
                    for X in (A, U):
                        X[i] = [(y - k * x) % d for x, y in zip(X[t], X[i])]
                else:
                    g, s, u = _egcd(a, b)
                    row_mix(t, i, s, u, -(b // g), a // g, (A, U))
                    done = False
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                k = _solve_scalar(a, b, d)
                if k is not None:
                    for X in (A, V):
                        for r in X:
                            r[j] = (r[j] - k * r[t]) % d
                else:
                    g, s, u = _egcd(a, b)
                    col_mix(t, j, s, u, -(b // g), a // g, (A, V))
                    done = False
            if done and not any(A[i][t] for i in range(t + 1, m)):
                break
    return A, U, V


def solve_linear_system(M: ZdMatrix, b) -> ZdVector | None:
    """Return one x with M x = b (mod d), or None when the system is unsatisfiable.

    The solution is the one with every free coordinate set to zero in the
    diagonalised basis, so the output is deterministic.
    """
    d = M.modulus
    m, n = M.shape
    b = as_vector(b, d)
    if len(b) != m:
        raise DimensionMismatch(f"rhs of length {len(b)} for {m} rows")
    S, U, V = smith_diagonalize(M)
    c = [sum(u * v for u, v in zip(row, b)) % d for row in U]
    z = [0] * n
    for i in range(m):
        s = S[i][i] if i < n else 0
        zi = _solve_scalar(s, c[i], d)
        if zi is None:
            return None
        if i < n:
            z[i] = zi
    x = ZdVector(tuple(sum(V[i][j] * z[j] for j in range(n)) for i in range(n)), d)
    return x


def kernel_generators(M: ZdMatrix) -> list[ZdVector]:
    """Vectors generating the solution module of M x = 0 (mod d)."""
    d = M.modulus
    m, n = M.shape
    S, _, V = smith_diagonalize(M)
    gens = []
    for j in range(n):
        s = S[j][j] if j < m else 0
        step = d // math.gcd(s, d)
        if step % d:
            gens.append(ZdVector(tuple(V[i][j] * step for i in range(n)), d))
    return gens


def rank_mod_p(M: ZdMatrix) -> int:
    """Rank of M over the field Z_p by Gaussian elimination."""
    p = M.modulus
    if not is_prime(p):
        raise CompositeModulus(f"rank is only defined here for prime moduli, got {p}")
    A = [list(r) for r in M.rows]
    m, n = M.shape
    rank = 0
    for j in range(n):
        piv = next((i for i in range(rank, m) if A[i][j]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][j], -1, p)
        A[rank] = [v * inv % p for v in A[rank]]
        for i in range(m):
            if i != rank and A[i][j]:
                f = A[i][j]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def _assignments(d: int, n: int, start: int, stop: int) -> np.ndarray:
    """Rows are the base-d digit vectors of start..stop-1, most significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % d


def brute_force_solve(M: ZdMatrix, b, cap: int = BRUTE_FORCE_CAP) -> list[ZdVector]:
    """Every solution of M x = b (mod d), in lexicographic order."""
    d = M.modulus
    m, n = M.shape
    b = as_vector(b, d)
    if len(b) != m:
        raise DimensionMismatch(f"rhs of length {len(b)} for {m} rows")
    total = d**n
    if total > cap:
        raise TooLarge(f"{d}^{n} = {total} assignments exceeds cap {cap}")
    Mt = M.to_numpy().T
    target = np.array(b.entries, dtype=np.int64)
    out = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        X = _assignments(d, n, start, min(total, start + chunk))
        hit = np.all((X @ Mt) % d == target, axis=1)
        out.extend(ZdVector(tuple(int(v) for v in row), d) for row in X[hit])
    return out


def brute_force_satisfiable(M: ZdMatrix, b, cap: int = BRUTE_FORCE_CAP) -> bool:
    """Cheaper yes/no version of :func:`brute_force_solve` that stops at the first hit."""
    d = M.modulus
    m, n = M.shape
    b = as_vector(b, d)
    total = d**n
    if total > cap:
        raise TooLarge(f"{d}^{n} = {total} assignments exceeds cap {cap}")
    Mt = M.to_numpy().T
    target = np.array(b.entries, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        X = _assignments(d, n, start, min(total, start + chunk))
        if np.any(np.all((X @ Mt) % d == target, axis=1)):
            return True
    return False


def matrix(rows: Iterable[Iterable[int]], d: int) -> ZdMatrix:
    return ZdMatrix(tuple(tuple(r) for r in rows), d)
