"""Generalized magic square and pentagram systems.

Both families carry arbitrary nonzero coefficients. They are brought to a
reduced form by rescaling variables and rows. The reduced form is then
classified as classically satisfiable (with an explicit assignment) or as
having no quantum solution (with a checked phase-commutation certificate).

Coefficient layout for files and constructors: ``coeffs = [a1..aN, a'1..a'N]``
where N = 9 (square) or 10 (pentagram). Square rows are

    a1 x1 + a2 x2 + a3 x3          a'1 x1 + a'4 x4 + a'7 x7
    a4 x4 + a5 x5 + a6 x6          a'2 x2 + a'5 x5 + a'8 x8
    a7 x7 + a8 x8 + a9 x9          a'3 x3 + a'6 x6 + a'9 x9

and pentagram rows are

    a1 x1 + a2 x2 + a3 x3 + a4 x4
    a'1 x1 + a5 x5 + a6 x6 + a7 x7
    a'2 x2 + a'5 x5 + a8 x8 + a9 x9
    a'3 x3 + a'6 x6 + a'8 x8 + a10 x10
    a'4 x4 + a'7 x7 + a'9 x9 + a'10 x10
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CaseNotApplicable,
    EvenModulus,
    LcsError,
    ParseError,
    RecordMismatch,
    RegimeMismatch,
    UnsupportedModulus,
    ZeroCoefficient,
)
from .lcs import Lcs, lcs_to_dict, verify_classical
from .solution_group import (
    J,
    Derivation,
    PhaseCommutationWitness,
    Verdict,
    gen_power,
    no_quantum_verdict,
    presentation_from_lcs,
    verify_certificate,
    witness_to_dict,
    witness_target,
)
from .zd_linalg import ZdVector, half_inverse, inv_mod, is_prime, solve_linear_system

# (variable, coefficient slot) per row; slots index into coeffs
_SQUARE_ROWS = (
    ((0, 0), (1, 1), (2, 2)),
    ((3, 3), (4, 4), (5, 5)),
    ((6, 6), (7, 7), (8, 8)),
    ((0, 9), (3, 12), (6, 15)),
    ((1, 10), (4, 13), (7, 16)),
    ((2, 11), (5, 14), (8, 17)),
)
_PENTAGRAM_ROWS = (
    ((0, 0), (1, 1), (2, 2), (3, 3)),
    ((0, 10), (4, 4), (5, 5), (6, 6)),
    ((1, 11), (4, 14), (7, 7), (8, 8)),
    ((2, 12), (5, 15), (7, 17), (9, 9)),
    ((3, 13), (6, 16), (8, 18), (9, 19)),
)
# where the gammas sit in the reduced matrices: (row, variable)
_SQUARE_GAMMA_AT = ((3, 3), (4, 4), (5, 5), (3, 6), (4, 7), (5, 8))
_PENTAGRAM_GAMMA_AT = ((2, 4), (3, 5), (4, 6), (3, 7), (4, 8), (4, 9))

_FAMILIES = {
    "square": (9, 6, _SQUARE_ROWS, _SQUARE_GAMMA_AT),
    "pentagram": (10, 5, _PENTAGRAM_ROWS, _PENTAGRAM_GAMMA_AT),
}


def _build(d, n, rows_layout, coeffs, b) -> Lcs:
    rows = []
    for layout in rows_layout:
        row = [0] * n
        for j, slot in layout:
            row[j] = coeffs[slot]
        rows.append(row)
    return Lcs.from_rows(d, rows, b)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    d: int
    coeffs: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise LcsError(f"unknown family {self.family!r}")
        n, m, _, _ = _FAMILIES[self.family]
        if self.d < 2:
            raise LcsError(f"modulus must be >= 2, got {self.d}")
        coeffs = tuple(int(c) % self.d for c in self.coeffs)
        b = tuple(int(x) % self.d for x in self.b)
        if len(coeffs) != 2 * n:
            raise LcsError(f"{self.family} needs {2 * n} coefficients, got {len(coeffs)}")
        if len(b) != m:
            raise LcsError(f"{self.family} needs {m} right-hand sides, got {len(b)}")
        zero = [i for i, c in enumerate(coeffs) if c == 0]
        if zero:
            raise ZeroCoefficient(f"coefficient slots {zero} vanish mod {self.d}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "b", b)

    def lcs(self) -> Lcs:
        n, _, layout, _ = _FAMILIES[self.family]
        return _build(self.d, n, layout, self.coeffs, self.b)

    def to_dict(self) -> dict:
        return {"family": self.family, "d": self.d, "coeffs": list(self.coeffs), "b": list(self.b)}


def SquareSpec(d: int, coeffs: Sequence[int], b: Sequence[int]) -> FamilySpec:
    return FamilySpec("square", d, tuple(coeffs), tuple(b))


def PentagramSpec(d: int, coeffs: Sequence[int], b: Sequence[int]) -> FamilySpec:
    return FamilySpec("pentagram", d, tuple(coeffs), tuple(b))


def square_lcs(spec: FamilySpec) -> Lcs:
    if spec.family != "square":
        raise RegimeMismatch(f"expected a square spec, got {spec.family}")
    return spec.lcs()


def pentagram_lcs(spec: FamilySpec) -> Lcs:
    if spec.family != "pentagram":
        raise RegimeMismatch(f"expected a pentagram spec, got {spec.family}")
    return spec.lcs()


def spec_from_dict(doc) -> FamilySpec:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    unknown = set(doc) - {"family", "d", "coeffs", "b"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", "$")
    for key in ("family", "d", "coeffs", "b"):
        if key not in doc:
            raise ParseError(f"missing {key!r}", key)
    if doc["family"] not in _FAMILIES:
        raise ParseError("family must be 'square' or 'pentagram'", "family")
    if not isinstance(doc["d"], int) or isinstance(doc["d"], bool) or doc["d"] < 2:
        raise ParseError("expected an integer >= 2", "d")
    for key in ("coeffs", "b"):
        v = doc[key]
        if not isinstance(v, list):
            raise ParseError("expected a list of integers", key)
        for i, x in enumerate(v):
            if not isinstance(x, int) or isinstance(x, bool):
                raise ParseError("expected an integer", f"{key}[{i}]")
    n, m, _, _ = _FAMILIES[doc["family"]]
    if len(doc["coeffs"]) != 2 * n:
        raise ParseError(f"expected {2 * n} coefficients", "coeffs")
    if len(doc["b"]) != m:
        raise ParseError(f"expected {m} entries", "b")
    return FamilySpec(doc["family"], doc["d"], tuple(doc["coeffs"]), tuple(doc["b"]))


def parse_spec(text: str) -> FamilySpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return spec_from_dict(doc)


# -- reduction --------------------------------------------------------------------


@dataclass(frozen=True)
class Transformation:
    """How a reduced system was obtained from the original one.

    Reduced variables are y_j = var_scale[j] * x_j and reduced row i is the
    original row i divided by row_scale[i].
    """

    family: str
    d: int
    var_scale: tuple[int, ...]
    row_scale: tuple[int, ...]
    source: Lcs

    @classmethod
    def identity(cls, lcs: Lcs, family: str) -> "Transformation":
        return cls(family, lcs.d, (1,) * lcs.n, (1,) * lcs.m, lcs)


def _rescale(lcs: Lcs, var_scale, row_scale) -> Lcs:
    d = lcs.d
    vinv = [int(inv_mod(s, d)) for s in var_scale]
    rinv = [int(inv_mod(k, d)) for k in row_scale]
    rows = [[c * vinv[j] * rinv[i] for j, c in enumerate(row)] for i, row in enumerate(lcs.M.rows)]
    rhs = [lcs.b[i] * rinv[i] for i in range(lcs.m)]
    return Lcs.from_rows(d, rows, rhs)


@dataclass(frozen=True)
class ReducedSystem:
    """A family member in reduced form: unit coefficients except the gammas.

    Square gammas are (γ4..γ9): γ4..γ6 multiply x4..x6 in the three
    column rows and γ7..γ9 multiply x7..x9. Pentagram gammas are (γ5..γ10),
    multiplying x5, x6, x7 (in rows 3, 4, 5), x8 (row 4), x9 and x10 (row 5).
    """

    family: str
    d: int
    gammas: tuple[int, ...]
    b: tuple[int, ...]
    record: Transformation | None = None

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(int(g) % self.d for g in self.gammas))
        object.__setattr__(self, "b", tuple(int(x) % self.d for x in self.b))
        if any(g == 0 for g in self.gammas):
            raise ZeroCoefficient("reduced coefficients must be nonzero")
        if self.record is None:
            object.__setattr__(self, "record", Transformation.identity(self.lcs(), self.family))

    def lcs(self) -> Lcs:
        n, _, layout, gamma_at = _FAMILIES[self.family]
        rows = [[0] * n for _ in layout]
        for i, entries in enumerate(layout):
            for j, _ in entries:
                rows[i][j] = 1
        for g, (i, j) in zip(self.gammas, gamma_at):
            rows[i][j] = g
        return Lcs.from_rows(self.d, rows, self.b)

    @property
    def uniform(self) -> bool:
        g = self.gammas
        if self.family == "square":
            return g[0] == g[1] == g[2] and g[3] == g[4] == g[5]
        return all(x == self.d - 1 for x in g)

    @property
    def phase(self) -> int:
        """The obstruction s; meaningful in the uniform regime."""
        b, d = self.b, self.d
        if self.family == "square":
            gam, dlt = self.gammas[0], self.gammas[3]
            return (-b[0] - gam * b[1] - dlt * b[2] + b[3] + b[4] + b[5]) % d
        return (-b[0] + b[1] + b[2] + b[3] + b[4]) % d


def ReducedSquare(d, gammas, b, record=None) -> ReducedSystem:
    return ReducedSystem("square", d, tuple(gammas), tuple(b), record)


def ReducedPentagram(d, gammas, b, record=None) -> ReducedSystem:
    return ReducedSystem("pentagram", d, tuple(gammas), tuple(b), record)


def _check_reducible(spec: FamilySpec):
    d = spec.d
    if is_prime(d):
        return
    if d % 2 == 0:
        raise UnsupportedModulus(f"even d={d}: the closed forms and the phase-commutation argument need d odd")
    if all(c in (1, d - 1) for c in spec.coeffs):
        return
    raise UnsupportedModulus(
        f"d={d} is composite and the coefficients are not all +-1; no reduction is defined here"
    )


def _reduce(spec: FamilySpec, var_scale: list[int], row_scale: list[int]) -> ReducedSystem:
    source = spec.lcs()
    reduced_lcs = _rescale(source, var_scale, row_scale)
    n, _, _, gamma_at = _FAMILIES[spec.family]
    gammas = tuple(reduced_lcs.M.rows[i][j] for i, j in gamma_at)
    record = Transformation(spec.family, spec.d, tuple(var_scale), tuple(row_scale), source)
    red = ReducedSystem(spec.family, spec.d, gammas, tuple(reduced_lcs.b), record)
    assert red.lcs() == reduced_lcs, "rescaled system left the reduced pattern"
    return red


def reduce_square(spec: FamilySpec) -> ReducedSystem:
    """Scale x_j by a_j, then divide column rows by the coefficients of x1, x2, x3."""
    if spec.family != "square":
        raise RegimeMismatch(f"expected a square spec, got {spec.family}")
    _check_reducible(spec)
    d, a = spec.d, spec.coeffs
    var_scale = [a[j] for j in range(9)]
    row_scale = [1, 1, 1] + [a[9 + k] * int(inv_mod(a[k], d)) % d for k in range(3)]
    return _reduce(spec, var_scale, row_scale)


def reduce_pentagram(spec: FamilySpec) -> ReducedSystem:
    """Scale x1..x4 by their first-row coefficients, normalise rows 2-5 on them,
    then scale x5..x10 so that their first appearance has coefficient 1."""
    if spec.family != "pentagram":
        raise RegimeMismatch(f"expected a pentagram spec, got {spec.family}")
    _check_reducible(spec)
    d, a = spec.d, spec.coeffs
    var_scale = [a[j] for j in range(4)] + [1] * 6
    row_scale = [1] + [a[10 + k] * int(inv_mod(a[k], d)) % d for k in range(4)]
    lcs = spec.lcs()
    for j in range(4, 10):
        first = next(i for i in range(lcs.m) if lcs.M.rows[i][j])
        var_scale[j] = lcs.M.rows[first][j] * int(inv_mod(row_scale[first], d)) % d
    return _reduce(spec, var_scale, row_scale)


def reduce_spec(spec: FamilySpec) -> ReducedSystem:
    return reduce_square(spec) if spec.family == "square" else reduce_pentagram(spec)


def pullback_solution(y, record: Transformation) -> ZdVector:
    """x_j = var_scale[j]^-1 * y_j."""
    d = record.d
    if isinstance(y, ZdVector) and y.modulus != d:
        raise RecordMismatch(f"assignment modulus {y.modulus} differs from record modulus {d}")
    y = tuple(int(v) for v in y)
    if len(y) != len(record.var_scale):
        raise RecordMismatch(f"assignment of length {len(y)} for a record over {len(record.var_scale)} variables")
    return ZdVector(tuple(int(inv_mod(s, d)) * v % d for s, v in zip(record.var_scale, y)), d)


def push_forward(x, record: Transformation) -> ZdVector:
    """Inverse of :func:`pullback_solution`."""
    x = tuple(int(v) for v in x)
    if len(x) != len(record.var_scale):
        raise RecordMismatch(f"assignment of length {len(x)} for a record over {len(record.var_scale)} variables")
    return ZdVector(tuple(s * v % record.d for s, v in zip(record.var_scale, x)), record.d)


# -- closed-form classical solutions --------------------------------------------------


def _pm_one(red: ReducedSystem):
    d = red.d
    if d % 2 == 0:
        raise EvenModulus(f"the closed forms divide by 2, which is not invertible mod {d}")
    if not all(g in (1, d - 1) for g in red.gammas):
        raise CaseNotApplicable("closed forms need every reduced coefficient to be +-1")


def _square_cases(g4, g5, g6, g7, b, d):
    b1, b2, b3, b4, b5, b6 = b
    h = int(half_inverse(d))
    if g4 == (-g5) % d:
        x1 = h * (b1 - g4 * b2 - g7 * b3 + b4 - b5 - b6)
        x2 = h * (b1 + g4 * b2 + g7 * b3 - b4 + b5 - b6)
        x4 = h * g4 * (-b1 + g4 * b2 - g7 * b3 + b4 + b5 + b6)
        x5 = h * g4 * (b1 + g4 * b2 + g7 * b3 - b4 - b5 - b6)
        return [x1, x2, b6, x4, x5, 0, b3, 0, 0]
    if g4 == g5 == (-g6) % d:
        x1 = h * (b1 - g4 * b2 - g7 * b3 + b4 - b5 - b6)
        x3 = h * (b1 + g4 * b2 + g7 * b3 - b4 - b5 + b6)
        x4 = h * g4 * (-b1 + g4 * b2 - g7 * b3 + b4 + b5 + b6)
        x6 = h * g4 * (b1 + g4 * b2 + g7 * b3 - b4 - b5 - b6)
        return [x1, b5, x3, x4, 0, x6, b3, 0, 0]
    return None


def lemma_solution_square(red: ReducedSystem) -> ZdVector:
    """Closed-form solution of a non-uniform ±1 reduced square, d odd."""
    if red.family != "square":
        raise RegimeMismatch("expected a reduced square")
    _pm_one(red)
    d, g, b = red.d, red.gammas, red.b
    x = _square_cases(g[0], g[1], g[2], g[3], b, d)
    if x is None:
        # swap the roles of (x4, x5, x6) and (x7, x8, x9), hence of rows 2 and 3
        swapped = _square_cases(g[3], g[4], g[5], g[0], (b[0], b[2], b[1], b[3], b[4], b[5]), d)
        if swapped is None:
            raise CaseNotApplicable(f"no closed form for gammas {g}; the system is in the uniform regime")
        x = swapped[:3] + swapped[6:9] + swapped[3:6]
    return ZdVector(tuple(v % d for v in x), d)


def lemma_solution_pentagram(red: ReducedSystem) -> ZdVector:
    """Closed-form solution when some reduced coefficient equals +1, d odd."""
    if red.family != "pentagram":
        raise RegimeMismatch("expected a reduced pentagram")
    _pm_one(red)
    d = red.d
    g5, g6, g7, g8, g9, g10 = red.gammas
    b1, b2, b3, b4, b5 = red.b
    h = int(half_inverse(d))
    u = h * (-b1 + b2 + b3 + b4 + b5)
    p = h * (b1 + b2 - b3 - b4 - b5)
    q = h * (b1 - b2 + b3 - b4 - b5)
    r = h * (b1 - b2 - b3 + b4 - b5)
    t = h * (b1 - b2 - b3 - b4 + b5)
    if g5 == 1:
        x = [p, q, b4, b5, u, 0, 0, 0, 0, 0]
    elif g6 == 1:
        x = [p, b3, r, b5, 0, u, 0, 0, 0, 0]
    elif g7 == 1:
        x = [p, b3, b4, t, 0, 0, u, 0, 0, 0]
    elif g8 == 1:
        x = [b2, q, r, b5, 0, 0, 0, u, 0, 0]
    elif g9 == 1:
        x = [b2, q, b4, t, 0, 0, 0, 0, u, 0]
    elif g10 == 1:
        x = [b2, b3, r, t, 0, 0, 0, 0, 0, u]
    else:
        raise CaseNotApplicable("every reduced coefficient is -1; the system is in the uniform regime")
    return ZdVector(tuple(v % d for v in x), d)


# -- phase-commutation witnesses ------------------------------------------------------


def _g(i: int, e: int):
    return gen_power(i, e)


def _signed(e: int, d: int) -> int:
    """Representative of e mod d in (-d/2, d/2], keeping words short."""
    e %= d
    return e - d if 2 * e > d else e


def _j(e: int, d: int):
    return gen_power(J, _signed(e, d))


def square_witness(gamma: int, delta: int, b: Sequence[int], d: int) -> PhaseCommutationWitness:
    """Certificate for g4^γ g2 = J^s g2 g4^γ in the uniform reduced square.

    Starting from w = J^-s g4^γ g2 g4^-γ g2^-1, the block g1 g4^γ g2 g5^γ is
    pushed through the row relations until only J^s is left, which then
    cancels against the leading J^-s.
    """
    gamma, delta = gamma % d, delta % d
    if gamma == 0 or delta == 0:
        raise RegimeMismatch("gamma and delta must be nonzero mod d")
    red = ReducedSquare(d, (gamma, gamma, gamma, delta, delta, delta), b)
    b1, b2, b3, b4, b5, b6 = red.b
    P = presentation_from_lcs(red.lcs())
    row = P.row_index
    c = red.phase
    gamma, delta = _signed(gamma, d), _signed(delta, d)
    factors = ((4, gamma), (2, 1))
    der = Derivation(P, witness_target(factors, c, d))

    der.insert(c, _g(1, -1) + _g(1, 1))
    der.insert(der.find(_g(2, 1)) + 1, _g(5, gamma) + _g(5, -gamma))
    der.substitute(_g(1, 1) + _g(4, gamma), _j(b4, d) + _g(7, -delta), {row(3): 1})
    der.substitute(_g(2, 1) + _g(5, gamma), _j(b5, d) + _g(8, -delta), {row(4): 1})
    der.permute(_g(7, -delta) + _j(b5, d), _j(b5, d) + _g(7, -delta))
    der.substitute(_g(7, -delta) + _g(8, -delta), _j(-delta * b3, d) + _g(9, delta), {row(2): -delta})
    der.substitute(_g(9, delta), _j(b6, d) + _g(3, -1) + _g(6, -gamma), {row(5): 1})
    der.substitute(_g(3, -1), _j(-b1, d) + _g(1, 1) + _g(2, 1), {row(0): -1})
    der.substitute(_g(6, -gamma), _j(-gamma * b2, d) + _g(4, gamma) + _g(5, gamma), {row(1): -gamma})
    der.permute(_g(1, 1) + _g(2, 1) + _j(-gamma * b2, d), _j(-gamma * b2, d) + _g(1, 1) + _g(2, 1))
    start = der.find(_g(1, -1)) + 1
    end = der.find(_g(1, 1), start)
    der.substitute(tuple(der.word[start:end]), _j(c, d), pos=start)
    der.permute(_g(1, -1) + _j(c, d), _j(c, d) + _g(1, -1), pos=start - 1)
    der.substitute(gen_power(J, -c) + _j(c, d), (), pos=0)
    der.reduce()
    return PhaseCommutationWitness(d, factors, c, der.certificate())


def pentagram_witness(b: Sequence[int], d: int) -> PhaseCommutationWitness:
    """Certificate for g7 g3^-1 = J^s g3^-1 g7 in the all-(-1) reduced pentagram.

    The derivation rewrites g3^-1 via the first row, then shuffles letters
    until the word splits into the four remaining row relators times J^-s.
    """
    red = ReducedPentagram(d, (-1,) * 6, b)
    b1, b2, b3, b4, b5 = red.b
    P = presentation_from_lcs(red.lcs())
    row = P.row_index
    c = red.phase
    factors = ((7, 1), (3, -1))
    der = Derivation(P, witness_target(factors, c, d))
    g = _g

    der.substitute(g(3, -1), _j(-b1, d) + g(1, 1) + g(2, 1) + g(4, 1), {row(0): -1})
    der.permute(g(7, 1) + _j(-b1, d), _j(-b1, d) + g(7, 1))
    der.substitute(tuple(der.word[: der.find(g(7, 1))]), _j(-(b2 + b3 + b4 + b5), d), pos=0)
    der.permute(g(7, 1) + g(1, 1), g(1, 1) + g(7, 1))
    der.permute(g(4, 1) + g(7, -1) + g(3, 1), g(7, -1) + g(3, 1) + g(4, 1))

    der.insert(der.find(g(2, 1)) + 1, g(9, 1) + g(9, -1))
    der.permute(g(9, -1) + g(7, -1), g(7, -1) + g(9, -1))
    der.substitute(g(7, -1) + g(9, -1), g(4, -1) + _j(b5, d) + g(10, 1), {row(4): 1})
    der.permute(g(4, -1) + _j(b5, d) + g(10, 1) + g(3, 1), g(3, 1) + g(4, -1) + _j(b5, d) + g(10, 1))
    der.substitute(g(4, -1) + _j(b5, d) + g(10, 1), g(7, -1) + g(9, -1), {row(4): -1})
    der.permute(g(7, -1) + g(9, -1) + g(4, 1), g(4, 1) + g(7, -1) + g(9, -1))

    der.insert(der.find(g(1, 1)) + 1, g(6, 1) + g(6, -1))
    der.permute(g(6, -1) + g(7, 1), g(7, 1) + g(6, -1))
    der.substitute(g(2, 1) + g(9, 1), _j(b3, d) + g(5, 1) + g(8, -1), {row(2): 1})
    der.permute(g(6, -1) + _j(b3, d) + g(5, 1) + g(8, -1), _j(b3, d) + g(5, 1) + g(8, -1) + g(6, -1))
    der.substitute(_j(b3, d) + g(5, 1) + g(8, -1), g(2, 1) + g(9, 1), {row(2): -1}, pos=der.find(g(7, 1)) + 1)
    der.permute(g(6, -1) + g(3, 1), g(3, 1) + g(6, -1))

    der.insert(der.find(g(1, 1)) + 1, g(5, 1) + g(5, -1))
    der.permute(g(5, -1) + g(6, 1) + g(7, 1) + g(2, 1), g(6, 1) + g(7, 1) + g(2, 1) + g(5, -1))
    der.insert(der.find(g(5, -1)) + 1, g(8, 1) + g(8, -1))
    der.permute(g(8, -1) + g(9, 1) + g(3, 1) + g(6, -1), g(9, 1) + g(3, 1) + g(6, -1) + g(8, -1))
    der.insert(der.find(g(8, -1)) + 1, g(10, 1) + g(10, -1))
    der.permute(g(10, -1) + g(4, 1) + g(7, -1) + g(9, -1), g(4, 1) + g(7, -1) + g(9, -1) + g(10, -1))

    rows = (
        (1, g(1, 1) + g(5, 1) + g(6, 1) + g(7, 1), b2),
        (2, g(2, 1) + g(5, -1) + g(8, 1) + g(9, 1), b3),
        (3, g(3, 1) + g(6, -1) + g(8, -1) + g(10, 1), b4),
        (4, g(4, 1) + g(7, -1) + g(9, -1) + g(10, -1), b5),
    )
    for i, word, rhs in rows:
        der.substitute(word, _j(rhs, d), {row(i): 1})
    der.substitute(tuple(der.word), (), pos=0)
    return PhaseCommutationWitness(d, factors, c, der.certificate())


def witness_for(red: ReducedSystem) -> PhaseCommutationWitness:
    if not red.uniform:
        raise RegimeMismatch("phase commutation only arises in the uniform regime")
    if red.family == "square":
        return square_witness(red.gammas[0], red.gammas[3], red.b, red.d)
    return pentagram_witness(red.b, red.d)


# -- classification ---------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """Outcome of classifying one family member.

    ``kind`` is "classically_satisfiable", "no_quantum_solution" or
    "unsupported". For satisfiable instances ``assignment`` solves the
    original system and ``reduced_assignment`` the reduced one.
    """

    kind: str
    family: str
    d: int
    method: str = ""
    reason: str = ""
    assignment: ZdVector | None = None
    reduced_assignment: ZdVector | None = None
    reduced: ReducedSystem | None = None
    witness: PhaseCommutationWitness | None = None
    verdict: Verdict | None = None

    @property
    def satisfiable(self) -> bool | None:
        if self.kind == "unsupported":
            return None
        return self.kind == "classically_satisfiable"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "family": self.family, "d": self.d}
        if self.method:
            out["method"] = self.method
        if self.reason:
            out["reason"] = self.reason
        if self.reduced is not None:
            out["reduced"] = {
                "gammas": list(self.reduced.gammas),
                "b": list(self.reduced.b),
                "var_scale": list(self.reduced.record.var_scale),
                "row_scale": list(self.reduced.record.row_scale),
                "lcs": lcs_to_dict(self.reduced.lcs()),
            }
        if self.assignment is not None:
            out["assignment"] = list(self.assignment.entries)
            out["reduced_assignment"] = list(self.reduced_assignment.entries)
        if self.witness is not None:
            out["witness"] = witness_to_dict(self.witness)
            out["relation"] = self.witness.relation_str()
            out["consequence"] = self.verdict.consequence
        return out


def _satisfiable(red: ReducedSystem, y: ZdVector, method: str) -> Classification:
    reduced_lcs = red.lcs()
    if not verify_classical(reduced_lcs, y):
        raise AssertionError(f"{method} produced a non-solution {y.entries}")
    x = pullback_solution(y, red.record)
    if not verify_classical(red.record.source, x):
        raise AssertionError("pulled-back assignment fails on the original system")
    return Classification("classically_satisfiable", red.family, red.d, method, assignment=x,
                          reduced_assignment=y, reduced=red)


def _classify(red: ReducedSystem, family: str) -> Classification:
    if red.family != family:
        raise RegimeMismatch(f"expected a reduced {family}, got {red.family}")
    d = red.d
    if d % 2 == 0:
        raise UnsupportedModulus(f"even d={d}: quantum and classical satisfiability can differ")
    pm_one = all(g in (1, d - 1) for g in red.gammas)
    if not is_prime(d) and not pm_one:
        raise UnsupportedModulus(f"composite d={d} with coefficients other than +-1")
    if red.uniform:
        s = red.phase
        if s == 0:
            b = red.b
            if family == "square":
                gam, dlt = red.gammas[0], red.gammas[3]
                y = [-gam * b[1] - dlt * b[2] + b[3], b[4], b[0] + gam * b[1] + dlt * b[2] - b[3] - b[4],
                     b[1], 0, 0, b[2], 0, 0]
            else:
                y = [b[1], b[2], b[3], b[0] - b[1] - b[2] - b[3]] + [0] * 6
            return _satisfiable(red, ZdVector(tuple(v % d for v in y), d), "uniform closed form")
        wit = witness_for(red)
        P = presentation_from_lcs(red.lcs())
        verdict = no_quantum_verdict(P, wit)
        return Classification("no_quantum_solution", family, d, "phase commutation",
                              reduced=red, witness=wit, verdict=verdict)
    if is_prime(d):
        y = solve_linear_system(red.lcs().M, red.lcs().b)
        assert y is not None, "full-rank system over a field must be solvable"
        return _satisfiable(red, y, "linear solve")
    solver = lemma_solution_square if family == "square" else lemma_solution_pentagram
    return _satisfiable(red, solver(red), "closed form")


def classify_square(red: ReducedSystem, d: int | None = None) -> Classification:
    if d is not None and d != red.d:
        raise RecordMismatch(f"d={d} does not match the reduced system's d={red.d}")
    return _classify(red, "square")


def classify_pentagram(red: ReducedSystem, d: int | None = None) -> Classification:
    if d is not None and d != red.d:
        raise RecordMismatch(f"d={d} does not match the reduced system's d={red.d}")
    return _classify(red, "pentagram")


def classify(spec: FamilySpec) -> Classification:
    """Reduce and classify; unsupported regimes come back as a Classification too."""
    try:
        red = reduce_spec(spec)
        return _classify(red, spec.family)
    except UnsupportedModulus as exc:
        return Classification("unsupported", spec.family, spec.d, reason=str(exc))


def witness_is_valid(red: ReducedSystem, wit: PhaseCommutationWitness) -> bool:
    return verify_certificate(presentation_from_lcs(red.lcs()), wit.certificate)
