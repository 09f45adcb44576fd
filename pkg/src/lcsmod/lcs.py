"""Linear constraint systems M x = b over Z_d and their JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import DimensionMismatch, LcsError, ParseError
from .zd_linalg import ZdMatrix, ZdVector, as_vector, solve_linear_system

Assignment = ZdVector


@dataclass(frozen=True)
class Lcs:
    """A linear constraint system (M, b) modulo d.

    Variables are 0-indexed in code and in files; ``label(j)`` gives the
    1-based human name ``x{j+1}`` unless labels were supplied.
    """

    d: int
    M: ZdMatrix
    b: ZdVector
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.M.modulus != self.d or self.b.modulus != self.d:
            raise DimensionMismatch("matrix, rhs and system moduli must agree")
        if len(self.b) != self.M.shape[0]:
            raise DimensionMismatch(f"{len(self.b)} rhs entries for {self.M.shape[0]} rows")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n:
                raise DimensionMismatch(f"{len(self.labels)} labels for {self.n} variables")

    @classmethod
    def from_rows(cls, d: int, rows: Sequence[Sequence[int]], rhs: Sequence[int], labels=None) -> "Lcs":
        return cls(d, ZdMatrix(tuple(tuple(r) for r in rows), d), ZdVector(tuple(rhs), d), labels)

    @classmethod
    def from_lines(cls, d: int, n: int, lines, rhs, labels=None) -> "Lcs":
        """Build from sparse rows given as ``{var_index: coeff}`` mappings or index lists."""
        rows = []
        for line in lines:
            row = [0] * n
            items = line.items() if isinstance(line, dict) else ((j, 1) for j in line)
            for j, c in items:
                row[j] += c
            rows.append(row)
        return cls.from_rows(d, rows, rhs, labels)

    @property
    def m(self) -> int:
        return self.M.shape[0]

    @property
    def n(self) -> int:
        return self.M.shape[1]

    def label(self, j: int) -> str:
        return self.labels[j] if self.labels else f"x{j + 1}"

    def support(self, i: int) -> list[int]:
        return [j for j, c in enumerate(self.M.rows[i]) if c]

    def with_rhs(self, b) -> "Lcs":
        return Lcs(self.d, self.M, as_vector(b, self.d), self.labels)


def verify_classical(lcs: Lcs, a) -> bool:
    """True iff every row constraint holds modulo d."""
    a = as_vector(a, lcs.d)
    if len(a) != lcs.n:
        raise DimensionMismatch(f"assignment of length {len(a)} for {lcs.n} variables")
    return lcs.M.matvec(a) == lcs.b


def classically_satisfiable(lcs: Lcs) -> Assignment | None:
    """A classical solution, or None if none exists."""
    return solve_linear_system(lcs.M, lcs.b)


def shared_row_pairs(lcs: Lcs) -> set[tuple[int, int]]:
    """Unordered pairs (j, k), j < k, of variables that co-occur in some row."""
    pairs = set()
    for i in range(lcs.m):
        pairs.update(combinations(lcs.support(i), 2))
    return pairs


# -- file format ---------------------------------------------------------------


def lcs_to_dict(lcs: Lcs) -> dict:
    constraints = []
    for i in range(lcs.m):
        coeffs = [[j, c] for j, c in enumerate(lcs.M.rows[i]) if c]
        constraints.append({"coeffs": coeffs, "rhs": lcs.b[i]})
    if lcs.labels is None and not any(lcs.M.column(lcs.n - 1)):
        # keep the variable count recoverable without labels
        constraints[0]["coeffs"].append([lcs.n - 1, 0])
    out = {"d": lcs.d, "constraints": constraints}
    if lcs.labels is not None:
        out["labels"] = list(lcs.labels)
    return out


def serialize_lcs(lcs: Lcs) -> str:
    return json.dumps(lcs_to_dict(lcs), sort_keys=True)


def _int(value, field):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", field)
    return value


def lcs_from_dict(doc) -> Lcs:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    unknown = set(doc) - {"d", "constraints", "labels"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", "$")
    if "d" not in doc:
        raise ParseError("missing modulus", "d")
    d = _int(doc["d"], "d")
    if d < 2:
        raise ParseError(f"modulus must be >= 2, got {d}", "d")
    cons = doc.get("constraints")
    if not isinstance(cons, list) or not cons:
        raise ParseError("expected a non-empty list", "constraints")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels) or not labels:
            raise ParseError("expected a non-empty list of strings", "labels")
    sparse, rhs, max_index = [], [], -1
    for i, con in enumerate(cons):
        where = f"constraints[{i}]"
        if not isinstance(con, dict) or set(con) != {"coeffs", "rhs"}:
            raise ParseError("constraint needs exactly 'coeffs' and 'rhs'", where)
        if not isinstance(con["coeffs"], list):
            raise ParseError("expected a list", f"{where}.coeffs")
        row = {}
        for k, entry in enumerate(con["coeffs"]):
            ef = f"{where}.coeffs[{k}]"
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError("expected [varIndex, coeff]", ef)
            j, c = _int(entry[0], ef + "[0]"), _int(entry[1], ef + "[1]")
            if j < 0:
                raise ParseError(f"variable index {j} is negative", ef + "[0]")
            if labels is not None and j >= len(labels):
                raise ParseError(f"variable index {j} out of range for {len(labels)} labels", ef + "[0]")
            if j in row:
                raise ParseError(f"variable {j} repeated in one constraint", ef)
            row[j] = c
            max_index = max(max_index, j)
        sparse.append(row)
        rhs.append(_int(con["rhs"], f"{where}.rhs"))
    n = len(labels) if labels is not None else max_index + 1
    if n < 1:
        raise ParseError("system has no variables", "constraints")
    rows = [[row.get(j, 0) for j in range(n)] for row in sparse]
    return Lcs.from_rows(d, rows, rhs, labels)


def parse_lcs(text: str) -> Lcs:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    try:
        return lcs_from_dict(doc)
    except ParseError:
        raise
    except LcsError as exc:
        raise ParseError(str(exc)) from None


# -- the two standard systems --------------------------------------------------

SQUARE_LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8))
PENTAGRAM_LINES = ((0, 1, 2, 3), (0, 4, 5, 6), (1, 4, 7, 8), (2, 5, 7, 9), (3, 6, 8, 9))


def magic_square(d: int, b=(0, 0, 0, 0, 0, 1)) -> Lcs:
    """The 3x3 grid system: three rows then three columns, third column dashed by default."""
    return Lcs.from_lines(d, 9, SQUARE_LINES, b)


def magic_pentagram(d: int, b=(1, 0, 0, 0, 0)) -> Lcs:
    """The five-line pentagram system; the first line is dashed by default."""
    return Lcs.from_lines(d, 10, PENTAGRAM_LINES, b)
