"""Solution-group presentations and checkable normal-closure certificates.

Generators are numbered ``0`` for J and ``i`` for g_i (1-based, like the
variables x_i). A letter is ``(generator, +1 | -1)`` and a word is a tuple of
letters, always fully expanded: g^3 is stored as three copies of g.

A certificate for a word w is a list of pairs (u_i, q_i, e_i) such that

    (u_1 r_{q_1}^{e_1} u_1^-1) ... (u_l r_{q_l}^{e_l} u_l^-1)

freely reduces to w, where r_q are the defining relators. Certificates are
never searched for in general; :class:`Derivation` builds them from explicit
rewriting steps, and every consumer re-checks them by free reduction.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import (
    BadRelatorIndex,
    EvenModulus,
    InvalidCertificate,
    NonCommutingRelator,
    ParseError,
    ZeroPhase,
)
from .lcs import Lcs, shared_row_pairs

J = 0

Letter = tuple[int, int]
Word = tuple[Letter, ...]


# -- words -------------------------------------------------------------------


def gen_power(g: int, e: int) -> Word:
    """g^e written out as |e| letters."""
    s = 1 if e >= 0 else -1
    return ((g, s),) * abs(e)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    push, pop = out.append, out.pop
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            pop()
        else:
            push(letter)
    return tuple(out)


def reflect(w: Sequence[Letter]) -> Word:
    """Reverse the order of the letters, keeping their exponents."""
    return tuple(reversed(w))


def commutator(a: int, b: int) -> Word:
    return ((a, 1), (b, 1), (a, -1), (b, -1))


def net_exponents(w: Sequence[Letter]) -> Counter:
    c = Counter()
    for g, e in w:
        c[g] += e
    return c


def word_str(w: Sequence[Letter]) -> str:
    if not w:
        return "e"
    parts = []
    i = 0
    while i < len(w):
        g, e = w[i]
        k = i
        while k < len(w) and w[k] == (g, e):
            k += 1
        name = "J" if g == J else f"g{g}"
        power = (k - i) * e
        parts.append(name if power == 1 else f"{name}^{power}")
        i = k
    return " ".join(parts)


# -- presentations ---------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generators J, g_1..g_n and the relators of the solution group.

    ``kinds[k]`` describes relator k: ``("order", i)`` for g_i^d (i = 0 is
    J^d), ``("comm", a, b)`` for a b a^-1 b^-1 with a < b, and ``("row", i)``
    for the row relator J^{-b_i} prod_j g_j^{M_ij}.
    """

    d: int
    n: int
    relators: tuple[Word, ...]
    kinds: tuple[tuple, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(self.kinds)})

    def __len__(self):
        return len(self.relators)

    def relator(self, k: int) -> Word:
        if not isinstance(k, int) or not 0 <= k < len(self.relators):
            raise BadRelatorIndex(f"relator index {k!r} out of range 0..{len(self.relators) - 1}")
        return self.relators[k]

    def order_index(self, g: int) -> int:
        return self._index[("order", g)]

    def row_index(self, i: int) -> int:
        return self._index[("row", i)]

    def comm_index(self, a: int, b: int) -> int | None:
        """Index of the commutator relator for generators a != b, if present."""
        return self._index.get(("comm", min(a, b), max(a, b)))

    def commute(self, a: int, b: int) -> bool:
        return a == b or self.comm_index(a, b) is not None


def presentation_from_lcs(lcs: Lcs) -> Presentation:
    d, n = lcs.d, lcs.n
    rels: list[Word] = []
    kinds: list[tuple] = []
    for i in range(1, n + 1):
        rels.append(gen_power(i, d))
        kinds.append(("order", i))
    rels.append(gen_power(J, d))
    kinds.append(("order", J))
    for i in range(1, n + 1):
        rels.append(commutator(J, i))
        kinds.append(("comm", J, i))
    for j, k in sorted(shared_row_pairs(lcs)):
        rels.append(commutator(j + 1, k + 1))
        kinds.append(("comm", j + 1, k + 1))
    for i in range(lcs.m):
        w = gen_power(J, -lcs.b[i])
        for j, c in enumerate(lcs.M.rows[i]):
            w += gen_power(j + 1, c)
        rels.append(w)
        kinds.append(("row", i))
    return Presentation(d, n, tuple(rels), tuple(kinds))


def relator_letters_commute(P: Presentation, k: int) -> bool:
    gens = sorted({g for g, _ in P.relator(k)})
    return all(P.commute(a, b) for i, a in enumerate(gens) for b in gens[i + 1:])


# -- certificates ----------------------------------------------------------------


class CertPair(NamedTuple):
    u: Word
    relator: int
    power: int = 1


@dataclass(frozen=True)
class ConjugationCertificate:
    target: Word
    pairs: tuple[CertPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "pairs", tuple(CertPair(tuple(u), k, e) for u, k, e in self.pairs))


def _expand_pairs(P: Presentation, pairs: Sequence[CertPair]) -> Word:
    out: list[Letter] = []
    for u, k, e in pairs:
        if e not in (1, -1):
            raise BadRelatorIndex(f"relator power must be +1 or -1, got {e}")
        r = P.relator(k)
        out.extend(u)
        out.extend(r if e == 1 else inverse(r))
        out.extend(inverse(u))
    return tuple(out)


def expand_certificate(P: Presentation, cert: ConjugationCertificate) -> Word:
    """The raw product of conjugated relators, without any reduction."""
    return _expand_pairs(P, cert.pairs)


def verify_certificate(P: Presentation, cert: ConjugationCertificate) -> bool:
    try:
        W = expand_certificate(P, cert)
    except BadRelatorIndex:
        return False
    if any(not 0 <= g <= P.n for g, _ in cert.target):
        return False
    return free_reduce(W) == free_reduce(cert.target)


def invert_pairs(pairs: Sequence[CertPair]) -> list[CertPair]:
    """Pairs certifying w^-1 from pairs certifying w."""
    return [CertPair(u, k, -e) for u, k, e in reversed(pairs)]


def _join(a: Word, b: Word) -> Word:
    """a * b with cancellation at the junction only."""
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i][0] == b[i][0] and a[-1 - i][1] == -b[i][1]:
        i += 1
    return a[: len(a) - i] + b[i:]


def conjugate_pairs(prefix: Sequence[Letter], pairs: Sequence[CertPair]) -> list[CertPair]:
    """Pairs certifying p w p^-1 from pairs certifying w."""
    prefix = tuple(prefix)
    return [CertPair(_join(prefix, u), k, e) for u, k, e in pairs]


def rotation_pairs(P: Presentation, w: Sequence[Letter], k: int) -> list[CertPair] | None:
    """A one-pair certificate when w is a cyclic rotation of relator k or its inverse."""
    w = tuple(w)
    r = P.relator(k)
    if len(w) != len(r):
        return None
    for e, rr in ((1, r), (-1, inverse(r))):
        for s in range(len(rr)):
            if rr[s:] + rr[:s] == w:
                # rr = A B and w = B A = A^-1 (A B) A
                return [CertPair(inverse(rr[:s]), k, e)]
    return None


def swap_pairs(P: Presentation, a: Letter, b: Letter) -> list[CertPair]:
    """Pairs certifying a b a^-1 b^-1, i.e. the legality of rewriting ab -> ba."""
    if a[0] == b[0]:
        return []
    k = P.comm_index(a[0], b[0])
    if k is None:
        raise NonCommutingRelator(f"no commutation relator for generators {a[0]} and {b[0]}")
    pairs = rotation_pairs(P, (a, b, (a[0], -a[1]), (b[0], -b[1])), k)
    assert pairs is not None
    return pairs


def sort_pairs(P: Presentation, w: Sequence[Letter]) -> tuple[list[CertPair], Word]:
    """Bubble-sort w by generator; return pairs certifying w * sorted^-1 and the sorted word."""
    x = list(w)
    pairs: list[CertPair] = []
    for end in range(len(x) - 1, 0, -1):
        swapped = False
        for i in range(end):
            if x[i][0] > x[i + 1][0]:
                pairs.extend(conjugate_pairs(x[:i], swap_pairs(P, x[i], x[i + 1])))
                x[i], x[i + 1] = x[i + 1], x[i]
                swapped = True
        if not swapped:
            break
    return pairs, tuple(x)


def collect_pairs(P: Presentation, z: Sequence[Letter], uses: dict[int, int] | None = None) -> list[CertPair]:
    """Certify a word z whose letters commute pairwise (wherever they must be reordered).

    ``uses`` maps relator index -> power; the remaining discrepancy in net
    exponents is covered by order relators g^d, so it must be a multiple of d.
    """
    z = tuple(z)
    rel_seq: list[tuple[int, int]] = []
    for k, power in (uses or {}).items():
        P.relator(k)
        rel_seq.extend([(k, 1 if power > 0 else -1)] * abs(power))
    net = net_exponents(z)
    for k, e in rel_seq:
        for g, v in net_exponents(P.relator(k)).items():
            net[g] -= e * v
    for g, v in sorted(net.items()):
        if v % P.d:
            raise InvalidCertificate(f"net exponent {v} of generator {g} is not covered by the given relators")
        if v:
            k = P.order_index(g)
            rel_seq.extend([(k, 1 if v > 0 else -1)] * (abs(v) // P.d))
    R: list[Letter] = []
    for k, e in rel_seq:
        r = P.relator(k)
        R.extend(r if e == 1 else inverse(r))
    z_pairs, z_sorted = sort_pairs(P, z)
    r_pairs, r_sorted = sort_pairs(P, R)
    assert free_reduce(z_sorted) == free_reduce(r_sorted)
    return z_pairs + invert_pairs(r_pairs) + [CertPair((), k, e) for k, e in rel_seq]


class Derivation:
    """Rewrite a word step by step while accumulating a certificate.

    The invariant is that ``pairs`` certify ``start * current^-1``; once the
    current word freely reduces to the identity, :meth:`certificate`
    returns a certificate for ``start``. Every step checks its local
    certificate immediately.
    """

    def __init__(self, P: Presentation, word: Sequence[Letter]):
        self.P = P
        self.start: Word = tuple(word)
        self.word: list[Letter] = list(word)
        self.pairs: list[CertPair] = []

    def __str__(self):
        return word_str(self.word)

    def find(self, sub: Sequence[Letter], start: int = 0) -> int:
        sub = tuple(sub)
        for i in range(start, len(self.word) - len(sub) + 1):
            if tuple(self.word[i:i + len(sub)]) == sub:
                return i
        raise InvalidCertificate(f"{word_str(sub)} does not occur in {self}")

    def replace(self, pos: int, length: int, new: Sequence[Letter], local: Sequence[CertPair], check: bool = True):
        """Replace word[pos:pos+length] by ``new``; ``local`` certifies old * new^-1.

        ``check=False`` skips the immediate check for callers that verify the
        final certificate anyway.
        """
        new = tuple(new)
        old = tuple(self.word[pos:pos + length])
        if check and free_reduce(old + inverse(new)) != free_reduce(_expand_pairs(self.P, local)):
            raise InvalidCertificate(f"step {word_str(old)} -> {word_str(new)} is not certified")
        self.pairs.extend(conjugate_pairs(self.word[:pos], local))
        self.word[pos:pos + length] = new

    def substitute(self, old: Sequence[Letter], new: Sequence[Letter], uses=None, pos: int | None = None):
        old = tuple(old)
        if pos is None:
            pos = self.find(old)
        elif tuple(self.word[pos:pos + len(old)]) != old:
            raise InvalidCertificate(f"{word_str(old)} not found at position {pos}")
        self.replace(pos, len(old), new, collect_pairs(self.P, old + inverse(new), uses))

    def insert(self, pos: int, new: Sequence[Letter]):
        """Insert a freely trivial word."""
        self.replace(pos, 0, new, [])

    def permute(self, old: Sequence[Letter], new: Sequence[Letter], pos: int | None = None):
        """Reorder a subword by adjacent swaps of commuting letters."""
        old, new = tuple(old), tuple(new)
        if Counter(old) != Counter(new):
            raise InvalidCertificate(f"{word_str(new)} is not a rearrangement of {word_str(old)}")
        if pos is None:
            pos = self.find(old)
        slots: dict[Letter, list[int]] = {}
        for i, letter in enumerate(new):
            slots.setdefault(letter, []).append(i)
        rank = [slots[letter].pop(0) for letter in old]
        for end in range(len(rank) - 1, 0, -1):
            for i in range(end):
                if rank[i] > rank[i + 1]:
                    a, b = self.word[pos + i], self.word[pos + i + 1]
                    self.replace(pos + i, 2, (b, a), swap_pairs(self.P, a, b))
                    rank[i], rank[i + 1] = rank[i + 1], rank[i]

    def reduce(self):
        self.word = list(free_reduce(self.word))

    def certificate(self) -> ConjugationCertificate:
        if free_reduce(self.word):
            raise InvalidCertificate(f"derivation ended at {self}, not the identity")
        return ConjugationCertificate(self.start, tuple(self.pairs))


# -- reflection ----------------------------------------------------------------------


def reflected_relator_pairs(P: Presentation, k: int, e: int) -> list[CertPair]:
    """Pairs certifying reflect(r_k^e), legal because r_k's letters commute."""
    if not relator_letters_commute(P, k):
        raise NonCommutingRelator(f"relator {k} contains non-commuting letters")
    r = P.relator(k)
    y = reflect(r if e == 1 else inverse(r))
    pairs = rotation_pairs(P, y, k)
    if pairs is None:
        pairs = collect_pairs(P, y, {k: e})
    return pairs


def reflect_certificate(P: Presentation, cert: ConjugationCertificate) -> ConjugationCertificate:
    """Certificate for reflect(target), built pair by pair in reverse order.

    Each u r u^-1 becomes reflect(u)^-1 reflect(r) reflect(u); since reflect(r)
    is not literally a relator, it is expanded into its own reordering
    certificate.
    """
    cache: dict[tuple[int, int], list[CertPair]] = {}
    out: list[CertPair] = []
    for u, k, e in reversed(cert.pairs):
        if (k, e) not in cache:
            cache[k, e] = reflected_relator_pairs(P, k, e)
        out.extend(conjugate_pairs(inverse(reflect(u)), cache[k, e]))
    return ConjugationCertificate(reflect(cert.target), tuple(out))


# -- phase commutation ---------------------------------------------------------------


def witness_target(factors: Sequence[tuple[int, int]], c: int, d: int) -> Word:
    """J^-c g_1^a_1 ... g_k^a_k (g_k^a_k ... g_1^a_1)^-1."""
    forward: Word = ()
    for g, a in factors:
        forward += gen_power(g, a)
    backward: Word = ()
    for g, a in reversed(factors):
        backward += gen_power(g, a)
    return gen_power(J, -(c % d)) + forward + inverse(backward)


@dataclass(frozen=True)
class PhaseCommutationWitness:
    """Evidence that g_1^a_1...g_k^a_k = J^c g_k^a_k...g_1^a_1 in the solution group."""

    d: int
    factors: tuple[tuple[int, int], ...]
    phase: int
    certificate: ConjugationCertificate

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(g), int(a)) for g, a in self.factors))
        object.__setattr__(self, "phase", int(self.phase) % self.d)

    @property
    def target(self) -> Word:
        return witness_target(self.factors, self.phase, self.d)

    def relation_str(self) -> str:
        fwd = " ".join(f"g{g}^{a}" if a != 1 else f"g{g}" for g, a in self.factors)
        bwd = " ".join(f"g{g}^{a}" if a != 1 else f"g{g}" for g, a in reversed(self.factors))
        return f"{fwd} = J^{self.phase} {bwd}"


@dataclass(frozen=True)
class Verdict:
    """A verified no-quantum-solution conclusion.

    ``j_certificate`` certifies J^{-2c}, so J^{2c} = e with 2c != 0 mod d and
    the order of J is a proper divisor of d.
    """

    d: int
    phase: int
    j_exponent: int
    reflected: ConjugationCertificate
    j_certificate: ConjugationCertificate

    kind = "no_quantum_solution"

    @property
    def consequence(self) -> str:
        return f"J^{self.j_exponent} = e with {self.j_exponent} != 0 mod {self.d}"


def no_quantum_verdict(P: Presentation, wit: PhaseCommutationWitness) -> Verdict:
    d = P.d
    if wit.d != d:
        raise InvalidCertificate(f"witness modulus {wit.d} does not match presentation modulus {d}")
    if d % 2 == 0:
        raise EvenModulus(f"phase commutation rules nothing out for even d={d}")
    c = wit.phase % d
    if c == 0:
        raise ZeroPhase("a phase-commutation witness needs c != 0 mod d")
    if len(wit.factors) < 2:
        raise InvalidCertificate("a witness needs at least two factors")
    cert = wit.certificate
    if cert.target != wit.target:
        raise InvalidCertificate("certificate target does not match the stated relation")
    if not verify_certificate(P, cert):
        raise InvalidCertificate("certificate does not reduce to its target")
    for k in sorted({k for _, k, _ in cert.pairs}):
        if not relator_letters_commute(P, k):
            raise NonCommutingRelator(f"relator {k} contains non-commuting letters")
    reflected = reflect_certificate(P, cert)
    if not verify_certificate(P, reflected):
        raise InvalidCertificate("reflected certificate failed to verify")

    # w = J^-c F B^-1 and reflect(w) = F^-1 B J^-c, so
    # w * F reflect(w) F^-1 = J^-c F J^-c F^-1, which equals J^-2c once J is moved past F.
    F: Word = ()
    for g, a in wit.factors:
        F += gen_power(g, a)
    Jc = gen_power(J, -c)
    der = Derivation(P, gen_power(J, -2 * c))
    der.insert(c, F + inverse(F))
    der.permute(inverse(F) + Jc, Jc + inverse(F), pos=c + len(F))
    combined = list(cert.pairs) + conjugate_pairs(F, reflected.pairs)
    der.replace(0, len(der.word), (), combined, check=False)
    j_cert = der.certificate()
    if not verify_certificate(P, j_cert):
        raise InvalidCertificate("derived J-power certificate failed to verify")
    return Verdict(d, c, (2 * c) % d, reflected, j_cert)


# -- file format ------------------------------------------------------------------------


def word_to_json(w: Sequence[Letter]) -> list:
    return [[g, e] for g, e in w]


def certificate_to_dict(cert: ConjugationCertificate) -> dict:
    pairs = []
    for u, k, e in cert.pairs:
        p = {"u": word_to_json(u), "relator": k}
        if e != 1:
            p["power"] = e
        pairs.append(p)
    return {"target": word_to_json(cert.target), "pairs": pairs}


def witness_to_dict(wit: PhaseCommutationWitness) -> dict:
    out = certificate_to_dict(wit.certificate)
    out["phase_c"] = wit.phase
    out["factors"] = [[g, a] for g, a in wit.factors]
    out["d"] = wit.d
    return out


def _word_from_json(v, field_name) -> Word:
    if not isinstance(v, list):
        raise ParseError("expected a list of [gen, +-1] letters", field_name)
    out = []
    for i, letter in enumerate(v):
        if (
            not isinstance(letter, list)
            or len(letter) != 2
            or not all(isinstance(x, int) for x in letter)
            or letter[0] < 0
            or letter[1] not in (1, -1)
        ):
            raise ParseError("expected [gen >= 0, +1 or -1]", f"{field_name}[{i}]")
        out.append((letter[0], letter[1]))
    return tuple(out)


def certificate_from_dict(doc) -> ConjugationCertificate:
    if not isinstance(doc, dict) or "target" not in doc or "pairs" not in doc:
        raise ParseError("expected an object with 'target' and 'pairs'", "$")
    target = _word_from_json(doc["target"], "target")
    if not isinstance(doc["pairs"], list):
        raise ParseError("expected a list", "pairs")
    pairs = []
    for i, p in enumerate(doc["pairs"]):
        where = f"pairs[{i}]"
        if not isinstance(p, dict) or "u" not in p or "relator" not in p:
            raise ParseError("pair needs 'u' and 'relator'", where)
        k = p["relator"]
        if not isinstance(k, int) or isinstance(k, bool):
            raise ParseError("expected an integer", f"{where}.relator")
        e = p.get("power", 1)
        if e not in (1, -1):
            raise ParseError("power must be +1 or -1", f"{where}.power")
        pairs.append(CertPair(_word_from_json(p["u"], f"{where}.u"), k, e))
    return ConjugationCertificate(target, tuple(pairs))


def witness_from_dict(doc) -> PhaseCommutationWitness:
    cert = certificate_from_dict(doc)
    for key in ("phase_c", "factors", "d"):
        if key not in doc:
            raise ParseError(f"missing {key!r}", key)
    factors = doc["factors"]
    if not isinstance(factors, list) or not all(
        isinstance(f, list) and len(f) == 2 and all(isinstance(x, int) for x in f) for f in factors
    ):
        raise ParseError("expected [[gen, exp], ...]", "factors")
    if not isinstance(doc["d"], int) or doc["d"] < 2:
        raise ParseError("expected an integer >= 2", "d")
    if not isinstance(doc["phase_c"], int):
        raise ParseError("expected an integer", "phase_c")
    return PhaseCommutationWitness(doc["d"], tuple(tuple(f) for f in factors), doc["phase_c"], cert)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True)
