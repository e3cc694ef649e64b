"""Graded matrix factorizations over Q[x_1, ..., x_k] with deg x_i = 1.

A factorization E of a homogeneous W of degree d is

    E1 --phi1--> E0 --phi0--> E1(d),     phi0·phi1 = W·id,  phi1·phi0 = W·id,

with E1, E0 graded free modules ⊕ S(-g_j). Generator degrees are stored
as integer lists and M(l) lowers every generator degree by l. Entry (i, j)
of phi1 is homogeneous of degree g1[j] - g0[i]; entry (i, j) of phi0 has
degree g0[j] - g1[i] + d.

The Hom complex is computed one cohomological degree at a time. Every
graded Hom space between fixed free modules is finite-dimensional, so its
differential is a finite rational matrix.
"""

from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import RatMat, ShapeMismatch, rat_str


class PolyError(ValueError):
    pass


class NotHomogeneous(PolyError):
    pass


class PairingMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class WrongDegree(ValueError):
    pass


# -- polynomials -------------------------------------------------------------

class GradedPoly:
    """Polynomial in fixed ordered variables, stored as {exponent tuple: coefficient}."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: dict | None = None):
        self.variables = tuple(variables)
        k = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != k:
                raise PolyError(f"exponent {exp} does not match {k} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, variables, c) -> "GradedPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "GradedPoly":
        variables = tuple(variables)
        if name not in variables:
            raise PolyError(f"unknown variable {name!r}")
        exp = tuple(int(v == name) for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def monomial(cls, variables, exp, c=1) -> "GradedPoly":
        return cls(variables, {tuple(exp): c})

    def zero_like(self) -> "GradedPoly":
        return GradedPoly(self.variables)

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Total degree of a nonzero homogeneous polynomial, else None."""
        ds = self.degrees()
        return next(iter(ds)) if len(ds) == 1 else None

    def is_homogeneous_of(self, deg: int) -> bool:
        return not self.terms or self.degrees() == {deg}

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    # -- arithmetic
    def _check(self, other: "GradedPoly"):
        if self.variables != other.variables:
            raise PolyError(f"variable mismatch {self.variables} vs {other.variables}")

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return GradedPoly(self.variables, out)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, c) -> "GradedPoly":
        c = Fraction(c)
        return GradedPoly(self.variables, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return GradedPoly(self.variables, out)

    def __pow__(self, k: int) -> "GradedPoly":
        out = GradedPoly.const(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"GradedPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def monomials(nvars: int, deg: int) -> list[tuple]:
    """Exponent vectors of total degree ``deg``, in descending lex order."""
    if deg < 0:
        return []
    if nvars == 0:
        return [()] if deg == 0 else []
    out = []
    for first in range(deg, -1, -1):
        out.extend((first,) + rest for rest in monomials(nvars - 1, deg - first))
    return out


def format_poly(p: GradedPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for exp in sorted(p.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = p.terms[exp]
        mono = "*".join(v if k == 1 else f"{v}^{k}"
                        for v, k in zip(p.variables, exp) if k)
        mag = abs(c)
        if not mono:
            body = rat_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rat_str(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    text = ("-" if first_sign == "-" else "") + first
    return text + "".join(f"{s}{b}" for s, b in pieces[1:])


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            out.append(("num", num))
        elif name:
            out.append(("name", name))
        elif op.strip():
            if op not in "+-*^()":
                raise PolyError(f"unexpected character {op!r}")
            out.append(("op", op))
    return out


def poly_variables(*texts: str) -> tuple[str, ...]:
    """Sorted variable names occurring in the given polynomial strings."""
    names = set()
    for t in texts:
        names.update(v for kind, v in _tokenize(t) if kind == "name")
    return tuple(sorted(names))


class _Parser:
    def __init__(self, text: str, variables):
        self.toks = _tokenize(text)
        self.pos = 0
        self.vars = tuple(variables)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v = self.take()
        if v != value:
            raise PolyError(f"expected {value!r}, got {v!r}")

    def expr(self) -> GradedPoly:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> GradedPoly:
        acc = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> GradedPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, v = self.take()
            if kind != "num" or "/" in v:
                raise PolyError("exponent must be a non-negative integer")
            base = base ** int(v)
        return base

    def atom(self) -> GradedPoly:
        kind, v = self.take()
        if kind == "num":
            return GradedPoly.const(self.vars, Fraction(v))
        if kind == "name":
            return GradedPoly.var(self.vars, v)
        if v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if v == "-":
            return -self.factor()
        raise PolyError(f"unexpected token {v!r}")


def parse_poly(text: str, variables: Sequence[str] | None = None) -> GradedPoly:
    if variables is None:
        variables = poly_variables(text)
    if not text.strip():
        raise PolyError("empty polynomial")
    p = _Parser(text, variables)
    out = p.expr()
    if p.pos != len(p.toks):
        raise PolyError(f"trailing input at token {p.peek()[1]!r}")
    return out


def parse_potential(text: str, variables: Sequence[str] | None = None) -> tuple[GradedPoly, int]:
    """Parse W and return (W, deg W); rejects zero and non-homogeneous input."""
    w = parse_poly(text, variables)
    if w.is_zero() or not w.is_homogeneous():
        raise NotHomogeneous(f"potential {text!r} is not a nonzero homogeneous polynomial")
    return w, w.degree


# -- polynomial matrices -------------------------------------------------------

PolyMatrix = tuple  # tuple of row tuples of GradedPoly


def pzeros(variables, rows: int, cols: int) -> PolyMatrix:
    z = GradedPoly(variables)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def pidentity(variables, n: int) -> PolyMatrix:
    one, z = GradedPoly.const(variables, 1), GradedPoly(variables)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def pshape(a: PolyMatrix, cols_hint: int = 0) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else cols_hint)


def pmul(a: PolyMatrix, b: PolyMatrix, variables, inner: int | None = None) -> PolyMatrix:
    n = len(a)
    m = len(a[0]) if a else (inner if inner is not None else len(b))
    if len(b) != m:
        raise ShapeMismatch(f"cannot multiply {n}x{m} by {len(b)}x?")
    p = len(b[0]) if b else 0
    z = GradedPoly(variables)
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = z
            for k in range(m):
                if a[i][k] and b[k][j]:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def padd(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if len(a) != len(b) or any(len(r) != len(s) for r, s in zip(a, b)):
        raise ShapeMismatch("polynomial matrix shapes differ")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def pneg(a: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(-x for x in r) for r in a)


def psub(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return padd(a, pneg(b))


def ptranspose(a: PolyMatrix, rows: int, cols: int) -> PolyMatrix:
    return tuple(tuple(a[i][j] for i in range(rows)) for j in range(cols))


def pscale(a: PolyMatrix, c) -> PolyMatrix:
    return tuple(tuple(x.scale(c) for x in r) for r in a)


def pblock(blocks: Sequence[Sequence[PolyMatrix]], row_sizes, col_sizes, variables) -> PolyMatrix:
    out = []
    for bi, rs in enumerate(row_sizes):
        for i in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                if blk is None:
                    row.extend(GradedPoly(variables) for _ in range(cs))
                else:
                    row.extend(blk[i][j] for j in range(cs))
            out.append(tuple(row))
    return tuple(out)


def pis_zero(a: PolyMatrix) -> bool:
    return all(x.is_zero() for r in a for x in r)


# -- factorizations ------------------------------------------------------------

@dataclass(frozen=True)
class GradedMF:
    W: GradedPoly
    d: int
    m1_degrees: tuple
    m0_degrees: tuple
    phi1: PolyMatrix
    phi0: PolyMatrix

    def __post_init__(self):
        object.__setattr__(self, "m1_degrees", tuple(int(g) for g in self.m1_degrees))
        object.__setattr__(self, "m0_degrees", tuple(int(g) for g in self.m0_degrees))
        object.__setattr__(self, "phi1", tuple(tuple(r) for r in self.phi1))
        object.__setattr__(self, "phi0", tuple(tuple(r) for r in self.phi0))
        r1, r0 = len(self.m1_degrees), len(self.m0_degrees)
        if len(self.phi1) != r0 or any(len(r) != r1 for r in self.phi1):
            raise ShapeMismatch(f"phi1 must be {r0}x{r1}")
        if len(self.phi0) != r1 or any(len(r) != r0 for r in self.phi0):
            raise ShapeMismatch(f"phi0 must be {r1}x{r0}")
        for r in self.phi1 + self.phi0:
            for x in r:
                if x.variables != self.W.variables:
                    raise ShapeMismatch("matrix entries use different variables")

    @property
    def variables(self) -> tuple:
        return self.W.variables

    @property
    def ranks(self) -> tuple[int, int]:
        return len(self.m1_degrees), len(self.m0_degrees)

    def phi1_degree(self, i: int, j: int) -> int:
        return self.m1_degrees[j] - self.m0_degrees[i]

    def phi0_degree(self, i: int, j: int) -> int:
        return self.m0_degrees[j] - self.m1_degrees[i] + self.d


@dataclass(frozen=True)
class MFMorphism:
    """A homogeneous element of Hom^k(E, F).

    Even k = 2l: f1 : E1 → F1(dl), f0 : E0 → F0(dl).
    Odd k = 2l+1: f1 : E1 → F0(dl), f0 : E0 → F1(d(l+1)).
    """
    source: GradedMF
    target: GradedMF
    f1: PolyMatrix
    f0: PolyMatrix
    cohomological_degree: int = 0

    @classmethod
    def identity(cls, E: GradedMF) -> "MFMorphism":
        r1, r0 = E.ranks
        return cls(E, E, pidentity(E.variables, r1), pidentity(E.variables, r0), 0)

    @classmethod
    def scalar(cls, E: GradedMF, c) -> "MFMorphism":
        ident = cls.identity(E)
        return cls(E, E, pscale(ident.f1, c), pscale(ident.f0, c), 0)

    @classmethod
    def zero(cls, E: GradedMF, F: GradedMF, k: int = 0) -> "MFMorphism":
        (a1, a0), (b1, b0) = E.ranks, F.ranks
        if k % 2 == 0:
            return cls(E, F, pzeros(E.variables, b1, a1), pzeros(E.variables, b0, a0), k)
        return cls(E, F, pzeros(E.variables, b0, a1), pzeros(E.variables, b1, a0), k)

    def differential(self) -> "MFMorphism":
        return apply_differential(self.source, self.target, self.f1, self.f0,
                                  self.cohomological_degree)

    def is_zero(self) -> bool:
        return pis_zero(self.f1) and pis_zero(self.f0)

    def is_closed(self) -> bool:
        return self.differential().is_zero()

    def compose(self, other: "MFMorphism") -> "MFMorphism":
        """self ∘ other for degree-0 morphisms."""
        if self.cohomological_degree or other.cohomological_degree:
            raise WrongDegree("composition is implemented for degree-0 morphisms")
        v = self.source.variables
        return MFMorphism(other.source, self.target, pmul(self.f1, other.f1, v),
                          pmul(self.f0, other.f0, v), 0)


def validate_mf(E: GradedMF) -> list[str]:
    """Violations of the factorization axioms; an empty list means valid."""
    problems = []
    W, v = E.W, E.variables
    if not W.is_homogeneous_of(E.d) or W.is_zero():
        problems.append(f"W is not homogeneous of degree {E.d}")
    r1, r0 = E.ranks
    for i in range(r0):
        for j in range(r1):
            if not E.phi1[i][j].is_homogeneous_of(E.phi1_degree(i, j)):
                problems.append(f"phi1[{i}][{j}] is not homogeneous of degree "
                                f"{E.phi1_degree(i, j)}")
    for i in range(r1):
        for j in range(r0):
            if not E.phi0[i][j].is_homogeneous_of(E.phi0_degree(i, j)):
                problems.append(f"phi0[{i}][{j}] is not homogeneous of degree "
                                f"{E.phi0_degree(i, j)}")
    w1 = tuple(tuple(x * W for x in r) for r in pidentity(v, r1))
    w0 = tuple(tuple(x * W for x in r) for r in pidentity(v, r0))
    if pmul(E.phi0, E.phi1, v, r0) != w1:
        problems.append("phi0·phi1 != W·id")
    if pmul(E.phi1, E.phi0, v, r1) != w0:
        problems.append("phi1·phi0 != W·id")
    return problems


def is_valid_mf(E: GradedMF) -> bool:
    return not validate_mf(E)


def tau_shift(E: GradedMF, l: int) -> GradedMF:
    """E(l): every generator degree drops by l."""
    return GradedMF(E.W, E.d, [g - l for g in E.m1_degrees], [g - l for g in E.m0_degrees],
                    E.phi1, E.phi0)


def mf_shift(E: GradedMF) -> GradedMF:
    """E[1] = (E0 --(-phi0)--> E1(d) --(-phi1)--> E0(d))."""
    return GradedMF(E.W, E.d, E.m0_degrees, [g - E.d for g in E.m1_degrees],
                    pneg(E.phi0), pneg(E.phi1))


def mf_dual(E: GradedMF) -> GradedMF:
    """E^∨ = (E1^∨(-d) --phi0^T--> E0^∨ --phi1^T--> E1^∨)."""
    r1, r0 = E.ranks
    return GradedMF(E.W, E.d, [E.d - g for g in E.m1_degrees], [-g for g in E.m0_degrees],
                    ptranspose(E.phi0, r1, r0), ptranspose(E.phi1, r0, r1))


def direct_sum(E: GradedMF, F: GradedMF) -> GradedMF:
    if E.W != F.W or E.d != F.d:
        raise ShapeMismatch("direct sum of factorizations of different potentials")
    (a1, a0), (b1, b0) = E.ranks, F.ranks
    v = E.variables
    phi1 = pblock([[E.phi1, None], [None, F.phi1]], [a0, b0], [a1, b1], v)
    phi0 = pblock([[E.phi0, None], [None, F.phi0]], [a1, b1], [a0, b0], v)
    return GradedMF(E.W, E.d, E.m1_degrees + F.m1_degrees, E.m0_degrees + F.m0_degrees,
                    phi1, phi0)


def reorder(E: GradedMF, perm1: Sequence[int], perm0: Sequence[int]) -> GradedMF:
    """Relabel generators: new generator k of E1 (resp. E0) is old perm1[k] (perm0[k])."""
    return GradedMF(
        E.W, E.d, [E.m1_degrees[p] for p in perm1], [E.m0_degrees[p] for p in perm0],
        tuple(tuple(E.phi1[i][j] for j in perm1) for i in perm0),
        tuple(tuple(E.phi0[i][j] for j in perm0) for i in perm1))


# -- Koszul factorizations ------------------------------------------------------

def _subsets(n: int, parity: int) -> list[tuple]:
    out = []
    for size in range(parity, n + 1, 2):
        out.extend(itertools.combinations(range(n), size))
    return out


def koszul_operators(s: Sequence[GradedPoly], t: Sequence[GradedPoly]):
    """(contraction by s, wedge with t) on the full exterior algebra.

    Basis: all subsets of {0..n-1}, by size then lexicographically.
    """
    n = len(s)
    v = s[0].variables if n else ()
    basis = [I for size in range(n + 1) for I in itertools.combinations(range(n), size)]
    index = {I: k for k, I in enumerate(basis)}
    N = len(basis)
    z = GradedPoly(v)
    iota = [[z] * N for _ in range(N)]
    wedge = [[z] * N for _ in range(N)]
    for col, I in enumerate(basis):
        for pos, i in enumerate(I):
            J = I[:pos] + I[pos + 1:]
            iota[index[J]][col] = s[i].scale((-1) ** pos)
        for i in range(n):
            if i in I:
                continue
            below = sum(1 for j in I if j < i)
            J = tuple(sorted(I + (i,)))
            wedge[index[J]][col] = t[i].scale((-1) ** below)
    return basis, tuple(map(tuple, iota)), tuple(map(tuple, wedge))


def koszul_anticommutation(s, t, W: GradedPoly) -> bool:
    """ι² = 0, (t∧)² = 0 and ι(t∧) + (t∧)ι = W·id, entrywise."""
    basis, iota, wedge = koszul_operators(s, t)
    v = W.variables
    N = len(basis)
    zero = pzeros(v, N, N)
    anti = padd(pmul(iota, wedge, v), pmul(wedge, iota, v))
    w_id = tuple(tuple(x * W for x in r) for r in pidentity(v, N))
    return pmul(iota, iota, v) == zero and pmul(wedge, wedge, v) == zero and anti == w_id


def koszul(W: GradedPoly, s: Sequence[GradedPoly], t: Sequence[GradedPoly]) -> GradedMF:
    n = len(s)
    if n == 0 or len(t) != n:
        raise ShapeMismatch("koszul needs equally many (>= 1) sections and cosections")
    if not W.is_homogeneous() or W.is_zero():
        raise NotHomogeneous("W must be nonzero and homogeneous")
    d = W.degree
    pairing = GradedPoly(W.variables)
    for a, b in zip(s, t):
        pairing = pairing + a * b
    if pairing != W:
        raise PairingMismatch(f"sum s_i t_i = {pairing} differs from W = {W}")
    e = []
    for a, b in zip(s, t):
        if not (a.is_homogeneous() and b.is_homogeneous()):
            raise NotHomogeneous("sections must be homogeneous")
        if a:
            e.append(a.degree)
        elif b:
            e.append(d - b.degree)
        else:
            raise NotHomogeneous("s_i and t_i both zero")
        if a and b and a.degree + b.degree != d:
            raise NotHomogeneous("deg s_i + deg t_i must equal deg W")
    if not koszul_anticommutation(s, t, W):
        raise AssertionError("Koszul operators fail to anticommute")

    def gen(I):
        return sum(e[i] for i in I) - (len(I) // 2) * d

    odd, even = _subsets(n, 1), _subsets(n, 0)
    basis, iota, wedge = koszul_operators(s, t)
    index = {I: k for k, I in enumerate(basis)}
    delta = padd(iota, wedge)
    phi1 = tuple(tuple(delta[index[I]][index[J]] for J in odd) for I in even)
    phi0 = tuple(tuple(delta[index[I]][index[J]] for J in even) for I in odd)
    return GradedMF(W, d, [gen(I) for I in odd], [gen(I) for I in even], phi1, phi0)


# -- cones ------------------------------------------------------------------------

def cone(f: MFMorphism) -> GradedMF:
    """Totalization of the two-term complex E → F (E in degree -1).

    T1 = E0 ⊕ F1, T0 = F0 ⊕ E1(d),
    t1 = [[f0, φ1F], [-φ0E, 0]],  t0 = [[0, -φ1E], [φ0F, f1]].
    """
    if f.cohomological_degree != 0:
        raise WrongDegree("cone needs a degree-0 morphism")
    if not f.is_closed():
        raise NotClosed("cone needs a closed morphism")
    E, F = f.source, f.target
    (a1, a0), (b1, b0) = E.ranks, F.ranks
    v = E.variables
    t1 = pblock([[f.f0, F.phi1], [pneg(E.phi0), None]], [b0, a1], [a0, b1], v)
    t0 = pblock([[None, pneg(E.phi1)], [F.phi0, f.f1]], [a0, b1], [b0, a1], v)
    return GradedMF(E.W, E.d, E.m0_degrees + F.m1_degrees,
                    F.m0_degrees + tuple(g - E.d for g in E.m1_degrees), t1, t0)


# -- Hom complexes ------------------------------------------------------------------

def _hom_blocks(E: GradedMF, F: GradedMF, k: int):
    """[(name, source gens, target gens)] for Hom^k(E, F), twists included."""
    d, l = E.d, k // 2
    if k % 2 == 0:
        return [("f1", E.m1_degrees, [g - d * l for g in F.m1_degrees]),
                ("f0", E.m0_degrees, [g - d * l for g in F.m0_degrees])]
    return [("f1", E.m1_degrees, [g - d * l for g in F.m0_degrees]),
            ("f0", E.m0_degrees, [g - d * (l + 1) for g in F.m1_degrees])]


def hom_basis(E: GradedMF, F: GradedMF, k: int) -> list[tuple]:
    """Ordered basis (component, i, j, exponent) of Hom^k(E, F)."""
    nv = len(E.variables)
    out = []
    for comp, src, tgt in _hom_blocks(E, F, k):
        for i, gt in enumerate(tgt):
            for j, gs in enumerate(src):
                out.extend((comp, i, j, exp) for exp in monomials(nv, gs - gt))
    return out


def _basis_element(E: GradedMF, F: GradedMF, k: int, b: tuple):
    comp, i, j, exp = b
    v = E.variables
    blocks = _hom_blocks(E, F, k)
    mats = {}
    for name, src, tgt in blocks:
        rows = [[GradedPoly(v)] * len(src) for _ in tgt]
        if name == comp:
            rows[i][j] = GradedPoly.monomial(v, exp)
        mats[name] = tuple(map(tuple, rows))
    return mats["f1"], mats["f0"]


def apply_differential(E: GradedMF, F: GradedMF, f1, f0, k: int) -> MFMorphism:
    v = E.variables
    r1, r0 = E.ranks
    if k % 2 == 0:
        g1 = psub(pmul(F.phi1, f1, v), pmul(f0, E.phi1, v, r0))
        g0 = psub(pmul(F.phi0, f0, v), pmul(f1, E.phi0, v, r1))
    else:
        g1 = padd(pmul(F.phi0, f1, v), pmul(f0, E.phi1, v, r0))
        g0 = padd(pmul(F.phi1, f0, v), pmul(f1, E.phi0, v, r1))
    return MFMorphism(E, F, g1, g0, k + 1)


def _coordinates(E, F, k, f1, f0, index) -> list:
    vecs = [Fraction(0)] * len(index)
    for comp, mat in (("f1", f1), ("f0", f0)):
        for i, row in enumerate(mat):
            for j, p in enumerate(row):
                for exp, c in p.terms.items():
                    key = (comp, i, j, exp)
                    if key not in index:
                        raise WrongDegree(f"differential left Hom^{k + 1} at {key}")
                    vecs[index[key]] = c
    return vecs


def _differential_rules(E: GradedMF, F: GradedMF, k: int):
    """For each source component: (left F-matrix, target comp, sign), (right E-matrix, target comp, sign).

    d(f) places L[r][i]·μ at (r, j) and sign·μ·R[j][c] at (i, c) for μ at (i, j).
    """
    if k % 2 == 0:
        return {"f1": ((F.phi1, "f1", 1), (E.phi0, "f0", -1)),
                "f0": ((F.phi0, "f0", 1), (E.phi1, "f1", -1))}
    return {"f1": ((F.phi0, "f1", 1), (E.phi0, "f0", 1)),
            "f0": ((F.phi1, "f0", 1), (E.phi1, "f1", 1))}


def differential_matrix(E: GradedMF, F: GradedMF, k: int) -> RatMat:
    """Matrix of d^k : Hom^k(E, F) → Hom^{k+1}(E, F)."""
    src = hom_basis(E, F, k)
    tgt = hom_basis(E, F, k + 1)
    index = {b: n for n, b in enumerate(tgt)}
    rules = _differential_rules(E, F, k)
    entries = [Fraction(0)] * (len(tgt) * len(src))
    ncols = len(src)

    def put(key, col, c):
        row = index.get(key)
        if row is None:
            raise WrongDegree(f"differential left Hom^{k + 1} at {key}")
        entries[row * ncols + col] += c

    for col, (comp, i, j, mu) in enumerate(src):
        (left, lcomp, lsign), (right, rcomp, rsign) = rules[comp]
        for r, lrow in enumerate(left):
            for exp, c in lrow[i].terms.items():
                put((lcomp, r, j, tuple(a + b for a, b in zip(exp, mu))), col, lsign * c)
        for c_idx, p in enumerate(right[j]):
            for exp, c in p.terms.items():
                put((rcomp, i, c_idx, tuple(a + b for a, b in zip(exp, mu))), col, rsign * c)
    return RatMat(len(tgt), ncols, tuple(entries))


def differential_matrix_reference(E: GradedMF, F: GradedMF, k: int) -> RatMat:
    """d^k computed through :func:`apply_differential`; slow, kept as an oracle."""
    src = hom_basis(E, F, k)
    tgt = hom_basis(E, F, k + 1)
    index = {b: n for n, b in enumerate(tgt)}
    cols = []
    for b in src:
        f1, f0 = _basis_element(E, F, k, b)
        img = apply_differential(E, F, f1, f0, k)
        cols.append(_coordinates(E, F, k, img.f1, img.f0, index))
    if not cols:
        return RatMat.zeros(len(tgt), 0)
    return RatMat.from_cols(cols, len(tgt))


def hom_complex_slice(E: GradedMF, F: GradedMF, k: int) -> tuple[RatMat, RatMat]:
    return differential_matrix(E, F, k - 1), differential_matrix(E, F, k)


def hmf_hom_dim(E: GradedMF, F: GradedMF, k: int) -> int:
    d_prev, d_k = hom_complex_slice(E, F, k)
    return d_k.cols - d_k.rank() - d_prev.rank()


def morphism_from_vector(E: GradedMF, F: GradedMF, k: int, vec) -> MFMorphism:
    v = E.variables
    acc = {}
    for c, b in zip(vec, hom_basis(E, F, k)):
        if c:
            acc.setdefault((b[0], b[1], b[2]), {})[b[3]] = Fraction(c)
    mats = {}
    for name, src, tgt in _hom_blocks(E, F, k):
        mats[name] = tuple(tuple(GradedPoly(v, acc.get((name, i, j), {}))
                                 for j in range(len(src))) for i in range(len(tgt)))
    return MFMorphism(E, F, mats["f1"], mats["f0"], k)


# -- isomorphism witnesses --------------------------------------------------------------

def find_sign_diagonal_iso(E: GradedMF, F: GradedMF) -> MFMorphism | None:
    """A closed degree-0 iso with f1, f0 diagonal ±1, when one exists.

    Each nonzero phi entry pins the relative sign of one f1 and one f0
    variable; the constraints are solved by 2-coloring.
    """
    if E.W != F.W or E.m1_degrees != F.m1_degrees or E.m0_degrees != F.m0_degrees:
        return None
    r1, r0 = E.ranks
    # nodes 0..r1-1 are f1 signs, r1..r1+r0-1 are f0 signs
    edges: dict[int, list] = {k: [] for k in range(r1 + r0)}

    def relate(a: int, b: int, pe: GradedPoly, pf: GradedPoly) -> bool:
        if pe == pf:
            rel = 1
        elif pe == -pf:
            rel = -1
        else:
            return False
        if pe:
            edges[a].append((b, rel))
            edges[b].append((a, rel))
        return True

    for i in range(r0):
        for j in range(r1):  # f0_i φ1E = φ1F f1_j
            if not relate(r1 + i, j, E.phi1[i][j], F.phi1[i][j]):
                return None
    for i in range(r1):
        for j in range(r0):  # f1_i φ0E = φ0F f0_j
            if not relate(i, r1 + j, E.phi0[i][j], F.phi0[i][j]):
                return None
    sign: dict[int, int] = {}
    for start in range(r1 + r0):
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, rel in edges[a]:
                want = sign[a] * rel
                if b not in sign:
                    sign[b] = want
                    stack.append(b)
                elif sign[b] != want:
                    return None
    v = E.variables
    z = GradedPoly(v)
    f1 = tuple(tuple(GradedPoly.const(v, sign[i]) if i == j else z for j in range(r1))
               for i in range(r1))
    f0 = tuple(tuple(GradedPoly.const(v, sign[r1 + i]) if i == j else z for j in range(r0))
               for i in range(r0))
    f = MFMorphism(E, F, f1, f0, 0)
    return f if f.is_closed() else None


def koszul_duality_witness(W: GradedPoly, s, t) -> MFMorphism | None:
    """Explicit closed invertible map mf_dual(K(s, t)) → K(t, s)."""
    return find_sign_diagonal_iso(mf_dual(koszul(W, s, t)), koszul(W, t, s))


# -- windows -------------------------------------------------------------------------------

def window_member(E: GradedMF, lo: int, hi_exclusive: int) -> bool:
    return all(lo <= g < hi_exclusive for g in E.m1_degrees + E.m0_degrees)


def window_member_closed(E: GradedMF, lo: int, hi: int) -> bool:
    return window_member(E, lo, hi + 1)


# -- JSON format --------------------------------------------------------------------------

def mf_to_json(E: GradedMF) -> dict:
    return {
        "vars": list(E.variables),
        "W": format_poly(E.W),
        "d": E.d,
        "m1_degrees": list(E.m1_degrees),
        "m0_degrees": list(E.m0_degrees),
        "phi1": [[format_poly(x) for x in r] for r in E.phi1],
        "phi0": [[format_poly(x) for x in r] for r in E.phi0],
    }


def mf_from_json(data: dict) -> GradedMF:
    v = tuple(data["vars"])
    W, d = parse_potential(data["W"], v)
    if "d" in data and int(data["d"]) != d:
        raise NotHomogeneous(f"declared d = {data['d']} but deg W = {d}")
    mat = lambda rows: tuple(tuple(parse_poly(str(x), v) for x in r) for r in rows)
    return GradedMF(W, d, data["m1_degrees"], data["m0_degrees"],
                    mat(data["phi1"]), mat(data["phi0"]))


def dump_mf(E: GradedMF) -> str:
    return json.dumps(mf_to_json(E), indent=2) + "\n"


def load_mf(text: str) -> GradedMF:
    return mf_from_json(json.loads(text))


# -- seeded corpus ------------------------------------------------------------------------

def _random_homogeneous(rng: random.Random, variables, deg: int, terms: int = 2) -> GradedPoly:
    monos = monomials(len(variables), deg)
    out = GradedPoly(variables)
    while out.is_zero():
        for exp in rng.sample(monos, min(terms, len(monos))):
            out = out + GradedPoly.monomial(variables, exp, rng.choice([-2, -1, 1, 1, 2]))
    return out


def random_koszul(rng: random.Random, nvars: int | None = None, d: int | None = None,
                  rank: int | None = None) -> GradedMF:
    """K(s, t) with random homogeneous s, t; W is defined as Σ s_i t_i."""
    names = ("x", "y", "z")
    while True:
        k = nvars or rng.randint(1, 3)
        deg = d or rng.randint(2, 5)
        r = rank or rng.randint(1, min(3, k + 1))
        v = names[:k]
        s, t = [], []
        for _ in range(r):
            e = rng.randint(1, deg - 1)
            s.append(_random_homogeneous(rng, v, e))
            t.append(_random_homogeneous(rng, v, deg - e))
        W = GradedPoly(v)
        for a, b in zip(s, t):
            W = W + a * b
        if not W.is_zero():
            return koszul(W, s, t)


def mf_corpus(seed: int = 0, size: int = 60) -> list[GradedMF]:
    """Seeded factorizations in at most 3 variables with d <= 5, built by every constructor."""
    rng = random.Random(seed)
    out: list[GradedMF] = []
    while len(out) < size:
        E = random_koszul(rng, rank=rng.randint(1, 2))
        choice = rng.randrange(6)
        if choice == 0:
            out.append(E)
        elif choice == 1:
            out.append(tau_shift(E, rng.randint(-3, 3)))
        elif choice == 2:
            out.append(mf_shift(E))
        elif choice == 3:
            out.append(mf_dual(E))
        elif choice == 4:
            out.append(cone(MFMorphism.scalar(E, rng.choice([1, -1, 2]))))
        else:
            out.append(direct_sum(E, mf_shift(E)))
    return out
