"""Quiver model of perverse sheaves on a disk with n marked points.

An object of ``P_n`` is a tuple (D, D_i, u_i, v_i) with u_i : D -> D_i,
v_i : D_i -> D and every T_i = id - v_i u_i invertible.  Spaces are Q^k and
maps are :class:`~schoberlab.exactla.RatMat`.  Slots are indexed 1..n in the
public API, matching braid generator indices.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import (
    NonInvertible, RatMat, ShapeMismatch, inverse, kernel_basis, kron,
    quotient_projection, solve_matrix, unvec,
)


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class PervObject:
    n: int
    dim_D: int
    dim_Di: tuple
    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "dim_Di", tuple(self.dim_Di))
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if not (len(self.dim_Di) == len(self.u) == len(self.v) == self.n):
            raise ShapeMismatch("need n spaces D_i and n maps u_i, v_i")
        for i, (k, ui, vi) in enumerate(zip(self.dim_Di, self.u, self.v), 1):
            if ui.shape != (k, self.dim_D):
                raise ShapeMismatch(f"u_{i} has shape {ui.shape}, expected {(k, self.dim_D)}")
            if vi.shape != (self.dim_D, k):
                raise ShapeMismatch(f"v_{i} has shape {vi.shape}, expected {(self.dim_D, k)}")

    def slot(self, i: int) -> "PervObject":
        """The n=1 object seen by a small disk around the i-th point."""
        _check_slot(self, i)
        return PervObject(1, self.dim_D, (self.dim_Di[i - 1],),
                          (self.u[i - 1],), (self.v[i - 1],))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim_D": self.dim_D,
            "dim_Di": list(self.dim_Di),
            "u": [m.to_strings() for m in self.u],
            "v": [m.to_strings() for m in self.v],
        }

    @classmethod
    def from_json(cls, data) -> "PervObject":
        if isinstance(data, str):
            data = json.loads(data)
        D, dims = data["dim_D"], data["dim_Di"]
        u = [RatMat.from_strings(m, k, D) for m, k in zip(data["u"], dims)]
        v = [RatMat.from_strings(m, D, k) for m, k in zip(data["v"], dims)]
        return cls(data["n"], D, dims, u, v)


@dataclass(frozen=True)
class PervMorphism:
    phi: RatMat
    phi_i: tuple

    def is_morphism(self, X: PervObject, Y: PervObject) -> bool:
        if self.phi.shape != (Y.dim_D, X.dim_D):
            return False
        for i in range(X.n):
            p = self.phi_i[i]
            if p.shape != (Y.dim_Di[i], X.dim_Di[i]):
                return False
            if p @ X.u[i] != Y.u[i] @ self.phi or self.phi @ X.v[i] != Y.v[i] @ p:
                return False
        return True

    def is_invertible(self) -> bool:
        return all(m.rows == m.cols and (m.rows == 0 or m.det() != 0)
                   for m in (self.phi, *self.phi_i))

    def to_json(self) -> dict:
        return {"phi": self.phi.to_strings(), "phi_i": [m.to_strings() for m in self.phi_i]}


@dataclass(frozen=True)
class BraidWord:
    """Letters (i, sign): s_i for sign +1, s_i^{-1} for sign -1."""

    letters: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        # "1 2 -1" -> s_1 s_2 s_1^{-1}
        out = []
        for tok in text.replace(",", " ").split():
            k = int(tok)
            if k == 0:
                raise ValueError("generator index 0")
            out.append((abs(k), 1 if k > 0 else -1))
        return cls(tuple(out))

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((i, -s) for i, s in reversed(self.letters)))


def _check_slot(X: PervObject, i: int):
    if not 1 <= i <= X.n:
        raise IndexOutOfRange(f"slot {i} not in 1..{X.n}")


def _check_signs(X: PervObject, signs: Sequence[int]):
    if len(signs) != X.n or any(s not in (1, -1) for s in signs):
        raise ValueError(f"need {X.n} signs in {{+1, -1}}, got {list(signs)}")


# -- twists and monodromy -------------------------------------------------

def _twist(X: PervObject, i: int) -> RatMat:
    return RatMat.identity(X.dim_D) - X.v[i - 1] @ X.u[i - 1]


def validate_perv(X: PervObject) -> list[int]:
    """Indices (1-based) whose twist is singular; the empty list means valid."""
    return [i for i in range(1, X.n + 1) if X.dim_D and _twist(X, i).det() == 0]


def is_valid(X: PervObject) -> bool:
    return not validate_perv(X)


def twist_matrix(X: PervObject, i: int, sign: int = 1) -> RatMat:
    """T_i = id - v_i u_i for sign +1, its inverse (the dual twist) for sign -1."""
    _check_slot(X, i)
    t = _twist(X, i)
    if sign == 1:
        return t
    if sign == -1:
        return inverse(t)
    raise ValueError("sign must be +1 or -1")


def twist_product(X: PervObject) -> RatMat:
    """T_1 T_2 ... T_n as a matrix product; preserved by every braid move."""
    out = RatMat.identity(X.dim_D)
    for i in range(1, X.n + 1):
        out = out @ _twist(X, i)
    return out


def total_monodromy(X: PervObject, signs: Sequence[int]) -> RatMat:
    """Monodromy T_1^{eps_1} o ... o T_n^{eps_n} of the induced boundary local system.

    ``signs[i]`` records how slot i is presented: +1 means (u_i, v_i) are the
    right adjoint and the functor, so id - v_i u_i is the twist T_i; -1 means
    u_i is the left adjoint, so id - v_i u_i is already the dual twist
    T_i^{-1}.  Either way the slot contributes T_i^{eps_i} = id - v_i u_i, and
    the result is the ordered product, invariant under the braid action.
    """
    _check_signs(X, signs)
    return twist_product(X)


def is_trivial_monodromy(X: PervObject, signs: Sequence[int]) -> bool:
    return total_monodromy(X, signs).is_identity()


# -- braid action ---------------------------------------------------------

def braid_generator(X: PervObject, i: int, inverse_: bool = False) -> PervObject:
    if X.n < 2 or not 1 <= i <= X.n - 1:
        raise IndexOutOfRange(f"generator s_{i} not in Br_{X.n}")
    a, b = i - 1, i
    dims, u, v = list(X.dim_Di), list(X.u), list(X.v)
    if not inverse_:
        tb = _twist(X, i + 1)
        dims[a], dims[b] = X.dim_Di[b], X.dim_Di[a]
        u[a], v[a] = X.u[b], X.v[b]
        u[b], v[b] = X.u[a] @ tb, inverse(tb) @ X.v[a]
    else:
        ta = _twist(X, i)
        dims[a], dims[b] = X.dim_Di[b], X.dim_Di[a]
        u[a], v[a] = X.u[b] @ inverse(ta), ta @ X.v[b]
        u[b], v[b] = X.u[a], X.v[a]
    return PervObject(X.n, X.dim_D, dims, u, v)


def braid_act(X: PervObject, w: BraidWord) -> PervObject:
    for i, s in w.letters:
        X = braid_generator(X, i, inverse_=(s == -1))
    return X


# -- morphisms ------------------------------------------------------------

def _block_sizes(X: PervObject, Y: PervObject) -> list[tuple[int, int]]:
    return [(Y.dim_D, X.dim_D)] + [(Y.dim_Di[i], X.dim_Di[i]) for i in range(X.n)]


def _hom_equations(X: PervObject, Y: PervObject) -> RatMat:
    # Unknowns: vec(phi), vec(phi_1), ..., vec(phi_n), all row-major.
    sizes = _block_sizes(X, Y)
    offsets, total = [], 0
    for r, c in sizes:
        offsets.append(total)
        total += r * c
    rows = []

    def place(block_idx: int, coeff: RatMat, out: list):
        off = offsets[block_idx]
        for k in range(coeff.rows):
            out[k][off:off + coeff.cols] = [a + b for a, b in
                                            zip(out[k][off:off + coeff.cols], coeff.row(k))]

    for i in range(X.n):
        p, q = Y.dim_Di[i], X.dim_Di[i]
        # phi_i u_i - u'_i phi = 0   (p x dim_D equations)
        eq = [[Fraction(0)] * total for _ in range(p * X.dim_D)]
        place(i + 1, kron(RatMat.identity(p), X.u[i].T), eq)
        place(0, -kron(Y.u[i], RatMat.identity(X.dim_D)), eq)
        rows += eq
        # phi v_i - v'_i phi_i = 0   (dim_D' x q equations)
        eq = [[Fraction(0)] * total for _ in range(Y.dim_D * q)]
        place(0, kron(RatMat.identity(Y.dim_D), X.v[i].T), eq)
        place(i + 1, -kron(Y.v[i], RatMat.identity(q)), eq)
        rows += eq
    return RatMat.from_rows(rows, total) if rows else RatMat.zeros(0, total)


def _unpack(X: PervObject, Y: PervObject, vec) -> PervMorphism:
    blocks, off = [], 0
    for r, c in _block_sizes(X, Y):
        blocks.append(unvec(vec[off:off + r * c], r, c))
        off += r * c
    return PervMorphism(blocks[0], tuple(blocks[1:]))


def hom_space(X: PervObject, Y: PervObject) -> list[PervMorphism]:
    """A basis of Hom_{P_n}(X, Y)."""
    if X.n != Y.n:
        raise ShapeMismatch("objects over different numbers of points")
    return [_unpack(X, Y, k) for k in kernel_basis(_hom_equations(X, Y))]


def _combine(basis: list[PervMorphism], coeffs) -> PervMorphism:
    phi = basis[0].phi.scale(0)
    phis = [m.scale(0) for m in basis[0].phi_i]
    for c, f in zip(coeffs, basis):
        if c:
            phi = phi + f.phi.scale(c)
            phis = [a + b.scale(c) for a, b in zip(phis, f.phi_i)]
    return PervMorphism(phi, tuple(phis))


class IsoStatus(enum.Enum):
    ISO = "iso"
    NOT_ISOMORPHIC = "not-isomorphic"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class IsoResult:
    status: IsoStatus
    witness: PervMorphism | None = None
    reason: str = ""
    trials_used: int = 0

    def __bool__(self):
        return self.status is IsoStatus.ISO


def is_isomorphic(X: PervObject, Y: PervObject, trials: int = 32, seed: int = 0,
                  coeff_range: int = 16) -> IsoResult:
    """Decide X ~= Y by testing random points of Hom(X, Y) for invertibility.

    Invertibility of a morphism is a determinant condition, i.e. a polynomial
    on Hom(X, Y); if it is not identically zero a random integer point avoids
    its zero set with high probability.  A found witness is checked exactly.
    """
    if X.n != Y.n:
        return IsoResult(IsoStatus.NOT_ISOMORPHIC, reason="different number of points")
    if X.dim_D != Y.dim_D or X.dim_Di != Y.dim_Di:
        return IsoResult(IsoStatus.NOT_ISOMORPHIC,
                         reason=f"dimensions differ: {(X.dim_D, X.dim_Di)} vs {(Y.dim_D, Y.dim_Di)}")
    basis = hom_space(X, Y)
    dims = [X.dim_D, *X.dim_Di]
    if not basis:
        if any(dims):
            return IsoResult(IsoStatus.NOT_ISOMORPHIC, reason="Hom(X, Y) = 0")
        return IsoResult(IsoStatus.ISO, PervMorphism(RatMat.zeros(0, 0),
                                                     tuple(RatMat.zeros(0, 0) for _ in dims[1:])))
    # A component that vanishes on all of Hom(X, Y) can never be invertible.
    for k, dim in enumerate(dims):
        if dim and all((f.phi if k == 0 else f.phi_i[k - 1]).is_zero() for f in basis):
            return IsoResult(IsoStatus.NOT_ISOMORPHIC,
                             reason=f"component {k} vanishes on Hom(X, Y)")
    rng = random.Random(seed)
    for t in range(1, trials + 1):
        coeffs = [rng.randint(-coeff_range, coeff_range) for _ in basis]
        f = _combine(basis, coeffs)
        if f.is_invertible():
            if not f.is_morphism(X, Y):  # pragma: no cover - guarded by construction
                raise AssertionError("hom_space produced a non-morphism")
            return IsoResult(IsoStatus.ISO, f, trials_used=t)
    return IsoResult(IsoStatus.UNDETERMINED, reason=f"no invertible point in {trials} trials",
                     trials_used=trials)


# -- intersection complex -------------------------------------------------

def ic_from_monodromy(m: RatMat) -> PervObject:
    """IC diagram F/F^m <-> F for local monodromy m on F."""
    k = m.rows
    if m.rows != m.cols:
        raise ShapeMismatch("monodromy must be square")
    if k and m.det() == 0:
        raise NonInvertible("monodromy is singular")
    fixed = kernel_basis(m - RatMat.identity(k))
    q = quotient_projection(k, fixed)
    # v q = id - m, solved as q^T v^T = (id - m)^T.
    v = solve_matrix(q.T, (RatMat.identity(k) - m).T).T if q.rows else RatMat.zeros(k, 0)
    return PervObject(1, k, (q.rows,), (q,), (v,))


def glue_slots(slots: Sequence[PervObject]) -> PervObject:
    """Assemble n=1 objects over a common D into one object of P_n."""
    D = slots[0].dim_D
    if any(s.n != 1 or s.dim_D != D for s in slots):
        raise ShapeMismatch("slots must be n=1 objects over the same D")
    return PervObject(len(slots), D, [s.dim_Di[0] for s in slots],
                      [s.u[0] for s in slots], [s.v[0] for s in slots])


# -- random objects -------------------------------------------------------

def random_perv(rng: random.Random, n: int, max_dim: int = 3, max_slot_dim: int = 2,
                entry_range: int = 2, max_tries: int = 1000) -> PervObject:
    """A random valid object with small integer maps (rejection sampling)."""
    for _ in range(max_tries):
        D = rng.randint(1, max_dim)
        dims = [rng.randint(0, max_slot_dim) for _ in range(n)]
        u = [RatMat.from_rows([[rng.randint(-entry_range, entry_range) for _ in range(D)]
                               for _ in range(k)], D) for k in dims]
        v = [RatMat.from_rows([[rng.randint(-entry_range, entry_range) for _ in range(k)]
                               for _ in range(D)], k) for k in dims]
        X = PervObject(n, D, dims, u, v)
        if is_valid(X):
            return X
    raise RuntimeError("could not sample a valid object")
