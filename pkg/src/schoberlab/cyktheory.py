"""Decategorified schobers on P^1 from Calabi-Yau hypersurfaces.

Everything lives in the H-part of cohomology, in Chern-character
coordinates: Λ_H(X) = Q[H]/(H^{n+1}) for a degree d = n+2 hypersurface
X ⊂ P^{n+1}, and Λ_H(C) = Q[H]/(H^n) for a hyperplane section C.  Linear
maps are square :class:`RatMat` in the monomial basis {1, H, ..., H^n}.

Punctures of P^1 are ordered ("1", "inf", "0").  Their local monodromies
are ST_{O_X}, (-)⊗O_X(1) and m, and st_class(0)·tensor_O(1)·m = id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactla import (
    NonInvertible, RatMat, charpoly, inverse, kernel_basis, rat_str,
)
from .pervquiver import (
    IsoStatus, PervObject, glue_slots, ic_from_monodromy, is_isomorphic,
    total_monodromy, twist_matrix, validate_perv,
)
from .report import Report, timed

LambdaMap = RatMat
PUNCTURES = ("1", "inf", "0")
GLUING_SIGNS = (1, 1, -1)


class UnsupportedDimension(ValueError):
    pass


class DegeneratePairing(ArithmeticError):
    pass


# -- truncated power series ----------------------------------------------

@dataclass(frozen=True)
class HSeries:
    """Element of Q[H]/(H^{n+1}), stored as coefficients of H^0..H^n."""
    n: int
    coeffs: tuple

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coeffs)
        if len(c) != self.n + 1:
            raise ValueError(f"HSeries of top degree {self.n} needs {self.n + 1} coefficients")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int) -> "HSeries":
        return cls(n, (0,) * (n + 1))

    @classmethod
    def one(cls, n: int) -> "HSeries":
        return cls.monomial(n, 0)

    @classmethod
    def monomial(cls, n: int, j: int, c=1) -> "HSeries":
        out = [Fraction(0)] * (n + 1)
        if j <= n:
            out[j] = Fraction(c)
        return cls(n, out)

    @classmethod
    def exp(cls, n: int, k=1) -> "HSeries":
        """e^{kH}."""
        k = Fraction(k)
        return cls(n, [k ** j / factorial(j) for j in range(n + 1)])

    @classmethod
    def from_poly(cls, n: int, coeffs) -> "HSeries":
        coeffs = list(coeffs)[: n + 1]
        return cls(n, coeffs + [0] * (n + 1 - len(coeffs)))

    def _check(self, other: "HSeries"):
        if self.n != other.n:
            raise ValueError("HSeries truncation mismatch")

    def __add__(self, other: "HSeries") -> "HSeries":
        self._check(other)
        return HSeries(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "HSeries") -> "HSeries":
        self._check(other)
        return HSeries(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "HSeries":
        return HSeries(self.n, [-a for a in self.coeffs])

    def scale(self, c) -> "HSeries":
        c = Fraction(c)
        return HSeries(self.n, [c * a for a in self.coeffs])

    def __mul__(self, other: "HSeries") -> "HSeries":
        self._check(other)
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return HSeries(self.n, out)

    def __pow__(self, k: int) -> "HSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out = HSeries.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "HSeries":
        a0 = self.coeffs[0]
        if not a0:
            raise ZeroDivisionError("series with zero constant term")
        out = [Fraction(0)] * (self.n + 1)
        out[0] = 1 / a0
        for k in range(1, self.n + 1):
            s = sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out[k] = -s / a0
        return HSeries(self.n, out)

    def dual(self) -> "HSeries":
        """Flip the sign of odd-degree coefficients (H ↦ -H)."""
        return HSeries(self.n, [-a if j % 2 else a for j, a in enumerate(self.coeffs)])

    def truncate(self, n: int) -> "HSeries":
        return HSeries.from_poly(n, self.coeffs)

    def column(self) -> RatMat:
        return RatMat.from_cols([self.coeffs], self.n + 1)

    def __str__(self):
        terms = [f"{rat_str(a)}*H^{j}" for j, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) or "0"


def one_minus_exp_neg_over_h(n: int, k: int = 1) -> HSeries:
    """(1 - e^{-kH}) / (kH), the Todd factor of a line bundle of class kH, inverted."""
    full = (HSeries.one(n + 1) - HSeries.exp(n + 1, -k))
    return HSeries(n, [c / k for c in full.coeffs[1:]])


@lru_cache(maxsize=None)
def todd_class(n: int) -> HSeries:
    if n < 1:
        raise UnsupportedDimension("todd_class needs n >= 1")
    d = n + 2
    td_h = one_minus_exp_neg_over_h(n).inverse()
    return (td_h ** d) * one_minus_exp_neg_over_h(n, d)


# -- H-parts and Riemann-Roch ----------------------------------------------

@dataclass(frozen=True)
class HPart:
    """A ring Q[H]/(H^{n+1}) with integration ∫H^n = degree_point and a Todd class."""
    n: int
    todd: HSeries
    degree_point: Fraction

    @property
    def dim(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class CYContext(HPart):
    d: int = 0

    @classmethod
    def create(cls, n: int) -> "CYContext":
        if n < 1:
            raise UnsupportedDimension("Calabi-Yau hypersurface needs n >= 1")
        return cls(n=n, todd=todd_class(n), degree_point=Fraction(n + 2), d=n + 2)

    def __post_init__(self):
        if self.d != self.n + 2 or self.todd.coeffs[0] != 1:
            raise ValueError("inconsistent CYContext")


def hyperplane_section(ctx: CYContext) -> HPart:
    """Λ_H(C) for C ∈ |O_X(1)|: td(C) = td(X)/td(O_C(1)), ∫_C H^{n-1} = d."""
    if ctx.n < 2:
        raise UnsupportedDimension("Λ_H(C) is only modeled for n >= 2")
    m = ctx.n - 1
    todd_c = ctx.todd.truncate(m) * one_minus_exp_neg_over_h(m)
    return HPart(n=m, todd=todd_c, degree_point=Fraction(ctx.d))


def euler_char(ctx: HPart, x: HSeries) -> Fraction:
    return ctx.degree_point * (x * ctx.todd).coeffs[ctx.n]


def euler_pairing(ctx: HPart, x: HSeries, y: HSeries) -> Fraction:
    return euler_char(ctx, x.dual() * y)


def pairing_matrix(ctx: HPart) -> RatMat:
    basis = [HSeries.monomial(ctx.n, j) for j in range(ctx.dim)]
    return RatMat.from_rows([[euler_pairing(ctx, a, b) for b in basis] for a in basis])


def binomial_poly(a: int, k: int) -> Fraction:
    """C(a, k) as the polynomial a(a-1)...(a-k+1)/k!, valid for negative a."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(a - i, i + 1)
    return out


def hrr_oracle(n: int, k: int) -> Fraction:
    """χ(O_X(k)) from 0 → O_P(k-d) → O_P(k) → O_X(k) → 0."""
    return binomial_poly(k + n + 1, n + 1) - binomial_poly(k - 1, n + 1)


# -- linear maps on Λ_H(X) ---------------------------------------------------

def _mult_matrix(s: HSeries) -> RatMat:
    n = s.n
    return RatMat.from_rows([[s.coeffs[i - j] if i >= j else 0 for j in range(n + 1)]
                             for i in range(n + 1)])


def tensor_O(ctx: HPart, k: int) -> LambdaMap:
    return _mult_matrix(HSeries.exp(ctx.n, k))


def chi_row(ctx: HPart) -> RatMat:
    return RatMat.from_rows([[euler_char(ctx, HSeries.monomial(ctx.n, j))
                              for j in range(ctx.dim)]])


def st_class(ctx: HPart, k: int) -> LambdaMap:
    """x ↦ x - χ(x·e^{-kH})·e^{kH}."""
    e_k = HSeries.exp(ctx.n, k).column()
    functional = chi_row(ctx) @ tensor_O(ctx, -k)
    return RatMat.identity(ctx.dim) - e_k @ functional


def monodromy_m_inv(ctx: HPart) -> LambdaMap:
    composed = st_class(ctx, 0) @ tensor_O(ctx, 1)
    e_h = HSeries.exp(ctx.n, 1)
    cols = []
    for j in range(ctx.dim):
        y = HSeries.monomial(ctx.n, j) * e_h
        cols.append((y - HSeries.one(ctx.n).scale(euler_char(ctx, y))).coeffs)
    formula = RatMat.from_cols(cols, ctx.dim)
    if composed != formula:
        raise AssertionError("m^-1 formula disagrees with ST_O ∘ (⊗O(1))")
    return composed


def monodromy_m(ctx: HPart) -> LambdaMap:
    return inverse(monodromy_m_inv(ctx))


def gysin_push(ctx: CYContext) -> RatMat:
    """i_* : Λ_H(C) → Λ_H(X), a ↦ ã·(1 - e^{-H})."""
    if ctx.n < 2:
        raise UnsupportedDimension("gysin_push is refused for n = 1")
    factor = HSeries.one(ctx.n) - HSeries.exp(ctx.n, -1)
    cols = [(HSeries.monomial(ctx.n, j) * factor).coeffs for j in range(ctx.n)]
    return RatMat.from_cols(cols, ctx.dim)


def _checked_inverse(p: RatMat) -> RatMat:
    try:
        return inverse(p)
    except NonInvertible as exc:
        raise DegeneratePairing("pairing is degenerate") from exc


def right_adjoint(v: RatMat, dom_pairing: RatMat, cod_pairing: RatMat) -> RatMat:
    """u with cod(v a, b) = dom(a, u b)."""
    return _checked_inverse(dom_pairing) @ v.T @ cod_pairing


def left_adjoint(v: RatMat, dom_pairing: RatMat, cod_pairing: RatMat) -> RatMat:
    """l with dom(l b, a) = cod(b, v a)."""
    return _checked_inverse(dom_pairing).T @ v.T @ cod_pairing.T


def point_functor(ctx: HPart) -> tuple[RatMat, RatMat, RatMat]:
    """(S, R, L) for the point functor Q → Λ_H(X), 1 ↦ ch(O_X)."""
    s = HSeries.one(ctx.n).column()
    one = RatMat.identity(1)
    p = pairing_matrix(ctx)
    return s, right_adjoint(s, one, p), left_adjoint(s, one, p)


# -- perverse sheaves on P^1 -------------------------------------------------

def local_monodromies(ctx: HPart) -> tuple[RatMat, RatMat, RatMat]:
    return st_class(ctx, 0), tensor_O(ctx, 1), monodromy_m(ctx)


def detect_orientation(ctx: CYContext) -> int:
    """Sign e with id - i_* i^! = tensor_O(e)."""
    push = gysin_push(ctx)
    twist = RatMat.identity(ctx.dim) - push @ right_adjoint(
        push, pairing_matrix(hyperplane_section(ctx)), pairing_matrix(ctx))
    for sign in (1, -1):
        if twist == tensor_O(ctx, sign):
            return sign
    raise AssertionError("hyperplane twist is neither tensor_O(1) nor tensor_O(-1)")


def build_schober_P(ctx: CYContext) -> PervObject:
    if ctx.n < 2:
        raise UnsupportedDimension("build_schober_P needs n >= 2; see n1_failure_report")
    dim = ctx.dim
    s, r, _ = point_functor(ctx)
    push = gysin_push(ctx)
    pull = right_adjoint(push, pairing_matrix(hyperplane_section(ctx)), pairing_matrix(ctx))
    m = monodromy_m(ctx)
    ident = RatMat.identity(dim)
    return PervObject(n=3, dim_D=dim, dim_Di=(1, ctx.n, dim),
                      u=(r, pull, ident), v=(s, push, ident - m))


def build_IC_P1(ctx: HPart) -> PervObject:
    return glue_slots([ic_from_monodromy(t) for t in local_monodromies(ctx)])


def _mat(m: RatMat) -> list:
    return m.to_strings()


def _kernel_dim(m: RatMat) -> int:
    return len(kernel_basis(m))


def _iso_witness(res) -> dict:
    out = {"iso": res.status.value}
    if res.witness is not None:
        out["morphism"] = res.witness.to_json()
    if res.reason:
        out["reason"] = res.reason
    return out


def verify_thm66(n: int, trials: int = 32, seed: int = 0) -> Report:
    rep = Report(check=f"ic.n{n}")
    with timed(rep):
        try:
            ctx = CYContext.create(n)
            checks = _thm66_checks(ctx, trials, seed)
        except (UnsupportedDimension, ValueError, ArithmeticError) as exc:
            rep.status = "fail"
            rep.witness = {"error": f"{type(exc).__name__}: {exc}"}
            return rep
        rep.witness = checks
        statuses = [c["status"] for c in checks["checks"].values()]
        if "fail" in statuses:
            rep.status = "fail"
        elif "undetermined" in statuses:
            rep.status = "undetermined"
    return rep


def _flag(ok: bool, **extra) -> dict:
    return {"status": "pass" if ok else "fail", **extra}


def _thm66_checks(ctx: CYContext, trials: int, seed: int) -> dict:
    dim = ctx.dim
    m = monodromy_m(ctx)
    ident = RatMat.identity(dim)
    orientation = detect_orientation(ctx)
    P = build_schober_P(ctx)
    IC = build_IC_P1(ctx)
    pair = pairing_matrix(ctx)
    sign = (-1) ** ctx.n
    _, r, l_adj = point_functor(ctx)

    checks = {
        "fixed_space_m": _flag(_kernel_dim(m - ident) == 0,
                               dim=_kernel_dim(m - ident)),
        "det_id_minus_m": _flag((ident - m).det() != 0,
                                value=rat_str((ident - m).det())),
        "validate_P": _flag(not validate_perv(P), bad_slots=validate_perv(P)),
        "slot_twists": _flag(all(twist_matrix(P, i + 1) == t
                                 for i, t in enumerate(local_monodromies(ctx)))),
        "total_monodromy": _flag(total_monodromy(P, GLUING_SIGNS).is_identity(),
                                 signs=list(GLUING_SIGNS)),
        "pairing_sign": _flag(pair.T == pair.scale(sign) and l_adj == r.scale(sign),
                              sign=sign),
        "j_star_dimension": _flag(dim == ctx.n + 1 and P.dim_Di[1] + 1 == dim,
                                  dims=[P.dim_Di[1] + 1, dim]),
    }
    slots = {}
    for i, name in enumerate(PUNCTURES):
        res = is_isomorphic(P.slot(i + 1), IC.slot(i + 1), trials=trials, seed=seed + i)
        slots[name] = _iso_witness(res)
    checks["slot_iso"] = {
        "status": _combine_status(s["iso"] for s in slots.values()),
        "slots": slots,
    }
    glob = is_isomorphic(P, IC, trials=trials, seed=seed)
    checks["global_iso"] = {**_iso_witness(glob),
                            "status": _combine_status([glob.status.value])}
    return {
        "n": ctx.n,
        "d": ctx.d,
        "orientation": orientation,
        "punctures": list(PUNCTURES),
        "m": _mat(m),
        "m_inv": _mat(inverse(m)),
        "todd": [rat_str(c) for c in ctx.todd.coeffs],
        "pairing": _mat(pair),
        "P": P.to_json(),
        "IC": IC.to_json(),
        "checks": checks,
    }


def _combine_status(statuses) -> str:
    statuses = list(statuses)
    if any(s == IsoStatus.NOT_ISOMORPHIC.value for s in statuses):
        return "fail"
    if any(s == IsoStatus.UNDETERMINED.value for s in statuses):
        return "undetermined"
    return "pass"


# -- n = 1 ------------------------------------------------------------------

DIM_LAMBDA_W_C2 = 4


def n1_failure_report() -> Report:
    """Slot-0 comparison for the plane cubic fails by dimension count."""
    rep = Report(check="ic.n1", status="expected-failure")
    with timed(rep):
        ctx = CYContext.create(1)
        dim_x = ctx.dim
        analogues = {str(k): {"dim_source": k + 1, "dim_target": k + 1}
                     for k in range(2, 6)}
        rep.witness = {
            "dims": [DIM_LAMBDA_W_C2, dim_x],
            "conclusion": IsoStatus.NOT_ISOMORPHIC.value,
            "reason": (f"slot 0: dim Λ_H(W|C^2) = {DIM_LAMBDA_W_C2} "
                       f"but dim Λ_H(X) = {dim_x}"),
            "n_ge_2_analogue": analogues,
            "ic_builds": build_IC_P1(ctx).dim_Di == (1, 1, dim_x),
        }
    return rep


def n_ge_2_slot0_dims(n: int) -> tuple[int, int]:
    """(dim Λ_H(C) ⊕ Q, dim Λ_H(X)) for n >= 2."""
    ctx = CYContext.create(n)
    return hyperplane_section(ctx).dim + 1, ctx.dim


# -- elliptic curve -----------------------------------------------------------

@dataclass(frozen=True)
class EllipticClass:
    rank: int
    degree: int

    def vector(self) -> RatMat:
        return RatMat.from_cols([[self.rank, self.degree]])


def elliptic_chi(e: EllipticClass, f: EllipticClass) -> int:
    """χ(E, F) = deg(E^∨ ⊗ F) on a genus-1 curve, since χ(O) = 0."""
    return e.rank * f.degree - e.degree * f.rank


def elliptic_twist(e: EllipticClass) -> RatMat:
    """ST_E on (rank, degree): x ↦ x - χ(E, x)·E."""
    cols = []
    for x in (EllipticClass(1, 0), EllipticClass(0, 1)):
        c = elliptic_chi(e, x)
        cols.append([x.rank - c * e.rank, x.degree - c * e.degree])
    return RatMat.from_cols(cols)


def elliptic_tensor_point() -> RatMat:
    """(-) ⊗ O(p): (r, d) ↦ (r, d + r)."""
    return RatMat.from_rows([[1, 0], [1, 1]])


def elliptic_schober(trials: int = 32, seed: int = 0) -> tuple[PervObject, Report]:
    rep = Report(check="elliptic")
    with timed(rep):
        O, Op = EllipticClass(1, 0), EllipticClass(0, 1)
        m_a = elliptic_tensor_point()
        m_b = elliptic_twist(O)
        m = inverse(m_b @ m_a)
        ic = glue_slots([ic_from_monodromy(t) for t in (m_b, m_a, m)])
        ident = RatMat.identity(2)
        row = lambda e: RatMat.from_rows([[elliptic_chi(e, EllipticClass(1, 0)),
                                           elliptic_chi(e, EllipticClass(0, 1))]])
        p_b = PervObject(n=3, dim_D=2, dim_Di=(1, 1, 2),
                         u=(row(O), row(Op), ident),
                         v=(O.vector(), Op.vector(), ident - m))
        iso = is_isomorphic(p_b, ic, trials=trials, seed=seed)
        cp = charpoly(m)
        fixed = [_kernel_dim(t - ident) for t in (m_b, m_a, m)]
        checks = {
            "M_a": _flag(m_a == RatMat.from_rows([[1, 0], [1, 1]]), matrix=_mat(m_a)),
            "M_b": _flag(m_b == RatMat.from_rows([[1, -1], [0, 1]]), matrix=_mat(m_b)),
            "twist_O_p_is_tensor": _flag(elliptic_twist(Op) == m_a),
            "charpoly_m": _flag(cp == (1, -1, 1), coeffs=[rat_str(c) for c in cp]),
            "fixed_dims": _flag(fixed == [1, 1, 0], dims=fixed),
            "slot_ranks": _flag(list(ic.dim_Di) == [1, 1, 2] and p_b.dim_Di == ic.dim_Di,
                                ranks=list(ic.dim_Di)),
            "total_monodromy": _flag(total_monodromy(ic, GLUING_SIGNS).is_identity()
                                     and total_monodromy(p_b, GLUING_SIGNS).is_identity()),
            "P_B_iso_IC": {**_iso_witness(iso),
                           "status": _combine_status([iso.status.value])},
        }
        rep.witness = {"m": _mat(m), "punctures": list(PUNCTURES),
                       "P_B": p_b.to_json(), "IC": ic.to_json(), "checks": checks}
        statuses = [c["status"] for c in checks.values()]
        rep.status = "fail" if "fail" in statuses else (
            "undetermined" if "undetermined" in statuses else "pass")
    return ic, rep


# -- window shifts --------------------------------------------------------------

def window_shift_identity(n: int, k: int) -> Report:
    rep = Report(check=f"window.n{n}.k{k}")
    with timed(rep):
        ctx = CYContext.create(n)
        d = ctx.d
        lhs = st_class(ctx, k + d)
        rhs = tensor_O(ctx, k) @ st_class(ctx, d) @ tensor_O(ctx, -k)
        rep.status = "pass" if lhs == rhs else "fail"
        rep.witness = {"n": n, "k": k, "w": k - n - 1,
                       "lhs": _mat(lhs), "rhs": _mat(rhs)}
    return rep


def pairing_sign_report(n: int) -> Report:
    rep = Report(check=f"pairing.n{n}")
    with timed(rep):
        ctx = CYContext.create(n)
        p = pairing_matrix(ctx)
        _, r, l_adj = point_functor(ctx)
        sign = (-1) ** n
        ok = p.T == p.scale(sign) and l_adj == r.scale(sign)
        rep.status = "pass" if ok else "fail"
        rep.witness = {"n": n, "sign": sign, "pairing": _mat(p),
                       "right_adjoint": _mat(r), "left_adjoint": _mat(l_adj)}
    return rep
