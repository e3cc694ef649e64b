import json
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from schoberlab.gradedmf import (
    GradedMF, GradedPoly, MFMorphism, NotClosed, NotHomogeneous, PairingMismatch,
    PolyError, WrongDegree, cone, differential_matrix, differential_matrix_reference,
    direct_sum, dump_mf, find_sign_diagonal_iso, format_poly, hmf_hom_dim, hom_basis,
    hom_complex_slice, koszul, koszul_anticommutation, koszul_duality_witness, load_mf,
    mf_corpus, mf_dual, mf_from_json, mf_shift, mf_to_json, monomials, parse_poly,
    parse_potential, random_koszul, tau_shift, validate_mf, window_member,
    window_member_closed,
)
from schoberlab.suites import END_GOLDENS, cone_zero_is_sum, end_table
from schoberlab.exactla import ShapeMismatch

X = ("x",)
XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, v=X):
    return parse_poly(text, v)


def rank1(phi0="x^2"):
    return GradedMF(P("x^3"), 3, [1], [0], [[P("x")]], [[P(phi0)]])


def to_sympy(p: GradedPoly):
    syms = sympy.symbols(p.variables)
    return sum((sympy.Rational(c.numerator, c.denominator) *
                sympy.Mul(*[s ** k for s, k in zip(syms, e)]) for e, c in p.terms.items()),
               sympy.Integer(0))


# -- polynomials


def test_parser_basics():
    p = parse_poly("-(x+y)^2 + 3/2*x*y - 4", XY)
    assert format_poly(p) == "-x^2-1/2*x*y-y^2-4"
    assert parse_poly(" x ^ 3+ y^3 ", XY) == parse_poly("y^3+x^3", XY)
    assert to_sympy(p) == sympy.expand(-(sympy.Symbol("x") + sympy.Symbol("y")) ** 2
                                       + sympy.Rational(3, 2) * sympy.Symbol("x") * sympy.Symbol("y") - 4)
    for bad in ("x^", "x/y", "", "2x", "x^1/2", "(x"):
        with pytest.raises(PolyError):
            parse_poly(bad, XY)
    with pytest.raises(PolyError):
        parse_poly("w", XY)
    with pytest.raises(NotHomogeneous):
        parse_potential("x^3+y^2", XY)
    assert parse_potential("x^3+y^3", XY)[1] == 3


@st.composite
def polys(draw, v=XY, max_deg=3):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, max_deg)] * len(v)),
                                 st.fractions(-3, 3, max_denominator=4), max_size=4))
    return GradedPoly(v, terms)


@given(polys(), polys())
def test_poly_arithmetic_vs_sympy(a, b):
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a + b) == sympy.expand(to_sympy(a) + to_sympy(b))
    assert parse_poly(format_poly(a), XY) == a


def test_monomial_count():
    assert len(monomials(3, 2)) == 6 and monomials(2, -1) == [] and monomials(0, 0) == [()]


# -- factorizations


def test_validate_examples():
    assert validate_mf(rank1()) == []
    assert validate_mf(rank1("x")) != []
    with pytest.raises(ShapeMismatch):
        GradedMF(P("x^3"), 3, [1], [0], [[P("x"), P("x")]], [[P("x^2")]])


def test_tau_shift():
    E = rank1()
    assert tau_shift(E, 0) == E
    assert tau_shift(tau_shift(E, 1), -1) == E
    assert tau_shift(E, 2).m1_degrees == (-1,) and validate_mf(tau_shift(E, 2)) == []


def test_mf_shift():
    E = rank1()
    S = mf_shift(E)
    assert S.m1_degrees == (0,) and S.m0_degrees == (-2,)
    assert S.phi1 == ((P("-x^2"),),) and S.phi0 == ((P("-x"),),)
    assert validate_mf(S) == []
    assert mf_shift(S) == tau_shift(E, 3)


def test_mf_dual():
    D = mf_dual(rank1())
    assert D.phi1 == ((P("x^2"),),) and D.phi0 == ((P("x"),),)
    assert validate_mf(D) == [] and mf_dual(D) == rank1()


def test_koszul_examples():
    w = P("x^3")
    assert koszul(w, [P("x")], [P("x^2")]) == rank1()
    w2 = parse_poly("x^3+y^3", XY)
    K2 = koszul(w2, [P("x", XY), P("y", XY)], [P("x^2", XY), P("y^2", XY)])
    assert K2.ranks == (2, 2) and validate_mf(K2) == []
    w3 = parse_poly("x^3+y^3+z^3", XYZ)
    s = [P(a, XYZ) for a in "xyz"]
    t = [P(a + "^2", XYZ) for a in "xyz"]
    K3 = koszul(w3, s, t)
    assert K3.ranks == (4, 4) and validate_mf(K3) == []
    # polynomial multiplication oracle through sympy
    for i in range(4):
        for j in range(4):
            entry = sum((to_sympy(K3.phi0[i][k]) * to_sympy(K3.phi1[k][j]) for k in range(4)),
                        sympy.Integer(0))
            assert sympy.expand(entry - (to_sympy(w3) if i == j else 0)) == 0
    with pytest.raises(PairingMismatch):
        koszul(w3, s, t[:2] + [P("z", XYZ) ** 2 + P("x", XYZ) ** 2])


def test_koszul_dual_is_swap():
    w3 = parse_poly("x^3+y^3+z^3", XYZ)
    s = [P(a, XYZ) for a in "xyz"]
    t = [P(a + "^2", XYZ) for a in "xyz"]
    assert mf_dual(koszul(w3, s, t)) == koszul(w3, t, s)
    f = koszul_duality_witness(w3, s, t)
    assert f is not None and f.is_closed()


def test_sign_diagonal_iso_finds_signs():
    E = koszul(parse_poly("x^3+y^3", XY), [P("x", XY), P("y", XY)],
               [P("x^2", XY), P("y^2", XY)])
    flip = GradedMF(E.W, E.d, E.m1_degrees, E.m0_degrees,
                    [[-E.phi1[0][0], -E.phi1[0][1]], list(E.phi1[1])],
                    [[-E.phi0[0][0], E.phi0[0][1]], [-E.phi0[1][0], E.phi0[1][1]]])
    assert validate_mf(flip) == []
    f = find_sign_diagonal_iso(E, flip)
    assert f is not None and f.is_closed()
    assert find_sign_diagonal_iso(E, tau_shift(E, 1)) is None


@given(st.integers(0, 10 ** 6))
def test_koszul_anticommutation_random(seed):
    E = random_koszul(random.Random(seed))
    assert validate_mf(E) == []


def test_anticommutation_detects_bad_pairing():
    w = P("x^3")
    assert koszul_anticommutation([P("x")], [P("x^2")], w)
    assert not koszul_anticommutation([P("x")], [P("2*x^2")], w)


# -- Hom complexes


def test_hom_basis_count():
    E = rank1()
    # Hom^0: f1 : S(-1) → S(-1) and f0 : S → S, one monomial each
    assert len(hom_basis(E, E, 0)) == 2
    assert hmf_hom_dim(E, E, 0) == 1


def test_slice_shapes():
    E = koszul(parse_poly("x^3+y^3", XY), [P("x", XY), P("y", XY)],
               [P("x^2", XY), P("y^2", XY)])
    for k in range(-3, 4):
        d_prev, d_k = hom_complex_slice(E, E, k)
        assert d_prev.rows == d_k.cols == len(hom_basis(E, E, k))
        assert (d_k @ d_prev).is_zero()
    odd = {b[0] for b in hom_basis(E, E, 1)}
    assert odd <= {"f1", "f0"}


@pytest.mark.parametrize("idx", range(0, 60, 7))
@pytest.mark.parametrize("k", [-1, 0, 1])
def test_fast_differential_matches_reference(idx, k):
    E = mf_corpus(3, 60)[idx]
    F = mf_shift(E)
    assert differential_matrix(E, F, k) == differential_matrix_reference(E, F, k)
    assert differential_matrix(E, E, k) == differential_matrix_reference(E, E, k)


def test_cone_identity_contractible():
    E = rank1()
    C = cone(MFMorphism.identity(E))
    assert validate_mf(C) == []
    for k in range(-2, 3):
        assert hmf_hom_dim(C, C, k) == 0
        assert hmf_hom_dim(C, E, k) == 0 == hmf_hom_dim(E, C, k)


def test_cone_errors():
    E = rank1()
    bad = MFMorphism(E, E, ((P("x"),),), ((P("0"),),), 0)
    with pytest.raises(NotClosed):
        cone(bad)
    with pytest.raises(WrongDegree):
        cone(MFMorphism.zero(E, E, 1))


def test_cone_of_zero_is_sum():
    E = rank1()
    F = mf_shift(E)
    assert cone_zero_is_sum(E, F)
    assert cone_zero_is_sum(E, E)


@pytest.mark.parametrize("idx", [0, 5, 11])
def test_homotopy_invariance(idx):
    E = mf_corpus(1, 12)[idx]
    G = direct_sum(cone(MFMorphism.identity(E)), E)
    for k in (0, 1):
        base = hmf_hom_dim(E, E, k)
        assert hmf_hom_dim(G, E, k) == base == hmf_hom_dim(E, G, k)


def test_end_goldens():
    assert end_table(5) == END_GOLDENS


@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_corpus_constructors(seed, l):
    E = random_koszul(random.Random(seed))
    for F in (E, tau_shift(E, l), mf_shift(E), mf_dual(E), cone(MFMorphism.scalar(E, -2)),
              direct_sum(E, mf_dual(mf_dual(E)))):
        assert validate_mf(F) == []
    assert mf_shift(mf_shift(E)) == tau_shift(E, E.d)
    assert mf_dual(mf_dual(E)) == E


def test_corpus_size_and_bounds():
    corpus = mf_corpus(0, 60)
    assert len(corpus) == 60
    assert all(len(E.variables) <= 3 and E.d <= 5 and validate_mf(E) == [] for E in corpus)


# -- windows and files


def test_window():
    E = rank1()
    assert window_member(E, 0, 3)
    assert not window_member(tau_shift(E, 5), 0, 3)
    F = tau_shift(E, -2)  # degrees {3, 2}
    assert not window_member(F, 0, 3) and window_member_closed(F, 0, 3)


def test_json_round_trip():
    E = koszul(parse_poly("x^3+y^3", XY), [P("x", XY), P("y", XY)],
               [P("x^2", XY), P("y^2", XY)])
    data = json.loads(dump_mf(E))
    assert set(data) == {"vars", "W", "d", "m1_degrees", "m0_degrees", "phi1", "phi0"}
    assert load_mf(dump_mf(E)) == E
    data["W"] = "x^3+y^2"
    with pytest.raises(NotHomogeneous):
        mf_from_json(data)
    assert mf_from_json(mf_to_json(E)) == E
