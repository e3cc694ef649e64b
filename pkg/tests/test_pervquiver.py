import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from schoberlab.exactla import NonInvertible, RatMat, ShapeMismatch, kernel_basis
from schoberlab.pervquiver import (
    BraidWord, IndexOutOfRange, IsoStatus, PervMorphism, PervObject, braid_act,
    braid_generator, glue_slots, hom_space, ic_from_monodromy, is_isomorphic,
    is_trivial_monodromy, is_valid, random_perv, total_monodromy, twist_matrix,
    twist_product, validate_perv,
)


def M(rows, cols=None):
    return RatMat.from_rows(rows, cols)


def point(dim_D=1, dims=(0,), us=None, vs=None):
    n = len(dims)
    us = us or [RatMat.zeros(k, dim_D) for k in dims]
    vs = vs or [RatMat.zeros(dim_D, k) for k in dims]
    return PervObject(n, dim_D, dims, us, vs)


def test_validate_examples():
    assert validate_perv(point()) == []
    bad = PervObject(1, 1, (1,), (M([[1]]),), (M([[1]]),))
    assert validate_perv(bad) == [1]
    with pytest.raises(ShapeMismatch):
        PervObject(1, 2, (1,), (M([[1]]),), (M([[1], [0]]),))


def test_twist_examples():
    X = point(2, (1,))
    assert twist_matrix(X, 1).is_identity()
    Y = PervObject(1, 2, (1,), (M([[1, 0]]),), (M([[2], [0]]),))
    assert twist_matrix(Y, 1) == M([[-1, 0], [0, 1]])
    assert twist_matrix(Y, 1, -1) == M([[-1, 0], [0, 1]])
    with pytest.raises(IndexOutOfRange):
        twist_matrix(Y, 2)


def test_total_monodromy_examples():
    X = point(2, (1, 1, 0))
    assert total_monodromy(X, (1, -1, 1)).is_identity()
    assert is_trivial_monodromy(X, (1, 1, 1))
    Y = PervObject(1, 2, (1,), (M([[1, 0]]),), (M([[2], [0]]),))
    assert total_monodromy(Y, (1,)) == twist_matrix(Y, 1)
    assert not is_trivial_monodromy(Y, (1,))
    with pytest.raises(ValueError):
        total_monodromy(Y, (2,))


def test_elliptic_gluing_product():
    a, b = M([[1, 0], [1, 1]]), M([[1, -1], [0, 1]])
    X = glue_slots([ic_from_monodromy(t) for t in (b, a, (b @ a) ** -1)])
    assert is_valid(X)
    assert total_monodromy(X, (1, 1, -1)).is_identity()


def test_braid_pure_swap():
    X = PervObject(2, 2, (1, 0), (RatMat.zeros(1, 2), RatMat.zeros(0, 2)),
                   (RatMat.zeros(2, 1), RatMat.zeros(2, 0)))
    Y = braid_generator(X, 1)
    assert Y.dim_Di == (0, 1) and Y.u == (X.u[1], X.u[0]) and Y.v == (X.v[1], X.v[0])
    with pytest.raises(IndexOutOfRange):
        braid_generator(X, 2)


def test_braid_word_parse():
    w = BraidWord.parse("1 2 -1")
    assert w.letters == ((1, 1), (2, 1), (1, -1))
    assert w.inverse().letters == ((1, 1), (2, -1), (1, -1))
    with pytest.raises(ValueError):
        BraidWord.parse("0")


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(2, 4))
def test_braid_round_trip_and_conservation(seed, n):
    X = random_perv(random.Random(seed), n)
    for i in range(1, n):
        fwd = braid_generator(X, i)
        assert is_valid(fwd)
        assert braid_generator(fwd, i, inverse_=True) == X
        assert braid_generator(braid_generator(X, i, inverse_=True), i) == X
        assert twist_product(fwd) == twist_product(X)
        # new twists: T'_i = T_{i+1}, T'_{i+1} = T_{i+1}^{-1} T_i T_{i+1}
        ti, tj = twist_matrix(X, i), twist_matrix(X, i + 1)
        assert twist_matrix(fwd, i) == tj
        assert twist_matrix(fwd, i + 1) == (tj ** -1) @ ti @ tj


@given(seeds)
def test_braid_words(seed):
    X = random_perv(random.Random(seed), 3)
    assert braid_act(X, BraidWord()) == X
    assert braid_act(X, BraidWord.parse("1 -1")) == X
    w = BraidWord.parse("1 2 -1 2")
    assert braid_act(braid_act(X, w), w.inverse()) == X
    lhs, rhs = braid_act(X, BraidWord.parse("1 2 1")), braid_act(X, BraidWord.parse("2 1 2"))
    assert is_isomorphic(lhs, rhs, seed=seed).status is IsoStatus.ISO


def test_hom_space_examples():
    Z = PervObject(1, 0, (0,), (RatMat.zeros(0, 0),), (RatMat.zeros(0, 0),))
    assert hom_space(Z, Z) == []
    assert is_isomorphic(Z, Z).status is IsoStatus.ISO
    X = point(1, (0,))
    basis = hom_space(X, X)
    assert len(basis) == 1 and basis[0].phi.shape == (1, 1)


def _grid_count(X, Y, grid=range(-2, 3)):
    count = 0
    for phi, p1 in itertools.product(grid, repeat=2):
        f = PervMorphism(M([[phi]]), (M([[p1]]),))
        count += f.is_morphism(X, Y)
    return count


@pytest.mark.parametrize("ux,vx,uy,vy", [
    (1, 3, 2, 1), (0, 0, 0, 0), (1, 2, 1, 2), (2, 1, 1, 1), (0, 1, 1, 0), (3, 1, 0, 0),
])
def test_hom_space_brute_force(ux, vx, uy, vy):
    # 1-dim D and D_1: the solution set on a 5x5 grid has 5^dim points.
    X = PervObject(1, 1, (1,), (M([[ux]]),), (M([[vx]]),))
    Y = PervObject(1, 1, (1,), (M([[uy]]),), (M([[vy]]),))
    dim = len(hom_space(X, Y))
    assert _grid_count(X, Y) == 5 ** dim
    for f in hom_space(X, Y):
        assert f.is_morphism(X, Y)


def test_is_isomorphic_examples(rng):
    X = random_perv(rng, 3)
    res = is_isomorphic(X, X, seed=1)
    assert res.status is IsoStatus.ISO and res.witness.is_morphism(X, X)
    assert res.witness.is_invertible()
    Y = point(X.dim_D + 1, X.dim_Di)
    assert is_isomorphic(X, Y).status is IsoStatus.NOT_ISOMORPHIC
    # same dims but Hom(X, Y) kills D_1
    A = PervObject(1, 1, (1,), (M([[1]]),), (M([[0]]),))
    B = PervObject(1, 1, (1,), (M([[0]]),), (M([[1]]),))
    assert is_isomorphic(A, B).status is IsoStatus.NOT_ISOMORPHIC


def test_iso_undetermined_is_explicit():
    X = PervObject(1, 1, (1,), (M([[1]]),), (M([[2]]),))
    res = is_isomorphic(X, X, trials=1, coeff_range=0)
    assert res.status is IsoStatus.UNDETERMINED and not res


def test_ic_examples():
    X = ic_from_monodromy(RatMat.identity(2))
    assert X.dim_Di == (0,) and twist_matrix(X, 1).is_identity()
    m = M([[0, -1], [1, 1]])
    Y = ic_from_monodromy(m)
    assert Y.dim_Di == (2,) and twist_matrix(Y, 1) == m
    assert is_isomorphic(Y, PervObject(1, 2, (2,), (RatMat.identity(2),),
                                       (RatMat.identity(2) - m,))).status is IsoStatus.ISO
    d = RatMat.diag([1, 2])
    Z = ic_from_monodromy(d)
    assert Z.dim_Di == (1,) and twist_matrix(Z, 1) == d
    with pytest.raises(NonInvertible):
        ic_from_monodromy(RatMat.diag([1, 0]))


@given(st.integers(1, 4), seeds)
def test_ic_twist_fidelity(k, seed):
    r = random.Random(seed)
    m = RatMat.from_rows([[r.randint(-2, 2) for _ in range(k)] for _ in range(k)])
    if m.det() == 0:
        return
    X = ic_from_monodromy(m)
    assert twist_matrix(X, 1) == m
    assert X.dim_Di[0] == k - len(kernel_basis(m - RatMat.identity(k)))


def test_json_round_trip(rng):
    X = random_perv(rng, 3)
    data = json.loads(json.dumps(X.to_json()))
    assert PervObject.from_json(data) == X
    assert all(isinstance(x, str) for m in data["u"] for r in m for x in r)
