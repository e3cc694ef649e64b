"""The eight acceptance criteria, each at exact (zero) tolerance."""

import json
import time

import pytest

from schoberlab.cli import run
from schoberlab.cyktheory import (
    CYContext, HSeries, euler_char, hrr_oracle, pairing_matrix, point_functor,
    st_class, tensor_O,
)
from schoberlab.suites import braid_suite, mf_suite


def cli_reports(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_1_decat_ic(capsys, record_criterion):
    ok, lines = True, []
    for n in (2, 3, 4, 5):
        start = time.perf_counter()
        code, (rep,) = cli_reports(capsys, "verify", "ic", "--n", str(n))
        elapsed = time.perf_counter() - start
        c = rep["witness"]["checks"]
        ok &= (code == 0 and rep["status"] == "pass"
               and c["fixed_space_m"]["dim"] == 0
               and c["det_id_minus_m"]["value"] != "0"
               and all(s["iso"] == "iso" for s in c["slot_iso"]["slots"].values())
               and c["total_monodromy"]["status"] == "pass"
               and c["total_monodromy"]["signs"] == [1, 1, -1]
               and c["global_iso"]["iso"] == "iso")
        lines.append(f"  n={n}: {rep['status']} in {elapsed:.2f}s")
    print("\n".join(lines))
    assert record_criterion(1, "IC comparison for n = 2..5", ok)


def test_2_n1_dimension_count(capsys, record_criterion):
    code, (rep,) = cli_reports(capsys, "verify", "ic", "--n", "1")
    ok = (code == 0 and rep["status"] == "expected-failure"
          and rep["witness"]["dims"] == [4, 2]
          and rep["witness"]["conclusion"] == "not-isomorphic")
    assert record_criterion(2, "n = 1 dimension count 4 vs 2, not isomorphic", ok)


def test_3_elliptic(capsys, record_criterion):
    code, (rep,) = cli_reports(capsys, "verify", "elliptic")
    c = rep["witness"]["checks"]
    ok = (code == 0 and rep["status"] == "pass"
          and c["M_a"]["matrix"] == [["1", "0"], ["1", "1"]]
          and c["M_b"]["matrix"] == [["1", "-1"], ["0", "1"]]
          and c["charpoly_m"]["coeffs"] == ["1", "-1", "1"]
          and c["fixed_dims"]["dims"] == [1, 1, 0]
          and c["slot_ranks"]["ranks"] == [1, 1, 2]
          and c["total_monodromy"]["status"] == "pass"
          and c["P_B_iso_IC"]["iso"] == "iso")
    assert record_criterion(3, "elliptic schober data and P^B ~ IC(L^B)", ok)


def test_4_hrr(record_criterion):
    results = [euler_char(CYContext.create(n), HSeries.exp(n, k)) == hrr_oracle(n, k)
               for n in range(1, 7) for k in range(-3, 4)]
    ok = len(results) == 42 and all(results)
    assert record_criterion(4, f"HRR oracle, {sum(results)}/42 equalities", ok)


def test_5_sign_law(record_criterion):
    ok = True
    for n in range(1, 7):
        ctx = CYContext.create(n)
        p = pairing_matrix(ctx)
        _, r, l_adj = point_functor(ctx)
        ok &= p.T == p.scale((-1) ** n) and l_adj == r.scale((-1) ** n)
    assert record_criterion(5, "P^T = (-1)^n P and L = (-1)^n R for n = 1..6", ok)


def test_6_window(record_criterion):
    ok = True
    for n in (1, 2, 3):
        ctx = CYContext.create(n)
        for k in range(-3, 4):
            ok &= st_class(ctx, k + n + 2) == (tensor_O(ctx, k) @ st_class(ctx, n + 2)
                                              @ tensor_O(ctx, -k))
    assert record_criterion(6, "window-shift conjugation, n in {1,2,3}, k in [-3,3]", ok)


def test_7_braid(record_criterion):
    rep = braid_suite(3, 100, seed=0)
    w = rep.witness
    ok = (rep.status == "pass" and w["round_trip_failures"] == 0 and w["product_failures"] == 0
          and w["relation"] == {"iso": 100, "not-isomorphic": 0, "undetermined": 0})
    assert record_criterion(7, "braid suite on 100 seeded P_3 objects", ok)


def test_8_mf(record_criterion):
    reports = mf_suite(seed=0)
    for r in reports:
        print(f"  {r.check}: {r.status}")
    by = {r.check: r for r in reports}
    ok = (all(r.status == "pass" for r in reports)
          and by["mf.validity"].witness["corpus"] >= 50
          and set(by["mf.koszul_duality"].witness["ranks"]) == {"1", "2", "3"}
          and by["mf.cone_id"].witness["hom_dims_-2_to_2"] == {"1": [0] * 5, "2": [0] * 5})
    assert record_criterion(8, "matrix factorization suite", ok)
