"""Brute-force dimensions, predictions, reports, and the cup checks."""

import json
import random
from fractions import Fraction

import pytest

from ospcoho import engine
from ospcoho.algebra import SL2, adopted_table
from ospcoho.cochains import (Cochain, coboundary, make_f_k, make_ftilde_k,
                              make_h_lambda, restrict_sl2)
from ospcoho.engine import (NotACocycle, build_report, class_representatives,
                            gelfand_fuchs_check, grid_reports, h_dim,
                            is_coboundary, predict_proposition, predict_sl2,
                            predict_theorem, restriction_injectivity_check,
                            run_audit, selftest)
from ospcoho.weightmod import TruncatedDlm

F = Fraction
TABLE = adopted_table()

GRID = [(F(0), F(0)), (F(1), F(1)), (F(5, 2), F(5, 2)),
        (F(0), F(1, 2)), (F(-1, 2), F(1)), (F(-1), F(3, 2)),
        (F(1, 3), F(0)), (F(0), F(2)), (F(1), F(1, 2))]


def test_h_dim_examples():
    mod = TruncatedDlm(0, F(1, 2), 3)
    dims = [h_dim(mod, n, 0, TABLE).total for n in range(4)]
    assert dims == [1, 2, 1, 0]
    mod = TruncatedDlm(1, 1, 3)
    assert [h_dim(mod, n, 0, TABLE).total for n in range(3)] == [1, 1, 0]
    mod = TruncatedDlm(F(1, 3), 0, 3)
    assert [h_dim(mod, n, 0, TABLE).total for n in range(3)] == [0, 0, 0]


def test_h_dim_parity_split():
    # the special-family classes are odd: representative d_{0,k}
    mod = TruncatedDlm(0, F(1, 2), 3)
    dc = h_dim(mod, 0, 0, TABLE)
    assert (dc.total, dc.even, dc.odd) == (1, 0, 1)
    dc1 = h_dim(mod, 1, 0, TABLE)
    assert (dc1.even, dc1.odd) == (0, 2)


def test_predict_proposition_cases():
    assert predict_proposition(F(7, 3), F(7, 3)) == \
        {0: 1, 1: 1, 2: 0, 3: 0, 4: 0}
    assert predict_proposition(F(-1), F(3, 2)) == \
        {0: 1, 1: 2, 2: 1, 3: 0, 4: 0}
    assert predict_proposition(F(0), F(2)) == \
        {0: 0, 1: 0, 2: 0, 3: 0, 4: 0}
    assert predict_proposition(F(1), F(1, 2)) == \
        {0: 0, 1: 0, 2: 0, 3: 0, 4: 0}


def test_predict_theorem_matches_proposition_on_grid():
    for lam, mu in GRID:
        mod = TruncatedDlm(lam, mu, engine.guard_K(lam, mu))
        assert predict_theorem(mod) == predict_proposition(lam, mu), \
            (lam, mu)


def test_theorem_boundary_guard():
    # at p = K + 1 the truncation loses B((ker A)^0); the guard avoids it
    lam, mu = F(0), F(2)
    shallow = TruncatedDlm(lam, mu, 1)
    assert predict_theorem(shallow) != predict_proposition(lam, mu)
    assert engine.guard_K(lam, mu) == 3
    deep = TruncatedDlm(lam, mu, engine.guard_K(lam, mu))
    assert predict_theorem(deep) == predict_proposition(lam, mu)


def test_sl2_brute_force_matches_remark_formula():
    for lam, mu in [(F(0), F(0)), (F(1), F(1)), (F(0), F(1, 2)),
                    (F(-1, 2), F(1)), (F(1, 3), F(0)), (F(-1), F(3, 2))]:
        mod = TruncatedDlm(lam, mu, 3)
        predicted = predict_sl2(mod, nmax=3)
        computed = {n: h_dim(mod, n, 0, TABLE, universe=SL2).total
                    for n in range(4)}
        assert computed == predicted, (lam, mu)


def test_sl2_identity_invariant_when_lam_equals_mu():
    mod = TruncatedDlm(F(5, 2), F(5, 2), 3)
    assert predict_sl2(mod)[0] >= 1


def test_weight_vanishing():
    for lam, mu in ((F(0), F(1, 2)), (F(1), F(1))):
        mod = TruncatedDlm(lam, mu, 3)
        for w in (F(1, 2), F(-1, 2), F(1), F(-1), F(3, 2), F(-3, 2),
                  F(2), F(-2)):
            for n in range(3):
                assert h_dim(mod, n, w, TABLE).total == 0, (lam, mu, n, w)


def test_is_coboundary_constructed_case():
    rng = random.Random(1)
    mod = TruncatedDlm(0, F(1, 2), 3)
    from ospcoho.engine import _random_cochain
    g0 = _random_cochain(mod, 1, 1, rng)
    f = coboundary(g0, TABLE)
    g = is_coboundary(f, TABLE)
    assert g is not None
    assert coboundary(g, TABLE).sub(f).is_zero()


def test_is_coboundary_rejects_noncocycles():
    mod = TruncatedDlm(0, F(1, 2), 3)
    f = Cochain(mod, 1, 0, {("A",): {("c", 0, 1): F(2)}})
    assert not coboundary(f, TABLE).is_zero()
    with pytest.raises(NotACocycle):
        is_coboundary(f, TABLE)


def test_explicit_cocycles_are_nontrivial():
    h, _ = make_h_lambda(F(1))
    assert is_coboundary(h, TABLE) is None
    for k in (0, 1, 2):
        fk, _ = make_f_k(k)
        ftk, _ = make_ftilde_k(k)
        assert is_coboundary(fk, TABLE) is None
        assert is_coboundary(ftk, TABLE) is None
        # nontrivial classes restrict nontrivially
        assert is_coboundary(restrict_sl2(fk), TABLE) is None
        assert is_coboundary(restrict_sl2(ftk), TABLE) is None


def test_class_representatives_count_and_reduction_localization():
    from ospcoho.cochains import reduce_cochain
    mod = TruncatedDlm(0, F(1, 2), 3)
    reps = class_representatives(mod, 1, 0, 1, TABLE)
    assert len(reps) == 2
    b_mono = ("B",)
    for rep in reps:
        g, red = reduce_cochain(rep, TABLE)
        assert red.values.get(b_mono)  # localization slot is nonzero


def test_localization_kernel_zero():
    mod = TruncatedDlm(0, F(1, 2), 3)
    for n in (1, 2, 3):
        for w in (F(0), F(1, 2), F(-3, 2)):
            for parity in (0, 1):
                assert engine.localization_kernel_dim(
                    mod, n, w, parity, TABLE) == 0


def test_build_block_composes_to_zero():
    mod = TruncatedDlm(0, F(1, 2), 3)
    for n in (0, 1, 2):
        for parity in (0, 1):
            block = engine.build_block(mod, n, 0, parity, TABLE)
            assert block.composes_to_zero()
            assert block.matrix_out.ncols == len(block.domain)
    empty = engine.build_block(mod, 1, F(19, 2), 0, TABLE)
    assert empty.domain == [] and empty.matrix_out.ncols == 0


def test_reduced_cocycle_vanishing_on_HB_is_coboundary():
    # reduced n-cocycles killed on H B^{n-1} are exact, n >= 2
    from ospcoho.cochains import _a_monomial, delta_matrix, \
        cochain_from_coords
    from ospcoho import linalg
    mod = TruncatedDlm(0, F(1, 2), 3)
    for n in (2, 3):
        hb = tuple(["H"] + ["B"] * (n - 1))
        for parity in (0, 1):
            dom, cod, mat = delta_matrix(mod, n, 0, parity, TABLE)
            extra = []
            for col, (u, _) in enumerate(dom):
                if _a_monomial(u) or u == hb:
                    extra.append({col: F(1)})
            rows = [dict(r) for r in mat.rows] + extra
            stacked = linalg.SparseMatrix(len(rows), mat.ncols, rows)
            for kv in linalg.kernel_basis(stacked):
                f = cochain_from_coords(mod, n, parity, dom, kv)
                assert is_coboundary(f, TABLE) is not None, (n, parity)


def test_h2_representative_localizes():
    from ospcoho.cochains import reduce_cochain
    mod = TruncatedDlm(0, F(1, 2), 3)
    reps = class_representatives(mod, 2, 0, 1, TABLE)
    assert len(reps) == 1
    _, red = reduce_cochain(reps[0], TABLE)
    assert red.values.get(("B", "B"))


def test_gelfand_fuchs_constant():
    for k in (0, 1, 2):
        rep = gelfand_fuchs_check(k, TABLE)
        assert rep["C_k"] == "-1/4"
        assert rep["cup_sign_variant"] == "printed"
        assert rep["printed_constant"] == str(F(-(-1) ** k))
        assert rep["ratio_to_printed"] == str(F(-1, 4) / (-(-1) ** k))


def test_restriction_injectivity_reports():
    rep = restriction_injectivity_check(0, F(1, 2), table=TABLE)
    assert rep["ok"]
    ns = sorted(e["n"] for e in rep["classes"])
    assert ns == [0, 1, 1, 2]
    rep2 = restriction_injectivity_check(F(-1, 2), 1, table=TABLE)
    assert rep2["ok"]
    assert any(e["n"] == 2 for e in rep2["classes"])


def test_report_json_schema_and_match():
    rep = build_report(F(0), F(1, 2))
    data = rep.to_json()
    assert set(data) == {"lambda", "mu", "K", "computed", "theorem",
                         "proposition", "match"}
    assert data["lambda"] == "0" and data["mu"] == "1/2"
    assert data["match"] is True
    assert data["computed"]["1"]["0"] == {"total": 2, "even": 0, "odd": 2}
    assert data["theorem"] == {"0": 1, "1": 2, "2": 1, "3": 0, "4": 0}
    json.loads(json.dumps(data))  # round-trips


def test_grid_reports_serial_and_parallel_agree():
    pairs = [(F(0), F(1, 2)), (F(1, 3), F(0))]
    serial = [r.to_json() for r in grid_reports(pairs, threads=1, wmax=F(1))]
    parallel = [r.to_json() for r in grid_reports(pairs, threads=2,
                                                  wmax=F(1))]
    assert serial == parallel


def test_run_audit_end_to_end():
    rep = run_audit()
    assert rep.variant == "repaired-V"
    assert rep.table == TABLE


def test_selftest_all_green():
    results = selftest("all")
    assert results
    assert all(ok for _, ok, _ in results), \
        [n for n, ok, _ in results if not ok]
