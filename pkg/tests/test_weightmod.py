"""Action rows of the truncated module and its kernel subspaces."""

from fractions import Fraction

import pytest

from ospcoho import weightmod as wm
from ospcoho.algebra import GENS, WEIGHT, adopted_table, printed_table
from ospcoho.superdiff import solve_realization_constants, \
    derived_module_action
from ospcoho.weightmod import (FAMILIES, FAMILY_PARITY,
                               TruncatedDlm, TruncationViolation,
                               action_compat_defect, complement,
                               from_oppoly, image_of_subspace,
                               module_axiom_holds, quotient_dim, to_oppoly)

F = Fraction


def test_act_examples():
    mod = TruncatedDlm(F(1, 3), F(1, 5), 3)
    assert mod.act_basis("A", ("a", 3, 2)) == {("c", 2, 2): 3}
    lam = F(2)
    mod2 = TruncatedDlm(lam, lam, 3)
    assert mod2.act_basis("B", ("b", 1, 1)) == {
        ("d", 2, 1): 1, ("c", 1, 1): -(2 * lam + 1)}
    for k in range(4):
        assert mod2.act_basis("X", ("a", 0, k)) == {}


def test_act_truncation_violation():
    mod = TruncatedDlm(0, 0, 2)
    with pytest.raises(TruncationViolation):
        mod.act_basis("H", ("a", 0, 3))


def test_weight_and_parity_homogeneity():
    mod = TruncatedDlm(F(-1, 2), F(1), 3)
    for gen in GENS:
        for fam in FAMILIES:
            for m in range(4):
                for k in range(4):
                    bv = (fam, m, k)
                    out = mod.act_basis(gen, bv)
                    target_w = mod.basis_weight(bv) + WEIGHT[gen]
                    gen_par = 1 if gen in ("A", "B") else 0
                    for tbv in out:
                        assert mod.basis_weight(tbv) == target_w
                        assert FAMILY_PARITY[tbv[0]] == \
                            (FAMILY_PARITY[fam] + gen_par) % 2
                        assert tbv[2] <= mod.K


def test_closure_no_k_growth():
    # exhaustive over K <= 5: no action row raises the dx-order
    for K in range(6):
        mod = TruncatedDlm(F(2, 3), F(1, 7), K)
        for gen in GENS:
            for fam in FAMILIES:
                for m in range(3):
                    for k in range(K + 1):
                        for tbv in mod.act_basis(gen, (fam, m, k)):
                            assert tbv[2] <= K


def test_action_compat_defect_examples():
    mod = TruncatedDlm(0, 0, 2)
    printed = printed_table()
    adopted = adopted_table()
    assert action_compat_defect(mod, adopted, "A", "B", ("c", 0, 0)) == {}
    assert action_compat_defect(mod, printed, "A", "B", ("c", 0, 0)) == {
        ("c", 0, 0): -2}
    for table in (printed, adopted):
        for m in range(3):
            for k in range(3):
                assert action_compat_defect(
                    mod, table, "A", "A", ("a", m, k)) == {}
        assert action_compat_defect(mod, table, "H", "H", ("d", 1, 1)) == {}


def test_module_axiom_all_pairs():
    adopted = adopted_table()
    for lam, mu in ((F(0), F(0)), (F(1, 3), F(1, 5)), (F(-1), F(3, 2))):
        mod = TruncatedDlm(lam, mu, 4)
        assert module_axiom_holds(mod, adopted, max_m=4, max_k=4)


def test_printed_table_fails_module_axiom():
    mod = TruncatedDlm(0, 0, 3)
    assert not module_axiom_holds(mod, printed_table(), max_m=2, max_k=2)


def test_oracle_equivalence_sample():
    table = adopted_table()
    consts = solve_realization_constants(table)
    for lam, mu in ((F(0), F(1, 2)), (F(1, 3), F(0))):
        mod = TruncatedDlm(lam, mu, 4)
        for gen in GENS:
            for fam in FAMILIES:
                for m in range(5):
                    for k in range(5):
                        bv = (fam, m, k)
                        oracle = derived_module_action(
                            gen, to_oppoly({bv: F(1)}), lam, mu, consts)
                        assert from_oppoly(oracle, mod) == \
                            mod.act_basis(gen, bv)


def test_weight_basis_examples():
    assert TruncatedDlm(0, 0, 1).weight_basis(0) == [
        ("a", 0, 0), ("a", 1, 1), ("b", 0, 0), ("b", 1, 1)]
    assert TruncatedDlm(0, F(1, 2), 0).weight_basis(F(-1, 2)) == [
        ("a", 0, 0), ("b", 0, 0)]
    assert TruncatedDlm(0, 0, 3).weight_basis(F(17, 3)) == []


def test_ker_a_is_m_zero_span():
    mod = TruncatedDlm(0, 0, 3)
    found = {}
    for alpha in mod.kernel_weights():
        sub = mod.kernel_slice(("A",), alpha)
        for v in sub.vectors():
            assert set(v) <= {("a", 0, k) for k in range(4)} | \
                {("d", 0, k) for k in range(4)}
            found.update(v)
    assert len(found) == 8  # a_{0,k} and d_{0,k} for k <= 3


def test_joint_kernel_cases():
    # p = 0: span(a_{0,0})
    mod = TruncatedDlm(F(5), F(5), 3)
    total = []
    for alpha in mod.kernel_weights():
        total += mod.kernel_slice(("A", "B"), alpha).vectors()
    assert total == [{("a", 0, 0): 1}]
    # p = k0 + 1/2 with 2 lam + k0 = 0: span(d_{0,k0})
    k0 = 2
    mod = TruncatedDlm(F(-k0, 2), F(k0 + 1, 2), 3)
    total = []
    for alpha in mod.kernel_weights():
        total += mod.kernel_slice(("A", "B"), alpha).vectors()
    assert total == [{("d", 0, k0): 1}]
    # generic p: zero
    mod = TruncatedDlm(F(1, 3), F(0), 3)
    for alpha in mod.kernel_weights():
        assert mod.kernel_slice(("A", "B"), alpha).dim == 0


def test_image_and_quotient_cases():
    # p = k0 + 1/2, 2 lam + k0 = 0: B((ker A)^0) = 0, quotient dim 1
    k0 = 1
    mod = TruncatedDlm(F(-k0, 2), F(k0 + 1, 2), 3)
    ker0 = mod.kernel_slice(("A",), 0)
    assert ker0.vectors() == [{("d", 0, k0): 1}]
    image = image_of_subspace(mod, "B", ker0)
    assert image.dim == 0
    ker_half = mod.kernel_slice(("A",), F(-1, 2))
    assert ker_half.vectors() == [{("a", 0, k0): 1}]
    assert quotient_dim(ker_half, image) == 1
    # same p but 2 lam + k0 != 0: image spans (ker A)^{-1/2}
    mod = TruncatedDlm(F(1), F(1) + k0 + F(1, 2), 3)
    assert mod.p == k0 + F(1, 2)
    image = image_of_subspace(mod, "B", mod.kernel_slice(("A",), 0))
    ker_half = mod.kernel_slice(("A",), F(-1, 2))
    assert image == ker_half
    assert quotient_dim(ker_half, image) == 0
    # p = k0 + 1: needs K >= k0 + 1; quotient 0
    mod = TruncatedDlm(F(0), F(k0 + 1), k0 + 2)
    ker0 = mod.kernel_slice(("A",), 0)
    assert ker0.vectors() == [{("a", 0, k0 + 1): 1}]
    image = image_of_subspace(mod, "B", ker0)
    ker_half = mod.kernel_slice(("A",), F(-1, 2))
    assert ker_half.vectors() == [{("d", 0, k0): 1}]
    assert image == ker_half
    assert quotient_dim(ker_half, image) == 0
    # p = 1 instance: B((ker A)^0) = span(d_{0,0}) up to scale
    mod = TruncatedDlm(F(1, 3), F(4, 3), 3)
    image = image_of_subspace(mod, "B", mod.kernel_slice(("A",), 0))
    assert image.dim == 1
    assert image.contains_vector({("d", 0, 0): F(7)})


def test_quotient_not_contained():
    mod = TruncatedDlm(0, 0, 2)
    full = mod.full_slice(0)
    line = mod.subspace(0, [{("a", 0, 0): F(1)}])
    with pytest.raises(wm.NotContained):
        quotient_dim(line, full)


def test_complement_cases():
    mod = TruncatedDlm(0, 0, 2)
    full = mod.full_slice(0)
    zero = mod.subspace(0, [])
    assert complement(zero, full) == full
    assert complement(full, full).dim == 0
    line = mod.subspace(0, [{("a", 0, 0): F(1), ("b", 1, 1): F(2)}])
    comp = complement(line, full)
    assert comp.dim == full.dim - 1
    assert line.sum(comp) == full
    assert line.intersect(comp).dim == 0


def test_a_onto_on_truncation():
    for lam, mu in ((F(0), F(0)), (F(0), F(1, 2)), (F(1, 3), F(0))):
        assert TruncatedDlm(lam, mu, 3).check_a_onto()


def test_lemma_b_image_characterization():
    # w in (ker A)^{-1/2} with B w in Y((ker X)^0) lies in B((ker A)^0)
    for k0 in (0, 1, 2):
        for lam in (F(-k0, 2), F(1), F(1, 3)):
            mod = TruncatedDlm(lam, lam + k0 + F(1, 2), max(3, k0 + 1))
            ker_half = mod.kernel_slice(("A",), F(-1, 2))
            y_img = image_of_subspace(
                mod, "Y", mod.kernel_slice(("X",), 0))
            b_img = image_of_subspace(
                mod, "B", mod.kernel_slice(("A",), 0))
            for vec in ker_half.vectors():
                bw = mod.act("B", vec)
                if not bw or y_img.contains_vector(bw):
                    assert b_img.contains_vector(vec)


def test_oppoly_roundtrip():
    mod = TruncatedDlm(0, 0, 4)
    vec = {("a", 1, 2): F(3), ("b", 0, 1): F(-1, 2),
           ("c", 2, 0): F(1), ("d", 0, 3): F(5, 3)}
    assert from_oppoly(to_oppoly(vec), mod) == vec
    # d_{0,4} reaches exactly K = 4; a bare dtheta dx^4 needs c_{0,5}
    assert from_oppoly(to_oppoly({("d", 0, 4): F(1)}), mod) == \
        {("d", 0, 4): F(1)}
    from ospcoho.superdiff import OpPoly
    with pytest.raises(TruncationViolation):
        from_oppoly(OpPoly.term(0, 0, 1, 4), mod)


def test_vec_serialization_roundtrip():
    vec = {("a", 0, 0): F(1), ("d", 2, 1): F(-7, 3)}
    data = wm.vec_to_json(vec)
    assert data == [["a", 0, 0, "1"], ["d", 2, 1, "-7/3"]]
    assert wm.vec_from_json(data) == vec
