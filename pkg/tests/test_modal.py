from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F, K, T, Z, godel_chain
from rotalg import (
    Axiom,
    ModalPair,
    check_derived,
    check_gao,
    check_nmao_minus,
    check_nmao_plus,
    check_positivity_closure,
    check_side_conditions,
    enumerate_modal_pairs,
    enumerate_operators,
    lift_modal,
    rotate,
)
from rotalg.enumeration import enumerate_trees, godel_from_forest
from rotalg.errors import ConstraintInapplicable, MissingFixpointConstant, NotGodel, NotNM
from rotalg.modal import GAO, positive_negative

GAO_N1 = list(GAO) + [Axiom.N1]
GAO_SM = GAO_N1 + [Axiom.SM_BOX, Axiom.SM_DIA]


def brute_operators(A, which):
    """Every unary map preserving meet and top (box) or join and bottom (diamond)."""
    n = A.n
    op, unit = (A.meet, A.top) if which == "box" else (A.join, A.bot)
    return [t for t in product(range(n), repeat=n)
            if t[unit] == unit
            and all(t[op[x, y]] == op[t[x], t[y]] for x in range(n) for y in range(n))]


def test_figure_one_pair_compliance(fig1):
    A, m = fig1
    rep = m.check(list(GAO) + [Axiom.K, Axiom.MON, Axiom.N1, Axiom.SM_BOX, Axiom.SM_DIA])
    assert rep.lines() == ["□1: pass", "□2: pass", "◇1: pass", "◇2: pass", "K: pass",
                           "Mon: pass", "N1: pass", "SM□: pass", "SM◇: FAIL at (a)"]
    assert check_gao(A, m).passed
    assert check_derived(A, m).passed
    assert not check_side_conditions(A, m).passed


def test_figure_two_pair_side_conditions(fig2):
    A, m = fig2
    assert check_side_conditions(A, m).passed
    assert check_gao(A, m).passed


def test_axiom_parsing():
    assert Axiom.parse("□1") is Axiom.BOX1
    assert Axiom.parse("smdia") is Axiom.SM_DIA
    assert Axiom.parse("SM_BOX") is Axiom.SM_BOX
    assert Axiom.parse("lbox-ldia") is Axiom.LBOX_LDIA
    assert Axiom.parse("P") is Axiom.P
    with pytest.raises(ValueError):
        Axiom.parse("□9")


@pytest.mark.parametrize("n, boxes, pairs_n1", [(2, 2, 2), (3, 6, 18)])
def test_operator_counts_on_chains(n, boxes, pairs_n1):
    A = godel_chain(n)
    assert len(enumerate_operators(A, ["□1", "□2"], "box")) == boxes
    assert len(enumerate_operators(A, ["◇1", "◇2"], "diamond")) == boxes
    assert sum(1 for _ in enumerate_modal_pairs(A, GAO_N1)) == pairs_n1


def test_operator_enumeration_matches_bruteforce(fig1):
    A, _ = fig1
    for which, axioms in (("box", ["□1", "□2"]), ("diamond", ["◇1", "◇2"])):
        got = enumerate_operators(A, axioms, which)
        assert sorted(got) == got
        assert got == brute_operators(A, which)
    assert len(enumerate_operators(A, ["□1", "□2"], "box")) == 50
    # (N1) keeps the boxes fixing bottom: 50 boxes x 50 diamonds -> 25 x 50
    assert sum(1 for _ in enumerate_modal_pairs(A, GAO_N1)) == 1250


def test_enumeration_guards(fig1):
    A, _ = fig1
    with pytest.raises(ConstraintInapplicable):
        enumerate_operators(A, ["⊟1"])
    B = rotate(A, "plus").algebra
    with pytest.raises(ValueError):
        enumerate_operators(B, ["⊟-⟐"], "box")


def test_class_guards(fig1):
    A, m = fig1
    R = rotate(A, "plus")
    L = lift_modal(R, m)
    with pytest.raises(NotGodel):
        check_gao(R.algebra, L)
    with pytest.raises(NotNM):
        check_nmao_plus(A, m)
    with pytest.raises(NotNM):
        check_positivity_closure(A, m)


def test_lift_of_figure_one_is_an_nmao_plus(fig1):
    A, m = fig1
    R = rotate(A, "plus")
    B, L = R.algebra, lift_modal(R, m)
    assert check_nmao_plus(B, L).passed
    assert check_positivity_closure(B, L).passed
    assert B.label(L.box[B.index(Z)]) == F
    assert B.label(L.diamond[B.index(T)]) == K
    assert L.diamond[B.fixpoint] == B.fixpoint


def test_fixpoint_axiom_needs_the_constant(fig1):
    A, m = fig1
    R = rotate(A, "plus")
    bare = R.algebra.__class__(R.algebra.lattice, R.algebra.star)
    with pytest.raises(MissingFixpointConstant):
        ModalPair(bare, range(bare.n), range(bare.n)).check([Axiom.F])


def test_positive_and_negative_elements(fig1, fig2):
    B = rotate(fig1[0], "plus").algebra
    pos, neg = positive_negative(B)
    assert sorted(B.labels[i] for i in range(B.n) if pos[i]) == sorted(
        ["(⊥,⊥)", "(⊥,a)", "(⊥,b)", "(⊥,c)", "(⊥,⊤)"])
    assert pos.sum() + neg.sum() == B.n + 1  # f is both
    B2 = rotate(fig2[0], "minus").algebra
    pos2, neg2 = positive_negative(B2)
    assert not (pos2 & neg2).any() and (pos2 | neg2).all()


def test_identity_pair_is_an_nmao_on_both_rotations(fig1):
    A, _ = fig1
    for mode, check in (("plus", check_nmao_plus), ("minus", check_nmao_minus)):
        B = rotate(A, mode).algebra
        assert check(B, ModalPair.identity(B)).passed


def test_figure_two_lift_fails_p_at_top(fig2):
    A, m = fig2
    R = rotate(A, "minus")
    L = lift_modal(R, m)
    rep = check_nmao_minus(R.algebra, L)
    assert [r.describe() for r in rep.failures()] == ["P: FAIL at ((⊤,⊥))"]


def _sm_pairs():
    out = []
    for k in range(1, 4):
        for F_ in enumerate_trees(k):
            A = godel_from_forest(F_)
            pairs = list(enumerate_modal_pairs(A, GAO_SM))
            if pairs:
                out.append((A, pairs))
    return out


SM_PAIRS = _sm_pairs()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(range(len(SM_PAIRS))).flatmap(
    lambda i: st.tuples(st.just(i), st.integers(0, len(SM_PAIRS[i][1]) - 1))))
def test_p_on_minus_lift_holds_iff_box_equals_diamond(ij):
    i, j = ij
    A, pairs = SM_PAIRS[i]
    m = pairs[j]
    R = rotate(A, "minus")
    L = lift_modal(R, m)
    rep = L.check([Axiom.P, Axiom.N, Axiom.LBOX1, Axiom.LBOX2, Axiom.LDIA1, Axiom.LDIA2,
                   Axiom.LBOX_LDIA])
    assert rep["N"].passed
    assert all(rep[str(a)].passed for a in (Axiom.LBOX1, Axiom.LBOX2, Axiom.LDIA1,
                                            Axiom.LDIA2, Axiom.LBOX_LDIA))
    assert rep["P"].passed == (m.box == m.diamond)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(SM_PAIRS))).flatmap(
    lambda i: st.tuples(st.just(i), st.integers(0, len(SM_PAIRS[i][1]) - 1))))
def test_k_and_mon_hold_on_every_gao(ij):
    i, j = ij
    A, pairs = SM_PAIRS[i]
    assert check_derived(A, pairs[j]).passed
