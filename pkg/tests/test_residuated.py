import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F, K, T, Y, Z, chain, diamond, godel_chain
from rotalg import (
    FiniteLattice,
    ResiduatedAlgebra,
    check_godel,
    check_mtl,
    check_nm,
    check_nm_minus,
    check_nm_plus,
    filters,
    is_directly_indecomposable,
    prime_filters,
    rotate,
)
from rotalg.enumeration import enumerate_forests, godel_from_forest
from rotalg.errors import MissingFixpointConstant, NoResiduum, UnknownElement
from rotalg.residuated import (
    derive_residuum,
    filters_bruteforce,
    maximal_filters,
    negation,
    negation_fixpoints,
    product_factorization,
)


def labels(A, idx):
    return sorted(A.labels[i] for i in idx)


def arrow(A, x, y):
    return A.label(A.arrow[A.index(x), A.index(y)])


def test_godel_residuum_on_figure_one(fig1):
    A, _ = fig1
    assert arrow(A, "b", "c") == "c"
    assert arrow(A, "b", "⊥") == "⊥"
    assert arrow(A, "a", "⊥") == "⊥"
    assert all(arrow(A, "⊥", x) == "⊤" for x in A.labels)


def test_two_element_residuum_is_classical_implication():
    A = godel_chain(2)
    assert A.arrow.tolist() == [[1, 1], [0, 1]]


def test_non_distributive_lattice_has_no_residuum():
    m3 = FiniteLattice.from_covers(
        ["0", "x", "y", "z", "1"],
        [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")])
    with pytest.raises(NoResiduum):
        derive_residuum(m3, m3.meet)


def test_star_without_unit_is_reported():
    L = diamond()
    star = np.zeros((4, 4), dtype=np.int64)
    star[3, 3] = 3
    # p * top = bot, so both p and q sit below top -> bot with no maximum
    with pytest.raises(NoResiduum, match="x\\*⊤ <= ⊥"):
        ResiduatedAlgebra(L, star)


def test_mtl_reports(fig1):
    A, _ = fig1
    rep = check_mtl(A)
    assert rep.passed
    assert list(rep.results) == ["commutativity", "associativity", "unit", "Res", "Pre", "bounds"]
    # the diamond is prelinear: (p->q) v (q->p) = q v p = top
    assert check_mtl(ResiduatedAlgebra(diamond())).passed
    assert check_mtl(godel_chain(5)).passed


def test_godel_and_nm_classification(fig1):
    A, _ = fig1
    R = rotate(A, "plus").algebra
    assert check_godel(A) and not check_godel(R)
    z = R.index(Z)
    assert R.star[z, z] == R.bot
    # Lukasiewicz-like star on a 3-chain: a*a = bot
    L = chain(3)
    star = L.meet.copy()
    star[1, 1] = 0
    assert not check_godel(ResiduatedAlgebra(L, star))
    assert check_nm(R)
    assert not check_nm(A)  # not not a = top != a
    assert check_nm(godel_chain(2))


def test_nm_minus_and_plus(fig1, fig2):
    A, _ = fig1
    R1 = rotate(A, "plus").algebra
    R2 = rotate(fig2[0], "minus").algebra
    assert check_nm_minus(R2) and not check_nm_minus(R1)
    assert check_nm_minus(godel_chain(2))
    assert check_nm_plus(R1)
    assert not check_nm_plus(R1.with_fixpoint(K))
    with pytest.raises(MissingFixpointConstant):
        check_nm_plus(ResiduatedAlgebra(R1.lattice, R1.star))
    L = chain(3)
    star = L.meet.copy()
    star[1, 1] = 0
    assert check_nm_plus(ResiduatedAlgebra(L, star, fixpoint=1))


def test_filters_of_figure_one(fig1):
    A, _ = fig1
    got = sorted(labels(A, f.elements) for f in filters(A))
    assert got == [["a", "b", "c", "⊤"], ["a", "b", "c", "⊤", "⊥"], ["b", "⊤"], ["c", "⊤"], ["⊤"]]
    assert sorted(labels(A, f.elements) for f in prime_filters(A)) == [
        ["a", "b", "c", "⊤"], ["b", "⊤"], ["c", "⊤"]]
    assert [A.label(f.principal_generator) for f in maximal_filters(A)] == ["a"]


def test_filters_small_chains():
    two = godel_chain(2)
    assert sorted(len(f) for f in filters(two)) == [1, 2]
    assert [labels(two, f.elements) for f in prime_filters(two)] == [["c1"]]
    three = godel_chain(3)
    assert len(filters(three)) == 3
    assert sorted(labels(three, f.elements) for f in prime_filters(three)) == [
        ["c1", "c2"], ["c2"]]


def test_idempotent_filters_match_bruteforce(fig1):
    A, _ = fig1
    algebras = [A, rotate(A, "plus").algebra, godel_from_forest(list(enumerate_forests(3))[0])]
    for X in algebras:
        fast = sorted(sorted(f.elements) for f in filters(X))
        slow = sorted(sorted(f.elements) for f in filters_bruteforce(X))
        assert fast == slow


def test_directly_indecomposable(fig1, fig2):
    A, _ = fig1
    r = is_directly_indecomposable(A)
    assert r and r.method == "bot meet-irreducible" and r.evidence["oracle"] is True
    D = ResiduatedAlgebra(diamond())
    assert not is_directly_indecomposable(D)
    assert product_factorization(D) is not None
    R2 = rotate(fig2[0], "minus").algebra
    r2 = is_directly_indecomposable(R2)
    assert r2 and r2.method == "unique maximal filter"


def test_negation(fig1):
    A, _ = fig1
    assert A.label(negation(A, "a")) == "⊥"
    assert A.label(negation(A, "⊥")) == "⊤"
    R = rotate(A, "plus").algebra
    assert R.label(negation(R, T)) == Y
    with pytest.raises(UnknownElement):
        negation(A, "q")


def test_fixpoints_semantics(fig1, fig2):
    R1 = rotate(fig1[0], "plus").algebra
    R2 = rotate(fig2[0], "minus").algebra
    assert [R1.label(e) for e in negation_fixpoints(R1)] == [F]
    assert negation_fixpoints(R2) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.sampled_from(list(enumerate_forests(n)))))
def test_godel_invariants_on_forest_algebras(Fr):
    A = godel_from_forest(Fr)
    n = A.n
    x = np.arange(n)
    X, Y_, Z_ = np.meshgrid(x, x, x, indexing="ij")
    # (Res) re-asserted
    assert np.array_equal(A.leq[A.star[X, Y_], Z_], A.leq[X, A.arrow[Y_, Z_]])
    # arrow(x, y) = top iff x <= y
    assert np.array_equal(A.arrow == A.top, A.leq)
    if is_directly_indecomposable(A):
        # a d.i. Goedel algebra negates every nonzero element to bottom
        assert (A.neg[x != A.bot] == A.bot).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(list(enumerate_forests(n)))),
       st.sampled_from(["plus", "minus"]))
def test_negation_is_an_order_reversing_involution(Fr, mode):
    B = rotate(godel_from_forest(Fr), mode).algebra
    assert check_nm(B)
    neg = B.neg
    assert (neg[neg] == np.arange(B.n)).all()
    assert np.array_equal(B.leq, B.leq[neg][:, neg].T)
    fix = negation_fixpoints(B)
    assert len(fix) == (1 if mode == "plus" else 0)
