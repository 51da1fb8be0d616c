"""Connected and disconnected rotations of Goedel algebras, and their inverses.

``rotate(A, "plus")`` builds the NM+ algebra on pairs ``(a-, a+)`` with
``a- meet a+ == bot``; ``rotate(A, "minus")`` additionally drops pairs whose
join has a non-bot negation.  The star, meet and negation follow the pair
formulas; join and residuum are derived from the pair order.  ``skeleton``
goes back: the squares ``b*b`` of an NM algebra form a Goedel algebra.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ClosureFailure,
    InconsistentDerivation,
    MissingFixpointConstant,
    ModeMismatch,
    NotDirectlyIndecomposable,
    NotGodel,
    NotNM,
    PreconditionViolated,
)
from .lattice import FiniteLattice
from .modal import (
    GAO,
    Axiom,
    ModalPair,
    check_gao,
    check_nmao_minus,
    check_nmao_plus,
)
from .morphisms import Homomorphism
from .residuated import ResiduatedAlgebra, is_directly_indecomposable, negation_fixpoints

MODES = ("plus", "minus")


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be 'plus' or 'minus', got {mode!r}")


def in_carrier(A, mode, a_minus, a_plus):
    """Membership predicate of NM+(A) / NM-(A)."""
    m = int(A.meet[a_minus, a_plus])
    if mode == "plus":
        return m == A.bot
    j = int(A.join[a_minus, a_plus])
    return int(A.join[m, A.neg[j]]) == A.bot


def carrier_pairs(A, mode):
    """All pairs of A x A passing the membership predicate, row by row."""
    _check_mode(mode)
    return [(i, j) for i in range(A.n) for j in range(A.n) if in_carrier(A, mode, i, j)]


@dataclass(eq=False)
class RotatedAlgebra:
    base: ResiduatedAlgebra
    mode: str
    carrier: tuple
    algebra: ResiduatedAlgebra
    pairing: dict

    def element(self, a_minus, a_plus):
        """Algebra index of the pair (a_minus, a_plus); labels or indices."""
        key = (self.base.index(a_minus), self.base.index(a_plus))
        return self.pairing[key]

    def pair_of(self, x):
        return self.carrier[self.algebra.index(x)]

    def pair_labels(self):
        lab = self.base.labels
        return {self.algebra.labels[i]: (lab[p], lab[q]) for i, (p, q) in enumerate(self.carrier)}

    @cached_property
    def pair_index(self):
        """n x n array: algebra index of each pair, -1 outside the carrier."""
        t = np.full((self.base.n, self.base.n), -1, dtype=np.int64)
        for k, (p, q) in enumerate(self.carrier):
            t[p, q] = k
        return t


def _pair_label(A, p, q):
    return f"({A.labels[p]},{A.labels[q]})"


def rotate(A, mode, verify=True):
    """NM+(A) (``mode="plus"``) or NM-(A) (``mode="minus"``) of a Goedel algebra."""
    _check_mode(mode)
    if not A.classification.godel:
        raise NotGodel(f"rotation needs a Goedel algebra, got {A.classification.kind}")
    pairs = carrier_pairs(A, mode)
    P = np.array(pairs, dtype=np.int64)
    am, ap = P[:, 0], P[:, 1]
    # (a-, a+) <= (b-, b+)  iff  a- >= b- and a+ <= b+
    leq = A.leq[am[None, :], am[:, None]] & A.leq[ap[:, None], ap[None, :]]
    down = leq.sum(axis=0)
    order = sorted(range(len(pairs)), key=lambda k: (int(down[k]), k))
    pairs = [pairs[k] for k in order]
    P = P[order]
    am, ap = P[:, 0], P[:, 1]
    leq = leq[np.ix_(order, order)]
    lattice = FiniteLattice([_pair_label(A, p, q) for p, q in pairs], leq)
    pidx = np.full((A.n, A.n), -1, dtype=np.int64)
    pidx[am, ap] = np.arange(len(pairs))

    meet_formula = pidx[A.join[am[:, None], am[None, :]], A.meet[ap[:, None], ap[None, :]]]
    if not np.array_equal(meet_formula, lattice.meet):
        raise InconsistentDerivation("pair meet formula disagrees with the pair order")
    plus_join = A.join[ap[:, None], ap[None, :]]
    minus_join = A.join[am[:, None], am[None, :]]
    star = pidx[A.arrow[plus_join, minus_join], A.meet[ap[:, None], ap[None, :]]]
    if (star < 0).any():
        x, y = map(int, np.argwhere(star < 0)[0])
        raise ClosureFailure((lattice.labels[x], lattice.labels[y]), "star")
    fix = int(pidx[A.bot, A.bot]) if mode == "plus" else None
    sign = "+" if mode == "plus" else "-"
    alg = ResiduatedAlgebra(lattice, star, fixpoint=fix, name=f"NM{sign}({A.name})")
    if verify:
        swapped = pidx[ap, am]
        if not np.array_equal(swapped, alg.neg):
            raise InconsistentDerivation("pair negation disagrees with the residuum")
        cls = alg.classification
        if not (cls.nm_plus if mode == "plus" else cls.nm_minus):
            raise InconsistentDerivation(f"rotation is classified as {cls.kind}")
    pairing = {(int(p), int(q)): k for k, (p, q) in enumerate(pairs)}
    return RotatedAlgebra(A, mode, tuple(pairs), alg, pairing)


# ------------------------------------------------------------ modal lift


def lift_modal(R, m):
    """Lift a GAO pair on the base to the rotation: box(a-, a+) = (dia a-, box a+)."""
    A = R.base
    if m.algebra is not A:
        raise ValueError("modal pair is not defined on the rotation's base algebra")
    if not check_gao(A, m).passed:
        raise PreconditionViolated("GAO", "; ".join(check_gao(A, m).lines()))
    if not is_directly_indecomposable(A):
        raise PreconditionViolated("d.i.", "base algebra is directly decomposable")
    needed = [Axiom.N1] if R.mode == "plus" else [Axiom.N1, Axiom.SM_BOX, Axiom.SM_DIA]
    for ax in needed:
        res = m.check([ax])[str(ax)]
        if not res.passed:
            raise PreconditionViolated(str(ax), res.describe())
    box, dia = [], []
    for p, q in R.carrier:
        for table, pair in ((box, (m.diamond[p], m.box[q])), (dia, (m.box[p], m.diamond[q]))):
            k = R.pairing.get(pair)
            if k is None:
                raise ClosureFailure(_pair_label(A, p, q), _pair_label(A, *pair))
            table.append(k)
    return ModalPair(R.algebra, box, dia)


# ------------------------------------------------------------- skeleton


@dataclass(eq=False)
class Skeleton:
    source: ResiduatedAlgebra
    algebra: ResiduatedAlgebra
    embedding: tuple  # skeleton index -> source index
    index: dict  # source index -> skeleton index

    def of(self, b):
        """Skeleton index of the source element ``b`` (which must be a square)."""
        return self.index[self.source.index(b)]


def skeleton(B, verify=True):
    """G(B): the squares of B with inherited meet and ``x ->2 y = (x->y)*(x->y)``."""
    if not B.classification.nm:
        raise NotNM(f"skeleton needs an NM algebra, got {B.classification.kind}")
    squares = set(int(v) for v in np.diag(B.star))
    pos = {e: k for k, e in enumerate(B.lattice.linear_extension)}
    emb = sorted(squares, key=pos.__getitem__)
    e = np.array(emb, dtype=np.int64)
    lattice = FiniteLattice([B.labels[i] for i in emb], B.leq[np.ix_(e, e)])
    G = ResiduatedAlgebra(lattice, name=f"G({B.name})")
    if not np.array_equal(e[G.meet], B.meet[np.ix_(e, e)]):
        raise InconsistentDerivation("squares are not closed under meet")
    r = B.arrow[np.ix_(e, e)]
    if not np.array_equal(e[G.arrow], B.star[r, r]):
        raise InconsistentDerivation("derived Goedel residuum differs from (x->y)*(x->y)")
    if verify:
        if not G.classification.godel:
            raise InconsistentDerivation("skeleton is not a Goedel algebra")
        if bool(is_directly_indecomposable(B)) != bool(is_directly_indecomposable(G)):
            raise InconsistentDerivation("skeleton changed the d.i. status")
    return Skeleton(B, G, tuple(emb), {b: k for k, b in enumerate(emb)})


def lower_modal(B, m, S=None, verify=True, strict=True):
    """Lower an NMAO pair to the skeleton: box(x) = lbox(x) * lbox(x).

    With ``strict=False`` the NMAO axioms are not demanded of ``m`` (only the
    algebra must be a d.i. NM+/NM- algebra); the lowered pair is still
    checked when ``verify`` is set.
    """
    if m.algebra is not B:
        raise ValueError("modal pair is not defined on this algebra")
    cls = B.classification
    if cls.nm_plus:
        rep = check_nmao_plus(B, m)
        kind = "NMAO+"
    elif cls.nm_minus:
        rep = check_nmao_minus(B, m)
        kind = "NMAO-"
    else:
        raise PreconditionViolated("NM+ or NM-", f"algebra is {cls.kind}")
    if strict and not rep.passed:
        raise PreconditionViolated(kind, "; ".join(r.describe() for r in rep.failures()))
    if not is_directly_indecomposable(B):
        raise PreconditionViolated("d.i.", "algebra is directly decomposable")
    S = skeleton(B) if S is None else S
    box, dia = [], []
    for b in S.embedding:
        for table, src in ((box, m.box), (dia, m.diamond)):
            v = src[b]
            table.append(S.index[int(B.star[v, v])])
    low = ModalPair(S.algebra, box, dia)
    if verify:
        need = list(GAO) + [Axiom.N1]
        if kind == "NMAO-":
            need += [Axiom.SM_BOX, Axiom.SM_DIA]
        res = low.check(need)
        if not res.passed:
            raise InconsistentDerivation("lowered pair: " + "; ".join(res.lines()))
    return low


# ------------------------------------------------------ canonical maps


def gamma(A, R, modal=None, S=None):
    """a -> (bot, a) * (bot, a), from A into the skeleton of its rotation."""
    if R.base is not A:
        raise ValueError("rotation was not built from this algebra")
    if not is_directly_indecomposable(A):
        raise NotDirectlyIndecomposable("gamma needs a d.i. Goedel algebra")
    B = R.algebra
    S = skeleton(B) if S is None else S
    # (bot, a) * (bot, a) by the pair formula is (a -> bot, a); the factor
    # (bot, bot) itself is missing from NM-(A), so the formula is evaluated
    # on A rather than inside the rotation.
    img = []
    for a in range(A.n):
        k = R.pairing[(int(A.arrow[a, A.bot]), a)]
        img.append(S.index[k])
    tm = None
    if modal is not None:
        # the lift need not satisfy every NMAO- axiom (see (P)), so the
        # lowering is not gated on them; the lowered pair is still verified
        tm = lower_modal(B, lift_modal(R, modal), S, strict=False)
    return Homomorphism(A, S.algebra, img, modal, tm, name="gamma")


def eta(B, S, R, modal=None, strict=True):
    """b -> (bot, b*b) if b > not b, else (not b * not b, bot).

    ``strict`` is passed to :func:`lower_modal` for an attached modal pair.
    """
    if S.source is not B or R.base is not S.algebra:
        raise ValueError("skeleton/rotation do not belong to this algebra")
    if not is_directly_indecomposable(B):
        raise NotDirectlyIndecomposable("eta needs a d.i. NM algebra")
    has_fix = bool(negation_fixpoints(B))
    if has_fix != (R.mode == "plus"):
        raise ModeMismatch(
            f"algebra {'has' if has_fix else 'has no'} negation fixpoint, rotation is {R.mode}"
        )
    if has_fix and B.fixpoint is None:
        raise MissingFixpointConstant("designate the fixpoint constant f before applying eta")
    G = S.algebra
    leq, neg, star = B.leq, B.neg, B.star
    img = []
    for b in range(B.n):
        nb = int(neg[b])
        if leq[nb, b] and nb != b:
            pair = (G.bot, S.index[int(star[b, b])])
        else:
            pair = (S.index[int(star[nb, nb])], G.bot)
        img.append(R.pairing[pair])
    tm = None
    if modal is not None:
        tm = lift_modal(R, lower_modal(B, modal, S, strict=strict))
    return Homomorphism(B, R.algebra, img, modal, tm, name="eta")
