"""Residuated lattices on finite carriers: MTL, Goedel and nilpotent minimum.

A :class:`ResiduatedAlgebra` is a :class:`~rotalg.lattice.FiniteLattice`
with a monoid table ``star`` and its residuum ``arrow``.  The residuum is
always derived from ``star`` and the order; supplied tables are only
compared against the derived one.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    InconsistentDerivation,
    InconsistentTables,
    MissingFixpointConstant,
    NoResiduum,
    UnclassifiedAlgebra,
)
from .lattice import FiniteLattice, _frozen, is_meet_irreducible
from .report import AxiomReport, AxiomResult

#: Default size cap for the brute-force direct-product oracle.
FACTOR_ORACLE_CAP = 12

#: Largest algebra on which NM laws are also validated on chain quotients.
SEMANTIC_CHECK_CAP = 24


def derive_residuum(lattice, star):
    """Residuum of ``star``: ``arrow[y, z]`` is the largest x with ``x*y <= z``.

    Raises NoResiduum when some set ``{x : x*y <= z}`` has no maximum.
    """
    leq, join = lattice.leq, lattice.join
    star = np.asarray(star, dtype=np.int64)
    n = lattice.n
    # below[x, y, z] <=> star[x, y] <= z
    below = leq[star]
    acc = np.full((n, n), lattice.bot, dtype=np.int64)
    for x in range(n):
        acc = np.where(below[x], join[acc, x], acc)
    ok = below[acc, np.arange(n)[:, None], np.arange(n)[None, :]]
    if not ok.all():
        y, z = map(int, np.argwhere(~ok)[0])
        raise NoResiduum(
            f"no largest x with x*{lattice.labels[y]} <= {lattice.labels[z]}"
        )
    return acc


@dataclass(frozen=True)
class Classification:
    mtl: bool
    godel: bool
    nm: bool
    nm_minus: bool
    nm_plus: bool

    @property
    def kind(self):
        if self.nm_plus:
            return "NM+"
        if self.nm_minus and not self.godel:
            return "NM-"
        if self.godel:
            return "Godel"
        if self.nm:
            return "NM"
        if self.mtl:
            return "MTL"
        return "none"

    def names(self):
        out = []
        for flag, name in [(self.mtl, "MTL"), (self.godel, "Godel"), (self.nm, "NM"),
                           (self.nm_minus, "NM-"), (self.nm_plus, "NM+")]:
            if flag:
                out.append(name)
        return out


class ResiduatedAlgebra:
    """Finite bounded commutative residuated lattice with optional constant f."""

    def __init__(self, lattice, star=None, arrow=None, fixpoint=None, name=""):
        self.lattice = lattice
        star = lattice.meet if star is None else np.asarray(star, dtype=np.int64)
        if star.shape != (lattice.n, lattice.n):
            raise ValueError("star table has the wrong shape")
        if star.min() < 0 or star.max() >= lattice.n:
            raise ValueError("star table refers to unknown elements")
        self.star = _frozen(star)
        derived = derive_residuum(lattice, self.star)
        if arrow is not None:
            arrow = np.asarray(arrow, dtype=np.int64)
            if not np.array_equal(arrow, derived):
                y, z = map(int, np.argwhere(arrow != derived)[0])
                raise InconsistentTables(
                    f"arrow({lattice.labels[y]},{lattice.labels[z]}) given as "
                    f"{lattice.labels[arrow[y, z]]}, derived {lattice.labels[derived[y, z]]}"
                )
        self.arrow = _frozen(derived)
        self.fixpoint = None if fixpoint is None else lattice.index(fixpoint)
        self.name = name

    @classmethod
    def godel(cls, lattice, name=""):
        return cls(lattice, name=name)

    def __repr__(self):
        return f"ResiduatedAlgebra({self.name or list(self.labels)}, n={self.n})"

    def __len__(self):
        return self.lattice.n

    # lattice passthroughs
    n = property(lambda self: self.lattice.n)
    labels = property(lambda self: self.lattice.labels)
    leq = property(lambda self: self.lattice.leq)
    meet = property(lambda self: self.lattice.meet)
    join = property(lambda self: self.lattice.join)
    bot = property(lambda self: self.lattice.bot)
    top = property(lambda self: self.lattice.top)

    def index(self, e):
        return self.lattice.index(e)

    def label(self, i):
        return self.lattice.labels[i]

    @cached_property
    def neg(self):
        return _frozen(self.arrow[:, self.bot].copy())

    @cached_property
    def classification(self):
        return classify(self)

    def with_fixpoint(self, fixpoint):
        return ResiduatedAlgebra(self.lattice, self.star, fixpoint=fixpoint, name=self.name)

    def same_tables(self, other):
        return (self.labels == other.labels
                and np.array_equal(self.leq, other.leq)
                and np.array_equal(self.star, other.star)
                and self.fixpoint == other.fixpoint)


def negation(A, x):
    """``x -> bot``."""
    return int(A.neg[A.index(x)])


def _first(mask):
    return tuple(int(i) for i in np.argwhere(mask)[0])


def _result(A, name, bad):
    if not bad.any():
        return AxiomResult(name, True)
    return AxiomResult(name, False, tuple(A.labels[i] for i in _first(bad)))


def _rowwise(A, name, row_bad):
    """Scan x = 0..n-1; ``row_bad(x)`` is a bool array over the remaining arguments."""
    for x in range(A.n):
        bad = row_bad(x)
        if bad.any():
            rest = _first(bad)
            return AxiomResult(name, False, tuple(A.labels[i] for i in (x,) + rest))
    return AxiomResult(name, True)


def check_mtl(A):
    """Report on the monoid laws, (Res), (Pre) and the lattice bounds."""
    n, s, r = A.n, A.star, A.arrow
    leq, top, bot = A.leq, A.top, A.bot
    rep = AxiomReport()
    rep.add(_result(A, "commutativity", s != s.T))
    # (x*y)*z vs x*(y*z)
    rep.add(_rowwise(A, "associativity", lambda x: s[s[x]] != s[x][s]))
    rep.add(_result(A, "unit", s[top] != np.arange(n)))
    # x*y <= z  iff  x <= y->z
    rep.add(_rowwise(A, "Res", lambda x: leq[s[x]] != leq[x][r]))
    rep.add(_result(A, "Pre", A.join[r, r.T] != top))
    rep.add(_result(A, "bounds", ~(leq[bot] & leq[:, top])))
    return rep


def check_godel(A):
    """(Idem): ``x*x == x`` for all x."""
    return bool(np.all(np.diag(A.star) == np.arange(A.n)))


def _nm_equation_failures(A):
    s, r, neg, j = A.star, A.arrow, A.neg, A.join
    # not(x*y) v ((x meet y) -> x*y) == top
    lhs = j[neg[s], r[A.meet, s]]
    return lhs != A.top


def check_nm(A, semantic_cap=SEMANTIC_CHECK_CAP):
    """(Inv) and the nilpotent-minimum law with right-hand side top.

    On algebras up to ``semantic_cap`` elements the answer is re-derived on
    every chain quotient (x*y is bot or min(x, y) there) and a disagreement
    raises InconsistentDerivation.
    """
    inv = bool(np.all(A.neg[A.neg] == np.arange(A.n)))
    eq = inv and not _nm_equation_failures(A).any()
    if A.n <= semantic_cap and check_mtl(A).passed:
        sem = inv and nm_on_chain_quotients(A)
        if sem != eq:
            raise InconsistentDerivation(
                f"NM equation gives {eq} but chain quotients give {sem}"
            )
    return eq


def check_nm_law_report(A):
    rep = AxiomReport()
    inv = A.neg[A.neg] != np.arange(A.n)
    rep.add(_result(A, "Inv", inv))
    rep.add(_result(A, "NM", _nm_equation_failures(A)))
    return rep


def _nm_minus_failures(A):
    s, neg = A.star, A.neg
    x = np.arange(A.n)
    sq = s[x, x]
    nsq = neg[sq]
    lhs = neg[s[nsq, nsq]]  # 2(x^2) = not(not(x^2) * not(x^2))
    nx = neg[x]
    two_x = neg[s[nx, nx]]  # 2x = not(not x * not x)
    rhs = s[two_x, two_x]
    return lhs != rhs


def negation_fixpoints(A):
    return [int(e) for e in np.flatnonzero(A.neg == np.arange(A.n))]


def check_nm_minus(A):
    """The identity ``2(x*x) == (2x)*(2x)`` where ``2x = not(not x * not x)``.

    True answers are re-asserted against the absence of negation fixpoints.
    """
    ok = not _nm_minus_failures(A).any()
    if ok and check_nm(A) and negation_fixpoints(A):
        raise InconsistentDerivation("NM- identity holds but a negation fixpoint exists")
    return ok


def check_nm_plus(A):
    """``not f == f`` for the designated constant f."""
    if A.fixpoint is None:
        raise MissingFixpointConstant("no fixpoint constant designated")
    ok = int(A.neg[A.fixpoint]) == A.fixpoint
    if ok and check_nm(A) and len(negation_fixpoints(A)) != 1:
        raise InconsistentDerivation("NM+ algebra with more than one negation fixpoint")
    return ok


def classify(A):
    mtl = check_mtl(A).passed
    godel = mtl and check_godel(A)
    nm = mtl and check_nm(A)
    nm_minus = nm and check_nm_minus(A)
    nm_plus = nm and A.fixpoint is not None and check_nm_plus(A)
    return Classification(mtl, godel, nm, nm_minus, nm_plus)


# ---------------------------------------------------------------- filters


@dataclass(frozen=True)
class Filter:
    elements: frozenset
    principal_generator: int = None

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)


def idempotents(A):
    return [int(e) for e in np.flatnonzero(np.diag(A.star) == np.arange(A.n))]


def principal_filter(A, g):
    return Filter(frozenset(int(y) for y in np.flatnonzero(A.leq[g])), g)


def filters(A):
    """Every filter of A (upward closed, closed under star, containing top).

    In a finite algebra a filter F equals the up-set of the product of its
    members, and that product is idempotent; conversely the up-set of an
    idempotent is a filter.  So filters are enumerated through idempotents.
    """
    out = [principal_filter(A, e) for e in idempotents(A)]
    out.sort(key=lambda f: (len(f), sorted(f.elements)))
    return out


def filters_bruteforce(A):
    """Filters found by checking every up-set generated by an antichain.

    Independent of the idempotent description used by :func:`filters`;
    exponential in the width, so only for small algebras and tests.
    """
    leq, star = A.leq, A.star
    comparable = leq | leq.T
    order = A.lattice.linear_extension
    out = []

    def rec(start, chosen):
        if chosen:
            mask = leq[chosen].any(axis=0)
            members = np.flatnonzero(mask)
            if mask[star[np.ix_(members, members)]].all():
                gen = chosen[0] if len(chosen) == 1 else None
                out.append(Filter(frozenset(int(m) for m in members), gen))
        for k in range(start, len(order)):
            e = order[k]
            if not comparable[e, chosen].any():
                rec(k + 1, chosen + [e])

    rec(0, [])
    out.sort(key=lambda f: (len(f), sorted(f.elements)))
    return out


def _mask(A, F):
    m = np.zeros(A.n, dtype=bool)
    m[list(F.elements)] = True
    return m


def is_prime_filter(A, F):
    if len(F) == A.n:
        return False
    m = _mask(A, F)
    return not (m[A.join] & ~m[:, None] & ~m[None, :]).any()


def prime_filters(A):
    return [F for F in filters(A) if is_prime_filter(A, F)]


def maximal_filters(A):
    proper = [F for F in filters(A) if len(F) < A.n]
    return [F for F in proper if not any(F.elements < G.elements for G in proper)]


def filter_congruence(A, F):
    """Class index of each element under ``x ~ y iff (x->y)*(y->x) in F``."""
    r, s = A.arrow, A.star
    same = _mask(A, F)[s[r, r.T]]
    cls = [-1] * A.n
    k = 0
    for x in range(A.n):
        if cls[x] < 0:
            for y in np.flatnonzero(same[x]):
                cls[y] = k
            k += 1
    return cls


def nm_on_chain_quotients(A):
    """True iff in every quotient by a prime filter, x*y is bot or x meet y."""
    s, m = A.star, A.meet
    for F in prime_filters(A):
        cls = filter_congruence(A, F)
        for x, y in product(range(A.n), repeat=2):
            c = cls[s[x, y]]
            if c != cls[A.bot] and c != cls[m[x, y]]:
                return False
    return True


# ------------------------------------------------- direct indecomposability


@dataclass(frozen=True)
class DIResult:
    value: bool
    method: str
    evidence: dict

    def __bool__(self):
        return self.value


def boolean_elements(A):
    """Complemented elements: ``e v not e == top`` and ``e meet not e == bot``."""
    x = np.arange(A.n)
    ok = (A.join[x, A.neg] == A.top) & (A.meet[x, A.neg] == A.bot)
    return [int(e) for e in np.flatnonzero(ok)]


def coatoms(A):
    cov = A.lattice.cover_matrix
    return [int(e) for e in np.flatnonzero(cov[:, A.top])]


def product_factorization(A):
    """Brute-force search for A = A/F x A/G with both factors nontrivial.

    Congruences of an MTL-algebra are induced by its filters; the pair
    (F, G) factors A iff the map a -> ([a]_F, [a]_G) is a bijection onto
    the product of the two quotients.  Returns a witness pair or None.
    """
    fs = filters_bruteforce(A)
    parts = []
    for F in fs:
        cls = filter_congruence(A, F)
        k = max(cls) + 1
        if k > 1:
            parts.append((F, cls, k))
    for i, (F, cf, kf) in enumerate(parts):
        for G, cg, kg in parts[i:]:
            if kf * kg != A.n:
                continue
            if len(set(zip(cf, cg))) == A.n:
                return F, G
    return None


def is_directly_indecomposable(A, oracle_cap=FACTOR_ORACLE_CAP):
    """d.i. test with evidence.

    Goedel algebras: bot is meet-irreducible.  NM algebras: exactly one
    maximal proper filter.  Any other MTL-algebra: the only complemented
    elements are bot and top.
    Up to ``oracle_cap`` elements the answer is cross-checked against a
    brute-force direct-product search.
    """
    cls = A.classification
    if not cls.mtl:
        raise UnclassifiedAlgebra("not an MTL-algebra")
    evidence = {"coatoms": [A.labels[c] for c in coatoms(A)]}
    if A.n == 1:
        value, method = False, "trivial"
    elif cls.godel:
        value = is_meet_irreducible(A.lattice, A.bot)
        method = "bot meet-irreducible"
    elif cls.nm:
        maxi = maximal_filters(A)
        evidence["maximal_filters"] = [A.labels[F.principal_generator] for F in maxi]
        value = len(maxi) == 1
        method = "unique maximal filter"
    else:
        bools = boolean_elements(A)
        evidence["complemented"] = [A.labels[b] for b in bools]
        value = len(bools) == 2
        method = "trivial Boolean center"
    if A.n <= oracle_cap:
        split = product_factorization(A) if A.n > 1 else None
        evidence["oracle"] = split is None
        if (split is None) != value and A.n > 1:
            raise InconsistentDerivation(
                f"d.i. test ({method}) says {value}, factor search disagrees"
            )
    return DIResult(bool(value), method, evidence)
