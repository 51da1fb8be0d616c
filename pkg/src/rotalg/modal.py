"""Unary modal operator pairs (box, diamond) on finite algebras.

Every axiom compiles to a list of *instances*: a tuple of table slots plus a
predicate over the values in those slots.  The same instances drive both the
compliance reports (first failing instance is the witness) and the
backtracking enumeration (an instance is tested as soon as its last slot is
assigned).  Slot ``x`` is ``box[x]`` and slot ``n + x`` is ``diamond[x]``.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    ConstraintInapplicable,
    InconsistentDerivation,
    MissingFixpointConstant,
    NotGodel,
    NotNM,
    UnknownElement,
)
from .report import AxiomReport, AxiomResult


class Axiom(str, Enum):
    BOX1 = "□1"
    BOX2 = "□2"
    DIA1 = "◇1"
    DIA2 = "◇2"
    K = "K"
    MON = "Mon"
    N1 = "N1"
    SM_BOX = "SM□"
    SM_DIA = "SM◇"
    LBOX1 = "⊟1"
    LBOX2 = "⊟2"
    LDIA1 = "⟐1"
    LDIA2 = "⟐2"
    F = "F"
    LBOX_LDIA = "⊟-⟐"
    P = "P"
    N = "N"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text):
        """Accept the symbol, the member name or an ASCII alias (``smbox``)."""
        if isinstance(text, cls):
            return text
        t = str(text).strip()
        for ax in cls:
            if t == ax.value or t.upper() == ax.name:
                return ax
        key = t.lower().replace("_", "").replace("-", "").replace(" ", "")
        if key in _ALIASES:
            return _ALIASES[key]
        raise ValueError(f"unknown axiom {text!r}")


_ALIASES = {
    "box1": Axiom.BOX1, "box2": Axiom.BOX2, "dia1": Axiom.DIA1, "dia2": Axiom.DIA2,
    "diamond1": Axiom.DIA1, "diamond2": Axiom.DIA2, "k": Axiom.K, "mon": Axiom.MON,
    "n1": Axiom.N1, "smbox": Axiom.SM_BOX, "smdia": Axiom.SM_DIA, "smdiamond": Axiom.SM_DIA,
    "lbox1": Axiom.LBOX1, "lbox2": Axiom.LBOX2, "ldia1": Axiom.LDIA1, "ldia2": Axiom.LDIA2,
    "f": Axiom.F, "lboxldia": Axiom.LBOX_LDIA, "boxdia": Axiom.LBOX_LDIA,
    "p": Axiom.P, "n": Axiom.N,
}

GAO = (Axiom.BOX1, Axiom.BOX2, Axiom.DIA1, Axiom.DIA2)
DERIVED = (Axiom.K, Axiom.MON)
SIDE_CONDITIONS = (Axiom.N1, Axiom.SM_BOX, Axiom.SM_DIA)
NMAO_PLUS = (Axiom.LBOX1, Axiom.LBOX2, Axiom.LDIA1, Axiom.LDIA2, Axiom.F, Axiom.LBOX_LDIA)
NMAO_MINUS = (Axiom.LBOX1, Axiom.LBOX2, Axiom.LDIA1, Axiom.LDIA2, Axiom.LBOX_LDIA,
              Axiom.P, Axiom.N)

_GODEL_FAMILY = set(GAO) | set(DERIVED) | set(SIDE_CONDITIONS)
_NM_FAMILY = {Axiom.LBOX1, Axiom.LBOX2, Axiom.LDIA1, Axiom.LDIA2, Axiom.LBOX_LDIA,
              Axiom.P, Axiom.N}


def applicable(A, axiom):
    cls = A.classification
    if axiom in _GODEL_FAMILY:
        return cls.godel
    if axiom is Axiom.F:
        return cls.nm_plus
    return cls.nm


def applicable_axioms(A):
    return [ax for ax in Axiom if applicable(A, ax)]


def _require(A, axioms):
    for ax in axioms:
        if not applicable(A, ax):
            raise ConstraintInapplicable(
                f"axiom {ax} does not apply to a {A.classification.kind} algebra"
            )


@dataclass(frozen=True)
class _Instance:
    slots: tuple
    pred: object
    witness: tuple


@lru_cache(maxsize=512)
def _instances(A, axiom):
    n = A.n
    leq, meet, join = A.leq.tolist(), A.meet.tolist(), A.join.tolist()
    arrow, neg = A.arrow.tolist(), A.neg.tolist()
    bot, top = A.bot, A.top
    D = n  # diamond slot offset
    out = []
    add = out.append

    if axiom in (Axiom.BOX1, Axiom.LBOX1):
        add(_Instance((top,), lambda v: v == top, (top,)))
    elif axiom in (Axiom.DIA1, Axiom.LDIA1):
        add(_Instance((D + bot,), lambda v: v == bot, (bot,)))
    elif axiom in (Axiom.BOX2, Axiom.LBOX2, Axiom.DIA2, Axiom.LDIA2):
        is_box = axiom in (Axiom.BOX2, Axiom.LBOX2)
        op, off = (meet, 0) if is_box else (join, D)
        for x in range(n):
            for y in range(x + 1, n):
                z = op[x][y]
                if z in (x, y):
                    # z == x: box(x) <= box(y) form; keep as binary check
                    other = y if z == x else x
                    add(_Instance((off + z, off + other),
                                  lambda vz, vo, op=op: op[vz][vo] == vz, (x, y)))
                else:
                    add(_Instance((off + x, off + y, off + z),
                                  lambda vx, vy, vz, op=op: op[vx][vy] == vz, (x, y)))
    elif axiom is Axiom.K:
        for x in range(n):
            for y in range(n):
                s = (arrow[x][y], x, y)
                slots = tuple(dict.fromkeys(s))
                pos = tuple(slots.index(e) for e in s)

                def k_pred(*v, pos=pos):
                    a, bx, by = (v[p] for p in pos)
                    return arrow[a][arrow[bx][by]] == top

                add(_Instance(slots, k_pred, (x, y)))
    elif axiom is Axiom.MON:
        cov = A.lattice.covers
        for off in (0, D):
            for x, y in sorted(cov):
                add(_Instance((off + x, off + y), lambda a, b: leq[a][b], (x, y)))
    elif axiom is Axiom.N1:
        add(_Instance((bot,), lambda v: v == bot, (bot,)))
    elif axiom in (Axiom.SM_BOX, Axiom.SM_DIA):
        off = 0 if axiom is Axiom.SM_BOX else D
        for a in range(n):
            if a != bot:
                add(_Instance((off + a,), lambda v: v != bot, (a,)))
    elif axiom is Axiom.F:
        f = A.fixpoint
        if f is None:
            raise MissingFixpointConstant("axiom F needs a fixpoint constant")
        add(_Instance((f,), lambda v, f=f: v == f, (f,)))
    elif axiom is Axiom.LBOX_LDIA:
        # diamond(x) == not box(not x)
        for x in range(n):
            add(_Instance((neg[x], D + x), lambda b, d: d == neg[b], (x,)))
    elif axiom is Axiom.P:
        # box(x v not x) == box(x) v not box(x)
        for x in range(n):
            j = join[x][neg[x]]
            if j == x:
                add(_Instance((x,), lambda b: join[b][neg[b]] == b, (x,)))
            else:
                add(_Instance((j, x), lambda bj, b: bj == join[b][neg[b]], (x,)))
    elif axiom is Axiom.N:
        for x in range(n):
            if leq[x][neg[x]]:
                add(_Instance((D + x,), lambda d: leq[d][neg[d]], (x,)))
    else:  # pragma: no cover
        raise ValueError(axiom)
    return tuple(out)


def _evaluate(A, axiom, values):
    for inst in _instances(A, axiom):
        if not inst.pred(*(values[s] for s in inst.slots)):
            return AxiomResult(str(axiom), False, tuple(A.labels[w] for w in inst.witness))
    return AxiomResult(str(axiom), True)


def _table(A, table, what):
    if isinstance(table, dict):
        try:
            out = [None] * A.n
            for k, v in table.items():
                out[A.index(k)] = A.index(v)
        except UnknownElement as exc:
            raise UnknownElement(f"{what}: {exc}") from None
        missing = [A.labels[i] for i, v in enumerate(out) if v is None]
        if missing:
            raise ValueError(f"{what} is not total: missing {missing}")
        return tuple(out)
    out = tuple(int(v) for v in table)
    if len(out) != A.n or any(not 0 <= v < A.n for v in out):
        raise ValueError(f"{what} table must map the {A.n} elements into the carrier")
    return out


class ModalPair:
    """A (box, diamond) pair of unary tables on an algebra."""

    __slots__ = ("algebra", "box", "diamond", "__dict__")

    def __init__(self, algebra, box, diamond):
        self.algebra = algebra
        self.box = _table(algebra, box, "box")
        self.diamond = _table(algebra, diamond, "diamond")

    @classmethod
    def identity(cls, A):
        return cls(A, range(A.n), range(A.n))

    def __repr__(self):
        return f"ModalPair(box={self.box_labels()}, diamond={self.diamond_labels()})"

    def __eq__(self, other):
        return (isinstance(other, ModalPair) and self.algebra is other.algebra
                and self.box == other.box and self.diamond == other.diamond)

    def __hash__(self):
        return hash((id(self.algebra), self.box, self.diamond))

    @property
    def values(self):
        return self.box + self.diamond

    def box_labels(self):
        lab = self.algebra.labels
        return {lab[i]: lab[v] for i, v in enumerate(self.box)}

    def diamond_labels(self):
        lab = self.algebra.labels
        return {lab[i]: lab[v] for i, v in enumerate(self.diamond)}

    def check(self, axioms):
        rep = AxiomReport()
        for ax in axioms:
            rep.add(_evaluate(self.algebra, Axiom.parse(ax), self.values))
        return rep

    @cached_property
    def compliance(self):
        """Report over every axiom applicable to the algebra's class."""
        return self.check(applicable_axioms(self.algebra))

    def satisfies(self, axioms):
        return self.check(axioms).passed


def _need_godel(A):
    if not A.classification.godel:
        raise NotGodel(f"expected a Goedel algebra, got {A.classification.kind}")


def _need_nm(A):
    if not A.classification.nm:
        raise NotNM(f"expected an NM algebra, got {A.classification.kind}")


def check_gao(A, m):
    """(□1), (□2), (◇1), (◇2)."""
    _need_godel(A)
    return m.check(GAO)


def check_derived(A, m):
    """(K) and (Mon); a failure on a GAO raises InconsistentDerivation."""
    _need_godel(A)
    rep = m.check(DERIVED)
    if not rep.passed and m.check(GAO).passed:
        raise InconsistentDerivation(
            "a GAO violates a derived law: " + "; ".join(rep.lines())
        )
    return rep


def check_side_conditions(A, m):
    _need_godel(A)
    return m.check(SIDE_CONDITIONS)


def check_nmao_plus(B, m):
    _need_nm(B)
    if B.fixpoint is None:
        raise MissingFixpointConstant("NMAO+ axioms need the constant f")
    if not B.classification.nm_plus:
        raise NotNM("not an NM+ algebra: f is not a negation fixpoint")
    return m.check(NMAO_PLUS)


def check_nmao_minus(B, m):
    _need_nm(B)
    if not B.classification.nm_minus:
        raise NotNM("not an NM- algebra")
    return m.check(NMAO_MINUS)


def positive_negative(B):
    """Masks of positive and negative elements.

    With a fixpoint f: positive means >= f, negative means <= f.  Without:
    positive means x > not x, negative means x <= not x.
    """
    leq = B.leq
    if B.fixpoint is not None:
        f = B.fixpoint
        return leq[f].copy(), leq[:, f].copy()
    x = np.arange(B.n)
    neg_mask = leq[x, B.neg]
    return ~neg_mask, neg_mask


def check_positivity_closure(B, m):
    """Closure of positive and negative elements under both operators."""
    _need_nm(B)
    pos, negm = positive_negative(B)
    rep = AxiomReport()
    for opname, table in (("box", m.box), ("diamond", m.diamond)):
        t = np.asarray(table)
        for cname, mask in (("positive", pos), ("negative", negm)):
            bad = mask & ~mask[t]
            name = f"{opname} closes {cname}"
            if bad.any():
                w = int(np.flatnonzero(bad)[0])
                rep.add(AxiomResult(name, False, (B.labels[w],)))
            else:
                rep.add(AxiomResult(name, True))
    if B.fixpoint is not None:
        f = B.fixpoint
        ok = m.diamond[f] == f
        rep.add(AxiomResult("diamond f = f", ok, None if ok else (B.labels[f],)))
    return rep


# ------------------------------------------------------------ enumeration


def _search(n_slots, start, domain, by_slot, values):
    """Depth-first assignment of slots ``start..start+n_slots-1`` in lexicographic order."""
    end = start + n_slots

    def rec(k):
        if k == end:
            yield tuple(values[start:end])
            return
        checks = by_slot[k]
        for v in range(domain):
            values[k] = v
            ok = True
            for inst in checks:
                if not inst.pred(*(values[s] for s in inst.slots)):
                    ok = False
                    break
            if ok:
                yield from rec(k + 1)
        values[k] = 0

    yield from rec(start)


def _group(instances, n_total):
    by_slot = [[] for _ in range(n_total)]
    for inst in instances:
        by_slot[max(inst.slots)].append(inst)
    return by_slot


def enumerate_operators(A, constraints, which="box"):
    """All box (or diamond) tables meeting ``constraints``, in lexicographic order.

    Only the instances that touch the chosen operator are used, so e.g.
    (Mon) constrains both enumerations.  Instances coupling the two
    operators raise ValueError.
    """
    axioms = [Axiom.parse(c) for c in constraints]
    _require(A, axioms)
    n = A.n
    lo, hi = (0, n) if which == "box" else (n, 2 * n)
    insts = []
    for ax in axioms:
        for inst in _instances(A, ax):
            inside = [lo <= s < hi for s in inst.slots]
            if all(inside):
                insts.append(inst)
            elif any(inside):
                raise ValueError(f"axiom {ax} couples box and diamond")
    by_slot = _group(insts, 2 * n)
    values = [0] * (2 * n)
    return list(_search(n, lo, n, by_slot, values))


def enumerate_modal_pairs(A, constraints):
    """Yield every ModalPair satisfying ``constraints``, each once.

    Order is lexicographic on (box table, diamond table).  Partial tables
    are pruned as soon as a constraint instance is fully assigned.
    """
    axioms = [Axiom.parse(c) for c in constraints]
    _require(A, axioms)
    n = A.n
    box_only, dia_only, mixed = [], [], []
    for ax in axioms:
        for inst in _instances(A, ax):
            if max(inst.slots) < n:
                box_only.append(inst)
            elif min(inst.slots) >= n:
                dia_only.append(inst)
            else:
                mixed.append(inst)
    values = [0] * (2 * n)
    box_slots = _group(box_only, 2 * n)
    if not mixed:
        dia_slots = _group(dia_only, 2 * n)
        diamonds = list(_search(n, n, n, dia_slots, values))
        if not diamonds:
            return
        for box in _search(n, 0, n, box_slots, values):
            for dia in diamonds:
                yield ModalPair(A, box, dia)
        return
    dia_slots = _group(dia_only + mixed, 2 * n)
    for box in _search(n, 0, n, box_slots, values):
        values[:n] = box
        for dia in _search(n, n, n, dia_slots, values):
            yield ModalPair(A, box, dia)
        values[:n] = box
