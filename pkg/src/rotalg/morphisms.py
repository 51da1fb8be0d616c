"""Element maps between algebras: exhaustive verification and brute-force search."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import SignatureMismatch
from .report import AxiomReport, AxiomResult


@dataclass(eq=False)
class Homomorphism:
    """An element map ``source -> target``, optionally carrying modal pairs."""

    source: object
    target: object
    mapping: tuple
    source_modal: object = None
    target_modal: object = None
    name: str = ""

    def __post_init__(self):
        self.mapping = tuple(int(v) for v in self.mapping)
        if len(self.mapping) != self.source.n:
            raise ValueError("element map is not total on the source")

    def __call__(self, x):
        return self.mapping[self.source.index(x)]

    def label_map(self):
        s, t = self.source.labels, self.target.labels
        return {s[i]: t[v] for i, v in enumerate(self.mapping)}

    @cached_property
    def preserved(self):
        return verify_isomorphism(self)

    def swapped(self, x, y):
        """Copy with the images of x and y exchanged (for mutation tests)."""
        m = list(self.mapping)
        i, j = self.source.index(x), self.source.index(y)
        m[i], m[j] = m[j], m[i]
        return Homomorphism(self.source, self.target, m, self.source_modal,
                            self.target_modal, self.name)


def _binary(S, name, m, src, tgt):
    bad = m[src] != tgt[m[:, None], m[None, :]]
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        return AxiomResult(name, False, (S.labels[x], S.labels[y]))
    return AxiomResult(name, True)


def _unary(S, name, m, src, tgt):
    src, tgt = np.asarray(src), np.asarray(tgt)
    bad = m[src] != tgt[m]
    if bad.any():
        x = int(np.flatnonzero(bad)[0])
        return AxiomResult(name, False, (S.labels[x],))
    return AxiomResult(name, True)


def _constant(S, name, m, cs, ct):
    ok = int(m[cs]) == ct
    return AxiomResult(name, ok, None if ok else (S.labels[cs],))


def verify_isomorphism(h):
    """Bijectivity plus preservation of every operation and constant.

    The signature is lattice operations, star, arrow, bot, top, the fixpoint
    constant when either side has one, and the modal pair when attached.
    """
    S, T = h.source, h.target
    if (S.fixpoint is None) != (T.fixpoint is None):
        raise SignatureMismatch("fixpoint constant present on one side only")
    if (h.source_modal is None) != (h.target_modal is None):
        raise SignatureMismatch("modal operators attached on one side only")
    m = np.asarray(h.mapping)
    rep = AxiomReport()
    bij = S.n == T.n and len(set(h.mapping)) == S.n
    if bij:
        rep.add(AxiomResult("bijective", True))
    else:
        seen = {}
        w = None
        for i, v in enumerate(h.mapping):
            if v in seen:
                w = (S.labels[seen[v]], S.labels[i])
                break
            seen[v] = i
        rep.add(AxiomResult("bijective", False, w, "sizes differ" if w is None else ""))
    if not (m.min() >= 0 and m.max() < T.n):
        raise ValueError("element map leaves the target carrier")
    rep.add(_binary(S, "meet", m, S.meet, T.meet))
    rep.add(_binary(S, "join", m, S.join, T.join))
    rep.add(_binary(S, "star", m, S.star, T.star))
    rep.add(_binary(S, "arrow", m, S.arrow, T.arrow))
    rep.add(_constant(S, "bot", m, S.bot, T.bot))
    rep.add(_constant(S, "top", m, S.top, T.top))
    if S.fixpoint is not None:
        rep.add(_constant(S, "f", m, S.fixpoint, T.fixpoint))
    if h.source_modal is not None:
        rep.add(_unary(S, "box", m, h.source_modal.box, h.target_modal.box))
        rep.add(_unary(S, "diamond", m, h.source_modal.diamond, h.target_modal.diamond))
    return rep


def _invariants(A):
    idem = (np.diag(A.star) == np.arange(A.n)).tolist()
    return list(zip(A.leq.sum(axis=0).tolist(), A.leq.sum(axis=1).tolist(), idem))


def all_isomorphisms(A, B, modal_a=None, modal_b=None):
    """Yield every isomorphism A -> B (order, star, constants, modal tables)."""
    if A.n != B.n or (A.fixpoint is None) != (B.fixpoint is None):
        return
    if (modal_a is None) != (modal_b is None):
        raise SignatureMismatch("modal operators attached on one side only")
    n = A.n
    la, lb = A.leq, B.leq
    inv_a = _invariants(A)
    inv_b = _invariants(B)
    if sorted(inv_a) != sorted(inv_b):
        return
    order = list(A.lattice.linear_extension)
    la_l, lb_l = la.tolist(), lb.tolist()
    sa, sb = A.star.tolist(), B.star.tolist()
    cand = {a: [b for b in range(n) if inv_b[b] == inv_a[a]] for a in range(n)}
    img = [-1] * n
    used = [False] * n

    def consistent(a, b):
        for a2 in range(n):
            b2 = img[a2]
            if b2 < 0:
                continue
            if la_l[a][a2] != lb_l[b][b2] or la_l[a2][a] != lb_l[b2][b]:
                return False
            s = img[sa[a][a2]]
            if s >= 0 and sb[b][b2] != s:
                return False
        return True

    def finish():
        h = Homomorphism(A, B, img, modal_a, modal_b)
        return h.preserved.passed

    def rec(k):
        if k == n:
            if finish():
                yield tuple(img)
            return
        a = order[k]
        for b in cand[a]:
            if not used[b] and consistent(a, b):
                img[a] = b
                used[b] = True
                yield from rec(k + 1)
                img[a] = -1
                used[b] = False

    yield from rec(0)


def find_isomorphism(A, B, modal_a=None, modal_b=None):
    """First isomorphism A -> B as a Homomorphism, or None."""
    for m in all_isomorphisms(A, B, modal_a, modal_b):
        return Homomorphism(A, B, m, modal_a, modal_b)
    return None


def automorphisms(A):
    return list(all_isomorphisms(A, A))
