"""Finite bounded lattices given by Hasse diagrams.

Elements are stored as integer indices ``0..n-1``; labels are only used at
the I/O boundary.  All tables are read-only numpy arrays.
"""

from functools import cached_property

import numpy as np

from .errors import CyclicCovers, NoBounds, NotALattice, UnknownElement


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def order_closure(n, pairs):
    """Reflexive-transitive closure of ``pairs`` over ``range(n)`` as an n x n bool matrix."""
    rel = np.eye(n, dtype=bool)
    for a, b in pairs:
        rel[a, b] = True
    while True:
        r8 = rel.astype(np.uint8)
        nxt = rel | ((r8 @ r8) > 0)
        if np.array_equal(nxt, rel):
            return rel
        rel = nxt


def transitive_reduce(leq):
    """Cover relation of a partial order: ``out[i, j]`` iff j covers i."""
    leq = np.asarray(leq, dtype=bool)
    lt = leq & ~np.eye(len(leq), dtype=bool)
    l8 = lt.astype(np.uint8)
    return lt & ~((l8 @ l8) > 0)


def _check_partial_order(leq):
    n = len(leq)
    if not np.all(np.diag(leq)):
        raise ValueError("order relation is not reflexive")
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise CyclicCovers(f"elements {i} and {j} lie on a cycle")
    l8 = leq.astype(np.uint8)
    if (((l8 @ l8) > 0) & ~leq).any():
        raise ValueError("order relation is not transitive")


def _bound_table(leq, dsize, labels, what):
    """glb table from ``leq`` (or lub table from ``leq.T``)."""
    n = len(leq)
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        # lower[w, y]: w is below both x and y
        lower = leq[:, x][:, None] & leq
        cand = np.argmax(np.where(lower, dsize[:, None], -1), axis=0)
        ok = np.all(~lower | leq[:, cand], axis=0)
        if not ok.all():
            y = int(np.argmin(ok))
            raise NotALattice(f"{labels[x]} and {labels[y]} have no unique {what}")
        table[x] = cand
    return table


class FiniteLattice:
    """Immutable finite bounded lattice.

    Attributes: ``labels``, ``leq`` (bool n x n), ``meet`` and ``join``
    (int n x n), ``bot`` and ``top``.
    """

    def __init__(self, labels, leq):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("element labels must be distinct")
        leq = np.array(leq, dtype=bool)
        n = len(labels)
        if leq.shape != (n, n):
            raise ValueError(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        if n == 0:
            raise NoBounds("empty carrier")
        _check_partial_order(leq)
        bots = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bots) == 0:
            raise NoBounds("no least element")
        if len(tops) == 0:
            raise NoBounds("no greatest element")
        self.labels = labels
        self.n = n
        self.leq = _frozen(leq)
        self.bot = int(bots[0])
        self.top = int(tops[0])
        down = leq.sum(axis=0)
        up = leq.sum(axis=1)
        self.meet = _frozen(_bound_table(leq, down, labels, "meet"))
        self.join = _frozen(_bound_table(leq.T, up, labels, "join"))
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def from_covers(cls, labels, covers):
        labels = [str(x) for x in labels]
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("element labels must be distinct")
        pairs = []
        for lo, hi in covers:
            for lab in (lo, hi):
                if str(lab) not in index:
                    raise UnknownElement(f"cover refers to unknown element {lab!r}")
            pairs.append((index[str(lo)], index[str(hi)]))
        return cls(labels, order_closure(len(labels), pairs))

    def __repr__(self):
        return f"FiniteLattice({list(self.labels)})"

    def __len__(self):
        return self.n

    def index(self, e):
        """Resolve a label or an index to an index."""
        if isinstance(e, (int, np.integer)) and not isinstance(e, bool):
            if 0 <= e < self.n:
                return int(e)
            raise UnknownElement(f"index {e} out of range")
        try:
            return self._index[str(e)]
        except KeyError:
            raise UnknownElement(f"unknown element {e!r}") from None

    def label(self, i):
        return self.labels[i]

    @cached_property
    def cover_matrix(self):
        return _frozen(transitive_reduce(self.leq))

    @cached_property
    def covers(self):
        return frozenset((int(i), int(j)) for i, j in np.argwhere(self.cover_matrix))

    @cached_property
    def cover_labels(self):
        return sorted((self.labels[i], self.labels[j]) for i, j in self.covers)

    @cached_property
    def linear_extension(self):
        """Indices sorted so that x < y implies x comes first."""
        down = self.leq.sum(axis=0)
        return tuple(sorted(range(self.n), key=lambda i: (int(down[i]), i)))

    @cached_property
    def meet_irreducibles(self):
        return tuple(e for e in range(self.n) if is_meet_irreducible(self, e) and e != self.top)

    @cached_property
    def join_irreducibles(self):
        return tuple(e for e in range(self.n) if _is_join_irreducible(self, e) and e != self.bot)

    def is_chain(self):
        return bool((self.leq | self.leq.T).all())


def build_from_covers(labels, covers):
    """Build a FiniteLattice from labels and (lower, upper) cover pairs."""
    return FiniteLattice.from_covers(labels, covers)


def is_meet_irreducible(L, e):
    """True iff ``meet(x, y) == e`` forces ``x == e`` or ``y == e``."""
    e = L.index(e)
    hit = L.meet == e
    hit[e, :] = False
    hit[:, e] = False
    return not hit.any()


def _is_join_irreducible(L, e):
    hit = L.join == e
    hit[e, :] = False
    hit[:, e] = False
    return not hit.any()
