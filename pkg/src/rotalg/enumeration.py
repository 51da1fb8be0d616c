"""Finite Goedel algebras from forests, and the NM-side representation check.

A forest is stored as a parent map; its canonical string nests one pair of
parentheses per node, children sorted, so two forests are isomorphic iff
their strings agree.  The Goedel algebra of a forest is the lattice of its
root-closed node sets ("downsets"), ordered by inclusion.
"""

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import NotNM
from .lattice import FiniteLattice
from .morphisms import find_isomorphism, verify_isomorphism
from .residuated import ResiduatedAlgebra, is_directly_indecomposable, negation_fixpoints
from .rotation import MODES, eta, rotate, skeleton

DEFAULT_MAX_NODES = 6
DEFAULT_MAX_OPERATOR_SIZE = 12


def env_cap(name, default):
    """Integer cap from the environment (``ROTALG_MAX_NODES`` etc.)."""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value < 0:
        raise ValueError(f"{name} must be non-negative")
    return value


# ----------------------------------------------------------------- forests


@dataclass(frozen=True)
class Forest:
    """Rooted forest on nodes ``0..n-1``; ``parents[i]`` is None for roots."""

    parents: tuple

    def __post_init__(self):
        n = len(self.parents)
        for i, p in enumerate(self.parents):
            if p is not None and not 0 <= p < n:
                raise ValueError(f"node {i} has parent {p} outside the forest")
        for i in range(n):
            seen, j = set(), i
            while j is not None:
                if j in seen:
                    raise ValueError(f"parent map has a cycle through node {i}")
                seen.add(j)
                j = self.parents[j]

    @property
    def n(self):
        return len(self.parents)

    @property
    def roots(self):
        return tuple(i for i, p in enumerate(self.parents) if p is None)

    def children(self, i):
        return tuple(j for j, p in enumerate(self.parents) if p == i)

    def ancestors(self, i):
        """Path from ``i`` up to its root, ``i`` included."""
        out = []
        while i is not None:
            out.append(i)
            i = self.parents[i]
        return out

    @cached_property
    def canonical(self):
        def enc(i):
            return "(" + "".join(sorted(enc(c) for c in self.children(i))) + ")"

        return "".join(sorted((enc(r) for r in self.roots), reverse=True))

    @classmethod
    def from_string(cls, text):
        """Parse a parenthesis string; nodes are numbered in preorder."""
        parents, stack = [], []
        for ch in text:
            if ch == "(":
                parents.append(stack[-1] if stack else None)
                stack.append(len(parents) - 1)
            elif ch == ")":
                if not stack:
                    raise ValueError(f"unbalanced forest string {text!r}")
                stack.pop()
            elif not ch.isspace():
                raise ValueError(f"unexpected character {ch!r} in forest string")
        if stack:
            raise ValueError(f"unbalanced forest string {text!r}")
        return cls(tuple(parents))

    def is_tree(self):
        return len(self.roots) == 1

    def __str__(self):
        return self.canonical or "empty"


def _key(s):
    return (len(s), s)


@lru_cache(maxsize=None)
def _trees(k):
    """Canonical strings of all rooted trees with ``k`` nodes, sorted."""
    return tuple(sorted("(" + f + ")" for f in _forest_strings(k - 1, None)))


@lru_cache(maxsize=None)
def _forest_strings(n, bound):
    """Multisets of trees with ``n`` nodes, largest tree first, each <= bound."""
    if n == 0:
        return ("",)
    out = []
    for k in range(min(n, bound[0]) if bound else n, 0, -1):
        for t in reversed(_trees(k)):
            if bound is not None and _key(t) > bound:
                continue
            for rest in _forest_strings(n - k, _key(t)):
                out.append(t + rest)
    return tuple(out)


def enumerate_forests(n):
    """One forest per isomorphism class on ``n`` nodes, in a fixed order."""
    if n < 0:
        raise ValueError("node count must be non-negative")
    for s in _forest_strings(n, None):
        yield Forest.from_string(s)


def enumerate_trees(n):
    """Single-rooted forests on ``n >= 1`` nodes."""
    if n < 1:
        return
    for s in _trees(n):
        yield Forest.from_string(s)


def forests_up_to(max_nodes, trees_only=False):
    """All forests with ``1..max_nodes`` nodes (no empty forest)."""
    for k in range(1, max_nodes + 1):
        yield from (enumerate_trees(k) if trees_only else enumerate_forests(k))


# ----------------------------------------------------------- downset algebra


def downsets(F):
    """Root-closed node sets of ``F`` as sorted tuples, smallest first."""
    n = F.n
    anc = [sum(1 << a for a in F.ancestors(i)) for i in range(n)]
    masks = [m for m in range(1 << n)
             if all(anc[i] & m == anc[i] for i in range(n) if m >> i & 1)]
    sets = [tuple(i for i in range(n) if m >> i & 1) for m in masks]
    return sorted(sets, key=lambda s: (len(s), s))


def _downset_label(s):
    return "{" + ",".join(map(str, s)) + "}"


def godel_from_forest(F, name=None):
    """Goedel algebra of the downsets of ``F`` (meet = intersection)."""
    sets = downsets(F)
    masks = np.array([sum(1 << i for i in s) for s in sets], dtype=np.int64)
    leq = (masks[:, None] & masks[None, :]) == masks[:, None]
    lattice = FiniteLattice([_downset_label(s) for s in sets], leq)
    return ResiduatedAlgebra(lattice, name=name if name is not None else f"G[{F}]")


# ---------------------------------------------------- NM-side representation


@dataclass(eq=False)
class RepresentationWitness:
    """Outcome of checking that B is (or is not) a rotation of a Goedel algebra."""

    algebra: ResiduatedAlgebra
    directly_indecomposable: bool
    exists: bool
    mode: str = None
    godel: ResiduatedAlgebra = None
    rotation: object = None
    isomorphism: object = None
    report: object = None
    searched: int = 0
    complete: bool = True

    @property
    def passed(self):
        if self.directly_indecomposable:
            return self.exists and self.report is not None and self.report.passed
        return not self.exists


def _strip(A):
    """Same tables without the fixpoint constant."""
    if A.fixpoint is None:
        return A
    return ResiduatedAlgebra(A.lattice, A.star, name=A.name)


def verify_thm_2_4(B, search_cap=None):
    """B is d.i. iff it is NM+(A) or NM-(A) for a d.i. Goedel algebra A.

    For d.i. ``B`` the witness carries ``A = G(B)``, the mode and the
    verified isomorphism eta.  Otherwise every d.i. Goedel algebra of a
    compatible size is generated and rotated, and no rotation may be
    isomorphic to ``B``.  ``search_cap`` bounds the tree size of that search;
    ``complete`` is False on the witness when the cap cut it short.
    """
    if not B.classification.nm:
        raise NotNM(f"expected an NM algebra, got {B.classification.kind}")
    di = bool(is_directly_indecomposable(B))
    fix = negation_fixpoints(B)
    if di:
        if fix and B.fixpoint is None:
            B = B.with_fixpoint(fix[0])
        mode = "plus" if fix else "minus"
        S = skeleton(B)
        R = rotate(S.algebra, mode)
        h = eta(B, S, R)
        return RepresentationWitness(B, True, True, mode, S.algebra, R, h,
                                     verify_isomorphism(h))
    target = _strip(B)
    searched = 0
    complete = True
    for mode in MODES:
        size = (B.n + 1) / 2 if mode == "plus" else (B.n + 2) / 2
        if size != int(size) or size < 2:
            continue
        size = int(size)
        if search_cap is not None and size - 1 > search_cap:
            complete = False
            continue
        for k in range(1, size):
            for F in enumerate_trees(k):
                A = godel_from_forest(F)
                if A.n != size:
                    continue
                searched += 1
                R = rotate(A, mode)
                h = find_isomorphism(target, _strip(R.algebra))
                if h is not None:
                    return RepresentationWitness(B, False, True, mode, A, R, h,
                                                 verify_isomorphism(h), searched)
    return RepresentationWitness(B, False, False, searched=searched, complete=complete)
