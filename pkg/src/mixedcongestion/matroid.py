"""Matroid strategy spaces: independence oracles, basis enumeration and greedy.

Four representations are supported (uniform, partition, graphic and an
explicit list of bases). Elements are resource ids; ``ground`` fixes the
order used for tie-breaking and for lexicographic basis order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from mixedcongestion.errors import CapExceededError, GameError

#: default bound on the ground-set size for exhaustive basis enumeration
ENUMERATION_CAP = 16
#: explicit basis lists are checked for the exchange property up to this size
EXCHANGE_CHECK_CAP = 10


def exchange_property_holds(bases: Iterable[Iterable[Hashable]]) -> bool:
    """Check the basis exchange axiom on an explicit family of sets."""
    fam = {frozenset(b) for b in bases}
    if not fam:
        return False
    if len({len(b) for b in fam}) != 1:
        return False
    for b1 in fam:
        for b2 in fam:
            for x in b1 - b2:
                rest = b1 - {x}
                if not any(rest | {y} in fam for y in b2 - b1):
                    return False
    return True


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, v):
        self.parent.setdefault(v, v)
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, u, v) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[ru] = rv
        return True


@dataclass(frozen=True)
class MatroidHandle:
    """Immutable matroid over an ordered ground set of resource ids.

    Use the constructors :meth:`uniform`, :meth:`partition`,
    :meth:`graphic` and :meth:`explicit` rather than the raw fields.
    """

    kind: str
    ground: tuple[str, ...]
    k: int = 0
    blocks: tuple[tuple[str, ...], ...] = ()
    ranks: tuple[int, ...] = ()
    edges: tuple[tuple[Hashable, Hashable, str], ...] = ()
    bases: tuple[frozenset, ...] = ()

    @classmethod
    def uniform(cls, ground: Sequence[str], k: int) -> "MatroidHandle":
        return cls("uniform", tuple(ground), k=int(k))

    @classmethod
    def partition(cls, blocks: Sequence[Sequence[str]], ranks: Sequence[int]) -> "MatroidHandle":
        blocks = tuple(tuple(b) for b in blocks)
        ground = tuple(e for b in blocks for e in b)
        return cls("partition", ground, blocks=blocks, ranks=tuple(int(r) for r in ranks))

    @classmethod
    def graphic(cls, edges: Sequence[tuple[Hashable, Hashable, str]]) -> "MatroidHandle":
        """Multigraph with edges ``(u, v, resource_id)``; bases are spanning trees."""
        edges = tuple((u, v, lbl) for u, v, lbl in edges)
        return cls("graphic", tuple(lbl for _, _, lbl in edges), edges=edges)

    @classmethod
    def explicit(cls, bases: Iterable[Iterable[str]], ground: Sequence[str] | None = None) -> "MatroidHandle":
        bases = tuple(frozenset(b) for b in bases)
        if ground is None:
            seen = []
            for b in bases:
                for e in sorted(b):
                    if e not in seen:
                        seen.append(e)
            ground = seen
        return cls("explicit_bases", tuple(ground), bases=bases)

    def __post_init__(self):
        if self.kind not in ("uniform", "partition", "graphic", "explicit_bases"):
            raise GameError(f"unknown matroid kind {self.kind!r}")

    # -- helpers -----------------------------------------------------------
    @cached_property
    def position(self) -> dict[str, int]:
        return {e: k for k, e in enumerate(self.ground)}

    @cached_property
    def _edge_of(self) -> dict[str, tuple]:
        return {lbl: (u, v) for u, v, lbl in self.edges}

    @cached_property
    def _block_of(self) -> dict[str, int]:
        return {e: k for k, b in enumerate(self.blocks) for e in b}

    @cached_property
    def _basis_set(self) -> frozenset:
        return frozenset(self.bases)

    def _check_elements(self, s) -> None:
        for e in s:
            if e not in self.position:
                raise GameError(f"element {e!r} is not in the ground set")

    def sorted_elements(self, s: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(s, key=self.position.__getitem__))

    # -- oracles -------------------------------------------------------------
    def is_independent(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        self._check_elements(s)
        if self.kind == "uniform":
            return len(s) <= self.k
        if self.kind == "partition":
            used = [0] * len(self.blocks)
            for e in s:
                used[self._block_of[e]] += 1
            return all(u <= r for u, r in zip(used, self.ranks))
        if self.kind == "graphic":
            uf = _UnionFind()
            return all(uf.union(*self._edge_of[e]) for e in s)
        return any(s <= b for b in self.bases)

    def rank(self) -> int:
        return self._rank

    @cached_property
    def _rank(self) -> int:
        if self.kind == "uniform":
            return min(self.k, len(self.ground))
        if self.kind == "partition":
            return sum(min(r, len(b)) for r, b in zip(self.ranks, self.blocks))
        if self.kind == "graphic":
            uf = _UnionFind()
            return sum(1 for u, v, _ in self.edges if uf.union(u, v))
        return len(self.bases[0]) if self.bases else 0

    def is_basis(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        if any(e not in self.position for e in s):
            return False
        if self.kind == "explicit_bases":
            return s in self._basis_set
        return len(s) == self.rank() and self.is_independent(s)

    def basis_count(self) -> int:
        if self.kind == "uniform":
            return math.comb(len(self.ground), self.rank())
        if self.kind == "partition":
            return math.prod(math.comb(len(b), min(r, len(b))) for r, b in zip(self.ranks, self.blocks))
        if self.kind == "explicit_bases":
            return len(set(self.bases))
        return len(self.enumerate_bases())

    def enumerate_bases(self, cap: int = ENUMERATION_CAP) -> list[frozenset]:
        """All bases, ordered lexicographically by ground position."""
        if self.kind != "explicit_bases" and len(self.ground) > cap:
            raise CapExceededError(
                f"ground set of {len(self.ground)} elements exceeds enumeration cap {cap}")
        return list(self._bases_sorted)

    @cached_property
    def _bases_sorted(self) -> tuple[frozenset, ...]:
        pos = self.position
        if self.kind == "explicit_bases":
            found = {tuple(sorted(pos[e] for e in b)) for b in self.bases}
        elif self.kind == "uniform":
            found = set(itertools.combinations(range(len(self.ground)), self.rank()))
        elif self.kind == "partition":
            per_block = [itertools.combinations(sorted(pos[e] for e in b), min(r, len(b)))
                         for b, r in zip(self.blocks, self.ranks)]
            found = {tuple(sorted(itertools.chain.from_iterable(c)))
                     for c in itertools.product(*per_block)}
        else:
            found = {c for c in itertools.combinations(range(len(self.ground)), self.rank())
                     if self.is_independent(self.ground[k] for k in c)}
        return tuple(frozenset(self.ground[k] for k in c) for c in sorted(found))

    # -- validation ------------------------------------------------------------
    @cached_property
    def exchange_verified(self) -> bool | None:
        """For explicit bases: result of the exchange check, ``None`` if skipped."""
        if self.kind != "explicit_bases":
            return True
        if len(self.ground) > EXCHANGE_CHECK_CAP:
            return None
        return exchange_property_holds(self.bases)

    def problems(self) -> list[str]:
        out = []
        if len(set(self.ground)) != len(self.ground):
            out.append("matroid ground set has duplicates")
        if self.kind == "uniform" and not 0 <= self.k <= len(self.ground):
            out.append(f"uniform rank {self.k} outside [0, {len(self.ground)}]")
        elif self.kind == "partition":
            if len(self.blocks) != len(self.ranks):
                out.append("partition: number of ranks differs from number of blocks")
            for b, r in zip(self.blocks, self.ranks):
                if not 0 <= r <= len(b):
                    out.append(f"partition: rank {r} outside [0, {len(b)}] for block {list(b)}")
        elif self.kind == "graphic":
            uf = _UnionFind()
            for u, v, _ in self.edges:
                uf.union(u, v)
            roots = {uf.find(v) for u, w, _ in self.edges for v in (u, w)}
            if len(roots) > 1:
                out.append("graphic: graph is not connected")
        elif self.kind == "explicit_bases":
            if not self.bases:
                out.append("explicit_bases: no bases")
            elif len({len(b) for b in self.bases}) != 1:
                out.append("explicit_bases: bases of different cardinality")
            elif self.exchange_verified is False:
                out.append("explicit_bases: basis exchange property fails")
            if any(e not in self.position for b in self.bases for e in b):
                out.append("explicit_bases: basis element outside ground set")
        return out

    # -- optimisation ---------------------------------------------------------
    def greedy_min_basis(self, weights: Mapping[str, Fraction],
                         prefer: Iterable[str] = ()) -> frozenset:
        """Minimum-weight basis by the matroid greedy algorithm.

        Ties are broken first in favour of elements of ``prefer`` and then by
        ground order, which makes the result deterministic.
        """
        prefer = frozenset(prefer)
        pos = self.position
        order = sorted(self.ground, key=lambda e: (weights[e], e not in prefer, pos[e]))
        if self.kind == "explicit_bases":
            chosen: list[str] = []
            for e in order:
                if self.is_independent(chosen + [e]):
                    chosen.append(e)
            return frozenset(chosen)
        chosen = []
        target = self.rank()
        if self.kind == "graphic":
            uf = _UnionFind()
            for e in order:
                if uf.union(*self._edge_of[e]):
                    chosen.append(e)
                    if len(chosen) == target:
                        break
            return frozenset(chosen)
        for e in order:
            if self.is_independent(chosen + [e]):
                chosen.append(e)
                if len(chosen) == target:
                    break
        return frozenset(chosen)


def greedy_min_basis(m: MatroidHandle, w: Mapping[str, Fraction]) -> frozenset:
    return m.greedy_min_basis(w)


def is_independent(m: MatroidHandle, s: Iterable[str]) -> bool:
    return m.is_independent(s)


def enumerate_bases(m: MatroidHandle, cap: int = ENUMERATION_CAP) -> list[frozenset]:
    return m.enumerate_bases(cap)


class Lemma1Result(NamedTuple):
    holds: bool
    witness: frozenset | None
    greedy: frozenset


def lemma1_verify(m: MatroidHandle, w: Mapping[str, Fraction],
                  cap: int = ENUMERATION_CAP) -> Lemma1Result:
    """Check by brute force that a min-sum basis also minimises the max weight.

    ``witness`` is a basis whose largest weight is strictly below that of
    the greedy min-sum basis; it should never exist.
    """
    greedy = m.greedy_min_basis(w)
    top = max((w[e] for e in greedy), default=Fraction(0))
    for b in m.enumerate_bases(cap):
        if max((w[e] for e in b), default=Fraction(0)) < top:
            return Lemma1Result(False, b, greedy)
    return Lemma1Result(True, None, greedy)
