"""Finitely generated abelian groups in invariant-factor form.

Groups are ``Z^a x Z_{d1} x ... x Z_{dk}`` with ``d1 | d2 | ... | dk``.
Quotients of free groups are reduced with an integer Smith normal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

__all__ = [
    "smith_normal_form",
    "FgAbelianGroup",
    "GroupElem",
    "Hom",
    "group_from_presentation",
    "isomorphic",
    "is_torsion_free",
]

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(rel: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ rel @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries and each nonzero diagonal entry divides the next one.  Pivots
    are chosen with minimal absolute value.
    """
    rows = len(rel)
    cols = ncols if ncols is not None else (len(rel[0]) if rows else 0)
    A = [list(map(int, r)) for r in rel]
    for r in A:
        if len(r) != cols:
            raise ValueError("ragged relation matrix")
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst: int, src: int, c: int) -> None:  # row dst += c * row src
        for M in (A, U):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += c * rs[k]

    def add_col(dst: int, src: int, c: int) -> None:
        for M in (A, V):
            for r in M:
                r[dst] += c * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
                _, ci, cj = min(cand)
                swap_rows(t, ci)
                swap_cols(t, cj)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            for M in (A, U):
                M[t] = [-x for x in M[t]]
        t += 1
    return U, A, V


def _canonical_torsion(orders: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Invariant factors of a product of cyclic groups; order 0 means Z."""
    orders = [int(d) for d in orders]
    free = sum(1 for d in orders if d == 0)
    fin = [abs(d) for d in orders if d != 0]
    if not fin:
        return free, ()
    diag = [[d if i == j else 0 for j in range(len(fin))] for i, d in enumerate(fin)]
    _, D, _ = smith_normal_form(diag)
    inv = [D[i][i] for i in range(len(fin)) if D[i][i] > 1]
    return free, tuple(sorted(inv))


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank x Z_{torsion[0]} x ...`` with a divisibility chain."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be at least 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, free_rank: int, orders: Iterable[int]) -> "FgAbelianGroup":
        """Canonicalize ``Z^free_rank x prod Z_d``; factors 1 are dropped."""
        extra, tors = _canonical_torsion(orders)
        return cls(free_rank + extra, tors)

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def zero(self) -> "GroupElem":
        return GroupElem(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def elem(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> "GroupElem":
        return GroupElem(self, tuple(free), tuple(torsion))

    def gen(self, i: int) -> "GroupElem":
        v = [0] * self.ngens
        v[i] = 1
        return self.from_vector(v)

    def from_vector(self, v: Sequence[int]) -> "GroupElem":
        a = self.free_rank
        return GroupElem(self, tuple(v[:a]), tuple(v[a:]))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FgAbelianGroup":
        return cls(int(data["free_rank"]), tuple(data.get("torsion", ())))

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        i = 0
        tors = list(self.torsion)
        while i < len(tors):
            j = i
            while j < len(tors) and tors[j] == tors[i]:
                j += 1
            e = j - i
            parts.append(f"Z_{tors[i]}" + (f"^{e}" if e > 1 else ""))
            i = j
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElem:
    """Element of an :class:`FgAbelianGroup`, reduced componentwise."""

    group: FgAbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]
    _h: int = field(default=0, compare=False, repr=False)

    def __post_init__(self) -> None:
        g = self.group
        if len(self.free) != g.free_rank or len(self.torsion) != len(g.torsion):
            raise ValueError("element shape does not match its group")
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", tuple(int(x) % d for x, d in zip(self.torsion, g.torsion)))
        object.__setattr__(self, "_h", hash((g, self.free, self.torsion)))

    def __hash__(self) -> int:
        return self._h

    def _check(self, other: "GroupElem") -> None:
        if not isinstance(other, GroupElem) or other.group != self.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: "GroupElem") -> "GroupElem":
        self._check(other)
        return GroupElem(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        return self + (-other)

    def __rmul__(self, n: int) -> "GroupElem":
        return GroupElem(self.group, tuple(n * a for a in self.free), tuple(n * a for a in self.torsion))

    def scalar_mul(self, n: int) -> "GroupElem":
        return n * self

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def order(self) -> float:
        """Smallest n >= 1 with n*x = 0, or ``math.inf``."""
        if any(self.free):
            return math.inf
        o = 1
        for a, d in zip(self.torsion, self.group.torsion):
            o = math.lcm(o, d // math.gcd(a, d))
        return o

    def vector(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def sort_key(self) -> tuple[int, ...]:
        return self.vector()

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.free)) + "; " + ", ".join(map(str, self.torsion)) + ")"


def group_from_presentation(
    num_generators: int, relations: Sequence[Sequence[int]]
) -> tuple[FgAbelianGroup, list[GroupElem]]:
    """Quotient of ``Z^num_generators`` by the span of ``relations``.

    Returns the canonical group and the images of the standard generators.
    """
    n = num_generators
    for r in relations:
        if len(r) != n:
            raise ValueError(f"relation {list(r)} does not have length {n}")
    rel = [list(r) for r in relations if any(r)]
    _, D, V = smith_normal_form(rel, ncols=n)
    diag = [D[i][i] if i < len(rel) else 0 for i in range(n)]
    free_cols = [j for j in range(n) if diag[j] == 0]
    tors_cols = [j for j in range(n) if diag[j] > 1]
    G = FgAbelianGroup(len(free_cols), tuple(diag[j] for j in tors_cols))
    images = [G.elem([V[i][j] for j in free_cols], [V[i][j] for j in tors_cols]) for i in range(n)]
    return G, images


def isomorphic(g1: FgAbelianGroup, g2: FgAbelianGroup) -> bool:
    return g1.free_rank == g2.free_rank and g1.torsion == g2.torsion


def is_torsion_free(g: FgAbelianGroup) -> bool:
    return not g.torsion


@dataclass(frozen=True)
class Hom:
    """Homomorphism given by the images of the source's standard generators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    images: tuple[GroupElem, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source.ngens:
            raise ValueError("one image per generator is required")
        for x in self.images:
            if x.group != self.target:
                raise ValueError("image outside the target group")
        a = self.source.free_rank
        for d, x in zip(self.source.torsion, self.images[a:]):
            if not (d * x).is_zero():
                raise ValueError("map is not well defined on the torsion part")

    def __call__(self, x: GroupElem) -> GroupElem:
        if x.group != self.source:
            raise ValueError("element outside the source group")
        out = self.target.zero()
        for c, img in zip(x.vector(), self.images):
            if c:
                out = out + c * img
        return out

    def is_surjective(self) -> bool:
        t = self.target
        rels = [list(x.vector()) for x in self.images]
        a = t.free_rank
        for i, d in enumerate(t.torsion):
            v = [0] * t.ngens
            v[a + i] = d
            rels.append(v)
        q, _ = group_from_presentation(t.ngens, rels)
        return q.is_trivial()
