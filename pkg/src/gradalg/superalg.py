"""Finite-dimensional Lie superalgebras over cyclotomic numbers.

A :class:`SuperAlgebra` is given by named basis vectors with parities and a
sparse bracket table.  Construction validates super skew-symmetry, the
super Jacobi identity and parity compatibility, so every instance in
circulation is a genuine Lie superalgebra.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Optional, Sequence

from .cyclo import CycNum, ZERO, as_cyc, parse_cyc
from . import linalg

__all__ = [
    "Vec",
    "AlgebraValidationError",
    "NotInvertibleError",
    "SuperAlgebra",
    "LinMap",
    "Subspace",
    "algebra_new",
    "is_automorphism",
    "is_derivation",
]

Vec = dict  # sparse vector: basis index -> CycNum


def vadd(a: Vec, b: Vec, c: CycNum | int = 1) -> Vec:
    """a + c*b, dropping zero entries."""
    out = dict(a)
    for k, v in b.items():
        x = out.get(k, ZERO) + v * c
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def vscale(a: Vec, c) -> Vec:
    c = as_cyc(c)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


class AlgebraValidationError(ValueError):
    """Raised when a bracket table violates a Lie superalgebra identity."""

    def __init__(self, kind: str, witness: tuple, detail: str = "") -> None:
        self.kind = kind
        self.witness = witness
        super().__init__(f"{kind} violated at {witness}" + (f": {detail}" if detail else ""))


class NotInvertibleError(ValueError):
    pass


class SuperAlgebra:
    """Lie superalgebra with a parity-tagged basis and sparse brackets."""

    def __init__(
        self,
        basis: Sequence[str],
        parity: Sequence[int],
        structure: Mapping[tuple[int, int], Mapping[int, object]],
        validate: bool = True,
    ) -> None:
        self.basis = tuple(basis)
        self.parity = tuple(int(p) % 2 for p in parity)
        n = len(self.basis)
        if len(self.parity) != n:
            raise ValueError("one parity per basis vector is required")
        if len(set(self.basis)) != n:
            raise ValueError("basis names must be distinct")
        raw: dict[tuple[int, int], Vec] = {}
        for (i, j), val in structure.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bracket index ({i}, {j}) out of range")
            v = {int(k): as_cyc(c) for k, c in val.items()}
            v = {k: c for k, c in v.items() if c}
            if v:
                raw[(i, j)] = v
        table: dict[tuple[int, int], Vec] = {}
        clashes = []
        for (i, j), v in raw.items():
            if i <= j:
                table[(i, j)] = v
        for i, j in structure:
            if i > j:
                flipped = vscale(raw.get((i, j), {}), -self.sign(i, j))
                if (j, i) in structure:
                    if flipped != raw.get((j, i), {}):
                        clashes.append((i, j))
                elif flipped:
                    table[(j, i)] = flipped
        for (i, j), v in list(table.items()):
            if i != j:
                table[(j, i)] = vscale(v, -self.sign(i, j))
        self._clashes = clashes
        self._table = table
        self.index = {name: i for i, name in enumerate(self.basis)}
        if validate:
            self.validate()

    # -- basic data -----------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def superdim(self) -> tuple[int, int]:
        odd = sum(self.parity)
        return self.dim - odd, odd

    def sign(self, i: int, j: int) -> int:
        return -1 if (self.parity[i] and self.parity[j]) else 1

    def basis_bracket(self, i: int, j: int) -> Vec:
        return self._table.get((i, j), {})

    def nonzero_pairs(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with i <= j and a nonzero bracket."""
        return sorted(k for k in self._table if k[0] <= k[1])

    def vec(self, name: str, coeff=1) -> Vec:
        return {self.index[name]: as_cyc(coeff)}

    def bracket(self, x: Vec, y: Vec) -> Vec:
        for v in (x, y):
            if any(not (0 <= k < self.dim) for k in v):
                raise ValueError("vector index outside the algebra")
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                t = self._table.get((i, j))
                if t:
                    out = vadd(out, t, a * b)
        return out

    def vec_parity(self, x: Vec) -> Optional[int]:
        ps = {self.parity[k] for k in x}
        return ps.pop() if len(ps) == 1 else None

    # -- validation -----------------------------------------------------
    def validate(self) -> None:
        n = self.dim
        for i, j in self._clashes:
            raise AlgebraValidationError(
                "super skew-symmetry", (self.basis[i], self.basis[j]), "stored orientations disagree"
            )
        for i in range(n):
            if not self.parity[i] and self._table.get((i, i)):
                raise AlgebraValidationError(
                    "super skew-symmetry", (self.basis[i], self.basis[i]), "even vector with nonzero self-bracket"
                )
        for (i, j), v in self._table.items():
            p = (self.parity[i] + self.parity[j]) % 2
            for k in v:
                if self.parity[k] != p:
                    raise AlgebraValidationError(
                        "parity compatibility", (self.basis[i], self.basis[j]), f"component along {self.basis[k]}"
                    )
        bad = self.jacobi_witness()
        if bad is not None:
            raise AlgebraValidationError("super Jacobi identity", tuple(self.basis[t] for t in bad))

    def jacobiator(self, i: int, j: int, k: int) -> Vec:
        p = self.parity
        x, y, z = {i: CycNum(1)}, {j: CycNum(1)}, {k: CycNum(1)}
        s1 = -1 if p[i] and p[k] else 1
        s2 = -1 if p[j] and p[i] else 1
        s3 = -1 if p[k] and p[j] else 1
        out = vscale(self.bracket(x, self.bracket(y, z)), s1)
        out = vadd(out, self.bracket(y, self.bracket(z, x)), s2)
        out = vadd(out, self.bracket(z, self.bracket(x, y)), s3)
        return out

    def jacobi_witness(self) -> Optional[tuple[int, int, int]]:
        """First basis triple violating super Jacobi, or ``None``."""
        n = self.dim
        if not self._table:
            return None
        for i, j, k in combinations_with_replacement(range(n), 3):
            if self.jacobiator(i, j, k):
                return (i, j, k)
        return None

    # -- subspaces ------------------------------------------------------
    def center(self) -> "Subspace":
        n = self.dim
        rows = []
        for j in range(n):
            for k in range(n):
                rows.append([self._table.get((i, j), {}).get(k, ZERO) for i in range(n)])
        rows = [r for r in rows if any(r)]
        return Subspace(n, linalg.kernel(rows, n) if rows else linalg.identity(n))

    def derived(self) -> "Subspace":
        n = self.dim
        rows = [[v.get(k, ZERO) for k in range(n)] for v in self._table.values()]
        return Subspace.span(n, rows)

    def ad(self, x: Vec) -> "LinMap":
        cols = [self.bracket(x, {j: CycNum(1)}) for j in range(self.dim)]
        return LinMap(self.dim, cols)

    # -- change of basis ------------------------------------------------
    def transport(self, P: "LinMap", names: Sequence[str]) -> "SuperAlgebra":
        """The same algebra written in the basis given by the columns of ``P``."""
        Pinv = P.inverse()
        par = []
        for c in P.cols:
            pc = self.vec_parity(c)
            if pc is None:
                raise ValueError("new basis vectors must be homogeneous")
            par.append(pc)
        struct = {}
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                b = self.bracket(P.cols[i], P.cols[j])
                if b:
                    struct[(i, j)] = Pinv.apply(b)
        return SuperAlgebra(names, par, struct)

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        br = []
        for i, j in self.nonzero_pairs():
            v = self._table[(i, j)]
            br.append({"i": i, "j": j, "value": [[str(v[k]), k] for k in sorted(v)]})
        return {"basis": list(self.basis), "parity": list(self.parity), "brackets": br}

    @classmethod
    def from_json(cls, data: Mapping) -> "SuperAlgebra":
        struct = {}
        for b in data.get("brackets", []):
            struct[(int(b["i"]), int(b["j"]))] = {int(k): parse_cyc(str(c)) for c, k in b["value"]}
        return cls(data["basis"], data["parity"], struct)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return (self.basis, self.parity, self._table) == (other.basis, other.parity, other._table)

    def __repr__(self) -> str:
        e, o = self.superdim
        return f"SuperAlgebra(dim={e}|{o})"


def algebra_new(basis, parity, structure) -> SuperAlgebra:
    return SuperAlgebra(basis, parity, structure)


class LinMap:
    """Linear endomorphism given by the images of the basis vectors."""

    __slots__ = ("dim", "cols")

    def __init__(self, dim: int, cols: Sequence[Vec]) -> None:
        if len(cols) != dim:
            raise ValueError("one image per basis vector is required")
        self.dim = dim
        self.cols = tuple({k: as_cyc(v) for k, v in c.items() if as_cyc(v)} for c in cols)
        for c in self.cols:
            if any(not (0 <= k < dim) for k in c):
                raise ValueError("image outside the space")

    @classmethod
    def identity(cls, n: int) -> "LinMap":
        return cls(n, [{i: CycNum(1)} for i in range(n)])

    @classmethod
    def from_matrix(cls, M: linalg.Mat) -> "LinMap":
        n = len(M)
        return cls(n, [{r: M[r][c] for r in range(n) if M[r][c]} for c in range(n)])

    @classmethod
    def monomial(cls, perm: Sequence[int], scalars: Sequence) -> "LinMap":
        """b_i -> scalars[i] * b_{perm[i]}."""
        return cls(len(perm), [{perm[i]: as_cyc(scalars[i])} for i in range(len(perm))])

    def matrix(self) -> linalg.Mat:
        n = self.dim
        return [[self.cols[c].get(r, ZERO) for c in range(n)] for r in range(n)]

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for k, a in v.items():
            out = vadd(out, self.cols[k], a)
        return out

    def __call__(self, v: Vec) -> Vec:
        return self.apply(v)

    def compose(self, other: "LinMap") -> "LinMap":
        """self o other."""
        return LinMap(self.dim, [self.apply(c) for c in other.cols])

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return self.compose(other)

    def is_invertible(self) -> bool:
        return linalg.is_invertible(self.matrix())

    def inverse(self) -> "LinMap":
        try:
            return LinMap.from_matrix(linalg.inverse(self.matrix()))
        except ValueError as exc:
            raise NotInvertibleError("linear map is not invertible") from exc

    def preserves_parity(self, parity: Sequence[int]) -> bool:
        return all(parity[k] == parity[i] for i, c in enumerate(self.cols) for k in c)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinMap) and self.cols == other.cols

    def __hash__(self) -> int:
        return hash(tuple(tuple(sorted(c.items())) for c in self.cols))

    def to_json(self) -> list:
        return [[[str(c[k]), k] for k in sorted(c)] for c in self.cols]

    def __repr__(self) -> str:
        return f"LinMap(dim={self.dim})"


class Subspace:
    """Subspace of k^n stored as a reduced row-echelon basis."""

    def __init__(self, n: int, rows: linalg.Mat) -> None:
        self.n = n
        R, _ = linalg.rref(rows) if rows else ([], [])
        self.rows = [tuple(r) for r in R]

    @classmethod
    def span(cls, n: int, vectors: Iterable) -> "Subspace":
        rows = []
        for v in vectors:
            if isinstance(v, dict):
                v = [v.get(k, ZERO) for k in range(n)]
            rows.append([as_cyc(x) for x in v])
        return cls(n, rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        if isinstance(v, dict):
            v = [v.get(k, ZERO) for k in range(self.n)]
        return linalg.rank([list(r) for r in self.rows] + [list(v)]) == self.dim

    def image(self, f: LinMap) -> "Subspace":
        vecs = [f.apply({k: c for k, c in enumerate(r) if c}) for r in self.rows]
        return Subspace.span(self.n, vecs)

    def basis_vectors(self) -> list[Vec]:
        return [{k: c for k, c in enumerate(r) if c} for r in self.rows]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.n})"


def is_automorphism(A: SuperAlgebra, f: LinMap) -> bool:
    """Parity-preserving invertible map respecting all basis brackets."""
    if f.dim != A.dim:
        raise ValueError("map dimension does not match the algebra")
    if not f.is_invertible():
        raise NotInvertibleError("automorphism candidate is not invertible")
    if not f.preserves_parity(A.parity):
        return False
    return automorphism_witness(A, f) is None


def automorphism_witness(A: SuperAlgebra, f: LinMap) -> Optional[tuple[int, int]]:
    n = A.dim
    for i in range(n):
        for j in range(i, n):
            lhs = f.apply(A.basis_bracket(i, j))
            rhs = A.bracket(f.cols[i], f.cols[j])
            if lhs != rhs:
                return (i, j)
    return None


def is_derivation(A: SuperAlgebra, d: LinMap, parity: int = 0) -> bool:
    """Graded Leibniz rule d[x,y] = [dx,y] + (-1)^{|d||x|}[x,dy] on basis pairs."""
    if d.dim != A.dim:
        raise ValueError("map dimension does not match the algebra")
    for i, c in enumerate(d.cols):
        for k in c:
            if A.parity[k] != (A.parity[i] + parity) % 2:
                return False
    n = A.dim
    for i in range(n):
        s = -1 if (parity and A.parity[i]) else 1
        for j in range(n):
            lhs = d.apply(A.basis_bracket(i, j))
            rhs = vadd(A.bracket(d.cols[i], {j: CycNum(1)}), A.bracket({i: CycNum(1)}, d.cols[j]), s)
            if lhs != rhs:
                return False
    return True
