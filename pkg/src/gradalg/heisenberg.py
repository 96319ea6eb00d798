"""Heisenberg superalgebras, their twisted versions and useful bases.

Basis conventions (index order matters, degree tables rely on it):

* ``heisenberg(k, m)``: ``z, e1, e1^, ..., ek, ek^ | w1, ..., wm``
* ``twisted(p)``: ``z, u, e1, e1^, ..., ek, ek^ | w1, w1^, ..., wr, wr^,
  eta1, ..., eta_{m-2r}``

with ``[e_i, e_i^] = lambda_i z``, ``[u, e_i] = lambda_i e_i^``,
``[u, e_i^] = -lambda_i e_i``, ``[u, w_j] = kappa_j w_j^``,
``[u, w_j^] = -kappa_j w_j`` and ``[x, x] = z`` for every odd basis vector.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Sequence

from .cyclo import CycNum, I, ONE, SQRT2, SQRT_I, ZERO, as_cyc, sqrt_cyc, zeta, _to_basis, _lcm
from . import linalg
from .superalg import LinMap, SuperAlgebra, is_derivation

__all__ = [
    "TwistParams",
    "heisenberg",
    "twisted",
    "Basis",
    "toral_basis",
    "paired_basis",
    "skew_normal_form",
    "twisting_derivation",
    "canonical_kappa",
    "NonSplitError",
    "spectrum",
    "random_skew_instance",
]


@dataclass(frozen=True)
class TwistParams:
    """Data of a twisted Heisenberg superalgebra: n = 2k+1, odd dimension m."""

    k: int
    r: int
    m: int
    lam: tuple[CycNum, ...] = ()
    kappa: tuple[CycNum, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", tuple(as_cyc(x) for x in self.lam))
        object.__setattr__(self, "kappa", tuple(as_cyc(x) for x in self.kappa))
        if min(self.k, self.r, self.m) < 0:
            raise ValueError("k, r, m must be nonnegative")
        if 2 * self.r > self.m:
            raise ValueError("need 2r <= m")
        if len(self.lam) != self.k or len(self.kappa) != self.r:
            raise ValueError("need k lambdas and r kappas")
        if any(x.is_zero() for x in self.lam + self.kappa):
            raise ValueError("twisting scalars must be nonzero")

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def dim(self) -> int:
        return 2 * self.k + 2 + self.m

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "m": self.m,
            "lambda": [str(x) for x in self.lam],
            "kappa": [str(x) for x in self.kappa],
        }

    @classmethod
    def from_json(cls, d: dict) -> "TwistParams":
        from .cyclo import parse_cyc

        return cls(
            int(d["k"]),
            int(d["r"]),
            int(d["m"]),
            tuple(parse_cyc(str(x)) for x in d.get("lambda", ())),
            tuple(parse_cyc(str(x)) for x in d.get("kappa", ())),
        )


def heisenberg(k: int, m: int) -> SuperAlgebra:
    """H_{2k+1, m} on the basis z, e_i, e_i^ | w_j."""
    if k < 0 or m < 0:
        raise ValueError("k and m must be nonnegative")
    names = ["z"]
    for i in range(1, k + 1):
        names += [f"e{i}", f"e{i}^"]
    names += [f"w{j}" for j in range(1, m + 1)]
    parity = [0] * (2 * k + 1) + [1] * m
    struct = {}
    for i in range(k):
        struct[(1 + 2 * i, 2 + 2 * i)] = {0: 1}
    for j in range(m):
        a = 2 * k + 1 + j
        struct[(a, a)] = {0: 1}
    return SuperAlgebra(names, parity, struct)


def _twisted_names(p: TwistParams) -> list[str]:
    names = ["z", "u"]
    for i in range(1, p.k + 1):
        names += [f"e{i}", f"e{i}^"]
    for j in range(1, p.r + 1):
        names += [f"w{j}", f"w{j}^"]
    names += [f"eta{t}" for t in range(1, p.m - 2 * p.r + 1)]
    return names


def twisted(p: TwistParams) -> SuperAlgebra:
    """The twisted Heisenberg superalgebra with parameters ``p``."""
    names = _twisted_names(p)
    k = p.k
    parity = [0] * (2 * k + 2) + [1] * p.m
    struct: dict = {}
    for i, lam in enumerate(p.lam):
        e, eh = 2 + 2 * i, 3 + 2 * i
        struct[(e, eh)] = {0: lam}
        struct[(1, e)] = {eh: lam}
        struct[(1, eh)] = {e: -lam}
    base = 2 * k + 2
    for j, kap in enumerate(p.kappa):
        w, wh = base + 2 * j, base + 2 * j + 1
        struct[(1, w)] = {wh: kap}
        struct[(1, wh)] = {w: -kap}
    for a in range(base, base + p.m):
        struct[(a, a)] = {0: 1}
    return SuperAlgebra(names, parity, struct)


@dataclass(frozen=True)
class Basis:
    """A named basis of a twisted algebra and the algebra rewritten in it."""

    names: tuple[str, ...]
    change: LinMap  # columns: new vectors in construction coordinates
    algebra: SuperAlgebra = field(compare=False)


def _eta_block(p: TwistParams, s: int, names: list[str], cols: list[dict]) -> None:
    base = 2 * p.k + 2 + 2 * p.r
    free = p.m - 2 * p.r
    if s < 0 or 2 * s > free:
        raise ValueError(f"s={s} out of range for m-2r={free}")
    inv2 = SQRT2.inv()
    for i in range(s):
        a, b = base + 2 * i, base + 2 * i + 1
        names.append(f"p{i + 1}")
        cols.append({a: inv2, b: I * inv2})
    for i in range(s):
        a, b = base + 2 * i, base + 2 * i + 1
        names.append(f"q{i + 1}")
        cols.append({a: inv2, b: -I * inv2})
    for h in range(free - 2 * s):
        names.append(f"z{h + 1}")
        cols.append({base + 2 * s + h: ONE})


def _reorder_pq(names: list[str], cols: list[dict], start: int, s: int) -> None:
    # interleave p_i, q_i
    ps = list(zip(names[start : start + s], cols[start : start + s]))
    qs = list(zip(names[start + s : start + 2 * s], cols[start + s : start + 2 * s]))
    inter = [x for pair in zip(ps, qs) for x in pair]
    names[start : start + 2 * s] = [a for a, _ in inter]
    cols[start : start + 2 * s] = [b for _, b in inter]


def paired_basis(A: SuperAlgebra, p: TwistParams, s: int) -> Basis:
    """Basis z, u, e_i, e_i^, w_j, w_j^, p_t, q_t, z_h (used by the first family)."""
    names = list(A.basis[: 2 * p.k + 2 + 2 * p.r])
    cols = [{i: ONE} for i in range(len(names))]
    start = len(names)
    _eta_block(p, s, names, cols)
    _reorder_pq(names, cols, start, s)
    P = LinMap(A.dim, cols)
    return Basis(tuple(names), P, A.transport(P, names))


def toral_basis(A: SuperAlgebra, p: TwistParams, s: int) -> Basis:
    """Basis z, u, u_i, v_i | f_j, g_j, p_t, q_t, z_h diagonalizing ad u."""
    names = ["z", "u"]
    cols: list[dict] = [{0: ONE}, {1: ONE}]
    c = (SQRT2 * SQRT_I).inv()  # 1/sqrt(2i)
    for i in range(p.k):
        e, eh = 2 + 2 * i, 3 + 2 * i
        names += [f"u{i + 1}", f"v{i + 1}"]
        cols += [{e: c, eh: I * c}, {e: c, eh: -I * c}]
    inv2 = SQRT2.inv()
    base = 2 * p.k + 2
    for j in range(p.r):
        w, wh = base + 2 * j, base + 2 * j + 1
        names += [f"f{j + 1}", f"g{j + 1}"]
        cols += [{w: inv2, wh: I * inv2}, {w: inv2, wh: -I * inv2}]
    start = len(names)
    _eta_block(p, s, names, cols)
    _reorder_pq(names, cols, start, s)
    P = LinMap(A.dim, cols)
    B = A.transport(P, names)
    _check_toral(B, p, s)
    return Basis(tuple(names), P, B)


def _check_toral(B: SuperAlgebra, p: TwistParams, s: int) -> None:
    """Post-condition: ad u is diagonal with the expected brackets."""
    ix = B.index
    z = {ix["z"]: ONE}

    def br(a: str, b: str) -> dict:
        return B.bracket({ix[a]: ONE}, {ix[b]: ONE})

    expected = []
    for i, lam in enumerate(p.lam, 1):
        expected += [
            (("u", f"u{i}"), {ix[f"u{i}"]: -I * lam}),
            (("u", f"v{i}"), {ix[f"v{i}"]: I * lam}),
            ((f"u{i}", f"v{i}"), {ix["z"]: -lam}),
        ]
    for j, kap in enumerate(p.kappa, 1):
        expected += [
            (("u", f"f{j}"), {ix[f"f{j}"]: -I * kap}),
            (("u", f"g{j}"), {ix[f"g{j}"]: I * kap}),
            ((f"f{j}", f"g{j}"), z),
        ]
    for t in range(1, s + 1):
        expected.append(((f"p{t}", f"q{t}"), z))
    for h in range(1, p.m - 2 * p.r - 2 * s + 1):
        expected.append(((f"z{h}", f"z{h}"), z))
    for (a, b), want in expected:
        if br(a, b) != want:
            raise AssertionError(f"toral basis bracket [{a}, {b}] is wrong")


def spectrum(p: TwistParams) -> list[CycNum]:
    """The scalars mu_i with ad u having eigenvalues +-mu_i."""
    return [-I * x for x in p.lam] + [-I * x for x in p.kappa]


def twisting_derivation(k: int, m: int, lam: Sequence, skew: Sequence[Sequence]) -> LinMap:
    """Even derivation of H_{2k+1,m} rotating each (e_i, e_i^) and acting by ``skew`` on the w's."""
    H = heisenberg(k, m)
    cols: list[dict] = [{} for _ in range(H.dim)]
    for i, l in enumerate(lam):
        e, eh = 1 + 2 * i, 2 + 2 * i
        cols[e] = {eh: as_cyc(l)}
        cols[eh] = {e: -as_cyc(l)}
    base = 2 * k + 1
    for i in range(m):
        cols[base + i] = {base + j: as_cyc(skew[j][i]) for j in range(m) if as_cyc(skew[j][i])}
    d = LinMap(H.dim, cols)
    if not is_derivation(H, d):
        raise ValueError("the given data does not define a derivation")
    return d


# ------------------------------------------------------------------ normal form


class NonSplitError(ValueError):
    """Characteristic polynomial has roots outside the supported family."""

    def __init__(self, degree: int) -> None:
        self.degree = degree
        super().__init__(f"characteristic polynomial has an unsplit factor of degree {degree}")


def _poly_eval(coeffs: Sequence[CycNum], x: CycNum) -> CycNum:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[CycNum], root: CycNum) -> list[CycNum]:
    """Divide by (x - root), assuming exact divisibility."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    carry = ZERO
    for i in range(n, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    return out


def _rational_roots(coeffs: Sequence[CycNum], L: int) -> set:
    """Rational y with sum c_i y^i = 0, by splitting coordinates in a fixed basis."""
    import sympy

    y = sympy.Symbol("y")
    coords: dict[int, list] = {}
    deg = len(coeffs) - 1
    for i, c in enumerate(coeffs):
        lifted = {k * (L // c.conductor): v for k, v in c.coeffs.items()}
        for k, v in _to_basis(L, lifted).items():
            coords.setdefault(k, [0] * (deg + 1))[i] = sympy.Rational(v.numerator, v.denominator)
    g = None
    for vec in coords.values():
        P = sympy.Poly(list(reversed(vec)), y, domain="QQ")
        g = P if g is None else sympy.gcd(g, P)
    if g is None or g.degree() <= 0:
        return set()
    from fractions import Fraction

    return {Fraction(int(r.p), int(r.q)) for r in g.ground_roots()}


def _find_root(coeffs: list[CycNum]) -> CycNum | None:
    if len(coeffs) <= 1:
        return None
    if coeffs[0].is_zero():
        return ZERO
    N = 1
    for c in coeffs:
        N = _lcm(N, c.conductor)
    M = _lcm(8, 2 * N)
    for j in range(M):
        w = zeta(M, j)
        scaled = [c * w**i for i, c in enumerate(coeffs)]
        for y in sorted(_rational_roots(scaled, M)):
            if y:
                cand = w * y
                if _poly_eval(coeffs, cand).is_zero():
                    return cand
    return None


def _eigenvalues(A: linalg.Mat) -> list[CycNum]:
    chi = linalg.charpoly(A)
    roots = []
    while len(chi) > 1:
        rt = _find_root(chi)
        if rt is None:
            raise NonSplitError(len(chi) - 1)
        roots.append(rt)
        chi = _deflate(chi, rt)
    return roots


def _dot(x: Sequence[CycNum], y: Sequence[CycNum]) -> CycNum:
    acc = ZERO
    for a, b in zip(x, y):
        if a and b:
            acc = acc + a * b
    return acc


def skew_normal_form(A: Sequence[Sequence]) -> tuple[linalg.Mat, list[CycNum], int]:
    """Complex-orthogonal normal form of a skew-symmetric matrix.

    Returns ``(Q, kappas, zeros)`` with ``Q Q^T = 1`` and ``Q A Q^T`` block
    diagonal: blocks ``[[0, -kappa], [kappa, 0]]`` followed by ``zeros``
    zero rows.  Each kappa is the representative of ``+-kappa`` whose
    lowest-exponent coefficient is positive; blocks are sorted by kappa.
    """
    A = linalg.mat(A)
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            if A[i][j] != -A[j][i]:
                raise ValueError(f"matrix is not skew-symmetric at ({i}, {j})")
    if n == 0:
        return [], [], 0
    eig = _eigenvalues(A)
    mult: dict[CycNum, int] = {}
    for e in eig:
        mult[e] = mult.get(e, 0) + 1

    def eigenspace(a: CycNum) -> linalg.Mat:
        M = [[A[i][j] - (a if i == j else ZERO) for j in range(n)] for i in range(n)]
        K = linalg.kernel(M, n)
        if len(K) != mult.get(a, 0):
            raise ValueError("skew matrix is not diagonalizable")
        return K

    blocks: list[tuple[CycNum, list[CycNum], list[CycNum]]] = []
    done: set = set()
    for a in sorted(mult):
        if a.is_zero() or a in done:
            continue
        done |= {a, -a}
        X = eigenspace(a)
        Y = eigenspace(-a)
        X, Y = _dual_pair(X, Y)
        kap = -I * a
        h = SQRT2.inv()
        for x, y in zip(X, Y):
            e = [(xi + yi) * h for xi, yi in zip(x, y)]
            f = [(xi - yi) * h * I for xi, yi in zip(x, y)]
            if _leading_sign(kap) < 0:
                blocks.append((-kap, e, [-v for v in f]))
            else:
                blocks.append((kap, e, f))
    blocks.sort(key=lambda b: b[0])
    rows: list[list[CycNum]] = []
    for _, e, f in blocks:
        rows += [e, f]
    if ZERO in mult:
        K = eigenspace(ZERO)
        rows += _orthonormalize(K)
    Q = rows
    # post-conditions
    QAQt = linalg.matmul(linalg.matmul(Q, A), linalg.transpose(Q))
    kappas = [b[0] for b in blocks]
    target = _normal_matrix(kappas, n)
    if QAQt != target or linalg.matmul(Q, linalg.transpose(Q)) != linalg.identity(n):
        raise AssertionError("skew normal form post-condition failed")
    return Q, kappas, n - 2 * len(kappas)


def _leading_sign(x: CycNum) -> int:
    items = sorted(x.coeffs.items())
    return 1 if items[0][1] > 0 else -1


def canonical_kappa(x: CycNum) -> CycNum:
    """Representative of {x, -x} whose lowest-exponent coefficient is positive."""
    return x if _leading_sign(x) > 0 else -x


def _square_root_if_cheap(x: CycNum) -> CycNum | None:
    """Square root of a root of unity times a rational, else None.

    Only rationals whose square-free part has no prime factor above 3 are
    accepted: other square roots live in fields of large conductor and slow
    every later operation down.
    """
    n = x.conductor
    for k in range(2 * n):
        r = x * zeta(2 * n, -k)
        if r.is_rational():
            q = r.to_fraction()
            rest = abs(q.numerator) * q.denominator
            for f in (1, 2, 3, 6):
                if rest % f == 0 and math.isqrt(rest // f) ** 2 == rest // f:
                    return sqrt_cyc(x)
            return None
    return None


def _dual_pair(X: linalg.Mat, Y: linalg.Mat) -> tuple[linalg.Mat, linalg.Mat]:
    """Rescale bases of opposite eigenspaces so that x_i^T y_j = delta_ij.

    When the pairing is diagonal with square-rootable entries, both sides
    are scaled by the same factor; this keeps an input that is already in
    normal form fixed.
    """
    G = [[_dot(x, y) for y in Y] for x in X]
    diagonal = all(not G[i][j] for i in range(len(G)) for j in range(len(G)) if i != j)
    if diagonal:
        roots = [_square_root_if_cheap(G[i][i]) for i in range(len(G))]
        if all(r is not None for r in roots):
            X = [[v / r for v in x] for x, r in zip(X, roots)]
            Y = [[v / r for v in y] for y, r in zip(Y, roots)]
            return X, Y
    C = linalg.inverse(G)
    m = len(Y)
    Yd = [[_dot([Y[j][t] for j in range(m)], [C[j][i] for j in range(m)]) for t in range(len(Y[0]))]
          for i in range(len(X))]
    return X, Yd


def _normal_matrix(kappas: Sequence[CycNum], n: int) -> linalg.Mat:
    M = linalg.zeros(n)
    for i, k in enumerate(kappas):
        M[2 * i][2 * i + 1] = -k
        M[2 * i + 1][2 * i] = k
    return M


def _orthonormalize(K: linalg.Mat) -> linalg.Mat:
    """Orthonormal basis for x^T y of a nondegenerate subspace.

    Orthogonalizes first and normalizes last, so each output vector only
    involves the square root of its own norm.
    """
    vecs = [list(v) for v in K]
    ortho: list[list[CycNum]] = []
    while vecs:
        pick = next((v for v in vecs if _dot(v, v)), None)
        if pick is None:
            pair = next(((a, b) for a in vecs for b in vecs if a is not b and _dot(a, b)), None)
            if pair is None:
                raise ValueError("degenerate kernel")
            pick = [x + y for x, y in zip(*pair)]
            vecs.append(pick)
        norm2 = _dot(pick, pick)
        ortho.append(pick)
        rest = []
        for v in vecs:
            if v is pick:
                continue
            c = _dot(v, pick) / norm2
            w = [x - c * y for x, y in zip(v, pick)]
            if any(w):
                rest.append(w)
        vecs = [list(r) for r in linalg.rref(rest)[0]] if rest else []
    out = []
    for o in ortho:
        norm = sqrt_cyc(_dot(o, o))
        out.append([x / norm for x in o])
    return out


# ------------------------------------------------------------------ seeded test inputs

_PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25))
_KAPPA_POOL = (ONE, as_cyc(2), as_cyc(3), as_cyc(Fraction(1, 2)), I, I * 2, zeta(3), zeta(8) * 3)


def _rotation(n: int, i: int, j: int, a: int, b: int, c: int) -> linalg.Mat:
    R = linalg.identity(n)
    co, si = as_cyc(a) / c, as_cyc(b) / c
    R[i][i], R[j][j], R[i][j], R[j][i] = co, co, -si, si
    return R


def random_skew_instance(rng: random.Random, max_dim: int = 6) -> tuple[linalg.Mat, list[CycNum], int]:
    """A skew matrix ``P^T N P`` with ``N`` in normal form and ``P`` orthogonal.

    Returns the matrix together with the kappas and zero count that the
    normal form must recover.  ``P`` is a product of rational rotations
    and a signed permutation, so every entry stays cyclotomic.
    """
    n = rng.randint(1, max_dim)
    blocks = rng.randint(0, n // 2)
    kappas = [rng.choice(_KAPPA_POOL) * rng.choice((1, -1)) for _ in range(blocks)]
    N = _normal_matrix(kappas, n)
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(n)]
    S = [[as_cyc(signs[i]) if perm[i] == j else ZERO for j in range(n)] for i in range(n)]
    P = S
    # Rotations stay inside the block part or inside the kernel part: a
    # rotation mixing the two makes kernel norms non-square rationals,
    # whose square roots need huge conductors.
    groups = [g for g in (list(range(2 * blocks)), list(range(2 * blocks, n))) if len(g) > 1]
    if groups:
        for _ in range(rng.randint(0, 3)):
            i, j = rng.sample(rng.choice(groups), 2)
            P = linalg.matmul(_rotation(n, i, j, *rng.choice(_PYTHAGOREAN)), P)
    M = linalg.matmul(linalg.matmul(linalg.transpose(P), N), P)
    want = sorted(canonical_kappa(k) for k in kappas)
    return M, want, n - 2 * blocks
