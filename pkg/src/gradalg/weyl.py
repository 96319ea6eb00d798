"""Weyl groups of fine gradings as permutation groups on the support.

Every grading handled here has one-dimensional components, so an
automorphism preserving the grading is monomial in the homogeneous basis
and the Weyl group acts faithfully on the support.  Generators are built
block by block; maps that move blocks get their scalars from an exact
multiplicative solver and are then checked with :func:`is_automorphism`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .abgroup import smith_normal_form
from .cyclo import ONE, CycNum, I, as_cyc, root_of_unity_order, sqrt_cyc, zeta
from .gradings import (
    DimensionCapError,
    FineGradingSpec,
    Grading,
    _bracket_table,
    layout,
    monomial_isomorphisms,
    same_class,
)
from .superalg import LinMap, automorphism_witness, is_automorphism

__all__ = [
    "PermGroup",
    "ClosureCapError",
    "NotComponentPermutingError",
    "AutomorphismCheckError",
    "WeylGenerator",
    "WeylParams",
    "generators_for",
    "induced_permutation",
    "weyl_group",
    "weyl_params",
    "weyl_order_formula",
    "brute_aut_action",
]

Perm = tuple[int, ...]
CLOSURE_CAP = 10**7


class ClosureCapError(RuntimeError):
    pass


class NotComponentPermutingError(ValueError):
    pass


class AutomorphismCheckError(ValueError):
    """A constructed map fails on the bracket of two named basis vectors."""

    def __init__(self, generator: str, left: str, right: str) -> None:
        super().__init__(f"{generator} does not preserve the bracket [{left}, {right}]")
        self.generator = generator
        self.left = left
        self.right = right

    def to_json(self) -> dict:
        return {"error": "not-an-automorphism", "generator": self.generator, "bracket": [self.left, self.right]}


# --------------------------------------------------------------------- permutation groups

def compose(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[i] for i in b)


def perm_order(a: Perm) -> int:
    seen = [False] * len(a)
    out = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            n += 1
        out = math.lcm(out, n)
    return out


@dataclass(frozen=True)
class PermGroup:
    """Group generated by permutations of ``range(degree)``, with its elements."""

    degree: int
    generators: tuple[Perm, ...]
    elements: frozenset

    @classmethod
    def generate(cls, degree: int, gens: Iterable[Sequence[int]], cap: int = CLOSURE_CAP) -> "PermGroup":
        ident = tuple(range(degree))
        gens_t = tuple(dict.fromkeys(tuple(g) for g in gens if tuple(g) != ident))
        for g in gens_t:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of {degree} points")
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens_t:
                    y = compose(g, x)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > cap:
                            raise ClosureCapError(f"closure exceeds {cap} elements")
                        nxt.append(y)
            frontier = nxt
        return cls(degree, gens_t, frozenset(seen))

    @property
    def order(self) -> int:
        return len(self.elements)

    def order_statistics(self) -> dict[int, int]:
        """Number of elements of each order."""
        return dict(sorted(Counter(perm_order(g) for g in self.elements).items()))

    def contains(self, g: Sequence[int]) -> bool:
        return tuple(g) in self.elements

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "generators": [list(g) for g in self.generators],
            "element_orders": {str(k): v for k, v in self.order_statistics().items()},
        }


# --------------------------------------------------------------------- action on components

def _component_index(gr: Grading) -> list[int]:
    pos = {g: n for n, g in enumerate(gr.support())}
    return [pos[d] for d in gr.degrees]


def induced_permutation(f: LinMap, gr: Grading) -> Perm:
    """The permutation ``pi`` of support indices with ``f(L_g) = L_pi(g)``."""
    comp = _component_index(gr)
    n = len(gr.support())
    image: list[Optional[int]] = [None] * n
    dims = Counter(comp)
    for i, col in enumerate(f.cols):
        targets = {comp[k] for k in col}
        if len(targets) != 1:
            raise NotComponentPermutingError(f"basis vector {gr.algebra.basis[i]} leaves its component")
        (t,) = targets
        if image[comp[i]] is not None and image[comp[i]] != t:
            raise NotComponentPermutingError(f"component of {gr.algebra.basis[i]} is split")
        image[comp[i]] = t
    perm = tuple(image)  # type: ignore[arg-type]
    if sorted(perm) != list(range(n)) or any(dims[a] != dims[b] for a, b in enumerate(perm)):
        raise NotComponentPermutingError("map does not permute the components")
    return perm


# --------------------------------------------------------------------- exact monomial solver

def _discrete_root(w: CycNum, n: int) -> CycNum:
    """Some ``x`` with ``x**n == w``; ``w`` a root of unity or a square chain."""
    if n == 1:
        return w
    o = root_of_unity_order(w)
    if o is not None:
        for a in range(o):
            if zeta(o, a) == w:
                return zeta(o * n, a)
    if n % 2 == 0:
        return _discrete_root(sqrt_cyc(w), n // 2)
    raise ValueError(f"no {n}-th root of {w} available")


def solve_scalars(
    rows: list[dict[int, int]], ratios: list[CycNum], n: int, fixed: dict[int, CycNum]
) -> Optional[list[CycNum]]:
    """Nonzero ``s`` with ``prod_j s_j^rows[r][j] == ratios[r]`` and ``s_i = fixed[i]``.

    Unknowns not constrained by any row are set to 1.  Returns ``None`` when
    the system has no solution.
    """
    free = [j for j in range(n) if j not in fixed]
    col = {j: c for c, j in enumerate(free)}
    M, rhs = [], []
    for row, rho in zip(rows, ratios):
        val = rho
        new = [0] * len(free)
        for j, e in row.items():
            if j in fixed:
                val = val / fixed[j] ** e
            else:
                new[col[j]] += e
        if any(new):
            M.append(new)
            rhs.append(val)
        elif val != ONE:
            return None
    out = [fixed.get(j, ONE) for j in range(n)]
    if not M:
        return out
    U, D, V = smith_normal_form(M, ncols=len(free))
    transformed = []
    for urow in U:
        acc = ONE
        for e, rho in zip(urow, rhs):
            if e:
                acc = acc * rho**e
        transformed.append(acc)
    rank = sum(1 for i in range(min(len(M), len(free))) if D[i][i])
    if any(v != ONE for v in transformed[rank:]):
        return None
    try:
        y = [_discrete_root(transformed[t], D[t][t]) for t in range(rank)]
    except ValueError:
        return None
    y += [ONE] * (len(free) - rank)
    for c, j in enumerate(free):
        acc = ONE
        for t, e in enumerate(V[c]):
            if e:
                acc = acc * y[t] ** e
        out[j] = acc
    return out


def _system_for(table: dict, sigma: dict[int, int], domain: set[int]) -> Optional[tuple[list[dict[int, int]], list[CycNum]]]:
    """Rows for the brackets of ``domain`` under the partial permutation ``sigma``."""
    rows, ratios = [], []
    for (i, j), (k, c) in table.items():
        if i > j or i not in domain or j not in domain:
            continue
        if k not in sigma:
            raise ValueError("partial permutation must contain every bracket value")
        hit = table.get((sigma[i], sigma[j]))
        if hit is None or hit[0] != sigma[k]:
            return None
        row = Counter({i: 1})
        row[j] += 1
        row[k] -= 1
        rows.append({a: e for a, e in row.items() if e})
        ratios.append(c / hit[1])
    # brackets that vanish must stay zero
    for i in domain:
        for j in domain:
            if (i, j) not in table and (sigma[i], sigma[j]) in table:
                return None
    return rows, ratios


# --------------------------------------------------------------------- blocks of build_fine

@dataclass(frozen=True)
class _Block:
    kind: str
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    scalar: CycNum
    index: int

    @property
    def indices(self) -> tuple[int, ...]:
        return self.xs + self.ys


def _blocks(spec: FineGradingSpec) -> list[_Block]:
    lay = layout(spec)
    out = []
    for kind, xs_all, ys_all, scalars in (
        ("I-even", lay.x, lay.y, spec.beta),
        ("I-odd", lay.xb, lay.yb, spec.beta_p),
    ):
        for j, (xs, ys, b) in enumerate(zip(xs_all, ys_all, scalars)):
            out.append(_Block(kind, xs, ys, b, j))
    for kind, rows, scalars in (("II-even", lay.a, spec.alpha), ("II-odd", lay.ab, spec.alpha_p)):
        for j, (xs, a) in enumerate(zip(rows, scalars)):
            out.append(_Block(kind, xs, (), a, j))
    return out


def _alignments(src: _Block, dst: _Block, l: int) -> Iterable[dict[int, int]]:
    """Basis bijections from ``src`` to ``dst`` that respect the ``ad u`` cycles."""
    if src.kind.startswith("I-"):
        for swap in (False, True):
            X, Y = (dst.ys, dst.xs) if swap else (dst.xs, dst.ys)
            for h in range(l):
                sigma = {}
                for i in range(l):
                    sigma[src.xs[i]] = X[(i + h) % l]
                    sigma[src.ys[i]] = Y[(i - h) % l]
                yield sigma
    else:
        for h in range(l):
            yield {src.xs[i]: dst.xs[(i + h) % l] for i in range(l)}


def _block_map(
    table: dict, lay, src: _Block, dst: _Block, l: int, s_u: CycNum
) -> Optional[tuple[dict[int, int], dict[int, CycNum]]]:
    """Scalars carrying ``src`` onto ``dst`` with ``u -> s_u u`` and ``z`` fixed."""
    base = {lay.u: lay.u, lay.z: lay.z}
    fixed = {lay.u: s_u, lay.z: ONE}
    domain = {lay.u, lay.z, *src.indices}
    for sigma in _alignments(src, dst, l):
        full = {**base, **sigma}
        sysm = _system_for(table, full, domain)
        if sysm is None:
            continue
        n = max(domain) + 1
        sol = solve_scalars(sysm[0], sysm[1], n, fixed)
        if sol is not None:
            return sigma, {i: sol[i] for i in src.indices}
    return None


def _match_blocks(
    table: dict, lay, blocks: list[_Block], l: int, s_u: CycNum, forced: Optional[dict[int, int]] = None
) -> Optional[tuple[dict[int, int], dict[int, CycNum]]]:
    """A bijection of blocks realizable with ``u -> s_u u``; ``forced`` fixes some targets."""
    forced = forced or {}
    options: list[list[int]] = []
    for a, src in enumerate(blocks):
        if a in forced:
            options.append([forced[a]])
        else:
            options.append([b for b, dst in enumerate(blocks) if dst.kind == src.kind])
    cache: dict[tuple[int, int], object] = {}

    def realize(a: int, b: int):
        if (a, b) not in cache:
            cache[(a, b)] = _block_map(table, lay, blocks[a], blocks[b], l, s_u)
        return cache[(a, b)]

    chosen: list[int] = []
    used: set[int] = set()

    def rec(a: int) -> bool:
        if a == len(blocks):
            return True
        for b in options[a]:
            if b in used or realize(a, b) is None:
                continue
            used.add(b)
            chosen.append(b)
            if rec(a + 1):
                return True
            chosen.pop()
            used.discard(b)
        return False

    if not rec(0):
        return None
    sigma: dict[int, int] = {}
    scal: dict[int, CycNum] = {}
    for a, b in enumerate(chosen):
        sg, sc = realize(a, b)  # type: ignore[misc]
        sigma.update(sg)
        scal.update(sc)
    return sigma, scal


# --------------------------------------------------------------------- generators

@dataclass(frozen=True)
class WeylGenerator:
    name: str
    fmap: LinMap

    def to_json(self, gr: Grading) -> dict:
        return {
            "name": self.name,
            "permutation": list(induced_permutation(self.fmap, gr)),
            "matrix": [[str(x) for x in row] for row in self.fmap.matrix()],
        }


def _monomial(n: int, images: dict[int, tuple[int, CycNum]]) -> LinMap:
    cols = [{i: ONE} for i in range(n)]
    for i, (j, c) in images.items():
        cols[i] = {j: as_cyc(c)}
    return LinMap(n, cols)


def _checked(name: str, gr: Grading, f: LinMap) -> WeylGenerator:
    A = gr.algebra
    if not is_automorphism(A, f):
        bad = automorphism_witness(A, f)
        if bad is None:
            raise AutomorphismCheckError(name, "parity", "parity")
        raise AutomorphismCheckError(name, A.basis[bad[0]], A.basis[bad[1]])
    induced_permutation(f, gr)
    return WeylGenerator(name, f)


def _shift_map(blk: _Block, l: int) -> dict[int, tuple[int, CycNum]]:
    """x_i -> i x_{i+1}, y_i -> i y_{i-1}; the wrap y_1 -> y_l picks up (-1)^l."""
    img = {}
    for i in range(l):
        img[blk.xs[i]] = (blk.xs[(i + 1) % l], I)
        img[blk.ys[i]] = (blk.ys[(i - 1) % l], I if i else I * (-1) ** l)
    return img


def _swap_map(blk: _Block, l: int) -> dict[int, tuple[int, CycNum]]:
    """x -> y, y -> -x on even blocks; x -> y, y -> x on odd blocks."""
    sign = ONE if blk.kind == "I-odd" else -ONE
    img = {}
    for i in range(l):
        img[blk.xs[i]] = (blk.ys[i], ONE)
        img[blk.ys[i]] = (blk.xs[i], sign)
    return img


def _half_turn(blk: _Block, l: int) -> dict[int, tuple[int, CycNum]]:
    """a_i -> i^(l/2) a_{i+l/2}."""
    h = l // 2
    c = I**h
    return {blk.xs[i]: (blk.xs[(i + h) % l], c) for i in range(l)}


def _reflection(spec: FineGradingSpec, blocks: list[_Block], lay) -> dict[int, tuple[int, CycNum]]:
    """For odd l: u -> -u, x_i -> (-1)^i y_i, y_i -> (-1)^(i+1) x_i, and on odd blocks
    x_i -> (-1)^i y_i, y_i -> (-1)^i x_i."""
    img: dict[int, tuple[int, CycNum]] = {lay.u: (lay.u, -ONE)}
    for blk in blocks:
        for i in range(1, spec.l + 1):
            sx = CycNum((-1) ** i)
            sy = sx if blk.kind == "I-odd" else -sx
            img[blk.xs[i - 1]] = (blk.ys[i - 1], sx)
            img[blk.ys[i - 1]] = (blk.xs[i - 1], sy)
    return img


def _candidate_scalings(blocks: list[_Block], l: int) -> list[CycNum]:
    """Possible ``s_u``: ratios of first-block scalar to same-kind scalars, up to 4l-th roots."""
    if not blocks:
        return []
    first = blocks[0]
    out = set()
    for b in blocks:
        if b.kind != first.kind:
            continue
        for j in range(4 * l):
            v = first.scalar / b.scalar * zeta(4 * l, j)
            if root_of_unity_order(v) is not None:
                out.add(v)
    return sorted(out)


def generators_for(gr: Grading, spec: FineGradingSpec) -> list[WeylGenerator]:
    """Automorphisms whose component permutations generate the Weyl group of ``build_fine(spec)``.

    Per type I block: the shift, and for even ``l`` the x/y swap; per type II
    block the half turn; for type III the p/q swaps and transpositions of
    neighbouring pairs and of neighbouring ``z_h``; transpositions of
    neighbouring blocks with equal classes; for odd ``l`` the reflection
    ``u -> -u``; one block-permuting map for every admissible rescaling of ``u``.
    """
    A = gr.algebra
    n = A.dim
    l = spec.l
    lay = layout(spec)
    blocks = _blocks(spec)
    table = _bracket_table(A)
    gens: list[WeylGenerator] = []

    def add(name: str, images: dict[int, tuple[int, CycNum]]) -> None:
        gens.append(_checked(name, gr, _monomial(n, images)))

    for blk in blocks:
        tag = f"{blk.kind}[{blk.index + 1}]"
        if blk.kind.startswith("I-"):
            add(f"shift {tag}", _shift_map(blk, l))
            if l % 2 == 0:
                add(f"swap {tag}", _swap_map(blk, l))
        else:
            add(f"half-turn {tag}", _half_turn(blk, l))
    for i, (p, q) in enumerate(zip(lay.p, lay.q)):
        add(f"pq-swap[{i + 1}]", {p: (q, ONE), q: (p, ONE)})
    for i in range(len(lay.p) - 1):
        p1, q1, p2, q2 = lay.p[i], lay.q[i], lay.p[i + 1], lay.q[i + 1]
        add(f"pair-transposition[{i + 1}]", {p1: (p2, ONE), q1: (q2, ONE), p2: (p1, ONE), q2: (q1, ONE)})
    for h in range(len(lay.zs) - 1):
        a, b = lay.zs[h], lay.zs[h + 1]
        add(f"z-transposition[{h + 1}]", {a: (b, ONE), b: (a, ONE)})
    if l % 2 and blocks:
        add("reflection", _reflection(spec, blocks, lay))
    if not blocks and not lay.p and not lay.zs:
        add("swap u and z", {lay.u: (lay.z, ONE), lay.z: (lay.u, ONE)})

    # neighbouring blocks in one class
    for a in range(len(blocks) - 1):
        b = a + 1
        if blocks[a].kind != blocks[b].kind:
            continue
        forced = {c: c for c in range(len(blocks))}
        forced[a], forced[b] = b, a
        hit = _match_blocks(table, lay, blocks, l, ONE, forced)
        if hit is None:
            continue
        sigma, scal = hit
        add(f"block-swap {blocks[a].kind}[{blocks[a].index + 1},{blocks[b].index + 1}]",
            {i: (sigma[i], scal[i]) for i in sigma})

    # rescalings of u
    for s_u in _candidate_scalings(blocks, l):
        if s_u == ONE:
            continue
        hit = _match_blocks(table, lay, blocks, l, s_u)
        if hit is None:
            continue
        sigma, scal = hit
        images = {i: (sigma[i], scal[i]) for i in sigma}
        images[lay.u] = (lay.u, s_u)
        add(f"rescale u by {s_u}", images)
    return gens


def weyl_group(gr: Grading, spec: FineGradingSpec, cap: int = CLOSURE_CAP) -> PermGroup:
    """Closure of the component permutations induced by :func:`generators_for`."""
    perms = [induced_permutation(g.fmap, gr) for g in generators_for(gr, spec)]
    return PermGroup.generate(len(gr.support()), perms, cap)


# --------------------------------------------------------------------- order formula

@dataclass(frozen=True)
class WeylParams:
    """``c``: order of the cyclic group of scalings ``eps`` permuting the scalar
    classes of all four lists (with multiplicity); ``d``: least ``d`` with
    ``eps^d`` class-trivial for a generator ``eps``.  Classes are l-th-root
    classes for even l and 2l-th-root classes for odd l."""

    spec: FineGradingSpec
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.c < 1 or self.d < 1 or self.c % self.d:
            raise ValueError("d must divide c")


def _permutes_classes(values: Sequence[CycNum], eps: CycNum, l: int) -> bool:
    left = list(values)
    for v in values:
        w = eps * v
        for j, x in enumerate(left):
            if same_class(w, x, l):
                del left[j]
                break
        else:
            return False
    return True


def weyl_params(spec: FineGradingSpec, rule: str = "resolved") -> WeylParams:
    """``c`` and ``d`` computed on the canonical form of ``spec``.

    ``rule="alternate"`` uses l-th-root classes for every l, which overcounts
    for odd l; ``"resolved"`` (default) uses 2l-th-root classes for odd l.
    """
    if rule not in ("resolved", "alternate"):
        raise ValueError(f"unknown class rule {rule!r}")
    canon = spec.canonical()
    order = spec.type1_order if rule == "resolved" else spec.l
    lists = (canon.beta, canon.beta_p, canon.alpha, canon.alpha_p)
    values = [v for xs in lists for v in xs]
    if not values:
        return WeylParams(spec, 1, 1)
    first = values[0]
    cands = set()
    for v in values:
        for j in range(order):
            e = v / first * zeta(order, j)
            if root_of_unity_order(e) is not None:
                cands.add(e)
    good = [e for e in cands if all(_permutes_classes(xs, e, order) for xs in lists)]
    c = max(root_of_unity_order(e) for e in good)
    d = c // math.gcd(c, order)
    return WeylParams(spec, c, d)


def weyl_order_formula(spec: FineGradingSpec, wp: Optional[WeylParams] = None) -> int:
    """Closed-form Weyl group order from the block counts, class multiplicities and ``d``.

    Needs at least one block of type I or II: without them ``ad u`` vanishes,
    the algebra is nilpotent and the closed form does not apply.
    """
    if not (spec.t or spec.tp or spec.q or spec.qp):
        raise ValueError("the closed form needs a block of type I or II")
    wp = wp or weyl_params(spec)
    l = spec.l
    mult = spec.canonical().multiplicities()
    fact = math.factorial(spec.s) * math.factorial(spec.p)
    for key in ("beta", "beta_p"):
        for _, m in mult[key]:
            fact *= math.factorial(m)
    if l % 2 == 0:
        for key in ("alpha", "alpha_p"):
            for _, m in mult[key]:
                fact *= math.factorial(m)
        return fact * (2 * l) ** (spec.t + spec.tp) * 2 ** (spec.q + spec.qp) * 2**spec.s * wp.d
    return fact * 2 ** (spec.s + 1) * l ** (spec.t + spec.tp) * wp.d


# --------------------------------------------------------------------- oracle

def brute_aut_action(gr: Grading, dim_cap: int = 8) -> PermGroup:
    """Image of the graded automorphism group in the symmetric group on the support.

    Enumerates every basis permutation compatible with parity and the bracket
    pattern and keeps those for which the scalar equations are solvable.
    """
    A = gr.algebra
    if A.dim > dim_cap:
        raise DimensionCapError(f"the automorphism oracle is limited to dimension {dim_cap}")
    if any(d != 1 for d in gr.component_dims()):
        raise ValueError("the automorphism oracle needs one-dimensional components")
    comp = _component_index(gr)
    n = len(comp)
    perms = set()
    for sigma in monomial_isomorphisms(A, A):
        perm = [0] * n
        for i, j in enumerate(sigma):
            perm[comp[i]] = comp[j]
        perms.add(tuple(perm))
    group = PermGroup.generate(n, sorted(perms))
    if group.order != len(perms):
        raise RuntimeError("realizable permutations do not form a group")
    return group
