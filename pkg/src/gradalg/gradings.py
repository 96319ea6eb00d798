"""Group gradings on Lie superalgebras and the fine gradings built from blocks.

A :class:`Grading` stores an algebra written in a homogeneous basis together
with the degree of every basis vector.  Fine gradings of twisted Heisenberg
superalgebras are described by :class:`FineGradingSpec` and assembled from
three kinds of blocks by :func:`build_fine`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .abgroup import FgAbelianGroup, GroupElem, Hom, group_from_presentation, smith_normal_form
from .cyclo import ONE, CycNum, I, as_cyc, parse_cyc, root_of_unity_order, zeta
from .heisenberg import TwistParams, paired_basis, toral_basis, twisted
from .superalg import LinMap, SuperAlgebra

__all__ = [
    "GradingError",
    "Grading",
    "grading_new",
    "universal_group",
    "is_fine",
    "is_toral",
    "coarsen",
    "UndecidedError",
    "Fragment",
    "build_block",
    "FineGradingSpec",
    "Layout",
    "layout",
    "build_fine",
    "table_group",
    "gamma1",
    "gamma2",
    "example_grading_2l",
    "example_grading_type2",
    "spec_is_admissible",
    "enumerate_fine",
    "equivalent",
    "brute_equivalent",
    "admissible_specs",
    "monomial_isomorphisms",
    "DimensionCapError",
]


class GradingError(ValueError):
    """A bracket of homogeneous elements leaves the expected component."""

    def __init__(self, x: str, y: str, g: GroupElem, h: GroupElem, actual: Optional[GroupElem]) -> None:
        self.x, self.y, self.g, self.h, self.actual = x, y, g, h, actual
        where = "several components" if actual is None else str(actual)
        super().__init__(f"[{x}, {y}] should have degree {g + h} but lies in {where}")

    def to_json(self) -> dict:
        return {
            "error": "incompatible-bracket",
            "x": self.x,
            "y": self.y,
            "deg_x": self.g.to_json(),
            "deg_y": self.h.to_json(),
            "actual": None if self.actual is None else self.actual.to_json(),
        }


class UndecidedError(RuntimeError):
    pass


class DimensionCapError(ValueError):
    pass


# --------------------------------------------------------------------- model

@dataclass(frozen=True, eq=False)
class Grading:
    """Degrees of a homogeneous basis.

    ``algebra`` is written in the homogeneous basis.  When that basis was
    obtained from another one, ``change`` holds its vectors in the original
    coordinates of ``base``.
    """

    algebra: SuperAlgebra
    group: FgAbelianGroup
    degrees: tuple[GroupElem, ...]
    change: Optional[LinMap] = None
    base: Optional[SuperAlgebra] = None

    def components(self) -> dict[GroupElem, list[int]]:
        out: dict[GroupElem, list[int]] = {}
        for i, g in enumerate(self.degrees):
            out.setdefault(g, []).append(i)
        return out

    def support(self) -> list[GroupElem]:
        """Support in order of first appearance in the basis."""
        seen: dict[GroupElem, None] = {}
        for g in self.degrees:
            seen.setdefault(g)
        return list(seen)

    def component_dims(self) -> list[int]:
        return [len(v) for v in self.components().values()]

    def with_group(self, group: FgAbelianGroup, degrees: Sequence[GroupElem]) -> "Grading":
        return Grading(self.algebra, group, tuple(degrees), self.change, self.base)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "basis": list(self.algebra.basis),
            "degrees": [g.to_json() for g in self.degrees],
        }


def _check_compatible(A: SuperAlgebra, degrees: Sequence[GroupElem]) -> None:
    for i, j in A.nonzero_pairs():
        target = {degrees[k] for k in A.basis_bracket(i, j)}
        want = degrees[i] + degrees[j]
        if target != {want}:
            actual = next(iter(target)) if len(target) == 1 else None
            raise GradingError(A.basis[i], A.basis[j], degrees[i], degrees[j], actual)


def grading_new(
    algebra: SuperAlgebra,
    basis_map: Optional[LinMap],
    degrees: Sequence[GroupElem],
    group: FgAbelianGroup,
    names: Optional[Sequence[str]] = None,
) -> Grading:
    """Validate and build a grading.

    ``basis_map`` (columns = new basis vectors) may be ``None`` when the
    algebra's own basis is homogeneous.
    """
    if basis_map is None:
        A, base = algebra, None
    else:
        if names is None:
            names = [f"b{i}" for i in range(algebra.dim)]
        A, base = algebra.transport(basis_map, names), algebra
    degrees = tuple(degrees)
    if len(degrees) != A.dim:
        raise ValueError(f"{len(degrees)} degrees given for a basis of size {A.dim}")
    for g in degrees:
        if g.group != group:
            raise ValueError("degree outside the grading group")
    _check_compatible(A, degrees)
    return Grading(A, group, degrees, basis_map, base)


def _support_relations(gr: Grading) -> tuple[list[GroupElem], list[list[int]]]:
    supp = gr.support()
    pos = {g: i for i, g in enumerate(supp)}
    A = gr.algebra
    rels: set[tuple[int, ...]] = set()
    for i, j in A.nonzero_pairs():
        a, b = pos[gr.degrees[i]], pos[gr.degrees[j]]
        for k in A.basis_bracket(i, j):
            row = [0] * len(supp)
            row[a] += 1
            row[b] += 1
            row[pos[gr.degrees[k]]] -= 1
            rels.add(tuple(row))
    return supp, [list(r) for r in sorted(rels)]


def universal_group(gr: Grading) -> tuple[FgAbelianGroup, Grading]:
    """The abelian group generated by the support modulo the bracket relations."""
    supp, rels = _support_relations(gr)
    U, images = group_from_presentation(len(supp), rels)
    lookup = dict(zip(supp, images))
    return U, gr.with_group(U, [lookup[g] for g in gr.degrees])


def is_toral(gr: Grading) -> bool:
    return not universal_group(gr)[0].torsion


def coarsen(gr: Grading, hom: Hom) -> Grading:
    if hom.source != gr.group:
        raise ValueError("homomorphism does not start at the grading group")
    degrees = [hom(g) for g in gr.degrees]
    _check_compatible(gr.algebra, degrees)
    return gr.with_group(hom.target, degrees)


def _partitions(items: list[int]) -> Iterable[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _is_grading_decomposition(A: SuperAlgebra, parts: list[list[int]]) -> bool:
    """Do these blocks of basis vectors form a grading by some abelian group?"""
    label = {}
    for a, part in enumerate(parts):
        for i in part:
            label[i] = a
    rels: set[tuple[int, ...]] = set()
    n = len(parts)
    bracket_target: dict[tuple[int, int], int] = {}
    for i, j in A.nonzero_pairs():
        key = (min(label[i], label[j]), max(label[i], label[j]))
        for k in A.basis_bracket(i, j):
            t = label[k]
            if bracket_target.setdefault(key, t) != t:
                return False
            row = [0] * n
            row[label[i]] += 1
            row[label[j]] += 1
            row[t] -= 1
            rels.add(tuple(row))
    _, images = group_from_presentation(n, [list(r) for r in rels])
    return len(set(images)) == n


def is_fine(gr: Grading, dim_cap: int = 10) -> bool:
    """True when no grading refines ``gr``.

    One-dimensional components settle the question immediately.  Otherwise
    the components are split along the given homogeneous basis in every
    possible way; this search only runs up to ``dim_cap``.
    """
    comps = list(gr.components().values())
    if all(len(c) == 1 for c in comps):
        return True
    if gr.algebra.dim > dim_cap:
        raise UndecidedError("undecided-by-search")
    options = [list(_partitions(c)) for c in comps]
    for choice in itertools.product(*options):
        parts = [p for split in choice for p in split]
        if len(parts) == len(comps):
            continue
        if _is_grading_decomposition(gr.algebra, parts):
            return False
    return True


# --------------------------------------------------------------------- blocks

@dataclass
class Fragment:
    """Basis labels of a block and its brackets, written with labels.

    Brackets may mention the labels ``"u"`` and ``"z"`` of the ambient
    algebra; values map labels to coefficients.
    """

    names: list[str]
    parity: list[int]
    brackets: list[tuple[str, str, dict[str, CycNum]]] = field(default_factory=list)

    def add(self, a: str, b: str, target: str, coeff) -> None:
        self.brackets.append((a, b, {target: as_cyc(coeff)}))


def _labels(labels: Optional[Sequence[str]], default: Sequence[str], count: int) -> list[str]:
    out = list(labels) if labels is not None else list(default)
    if len(out) != count:
        raise ValueError(f"expected {count} labels, got {len(out)}")
    return out


def build_block(
    kind: str,
    l: int = 1,
    scalar=None,
    labels: Optional[Sequence[str]] = None,
    s: int = 0,
    p: int = 0,
) -> Fragment:
    """Brackets of one block.

    ``I-even``/``I-odd``: ``2l`` elements ``x1, y1, ..., xl, yl``.
    ``II-even``/``II-odd``: ``l`` elements (``l`` even) forming a cycle under ``ad u``.
    ``III``: ``p1, q1, ..., ps, qs, z1, ..., zp``.
    """
    if kind == "III":
        default = [n for i in range(1, s + 1) for n in (f"p{i}", f"q{i}")] + [f"z{h}" for h in range(1, p + 1)]
        names = _labels(labels, default, 2 * s + p)
        frag = Fragment(names, [1] * len(names))
        for i in range(s):
            frag.add(names[2 * i], names[2 * i + 1], "z", 1)
        for h in range(p):
            frag.add(names[2 * s + h], names[2 * s + h], "z", 1)
        return frag
    if scalar is None or as_cyc(scalar).is_zero():
        raise ValueError("block scalar must be nonzero")
    if l < 1:
        raise ValueError("block length must be positive")
    c = as_cyc(scalar)
    mi = -I * c
    if kind in ("I-even", "I-odd"):
        odd = kind == "I-odd"
        default = [n for i in range(1, l + 1) for n in (f"x{i}", f"y{i}")]
        names = _labels(labels, default, 2 * l)
        x = names[0::2]
        y = names[1::2]
        frag = Fragment(names, [int(odd)] * (2 * l))
        pair = ONE if odd else c
        for i in range(l):
            nxt = (i + 1) % l
            frag.add("u", x[i], x[nxt], mi)
            frag.add("u", y[i], y[nxt], mi if i < l - 1 else -((-1) ** l) * I * c)
        for i in range(1, l):
            frag.add(x[i - 1], y[l - i - 1], "z", (-1) ** (l - i) * pair)
        frag.add(x[l - 1], y[l - 1], "z", (-1) ** l * pair)
        return frag
    if kind in ("II-even", "II-odd"):
        if l % 2:
            raise ValueError("type II blocks need an even length")
        odd = kind == "II-odd"
        names = _labels(labels, [f"a{i}" for i in range(1, l + 1)], l)
        frag = Fragment(names, [int(odd)] * l)
        for i in range(l):
            frag.add("u", names[i], names[(i + 1) % l], mi)
        for i in range(1, l + 1):
            if odd:
                j = (l - i) % l or l
                if i <= j:
                    frag.add(names[i - 1], names[j - 1], "z", (-1) ** i)
            else:
                j = l - i + 1
                if i < j:
                    frag.add(names[i - 1], names[j - 1], "z", (-1) ** i * c)
        return frag
    raise ValueError(f"unknown block kind {kind!r}")


def _assemble(names: list[str], parity: list[int], brackets: Iterable[tuple[str, str, dict]]) -> SuperAlgebra:
    index = {n: i for i, n in enumerate(names)}
    struct: dict[tuple[int, int], dict[int, CycNum]] = {}
    for a, b, val in brackets:
        i, j = index[a], index[b]
        v = {index[k]: as_cyc(c) for k, c in val.items()}
        if i > j:
            sgn = 1 if (parity[i] and parity[j]) else -1
            i, j = j, i
            v = {k: c * sgn for k, c in v.items()}
        old = struct.get((i, j))
        if old is not None and old != v:
            raise ValueError(f"conflicting brackets for [{a}, {b}]")
        struct[(i, j)] = v
    return SuperAlgebra(names, parity, struct)


# --------------------------------------------------------------------- specs

def _cyc_list(xs) -> tuple[CycNum, ...]:
    return tuple(parse_cyc(x) if isinstance(x, str) else as_cyc(x) for x in xs)


def _leading_positive(x: CycNum) -> bool:
    items = sorted(x.coeffs.items())
    return items[0][1] > 0


def nice_rep(x: CycNum, order: int) -> CycNum:
    """Preferred element of the orbit of ``x`` under the ``order``-th roots of unity."""
    orbit = [x * zeta(order, j) for j in range(order)]
    return min(orbit, key=lambda y: (y.conductor, not _leading_positive(y), y))


def same_class(a: CycNum, b: CycNum, order: int) -> bool:
    return (a / b) ** order == ONE


def group_classes(values: Sequence[CycNum], order: int) -> list[tuple[CycNum, int]]:
    """Class representatives with multiplicities, in canonical order."""
    reps: list[list] = []
    for v in values:
        for entry in reps:
            if same_class(v, entry[0], order):
                entry[1] += 1
                break
        else:
            reps.append([v, 1])
    out = [(nice_rep(r, order), m) for r, m in reps]
    out.sort(key=lambda e: (-e[1], e[0]))
    return out


@dataclass(frozen=True)
class FineGradingSpec:
    """Block data ``(l, t, t', q, q', s, p)`` with the block scalars."""

    l: int
    t: int
    tp: int
    q: int
    qp: int
    s: int
    p: int
    beta: tuple[CycNum, ...] = ()
    beta_p: tuple[CycNum, ...] = ()
    alpha: tuple[CycNum, ...] = ()
    alpha_p: tuple[CycNum, ...] = ()

    def __post_init__(self) -> None:
        for name in ("beta", "beta_p", "alpha", "alpha_p"):
            object.__setattr__(self, name, _cyc_list(getattr(self, name)))
        if self.l < 1 or min(self.t, self.tp, self.q, self.qp, self.s, self.p) < 0:
            raise ValueError("l must be positive and the block counts nonnegative")
        if self.l % 2 and (self.q or self.qp):
            raise ValueError("type II blocks need l even")
        for name, n in (("beta", self.t), ("beta_p", self.tp), ("alpha", self.q), ("alpha_p", self.qp)):
            vals = getattr(self, name)
            if len(vals) != n:
                raise ValueError(f"{name} needs {n} entries, got {len(vals)}")
            if any(v.is_zero() for v in vals):
                raise ValueError("block scalars must be nonzero")

    @property
    def counts(self) -> tuple[int, ...]:
        return (self.l, self.t, self.tp, self.q, self.qp, self.s, self.p)

    @property
    def dim(self) -> int:
        l = self.l
        return 2 + l * (self.q + self.qp + 2 * self.t + 2 * self.tp) + 2 * self.s + self.p

    @property
    def type1_order(self) -> int:
        """Roots of unity identifying type I scalars: l for even l, 2l for odd l."""
        return self.l if self.l % 2 == 0 else 2 * self.l

    def multiplicities(self) -> dict[str, list[tuple[CycNum, int]]]:
        """Class representatives and multiplicities of each scalar list."""
        o1 = self.type1_order
        return {
            "beta": group_classes(self.beta, o1),
            "beta_p": group_classes(self.beta_p, o1),
            "alpha": group_classes(self.alpha, self.l),
            "alpha_p": group_classes(self.alpha_p, self.l),
        }

    def canonical(self) -> "FineGradingSpec":
        """Scalars replaced by class representatives, grouped by multiplicity."""
        mult = self.multiplicities()

        def expand(name: str) -> tuple[CycNum, ...]:
            return tuple(r for r, m in mult[name] for _ in range(m))

        return FineGradingSpec(*self.counts, expand("beta"), expand("beta_p"), expand("alpha"), expand("alpha_p"))

    def sort_key(self) -> tuple:
        return (self.l, self.t, self.tp, self.q, self.qp, -self.s, self.p, self.beta, self.beta_p, self.alpha, self.alpha_p)

    def label(self) -> str:
        def fmt(xs):
            return ",".join(str(x) for x in xs)

        lists = [fmt(x) for x in (self.beta, self.beta_p, self.alpha, self.alpha_p)]
        return f"Γ({','.join(map(str, self.counts))}; {'; '.join(lists)})"

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "t": self.t,
            "t_prime": self.tp,
            "q": self.q,
            "q_prime": self.qp,
            "s": self.s,
            "p": self.p,
            "beta": [str(x) for x in self.beta],
            "beta_prime": [str(x) for x in self.beta_p],
            "alpha": [str(x) for x in self.alpha],
            "alpha_prime": [str(x) for x in self.alpha_p],
        }

    @classmethod
    def from_json(cls, d: dict) -> "FineGradingSpec":
        return cls(
            int(d["l"]),
            int(d.get("t", 0)),
            int(d.get("t_prime", 0)),
            int(d.get("q", 0)),
            int(d.get("q_prime", 0)),
            int(d.get("s", 0)),
            int(d.get("p", 0)),
            _cyc_list(str(x) for x in d.get("beta", ())),
            _cyc_list(str(x) for x in d.get("beta_prime", ())),
            _cyc_list(str(x) for x in d.get("alpha", ())),
            _cyc_list(str(x) for x in d.get("alpha_prime", ())),
        )


@dataclass(frozen=True)
class Layout:
    """Basis positions of every block element in :func:`build_fine` output."""

    x: tuple[tuple[int, ...], ...]
    y: tuple[tuple[int, ...], ...]
    a: tuple[tuple[int, ...], ...]
    xb: tuple[tuple[int, ...], ...]
    yb: tuple[tuple[int, ...], ...]
    ab: tuple[tuple[int, ...], ...]
    p: tuple[int, ...]
    q: tuple[int, ...]
    zs: tuple[int, ...]
    z: int = 0
    u: int = 1


def layout(spec: FineGradingSpec) -> Layout:
    l = spec.l
    pos = 2

    def take(n: int) -> tuple[int, ...]:
        nonlocal pos
        out = tuple(range(pos, pos + n))
        pos += n
        return out

    def type1(count: int):
        xs, ys = [], []
        for _ in range(count):
            blk = take(2 * l)
            xs.append(blk[0::2])
            ys.append(blk[1::2])
        return tuple(xs), tuple(ys)

    x, y = type1(spec.t)
    a = tuple(take(l) for _ in range(spec.q))
    xb, yb = type1(spec.tp)
    ab = tuple(take(l) for _ in range(spec.qp))
    pq = take(2 * spec.s)
    zs = take(spec.p)
    return Layout(x, y, a, xb, yb, ab, pq[0::2], pq[1::2], zs)


def _block_names(spec: FineGradingSpec) -> dict[str, list[list[str]]]:
    l = spec.l
    out: dict[str, list[list[str]]] = {}
    for key, prefix, count in (("I-even", ("x", "y"), spec.t), ("I-odd", ("xb", "yb"), spec.tp)):
        out[key] = [
            [f"{c}{j}.{i}" for i in range(1, l + 1) for c in prefix] for j in range(1, count + 1)
        ]
    for key, prefix, count in (("II-even", "a", spec.q), ("II-odd", "ab", spec.qp)):
        out[key] = [[f"{prefix}{j}.{i}" for i in range(1, l + 1)] for j in range(1, count + 1)]
    return out


def table_group(spec: FineGradingSpec) -> tuple[FgAbelianGroup, list[int], "callable"]:
    """The group of the block degree table and a map from coordinate vectors.

    Coordinates (l even): ``Z x Z_2l x Z^t x Z^t' x Z_2^q x Z_2^q' x Z^s x Z_2^p``.
    Coordinates (l odd): ``Z x Z_l x Z^t x Z^t' x Z^s x Z_2^p``.
    """
    l = spec.l
    if l % 2 == 0:
        orders = [0, 2 * l] + [0] * (spec.t + spec.tp) + [2] * (spec.q + spec.qp) + [0] * spec.s + [2] * spec.p
    else:
        orders = [0, l] + [0] * (spec.t + spec.tp) + [0] * spec.s + [2] * spec.p
    n = len(orders)
    rels = []
    for i, o in enumerate(orders):
        if o:
            row = [0] * n
            row[i] = o
            rels.append(row)
    G, images = group_from_presentation(n, rels)

    def elem(vec: Sequence[int]) -> GroupElem:
        out = G.zero()
        for c, img in zip(vec, images):
            if c:
                out = out + c * img
        return out

    return G, orders, elem


def _table_degrees(spec: FineGradingSpec, lay: Layout) -> tuple[FgAbelianGroup, list[GroupElem]]:
    G, orders, elem = table_group(spec)
    n = len(orders)
    l, even = spec.l, spec.l % 2 == 0
    off_t = 2
    off_tp = off_t + spec.t
    off_q = off_tp + spec.tp
    off_qp = off_q + spec.q
    off_s = (off_qp + spec.qp) if even else off_q
    off_p = off_s + spec.s

    def vec(first: int, second: int, slot: Optional[int] = None, val: int = 1) -> GroupElem:
        v = [0] * n
        v[0], v[1] = first, second
        if slot is not None:
            v[slot] = val
        return elem(v)

    deg: list[Optional[GroupElem]] = [None] * spec.dim
    deg[lay.z] = vec(2, 2)
    deg[lay.u] = vec(0, 2 if even else 1)
    for xs, ys, off in ((lay.x, lay.y, off_t), (lay.xb, lay.yb, off_tp)):
        for j, (xrow, yrow) in enumerate(zip(xs, ys)):
            for i in range(1, l + 1):
                if even:
                    deg[xrow[i - 1]] = vec(1, 2 * i + 2, off + j, 1)
                    deg[yrow[i - 1]] = vec(1, 2 * i, off + j, -1)
                else:
                    deg[xrow[i - 1]] = vec(1, i + 2, off + j, 1)
                    deg[yrow[i - 1]] = vec(1, i, off + j, -1)
    for blocks, off, shift in ((lay.a, off_q, 0), (lay.ab, off_qp, 1)):
        for j, row in enumerate(blocks):
            for i in range(1, l + 1):
                deg[row[i - 1]] = vec(1, 2 * i + shift, off + j, 1)
    for i, (pi, qi) in enumerate(zip(lay.p, lay.q)):
        deg[pi] = vec(1, 1, off_s + i, 1)
        deg[qi] = vec(1, 1, off_s + i, -1)
    for h, zi in enumerate(lay.zs):
        deg[zi] = vec(1, 1, off_p + h, 1)
    return G, deg  # type: ignore[return-value]


def build_fine(spec: FineGradingSpec) -> tuple[SuperAlgebra, Grading]:
    """Assemble ``z``, ``u`` and all blocks; grade them by the block degree table."""
    l = spec.l
    names, parity = ["z", "u"], [0, 0]
    brackets: list = []
    bn = _block_names(spec)

    def add(frag: Fragment) -> None:
        names.extend(frag.names)
        parity.extend(frag.parity)
        brackets.extend(frag.brackets)

    for lbl, b in zip(bn["I-even"], spec.beta):
        add(build_block("I-even", l, b, lbl))
    for lbl, a in zip(bn["II-even"], spec.alpha):
        add(build_block("II-even", l, a, lbl))
    for lbl, b in zip(bn["I-odd"], spec.beta_p):
        add(build_block("I-odd", l, b, lbl))
    for lbl, a in zip(bn["II-odd"], spec.alpha_p):
        add(build_block("II-odd", l, a, lbl))
    add(build_block("III", s=spec.s, p=spec.p))
    A = _assemble(names, parity, brackets)
    G, deg = _table_degrees(spec, layout(spec))
    return A, grading_new(A, None, deg, G)


# --------------------------------------------------------------------- the two generic families

def _coordinate_group(orders: Sequence[int]):
    n = len(orders)
    rels = []
    for i, o in enumerate(orders):
        if o:
            row = [0] * n
            row[i] = o
            rels.append(row)
    G, images = group_from_presentation(n, rels)

    def elem(vec: Sequence[int]) -> GroupElem:
        out = G.zero()
        for c, img in zip(vec, images):
            if c:
                out = out + c * img
        return out

    return G, elem


def _unit(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    v = [0] * n
    for i, c in pairs:
        v[i] += c
    return v


def gamma1(params: TwistParams, s: int) -> Grading:
    """The non-toral family: basis ``z, u, e_i, e_i^, w_j, w_j^, p_t, q_t, z_h``.

    Group ``Z x Z_4 x Z_2^(k+r) x Z^s x Z_2^(m-2r-2s)``.
    """
    k, r = params.k, params.r
    A = twisted(params)
    B = paired_basis(A, params, s)
    p = params.m - 2 * r - 2 * s
    orders = [0, 4] + [2] * (k + r) + [0] * s + [2] * p
    n = len(orders)
    G, elem = _coordinate_group(orders)
    deg = {"z": [(0, 2), (1, 2)], "u": [(1, 2)]}
    for i in range(1, k + 1):
        deg[f"e{i}"] = [(0, 1), (1, 0), (1 + i, 1)]
        deg[f"e{i}^"] = [(0, 1), (1, 2), (1 + i, 1)]
    for j in range(1, r + 1):
        deg[f"w{j}"] = [(0, 1), (1, 1), (1 + k + j, 1)]
        deg[f"w{j}^"] = [(0, 1), (1, 3), (1 + k + j, 1)]
    for t in range(1, s + 1):
        deg[f"p{t}"] = [(0, 1), (1, 1), (1 + k + r + t, 1)]
        deg[f"q{t}"] = [(0, 1), (1, 1), (1 + k + r + t, -1)]
    for h in range(1, p + 1):
        deg[f"z{h}"] = [(0, 1), (1, 1), (1 + k + r + s + h, 1)]
    degrees = [elem(_unit(n, deg[name])) for name in B.names]
    return grading_new(A, B.change, degrees, G, B.names)


def gamma2(params: TwistParams, s: int) -> Grading:
    """The family diagonalizing ``ad u``: basis ``z, u, u_i, v_i, f_j, g_j, p_t, q_t, z_h``.

    Group ``Z^(1+k+r+s) x Z_2^(m-2r-2s)``.
    """
    k, r = params.k, params.r
    A = twisted(params)
    B = toral_basis(A, params, s)
    p = params.m - 2 * r - 2 * s
    orders = [0] * (1 + k + r + s) + [2] * p
    n = len(orders)
    G, elem = _coordinate_group(orders)
    deg: dict[str, list[tuple[int, int]]] = {"z": [(0, 2)], "u": []}
    for i in range(1, k + 1):
        deg[f"u{i}"] = [(0, 1), (i, 1)]
        deg[f"v{i}"] = [(0, 1), (i, -1)]
    for j in range(1, r + 1):
        deg[f"f{j}"] = [(0, 1), (k + j, 1)]
        deg[f"g{j}"] = [(0, 1), (k + j, -1)]
    for t in range(1, s + 1):
        deg[f"p{t}"] = [(0, 1), (k + r + t, 1)]
        deg[f"q{t}"] = [(0, 1), (k + r + t, -1)]
    for h in range(1, p + 1):
        deg[f"z{h}"] = [(0, 1), (k + r + s + h, 1)]
    degrees = [elem(_unit(n, deg[name])) for name in B.names]
    return grading_new(A, B.change, degrees, G, B.names)


def example_grading_2l(l: int, alpha=1, beta=2) -> tuple[FineGradingSpec, Grading]:
    """One even and one odd type I block of length ``l`` graded by ``Z^2 x Z_l``.

    Degrees: ``u (0,0,1)``, ``z (3,3,0)``, ``x_i (1,2,i)``, ``y_i (2,1,i)``,
    odd ``x_i (0,3,i)``, odd ``y_i (3,0,i)``.
    """
    spec = FineGradingSpec(l, 1, 1, 0, 0, 0, 0, (alpha,), (beta,))
    A, _ = build_fine(spec)
    lay = layout(spec)
    G, elem = _coordinate_group([0, 0, l])
    deg: list[GroupElem] = [G.zero()] * A.dim
    deg[lay.u] = elem([0, 0, 1])
    deg[lay.z] = elem([3, 3, 0])
    for i in range(1, l + 1):
        deg[lay.x[0][i - 1]] = elem([1, 2, i])
        deg[lay.y[0][i - 1]] = elem([2, 1, i])
        deg[lay.xb[0][i - 1]] = elem([0, 3, i])
        deg[lay.yb[0][i - 1]] = elem([3, 0, i])
    return spec, grading_new(A, None, deg, G)


def example_grading_type2(l: int, s: int, p: int, alpha=1, beta=2) -> tuple[FineGradingSpec, Grading]:
    """One even and one odd type II block with ``2l`` elements each, plus type III.

    Group ``Z x Z_4l x Z^s x Z_2^p``; ``u (0;2)``, ``z (2;2)``, even ``x_i (1;2i)``,
    odd ``y_i (1;2i+1)``, ``p, q (1;1;+-e)``, ``z_h (1;1;e_h)``.
    """
    spec = FineGradingSpec(2 * l, 0, 0, 1, 1, s, p, (), (), (alpha,), (beta,))
    A, _ = build_fine(spec)
    lay = layout(spec)
    G, elem = _coordinate_group([0, 4 * l] + [0] * s + [2] * p)
    n = 2 + s + p
    deg: list[GroupElem] = [G.zero()] * A.dim
    deg[lay.u] = elem(_unit(n, [(1, 2)]))
    deg[lay.z] = elem(_unit(n, [(0, 2), (1, 2)]))
    for i in range(1, 2 * l + 1):
        deg[lay.a[0][i - 1]] = elem(_unit(n, [(0, 1), (1, 2 * i)]))
        deg[lay.ab[0][i - 1]] = elem(_unit(n, [(0, 1), (1, 2 * i + 1)]))
    for t, (pi, qi) in enumerate(zip(lay.p, lay.q)):
        deg[pi] = elem(_unit(n, [(0, 1), (1, 1), (2 + t, 1)]))
        deg[qi] = elem(_unit(n, [(0, 1), (1, 1), (2 + t, -1)]))
    for h, zi in enumerate(lay.zs):
        deg[zi] = elem(_unit(n, [(0, 1), (1, 1), (2 + s + h, 1)]))
    return spec, grading_new(A, None, deg, G)


# --------------------------------------------------------------------- admissibility and enumeration

def _orbit_values(scalar: CycNum, l: int, half: bool) -> list[CycNum]:
    """Signed values {+-xi^c scalar}, c = 1..l (or 1..l/2 when ``half``)."""
    xi = zeta(l, 1)
    top = l // 2 if half else l
    out = []
    for c in range(1, top + 1):
        v = xi**c * scalar
        out += [v, -v]
    return out


def spec_is_admissible(params: TwistParams, spec: FineGradingSpec) -> bool:
    """Do the block scalars reproduce the eigenvalues of ``ad u`` on the right parity?"""
    l = spec.l
    half = l // 2
    if l * spec.t + half * spec.q != params.k or l * spec.tp + half * spec.qp != params.r:
        return False
    if 2 * spec.s + spec.p != params.m - 2 * l * spec.tp - l * spec.qp:
        return False
    even: Counter = Counter()
    for b in spec.beta:
        even.update(_orbit_values(b, l, False))
    for a in spec.alpha:
        even.update(_orbit_values(a, l, True))
    odd: Counter = Counter()
    for b in spec.beta_p:
        odd.update(_orbit_values(b, l, False))
    for a in spec.alpha_p:
        odd.update(_orbit_values(a, l, True))
    want_even = Counter(v for x in params.lam for v in (x, -x))
    want_odd = Counter(v for x in params.kappa for v in (x, -x))
    return even == want_even and odd == want_odd


def _candidate_lengths(params: TwistParams) -> list[int]:
    vals = list(params.lam) + list(params.kappa)
    L = 1
    for a in vals:
        for b in vals:
            for sgn in (1, -1):
                o = root_of_unity_order(a / b * sgn)
                if o:
                    L = math.lcm(L, o)
    L *= 2
    return [d for d in range(1, L + 1) if L % d == 0]


def _class_splits(values: Sequence[CycNum], l: int) -> Optional[list[tuple[CycNum, list[tuple[int, int]]]]]:
    """Per class of ``values``: its representative and the (type I, type II) block counts.

    Returns ``None`` when ``values`` cannot be covered by blocks of length ``l``.
    """
    signed = Counter(v for x in values for v in (x, -x))
    order = l if l % 2 == 0 else 2 * l
    out = []
    remaining = dict(signed)
    while remaining:
        v = next(iter(remaining))
        orbit = [v * zeta(order, j) for j in range(order)]
        counts = {remaining.get(w, 0) for w in orbit}
        if len(counts) != 1 or 0 in counts:
            return None
        n = counts.pop()
        for w in orbit:
            del remaining[w]
        rep = nice_rep(v, order)
        if l % 2:
            out.append((rep, [(n, 0)]))
        else:
            out.append((rep, [(t, n - 2 * t) for t in range(n // 2 + 1)]))
    return out


def enumerate_fine(params: TwistParams) -> list[FineGradingSpec]:
    """Pairwise inequivalent fine gradings, in canonical order."""
    found: list[FineGradingSpec] = []
    for spec in _raw_specs(params):
        if not any(equivalent(spec, f) for f in found):
            found.append(spec)
    return sorted(found, key=_display_key)


def admissible_specs(params: TwistParams) -> list[FineGradingSpec]:
    """Every admissible spec, one per choice of scalars up to reordering.

    Unlike :func:`enumerate_fine` nothing is identified: each scalar runs
    over all elements of its class that keep the spec admissible.
    """
    out: set[FineGradingSpec] = set()
    for base in _raw_specs(params):
        l = base.l
        o1 = l if l % 2 == 0 else 2 * l
        pools = []
        for xs, order in ((base.beta, o1), (base.beta_p, o1), (base.alpha, l), (base.alpha_p, l)):
            per = [[x * zeta(order, j) for j in range(order)] for x in xs]
            pools.append({tuple(sorted(c)) for c in itertools.product(*per)})
        for b, bp, a, ap in itertools.product(*pools):
            spec = FineGradingSpec(*base.counts, b, bp, a, ap)
            if spec_is_admissible(params, spec):
                out.add(spec)
    return sorted(out, key=_display_key)


def _raw_specs(params: TwistParams) -> Iterable[FineGradingSpec]:
    free = params.m - 2 * params.r
    lengths = [1] if params.k == params.r == 0 else _candidate_lengths(params)
    for l in lengths:
        ev = _class_splits(params.lam, l)
        od = _class_splits(params.kappa, l)
        if ev is None or od is None:
            continue
        for ev_choice in itertools.product(*[opts for _, opts in ev]):
            for od_choice in itertools.product(*[opts for _, opts in od]):
                beta = [r for (r, _), (t, _) in zip(ev, ev_choice) for _ in range(t)]
                alpha = [r for (r, _), (_, q) in zip(ev, ev_choice) for _ in range(q)]
                beta_p = [r for (r, _), (t, _) in zip(od, od_choice) for _ in range(t)]
                alpha_p = [r for (r, _), (_, q) in zip(od, od_choice) for _ in range(q)]
                for s in range(free // 2 + 1):
                    spec = FineGradingSpec(
                        l, len(beta), len(beta_p), len(alpha), len(alpha_p), s, free - 2 * s,
                        beta, beta_p, alpha, alpha_p,
                    ).canonical()
                    if spec_is_admissible(params, spec):
                        yield spec


def _display_key(spec: FineGradingSpec) -> tuple:
    return (spec.l, -spec.t, -spec.tp, spec.q, spec.qp, -spec.s, spec.p, spec.beta, spec.beta_p, spec.alpha, spec.alpha_p)


# --------------------------------------------------------------------- equivalence

def _class_orders(l: int, rule: str) -> tuple[int, int, int, int]:
    """Roots-of-unity orders defining the classes of beta, beta', alpha, alpha'."""
    if rule == "alternate":
        t1 = l if l % 2 else 2 * l
    elif rule == "span":
        t1 = 2 * l if l % 2 else l
    elif rule == "resolved":
        t1 = 2 * l
    else:
        raise ValueError(f"unknown class rule {rule!r}")
    return t1, t1, l, l


def _match_classes(src: Sequence[CycNum], dst: Sequence[CycNum], eps: CycNum, order: int) -> bool:
    used = [False] * len(dst)
    for v in src:
        w = eps * v
        for j, d in enumerate(dst):
            if not used[j] and same_class(w, d, order):
                used[j] = True
                break
        else:
            return False
    return True


def _has_blocks(spec: FineGradingSpec) -> bool:
    return bool(spec.t or spec.tp or spec.q or spec.qp)


def equivalent(a: FineGradingSpec, b: FineGradingSpec, rule: str = "resolved") -> bool:
    """Decide whether two block specs describe equivalent gradings.

    The counts must agree and one scalar ``eps`` must carry every scalar
    class of ``a`` onto a scalar class of ``b`` (bijectively, list by list).
    ``rule`` selects the classes: ``"alternate"`` uses l-th roots for type I
    when l is odd and 2l-th roots when l is even; ``"span"`` uses the
    classes that determine the span of a block; ``"resolved"`` (default)
    uses 2l-th roots for type I and l-th roots for type II, the rule that
    agrees with :func:`brute_equivalent`.
    """
    if not _has_blocks(a) and not _has_blocks(b):
        return (a.s, a.p) == (b.s, b.p)
    if a.counts != b.counts:
        return False
    orders = _class_orders(a.l, rule)
    lists_a = (a.beta, a.beta_p, a.alpha, a.alpha_p)
    lists_b = (b.beta, b.beta_p, b.alpha, b.alpha_p)
    idx = next(i for i, xs in enumerate(lists_b) if xs)
    first, order = lists_b[idx][0], orders[idx]
    candidates = {first / v * zeta(order, j) for v in lists_a[idx] for j in range(order)}
    for eps in sorted(candidates):
        if all(_match_classes(xa, xb, eps, o) for xa, xb, o in zip(lists_a, lists_b, orders)):
            return True
    return False


# --------------------------------------------------------------------- brute-force oracle

def _bracket_table(A: SuperAlgebra) -> dict[tuple[int, int], tuple[int, CycNum]]:
    """(i, j) -> (k, c) with [b_i, b_j] = c b_k; needs one-dimensional components."""
    out = {}
    for i in range(A.dim):
        for j in range(A.dim):
            v = A.basis_bracket(i, j)
            if len(v) > 1:
                raise ValueError("brackets of basis vectors must be multiples of basis vectors")
            if v:
                (k, c), = v.items()
                out[(i, j)] = (k, c)
    return out


def _colors(tables: Sequence[dict], algebras: Sequence[SuperAlgebra], rounds: int = 4) -> list[list[int]]:
    """Color refinement shared by several algebras, so colors are comparable."""
    cols = [[(A.parity[i], (i, i) in T) for i in range(A.dim)] for A, T in zip(algebras, tables)]
    for _ in range(rounds):
        new = []
        for A, T, c in zip(algebras, tables, cols):
            out = [[] for _ in range(A.dim)]
            into = [[] for _ in range(A.dim)]
            for (i, j), (k, _) in T.items():
                out[i].append((c[j], c[k]))
                into[k].append(tuple(sorted((c[i], c[j]))))
            new.append([(c[i], tuple(sorted(out[i])), tuple(sorted(into[i]))) for i in range(A.dim)])
        names = {v: n for n, v in enumerate(sorted({x for row in new for x in row}, key=repr))}
        cols = [[names[x] for x in row] for row in new]
    return cols


def _consistent(rows: list[dict[int, int]], ratios: list[CycNum], n: int) -> bool:
    """Is prod_j s_j^rows[r][j] = ratios[r] solvable with nonzero complex s?"""
    if not rows:
        return True
    M = [[row.get(j, 0) for j in range(n)] for row in rows]
    U, D, _ = smith_normal_form(M, ncols=n)
    rank = sum(1 for i in range(min(len(M), n)) if D[i][i])
    for urow in U[rank:]:
        acc = ONE
        for e, rho in zip(urow, ratios):
            if e:
                acc = acc * rho**e
        if acc != ONE:
            return False
    return True


def _scalar_system(TA: dict, TB: dict, sigma: Sequence[int]) -> Optional[tuple[list[dict[int, int]], list[CycNum]]]:
    rows, ratios = [], []
    for (i, j), (k, c) in TA.items():
        if i > j:
            continue
        hit = TB.get((sigma[i], sigma[j]))
        if hit is None or hit[0] != sigma[k]:
            return None
        row: dict[int, int] = {}
        row[i] = row.get(i, 0) + 1
        row[j] = row.get(j, 0) + 1
        row[k] = row.get(k, 0) - 1
        rows.append({a: e for a, e in row.items() if e})
        ratios.append(c / hit[1])
    if sum(1 for key in TA if key[0] <= key[1]) != sum(1 for key in TB if key[0] <= key[1]):
        return None
    return rows, ratios


def monomial_isomorphisms(A: SuperAlgebra, B: SuperAlgebra, first_only: bool = False) -> list[tuple[int, ...]]:
    """Permutations ``sigma`` such that some ``b_i -> s_i b'_sigma(i)`` is an isomorphism A -> B.

    Both algebras must have brackets of basis vectors proportional to basis
    vectors.  Candidates are pruned by parity, color refinement and the
    bracket pattern; the scalars are decided by :func:`_consistent`.
    """
    n = A.dim
    if B.dim != n:
        return []
    TA, TB = _bracket_table(A), _bracket_table(B)
    ca, cb = _colors([TA, TB], [A, B])
    if sorted(ca) != sorted(cb):
        return []
    order = sorted(range(n), key=lambda i: (sum(1 for x in ca if x == ca[i]), i))
    sigma = [-1] * n
    used = [False] * n
    found: list[tuple[int, ...]] = []

    def ok(i: int, a: int) -> bool:
        if ((i, i) in TA) != ((a, a) in TB):
            return False
        for j in range(n):
            b = sigma[j]
            if b < 0:
                continue
            for x, y, u, v in ((i, j, a, b), (j, i, b, a)):
                h1, h2 = TA.get((x, y)), TB.get((u, v))
                if (h1 is None) != (h2 is None):
                    return False
                if h1 is not None and sigma[h1[0]] >= 0 and sigma[h1[0]] != h2[0]:
                    return False
        return True

    def rec(pos: int) -> bool:
        if pos == n:
            sysm = _scalar_system(TA, TB, sigma)
            if sysm is not None and _consistent(sysm[0], sysm[1], n):
                found.append(tuple(sigma))
                return first_only
            return False
        i = order[pos]
        for a in range(n):
            if used[a] or cb[a] != ca[i]:
                continue
            sigma[i] = a
            if ok(i, a):
                used[a] = True
                if rec(pos + 1):
                    return True
                used[a] = False
            sigma[i] = -1
        return False

    rec(0)
    return found


def brute_equivalent(ga: Grading, gb: Grading, dim_cap: int = 10) -> bool:
    """Exhaustive equivalence test for gradings with one-dimensional components."""
    if ga.algebra.dim > dim_cap or gb.algebra.dim > dim_cap:
        raise DimensionCapError(f"brute-force equivalence is limited to dimension {dim_cap}")
    if sorted(ga.component_dims()) != sorted(gb.component_dims()):
        return False
    if any(d != 1 for d in ga.component_dims()):
        raise ValueError("brute-force equivalence needs one-dimensional components")
    return bool(monomial_isomorphisms(ga.algebra, gb.algebra, first_only=True))
