import math

import pytest

from gradalg.abgroup import FgAbelianGroup
from gradalg.cyclo import I, ONE, zeta
from gradalg.gradings import (
    FineGradingSpec,
    build_fine,
    example_grading_2l,
    gamma1,
    gamma2,
    grading_new,
    layout,
)
from gradalg.heisenberg import TwistParams
from gradalg.superalg import LinMap, SuperAlgebra, is_automorphism
from gradalg.weyl import (
    PermGroup,
    WeylParams,
    brute_aut_action,
    compose,
    generators_for,
    induced_permutation,
    weyl_group,
    weyl_order_formula,
    weyl_params,
)


def monomial(A: SuperAlgebra, images: dict) -> LinMap:
    cols = [{i: ONE} for i in range(A.dim)]
    for src, (dst, c) in images.items():
        cols[A.index[src]] = {A.index[dst]: c * ONE}
    return LinMap(A.dim, cols)


def test_perm_group_closure():
    G = PermGroup.generate(4, [(1, 2, 3, 0), (1, 0, 2, 3)])
    assert G.order == 24
    D = PermGroup.generate(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    assert D.order == 8
    assert D.order_statistics() == {1: 1, 2: 5, 4: 2}
    assert compose((1, 0, 2), (0, 2, 1)) == (1, 2, 0)


def test_identity_induces_identity():
    spec = FineGradingSpec(1, 1, 0, 0, 0, 1, 1, (2,))
    A, gr = build_fine(spec)
    assert induced_permutation(LinMap.identity(A.dim), gr) == tuple(range(A.dim))


@pytest.mark.parametrize(
    "spec",
    [
        FineGradingSpec(1, 1, 1, 0, 0, 1, 1, (2,), (3,)),
        FineGradingSpec(2, 1, 0, 1, 1, 0, 2, (1,), (), (I,), (1,)),
        FineGradingSpec(3, 1, 1, 0, 0, 0, 1, (1,), (2,)),
        FineGradingSpec(4, 0, 1, 1, 0, 1, 0, (), (1,), (1,)),
        FineGradingSpec(1, 2, 0, 0, 0, 0, 0, (1, -1)),
        FineGradingSpec(2, 2, 1, 0, 0, 0, 0, (1, 1), (I,)),
    ],
    ids=lambda s: s.label(),
)
def test_generators_are_graded_automorphisms(spec):
    A, gr = build_fine(spec)
    for g in generators_for(gr, spec):
        assert is_automorphism(A, g.fmap), g.name
        induced_permutation(g.fmap, gr)


def test_theta_preserves_the_nontoral_family():
    p = TwistParams(2, 1, 4, (2, 3), (5,))
    gr = gamma1(p, 1)
    A = gr.algebra
    f = monomial(A, {"e1": ("e1^", 1), "e1^": ("e1", -1)})
    assert is_automorphism(A, f)
    perm = induced_permutation(f, gr)
    ix = A.index
    assert perm[ix["e1"]] == ix["e1^"] and perm[ix["e1^"]] == ix["e1"]


def test_mu_is_an_automorphism_of_the_toral_family():
    p = TwistParams(2, 1, 4, (2, 3), (5,))
    gr = gamma2(p, 1)
    A = gr.algebra
    images = {"u": ("u", -1)}
    for i in (1, 2):
        images[f"u{i}"] = (f"v{i}", I)
        images[f"v{i}"] = (f"u{i}", I)
    # the odd pair has a symmetric bracket, so no factor i there
    images["f1"] = ("g1", 1)
    images["g1"] = ("f1", 1)
    f = monomial(A, images)
    assert is_automorphism(A, f)
    assert induced_permutation(f, gr) != tuple(range(A.dim))


def test_pq_swap_moves_only_p_and_q():
    spec = FineGradingSpec(2, 0, 0, 1, 1, 2, 1, (), (), (2,), (3,))
    A, gr = build_fine(spec)
    lay = layout(spec)
    gens = {g.name: g for g in generators_for(gr, spec)}
    perm = induced_permutation(gens["pq-swap[1]"].fmap, gr)
    moved = {i for i, j in enumerate(perm) if i != j}
    assert moved == {lay.p[0], lay.q[0]}
    assert perm[lay.p[0]] == lay.q[0]


@pytest.mark.parametrize("l", [2, 3, 4])
def test_shift_cycles_the_x_components(l):
    spec, gr = example_grading_2l(l)
    lay = layout(spec)
    gens = {g.name: g for g in generators_for(gr, spec)}
    perm = induced_permutation(gens["shift I-even[1]"].fmap, gr)
    xs = lay.x[0]
    for i in range(l):
        assert perm[xs[i]] == xs[(i + 1) % l]


def test_shift_and_swap_relations_for_even_l():
    l = 4
    spec, gr = example_grading_2l(l)
    gens = {g.name: induced_permutation(g.fmap, gr) for g in generators_for(gr, spec)}
    shift, swap = gens["shift I-even[1]"], gens["swap I-even[1]"]
    ident = tuple(range(len(shift)))
    power = ident
    for _ in range(l):
        power = compose(shift, power)
    assert power == ident
    assert compose(swap, swap) == ident
    # dihedral relation: swap shift swap = shift^-1
    assert compose(swap, compose(shift, swap)) == compose(shift, compose(shift, shift))


def test_squares_of_involutive_generators_fix_every_component():
    spec = FineGradingSpec(1, 2, 0, 0, 0, 1, 2, (1, 1))
    A, gr = build_fine(spec)
    ident = tuple(range(A.dim))
    for g in generators_for(gr, spec):
        p = induced_permutation(g.fmap, gr)
        if g.name.startswith(("pq-swap", "z-transposition", "block-swap", "reflection")):
            assert compose(p, p) == ident


def test_rescaling_by_minus_one_squares_into_the_stabilizer():
    # doubled scalar lists admit u -> -u
    spec = FineGradingSpec(2, 2, 0, 0, 0, 0, 0, (1, I))
    A, gr = build_fine(spec)
    gens = {g.name: g for g in generators_for(gr, spec)}
    g = gens["rescale u by -1"]
    assert g.fmap({1: ONE}) == {1: -ONE}
    perm = induced_permutation(g.fmap, gr)
    assert compose(perm, perm) == tuple(range(A.dim))
    assert weyl_params(spec).c == 4


def test_generic_nontoral_family_order():
    p = TwistParams(1, 1, 4, (2,), (3,))
    spec = FineGradingSpec(2, 0, 0, 1, 1, 1, 0, (), (), (2,), (3,))
    A, gr = build_fine(spec)
    want = 2 ** (p.k + p.r + 1) * math.factorial(1) * math.factorial(0)
    assert weyl_group(gr, spec).order == want == 8


@pytest.mark.parametrize("l, want", [(1, 2), (2, 16), (3, 18), (4, 64)])
def test_two_block_example_orders(l, want):
    spec, gr = example_grading_2l(l)
    assert weyl_group(gr, spec).order == want
    if gr.algebra.dim <= 10:
        assert brute_aut_action(gr, dim_cap=10).order == want


def test_oracle_on_trivial_abelian_algebra():
    A = SuperAlgebra(["z"], [0], {})
    G = FgAbelianGroup(0)
    gr = grading_new(A, None, [G.zero()], G)
    assert brute_aut_action(gr).order == 1


def test_oracle_on_the_smallest_twisted_algebra():
    p = TwistParams(1, 0, 0, (1,))
    s2 = FineGradingSpec(1, 1, 0, 0, 0, 0, 0, (1,))
    s1 = FineGradingSpec(2, 0, 0, 1, 0, 0, 0, (), (), (1,))
    for spec, fam in ((s2, gamma2(p, 0)), (s1, gamma1(p, 0))):
        _, gr = build_fine(spec)
        closure = weyl_group(gr, spec).order
        assert brute_aut_action(fam).order == closure == 2
        assert weyl_order_formula(spec) == closure


def test_formula_rejects_blockless_specs():
    with pytest.raises(ValueError):
        weyl_order_formula(FineGradingSpec(1, 0, 0, 0, 0, 1, 1))


def test_weyl_params_need_divisibility():
    spec = FineGradingSpec(1, 1, 0, 0, 0, 0, 0, (1,))
    with pytest.raises(ValueError):
        WeylParams(spec, 2, 3)


@pytest.mark.parametrize(
    "spec",
    [
        FineGradingSpec(l, 2, 1, 0, 0, 0, 0, (d, d), (g,)).canonical()
        for l in (1, 2, 3, 4)
        for d in (1, 2)
        for g in (1, I, zeta(8), zeta(3), -1)
    ],
    ids=lambda s: s.label(),
)
def test_c_equal_d_equal_two_never_occurs(spec):
    # an order-two u-scaling is -1, which always lies in the class group
    wp = weyl_params(spec)
    assert (wp.c, wp.d) != (2, 2)
    assert weyl_params(spec, rule="alternate").d != 2 or weyl_params(spec, rule="alternate").c != 2


def test_forcing_c_equal_d_equal_two_would_double_the_count():
    spec = FineGradingSpec(2, 2, 1, 0, 0, 0, 0, (1, 1), (3,))
    A, gr = build_fine(spec)
    closure = weyl_group(gr, spec).order
    wp = weyl_params(spec)
    assert weyl_order_formula(spec, wp) == closure
    assert weyl_order_formula(spec, WeylParams(spec, 2, 2)) == 2 * closure // wp.d
