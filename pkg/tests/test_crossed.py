import random

import pytest

from afzp.crossed import CrossedElement, crossed_product, extend_hom
from afzp.errors import NotEquivariant
from afzp.matrix import Mat
from afzp.system import (Arrangement, EqHom, Slot, decompose, validate)

from conftest import ctx_for, cycle_form, fixed_form, rand_mat, rand_tuple


def rand_element(cp, rng):
    return CrossedElement([rand_tuple(cp.source, rng)
                           for _ in range(cp.p)])


def test_fixed_identification_display_p2():
    # a0 + a1 U  ->  (a0 + a1 V, a0 - a1 V)
    ctx = ctx_for(2)
    c = fixed_form(ctx, [0, 1])
    cp = crossed_product(c)
    assert cp.block_sizes == [2, 2]
    a0 = Mat.from_rows(ctx, [[1, 2], [3, 4]])
    a1 = Mat.from_rows(ctx, [[5, 6], [7, 8]])
    V = c.pieces[0].v
    mats = cp.identify(CrossedElement([[a0], [a1]]))
    assert mats[0] == a0 + a1 * V
    assert mats[1] == a0 - a1 * V


def test_cycle_identification_display():
    # iota(a1, a2) lands as diag(a1, a2); U lands as the swap
    ctx = ctx_for(2)
    c = cycle_form(ctx, 1)
    cp = crossed_product(c)
    assert cp.block_sizes == [2]
    ident = cp.identify(cp.embed([Mat.diag(ctx, [5]), Mat.diag(ctx, [7])]))
    assert ident[0] == Mat.diag(ctx, [5, 7])
    assert cp.u_rho_identified()[0] == Mat.permutation(ctx, [1, 0])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fixed_identification_is_star_isomorphism(p):
    rng = random.Random(100 + p)
    ctx = ctx_for(p, p)
    exps = sorted(rng.randrange(p) for _ in range(rng.randint(1, 3)))
    c = fixed_form(ctx, exps)
    cp = crossed_product(c)
    one = cp.embed([Mat.identity(ctx, len(exps))])
    assert cp.identify(one) == [Mat.identity(ctx, len(exps))] * p
    for _ in range(20):
        x, y = rand_element(cp, rng), rand_element(cp, rng)
        assert cp.identify(cp.mul(x, y)) == \
            [a * b for a, b in zip(cp.identify(x), cp.identify(y))]
        assert cp.identify(cp.adjoint(x)) == \
            [m.dagger() for m in cp.identify(x)]
        assert cp.unidentify(cp.identify(x)) == x


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cycle_identification_is_star_isomorphism(p):
    rng = random.Random(200 + p)
    ctx = ctx_for(p, p)
    c = cycle_form(ctx, rng.randint(1, 2))
    cp = crossed_product(c)
    for _ in range(12):
        x, y = rand_element(cp, rng), rand_element(cp, rng)
        assert cp.identify(cp.mul(x, y)) == \
            [a * b for a, b in zip(cp.identify(x), cp.identify(y))]
        assert cp.identify(cp.adjoint(x)) == \
            [m.dagger() for m in cp.identify(x)]
        assert cp.unidentify(cp.identify(x)) == x


@pytest.mark.parametrize("p", [2, 3])
def test_covariance(p):
    rng = random.Random(300 + p)
    ctx = ctx_for(p)
    for form in (fixed_form(ctx, sorted(rng.randrange(p) for _ in range(2))),
                 cycle_form(ctx, 2)):
        cp = crossed_product(form)
        u = cp.canonical_unitary()
        for _ in range(5):
            a = rand_tuple(form, rng)
            lhs = cp.identify(cp.mul(cp.mul(u, cp.embed(a)), cp.adjoint(u)))
            rhs = cp.identify(cp.embed(form.apply_action(a)))
            assert lhs == rhs


def test_embed_unit_is_crossed_unit():
    ctx = ctx_for(3)
    c = fixed_form(ctx, [0, 1])
    cp = crossed_product(c)
    one = cp.embed([Mat.identity(ctx, 2)])
    assert cp.identify(one) == [Mat.identity(ctx, 2)] * 3


@pytest.mark.parametrize("p", [2, 3])
def test_dual_action_identified_vs_coefficients(p):
    rng = random.Random(400 + p)
    ctx = ctx_for(p)
    for form in (fixed_form(ctx, sorted(rng.randrange(p) for _ in range(2))),
                 cycle_form(ctx, 1)):
        cp = crossed_product(form)
        for _ in range(6):
            x = rand_element(cp, rng)
            assert cp.identify(cp.dual_coeff(x)) == \
                cp.dual_apply(cp.identify(x))


def test_dual_system_is_valid_and_order_p():
    ctx = ctx_for(3)
    for form in (fixed_form(ctx, [0, 1, 1]), cycle_form(ctx, 2)):
        cp = crossed_product(form)
        dual = cp.dual_system()
        assert validate(dual).ok
        # dual applied p times is the identity automorphism
        mats = [rand_mat(ctx, random.Random(9), n) for n in cp.block_sizes]
        out = mats
        for _ in range(3):
            out = cp.dual_apply(out)
        assert out == mats


def test_dual_permutation_direction_fixed_piece():
    # block r of the image reads block r+1: a one-hot tuple moves down
    ctx = ctx_for(3)
    cp = crossed_product(fixed_form(ctx, [0]))
    mats = [Mat.zero(ctx, 1, 1) for _ in range(3)]
    mats[1] = Mat.identity(ctx, 1)
    moved = cp.dual_apply(mats)
    assert [m.entries[0][0] == ctx.one for m in moved] == \
        [True, False, False]


def test_averaging_projection_examples():
    ctx = ctx_for(2)
    cp = crossed_product(fixed_form(ctx, [0, 1]))
    ce, mats, ranks = cp.averaging_projection()
    V = cp.source.pieces[0].v
    half = ctx.scalar(1) / ctx.scalar(2)
    assert mats[0] == (Mat.identity(ctx, 2) + V) * half
    assert mats[1] == (Mat.identity(ctx, 2) - V) * half
    assert ranks == [1, 1] == cp.special

    cp4 = crossed_product(fixed_form(ctx, [0, 0, 0, 1]))
    _, _, ranks4 = cp4.averaging_projection()
    assert ranks4 == [3, 1] == cp4.special

    cpc = crossed_product(cycle_form(ctx, 1))
    _, matsc, ranksc = cpc.averaging_projection()
    assert ranksc == [1] == cpc.special
    q = matsc[0]
    assert q * q == q and q.dagger() == q


@pytest.mark.parametrize("p", [2, 3, 5])
def test_averaging_projection_class_is_special_element(p):
    rng = random.Random(500 + p)
    ctx = ctx_for(p, p)
    for _ in range(4):
        exps = sorted(rng.randrange(p) for _ in range(rng.randint(1, 4)))
        cp = crossed_product(fixed_form(ctx, exps))
        _, mats, ranks = cp.averaging_projection()
        assert ranks == cp.special
        assert cp.special == [exps.count(k) for k in range(p)]
        for q in mats:
            assert q * q == q and q.dagger() == q
    cp = crossed_product(cycle_form(ctx, 2))
    _, mats, ranks = cp.averaging_projection()
    assert ranks == cp.special == [2]


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_double_crossed_product_single_block(p, n):
    ctx = ctx_for(p, p * p)
    exps = sorted((i % p) for i in range(n))
    form = fixed_form(ctx, exps)
    cp = crossed_product(form)
    dual = decompose(cp.dual_system())
    cp2 = crossed_product(dual)
    assert cp2.block_sizes == [p * n]
    assert sum(b * b for b in cp2.block_sizes) == p * p * n * n


def test_double_crossed_dimension_law_cycle_piece():
    ctx = ctx_for(2)
    form = cycle_form(ctx, 2)        # dim = 2 * 4 = 8
    cp = crossed_product(form)
    dual = decompose(cp.dual_system())
    cp2 = crossed_product(dual)
    assert sum(b * b for b in cp2.block_sizes) == 4 * 8


def test_extension_of_identity_is_identity():
    from afzp.system import identity_hom
    ctx = ctx_for(2)
    c = fixed_form(ctx, [0, 1])
    cp = crossed_product(c)
    ext = extend_hom(identity_hom(c), cp, cp)
    rng = random.Random(3)
    for _ in range(5):
        mats = [rand_mat(ctx, rng, n) for n in cp.block_sizes]
        assert ext.apply(mats) == mats


def test_extension_induced_classes():
    # psi: M1 -> M2, a -> a I2 into (M2, Ad diag(1, -1)): both minimal
    # projections of the two-summand crossed product map to class (1, 1)
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt, [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                                     Mat.identity(ctx, 2))], unital=True)
    cpa, cpb = crossed_product(src), crossed_product(tgt)
    ext = extend_hom(h, cpa, cpb)
    for summand in range(2):
        mats = [Mat.zero(ctx, 1, 1), Mat.zero(ctx, 1, 1)]
        mats[summand] = Mat.identity(ctx, 1)
        image = ext.apply(mats)
        assert [m.trace().rational_part() for m in image] == [1, 1]


def test_extension_maps_averaging_projection_to_averaging_projection():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt, [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                                     Mat.identity(ctx, 2))], unital=True)
    cpa, cpb = crossed_product(src), crossed_product(tgt)
    ext = extend_hom(h, cpa, cpb)
    _, qa, _ = cpa.averaging_projection()
    _, qb, _ = cpb.averaging_projection()
    assert ext.apply(qa) == qb


def test_extension_intertwines_duals():
    rng = random.Random(77)
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt, [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                                     Mat.identity(ctx, 2))], unital=True)
    cpa, cpb = crossed_product(src), crossed_product(tgt)
    ext = extend_hom(h, cpa, cpb)
    for _ in range(8):
        mats = cpa.identify(rand_element(cpa, rng))
        assert ext.apply(cpa.dual_apply(mats)) == \
            cpb.dual_apply(ext.apply(mats))


def test_extend_hom_rejects_nonequivariant():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0, 1])
    tgt = fixed_form(ctx, [0, 0, 0, 1])
    h = EqHom(src, tgt, [Arrangement([Slot(0, 2), Slot(0, 2)],
                                     Mat.identity(ctx, 4))], unital=True)
    with pytest.raises(NotEquivariant):
        extend_hom(h, crossed_product(src), crossed_product(tgt))


def test_identify_matrix_shape():
    ctx = ctx_for(2)
    cp = crossed_product(fixed_form(ctx, [0, 1]))
    m = cp.identify_matrix()
    assert m.rows == 8 and m.cols == 8
