import random

import pytest

from afzp.cyclo import make_root
from afzp.errors import (AfzpError, NonDiagonalizableWithinField,
                         SystemMismatch)
from afzp.matrix import Mat
from afzp.system import (Arrangement, EqHom, FdSystem, Slot, decompose,
                         equal_as_maps, hom_compose, hom_validate,
                         identity_hom, recover_inner_unitary, transport,
                         validate)

from conftest import ctx_for, fixed_form


def diag_system(ctx, values, p=None):
    return FdSystem(ctx, p or ctx.p, [len(values)], (0,),
                    [Mat.diag(ctx, values)])


def test_validate_accepts_order_p_inner_action():
    ctx = ctx_for(2)
    assert validate(diag_system(ctx, [1, -1])).ok


def test_validate_rejects_wrong_order():
    ctx = ctx_for(2)
    bad = diag_system(ctx, [ctx.one, make_root(ctx, 4)])   # diag(1, i)
    rep = validate(bad)
    assert not rep.ok
    assert any("order p" in item.name for item in rep.failures())


def test_validate_reports_nonunitary():
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1], (0,), [Mat.from_rows(ctx, [[2]])])
    rep = validate(s)
    assert any("unitary" in item.name for item in rep.failures())


def test_decompose_fixed_block_keeps_sorted_diagonal():
    ctx = ctx_for(2)
    c = decompose(diag_system(ctx, [1, 1, 1, -1]))
    assert len(c.pieces) == 1
    assert c.pieces[0].kind == "fixed"
    assert c.pieces[0].v == Mat.diag(ctx, [1, 1, 1, -1])


def test_decompose_sorts_unsorted_diagonal():
    ctx = ctx_for(2)
    c = decompose(diag_system(ctx, [-1, 1, -1, 1]))
    assert c.pieces[0].v == Mat.diag(ctx, [1, 1, -1, -1])
    # the rewriting transports the action exactly (checked inside), and
    # transports elements consistently
    s = diag_system(ctx, [-1, 1, -1, 1])
    a = s.unit_tuple(0, 0, 0)
    moved = transport(s, c, a)
    assert moved[0].trace() == ctx.one


def test_decompose_trivial_swap_cycle():
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1, 1], (1, 0), [Mat.identity(ctx, 1)] * 2)
    c = decompose(s)
    assert len(c.pieces) == 1
    assert c.pieces[0].kind == "cycle" and c.pieces[0].n == 1


def test_decompose_absorbs_holonomy_twist():
    # blocks (1,1), swap, impl (1, -1): holonomy -1, absorbed by a
    # fourth root of unity; conjugated action is the exact swap
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1, 1], (1, 0),
                 [Mat.identity(ctx, 1), Mat.diag(ctx, [-1])])
    c = decompose(s)     # internal check verifies exactness on all units
    assert c.pieces[0].kind == "cycle"
    zs = [c.iso.conjugators[i].entries[0][0] for i in range(2)]
    # the nontrivial conjugator is a primitive fourth root of unity
    assert zs[0] == ctx.one
    assert zs[1] ** 4 == ctx.one and zs[1] ** 2 != ctx.one
    # direct multiplication: transported action is the exact swap
    for (i, j) in ((0, 0), (1, 1)):
        a = s.unit_tuple(i, 0, 0)
        lhs = transport(s, c, s.apply_action(a))
        rhs = c.apply_action(transport(s, c, a))
        assert lhs == rhs


def test_decompose_diagonalizes_monomial_unitary():
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [2], (0,), [Mat.permutation(ctx, [1, 0])])
    c = decompose(s)
    assert c.pieces[0].v == Mat.diag(ctx, [1, -1])


def test_decompose_monomial_p3():
    ctx = ctx_for(3)
    shift = Mat.permutation(ctx, [1, 2, 0])
    c = decompose(FdSystem(ctx, 3, [3], (0,), [shift]))
    assert c.pieces[0].v == Mat.diag(
        ctx, [ctx.zeta_p(0), ctx.zeta_p(1), ctx.zeta_p(2)])


def test_decompose_rejects_dense_unitary():
    # a genuinely non-monomial implementing unitary is refused rather
    # than approximated
    ctx = ctx_for(2)
    g = ctx.sqrt_group_order().inv()
    h = Mat.from_rows(ctx, [[g, g], [g, -1 * g]])   # Hadamard-type
    assert h.is_unitary()
    with pytest.raises(NonDiagonalizableWithinField):
        decompose(FdSystem(ctx, 2, [2], (0,), [h]))


def test_decompose_idempotent_on_canonical_systems():
    ctx = ctx_for(2)
    c = decompose(diag_system(ctx, [1, -1]))
    again = decompose(c.system())
    assert again.pieces == c.pieces
    assert all(z == Mat.identity(ctx, z.rows)
               for z in again.iso.conjugators)

    cyc = decompose(FdSystem(ctx, 2, [1, 1], (1, 0),
                             [Mat.identity(ctx, 1)] * 2))
    again = decompose(cyc.system())
    assert again.pieces == cyc.pieces
    assert all(z == Mat.identity(ctx, z.rows)
               for z in again.iso.conjugators)


def test_decompose_piece_order_deterministic():
    # fixed pieces first, then cycles; fixed sorted by size then diagonal
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1, 1, 2, 1],
                 (0, 3, 2, 1),
                 [Mat.identity(ctx, 1), Mat.identity(ctx, 1),
                  Mat.diag(ctx, [1, -1]), Mat.identity(ctx, 1)])
    c = decompose(s)
    kinds = [(pc.kind, pc.n) for pc in c.pieces]
    assert kinds == [("fixed", 1), ("fixed", 2), ("cycle", 1)]


def test_orbit_sizes_are_one_or_p():
    ctx = ctx_for(3)
    s = FdSystem(ctx, 3, [1, 1], (1, 0),
                 [Mat.identity(ctx, 1)] * 2)     # sigma^3 != id
    rep = validate(s)
    assert not rep.ok


def test_recover_inner_unitary_identity_action():
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [2], (0,), [Mat.identity(ctx, 2)])
    assert recover_inner_unitary(s, 0) == Mat.identity(ctx, 2)


def test_recover_inner_unitary_from_linear_map():
    ctx = ctx_for(2)
    s = diag_system(ctx, [1, -1])
    u0 = Mat.diag(ctx, [1, -1])

    def action(x):
        return u0 * x * u0.dagger()

    u = recover_inner_unitary(s, 0, action=action)
    # determined up to an allowed scalar; normal form starts with 1
    assert u == Mat.diag(ctx, [1, -1])
    assert u.power(2) == Mat.identity(ctx, 2)


def test_recover_inner_unitary_rejects_transpose():
    ctx = ctx_for(2)
    s = diag_system(ctx, [1, -1])

    def transpose(x):
        return Mat(ctx, 2, 2, [[x.entries[j][i] for j in range(2)]
                               for i in range(2)])

    with pytest.raises(AfzpError):
        recover_inner_unitary(s, 0, action=transpose)


def test_recover_inner_unitary_needs_fixed_block():
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1, 1], (1, 0), [Mat.identity(ctx, 1)] * 2)
    with pytest.raises(SystemMismatch):
        recover_inner_unitary(s, 0)


def test_hom_validate_identity():
    ctx = ctx_for(2)
    c = decompose(diag_system(ctx, [1, 1, 1, -1]))
    assert hom_validate(identity_hom(c)).ok


def test_hom_validate_naive_doubling_fails_with_witness():
    # a -> diag(a, a) from (M2, Ad diag(1,-1)) into (M4, Ad diag(1,1,1,-1))
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0, 1])
    tgt = fixed_form(ctx, [0, 0, 0, 1])
    h = EqHom(src, tgt,
              [Arrangement([Slot(0, 2), Slot(0, 2)], Mat.identity(ctx, 4))],
              unital=True)
    rep = hom_validate(h)
    assert not rep.ok
    bad = [item for item in rep.failures() if item.name == "equivariance"]
    assert bad and "unit" in bad[0].detail


def test_hom_validate_unital_embedding():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt,
              [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                           Mat.identity(ctx, 2))], unital=True)
    rep = hom_validate(h)
    assert rep.ok


def test_hom_validate_flags_wrong_unital_flag():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt,
              [Arrangement([Slot(0, 1), Slot(None, 1)],
                           Mat.identity(ctx, 2))], unital=True)
    rep = hom_validate(h)
    assert any("unital" in item.name for item in rep.failures())


def test_hom_compose_identity_is_neutral():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt,
              [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                           Mat.identity(ctx, 2))], unital=True)
    assert hom_compose(identity_hom(tgt), h) == h
    assert hom_compose(h, identity_hom(src)) == h


def test_hom_compose_multiplicities_multiply():
    # M1 -> M2 -> M4 unital embeddings of trivial systems
    ctx = ctx_for(2)
    forms = [fixed_form(ctx, [0] * (2 ** k)) for k in range(3)]
    h1 = EqHom(forms[0], forms[1],
               [Arrangement([Slot(0, 1), Slot(0, 1)], Mat.identity(ctx, 2))],
               unital=True)
    h2 = EqHom(forms[1], forms[2],
               [Arrangement([Slot(0, 2), Slot(0, 2)], Mat.identity(ctx, 4))],
               unital=True)
    comp = hom_compose(h2, h1)
    assert hom_validate(comp).ok
    assert len(comp.arrangements[0].slots) == 4


def test_hom_compose_requires_matching_middle():
    ctx = ctx_for(2)
    src = fixed_form(ctx, [0])
    tgt = fixed_form(ctx, [0, 1])
    h = EqHom(src, tgt,
              [Arrangement([Slot(0, 1, 0), Slot(0, 1, 1)],
                           Mat.identity(ctx, 2))], unital=True)
    with pytest.raises(SystemMismatch):
        hom_compose(h, h)


def test_hom_compose_associative():
    ctx = ctx_for(2)
    forms = [fixed_form(ctx, [0] * (2 ** k)) for k in range(4)]
    homs = []
    for k in range(3):
        n = 2 ** k
        homs.append(EqHom(forms[k], forms[k + 1],
                          [Arrangement([Slot(0, n), Slot(0, n)],
                                       Mat.identity(ctx, 2 * n))],
                          unital=True))
    left = hom_compose(homs[2], hom_compose(homs[1], homs[0]))
    right = hom_compose(hom_compose(homs[2], homs[1]), homs[0])
    assert left == right
    assert equal_as_maps(left, right)


def test_transport_roundtrip_random(rng):
    ctx = ctx_for(2)
    s = FdSystem(ctx, 2, [1, 1, 2], (1, 0, 2),
                 [Mat.identity(ctx, 1), Mat.diag(ctx, [-1]),
                  Mat.diag(ctx, [1, -1])])
    c = decompose(s)
    for _ in range(5):
        a = [Mat.from_rows(ctx, [[rng.randint(-2, 2) for _ in range(n)]
                                 for _ in range(n)])
             for n in s.block_sizes]
        lhs = transport(s, c, s.apply_action(a))
        rhs = c.apply_action(transport(s, c, a))
        assert lhs == rhs
