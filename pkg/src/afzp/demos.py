"""Built-in scenario builders.

product_tower builds the tensor-product tower: stage n is the full
matrix algebra of size p^n with the action implemented by the n-fold
tensor power of diag(1, zeta_p, ..., zeta_p^{p-1}), connected by
a -> a (x) 1_p. These connecting maps intertwine the actions exactly, so
the tower self-intertwines and the classification engine runs forward.

naive_doubling_tower builds, stage for stage, the inner actions
implemented by diag(1, ..., 1, -1) on doubling matrix sizes with the
same a -> a (x) 1_2 connecting maps. Those maps do not intertwine the
actions and no invariant morphism between consecutive stages maps the
special element correctly; both failures are demonstrated with explicit
witnesses.
"""

from .cyclo import FieldContext
from .kinv import KPair, check_pair, invariant_of
from .classify import Tower, ksearch
from .matrix import Mat, blockdiag
from .system import (Arrangement, EqHom, FdSystem, Slot, decompose,
                     hom_validate)

__all__ = ["product_tower", "naive_doubling_tower", "identity_pairs"]


def _tensor_swap(ctx, k, p):
    """Permutation T with T (1_p kron a) T^dagger = a kron 1_p."""
    t = Mat.zero(ctx, k * p, k * p)
    for i in range(k):
        for c in range(p):
            t.entries[i * p + c][c * k + i] = ctx.one
    return t


def _reversal(ctx, n):
    return Mat.permutation(ctx, list(range(n - 1, -1, -1)))


def product_tower(p, depth, resorted=False, order=None):
    """Tensor-product tower of depth `depth` (stages p, p^2, ..., p^depth).

    With resorted=True every stage's diagonal is rewritten in reversed
    position order; the stages decompose to the same canonical forms but
    the recorded connecting maps differ by permutations, so intertwining
    against the plain tower needs nontrivial inner corrections.
    """
    ctx = FieldContext(p, order)
    exps = [0]
    stage_exps = []
    for _ in range(depth):
        exps = [(e + d) % p for e in exps for d in range(p)]
        stage_exps.append(exps)
    systems = []
    canon = []
    outer = []     # per stage: extra permutation applied to positions
    for n, se in enumerate(stage_exps):
        size = p ** (n + 1)
        r = _reversal(ctx, size) if resorted else Mat.identity(ctx, size)
        vals = [ctx.zeta_p(e) for e in se]
        v = r * Mat.diag(ctx, vals) * r.dagger()
        sysn = FdSystem(ctx, p, [size], (0,), [v])
        systems.append(sysn)
        canon.append(decompose(sysn))
        outer.append(r)
    maps = []
    for n in range(depth - 1):
        k = p ** (n + 1)
        zs = canon[n].iso.conjugators[0] * outer[n]
        zt = canon[n + 1].iso.conjugators[0] * outer[n + 1]
        conj = zt * _tensor_swap(ctx, k, p) * \
            blockdiag(ctx, [zs.dagger()] * p)
        slots = [Slot(0, k) for _ in range(p)]
        h = EqHom(canon[n], canon[n + 1], [Arrangement(slots, conj)],
                  unital=True)
        rep = hom_validate(h)
        if not rep.ok:
            raise AssertionError("tower map %d invalid:\n%s"
                                 % (n, rep.summary()))
        maps.append(h)
    return Tower(canon, maps)


def identity_pairs(tower, count):
    """Identity invariant morphisms for self-intertwining."""
    out = []
    for i in range(count):
        inv = invariant_of(tower.systems[i])
        F = [[1 if r == c else 0 for c in range(inv.m)] for r in range(inv.m)]
        phi = [[1 if r == c else 0 for c in range(inv.mC)]
               for r in range(inv.mC)]
        out.append(KPair(F, phi))
    return out


def naive_doubling_tower(depth, order=16):
    """The doubling tower with inner actions by diag(1, ..., 1, -1), read
    literally with connecting maps a -> a (x) 1_2.

    Returns a dict with the canonical stages, the per-stage equivariance
    reports of the naive connecting maps (these fail, with the failing
    matrix unit named), and the per-stage exhaustive search results for
    invariant morphisms (empty, with the special-element obstruction
    shown on the scale-forced candidate)."""
    ctx = FieldContext(2, order)
    systems = []
    canon = []
    for n in range(1, depth + 1):
        size = 2 ** n
        vals = [ctx.one] * (size - 1) + [-ctx.one]
        sysn = FdSystem(ctx, 2, [size], (0,), [Mat.diag(ctx, vals)])
        systems.append(sysn)
        canon.append(decompose(sysn))
    hom_reports = []
    searches = []
    obstructions = []
    for n in range(depth - 1):
        k = 2 ** (n + 1)
        zs = canon[n].iso.conjugators[0]
        zt = canon[n + 1].iso.conjugators[0]
        conj = zt * _tensor_swap(ctx, k, 2) * blockdiag(ctx, [zs.dagger()] * 2)
        h = EqHom(canon[n], canon[n + 1],
                  [Arrangement([Slot(0, k), Slot(0, k)], conj)], unital=True)
        hom_reports.append(hom_validate(h))
        invA = invariant_of(canon[n])
        invB = invariant_of(canon[n + 1])
        searches.append(ksearch(invA, invB, 3))
        # the unit-class-forced candidate, shown with its failing check
        forced = KPair([[2]], [[1, 1], [1, 1]])
        obstructions.append(check_pair(forced, invA, invB))
    return {
        "stages": canon,
        "hom_reports": hom_reports,
        "searches": searches,
        "obstructions": obstructions,
    }
