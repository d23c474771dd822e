"""Existence, uniqueness and intertwining.

lift() turns an invariant morphism that passes every pair check into an
explicit unital equivariant hom, by slicing the pair along piece
boundaries, checking the four forced sub-block shapes
(fixed->fixed circulant, fixed->cycle constant row, cycle->fixed
constant column, cycle->cycle circulant) and packing eigenvalue budgets
deterministically: source pieces in canonical order, phases in
increasing exponent, positions in increasing index.

equiv_unitary() produces, for two homs with the same induced invariant
morphism, a unitary W in the fixed-point algebra of the target with
Ad W o h2 = h1, built per target piece and per source piece from
commutant elements of finite order; everything is re-verified exactly
before returning.

intertwine() runs the finite-depth intertwining argument: lift the
invariant morphisms stage by stage, correct each triangle by an inner
equivariant unitary, and record a certificate whose re-verification
recomputes every identity from scratch.
"""

import itertools
from dataclasses import dataclass, field

from .errors import (CaseShapeViolation, CorrectionFailed, KDataMismatch,
                     LiftFailed, PackingInfeasible, PairCheckFailed,
                     ReindexFailed, UnitaryNotFoundInField, AfzpError)
from .kinv import (KPair, check_pair, compose_pairs, imat_mul, induced_map,
                   invariant_of, ivec_mul)
from .matrix import Mat, blockdiag, diag_root_exponents, match_diagonals
from .report import Report
from .system import (Arrangement, EqHom, Slot, equal_as_maps, hom_compose,
                     hom_validate)

__all__ = ["lift", "equiv_unitary", "ksearch", "Tower", "intertwine",
           "IntertwiningCertificate", "verify_certificate",
           "UniquenessWitness", "conjugate_hom"]


# ---------------------------------------------------------------------------
# existence
# ---------------------------------------------------------------------------


def _crossed_offsets(c):
    """First crossed-block index of each piece (p per fixed, 1 per cycle)."""
    out = []
    pos = 0
    for piece in c.pieces:
        out.append(pos)
        pos += c.p if piece.kind == "fixed" else 1
    return out


def _slice(mat, rows, cols):
    return [[mat[r][c] for c in cols] for r in rows]


def _case_params(kp, srcC, tgtC):
    """Per (source piece, target piece) case tag and multiplicity data.

    Raises CaseShapeViolation naming the sub-block when a slice does not
    have the shape forced by equivariance.
    """
    p = srcC.p
    srcK = _crossed_offsets(srcC)
    tgtK = _crossed_offsets(tgtC)
    plans = {}
    for ti, tp in enumerate(tgtC.pieces):
        for si, sp in enumerate(srcC.pieces):
            frows = range(tgtC.piece_offsets[ti],
                          tgtC.piece_offsets[ti] + tp.block_count(p))
            fcols = range(srcC.piece_offsets[si],
                          srcC.piece_offsets[si] + sp.block_count(p))
            prows = range(tgtK[ti], tgtK[ti] + (p if tp.kind == "fixed" else 1))
            pcols = range(srcK[si], srcK[si] + (p if sp.kind == "fixed" else 1))
            fsub = _slice(kp.F, frows, fcols)
            psub = _slice(kp.phi, prows, pcols)
            tag = ("F" if sp.kind == "fixed" else "C") + \
                  ("F" if tp.kind == "fixed" else "C")
            where = "source piece %d -> target piece %d" % (si, ti)
            if tag == "FF":
                lam = [psub[d][0] for d in range(p)]
                for r in range(p):
                    for c in range(p):
                        if psub[r][c] != lam[(r - c) % p]:
                            raise CaseShapeViolation(
                                "phi sub-block not circulant at %s" % where)
                if sum(lam) != fsub[0][0]:
                    raise CaseShapeViolation(
                        "phi row sum differs from F entry at %s" % where)
                plans[(si, ti)] = ("FF", lam)
            elif tag == "FC":
                cval = fsub[0][0]
                if any(fsub[r][0] != cval for r in range(p)):
                    raise CaseShapeViolation(
                        "F sub-block not a constant column at %s" % where)
                if any(psub[0][c] != cval for c in range(p)):
                    raise CaseShapeViolation(
                        "phi sub-block not the matching constant row at %s"
                        % where)
                plans[(si, ti)] = ("FC", cval)
            elif tag == "CF":
                cval = fsub[0][0]
                if any(fsub[0][c] != cval for c in range(p)):
                    raise CaseShapeViolation(
                        "F sub-block not a constant row at %s" % where)
                if any(psub[r][0] != cval for r in range(p)):
                    raise CaseShapeViolation(
                        "phi sub-block not the matching constant column at %s"
                        % where)
                plans[(si, ti)] = ("CF", cval)
            else:
                fvec = [fsub[d][0] for d in range(p)]
                for r in range(p):
                    for c in range(p):
                        if fsub[r][c] != fvec[(r - c) % p]:
                            raise CaseShapeViolation(
                                "F sub-block not circulant at %s" % where)
                if psub[0][0] != sum(fvec):
                    raise CaseShapeViolation(
                        "phi entry differs from F row sum at %s" % where)
                plans[(si, ti)] = ("CC", fvec)
    return plans


def lift(kp, srcC, tgtC):
    """Explicit unital equivariant hom inducing the given pair exactly."""
    invA = invariant_of(srcC)
    invB = invariant_of(tgtC)
    rep = check_pair(kp, invA, invB)
    if not (rep.ok and kp.unital):
        if rep.ok:
            rep.add("unital flag", False, "lift requires a unital pair")
        raise PairCheckFailed(rep)
    ctx = srcC.ctx
    p = srcC.p
    plans = _case_params(kp, srcC, tgtC)
    arrangements = [None] * tgtC.m
    for ti, tp in enumerate(tgtC.pieces):
        if tp.kind == "fixed":
            arrangements[tgtC.piece_offsets[ti]] = \
                _pack_fixed_target(ctx, p, plans, srcC, ti, tp)
        else:
            packed = _pack_cycle_target(ctx, p, plans, srcC, ti, tp)
            for r in range(p):
                arrangements[tgtC.piece_offsets[ti] + r] = packed[r]
    h = EqHom(srcC, tgtC, arrangements, unital=True)
    vrep = hom_validate(h)
    if not vrep.ok:
        raise AfzpError("internal: packed hom fails validation:\n"
                        + vrep.summary())
    got = induced_map(h)
    if got != kp:
        raise AfzpError("internal: packed hom induces a different pair")
    return h


def _pack_fixed_target(ctx, p, plans, srcC, ti, tp):
    n = tp.n
    exps = diag_root_exponents(tp.v, p)
    pools = {m: [i for i, e in enumerate(exps) if e == m] for m in range(p)}
    ptr = {m: 0 for m in range(p)}

    def take(m):
        pool = pools[m]
        if ptr[m] >= len(pool):
            raise PackingInfeasible(
                "eigenvalue budget exhausted at exponent %d of target piece %d"
                % (m, ti))
        pos = pool[ptr[m]]
        ptr[m] += 1
        return pos

    slots = []
    X = Mat.zero(ctx, n, n)
    col = 0
    for si, sp in enumerate(srcC.pieces):
        tag, data = plans[(si, ti)]
        sb = srcC.piece_offsets[si]
        k = sp.n
        if tag == "FF":
            uexps = diag_root_exponents(sp.v, p)
            for d in range(p):
                for _ in range(data[d]):
                    slots.append(Slot(sb, k, phase=d))
                    for i in range(k):
                        X.entries[take((uexps[i] + d) % p)][col + i] = ctx.one
                    col += k
        else:  # CF bundles
            ginv = ctx.sqrt_group_order().inv()
            for _ in range(data):
                base = col
                for j in range(p):
                    slots.append(Slot(sb + j, k))
                    col += k
                for m in range(p):
                    for w in range(k):
                        pos = take(m)
                        for j in range(p):
                            X.entries[pos][base + j * k + w] = \
                                ctx.zeta_p(j * m) * ginv
    if col != n or any(ptr[m] != len(pools[m]) for m in range(p)):
        raise PackingInfeasible("target piece %d not exactly filled" % ti)
    return Arrangement(slots, X)


def _pack_cycle_target(ctx, p, plans, srcC, ti, tp):
    n = tp.n
    out = []
    for r in range(p):
        slots = []
        twists = []
        for si, sp in enumerate(srcC.pieces):
            tag, data = plans[(si, ti)]
            sb = srcC.piece_offsets[si]
            k = sp.n
            if tag == "FC":
                ud = sp.v.dagger().power(r)
                for _ in range(data):
                    slots.append(Slot(sb, k))
                    twists.append(ud)
            else:  # CC
                for d in range(p):
                    for _ in range(data[d]):
                        slots.append(Slot(sb + (r - d) % p, k))
                        twists.append(Mat.identity(ctx, k))
        total = sum(s.size for s in slots)
        if total != n:
            raise PackingInfeasible(
                "cycle target piece %d block %d holds %d of %d"
                % (ti, r, total, n))
        out.append(Arrangement(slots, blockdiag(ctx, twists, total=n)))
    return out


# ---------------------------------------------------------------------------
# uniqueness
# ---------------------------------------------------------------------------


@dataclass
class WitnessEntry:
    target_piece: int
    source_piece: int
    case: str
    L: object = None
    N: object = None
    Z: object = None


@dataclass
class UniquenessWitness:
    entries: list = field(default_factory=list)
    W: list = field(default_factory=list)    # per target block


def _slot_positions(h, t):
    """Offsets of each slot inside target block t's content coordinates."""
    offs = []
    pos = 0
    for slot in h.arrangements[t].slots:
        offs.append(pos)
        pos += slot.size
    return offs


def _corner_isometry(h, t, blocks, interleave=False):
    """Columns of the block-t conjugator at the slots whose source block
    lies in `blocks`, in a canonical order: ascending source block, then
    occurrence order. With interleave=True the order is occurrence-major
    (occurrence 0 of every block, then occurrence 1, ...), the bundle
    layout the packer uses for cycle pieces."""
    ctx = h.source.ctx
    arr = h.arrangements[t]
    offs = _slot_positions(h, t)
    per_block = {b: [] for b in blocks}
    for idx, slot in enumerate(arr.slots):
        if slot.src in per_block:
            per_block[slot.src].append((offs[idx], slot.size))
    ordered = sorted(per_block)
    chosen = []
    if interleave:
        depth = max((len(v) for v in per_block.values()), default=0)
        for b_idx in range(depth):
            for b in ordered:
                if b_idx < len(per_block[b]):
                    chosen.append(per_block[b][b_idx])
    else:
        for b in ordered:
            chosen.extend(per_block[b])
    width = sum(size for _, size in chosen)
    n = h.target.block_sizes[t]
    X = Mat.zero(ctx, n, width)
    col = 0
    for off, size in chosen:
        for j in range(size):
            for i in range(n):
                X.entries[i][col] = arr.conj.entries[i][off + j]
            col += 1
    return X


def _pattern_extract(mat, copies, k):
    """Interpret a (copies*k) square matrix as Bhat  x  I_k in copy-major
    layout (entry ((c,i),(c',i')) = Bhat[c][c'] delta_{ii'}). Returns Bhat
    or None if the pattern fails."""
    ctx = mat.ctx
    out = Mat.zero(ctx, copies, copies)
    for c in range(copies):
        for cc in range(copies):
            val = mat.entries[c * k][cc * k]
            for i in range(k):
                for j in range(k):
                    want = val if i == j else ctx.zero
                    if mat.entries[c * k + i][cc * k + j] != want:
                        return None
            out.entries[c][cc] = val
    return out


def _expand_pattern(bhat, k):
    ctx = bhat.ctx
    copies = bhat.rows
    out = Mat.zero(ctx, copies * k, copies * k)
    for c in range(copies):
        for cc in range(copies):
            v = bhat.entries[c][cc]
            if v.is_zero():
                continue
            for i in range(k):
                out.entries[c * k + i][cc * k + i] = v
    return out


def _unitary_conjugator_search(L1, L2, p):
    """Unitary Z with L1 Z = Z L2 for order-p unitaries in the copy
    pattern. Diagonal pairs are matched by permutation; otherwise the
    character-projection average is tried (rescaled into a unitary when
    a field scalar of the right norm exists), then a bounded search over
    root-of-unity scaled permutations. Failure raises
    UnitaryNotFoundInField."""
    ctx = L1.ctx
    if L1.is_diagonal() and L2.is_diagonal():
        return match_diagonals(L1, L2, p)
    f = L1.rows
    from .matrix import spectral
    try:
        s1 = spectral(L1, p)
        s2 = spectral(L2, p)
    except Exception:
        s1 = s2 = None
    if s1 is not None:
        z0 = Mat.zero(ctx, f, f)
        for d in range(p):
            z0 = z0 + s1.projections[d] * s2.projections[d]
        gram = (z0.dagger() * z0).is_scalar()
        if gram is not None and not gram.is_zero():
            candidates = []
            for row in z0.entries:
                for e in row:
                    if not e.is_zero():
                        candidates.append(e)
                        candidates.append(e * ctx.sqrt_group_order())
            for s in candidates:
                if s.conj() * s == gram:
                    z = z0 * s.inv()
                    if z.is_unitary() and L1 * z == z * L2:
                        return z
    if f > 6:
        raise UnitaryNotFoundInField(
            "non-diagonal commutant elements of size %d exceed the "
            "generalized-permutation search bound" % f)
    roots = [ctx.zeta_p(k) for k in range(p)]
    for perm in itertools.permutations(range(f)):
        base = Mat.permutation(ctx, list(perm))
        for phases in itertools.product(range(p), repeat=f):
            z = base * Mat.diag(ctx, [roots[q] for q in phases])
            if L1 * z == z * L2:
                return z
    raise UnitaryNotFoundInField(
        "no field unitary intertwining the commutant elements was found")


def equiv_unitary(h1, h2):
    """Unitary W in the fixed-point algebra of the target with
    Ad W o h2 = h1, for validated homs with equal induced pairs.

    Returns (W, witness) where W is a tuple of per-target-block unitaries.
    """
    if not (h1.source.same_shape(h2.source)
            and h1.target.same_shape(h2.target)):
        raise KDataMismatch("homs do not share source and target")
    kp1 = induced_map(h1)
    kp2 = induced_map(h2)
    if kp1.F != kp2.F or kp1.phi != kp2.phi:
        raise KDataMismatch("induced invariant morphisms differ",
                            left=(kp1.F, kp1.phi), right=(kp2.F, kp2.phi))
    if not (h1.unital and h2.unital):
        raise KDataMismatch("equivariant correction implemented for unital "
                            "homs only")
    src, tgt = h1.source, h1.target
    ctx = src.ctx
    p = src.p
    witness = UniquenessWitness()
    W = [None] * tgt.m
    for ti, tp in enumerate(tgt.pieces):
        toff = tgt.piece_offsets[ti]
        if tp.kind == "fixed":
            n = tp.n
            V = tp.v
            wt = Mat.zero(ctx, n, n)
            for si, sp in enumerate(src.pieces):
                soff = src.piece_offsets[si]
                blocks = range(soff, soff + sp.block_count(p))
                bundles = sp.kind == "cycle"
                X1 = _corner_isometry(h1, toff, blocks, interleave=bundles)
                X2 = _corner_isometry(h2, toff, blocks, interleave=bundles)
                if X1.cols == 0:
                    continue
                K1 = X1.dagger() * V * X1
                K2 = X2.dagger() * V * X2
                if sp.kind == "fixed":
                    k = sp.n
                    copies = X1.cols // k
                    ubig = blockdiag(ctx, [sp.v] * copies)
                    L1 = K1 * ubig.dagger()
                    L2 = K2 * ubig.dagger()
                    L1h = _pattern_extract(L1, copies, k)
                    L2h = _pattern_extract(L2, copies, k)
                    if L1h is None or L2h is None:
                        raise UnitaryNotFoundInField(
                            "commutant element leaves the copy pattern; "
                            "hom is not of product type")
                    Z = _unitary_conjugator_search(L1h, L2h, p)
                    G = _expand_pattern(Z, k)
                    wt = wt + X1 * G * X2.dagger()
                    witness.entries.append(
                        WitnessEntry(ti, si, "FF", L=L1h, N=L2h, Z=Z))
                else:
                    k = sp.n
                    c = X1.cols // (p * k)
                    A1 = _cycle_corner_blocks(K1, p, c, k)
                    A2 = _cycle_corner_blocks(K2, p, c, k)
                    if A1 is None or A2 is None:
                        raise UnitaryNotFoundInField(
                            "crossing blocks leave the bundle pattern")
                    # telescoping: G_0 = I, G_j = A1_j G_{j-1} A2_j^dagger
                    Gj = [Mat.identity(ctx, c)]
                    for j in range(1, p):
                        Gj.append(A1[j] * Gj[j - 1] * A2[j].dagger())
                    closure = A1[0] * Gj[p - 1] * A2[0].dagger()
                    if closure != Gj[0]:
                        raise CorrectionFailed(
                            (ti, si), "cycle telescoping does not close")
                    G = Mat.zero(ctx, p * c * k, p * c * k)
                    for j in range(p):
                        for b in range(c):
                            for bb in range(c):
                                v = Gj[j].entries[b][bb]
                                if v.is_zero():
                                    continue
                                for w in range(k):
                                    G.entries[_bjw(b, j, w, p, k)][
                                        _bjw(bb, j, w, p, k)] = v
                    wt = wt + X1 * G * X2.dagger()
                    witness.entries.append(
                        WitnessEntry(ti, si, "CF", L=A1, N=A2, Z=Gj))
            W[toff] = wt
        else:
            X1 = _corner_isometry(h1, toff, range(src.m))
            X2 = _corner_isometry(h2, toff, range(src.m))
            w0 = X1 * X2.dagger()
            for r in range(p):
                W[toff + r] = w0
            witness.entries.append(WitnessEntry(ti, -1, "cycle-target", Z=w0))
    # exact re-verification before anything is returned
    for t in range(tgt.m):
        if not W[t].is_unitary():
            raise CorrectionFailed(t, "corner sum is not unitary")
    for ti, tp in enumerate(tgt.pieces):
        toff = tgt.piece_offsets[ti]
        if tp.kind == "fixed":
            if W[toff] * tp.v != tp.v * W[toff]:
                raise CorrectionFailed(ti, "W does not commute with the "
                                           "implementing unitary")
    corrected = conjugate_hom(W, h2)
    if not equal_as_maps(corrected, h1):
        raise CorrectionFailed("*", "Ad W o h2 differs from h1")
    witness.W = W
    return W, witness


def _bjw(b, j, w, p, k):
    """Position of (bundle b, cycle component j, inner index w) in the
    bundle-major content layout used by the packer."""
    return b * p * k + j * k + w


def _cycle_corner_blocks(K, p, c, k):
    """Extract the c x c bundle matrices A_j (scalar x I_k pattern) from
    K, where K maps the (j-1)-component group into the j-component group;
    None if K has support outside those corners or breaks the pattern."""
    ctx = K.ctx
    A = []
    for j in range(p):
        blk = Mat.zero(ctx, c, c)
        A.append(blk)
    for b in range(c):
        for j in range(p):
            for w in range(k):
                row = _bjw(b, j, w, p, k)
                for bb in range(c):
                    for jj in range(p):
                        for ww in range(k):
                            col = _bjw(bb, jj, ww, p, k)
                            e = K.entries[row][col]
                            if jj == (j - 1) % p and ww == w:
                                if w == 0:
                                    A[j].entries[b][bb] = e
                                elif A[j].entries[b][bb] != e:
                                    return None
                            elif not e.is_zero():
                                return None
    return A


def conjugate_hom(W, h):
    """Ad W o h for a per-target-block tuple of unitaries."""
    arrs = [Arrangement(list(arr.slots), W[t] * arr.conj)
            for t, arr in enumerate(h.arrangements)]
    return EqHom(h.source, h.target, arrs, unital=h.unital)


# ---------------------------------------------------------------------------
# invariant-morphism search
# ---------------------------------------------------------------------------


def _perm_of(matrix):
    """Images of a permutation matrix (row index with the 1, per column)."""
    n = len(matrix)
    out = [None] * n
    for c in range(n):
        for r in range(n):
            if matrix[r][c]:
                out[c] = r
    return out


def _entry_orbits(permB, permA):
    """Orbits of (r, c) under the simultaneous permutation action; the
    equivariance constraint forces equal values along each orbit."""
    nB, nA = len(permB), len(permA)
    seen = [[False] * nA for _ in range(nB)]
    orbits = []
    for r in range(nB):
        for c in range(nA):
            if seen[r][c]:
                continue
            orb = []
            rr, cc = r, c
            while not seen[rr][cc]:
                seen[rr][cc] = True
                orb.append((rr, cc))
                rr, cc = permB[rr], permA[cc]
            orbits.append(orb)
    return orbits


def _enumerate_equivariant(permB, permA, bound, row_check):
    """All nonnegative matrices with entries <= bound, constant on
    simultaneous-permutation orbits, accepted by row_check (a predicate
    on complete candidate matrices). Deterministic lexicographic order."""
    nB, nA = len(permB), len(permA)
    orbits = _entry_orbits(permB, permA)
    results = []

    def rec(idx, mat):
        if idx == len(orbits):
            if row_check(mat):
                results.append([row[:] for row in mat])
            return
        for v in range(bound + 1):
            for (r, c) in orbits[idx]:
                mat[r][c] = v
            # prune: completed rows must not overshoot the unit budget
            if row_check(mat, partial=True):
                rec(idx + 1, mat)
        for (r, c) in orbits[idx]:
            mat[r][c] = 0

    rec(0, [[0] * nA for _ in range(nB)])
    return results


def ksearch(invA, invB, bound, unital=True):
    """Exhaustive list of pairs with entries <= bound passing every
    check, in deterministic order."""
    permB = _perm_of(invB.act)
    permA = _perm_of(invA.act)

    def f_check(mat, partial=False):
        img = ivec_mul(mat, invA.unit)
        if unital:
            if partial:
                return all(img[r] <= invB.unit[r] for r in range(invB.m))
            return img == invB.unit
        return True

    fs = _enumerate_equivariant(permB, permA, bound, f_check)
    dualB = _perm_of(invB.dualAct)
    dualA = _perm_of(invA.dualAct)
    out = []
    for F in fs:
        target_iota = imat_mul(invB.iota, F)

        def phi_check(mat, partial=False, _ti=target_iota):
            simg = ivec_mul(mat, invA.special)
            if partial:
                if any(simg[r] > invB.special[r] for r in range(invB.mC)):
                    return False
                comm = imat_mul(mat, invA.iota)
                return all(comm[r][c] <= _ti[r][c] or mat[r] == [0] * invA.mC
                           for r in range(invB.mC) for c in range(invA.m))
            if simg != invB.special:
                return False
            return imat_mul(mat, invA.iota) == _ti

        for phi in _enumerate_equivariant(dualB, dualA, bound, phi_check):
            kp = KPair(F, phi, unital=unital)
            if check_pair(kp, invA, invB).ok:
                out.append(kp)
    return out


# ---------------------------------------------------------------------------
# finite-depth intertwining
# ---------------------------------------------------------------------------


@dataclass
class Tower:
    systems: list            # CanonicalForms
    maps: list               # unital EqHoms between consecutive systems

    def connecting(self, i, j):
        """Composite map from stage i to stage j (i <= j)."""
        if i == j:
            from .system import identity_hom
            return identity_hom(self.systems[i])
        h = self.maps[i]
        for k in range(i + 1, j):
            h = hom_compose(self.maps[k], h)
        return h


def validate_tower(t):
    rep = Report()
    rep.add("stage count", len(t.maps) == len(t.systems) - 1)
    for i, h in enumerate(t.maps):
        rep.add("map %d endpoints" % i,
                h.source.same_shape(t.systems[i])
                and h.target.same_shape(t.systems[i + 1]))
        sub = hom_validate(h)
        rep.add("map %d valid" % i, sub.ok,
                "" if sub.ok else sub.failures()[0].detail or
                sub.failures()[0].name)
        rep.add("map %d unital" % i, h.unital)
    return rep


@dataclass
class TriangleRecord:
    kind: str                # "A" (chi o psi = conn A) or "B"
    left_stage: int
    right_stage: int
    correction: list         # per-target-block unitaries applied


@dataclass
class IntertwiningCertificate:
    towerA: object
    towerB: object
    a_stages: list           # indices into towerA, increasing
    b_stages: list           # indices into towerB, increasing
    forward: list            # EqHom A_{a_i} -> B_{b_i}
    backward: list           # EqHom B_{b_i} -> A_{a_{i+1}}
    triangles: list          # TriangleRecords in construction order
    pairs: list              # invariant morphisms of the forward maps


def intertwine(tA, tB, pairs=None, depth=3, bound=3):
    """Finite-depth intertwining with exact triangle identities.

    pairs may be a list of invariant morphisms A_i -> B_i (one per used
    stage) or None for exhaustive search with the given entry bound. The
    construction walks forward and backward alternately, lifting each
    invariant morphism and correcting the newest hom by an inner
    equivariant unitary so every triangle commutes exactly.
    """
    for name, tower in (("A", tA), ("B", tB)):
        rep = validate_tower(tower)
        if not rep.ok:
            raise AfzpError("tower %s invalid:\n%s" % (name, rep.summary()))
    invsA = [invariant_of(s) for s in tA.systems]
    invsB = [invariant_of(s) for s in tB.systems]
    connA = [induced_map(h) for h in tA.maps]
    connB = [induced_map(h) for h in tB.maps]
    steps = min(depth, len(tA.systems), len(tB.systems))
    a_stages = []
    b_stages = []
    forward = []
    backward = []
    used_pairs = []
    triangles = []
    ai = bi = 0
    for step in range(steps):
        a_stages.append(ai)
        b_stages.append(bi)
        # choose forward pair
        if pairs is not None:
            if step >= len(pairs):
                break
            kp = pairs[step]
            if not check_pair(kp, invsA[ai], invsB[bi]).ok:
                raise ReindexFailed(
                    "given pair %d fails the invariant checks at stages "
                    "A%d -> B%d" % (step, ai, bi))
            if step > 0:
                want = compose_pairs(kp, backward_kp)
                have = _compose_range(connB, b_stages[step - 1], bi)
                if want != have:
                    raise ReindexFailed(
                        "given pair %d does not close the invariant "
                        "triangle at B%d -> B%d" % (step, b_stages[step - 1],
                                                    bi))
            fkp = kp
        else:
            fkp = None
            for cand in ksearch(invsA[ai], invsB[bi], bound):
                if step == 0:
                    fkp = cand
                    break
                want = _compose_range(connB, b_stages[step - 1], bi)
                if compose_pairs(cand, backward_kp) == want:
                    fkp = cand
                    break
            if fkp is None:
                raise ReindexFailed(
                    "no invariant morphism with entries <= %d found from "
                    "A%d to B%d closing the previous triangle" % (bound, ai,
                                                                  bi))
        try:
            psi = lift(fkp, tA.systems[ai], tB.systems[bi])
        except AfzpError as exc:
            raise LiftFailed(("A%d->B%d" % (ai, bi)), exc)
        if step > 0:
            # close triangle: psi o chi_prev = conn B
            conn = tB.connecting(b_stages[step - 1], bi)
            composite = hom_compose(psi, backward[-1])
            try:
                w, _ = equiv_unitary(conn, composite)
            except AfzpError as exc:
                raise CorrectionFailed(("B%d->B%d" % (b_stages[step - 1], bi)),
                                       exc)
            psi = conjugate_hom(w, psi)
            triangles.append(TriangleRecord("B", b_stages[step - 1], bi, w))
        forward.append(psi)
        used_pairs.append(fkp)
        if step == steps - 1 or ai + 1 >= len(tA.systems) \
                or bi + 1 >= len(tB.systems):
            break
        # backward pair: B_bi -> A_{ai+1} closing the A triangle
        next_ai = ai + 1
        want = _compose_range(connA, ai, next_ai)
        backward_kp = None
        for cand in ksearch(invsB[bi], invsA[next_ai], bound):
            if compose_pairs(cand, fkp) == want:
                backward_kp = cand
                break
        if backward_kp is None:
            raise ReindexFailed(
                "no invariant morphism with entries <= %d found from B%d "
                "to A%d closing the forward triangle" % (bound, bi, next_ai))
        try:
            chi = lift(backward_kp, tB.systems[bi], tA.systems[next_ai])
        except AfzpError as exc:
            raise LiftFailed(("B%d->A%d" % (bi, next_ai)), exc)
        conn = tA.connecting(ai, next_ai)
        composite = hom_compose(chi, psi)
        try:
            w, _ = equiv_unitary(conn, composite)
        except AfzpError as exc:
            raise CorrectionFailed(("A%d->A%d" % (ai, next_ai)), exc)
        chi = conjugate_hom(w, chi)
        triangles.append(TriangleRecord("A", ai, next_ai, w))
        backward.append(chi)
        ai = next_ai
        bi = bi + 1
    return IntertwiningCertificate(tA, tB, a_stages, b_stages, forward,
                                   backward, triangles, used_pairs)


def _compose_range(conns, i, j):
    """Invariant morphism of the composite connecting map stage i -> j."""
    if i == j:
        raise ValueError("empty range")
    kp = conns[i]
    for k in range(i + 1, j):
        kp = compose_pairs(conns[k], kp)
    return kp


def verify_certificate(cert):
    """Replay every identity in the certificate from scratch."""
    rep = Report()
    repA = validate_tower(cert.towerA)
    rep.add("tower A valid", repA.ok)
    repB = validate_tower(cert.towerB)
    rep.add("tower B valid", repB.ok)
    for i, psi in enumerate(cert.forward):
        sub = hom_validate(psi)
        rep.add("forward hom %d valid" % i, sub.ok)
        got = induced_map(psi)
        rep.add("forward hom %d induces its pair" % i,
                got == cert.pairs[i])
    for i, chi in enumerate(cert.backward):
        sub = hom_validate(chi)
        rep.add("backward hom %d valid" % i, sub.ok)
    for i, chi in enumerate(cert.backward):
        ai, a_next = cert.a_stages[i], cert.a_stages[i + 1]
        conn = cert.towerA.connecting(ai, a_next)
        rep.add("triangle over A%d -> A%d commutes" % (ai, a_next),
                equal_as_maps(hom_compose(chi, cert.forward[i]), conn))
        bi, b_next = cert.b_stages[i], cert.b_stages[i + 1]
        connb = cert.towerB.connecting(bi, b_next)
        rep.add("triangle over B%d -> B%d commutes" % (bi, b_next),
                equal_as_maps(hom_compose(cert.forward[i + 1], chi), connb))
    for rec in cert.triangles:
        ok = all(w.is_unitary() for w in rec.correction)
        rep.add("correction on triangle %s%d->%d is unitary"
                % (rec.kind, rec.left_stage, rec.right_stage), ok)
    return rep
