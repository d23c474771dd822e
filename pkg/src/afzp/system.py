"""Finite-dimensional systems with an order-p action.

A system is a direct sum of matrix blocks, a block permutation sigma and
one implementing unitary per block; the generating automorphism acts as

    alpha(a)_i = impl[i] * a_{sigma(i)} * impl[i]^dagger.

decompose() rewrites a validated system as a direct sum of canonical
pieces: single blocks with a sorted diagonal implementing unitary of
order p ("fixed" pieces), and p-tuples of equal blocks cyclically
shifted with identity implementing unitaries ("cycle" pieces). The
rewriting is recorded as an explicit block relabelling plus one
conjugating unitary per original block, and is validated exactly.

Equivariant homomorphisms are stored structurally: per target block an
ordered list of source-block slots plus one conjugating unitary, so that

    psi(a)_t = conj_t * blockdiag(slot contents) * conj_t^dagger.

Multiplicativity and *-preservation are then automatic; only
equivariance needs checking, and hom_validate does that exactly on every
matrix unit.
"""

from dataclasses import dataclass, field

from .cyclo import root_exponent
from .errors import (NonDiagonalizableWithinField, NonScalarHolonomy,
                     NormalizationOutsideField, SystemMismatch,
                     TwistNotRootOfUnity, TwistRootOutsideField, AfzpError)
from .matrix import Mat, blockdiag, diag_root_exponents, solve
from .report import Report

__all__ = [
    "FdSystem", "IrredPiece", "BlockIso", "CanonicalForm", "Slot", "EqHom",
    "validate", "decompose", "recover_inner_unitary", "hom_validate",
    "hom_compose", "identity_hom", "equal_as_maps",
]


@dataclass
class FdSystem:
    ctx: object
    p: int
    block_sizes: list
    sigma: tuple          # 0-based images: block i reads from sigma[i]
    impl: list            # one unitary Mat per block

    @property
    def m(self):
        return len(self.block_sizes)

    def apply_action(self, a):
        """alpha(a) for a tuple of per-block matrices."""
        out = []
        for i in range(self.m):
            u = self.impl[i]
            out.append(u * a[self.sigma[i]] * u.dagger())
        return out

    def zero_tuple(self):
        return [Mat.zero(self.ctx, n, n) for n in self.block_sizes]

    def unit_tuple(self, s, i, j):
        """Tuple that is the (i, j) matrix unit in block s, zero elsewhere."""
        a = self.zero_tuple()
        a[s] = Mat.zero(self.ctx, self.block_sizes[s], self.block_sizes[s])
        a[s].entries[i][j] = self.ctx.one
        return a


def _orbits(sigma):
    seen = set()
    orbits = []
    for i in range(len(sigma)):
        if i in seen:
            continue
        orb = [i]
        seen.add(i)
        j = sigma[i]
        while j != i:
            orb.append(j)
            seen.add(j)
            j = sigma[j]
        orbits.append(orb)
    return orbits


def validate(s):
    """Check all structural invariants; report every violation."""
    rep = Report()
    m = s.m
    rep.add("block count", len(s.impl) == m and len(s.sigma) == m,
            "impl/sigma length vs %d blocks" % m)
    if not rep.ok:
        return rep
    rep.add("sigma is a permutation", sorted(s.sigma) == list(range(m)),
            "images %s" % (list(s.sigma),))
    if not rep.ok:
        return rep
    sig_pow = list(range(m))
    for _ in range(s.p):
        sig_pow = [s.sigma[i] for i in sig_pow]
    rep.add("sigma^p = id", sig_pow == list(range(m)))
    for i in range(m):
        ni = s.block_sizes[i]
        rep.add("block %d size matches its sigma-image" % i,
                ni == s.block_sizes[s.sigma[i]])
        mat = s.impl[i]
        rep.add("impl[%d] shape" % i, mat.rows == ni and mat.cols == ni)
        if mat.rows == ni and mat.cols == ni:
            rep.add("impl[%d] unitary" % i, mat.is_unitary())
    if not rep.ok:
        return rep
    for orb in _orbits(s.sigma):
        rep.add("orbit %s has size 1 or p" % (orb,),
                len(orb) in (1, s.p))
        i = orb[0]
        w = Mat.identity(s.ctx, s.block_sizes[i])
        j = i
        for _ in range(s.p):
            w = w * s.impl[j]
            j = s.sigma[j]
        lam = w.is_scalar()
        rep.add("action has order p on orbit %s" % (orb,),
                lam is not None,
                "" if lam is not None else
                "product of implementing unitaries around the orbit is "
                "not scalar")
    return rep


@dataclass
class IrredPiece:
    kind: str             # "fixed" | "cycle"
    n: int
    v: object = None      # fixed: sorted diagonal Mat with V^p = I

    def block_count(self, p):
        return 1 if self.kind == "fixed" else p

    def exponents(self, p):
        return tuple(diag_root_exponents(self.v, p)) if self.kind == "fixed" else ()


@dataclass
class BlockIso:
    """Block relabelling plus per-original-block conjugators: content of
    original block i lands in canonical block block_map[i] as
    conjugators[i] * a_i * conjugators[i]^dagger."""
    block_map: list
    conjugators: list


@dataclass
class CanonicalForm:
    ctx: object
    p: int
    pieces: list
    iso: BlockIso = None

    def __post_init__(self):
        self.block_sizes = []
        self.piece_of_block = []
        self.piece_offsets = []
        for idx, piece in enumerate(self.pieces):
            self.piece_offsets.append(len(self.block_sizes))
            for _ in range(piece.block_count(self.p)):
                self.block_sizes.append(piece.n)
                self.piece_of_block.append(idx)

    @property
    def m(self):
        return len(self.block_sizes)

    def system(self):
        """The canonical form as an explicit FdSystem."""
        sigma = []
        impl = []
        for piece, off in zip(self.pieces, self.piece_offsets):
            if piece.kind == "fixed":
                sigma.append(off)
                impl.append(piece.v)
            else:
                for t in range(self.p):
                    sigma.append(off + (t - 1) % self.p)
                    impl.append(Mat.identity(self.ctx, piece.n))
        return FdSystem(self.ctx, self.p, list(self.block_sizes),
                        tuple(sigma), impl)

    def apply_action(self, a):
        out = list(a)
        for piece, off in zip(self.pieces, self.piece_offsets):
            if piece.kind == "fixed":
                v = piece.v
                out[off] = _diag_conj(v, a[off])
            else:
                for t in range(self.p):
                    out[off + t] = a[off + (t - 1) % self.p]
        return out

    def same_shape(self, other):
        return (self.ctx == other.ctx and self.p == other.p
                and len(self.pieces) == len(other.pieces)
                and all(a.kind == b.kind and a.n == b.n
                        and (a.kind == "cycle" or a.v == b.v)
                        for a, b in zip(self.pieces, other.pieces)))

    def zero_tuple(self):
        return [Mat.zero(self.ctx, n, n) for n in self.block_sizes]

    def unit_tuple(self, s, i, j):
        a = self.zero_tuple()
        a[s] = Mat.zero(self.ctx, self.block_sizes[s], self.block_sizes[s])
        a[s].entries[i][j] = self.ctx.one
        return a


def _diag_conj(v, a):
    """v * a * v^dagger for diagonal unitary v, in O(n^2) scalar ops."""
    n = a.rows
    d = [v.entries[i][i] for i in range(n)]
    dc = [x.conj() for x in d]
    out = Mat.zero(a.ctx, n, n)
    for i in range(n):
        for j in range(n):
            e = a.entries[i][j]
            if not e.is_zero():
                out.entries[i][j] = d[i] * e * dc[j]
    return out


def _sort_conjugator(ctx, exps):
    """Permutation Z with Z * diag(exps) * Z^dagger sorted ascending."""
    order = sorted(range(len(exps)), key=lambda i: (exps[i], i))
    images = [0] * len(exps)
    for t, src in enumerate(order):
        images[src] = t
    return Mat.permutation(ctx, images), [exps[i] for i in order]


def _monomial_structure(u):
    """(perm, phases) with u e_j = phases[j] e_{perm[j]}, or None."""
    n = u.rows
    perm = [None] * n
    phases = [None] * n
    for j in range(n):
        hits = [i for i in range(n) if not u.entries[i][j].is_zero()]
        if len(hits) != 1:
            return None
        perm[j] = hits[0]
        phases[j] = u.entries[hits[0]][j]
    if sorted(perm) != list(range(n)):
        return None
    return perm, phases


def _diagonalize_order_p_monomial(u, p):
    """Unitary Z with Z u Z^dagger diagonal, for monomial u with u^p = I.

    Permutation cycles of length p are rotated into eigenvectors with a
    discrete Fourier combination; the 1/sqrt(p) normalizer is the Gauss
    element, so everything stays in the field.
    """
    ctx = u.ctx
    n = u.rows
    ms = _monomial_structure(u)
    if ms is None:
        raise NonDiagonalizableWithinField(
            "implementing unitary is not monomial; re-present the input "
            "with a diagonal or monomial unitary")
    perm, phases = ms
    cols = Mat.zero(ctx, n, n)    # columns are the new basis vectors
    diag = [None] * n
    seen = set()
    slot = 0
    for start in range(n):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = perm[j]
        if len(cycle) == 1:
            cols.entries[start][slot] = ctx.one
            diag[slot] = phases[start]
            slot += 1
            continue
        if len(cycle) != p:
            raise NonDiagonalizableWithinField(
                "monomial cycle of length %d in an order-%d unitary"
                % (len(cycle), p))
        # balance phases: f_t = gamma_t e_{cycle[t]} with u f_t = f_{t+1}
        gammas = [ctx.one]
        for t in range(p - 1):
            gammas.append(gammas[-1] * phases[cycle[t]])
        ginv = ctx.sqrt_group_order().inv()
        for m_eig in range(p):
            for t in range(p):
                cols.entries[cycle[t]][slot] = (
                    gammas[t] * ctx.zeta_p(-t * m_eig) * ginv)
            diag[slot] = ctx.zeta_p(m_eig)
            slot += 1
    # u * col_k = diag[k] * col_k; so cols^dagger * u * cols is diagonal
    z = cols.dagger()
    return z, Mat.diag(ctx, diag)


def decompose(s, check=True):
    """Canonical form of a validated system, with the explicit rewriting.

    Fixed blocks are scalar-normalized to order p and diagonalized
    (diagonal or monomial implementing unitaries only), then the diagonal
    is sorted. Orbits of size p are rewritten to the standard shift by
    partial products; the leftover holonomy scalar is a root of unity and
    is absorbed by powers of its p-th root.
    """
    rep = validate(s)
    if not rep.ok:
        raise AfzpError("system is not valid:\n" + rep.summary())
    ctx = s.ctx
    p = s.p
    N = ctx.order
    raw_pieces = []   # (sortkey, piece, [(orig block, conjugator), ...])
    for orb in _orbits(s.sigma):
        if len(orb) == 1:
            i = orb[0]
            u = s.impl[i]
            lam = u.power(p).is_scalar()
            if lam is None:
                raise NonScalarHolonomy("block %d" % i)
            mu = _p_th_root_of_inverse(ctx, lam, p)
            v = u * mu
            n = s.block_sizes[i]
            if v.is_diagonal():
                z0 = Mat.identity(ctx, n)
                d = v
            else:
                z0, d = _diagonalize_order_p_monomial(v, p)
            exps = diag_root_exponents(d, p)
            if exps is None:
                raise TwistNotRootOfUnity(
                    "diagonal of block %d is not made of p-th roots" % i)
            zs, sorted_exps = _sort_conjugator(ctx, exps)
            z = zs * z0
            vcan = Mat.diag(ctx, [ctx.zeta_p(e) for e in sorted_exps])
            piece = IrredPiece("fixed", n, vcan)
            raw_pieces.append(((0, n, tuple(sorted_exps), i), piece,
                               [(i, z)]))
        else:
            inv_sigma = [0] * s.m
            for a, b in enumerate(s.sigma):
                inv_sigma[b] = a
            j = min(orb)
            chain = [j]
            for _ in range(p - 1):
                chain.append(inv_sigma[chain[-1]])
            n = s.block_sizes[j]
            w = Mat.identity(ctx, n)
            partials = [w]
            for t in range(1, p):
                w = w * s.impl[chain[t]].dagger()
                partials.append(w)
            holonomy = (s.impl[chain[0]] * partials[-1].dagger()).is_scalar()
            if holonomy is None:
                raise NonScalarHolonomy("orbit %s" % (orb,))
            a_exp = root_exponent(holonomy)
            if a_exp is None:
                raise TwistNotRootOfUnity(
                    "holonomy of orbit %s is not a root of unity" % (orb,))
            if a_exp % p != 0:
                raise TwistRootOutsideField(N * p)
            mu = ctx.root(a_exp // p)
            conjs = [(chain[t], partials[t] * (mu ** t)) for t in range(p)]
            piece = IrredPiece("cycle", n)
            raw_pieces.append(((1, n, (), j), piece, conjs))
    raw_pieces.sort(key=lambda item: item[0])
    pieces = [item[1] for item in raw_pieces]
    block_map = [None] * s.m
    conjugators = [None] * s.m
    pos = 0
    for _, piece, conjs in raw_pieces:
        for (orig, z) in conjs:
            block_map[orig] = pos
            conjugators[orig] = z
            pos += 1
    c = CanonicalForm(ctx, p, pieces, BlockIso(block_map, conjugators))
    if check:
        bad = _iso_defect(s, c)
        if bad is not None:
            raise AfzpError("internal: recorded rewriting fails on %s" % (bad,))
    return c


def _p_th_root_of_inverse(ctx, lam, p):
    """mu with mu^p = lam^{-1}, for lam a root of unity of the field."""
    if lam == ctx.one:
        return ctx.one
    a = root_exponent(lam)
    if a is None:
        raise TwistNotRootOfUnity("scalar %r is not a root of unity" % (lam,))
    inv_exp = (ctx.order - a) % ctx.order
    if inv_exp % p != 0:
        raise TwistRootOutsideField(ctx.order * p)
    return ctx.root(inv_exp // p)


def transport(s, c, a):
    """Push a tuple on s through the recorded rewriting onto c."""
    out = c.zero_tuple()
    for i in range(s.m):
        z = c.iso.conjugators[i]
        out[c.iso.block_map[i]] = z * a[i] * z.dagger()
    return out


def transport_back(s, c, b):
    out = s.zero_tuple()
    for i in range(s.m):
        z = c.iso.conjugators[i]
        out[i] = z.dagger() * b[c.iso.block_map[i]] * z
    return out


def _iso_defect(s, c):
    """First matrix unit where transported action differs from canonical,
    or None when the rewriting is exact."""
    for i in range(s.m):
        n = s.block_sizes[i]
        for r in range(n):
            for q in range(n):
                a = s.unit_tuple(i, r, q)
                lhs = transport(s, c, s.apply_action(a))
                rhs = c.apply_action(transport(s, c, a))
                if any(x != y for x, y in zip(lhs, rhs)):
                    return (i, r, q)
    return None


def recover_inner_unitary(s, block_index, action=None):
    """Inner implementing unitary of the action on a sigma-fixed block.

    Solves the intertwining system alpha(x) U = U x over the field, then
    normalizes to U^p = I. The optional `action` is a callable Mat -> Mat
    presenting the automorphism directly (defaults to conjugation by the
    stored implementing unitary).
    """
    if s.sigma[block_index] != block_index:
        raise SystemMismatch("block %d is not sigma-fixed" % block_index)
    ctx = s.ctx
    n = s.block_sizes[block_index]
    p = s.p
    if action is None:
        u0 = s.impl[block_index]
        action = lambda x: u0 * x * u0.dagger()
    # stack the equations alpha(E_ij) U = U E_ij over all matrix units
    rows = []
    for i in range(n):
        for j in range(n):
            e = Mat.zero(ctx, n, n)
            e.entries[i][j] = ctx.one
            a = action(e)
            # row block:  (A kron I - I kron E^T) vec(U) = 0
            lhs = a.kron(Mat.identity(ctx, n)) - \
                Mat.identity(ctx, n).kron(_transpose(e))
            rows.extend(lhs.entries)
    sysmat = Mat(ctx, len(rows), n * n, rows)
    _, basis = solve(sysmat, Mat.zero(ctx, len(rows), 1))
    if len(basis) != 1:
        raise AfzpError(
            "intertwiner space has dimension %d; the map is not an inner "
            "algebra automorphism" % len(basis))
    from .matrix import unvec_row_major
    u = unvec_row_major(basis[0], n, n)
    # deterministic scale: first nonzero entry -> 1
    first = next(e for row in u.entries for e in row if not e.is_zero())
    u = u * first.inv()
    gram = (u.dagger() * u).is_scalar()
    if gram is None:
        raise AfzpError("solver candidate fails unitary intertwining")
    unit = None
    for row in u.entries:
        for e in row:
            if not e.is_zero() and e.conj() * e == gram:
                unit = u * e.inv()
                break
        if unit is not None:
            break
    if unit is None or not unit.is_unitary():
        raise NormalizationOutsideField(
            "no field scalar renders the intertwiner unitary")
    lam = unit.power(p).is_scalar()
    if lam is None:
        raise AfzpError("recovered unitary does not have scalar p-th power")
    try:
        mu = _p_th_root_of_inverse(ctx, lam, p)
    except (TwistNotRootOfUnity, TwistRootOutsideField) as exc:
        raise NormalizationOutsideField(str(exc))
    unit = unit * mu
    # prefer the rescaling whose first nonzero diagonal entry is 1
    for k in range(p):
        cand = unit * ctx.zeta_p(k)
        diag_first = next((cand.entries[i][i] for i in range(n)
                           if not cand.entries[i][i].is_zero()), None)
        if diag_first == ctx.one:
            return cand
    return unit


def _transpose(m):
    return Mat(m.ctx, m.cols, m.rows,
               [[m.entries[j][i] for j in range(m.rows)]
                for i in range(m.cols)])


# -- equivariant homomorphisms -------------------------------------------


@dataclass
class Slot:
    """One source-block copy inside a target block. src None marks an
    explicit zero gap of the given size. phase is engine bookkeeping for
    fixed-to-fixed routings (exponent of the p-th root assigned to the
    copy); it does not enter the hom's value and is excluded from
    comparison."""
    src: object
    size: int
    phase: int = field(default=0, compare=False)


@dataclass
class Arrangement:
    slots: list
    conj: object          # unitary Mat of the target block size


@dataclass
class EqHom:
    source: CanonicalForm
    target: CanonicalForm
    arrangements: list
    unital: bool = True

    def apply(self, a):
        """psi(a) for a tuple over the source canonical blocks."""
        out = []
        for arr, n_t in zip(self.arrangements, self.target.block_sizes):
            ctx = self.source.ctx
            blocks = []
            for slot in arr.slots:
                if slot.src is None:
                    blocks.append(Mat.zero(ctx, slot.size, slot.size))
                else:
                    blocks.append(a[slot.src])
            content = blockdiag(ctx, blocks, total=n_t)
            x = arr.conj
            out.append(x * content * x.dagger())
        return out


def identity_hom(c):
    arrs = []
    for t, n in enumerate(c.block_sizes):
        arrs.append(Arrangement([Slot(t, n)], Mat.identity(c.ctx, n)))
    return EqHom(c, c, arrs, unital=True)


def hom_validate(h):
    """Well-formedness plus exact equivariance on every matrix unit."""
    rep = Report()
    src, tgt = h.source, h.target
    rep.add("block count", len(h.arrangements) == tgt.m)
    if not rep.ok:
        return rep
    gaps = 0
    for t, (arr, n_t) in enumerate(zip(h.arrangements, tgt.block_sizes)):
        total = 0
        for slot in arr.slots:
            if slot.src is None:
                gaps += 1
                total += slot.size
            else:
                ok = (0 <= slot.src < src.m
                      and slot.size == src.block_sizes[slot.src])
                rep.add("slot into target block %d" % t, ok,
                        "source block %r, size %d" % (slot.src, slot.size))
                total += slot.size
        rep.add("target block %d is filled" % t, total == n_t,
                "slots cover %d of %d" % (total, n_t))
        rep.add("conjugator %d unitary" % t,
                arr.conj.rows == n_t and arr.conj.cols == n_t
                and arr.conj.is_unitary())
    rep.add("unital flag consistent", h.unital == (gaps == 0),
            "flag %r with %d zero gaps" % (h.unital, gaps))
    if not rep.ok:
        return rep
    for s in range(src.m):
        k = src.block_sizes[s]
        for i in range(k):
            for j in range(k):
                a = src.unit_tuple(s, i, j)
                lhs = h.apply(src.apply_action(a))
                rhs = tgt.apply_action(h.apply(a))
                for t in range(tgt.m):
                    if lhs[t] != rhs[t]:
                        rep.add("equivariance", False,
                                "fails on unit (%d,%d) of source block %d "
                                "at target block %d" % (i, j, s, t))
                        return rep
    rep.add("equivariance", True,
            "psi(alpha(a)) = beta(psi(a)) on all matrix units")
    return rep


def hom_compose(g, h):
    """g after h. Requires h.target and g.source to be the same form."""
    if not h.target.same_shape(g.source):
        raise SystemMismatch("middle systems differ")
    ctx = g.source.ctx
    arrs = []
    for t, arr_g in enumerate(g.arrangements):
        slots = []
        factors = []
        for slot in arr_g.slots:
            if slot.src is None:
                slots.append(Slot(None, slot.size))
                factors.append(Mat.identity(ctx, slot.size))
            else:
                inner = h.arrangements[slot.src]
                slots.extend(inner.slots)
                factors.append(inner.conj)
        conj = arr_g.conj * blockdiag(ctx, factors,
                                      total=g.target.block_sizes[t])
        arrs.append(Arrangement(slots, conj))
    return EqHom(h.source, g.target, arrs,
                 unital=g.unital and h.unital)


def equal_as_maps(h1, h2):
    """Exact equality as linear maps (checked on all matrix units)."""
    if not (h1.source.same_shape(h2.source)
            and h1.target.same_shape(h2.target)):
        return False
    src = h1.source
    for s in range(src.m):
        k = src.block_sizes[s]
        for i in range(k):
            for j in range(k):
                a = src.unit_tuple(s, i, j)
                if any(x != y for x, y in zip(h1.apply(a), h2.apply(a))):
                    return False
    return True
