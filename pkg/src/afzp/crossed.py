"""Explicit crossed products of canonical systems by the order-p action.

The crossed product is always materialized through its identification
with a direct sum of matrix blocks, never as an abstract twisted
algebra:

* a fixed piece (M_n, V) contributes p crossed blocks of size n; the
  r-th block receives sum_j zeta_p^(-r*j) a_j V^j. The character
  attached to a block is the negative one, which makes the class of the
  averaging projection land exactly on the eigenvalue-count vector of V.
* a cycle piece (p copies of M_n, shift) contributes one crossed block
  of size p*n, filled grid-wise: grid block (r, c) holds coefficient
  (c - r) mod p evaluated at piece component (-r) mod p.

The dual generator scales coefficient j by zeta_p^(-j); in identified
coordinates it cyclically rotates the blocks of a fixed piece (block r
receives block r+1) and acts on a cycle piece's single block by
conjugation with diag(1, zeta_p, ..., zeta_p^(p-1)) x I_n.
"""

from dataclasses import dataclass

from .errors import NonIntegralMultiplicity, NotEquivariant, ShapeMismatch
from .matrix import Mat, spectral
from .system import FdSystem, hom_validate
from ._rat import is_integer

__all__ = ["CrossedElement", "CrossedPresentation", "crossed_product",
           "extend_hom", "ExtendedHom"]


@dataclass
class CrossedElement:
    """Coefficient tuple (a_0, ..., a_{p-1}) standing for sum a_j U^j;
    each a_j is a tuple of per-block matrices of the source algebra."""
    coeffs: list

    def __eq__(self, other):
        return isinstance(other, CrossedElement) and self.coeffs == other.coeffs


class CrossedPresentation:
    def __init__(self, source):
        self.source = source
        self.ctx = source.ctx
        self.p = source.p
        self.block_sizes = []
        self.piece_first_block = []
        self.special = []
        p = self.p
        for piece in source.pieces:
            self.piece_first_block.append(len(self.block_sizes))
            if piece.kind == "fixed":
                self.block_sizes.extend([piece.n] * p)
                counts = spectral(piece.v, p).multiplicities
                self.special.extend(counts)
            else:
                self.block_sizes.append(p * piece.n)
                self.special.append(piece.n)
        self._v_powers = {}
        self.iota_matrix = self._build_iota()

    @property
    def m(self):
        return len(self.block_sizes)

    def _vpow(self, piece_idx, j):
        got = self._v_powers.get((piece_idx, j))
        if got is None:
            v = self.source.pieces[piece_idx].v
            got = v.power(j % self.p)
            self._v_powers[(piece_idx, j)] = got
        return got

    def _build_iota(self):
        rows = self.m
        cols = self.source.m
        out = [[0] * cols for _ in range(rows)]
        for idx, piece in enumerate(self.source.pieces):
            cb = self.piece_first_block[idx]
            sb = self.source.piece_offsets[idx]
            if piece.kind == "fixed":
                for r in range(self.p):
                    out[cb + r][sb] = 1
            else:
                for t in range(self.p):
                    out[cb][sb + t] = 1
        return out

    # -- element-level algebra (for property checks) ----------------------

    def zero_element(self):
        return CrossedElement([self.source.zero_tuple() for _ in range(self.p)])

    def embed(self, x):
        """iota(x): coefficient 0 is x, the rest vanish."""
        if len(x) != self.source.m:
            raise ShapeMismatch("tuple has %d blocks, algebra has %d"
                                % (len(x), self.source.m))
        ce = self.zero_element()
        ce.coeffs[0] = list(x)
        return ce

    def canonical_unitary(self, j=1):
        """U^j as a CrossedElement."""
        ce = self.zero_element()
        ce.coeffs[j % self.p] = [Mat.identity(self.ctx, n)
                                 for n in self.source.block_sizes]
        return ce

    def mul(self, x, y):
        """(sum a_j U^j)(sum b_k U^k) with U b U* = alpha(b)."""
        p = self.p
        out = self.zero_element()
        alpha_pows = [list(y.coeffs[k]) for k in range(p)]
        # alpha^j applied lazily per j below
        for j in range(p):
            if j > 0:
                for k in range(p):
                    alpha_pows[k] = self.source.apply_action(alpha_pows[k])
            a = x.coeffs[j]
            if all(m.is_zero() for m in a):
                continue
            for k in range(p):
                b = alpha_pows[k]
                tgt = out.coeffs[(j + k) % p]
                for t in range(self.source.m):
                    tgt[t] = tgt[t] + a[t] * b[t]
        return out

    def adjoint(self, x):
        out = self.zero_element()
        for m_idx in range(self.p):
            j = (-m_idx) % self.p
            a = [mat.dagger() for mat in x.coeffs[j]]
            for _ in range(m_idx):
                a = self.source.apply_action(a)
            out.coeffs[m_idx] = a
        return out

    def dual_coeff(self, x):
        """Dual generator on coefficients: a_j -> zeta_p^(-j) a_j."""
        out = self.zero_element()
        for j in range(self.p):
            w = self.ctx.zeta_p(-j)
            out.coeffs[j] = [mat * w for mat in x.coeffs[j]]
        return out

    # -- identification ----------------------------------------------------

    def identify(self, ce):
        """The *-isomorphism onto the direct sum of matrix blocks."""
        p = self.p
        ctx = self.ctx
        out = []
        for idx, piece in enumerate(self.source.pieces):
            sb = self.source.piece_offsets[idx]
            if piece.kind == "fixed":
                for r in range(p):
                    acc = Mat.zero(ctx, piece.n, piece.n)
                    for j in range(p):
                        a = ce.coeffs[j][sb]
                        if a.is_zero():
                            continue
                        acc = acc + (a * self._vpow(idx, j)) * ctx.zeta_p(-r * j)
                    out.append(acc)
            else:
                n = piece.n
                grid = Mat.zero(ctx, p * n, p * n)
                for r in range(p):
                    comp = (-r) % p
                    for c in range(p):
                        j = (c - r) % p
                        a = ce.coeffs[j][sb + comp]
                        if a.is_zero():
                            continue
                        for i in range(n):
                            for jj in range(n):
                                grid.entries[r * n + i][c * n + jj] = \
                                    a.entries[i][jj]
                out.append(grid)
        return out

    def unidentify(self, mats):
        """Inverse of identify."""
        p = self.p
        ctx = self.ctx
        inv_p = ctx.scalar(1) / ctx.scalar(p)
        ce = self.zero_element()
        for idx, piece in enumerate(self.source.pieces):
            cb = self.piece_first_block[idx]
            sb = self.source.piece_offsets[idx]
            if piece.kind == "fixed":
                for j in range(p):
                    acc = Mat.zero(ctx, piece.n, piece.n)
                    for r in range(p):
                        acc = acc + mats[cb + r] * ctx.zeta_p(r * j)
                    ce.coeffs[j][sb] = (acc * inv_p) * self._vpow(idx, -j % p)
            else:
                n = piece.n
                grid = mats[cb]
                for r in range(p):
                    comp = (-r) % p
                    for c in range(p):
                        j = (c - r) % p
                        sub = Mat.zero(ctx, n, n)
                        for i in range(n):
                            for jj in range(n):
                                sub.entries[i][jj] = \
                                    grid.entries[r * n + i][c * n + jj]
                        ce.coeffs[j][sb + comp] = sub
        return ce

    def identify_matrix(self):
        """Dense matrix of identify: coefficient index major, then source
        block, then row-major entries; same flattening on the output side
        over crossed blocks."""
        ctx = self.ctx
        dim = sum(n * n for n in self.block_sizes)
        src_dim = self.p * sum(n * n for n in self.source.block_sizes)
        cols = []
        for j in range(self.p):
            for s, n in enumerate(self.source.block_sizes):
                for i in range(n):
                    for jj in range(n):
                        ce = self.zero_element()
                        ce.coeffs[j][s] = Mat.zero(ctx, n, n)
                        ce.coeffs[j][s].entries[i][jj] = ctx.one
                        mats = self.identify(ce)
                        col = []
                        for mtx in mats:
                            for row in mtx.entries:
                                col.extend(row)
                        cols.append(col)
        out = Mat.zero(ctx, dim, src_dim)
        for c, col in enumerate(cols):
            for r, val in enumerate(col):
                out.entries[r][c] = val
        return out

    # -- canonical structure ----------------------------------------------

    def averaging_projection(self):
        """q = (1/p) sum_j U^j, its identified image and the per-block
        ranks (which realize the special element)."""
        ctx = self.ctx
        inv_p = ctx.scalar(1) / ctx.scalar(self.p)
        ce = self.zero_element()
        for j in range(self.p):
            ce.coeffs[j] = [Mat.identity(ctx, n) * inv_p
                            for n in self.source.block_sizes]
        mats = self.identify(ce)
        ranks = []
        for mtx in mats:
            t = mtx.trace().rational_part()
            if t is None or not is_integer(t):
                raise NonIntegralMultiplicity("averaging projection rank")
            ranks.append(int(t))
        return ce, mats, ranks

    def dual_system(self):
        """The dual generator as a validated system on the crossed algebra."""
        ctx = self.ctx
        p = self.p
        sizes = list(self.block_sizes)
        sigma = [0] * len(sizes)
        impl = [None] * len(sizes)
        for idx, piece in enumerate(self.source.pieces):
            cb = self.piece_first_block[idx]
            if piece.kind == "fixed":
                for r in range(p):
                    sigma[cb + r] = cb + (r + 1) % p
                    impl[cb + r] = Mat.identity(ctx, piece.n)
            else:
                sigma[cb] = cb
                diag = []
                for r in range(p):
                    diag.extend([ctx.zeta_p(r)] * piece.n)
                impl[cb] = Mat.diag(ctx, diag)
        return FdSystem(ctx, p, sizes, tuple(sigma), impl)

    def dual_apply(self, mats):
        sys = self.dual_system()
        return sys.apply_action(mats)

    def u_rho_identified(self, j=1):
        return self.identify(self.canonical_unitary(j))


def crossed_product(c):
    """Crossed presentation of a canonical form."""
    return CrossedPresentation(c)


class ExtendedHom:
    """Coefficient-wise extension of an equivariant hom to the crossed
    products, exposed in identified matrix coordinates."""

    def __init__(self, hom, cpA, cpB):
        self.hom = hom
        self.cpA = cpA
        self.cpB = cpB

    def apply_coeffs(self, ce):
        return CrossedElement([list(self.hom.apply(ce.coeffs[j]))
                               for j in range(self.cpA.p)])

    def apply(self, mats):
        """Identified-A coordinates in, identified-B coordinates out."""
        ce = self.cpA.unidentify(mats)
        return self.cpB.identify(self.apply_coeffs(ce))

    def matrix(self):
        """Dense matrix of the extension over the identified bases (basis
        order: crossed block major, then row-major entries)."""
        ctx = self.cpA.ctx
        in_dim = sum(n * n for n in self.cpA.block_sizes)
        out_dim = sum(n * n for n in self.cpB.block_sizes)
        out = Mat.zero(ctx, out_dim, in_dim)
        col = 0
        for b, n in enumerate(self.cpA.block_sizes):
            for i in range(n):
                for j in range(n):
                    mats = [Mat.zero(ctx, k, k) for k in self.cpA.block_sizes]
                    mats[b].entries[i][j] = ctx.one
                    image = self.apply(mats)
                    r = 0
                    for mtx in image:
                        for row in mtx.entries:
                            for val in row:
                                out.entries[r][col] = val
                                r += 1
                    col += 1
        return out


def extend_hom(h, cpA, cpB, check=True):
    """Natural extension of a validated equivariant hom to the crossed
    products. check=False skips re-validation for homs already known to
    be equivariant."""
    if not (cpA.source.same_shape(h.source) and cpB.source.same_shape(h.target)):
        raise ShapeMismatch("crossed presentations do not match the hom")
    if check:
        rep = hom_validate(h)
        if not rep.ok:
            raise NotEquivariant("hom fails validation:\n" + rep.summary())
    return ExtendedHom(h, cpA, cpB)
