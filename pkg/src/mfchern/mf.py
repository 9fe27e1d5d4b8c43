"""Matrix factorizations: objects, strict morphisms, and the constructions
(shift, direct sum, cone, tensor product, Z/2-folding of complexes).

A matrix factorization of a potential f is a pair of free modules with maps
A: E_1 -> E_0 and B: E_0 -> E_1 such that AB = f*I and BA = f*I.  Rank-zero
modules are allowed (empty matrices), so the tensor unit (0 <=> Q) exists.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import Poly, RingCtx, RingError


class ValidationError(ValueError):
    """A construction failed its defining identity; carries the location."""


class PolyMatrix:
    """Immutable rectangular matrix of polynomials with explicit shape."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: RingCtx, rows: int, cols: int, entries):
        entries = tuple(tuple(row) for row in entries)
        if rows < 0 or cols < 0:
            raise RingError("negative matrix shape")
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise RingError("entry grid does not match declared shape")
        for row in entries:
            for e in row:
                if not isinstance(e, Poly) or e.ctx != ctx:
                    raise RingError("matrix entry in wrong ring context")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def zeros(cls, ctx, rows, cols):
        z = Poly.zero(ctx)
        return cls(ctx, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ctx, size):
        one, z = Poly.one(ctx), Poly.zero(ctx)
        return cls(
            ctx, size, size,
            [[one if i == j else z for j in range(size)] for i in range(size)],
        )

    @classmethod
    def from_rows(cls, ctx, rows):
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        return cls(ctx, nr, nc, rows)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ctx != other.ctx:
            raise RingError("mismatched ring contexts")
        if self.cols != other.rows:
            raise RingError(
                f"shape mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly.zero(self.ctx)
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ctx, self.rows, other.cols, out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise RingError("shape mismatch")
        return PolyMatrix(
            self.ctx, self.rows, self.cols,
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        return PolyMatrix(
            self.ctx, self.rows, self.cols,
            [[-e for e in row] for row in self.entries],
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p) -> "PolyMatrix":
        return PolyMatrix(
            self.ctx, self.rows, self.cols,
            [[e * p for e in row] for row in self.entries],
        )

    def kron(self, other: "PolyMatrix") -> "PolyMatrix":
        """Kronecker product, left factor major (basis e_i (x) f_j)."""
        if self.ctx != other.ctx:
            raise RingError("mismatched ring contexts")
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        out = [[None] * cols for _ in range(rows)]
        for i in range(self.rows):
            for j in range(self.cols):
                for a in range(other.rows):
                    for b in range(other.cols):
                        out[i * other.rows + a][j * other.cols + b] = (
                            self.entries[i][j] * other.entries[a][b]
                        )
        return PolyMatrix(self.ctx, rows, cols, out)

    @classmethod
    def block2(cls, tl, tr, bl, br):
        """Assemble [[tl, tr], [bl, br]]; shapes must be consistent."""
        ctx = tl.ctx
        if tl.rows != tr.rows or bl.rows != br.rows:
            raise RingError("row mismatch in block assembly")
        if tl.cols != bl.cols or tr.cols != br.cols:
            raise RingError("column mismatch in block assembly")
        rows = []
        for r1, r2 in zip(tl.entries, tr.entries):
            rows.append(list(r1) + list(r2))
        for r1, r2 in zip(bl.entries, br.entries):
            rows.append(list(r1) + list(r2))
        return cls(ctx, tl.rows + bl.rows, tl.cols + tr.cols, rows)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ctx == other.ctx
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ctx, self.rows, self.cols, self.entries))

    def map_entries(self, fn) -> "PolyMatrix":
        grid = [[fn(e) for e in row] for row in self.entries]
        return PolyMatrix(self.ctx, self.rows, self.cols, grid)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def _check_f_identity(prod: PolyMatrix, f: Poly, label: str):
    for i in range(prod.rows):
        for j in range(prod.cols):
            want = f if i == j else Poly.zero(f.ctx)
            if prod.entries[i][j] != want:
                raise ValidationError(
                    f"{label}: entry ({i},{j}) is not "
                    f"{'f' if i == j else '0'}"
                )


@dataclass(frozen=True)
class MatFac:
    """A matrix factorization (E_1 --A--> E_0 --B--> E_1) of the potential f."""

    ctx: RingCtx
    f: Poly
    A: PolyMatrix  # r0 x r1, the map d_1 : E_1 -> E_0
    B: PolyMatrix  # r1 x r0, the map d_0 : E_0 -> E_1

    @property
    def r0(self) -> int:
        return self.A.rows

    @property
    def r1(self) -> int:
        return self.A.cols

    def __post_init__(self):
        if self.f.ctx != self.ctx:
            raise RingError("potential in wrong ring context")
        if (self.B.rows, self.B.cols) != (self.A.cols, self.A.rows):
            raise RingError("A and B shapes are not transposes of each other")
        _check_f_identity(self.A * self.B, self.f, "A*B != f*I")
        _check_f_identity(self.B * self.A, self.f, "B*A != f*I")


def mf_new(ctx: RingCtx, f: Poly, A: PolyMatrix, B: PolyMatrix) -> MatFac:
    return MatFac(ctx, f, A, B)


def mf_unit(ctx: RingCtx) -> MatFac:
    """The tensor unit (0 <=> Q), a matrix factorization of zero."""
    z = Poly.zero(ctx)
    return MatFac(
        ctx, z, PolyMatrix.zeros(ctx, 1, 0), PolyMatrix.zeros(ctx, 0, 1)
    )


def shift(M: MatFac) -> MatFac:
    return MatFac(M.ctx, M.f, -M.B, -M.A)


def direct_sum(M: MatFac, N: MatFac) -> MatFac:
    if M.ctx != N.ctx:
        raise RingError("mismatched ring contexts")
    if M.f != N.f:
        raise ValidationError("direct sum of factorizations of different potentials")
    ctx = M.ctx
    A = PolyMatrix.block2(
        M.A, PolyMatrix.zeros(ctx, M.r0, N.r1),
        PolyMatrix.zeros(ctx, N.r0, M.r1), N.A,
    )
    B = PolyMatrix.block2(
        M.B, PolyMatrix.zeros(ctx, M.r1, N.r0),
        PolyMatrix.zeros(ctx, N.r1, M.r0), N.B,
    )
    return MatFac(ctx, M.f, A, B)


@dataclass(frozen=True)
class StrictMorphism:
    """Degree-0 map commuting with the differentials on the nose."""

    source: MatFac
    target: MatFac
    alpha0: PolyMatrix  # target.r0 x source.r0
    alpha1: PolyMatrix  # target.r1 x source.r1

    def __post_init__(self):
        ok, why = is_strict_morphism(
            self.alpha0, self.alpha1, self.source, self.target
        )
        if not ok:
            raise ValidationError(why)


def is_strict_morphism(alpha0, alpha1, M: MatFac, N: MatFac):
    """True iff both squares commute exactly; returns (bool, diagnostics)."""
    if M.ctx != N.ctx:
        raise RingError("mismatched ring contexts")
    if M.f != N.f:
        return False, "source and target have different potentials"
    if (alpha0.rows, alpha0.cols) != (N.r0, M.r0):
        raise RingError("alpha0 shape mismatch")
    if (alpha1.rows, alpha1.cols) != (N.r1, M.r1):
        raise RingError("alpha1 shape mismatch")
    lhs = alpha0 * M.A - N.A * alpha1
    if not lhs.is_zero():
        return False, "alpha0 . A_src != A_tgt . alpha1"
    lhs = alpha1 * M.B - N.B * alpha0
    if not lhs.is_zero():
        return False, "alpha1 . B_src != B_tgt . alpha0"
    return True, "ok"


def identity_morphism(M: MatFac) -> StrictMorphism:
    return StrictMorphism(
        M, M, PolyMatrix.identity(M.ctx, M.r0), PolyMatrix.identity(M.ctx, M.r1)
    )


def zero_morphism(M: MatFac, N: MatFac) -> StrictMorphism:
    return StrictMorphism(
        M, N,
        PolyMatrix.zeros(M.ctx, N.r0, M.r0),
        PolyMatrix.zeros(M.ctx, N.r1, M.r1),
    )


@dataclass(frozen=True)
class Homotopy:
    """Odd map; validity is the predicate is_homotopy, not a constructor check."""

    h0: PolyMatrix  # source.r0 -> target.r1
    h1: PolyMatrix  # source.r1 -> target.r0


def is_homotopy(h: Homotopy, alpha: StrictMorphism, beta: StrictMorphism) -> bool:
    """True iff d.h + h.d = alpha - beta holds in both components."""
    if alpha.source is not beta.source and alpha.source != beta.source:
        raise RingError("morphisms must share a source")
    if alpha.target != beta.target:
        raise RingError("morphisms must share a target")
    M, N = alpha.source, alpha.target
    if (h.h0.rows, h.h0.cols) != (N.r1, M.r0):
        raise RingError("h0 shape mismatch")
    if (h.h1.rows, h.h1.cols) != (N.r0, M.r1):
        raise RingError("h1 shape mismatch")
    eq0 = N.A * h.h0 + h.h1 * M.B - (alpha.alpha0 - beta.alpha0)
    eq1 = N.B * h.h1 + h.h0 * M.A - (alpha.alpha1 - beta.alpha1)
    return eq0.is_zero() and eq1.is_zero()


@dataclass(frozen=True)
class ConeResult:
    cone: MatFac
    from_target: StrictMorphism  # N -> cone(alpha)
    to_shifted_source: StrictMorphism  # cone(alpha) -> M[1]


def cone(alpha: StrictMorphism) -> ConeResult:
    """Mapping cone (N_1 + M_0 <=> N_0 + M_1) with its canonical strict maps."""
    M, N = alpha.source, alpha.target
    ctx = M.ctx
    A = PolyMatrix.block2(
        N.A, alpha.alpha0,
        PolyMatrix.zeros(ctx, M.r1, N.r1), -M.B,
    )
    B = PolyMatrix.block2(
        N.B, alpha.alpha1,
        PolyMatrix.zeros(ctx, M.r0, N.r0), -M.A,
    )
    C = MatFac(ctx, M.f, A, B)
    incl = StrictMorphism(
        N, C,
        PolyMatrix.block2(
            PolyMatrix.identity(ctx, N.r0), PolyMatrix.zeros(ctx, N.r0, 0),
            PolyMatrix.zeros(ctx, M.r1, N.r0), PolyMatrix.zeros(ctx, M.r1, 0),
        ),
        PolyMatrix.block2(
            PolyMatrix.identity(ctx, N.r1), PolyMatrix.zeros(ctx, N.r1, 0),
            PolyMatrix.zeros(ctx, M.r0, N.r1), PolyMatrix.zeros(ctx, M.r0, 0),
        ),
    )
    Mshift = shift(M)
    proj = StrictMorphism(
        C, Mshift,
        PolyMatrix.block2(
            PolyMatrix.zeros(ctx, M.r1, N.r0), PolyMatrix.identity(ctx, M.r1),
            PolyMatrix.zeros(ctx, 0, N.r0), PolyMatrix.zeros(ctx, 0, M.r1),
        ),
        PolyMatrix.block2(
            PolyMatrix.zeros(ctx, M.r0, N.r1), PolyMatrix.identity(ctx, M.r0),
            PolyMatrix.zeros(ctx, 0, N.r1), PolyMatrix.zeros(ctx, 0, M.r0),
        ),
    )
    return ConeResult(C, incl, proj)


def contraction_of_identity_cone(M: MatFac) -> Homotopy:
    """Explicit homotopy witnessing id = 0 on cone(id_M)."""
    ctx = M.ctx
    # cone(id): C1 = M1+M0, C0 = M0+M1; h0 = h1 = [[0,0],[I,0]] blockwise
    h0 = PolyMatrix.block2(
        PolyMatrix.zeros(ctx, M.r1, M.r0), PolyMatrix.zeros(ctx, M.r1, M.r1),
        PolyMatrix.identity(ctx, M.r0), PolyMatrix.zeros(ctx, M.r0, M.r1),
    )
    h1 = PolyMatrix.block2(
        PolyMatrix.zeros(ctx, M.r0, M.r1), PolyMatrix.zeros(ctx, M.r0, M.r0),
        PolyMatrix.identity(ctx, M.r1), PolyMatrix.zeros(ctx, M.r1, M.r0),
    )
    return Homotopy(h0, h1)


def tensor(M: MatFac, N: MatFac) -> MatFac:
    """Tensor product of factorizations; the potential is the sum.

    Bases are ordered left factor major: degree 1 is (M1 (x) N0, M0 (x) N1),
    degree 0 is (M0 (x) N0, M1 (x) N1), the differential follows the Koszul
    rule d(m (x) n) = d(m) (x) n + (-1)^|m| m (x) d(n).
    """
    if M.ctx != N.ctx:
        raise RingError("tensor factors must share a ring context")
    ctx = M.ctx
    I = PolyMatrix.identity
    A = PolyMatrix.block2(
        M.A.kron(I(ctx, N.r0)), I(ctx, M.r0).kron(N.A),
        -(I(ctx, M.r1).kron(N.B)), M.B.kron(I(ctx, N.r1)),
    )
    B = PolyMatrix.block2(
        M.B.kron(I(ctx, N.r0)), -(I(ctx, M.r1).kron(N.A)),
        I(ctx, M.r0).kron(N.B), M.A.kron(I(ctx, N.r1)),
    )
    return MatFac(ctx, M.f + N.f, A, B)


# ---------------------------------------------------------------------------
# bounded complexes of free modules and the Z/2-folding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainComplex:
    """Bounded cochain complex of free modules; d_i : C^i -> C^(i+1)."""

    ctx: RingCtx
    min_degree: int
    ranks: tuple  # rank of C^(min_degree + j)
    differentials: tuple  # len(ranks)-1 matrices, d_j: rank j -> rank j+1

    def __post_init__(self):
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise RingError("need one differential per adjacent pair of degrees")
        for j, d in enumerate(self.differentials):
            if (d.rows, d.cols) != (self.ranks[j + 1], self.ranks[j]):
                raise RingError(f"differential {j} has the wrong shape")
        for j in range(len(self.differentials) - 1):
            prod = self.differentials[j + 1] * self.differentials[j]
            if not prod.is_zero():
                raise ValidationError(
                    f"differential does not square to zero at degree "
                    f"{self.min_degree + j}"
                )

    def degree_of(self, j: int) -> int:
        return self.min_degree + j


def fold_complex(C: ChainComplex) -> MatFac:
    """Z/2-folding: even degrees (ascending) in degree 0, odd in degree 1."""
    ctx = C.ctx
    even = [j for j in range(len(C.ranks)) if C.degree_of(j) % 2 == 0]
    odd = [j for j in range(len(C.ranks)) if C.degree_of(j) % 2 == 1]
    r0 = sum(C.ranks[j] for j in even)
    r1 = sum(C.ranks[j] for j in odd)
    z = Poly.zero(ctx)
    A = [[z] * r1 for _ in range(r0)]  # odd -> even blocks
    B = [[z] * r0 for _ in range(r1)]  # even -> odd blocks
    even_off = {}
    off = 0
    for j in even:
        even_off[j] = off
        off += C.ranks[j]
    odd_off = {}
    off = 0
    for j in odd:
        odd_off[j] = off
        off += C.ranks[j]
    for j, d in enumerate(C.differentials):
        src, tgt = j, j + 1
        if C.degree_of(src) % 2 == 1:
            ro, co = even_off[tgt], odd_off[src]
            grid = A
        else:
            ro, co = odd_off[tgt], even_off[src]
            grid = B
        for a in range(d.rows):
            for b in range(d.cols):
                grid[ro + a][co + b] = d.entries[a][b]
    return MatFac(
        ctx, Poly.zero(ctx),
        PolyMatrix(ctx, r0, r1, A), PolyMatrix(ctx, r1, r0, B),
    )


def module_complex(ctx: RingCtx, rank: int = 1) -> ChainComplex:
    """A free module concentrated in degree 0."""
    return ChainComplex(ctx, 0, (rank,), ())


def tensor_complexes(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    """Tensor product of complexes, d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.

    Within total degree k the summands X^i (x) Y^j are ordered with i
    descending; for two-term complexes this makes the folding of the result
    agree with the tensor of the foldings entry for entry.
    """
    if X.ctx != Y.ctx:
        raise RingError("mismatched ring contexts")
    ctx = X.ctx
    lo = X.min_degree + Y.min_degree
    hi = (X.min_degree + len(X.ranks) - 1) + (Y.min_degree + len(Y.ranks) - 1)
    pairs_by_k = {}
    for k in range(lo, hi + 1):
        pairs = []
        for ji in reversed(range(len(X.ranks))):
            i = X.degree_of(ji)
            jj = (k - i) - Y.min_degree
            if 0 <= jj < len(Y.ranks):
                pairs.append((ji, jj))
        pairs_by_k[k] = pairs
    ranks = tuple(
        sum(X.ranks[ji] * Y.ranks[jj] for ji, jj in pairs_by_k[k])
        for k in range(lo, hi + 1)
    )
    diffs = []
    for k in range(lo, hi):
        src_pairs = pairs_by_k[k]
        tgt_pairs = pairs_by_k[k + 1]
        tgt_off = {}
        off = 0
        for p in tgt_pairs:
            tgt_off[p] = off
            off += X.ranks[p[0]] * Y.ranks[p[1]]
        rows = ranks[k + 1 - lo]
        cols = ranks[k - lo]
        z = Poly.zero(ctx)
        grid = [[z] * cols for _ in range(rows)]
        coff = 0
        for ji, jj in src_pairs:
            blk_cols = X.ranks[ji] * Y.ranks[jj]
            # dX (x) 1 component
            if ji + 1 < len(X.ranks) and (ji + 1, jj) in tgt_off:
                blk = X.differentials[ji].kron(PolyMatrix.identity(ctx, Y.ranks[jj]))
                _paste(grid, blk, tgt_off[(ji + 1, jj)], coff)
            # (-1)^i 1 (x) dY component
            if jj + 1 < len(Y.ranks) and (ji, jj + 1) in tgt_off:
                sgn = -1 if X.degree_of(ji) % 2 else 1
                blk = PolyMatrix.identity(ctx, X.ranks[ji]).kron(Y.differentials[jj])
                if sgn < 0:
                    blk = -blk
                _paste(grid, blk, tgt_off[(ji, jj + 1)], coff)
            coff += blk_cols
        diffs.append(PolyMatrix(ctx, rows, cols, grid))
    return ChainComplex(ctx, lo, ranks, tuple(diffs))


def _paste(grid, blk: PolyMatrix, row_off: int, col_off: int):
    for a in range(blk.rows):
        for b in range(blk.cols):
            grid[row_off + a][col_off + b] = blk.entries[a][b]


def embed(M: MatFac, new_ctx: RingCtx) -> MatFac:
    """Re-express M over a ring whose variables include all of M's."""
    from .ring import Poly as _P

    idx = [new_ctx.var_index(v) for v in M.ctx.variables]
    images = tuple(_P.variable(new_ctx, i) for i in idx)

    def conv(p):
        return p.substitute(new_ctx, images)

    return MatFac(
        new_ctx, conv(M.f),
        PolyMatrix(
            new_ctx, M.A.rows, M.A.cols,
            [[conv(e) for e in row] for row in M.A.entries],
        ),
        PolyMatrix(
            new_ctx, M.B.rows, M.B.cols,
            [[conv(e) for e in row] for row in M.B.entries],
        ),
    )
