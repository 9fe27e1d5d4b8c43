"""Groebner bases for ideals in Q[x] and for submodules of the form modules.

Everything here is deliberately elementary: Buchberger with the coprimality
criterion and normal pair selection, exact arithmetic throughout.  The module
variant uses a position-over-term order, positions being the k-subsets of
variable indices in lexicographic order; it realizes the submodules
``df ^ Omega^(k-1)`` whose quotients decide equality of homology classes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exterior import Form, exterior_derivative, wedge
from .ring import (
    Monomial,
    Poly,
    RingCtx,
    RingError,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


@dataclass(frozen=True)
class GroebnerBasis:
    ctx: RingCtx
    generators: tuple  # tuple[Poly, ...], monic, reduced, sorted


def _reduce_once(p: Poly, gens) -> Poly:
    """Full multivariate division remainder of p against monic gens."""
    ctx = p.ctx
    remainder = {}
    work = dict(p.terms)
    while work:
        m = max(work, key=ctx.monomial_key)
        c = work.pop(m)
        for g in gens:
            lm = g.leading_monomial()
            if monomial_divides(lm, m):
                q = monomial_div(m, lm)
                # work -= c * x^q * g  (g is monic)
                for gm, gc in g.terms.items():
                    mm = monomial_mul(q, gm)
                    if mm == m:
                        continue
                    work[mm] = work.get(mm, Fraction(0)) - c * gc
                    if not work[mm]:
                        del work[mm]
                break
        else:
            remainder[m] = remainder.get(m, Fraction(0)) + c
    return Poly(ctx, remainder)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    if p.ctx != gb.ctx:
        raise RingError("mismatched ring contexts")
    if not gb.generators:
        return p
    return _reduce_once(p, gb.generators)


def _s_poly(f: Poly, g: Poly) -> Poly:
    lcm = monomial_lcm(f.leading_monomial(), g.leading_monomial())
    mf = monomial_div(lcm, f.leading_monomial())
    mg = monomial_div(lcm, g.leading_monomial())
    ctx = f.ctx
    tf = Poly(ctx, {mf: Fraction(1) / f.leading_coeff()})
    tg = Poly(ctx, {mg: Fraction(1) / g.leading_coeff()})
    return tf * f - tg * g


def buchberger(gens, ctx: RingCtx) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic for a fixed input list."""
    basis = [g.monic() for g in gens if not g.is_zero()]
    if any(g.ctx != ctx for g in basis):
        raise RingError("generator in wrong ring context")
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        # normal strategy: smallest lcm in the ring order, ties by index
        def lcm_key(pair):
            i, j = pair
            lcm = monomial_lcm(
                basis[i].leading_monomial(), basis[j].leading_monomial()
            )
            return (ctx.monomial_key(lcm), i, j)

        pairs.sort(key=lcm_key)
        i, j = pairs.pop(0)
        lmi, lmj = basis[i].leading_monomial(), basis[j].leading_monomial()
        if monomial_mul(lmi, lmj) == monomial_lcm(lmi, lmj):
            continue  # coprime leading terms: S-pair reduces to zero
        r = _reduce_once(_s_poly(basis[i], basis[j]), basis)
        if r.is_zero():
            continue
        basis.append(r.monic())
        k = len(basis) - 1
        pairs.extend((k, t) for t in range(k))
    return GroebnerBasis(ctx, _autoreduce(basis, ctx))


def _autoreduce(basis, ctx):
    # minimalize: drop generators whose lead is divisible by another's
    basis = list(basis)
    keep = []
    for i, g in enumerate(basis):
        lm = g.leading_monomial()
        if any(
            monomial_divides(h.leading_monomial(), lm)
            for j, h in enumerate(basis)
            if j != i and (j < i or h.leading_monomial() != lm)
        ):
            continue
        keep.append(g)
    # fully reduce each against the others
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _reduce_once(g, others) if others else g
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda g: g.ctx.monomial_key(g.leading_monomial()))
    return tuple(reduced)


def is_groebner(gb: GroebnerBasis) -> bool:
    """Verifier pass: every S-polynomial reduces to zero."""
    gens = gb.generators
    for i in range(len(gens)):
        for j in range(i):
            if not _reduce_once(_s_poly(gens[i], gens[j]), gens).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# submodules of Omega^k (free on the k-subsets of variable indices)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModuleGB:
    ctx: RingCtx
    ambient_rank: int
    generators: tuple  # tuple of vectors; vector = tuple[Poly, ...]


def _vec_lead(v, ctx):
    """Leading (position, monomial) under position-over-term order."""
    for pos, p in enumerate(v):
        if not p.is_zero():
            return pos, p.leading_monomial(), p.leading_coeff()
    return None


def _vec_sub_scaled(v, w, mono, coeff, ctx):
    """v - coeff * x^mono * w, componentwise."""
    out = []
    shift = Poly(ctx, {mono: coeff})
    for a, b in zip(v, w):
        out.append(a - shift * b)
    return tuple(out)


def _vec_is_zero(v):
    return all(p.is_zero() for p in v)


def _vec_monic(v, ctx):
    lead = _vec_lead(v, ctx)
    inv = Fraction(1) / lead[2]
    return tuple(p * inv for p in v)


def _vec_reduce(v, gens, ctx):
    """Normal form of vector v against module generators (monic leads)."""
    # iterate: reduce any reducible term in the leading position scheme
    changed = True
    v = tuple(v)
    while changed and not _vec_is_zero(v):
        changed = False
        lead = _vec_lead(v, ctx)
        # full tail reduction: scan every term of every position
        for g in gens:
            gpos, gmono, _ = _vec_lead(g, ctx)
            comp = v[gpos]
            for m in sorted(comp.terms, key=ctx.monomial_key, reverse=True):
                if monomial_divides(gmono, m):
                    q = monomial_div(m, gmono)
                    v = _vec_sub_scaled(v, g, q, comp.terms[m], ctx)
                    changed = True
                    break
            if changed:
                break
    return v


def module_buchberger(vectors, ambient_rank: int, ctx: RingCtx) -> ModuleGB:
    basis = [
        _vec_monic(v, ctx) for v in vectors if not _vec_is_zero(v)
    ]
    for v in basis:
        if len(v) != ambient_rank:
            raise RingError("vector length does not match ambient rank")
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        def lcm_key(pair):
            i, j = pair
            li, lj = _vec_lead(basis[i], ctx), _vec_lead(basis[j], ctx)
            if li[0] != lj[0]:
                return (1, 0, 0, i, j)
            return (0, ctx.monomial_key(monomial_lcm(li[1], lj[1])), li[0], i, j)

        pairs.sort(key=lcm_key)
        i, j = pairs.pop(0)
        li, lj = _vec_lead(basis[i], ctx), _vec_lead(basis[j], ctx)
        if li[0] != lj[0]:
            continue  # S-pairs only within a common leading position
        lcm = monomial_lcm(li[1], lj[1])
        s = _vec_sub_scaled(
            tuple(
                Poly(ctx, {monomial_div(lcm, li[1]): Fraction(1)}) * p
                for p in basis[i]
            ),
            basis[j],
            monomial_div(lcm, lj[1]),
            Fraction(1),
            ctx,
        )
        r = _vec_reduce(s, basis, ctx)
        if _vec_is_zero(r):
            continue
        basis.append(_vec_monic(r, ctx))
        k = len(basis) - 1
        pairs.extend((k, t) for t in range(k))
    # minimal + reduced
    keep = []
    for i, v in enumerate(basis):
        pos, mono, _ = _vec_lead(v, ctx)
        dominated = False
        for j, w in enumerate(basis):
            if i == j:
                continue
            wpos, wmono, _ = _vec_lead(w, ctx)
            if wpos == pos and monomial_divides(wmono, mono):
                if wmono != mono or j < i:
                    dominated = True
                    break
        if not dominated:
            keep.append(v)
    reduced = []
    for i, v in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _vec_reduce(v, others, ctx) if others else v
        if not _vec_is_zero(r):
            reduced.append(_vec_monic(r, ctx))
    reduced.sort(key=lambda v: (_vec_lead(v, ctx)[0], ctx.monomial_key(_vec_lead(v, ctx)[1])))
    return ModuleGB(ctx, ambient_rank, tuple(reduced))


def module_normal_form(v, mgb: ModuleGB):
    if len(v) != mgb.ambient_rank:
        raise RingError("vector length does not match ambient rank")
    return _vec_reduce(tuple(v), mgb.generators, mgb.ctx)


def k_subsets(ctx: RingCtx, k: int):
    """Basis positions of Omega^k: k-subsets in lexicographic order."""
    return list(itertools.combinations(range(ctx.nvars), k))


def df_form(f: Poly) -> Form:
    acc = {}
    for i in range(f.ctx.nvars):
        dp = f.partial_derivative(i)
        if not dp.is_zero():
            acc[(i,)] = dp
    return Form(f.ctx, acc)


def df_image_module_gb(f: Poly, k: int) -> ModuleGB:
    """Groebner basis of im(df^ : Omega^(k-1) -> Omega^k) inside Omega^k."""
    ctx = f.ctx
    n = ctx.nvars
    if not 1 <= k <= n:
        raise RingError(f"degree {k} out of range 1..{n}")
    subsets = k_subsets(ctx, k)
    index_of = {s: i for i, s in enumerate(subsets)}
    df = df_form(f)
    vectors = []
    for K in k_subsets(ctx, k - 1):
        w = wedge(df, Form(ctx, {K: Poly.one(ctx)}))
        if w.is_zero():
            continue
        vec = [Poly.zero(ctx)] * len(subsets)
        for idx, p in w.components.items():
            vec[index_of[idx]] = p
        vectors.append(tuple(vec))
    return module_buchberger(vectors, len(subsets), ctx)


@lru_cache(maxsize=None)
def _cached_df_image_gb(f: Poly, k: int) -> ModuleGB:
    return df_image_module_gb(f, k)


def form_normal_form(w: Form, f: Poly) -> Form:
    """Canonical representative of w modulo im(df^ : Omega^(k-1) -> Omega^k).

    Requires a homogeneous form; degree 0 reduces modulo the zero submodule.
    """
    ctx = w.ctx
    k = w.degree()
    if k is None:
        raise RingError("form must be homogeneous")
    if k == 0 or w.is_zero():
        return w
    if k > ctx.nvars:
        return Form.zero(ctx)
    mgb = _cached_df_image_gb(f, k)
    subsets = k_subsets(ctx, k)
    index_of = {s: i for i, s in enumerate(subsets)}
    vec = [Poly.zero(ctx)] * len(subsets)
    for idx, p in w.components.items():
        vec[index_of[idx]] = p
    nf = module_normal_form(tuple(vec), mgb)
    return Form(ctx, {s: p for s, p in zip(subsets, nf) if not p.is_zero()})
