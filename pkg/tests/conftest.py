import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mfchern import MatFac, Poly, PolyMatrix, RingCtx, parse_poly


def ring(*names) -> RingCtx:
    return RingCtx(tuple(names))


def mf_1x1(ctx, a: str, b: str) -> MatFac:
    """Rank-(1,1) factorization (a | b) of a*b."""
    A = parse_poly(a, ctx)
    B = parse_poly(b, ctx)
    return MatFac(
        ctx, A * B,
        PolyMatrix(ctx, 1, 1, [[A]]),
        PolyMatrix(ctx, 1, 1, [[B]]),
    )


@pytest.fixture
def ctx_x():
    return ring("x")


@pytest.fixture
def ctx_xy():
    return ring("x", "y")


@pytest.fixture
def ctx_xyz():
    return ring("x", "y", "z")


@pytest.fixture
def power_family(ctx_x):
    """The (x^i | x^(n-i)) factorizations of x^n for n up to 6."""
    out = []
    for n in range(1, 7):
        for i in range(n + 1):
            out.append(mf_1x1(ctx_x, f"x^{i}" if i else "1",
                              f"x^{n - i}" if n - i else "1"))
    return out


@pytest.fixture
def threevar_example(ctx_xyz):
    """The 2x2 factorization of xy + yz + zx."""
    P = lambda s: parse_poly(s, ctx_xyz)
    A = PolyMatrix(ctx_xyz, 2, 2, [[P("z"), P("y")], [P("x"), P("-x-y")]])
    B = PolyMatrix(ctx_xyz, 2, 2, [[P("x+y"), P("y")], [P("x"), P("-z")]])
    return MatFac(ctx_xyz, P("x*y + y*z + z*x"), A, B)


@pytest.fixture
def koszul_xy(ctx_xy):
    return mf_1x1(ctx_xy, "x", "y")


def corpus_list(ctx_x, ctx_xy, ctx_xyz):
    objs = []
    for n in range(1, 7):
        for i in range(n + 1):
            objs.append(mf_1x1(ctx_x, f"x^{i}" if i else "1",
                               f"x^{n - i}" if n - i else "1"))
    objs.append(mf_1x1(ctx_xy, "x", "y"))
    P = lambda s: parse_poly(s, ctx_xyz)
    A = PolyMatrix(ctx_xyz, 2, 2, [[P("z"), P("y")], [P("x"), P("-x-y")]])
    B = PolyMatrix(ctx_xyz, 2, 2, [[P("x+y"), P("y")], [P("x"), P("-z")]])
    objs.append(MatFac(ctx_xyz, P("x*y + y*z + z*x"), A, B))
    return objs


@pytest.fixture
def corpus(ctx_x, ctx_xy, ctx_xyz):
    return corpus_list(ctx_x, ctx_xy, ctx_xyz)


# hypothesis strategies -----------------------------------------------------

def monomials(nvars, max_deg=3):
    return st.lists(
        st.integers(min_value=0, max_value=max_deg),
        min_size=nvars, max_size=nvars,
    ).map(tuple)


def coeffs():
    return st.builds(
        Fraction,
        st.integers(min_value=-6, max_value=6),
        st.integers(min_value=1, max_value=4),
    )


def polys(ctx, max_terms=4, max_deg=3):
    return st.dictionaries(
        monomials(ctx.nvars, max_deg), coeffs(), max_size=max_terms
    ).map(lambda d: Poly(ctx, d))


def rand_poly(rng: random.Random, ctx, max_deg=2, max_terms=3) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = tuple(rng.randint(0, max_deg) for _ in range(ctx.nvars))
        terms[m] = Fraction(rng.randint(-4, 4))
    return Poly(ctx, terms)
