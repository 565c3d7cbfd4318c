import sympy as sp
from gmpy2 import mpq
from hypothesis import strategies as st

from jacsym.exactnum import Scalar
from jacsym.linalg import PolyMatrix
from jacsym.multipoly import Poly
from jacsym.polymap import PolyMap

SQ2 = sp.sqrt(2)

# criterion number -> "PASS ..." / "FAIL ...", filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])


def syms(n):
    return sp.symbols(f"x1:{n + 1}")


def q_to_sp(q):
    return sp.Rational(int(q.numerator), int(q.denominator))


def s_to_sp(c: Scalar):
    a, b, cc, d = (q_to_sp(q) for q in c.components())
    return a + b * sp.I + cc * SQ2 + d * sp.I * SQ2


def p_to_sp(p: Poly, xs=None):
    xs = xs or syms(p.arity)
    return sp.Add(*[s_to_sp(c) * sp.Mul(*[x**k for x, k in zip(xs, e)]) for e, c in p.terms.items()])


def m_to_sp(F: PolyMap):
    xs = syms(F.n_in)
    return [p_to_sp(p, xs) for p in F]


def pm_to_sp(M: PolyMatrix):
    xs = syms(M.arity)
    return sp.Matrix([[p_to_sp(p, xs) for p in row] for row in M.rows])


def sp_equal(a, b) -> bool:
    return sp.expand(a - b) == 0


def sp_to_scalar(v) -> Scalar:
    """Tower element from a sympy number a + b i + c sqrt2 + d i sqrt2."""
    v = sp.expand(v)
    re, im = v.as_real_imag()
    parts = []
    for w in (re, im):
        w = sp.expand(w)
        c = w.coeff(SQ2)
        a = sp.expand(w - c * SQ2)
        parts.append((sp.Rational(a), sp.Rational(c)))
    (a, c), (b, d) = parts
    return Scalar(*(mpq(int(t.p), int(t.q)) for t in (a, b, c, d)))


def sp_to_poly(expr, n) -> Poly:
    expr = sp.expand(expr)
    if expr == 0:
        return Poly.zero(n)
    P = sp.Poly(expr, *syms(n), domain="EX")
    return Poly(n, {e: sp_to_scalar(c) for e, c in P.terms()})


# ---------------------------------------------------------------------------
# strategies

small_q = st.builds(mpq, st.integers(-6, 6), st.integers(1, 5))
rationals = st.builds(Scalar, small_q)
scalars = st.builds(Scalar, small_q, small_q, small_q, small_q)
gaussians = st.builds(Scalar, small_q, small_q)


@st.composite
def polys(draw, arity=2, max_degree=3, coeffs=rationals, max_terms=4, min_degree=0):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.lists(st.integers(0, max_degree), min_size=arity, max_size=arity)))
        if not (min_degree <= sum(e) <= max_degree):
            continue
        terms[e] = draw(coeffs)
    return Poly(arity, terms)


@st.composite
def maps(draw, n=2, max_degree=3, coeffs=rationals, min_degree=0, max_terms=3):
    return PolyMap(n, [draw(polys(n, max_degree, coeffs, max_terms, min_degree)) for _ in range(n)])


# ---------------------------------------------------------------------------
# brute-force dependence oracle on the n = 2, deg <= 2 grid

GRID_MONOS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
GRID_LAMBDAS = [(a, b) for a in range(-2, 3) for b in range(-2, 3) if (a, b) != (0, 0)]


def grid_map(cs) -> PolyMap:
    """H from 12 integer coefficients, 6 per component over GRID_MONOS."""
    comps = [Poly(2, {m: Scalar(c) for m, c in zip(GRID_MONOS, cs[k:k + 6]) if c}) for k in (0, 6)]
    return PolyMap(2, comps)


def _grid_jacobian_rows(cs):
    # coefficients of dH_k/dx1 and dH_k/dx2 on 1, x1, x2, written out by hand
    _, a1, a2, a11, a12, a22 = cs
    return (a1, 2 * a11, a12), (a2, a12, 2 * a22)


def brute_force_kernel(cs):
    """All lambda in {-2..2}^2 minus 0 with lambda^t JH = 0."""
    r1, r2 = _grid_jacobian_rows(cs[:6]), _grid_jacobian_rows(cs[6:])
    out = []
    for l1, l2 in GRID_LAMBDAS:
        if all(l1 * u + l2 * v == 0 for j in range(2) for u, v in zip(r1[j], r2[j])):
            out.append((l1, l2))
    return out


def grid_span(basis):
    """Grid lambdas in the span of an integer basis of a subspace of Q^2."""
    if not basis:
        return []
    if len(basis) == 2:
        return list(GRID_LAMBDAS)
    v1, v2 = basis[0]
    return [(a, b) for a, b in GRID_LAMBDAS if v1 * b - v2 * a == 0]
