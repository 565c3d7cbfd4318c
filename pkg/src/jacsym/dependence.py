"""Linear dependence of the components of H, and planar Hessians of rank <= 1."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq

from .exactnum import ONE, ZERO, Scalar
from .linalg import PolyMatrix, nullspace
from .multipoly import Poly
from .polymap import PolyMap, hessian, jacobian


@dataclass(frozen=True)
class DependenceWitness:
    """lambda with lambda^t JH = 0; ``certificate`` is the constant lambda^t H."""

    lam: Tuple[Scalar, ...]
    certificate: Scalar

    def to_json(self) -> dict:
        return {"lambda": [v.to_text() for v in self.lam], "certificate": self.certificate.to_text()}


def _primitive(v: List[Scalar]) -> List[Scalar]:
    # clear denominators and fix the sign when rational; leave tower vectors alone
    if not all(c.is_rational() for c in v):
        return v
    qs = [c.as_rational() for c in v]
    den = lcm(*(int(q.denominator) for q in qs))
    nums = [int(q * den) for q in qs]
    g = gcd(*nums)
    if next(k for k in nums if k) < 0:
        g = -g
    return [Scalar(mpq(k, g)) for k in nums]


def dependence_system(H: PolyMap) -> List[Dict[int, Scalar]]:
    """One row per (column j, monomial m): sum_i lambda_i coeff_m(dH_i/dx_j) = 0."""
    rows: Dict[Tuple[int, tuple], Dict[int, Scalar]] = {}
    JH = jacobian(H)
    for i in range(JH.nrows):
        for j in range(JH.ncols):
            for e, c in JH[i, j].terms.items():
                rows.setdefault((j, e), {})[i] = c
    return [rows[k] for k in sorted(rows)]


def lambda_annihilates(H: PolyMap, lam) -> bool:
    return all(p.is_zero() for p in jacobian(H).left_vector_product(lam))


def solve_dependence(H: PolyMap) -> List[DependenceWitness]:
    """A basis of all lambda with lambda^t JH = 0; empty when H is independent."""
    if not H.is_square():
        raise ValueError("dependence problem needs a square H")
    basis = nullspace(dependence_system(H), H.n_out)
    out = []
    for v in basis:
        lam = tuple(_primitive(v))
        if not lambda_annihilates(H, lam):
            raise RuntimeError(f"solver returned a non-witness {lam}")
        comb = Poly.zero(H.n_in)
        for l, p in zip(lam, H):
            comb = comb + p.scale(l)
        if not comb.is_constant():
            raise RuntimeError("lambda^t H is not constant")
        out.append(DependenceWitness(lam, comb.constant_term()))
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarHessianForm:
    """h = g(a x1 - b x2) + (c x1 - d x2) up to an additive constant."""

    g: Poly
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def reconstruct(self) -> Poly:
        x1, x2 = Poly.var(2, 0), Poly.var(2, 1)
        inner = x1.scale(self.a) - x2.scale(self.b)
        return self.g.subst_into([inner], 2) + x1.scale(self.c) - x2.scale(self.d)

    def to_json(self) -> dict:
        return {
            "g": [{"c": c.to_text(), "e": list(e)} for e, c in self.g.sorted_terms()],
            "a": self.a.to_text(), "b": self.b.to_text(),
            "c": self.c.to_text(), "d": self.d.to_text(),
        }


def _direction(h11: Poly, h12: Poly, h22: Poly) -> Tuple[int, int]:
    """Primitive (a, b), a > 0 or (a = 0, b > 0), with Hh proportional to (a, -b)(a, -b)^t."""
    if h11.is_zero():
        if not h12.is_zero():
            raise ValueError("Hessian is not of rank <= 1")
        return 0, 1
    # h12 = -(b/a) h11 with a constant ratio
    e, c = h11.leading_term()
    r = h12.coefficient(e) / c
    if h12 != h11.scale(r):
        raise ValueError("Hessian entries are not proportional")
    q = -r.as_rational()  # b / a
    a, b = int(q.denominator), int(q.numerator)
    if h22 != h11.scale(Scalar(q * q)):
        raise ValueError("Hessian is not of rank <= 1")
    return a, b


def planar_hessian_decompose(h: Poly) -> PlanarHessianForm:
    """Write h in two variables with det Hh = 0 as g(a x1 - b x2) + (c x1 - d x2).

    g has no terms of degree <= 1; a linear or constant h gives g = 0 and
    a = b = 0.  Only rational coefficients are supported.
    """
    if h.arity != 2:
        raise ValueError("planar Hessian decomposition needs a polynomial in 2 variables")
    if not h.coefficients_in(Scalar.is_rational):
        raise ValueError("planar Hessian decomposition works over the rationals")
    Hh = hessian(h)
    if not Hh.det().is_zero():
        raise ValueError("det of the Hessian is nonzero; h is not of the form g(ax1 - bx2) + linear")
    zero = Scalar()
    if Hh.is_zero():
        lin = h.truncate(1)
        return PlanarHessianForm(Poly.zero(1), zero, zero,
                                 lin.coefficient((1, 0)), -lin.coefficient((0, 1)))
    a, b = _direction(Hh[0, 0], Hh[0, 1], Hh[1, 1])
    t = Poly.var(1, 0)
    # a point on the line a x1 - b x2 = t
    point = [t.scale(Scalar(mpq(1, a))), Poly.zero(1)] if a else [Poly.zero(1), t.scale(Scalar(mpq(-1, b)))]
    q = h.subst_into(point, 1)
    g = q - q.truncate(1)
    form = PlanarHessianForm(g, Scalar(a), Scalar(b), zero, zero)
    rest = h - form.reconstruct()
    if rest.degree() > 1:
        raise RuntimeError("remainder after removing g is not affine")
    form = PlanarHessianForm(g, Scalar(a), Scalar(b), rest.coefficient((1, 0)), -rest.coefficient((0, 1)))
    if (h - form.reconstruct()).degree() > 0:
        raise RuntimeError("reconstruction failed")
    return form


# ---------------------------------------------------------------------------

def _in_row_space(JH: PolyMatrix, i: int) -> bool:
    n = JH.ncols
    e = [Poly.constant(JH.arity, ONE if k == i else ZERO) for k in range(n)]
    stacked = PolyMatrix(list(JH.rows) + [e], JH.arity)
    return stacked.rank() == JH.rank()


def nred_index(H: PolyMap) -> Optional[int]:
    """Smallest i with e_i^t outside the row space of JH over K(x)."""
    JH = jacobian(H)
    for i in range(H.n_in):
        if not _in_row_space(JH, i):
            return i
    return None


def nred_pad(H: PolyMap, d: int, regime: str = "none") -> PolyMap:
    """(H, h) in n + 1 variables: h = x_i^d when det JH = 0 is required, else x_{n+1}^d.

    With regime ``det_zero`` or ``nilpotent`` the new column of the Jacobian
    is zero, so the regime carries over to (H, h).
    """
    if not H.is_square():
        raise ValueError("nred padding needs a square H")
    if d < 1:
        raise ValueError("padding degree must be >= 1")
    n = H.n_in
    lifted = H.reindex(n + 1, list(range(n)))
    if regime == "none":
        h = Poly.var(n + 1, n) ** d
    elif regime in ("det_zero", "nilpotent"):
        i = nred_index(H)
        if i is None:
            raise ValueError("det JH != 0: every e_i lies in the row space")
        h = Poly.var(n + 1, i) ** d
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return PolyMap(n + 1, list(lifted.components) + [h])
