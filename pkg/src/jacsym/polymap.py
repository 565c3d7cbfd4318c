"""Polynomial maps, Jacobians, composition, conjugation and inversion."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from gmpy2 import mpq

from .exactnum import Scalar, ScalarLike
from .linalg import PolyMatrix, ScalarMatrix
from .multipoly import Poly, monomials_of_degree, variables


class PolyMap:
    """A tuple of polynomials in ``n_in`` variables; immutable."""

    __slots__ = ("n_in", "components")

    def __init__(self, n_in: int, components: Iterable[Poly]):
        comps = tuple(components)
        for p in comps:
            if p.arity != n_in:
                raise ValueError(f"component arity {p.arity} != n_in {n_in}")
        self.n_in = n_in
        self.components = comps

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, variables(n))

    @classmethod
    def zero(cls, n_out: int, n_in: int) -> "PolyMap":
        return cls(n_in, [Poly.zero(n_in)] * n_out)

    @classmethod
    def linear(cls, m: ScalarMatrix) -> "PolyMap":
        """The map x -> M x."""
        n = m.ncols
        xs = variables(n)
        comps = []
        for row in m.rows:
            acc = Poly.zero(n)
            for j, v in enumerate(row):
                if not v.is_zero():
                    acc = acc + xs[j].scale(v)
            comps.append(acc)
        return cls(n, comps)

    @property
    def n_out(self) -> int:
        return len(self.components)

    def is_square(self) -> bool:
        return self.n_in == self.n_out

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.n_in == other.n_in and self.components == other.components

    def __hash__(self):
        return hash((self.n_in, self.components))

    def _check(self, other: "PolyMap"):
        if self.n_in != other.n_in or self.n_out != other.n_out:
            raise ValueError("map shape mismatch")

    def __add__(self, other: "PolyMap") -> "PolyMap":
        self._check(other)
        return PolyMap(self.n_in, [a + b for a, b in zip(self, other)])

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        self._check(other)
        return PolyMap(self.n_in, [a - b for a, b in zip(self, other)])

    def __neg__(self):
        return PolyMap(self.n_in, [-a for a in self])

    def scale(self, c: ScalarLike) -> "PolyMap":
        return PolyMap(self.n_in, [a.scale(c) for a in self])

    def apply_matrix(self, m: ScalarMatrix) -> "PolyMap":
        """The map M . F."""
        if m.ncols != self.n_out:
            raise ValueError("matrix/map size mismatch")
        comps = []
        for row in m.rows:
            acc = Poly.zero(self.n_in)
            for v, p in zip(row, self.components):
                if not v.is_zero() and p:
                    acc = acc + p.scale(v)
            comps.append(acc)
        return PolyMap(self.n_in, comps)

    def h_part(self) -> "PolyMap":
        """H = F - x for a square map F."""
        if not self.is_square():
            raise ValueError("H-part needs a square map")
        return self - PolyMap.identity(self.n_in)

    def degrees(self) -> set:
        out = set()
        for p in self.components:
            out |= p.degrees()
        return out

    def degree(self) -> int:
        return max((p.degree() for p in self.components), default=-1)

    def compose(self, inner: "PolyMap", max_degree: Optional[int] = None) -> "PolyMap":
        """self o inner."""
        if inner.n_out != self.n_in:
            raise ValueError(f"cannot compose: inner has {inner.n_out} outputs, outer takes {self.n_in}")
        return PolyMap(
            inner.n_in,
            [p.subst_into(inner.components, inner.n_in, max_degree) for p in self.components],
        )

    def reverse(self) -> "PolyMap":
        return PolyMap(self.n_in, self.components[::-1])

    def conj(self) -> "PolyMap":
        return PolyMap(self.n_in, [p.conj() for p in self.components])

    def truncate(self, max_degree: int) -> "PolyMap":
        return PolyMap(self.n_in, [p.truncate(max_degree) for p in self.components])

    def part_in_degrees(self, degrees) -> "PolyMap":
        return PolyMap(self.n_in, [p.part_in_degrees(degrees) for p in self.components])

    def reindex(self, arity: int, positions: Sequence[int]) -> "PolyMap":
        return PolyMap(arity, [p.reindex(arity, positions) for p in self.components])

    def concat(self, other: "PolyMap") -> "PolyMap":
        if other.n_in != self.n_in:
            raise ValueError("cannot stack maps on different variable counts")
        return PolyMap(self.n_in, self.components + other.components)

    def linear_part(self) -> ScalarMatrix:
        n = self.n_in
        rows = []
        for p in self.components:
            rows.append([p.coefficient(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)])
        return ScalarMatrix(rows)

    def constant_part(self):
        return tuple(p.constant_term() for p in self.components)

    def coefficients_in(self, field_test) -> bool:
        return all(p.coefficients_in(field_test) for p in self.components)

    def jacobian(self) -> PolyMatrix:
        return jacobian(self)

    def to_str(self, names=None) -> str:
        return "(" + ", ".join(p.to_str(names) for p in self.components) + ")"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"PolyMap({self.n_in}, {self.to_str()!r})"


def jacobian(H: PolyMap) -> PolyMatrix:
    if H.n_out == 0 or H.n_in == 0:
        raise ValueError("Jacobian of an empty map")
    return PolyMatrix([[p.diff(j) for j in range(H.n_in)] for p in H.components])


def gradient(f: Poly, order: Optional[Sequence[int]] = None) -> PolyMap:
    """Partial derivatives of f, listed in the given variable order."""
    order = range(f.arity) if order is None else order
    return PolyMap(f.arity, [f.diff(j) for j in order])


def hessian(f: Poly) -> PolyMatrix:
    return jacobian(gradient(f))


def gradient_hessian(f: Poly):
    g = gradient(f)
    return g, jacobian(g)


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    return F.compose(G)


def reverse_map(F: PolyMap) -> PolyMap:
    return F.reverse()


def power_map(v: PolyMap, d: int) -> PolyMap:
    """Componentwise d-th power v^{*d}."""
    return PolyMap(v.n_in, [p ** d for p in v.components])


def linear_conjugate(F: PolyMap, T: ScalarMatrix) -> PolyMap:
    """T^{-1} F(T x)."""
    if not T.is_square():
        raise ValueError("conjugating matrix must be square")
    if not F.is_square() or T.nrows != F.n_in:
        raise ValueError(f"size mismatch: map {F.n_out}x{F.n_in}, matrix {T.shape}")
    Tinv = T.inverse()  # raises ZeroDivisionError on singular T
    return F.compose(PolyMap.linear(T)).apply_matrix(Tinv)


@dataclass(frozen=True)
class FormalInverse:
    inverse: PolyMap
    max_degree: int
    exact: bool


def default_inverse_degree(F: PolyMap) -> int:
    d = max(F.degree(), 1)
    return d ** max(F.n_in - 1, 1)


def formal_inverse(F: PolyMap, max_degree: Optional[int] = None) -> FormalInverse:
    """Truncated formal inverse of F = x + H with H of order >= 2.

    Iterates G <- x - H(G) modulo degree > max_degree, then certifies G as
    an exact polynomial inverse iff F(G) = x without truncation.
    """
    if not F.is_square():
        raise ValueError("formal inverse needs a square map")
    n = F.n_in
    H = F.h_part()
    if any(d < 2 for d in H.degrees()):
        raise ValueError("H has terms of degree < 2; normalize the linear part first")
    if max_degree is None:
        max_degree = default_inverse_degree(F)
    x = PolyMap.identity(n)
    G = x
    for _ in range(max(max_degree - 1, 0)):
        G_next = x - H.compose(G, max_degree)
        if G_next == G:
            break
        G = G_next
    return FormalInverse(G, max_degree, _is_right_inverse(F, G))


def _is_right_inverse(F: PolyMap, G: PolyMap) -> bool:
    x = PolyMap.identity(F.n_in)
    # cheap necessary condition before the full composition
    probe = G.degree() + max(F.degree(), 1)
    if F.compose(G, probe) != x:
        return False
    return F.compose(G) == x


@dataclass(frozen=True)
class KellerFlags:
    is_keller: bool
    jh_nilpotent: bool

    def __iter__(self):
        return iter((self.is_keller, self.jh_nilpotent))


def jacobian_det(F: PolyMap) -> Poly:
    return jacobian(F).det()


def is_keller(F: PolyMap) -> bool:
    det = jacobian_det(F)
    return det.is_constant() and not det.is_zero()


def is_nilpotent(M: PolyMatrix) -> bool:
    return M.power(M.nrows).is_zero()


def keller_nilpotency(F: PolyMap) -> KellerFlags:
    if not F.is_square():
        raise ValueError("Keller/nilpotency flags need a square map")
    return KellerFlags(is_keller(F), is_nilpotent(jacobian(F.h_part())))


def quasi_translation_check(H: PolyMap) -> bool:
    """True iff JH . H = 0; then x - H is verified to invert x + H."""
    if not H.is_square():
        raise ValueError("quasi-translation check needs n_out = n_in")
    JH = jacobian(H)
    if any(not p.is_zero() for p in JH @ H.components):
        return False
    x = PolyMap.identity(H.n_in)
    if (x + H).compose(x - H) != x:
        raise RuntimeError("JH.H = 0 but x - H does not invert x + H")
    return True


def substitute_zero(F: PolyMap, indices: Iterable[int]) -> PolyMap:
    """F with the listed variables set to 0 (arity unchanged)."""
    idx = set(indices)
    images: List[Poly] = [
        Poly.zero(F.n_in) if i in idx else Poly.var(F.n_in, i) for i in range(F.n_in)
    ]
    return F.compose(PolyMap(F.n_in, images))


def random_poly(rng, arity: int, degrees: Iterable[int], density: float = 0.5,
                max_num: int = 8, max_den: int = 8, field: str = "rational") -> Poly:
    """Random sparse polynomial with term degrees drawn from ``degrees``.

    Coefficients are p/q with |p| <= max_num and 1 <= q <= max_den; with
    ``field="gaussian"`` an imaginary part of the same shape is added.
    """
    def coeff():
        re = mpq(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        im = mpq(0)
        if field == "gaussian" and rng.random() < 0.5:
            im = mpq(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        return Scalar(re, im)

    terms = {}
    for d in sorted(set(degrees)):
        for e in monomials_of_degree(arity, d):
            if rng.random() < density:
                terms[e] = coeff()
    return Poly(arity, terms)


def identity_plus(H: PolyMap) -> PolyMap:
    return PolyMap.identity(H.n_in) + H


def is_identity(F: PolyMap) -> bool:
    return F.is_square() and F == PolyMap.identity(F.n_in)
