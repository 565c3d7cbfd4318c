"""Sparse multivariate polynomials over :class:`~jacsym.exactnum.Scalar`.

Variables are positional (0-based).  A :class:`Poly` stores a dict from
exponent tuples to nonzero scalars and is treated as immutable.
"""
from __future__ import annotations

import os
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .exactnum import ONE, ZERO, Scalar, ScalarLike, as_scalar

Monomial = Tuple[int, ...]

DEFAULT_MAX_TERMS = 10**6


class TermLimitError(ArithmeticError):
    """Raised when an intermediate polynomial exceeds JACSYM_MAX_TERMS terms."""


def max_terms() -> int:
    raw = os.environ.get("JACSYM_MAX_TERMS")
    if not raw:
        return DEFAULT_MAX_TERMS
    return int(raw)


def _check_size(n: int) -> None:
    limit = max_terms()
    if n > limit:
        raise TermLimitError(f"polynomial with {n} terms exceeds JACSYM_MAX_TERMS={limit}")


def _add_exps(e: Monomial, f: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(e, f)])


def grlex_key(e: Monomial):
    return (sum(e), e)


class Poly:
    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int, terms: Optional[Mapping[Sequence[int], ScalarLike]] = None):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        clean: Dict[Monomial, Scalar] = {}
        for exps, c in (terms or {}).items():
            e = tuple(int(k) for k in exps)
            if len(e) != arity:
                raise ValueError(f"monomial {e} has length {len(e)}, ring arity is {arity}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            s = as_scalar(c)
            if e in clean:
                s = clean[e] + s
            if s.is_zero():
                clean.pop(e, None)
            else:
                clean[e] = s
        self.arity = arity
        self._terms = clean

    @classmethod
    def _make(cls, arity: int, terms: Dict[Monomial, Scalar]) -> "Poly":
        p = object.__new__(cls)
        p.arity = arity
        p._terms = terms
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "Poly":
        return cls._make(arity, {})

    @classmethod
    def constant(cls, arity: int, c: ScalarLike) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return cls.zero(arity)
        return cls._make(arity, {(0,) * arity: c})

    @classmethod
    def var(cls, arity: int, i: int, coeff: ScalarLike = 1) -> "Poly":
        if not 0 <= i < arity:
            raise IndexError(f"variable index {i} out of range for arity {arity}")
        e = [0] * arity
        e[i] = 1
        return cls.monomial(tuple(e), coeff)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: ScalarLike = 1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degrees(self) -> set:
        return {sum(e) for e in self._terms}

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exps), ZERO)

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self.arity, ZERO)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def variables(self) -> set:
        """Indices of variables that occur."""
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def sorted_terms(self):
        """Terms in graded lexicographic order, leading term first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Monomial, Scalar]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    def coefficients_in(self, field_test) -> bool:
        return all(field_test(c) for c in self._terms.values())

    # -- ring operations --------------------------------------------------
    def _other(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.arity != self.arity:
                raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        try:
            return Poly.constant(self.arity, as_scalar(other))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly._make(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._make(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c: ScalarLike) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return Poly.zero(self.arity)
        if c == ONE:
            return self
        return Poly._make(self.arity, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(as_scalar(other))
            except TypeError:
                return NotImplemented
        return self.mul(other)

    def __rmul__(self, other):
        try:
            return self.scale(as_scalar(other))
        except TypeError:
            return NotImplemented

    def mul(self, other: "Poly", max_degree: Optional[int] = None) -> "Poly":
        """Product, optionally dropping every term of degree > max_degree."""
        if other.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
        if not self._terms or not other._terms:
            return Poly.zero(self.arity)
        out: Dict[Monomial, Scalar] = {}
        if max_degree is None:
            for e, c in self._terms.items():
                for f, d in other._terms.items():
                    g = _add_exps(e, f)
                    s = out.get(g)
                    out[g] = c * d if s is None else s + c * d
        else:
            right = [(f, d, sum(f)) for f, d in other._terms.items()]
            for e, c in self._terms.items():
                de = sum(e)
                for f, d, df in right:
                    if de + df > max_degree:
                        continue
                    g = _add_exps(e, f)
                    s = out.get(g)
                    out[g] = c * d if s is None else s + c * d
        out = {e: c for e, c in out.items() if not c.is_zero()}
        _check_size(len(out))
        return Poly._make(self.arity, out)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.constant(self.arity, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.arity == other.arity and self._terms == other._terms
        try:
            o = as_scalar(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            return not self._terms
        return self._terms == {(0,) * self.arity: o}

    def __hash__(self):
        return hash((self.arity, frozenset(self._terms.items())))

    # -- calculus / substitution ------------------------------------------
    def diff(self, i: int) -> "Poly":
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.arity:
            raise IndexError(f"variable index {i} out of range for arity {self.arity}")
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return Poly._make(self.arity, out)

    def subst(self, images: Sequence["Poly"], max_degree: Optional[int] = None) -> "Poly":
        """Replace variable i by ``images[i]``; all images share one arity.

        With ``max_degree`` the result (and every intermediate product) is
        truncated to total degree <= max_degree.
        """
        if len(images) != self.arity:
            raise ValueError(f"need {self.arity} images, got {len(images)}")
        if not images:
            raise ValueError("cannot substitute into a 0-ary polynomial without a target arity")
        m = images[0].arity
        if any(q.arity != m for q in images):
            raise ValueError("substitution images must share one arity")
        return self._subst(images, m, max_degree)

    def subst_into(self, images: Sequence["Poly"], arity: int, max_degree: Optional[int] = None) -> "Poly":
        """Like :meth:`subst` with an explicit target arity (allows 0-ary p)."""
        if len(images) != self.arity:
            raise ValueError(f"need {self.arity} images, got {len(images)}")
        if any(q.arity != arity for q in images):
            raise ValueError("substitution images must have the target arity")
        return self._subst(images, arity, max_degree)

    def _subst(self, images, m, max_degree):
        powers = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[0] = Poly.constant(m, ONE)
                elif k == 1:
                    cache[1] = images[i] if max_degree is None else images[i].truncate(max_degree)
                else:
                    half = power(i, k // 2)
                    p = half.mul(half, max_degree)
                    if k % 2:
                        p = p.mul(power(i, 1), max_degree)
                    cache[k] = p
            return cache[k]

        out: Dict[Monomial, Scalar] = {}
        for e, c in self._terms.items():
            prod = Poly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    prod = prod.mul(power(i, k), max_degree)
                    if not prod:
                        break
            for f, d in prod._terms.items():
                s = out.get(f)
                out[f] = d if s is None else s + d
        out = {e: c for e, c in out.items() if not c.is_zero()}
        _check_size(len(out))
        return Poly._make(m, out)

    def truncate(self, max_degree: int) -> "Poly":
        return Poly._make(self.arity, {e: c for e, c in self._terms.items() if sum(e) <= max_degree})

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly._make(self.arity, {e: c for e, c in self._terms.items() if sum(e) == k})

    def part_in_degrees(self, degrees: Iterable[int]) -> "Poly":
        ds = set(degrees)
        return Poly._make(self.arity, {e: c for e, c in self._terms.items() if sum(e) in ds})

    def map_coefficients(self, fn) -> "Poly":
        out = {}
        for e, c in self._terms.items():
            d = fn(c)
            if not d.is_zero():
                out[e] = d
        return Poly._make(self.arity, out)

    def conj(self) -> "Poly":
        return self.map_coefficients(Scalar.conj)

    def reindex(self, arity: int, positions: Sequence[int]) -> "Poly":
        """Move variable i to position ``positions[i]`` in a ring of ``arity`` variables."""
        if len(positions) != self.arity:
            raise ValueError("need one position per variable")
        out = {}
        for e, c in self._terms.items():
            f = [0] * arity
            for i, k in enumerate(e):
                if k:
                    f[positions[i]] += k
            out[tuple(f)] = c
        return Poly._make(arity, out)

    def evaluate(self, point: Sequence[ScalarLike]) -> Scalar:
        if len(point) != self.arity:
            raise ValueError("point has wrong length")
        pt = [as_scalar(v) for v in point]
        total = ZERO
        for e, c in self._terms.items():
            t = c
            for v, k in zip(pt, e):
                if k:
                    t = t * v**k
            total = total + t
        return total

    def exact_div(self, q: "Poly") -> "Poly":
        """Quotient ``self / q``; raises ValueError if q does not divide self."""
        if q.arity != self.arity:
            raise ValueError("arity mismatch")
        if q.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lq, cq = q.leading_term()
        inv = cq.inverse()
        rest = self
        quot: Dict[Monomial, Scalar] = {}
        while rest:
            lr, cr = rest.leading_term()
            if any(a < b for a, b in zip(lr, lq)):
                raise ValueError("polynomial division is not exact")
            e = tuple(a - b for a, b in zip(lr, lq))
            c = cr * inv
            quot[e] = quot.get(e, ZERO) + c
            rest = rest - q.mul(Poly._make(self.arity, {e: c}))
        return Poly._make(self.arity, {e: c for e, c in quot.items() if not c.is_zero()})

    # -- display ----------------------------------------------------------
    def to_str(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.arity)]
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                pieces.append(f"({c})" if not c.is_rational() else str(c))
            elif c == ONE:
                pieces.append(mono)
            elif c == -ONE:
                pieces.append("-" + mono)
            else:
                cs = str(c)
                cs = cs if c.is_rational() else f"({cs})"
                pieces.append(f"{cs}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.arity}, {self.to_str()!r})"


# functional aliases -------------------------------------------------------

def poly_mul(p: Poly, q: Poly) -> Poly:
    return p.mul(q)


def poly_diff(p: Poly, var_index: int) -> Poly:
    return p.diff(var_index)


def poly_subst(p: Poly, images: Sequence[Poly]) -> Poly:
    return p.subst(images)


def poly_degrees(p: Poly) -> set:
    return p.degrees()


def variables(arity: int):
    """The coordinate polynomials x_0, ..., x_{arity-1}."""
    return [Poly.var(arity, i) for i in range(arity)]


def monomials_of_degree(arity: int, degree: int):
    """All exponent tuples of the given total degree, in grlex descending order."""
    if arity == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], degree, arity)
    return out
