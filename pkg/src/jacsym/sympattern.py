"""Signed dihedral symmetry patterns on square matrices.

A pattern is a list of signed cell constraints ``M[g(i,j)] = s(i,j) M[i,j]``
where ``g`` is one of the dihedral cell maps of the square.  Indices are
0-based here: ``rho(i) = N - 1 - i``.

For odd N the middle index carries both half-space signs, so sign rules
built from sigma/tau produce two equations there and force zeros.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from .exactnum import ONE, Scalar
from .linalg import PolyMatrix, nullspace
from .multipoly import Poly, monomials_of_degree
from .polymap import PolyMap, gradient, jacobian, random_poly

Cell = Tuple[int, int]

CELL_MAPS: Dict[str, Callable[[int, int, int], Cell]] = {
    "identity": lambda i, j, n: (i, j),
    "transpose": lambda i, j, n: (j, i),
    "anti_transpose": lambda i, j, n: (n - 1 - j, n - 1 - i),
    "h_flip": lambda i, j, n: (n - 1 - i, j),
    "v_flip": lambda i, j, n: (i, n - 1 - j),
    "central": lambda i, j, n: (n - 1 - i, n - 1 - j),
}


def _half_sign(i: int, n: int, low: int) -> FrozenSet[int]:
    """``low`` on the first floor(N/2) indices, ``-low`` on the last; both in the middle."""
    if i < n // 2:
        return frozenset({low})
    if i >= n - n // 2:
        return frozenset({-low})
    return frozenset({1, -1})


def sigma(i: int, n: int) -> FrozenSet[int]:
    return _half_sign(i, n, -1)


def tau(i: int, n: int) -> FrozenSet[int]:
    return _half_sign(i, n, 1)


def _product(a: FrozenSet[int], b: FrozenSet[int]) -> FrozenSet[int]:
    return frozenset(x * y for x in a for y in b)


SIGN_RULES: Dict[str, Callable[[int, int, int], FrozenSet[int]]] = {
    "+": lambda i, j, n: frozenset({1}),
    "-": lambda i, j, n: frozenset({-1}),
    "sigma": lambda i, j, n: _product(sigma(i, n), sigma(j, n)),
    "-sigma": lambda i, j, n: frozenset(-s for s in _product(sigma(i, n), sigma(j, n))),
    "tau": lambda i, j, n: _product(tau(i, n), tau(j, n)),
    "-tau": lambda i, j, n: frozenset(-s for s in _product(tau(i, n), tau(j, n))),
}

REGIONS: Dict[str, Callable[[int, int, int], bool]] = {
    "all": lambda i, j, n: True,
    "diagonal": lambda i, j, n: i == j,
    "anti_diagonal": lambda i, j, n: i + j == n - 1,
    "above_diagonal": lambda i, j, n: j > i,
    "below_diagonal": lambda i, j, n: j < i,
    "above_anti_diagonal": lambda i, j, n: i + j < n - 1,
    "below_anti_diagonal": lambda i, j, n: i + j > n - 1,
    "on_or_above_anti_diagonal": lambda i, j, n: i + j <= n - 1,
    "on_or_below_anti_diagonal": lambda i, j, n: i + j >= n - 1,
    "upper_right_quadrant": lambda i, j, n: i < n // 2 and j >= n - n // 2,
    "upper_left_quadrant": lambda i, j, n: i < n // 2 and j < n // 2,
    "lower_left_quadrant": lambda i, j, n: i >= n - n // 2 and j < n // 2,
    "lower_right_quadrant": lambda i, j, n: i >= n - n // 2 and j >= n - n // 2,
}


@dataclass(frozen=True)
class SignedConstraint:
    """``M[map(c)] = sign(c) * M[c]`` for every cell c in ``region``.

    ``region`` is a name from :data:`REGIONS`, a callable ``(i, j, N) -> bool``
    or ``None`` for all cells.
    """

    map: str
    sign: str = "+"
    region: Union[None, str, Callable[[int, int, int], bool]] = None

    def __post_init__(self):
        if self.map not in CELL_MAPS:
            raise ValueError(f"unknown cell map {self.map!r}")
        if self.sign not in SIGN_RULES:
            raise ValueError(f"unknown sign rule {self.sign!r}")
        if isinstance(self.region, str) and self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r}")

    def _in_region(self, i, j, n) -> bool:
        if self.region is None:
            return True
        pred = REGIONS[self.region] if isinstance(self.region, str) else self.region
        return pred(i, j, n)

    def equations(self, n: int) -> Iterator[Tuple[Cell, Cell, int]]:
        g = CELL_MAPS[self.map]
        rule = SIGN_RULES[self.sign]
        for i in range(n):
            for j in range(n):
                if not self._in_region(i, j, n):
                    continue
                dst = g(i, j, n)
                for s in sorted(rule(i, j, n)):
                    yield (i, j), dst, s


@dataclass(frozen=True)
class Pattern:
    dimension: int
    constraints: Tuple[SignedConstraint, ...]
    name: Optional[str] = None

    def equations(self) -> List[Tuple[Cell, Cell, int]]:
        """All cell equations (src, dst, sign), meaning M[dst] = sign * M[src]."""
        out = []
        for c in self.constraints:
            out.extend(c.equations(self.dimension))
        return out


# ---------------------------------------------------------------------------
# catalog

def _C(m, s="+", region=None):
    return SignedConstraint(m, s, region)


_CATALOG: Dict[str, Tuple[SignedConstraint, ...]] = {
    "sjc": (_C("transpose"),),
    "rsjc": (_C("anti_transpose"),),
    "asjc": (_C("transpose", "-"),),
    "rasjc": (_C("anti_transpose", "-"),),
    "dsjc": (_C("transpose", "sigma"),),
    "djc": (_C("central"),),
    "hvjc": (_C("h_flip"), _C("v_flip")),
    "ahavjc": (_C("h_flip", "-"), _C("v_flip", "-")),
    "havjc": (_C("h_flip"), _C("v_flip", "-")),
    "ahvjc": (_C("h_flip", "-"), _C("v_flip")),
    "hvsjc": (_C("h_flip"), _C("v_flip"), _C("transpose")),
    "ahavsjc": (_C("h_flip", "-"), _C("v_flip", "-"), _C("transpose")),
    "havsjc": (_C("h_flip"), _C("v_flip", "-"), _C("transpose")),
    "ahvsjc": (_C("h_flip", "-"), _C("v_flip"), _C("transpose")),
    "crjc": (_C("transpose"), _C("anti_transpose")),
    "cjc": (_C("central", "tau"),),
    "acjc": (_C("central", "-tau"),),
    "trasjc": (_C("central", "-", "diagonal"),),
    "rsnjc": (_C("anti_transpose"), _C("identity", "-", "upper_right_quadrant")),
}

CATALOG_NAMES = tuple(_CATALOG)
_EVEN_ONLY = {"rsnjc"}


def catalog_valid_at(name: str, n: int) -> bool:
    return n >= 1 and not (name in _EVEN_ONLY and n % 2)


def pattern_build(name: str, n: int) -> Pattern:
    if name not in _CATALOG:
        raise ValueError(f"unknown pattern {name!r}; known: {', '.join(CATALOG_NAMES)}")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if not catalog_valid_at(name, n):
        raise ValueError(f"pattern {name} needs an even dimension, got {n}")
    return Pattern(n, _CATALOG[name], name)


def as_pattern(p: Union[str, Pattern], n: int) -> Pattern:
    if isinstance(p, Pattern):
        if p.dimension != n:
            raise ValueError(f"pattern dimension {p.dimension} != {n}")
        return p
    return pattern_build(p, n)


def pattern_from_json(obj: dict) -> Pattern:
    n = int(obj["dimension"])
    cons = []
    for c in obj["constraints"]:
        cons.append(SignedConstraint(c["map"], c.get("sign", "+"), c.get("region")))
    return Pattern(n, tuple(cons), obj.get("name"))


def pattern_to_json(p: Pattern) -> dict:
    cons = []
    for c in p.constraints:
        if callable(c.region):
            raise ValueError("callable regions have no JSON form")
        d = {"map": c.map, "sign": c.sign}
        if c.region is not None:
            d["region"] = c.region
        cons.append(d)
    out = {"dimension": p.dimension, "constraints": cons}
    if p.name:
        out["name"] = p.name
    return out


# ---------------------------------------------------------------------------
# checking

def pattern_holds(M: PolyMatrix, P: Pattern) -> bool:
    if M.shape != (P.dimension, P.dimension):
        raise ValueError(f"matrix shape {M.shape} does not match pattern dimension {P.dimension}")
    for (i, j), (k, l), s in P.equations():
        src = M.rows[i][j]
        dst = M.rows[k][l]
        if s == 1:
            if dst != src:
                return False
        elif dst != -src:
            return False
    return True


def pattern_classify(M: PolyMatrix) -> set:
    if not M.is_square():
        raise ValueError("classification needs a square matrix")
    n = M.nrows
    return {name for name in CATALOG_NAMES if catalog_valid_at(name, n) and pattern_holds(M, pattern_build(name, n))}


def classify_map(F: PolyMap) -> set:
    """Catalog patterns satisfied by J(F - x)."""
    return pattern_classify(jacobian(F.h_part()))


class _SignedUnionFind:
    def __init__(self):
        self.parent: Dict[Cell, Cell] = {}
        self.parity: Dict[Cell, int] = {}
        self.bad: set = set()

    def find(self, c: Cell) -> Tuple[Cell, int]:
        if c not in self.parent:
            self.parent[c] = c
            self.parity[c] = 1
        p = self.parent[c]
        if p == c:
            return c, 1
        root, s = self.find(p)
        self.parent[c] = root
        self.parity[c] = self.parity[c] * s
        return root, self.parity[c]

    def union(self, a: Cell, b: Cell, s: int):
        """Record M[b] = s M[a]."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa * s != pb:
                self.bad.add(ra)
            return
        # M[a] = pa M[ra], M[b] = pb M[rb] = s pa M[ra]
        self.parent[rb] = ra
        self.parity[rb] = s * pa * pb
        if rb in self.bad:
            self.bad.discard(rb)
            self.bad.add(ra)


def forced_zeros(P: Pattern) -> set:
    """Cells c where the constraint closure yields M[c] = -M[c]."""
    uf = _SignedUnionFind()
    for src, dst, s in P.equations():
        uf.union(src, dst, s)
    n = P.dimension
    return {(i, j) for i in range(n) for j in range(n) if uf.find((i, j))[0] in uf.bad}


# ---------------------------------------------------------------------------
# pattern-constrained coefficient spaces

REGIMES = ("none", "det_zero", "nilpotent")


@dataclass(frozen=True)
class InstanceSpec:
    n_vars: int
    degree_set: FrozenSet[int]
    pattern: Union[str, Pattern]
    regime: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "degree_set", frozenset(int(d) for d in self.degree_set))
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if any(d < 0 for d in self.degree_set):
            raise ValueError("degrees must be non-negative")

    def resolved_pattern(self) -> Pattern:
        return as_pattern(self.pattern, self.n_vars)


def coefficient_unknowns(n_vars: int, degrees) -> List[Tuple[int, Tuple[int, ...]]]:
    """Unknown coefficients (component, monomial) of a map with the given term degrees."""
    monos = [e for d in sorted(set(degrees)) for e in monomials_of_degree(n_vars, d)]
    return [(i, e) for i in range(n_vars) for e in monos]


def pattern_linear_system(n_vars: int, degrees, equations) -> Tuple[List[Dict[int, Scalar]], list]:
    """Homogeneous system on the coefficients of H imposing the cell equations on JH."""
    unknowns = coefficient_unknowns(n_vars, degrees)
    # entry (i, j) of JH as {result monomial: {unknown: multiplier}}
    entries: Dict[Cell, Dict[Tuple[int, ...], Dict[int, int]]] = {}
    for u, (i, e) in enumerate(unknowns):
        for j in range(n_vars):
            k = e[j]
            if not k:
                continue
            m = e[:j] + (k - 1,) + e[j + 1:]
            entries.setdefault((i, j), {}).setdefault(m, {})[u] = k
    rows = []
    for src, dst, s in equations:
        a = entries.get(dst, {})
        b = entries.get(src, {})
        for m in set(a) | set(b):
            row: Dict[int, int] = dict(a.get(m, {}))
            for u, k in b.get(m, {}).items():
                row[u] = row.get(u, 0) - s * k
            clean = {u: Scalar(k) for u, k in row.items() if k}
            if clean:
                rows.append(clean)
    return rows, unknowns


def _basis_maps(n_vars, unknowns, vectors) -> List[PolyMap]:
    maps = []
    for v in vectors:
        comps: List[Dict] = [dict() for _ in range(n_vars)]
        for u, c in enumerate(v):
            if not c.is_zero():
                i, e = unknowns[u]
                comps[i][e] = c
        maps.append(PolyMap(n_vars, [Poly(n_vars, t) for t in comps]))
    return maps


@lru_cache(maxsize=256)
def _space(n_vars: int, degrees: FrozenSet[int], pattern: Pattern):
    rows, unknowns = pattern_linear_system(n_vars, degrees, pattern.equations())
    vectors = nullspace(rows, len(unknowns))
    return len(vectors), tuple(_basis_maps(n_vars, unknowns, vectors))


def pattern_space(spec: InstanceSpec) -> Tuple[int, List[PolyMap]]:
    """Dimension and basis of {H : term degrees in S, JH satisfies the pattern}."""
    if not spec.degree_set:
        raise ValueError("empty degree set")
    if spec.regime != "none":
        raise ValueError("pattern_space only handles the linear regime 'none'")
    if not spec.degree_set:
        raise ValueError("empty degree set")
    dim, basis = _space(spec.n_vars, spec.degree_set, spec.resolved_pattern())
    return dim, list(basis)


# ---------------------------------------------------------------------------
# instance generation

class ZeroSpaceError(ValueError):
    """No nonzero instance exists: the pattern space is zero."""


GENERATABLE = (
    "sjc", "rsjc", "dsjc", "djc", "hvjc", "ahavjc", "havjc", "ahvjc",
    "havsjc", "ahvsjc", "crjc", "hvsjc", "ahavsjc", "cjc",
)


def _random_square_map(rng, n, degs, field="rational"):
    comps = [random_poly(rng, n, degs, field=field) for _ in range(n)]
    return PolyMap.identity(n) + PolyMap(n, comps)


def _linear_forms(n, pairs, sign, middle=False):
    """x_j + sign * x_{N-1-j} for each j < N//2 (plus the middle variable)."""
    forms = [Poly.var(n, j) + Poly.var(n, n - 1 - j).scale(sign) for j in range(pairs)]
    if middle:
        forms.append(Poly.var(n, n // 2))
    return forms


def _generate_constructive(name, n, degs, rng) -> Optional[PolyMap]:
    from . import reductions

    half = n // 2
    odd = n % 2 == 1
    if name in ("sjc", "rsjc", "dsjc"):
        fdegs = [d + 1 for d in degs]
        if name == "dsjc" and odd:
            f = random_poly(rng, n - 1, fdegs).reindex(n, [k if k < half else k + 1 for k in range(n - 1)])
        else:
            f = random_poly(rng, n, fdegs)
        grad = gradient(f)
        if name == "sjc":
            return grad
        if name == "rsjc":
            return grad.reverse()
        comps = []
        for i, p in enumerate(grad):
            s = sigma(i, n)
            comps.append(Poly.zero(n) if len(s) == 2 else p.scale(next(iter(s))))
        return PolyMap(n, comps)
    if name in ("djc", "hvjc", "ahavjc"):
        if half == 0:
            return None
        big = half + 1 if odd else half
        Ff = _random_square_map(rng, big, degs) if name != "ahavjc" else PolyMap.identity(big)
        Ft = _random_square_map(rng, half, degs) if name != "hvjc" else PolyMap.identity(half)
        return reductions.djc_pair(Ff, Ft, odd).h_part()
    if name == "cjc":
        if half == 0:
            return None
        G = reductions.realify(_random_square_map(rng, half, degs, field="gaussian"))
        if odd:
            G = reductions.dsjc_stabilize(G, "embed")
        return G.h_part()
    if name in ("havjc", "ahvjc"):
        if half == 0:
            return None
        if name == "havjc":
            # rows pair up equal, entries depend on x_j - x_{N-1-j} only
            forms = _linear_forms(n, half, -1)
            gs = [random_poly(rng, len(forms), degs).subst(forms) for _ in range(n - half)]
            comps = [gs[i] if i < n - half else gs[n - 1 - i] for i in range(n)]
        else:
            # rows pair up opposite, middle row zero, entries depend on x_j + x_{N-1-j} and the middle
            forms = _linear_forms(n, half, 1, middle=odd)
            gs = [random_poly(rng, len(forms), degs).subst(forms) for _ in range(half)]
            comps = []
            for i in range(n):
                if i < half:
                    comps.append(gs[i])
                elif i >= n - half:
                    comps.append(-gs[n - 1 - i])
                else:
                    comps.append(Poly.zero(n))
        return PolyMap(n, comps)
    if name in ("havsjc", "ahvsjc"):
        # the horizontal and vertical signs disagree once the diagonal symmetry
        # is added, so every cell is forced to zero
        return PolyMap.zero(n, n)
    return None


def _sample_space(spec: InstanceSpec, rng) -> PolyMap:
    degs = frozenset(d for d in spec.degree_set if d >= 1)
    n = spec.n_vars
    if degs:
        dim, basis = pattern_space(InstanceSpec(n, degs, spec.pattern))
    else:
        dim, basis = 0, []
    if dim == 0:
        if any(d >= 2 for d in spec.degree_set):
            raise ZeroSpaceError(
                f"space is zero: no nonzero H with term degrees {sorted(spec.degree_set)} "
                f"satisfies the pattern in dimension {n}"
            )
        return PolyMap.zero(n, n)
    H = PolyMap.zero(n, n)
    while True:
        coeffs = [rng.randint(-3, 3) for _ in basis]
        if any(coeffs):
            break
    for c, b in zip(coeffs, basis):
        if c:
            H = H + b.scale(c)
    return H


def _generate_once(spec: InstanceSpec, rng) -> PolyMap:
    P = spec.resolved_pattern()
    degs = sorted(d for d in spec.degree_set if d >= 2)
    name = P.name if isinstance(spec.pattern, str) else None
    H = None
    if name in GENERATABLE and degs:
        H = _generate_constructive(name, spec.n_vars, degs, rng)
    if H is None:
        H = _sample_space(spec, rng)
    return H


def generate_instance(spec: InstanceSpec, seed: int, attempts: int = 64) -> PolyMap:
    """A map H whose Jacobian satisfies the pattern, deterministic in ``seed``.

    Integration constants are zero and zero draws are retried a few times.
    For the regimes ``det_zero`` and
    ``nilpotent`` candidates are drawn until one satisfies the side
    condition; ValueError if none does within ``attempts`` draws.
    """
    if not spec.degree_set:
        raise ValueError("empty degree set")
    rng = random.Random(seed)
    zero = PolyMap.zero(spec.n_vars, spec.n_vars)
    for k in range(attempts):
        H = _generate_once(spec, rng)
        JH = jacobian(H)
        if not pattern_holds(JH, spec.resolved_pattern()):
            raise RuntimeError("generator produced an instance outside its pattern")
        if spec.regime == "none":
            # redraw sparse draws that came out zero; some patterns only admit H = 0
            if H != zero or k >= 7:
                return H
            continue
        if spec.regime == "det_zero" and JH.det().is_zero():
            return H
        if spec.regime == "nilpotent" and JH.power(JH.nrows).is_zero():
            return H
    raise ValueError(f"no instance with regime {spec.regime} found in {attempts} draws")
