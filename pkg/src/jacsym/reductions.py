"""Constructions that move maps between symmetry classes.

Every construction is a linear conjugation or a gradient trick, so it keeps
the identity linear part and the term-degree set of ``H``.  Variables of a
doubled map are ordered ``(x_1..x_n, y_1..y_n)``, with the middle variable
``x_{n+1}`` in between for odd sizes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .exactnum import HALF_SQRT2, I, ONE, Scalar, ScalarLike, as_scalar, scalar_root
from .linalg import PolyMatrix, ScalarMatrix
from .multipoly import Poly
from .polymap import PolyMap, jacobian, keller_nilpotency, linear_conjugate, power_map
from .sympattern import pattern_build, pattern_classify, pattern_holds


class ReductionError(ValueError):
    """A construction's precondition does not hold."""


def _lift(F: PolyMap, arity: int, offset: int = 0) -> PolyMap:
    return F.reindex(arity, [offset + k for k in range(F.n_in)])


def _project(p: Poly, keep: Sequence[int]) -> Poly:
    """Rewrite p as a polynomial in the variables ``keep`` only."""
    pos = {v: k for k, v in enumerate(keep)}
    terms = {}
    for e, c in p.terms.items():
        f = [0] * len(keep)
        for v, k in enumerate(e):
            if not k:
                continue
            if v not in pos:
                raise ReductionError(f"variable {v} occurs where it must not")
            f[pos[v]] = k
        terms[tuple(f)] = c
    return Poly(len(keep), terms)


def _require_square(F: PolyMap, what: str):
    if not F.is_square():
        raise ReductionError(f"{what} needs a square map, got {F.n_out} components in {F.n_in} variables")


def _require_identity_linear(F: PolyMap, what: str):
    if F.linear_part() != ScalarMatrix.identity(F.n_in):
        raise ReductionError(f"{what}: linear part is not the identity")


# ---------------------------------------------------------------------------
# diagonal classes

def meng_extend(F: PolyMap) -> PolyMap:
    """The 2n-map nabla_{(y^r, x^r)} of (y^r)^t F.

    Its first n components are F, it reduces to (F, 0) at y = 0, and the
    Jacobian of (result - identity) is anti-transpose symmetric.
    """
    _require_square(F, "meng_extend")
    n = F.n_in
    N = 2 * n
    lifted = _lift(F, N)
    g = Poly.zero(N)
    for i, Fi in enumerate(lifted):
        g = g + Poly.var(N, n + (n - 1 - i)) * Fi
    upper = [g.diff(n + (n - 1 - i)) for i in range(n)]
    lower = [g.diff(n - 1 - i) for i in range(n)]
    return PolyMap(N, upper + lower)


def meng_extend_dp(H: PolyMap, d: int) -> PolyMap:
    """(H(x), G(x, y)) with G the Meng lower block of y^t H plus (x^r)^{*d}."""
    _require_square(H, "meng_extend_dp")
    if d < 2:
        raise ReductionError("padding degree d must be >= 2")
    n = H.n_in
    N = 2 * n
    lifted = _lift(H, N)
    g = Poly.zero(N)
    for i, Hi in enumerate(lifted):
        g = g + Poly.var(N, n + (n - 1 - i)) * Hi
    lower = [g.diff(n - 1 - i) + Poly.var(N, n - 1 - i) ** d for i in range(n)]
    return PolyMap(N, list(lifted.components) + lower)


def sjc_conjugator(N: int) -> ScalarMatrix:
    """T = (sqrt2 / 2)(I + i I^r): symmetric and unitary."""
    return (ScalarMatrix.identity(N) + ScalarMatrix.reversal(N).scale(I)).scale(HALF_SQRT2)


def sjc_rsjc_conj(F: PolyMap, inverse: bool = False) -> PolyMap:
    """T^{-1} F(T x); ``inverse=True`` conjugates with T^{-1} instead.

    The same T carries diagonal symmetry to anti-diagonal symmetry and back.
    """
    _require_square(F, "sjc_rsjc_conj")
    T = sjc_conjugator(F.n_in)
    return linear_conjugate(F, T.inverse() if inverse else T)


def dsjc_conjugator(n: int) -> ScalarMatrix:
    """T = [[I, I^r], [-I^r, I]] of size 2n."""
    Id, R = ScalarMatrix.identity(n), ScalarMatrix.reversal(n)
    return ScalarMatrix.block([[Id, R], [-R, Id]])


def rsjc_dsjc_conj(F: PolyMap, direction: str = "to_dsjc") -> PolyMap:
    _require_square(F, "rsjc_dsjc_conj")
    if F.n_in % 2:
        raise ReductionError("rsjc/dsjc conjugation needs an even dimension")
    T = dsjc_conjugator(F.n_in // 2)
    if direction == "to_dsjc":
        return linear_conjugate(F, T)
    if direction == "to_rsjc":
        return linear_conjugate(F, T.inverse())
    raise ValueError(f"unknown direction {direction!r}")


def dsjc_stabilize(F: PolyMap, direction: str = "embed") -> PolyMap:
    """Insert (embed) or remove (project) a middle identity coordinate."""
    _require_square(F, "dsjc_stabilize")
    N = F.n_in
    if direction == "embed":
        if N % 2:
            raise ReductionError("embed needs an even dimension")
        n = N // 2
        positions = [k if k < n else k + 1 for k in range(N)]
        lifted = F.reindex(N + 1, positions).components
        middle = Poly.var(N + 1, n)
        return PolyMap(N + 1, list(lifted[:n]) + [middle] + list(lifted[n:]))
    if direction == "project":
        if N % 2 == 0:
            raise ReductionError("project needs an odd dimension")
        m = N // 2
        if F[m] != Poly.var(N, m):
            raise ReductionError("middle row of JH is nonzero (middle component is not x_mid)")
        keep = [k for k in range(N) if k != m]
        try:
            comps = [_project(p, keep) for i, p in enumerate(F) if i != m]
        except ReductionError:
            raise ReductionError("middle column of JH is nonzero") from None
        return PolyMap(N - 1, comps)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# central classes

def djc_conjugator(n: int, odd: bool) -> ScalarMatrix:
    """L P: L = (x + y, x_{n+1}, x - y) followed by P = (x, x_{n+1}, y^r)."""
    m = 2 * n + (1 if odd else 0)
    L = [[Scalar() for _ in range(m)] for _ in range(m)]
    P = [[Scalar() for _ in range(m)] for _ in range(m)]
    off = n + (1 if odd else 0)
    for k in range(n):
        L[k][k] = ONE
        L[k][off + k] = ONE
        L[off + k][k] = ONE
        L[off + k][off + k] = -ONE
        P[k][k] = ONE
        P[off + k][off + n - 1 - k] = ONE
    if odd:
        L[n][n] = ONE
        P[n][n] = ONE
    return ScalarMatrix(L) @ ScalarMatrix(P)


def djc_pair(Ff: PolyMap, Ftilde: PolyMap, odd: bool = True, strict: bool = True) -> PolyMap:
    """Conjugate (F, f, F~(y)) into a map with centrally symmetric Jacobian.

    ``Ff`` is the (n+1)-map (F, f) when ``odd`` (an n-map otherwise) and
    ``Ftilde`` an n-map.  With ``strict`` both must have identity linear part.
    """
    _require_square(Ff, "djc_pair")
    _require_square(Ftilde, "djc_pair")
    n = Ftilde.n_in
    big = n + 1 if odd else n
    if Ff.n_in != big:
        raise ReductionError(f"(F, f) must have {big} components for n = {n}, odd = {odd}")
    if strict:
        _require_identity_linear(Ff, "djc_pair (F, f)")
        _require_identity_linear(Ftilde, "djc_pair F~")
    N = big + n
    K = _lift(Ff, N).concat(_lift(Ftilde, N, offset=big))
    return linear_conjugate(K, djc_conjugator(n, odd))


def djc_split(G: PolyMap, odd: Optional[bool] = None) -> Tuple[PolyMap, PolyMap]:
    """Recover ((F, f), F~) with djc_pair((F, f), F~, odd) = G."""
    _require_square(G, "djc_split")
    N = G.n_in
    if odd is None:
        odd = N % 2 == 1
    if (N % 2 == 1) != odd:
        raise ReductionError(f"dimension {N} does not match odd = {odd}")
    if not pattern_holds(jacobian(G.h_part()), pattern_build("djc", N)):
        raise ReductionError("J(G - x) is not centrally symmetric (djc)")
    n = N // 2
    big = n + 1 if odd else n
    K = linear_conjugate(G, djc_conjugator(n, odd).inverse())
    xs, ys = list(range(big)), list(range(big, N))
    try:
        Ff = PolyMap(big, [_project(p, xs) for p in K.components[:big]])
        Ft = PolyMap(n, [_project(p, ys) for p in K.components[big:]])
    except ReductionError as exc:
        raise ReductionError(f"parts fail the variable separation: {exc}") from None
    return Ff, Ft


def center_decompose(F: PolyMap) -> Tuple[PolyMap, PolyMap]:
    """(F + F^r)/2 and (F - F^r)/2 for F with J(F - x) centrally symmetric."""
    _require_square(F, "center_decompose")
    if not pattern_holds(jacobian(F.h_part()), pattern_build("djc", F.n_in)):
        raise ReductionError("J(F - x) is not centrally symmetric (djc)")
    half = Scalar(1, 0) / 2
    R = F.reverse()
    return (F + R).scale(half), (F - R).scale(half)


def realify_conjugator(n: int) -> ScalarMatrix:
    """(x, y) -> (x + i y, x - i y) followed by (x, y^r)."""
    Id, R = ScalarMatrix.identity(n), ScalarMatrix.reversal(n)
    Z = ScalarMatrix.zeros(n, n)
    L = ScalarMatrix.block([[Id, Id.scale(I)], [Id, Id.scale(-I)]])
    P = ScalarMatrix.block([[Id, Z], [Z, R]])
    return L @ P


def realify(F: PolyMap) -> PolyMap:
    """The real 2n-map (Re F(x + iy), Im F(x + iy)) conjugated with (x, y^r)."""
    _require_square(F, "realify")
    if not F.coefficients_in(Scalar.in_gaussian_field):
        raise ReductionError("realify needs coefficients in Q(i)")
    _require_identity_linear(F, "realify")
    n = F.n_in
    N = 2 * n
    K = _lift(F, N).concat(_lift(F.conj(), N, offset=n))
    out = linear_conjugate(K, realify_conjugator(n))
    if not out.coefficients_in(Scalar.is_rational):
        raise RuntimeError("realification produced non-real coefficients")
    return out


# ---------------------------------------------------------------------------
# power-linear maps

@dataclass(frozen=True)
class PowerLinear:
    B: ScalarMatrix
    T: Optional[ScalarMatrix]
    root: Optional[Scalar]


def power_linear_map(A: ScalarMatrix, d: int) -> PolyMap:
    """x + (A x)^{*d}."""
    return PolyMap.identity(A.ncols) + power_map(PolyMap.linear(A), d)


def power_linear_even(A: ScalarMatrix, d: int, a: ScalarLike, b: ScalarLike) -> PowerLinear:
    """B = [[ab, -b^2], [a^2, -ab]] (x) A with B^2 = 0, and T when the root is in the tower."""
    if not A.is_square():
        raise ReductionError("A must be square")
    if d < 2 or d % 2:
        raise ReductionError("d must be an even integer >= 2")
    a, b = as_scalar(a), as_scalar(b)
    value = a * b**d - a**d * b
    if value.is_zero():
        raise ReductionError("a b^d - a^d b must be nonzero")
    left = ScalarMatrix([[a * b, -(b * b)], [a * a, -(a * b)]])
    B = left.kron(A)
    root = scalar_root(value, d - 1)
    T = None
    if root is not None:
        T = ScalarMatrix([[a * root, -(b * root)], [a**d, -(b**d)]]).kron(ScalarMatrix.identity(A.nrows))
    return PowerLinear(B, T, root)


def power_linear_identity_holds(A: ScalarMatrix, d: int, result: PowerLinear) -> bool:
    """Check T^{-1} (F, y)(T(x, y)) = (x, y) + (B(x, y))^{*d} by composition."""
    if result.T is None:
        raise ValueError("no conjugator to check")
    n = A.nrows
    F = power_linear_map(A, d)
    Fy = _lift(F, 2 * n).concat(PolyMap(2 * n, PolyMap.identity(2 * n).components[n:]))
    lhs = linear_conjugate(Fy, result.T)
    rhs = PolyMap.identity(2 * n) + power_map(PolyMap.linear(result.B), d)
    return lhs == rhs


# ---------------------------------------------------------------------------
# reports

@dataclass
class ReductionReport:
    input_patterns: set
    output_patterns: List[set]
    preserved: dict = field(default_factory=dict)
    exact_roundtrip: Optional[bool] = None

    def to_json(self) -> dict:
        return {
            "input_patterns": sorted(self.input_patterns),
            "output_patterns": [sorted(p) for p in self.output_patterns],
            "preserved": self.preserved,
            "exact_roundtrip": self.exact_roundtrip,
        }


def map_profile(F: PolyMap, as_h: bool = False) -> dict:
    """Pattern set, Keller/nilpotency flags and term degrees of a map."""
    if as_h:
        H = F
        F = PolyMap.identity(F.n_in) + H if F.is_square() else F
    else:
        H = F.h_part() if F.is_square() else F
    prof = {"degree_set": sorted(H.degrees())}
    if F.is_square():
        flags = keller_nilpotency(F)
        prof.update(is_keller=flags.is_keller, jh_nilpotent=flags.jh_nilpotent)
        prof["patterns"] = sorted(pattern_classify(jacobian(H)))
    return prof


def reduction_report(inputs: Sequence[PolyMap], outputs: Sequence[PolyMap], as_h: bool = False,
                     exact_roundtrip: Optional[bool] = None) -> ReductionReport:
    before = [map_profile(F, as_h) for F in inputs]
    after = [map_profile(F, as_h) for F in outputs]
    input_patterns = set(before[0].get("patterns", [])) if len(before) == 1 else set()
    return ReductionReport(
        input_patterns,
        [set(p.get("patterns", [])) for p in after],
        {"before": before, "after": after},
        exact_roundtrip,
    )
