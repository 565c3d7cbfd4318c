"""Seeded property suites, one per theorem id.

Each suite runs ``trials`` independent trials; trial k draws from its own
``random.Random`` seeded by sha256 of (seed, k), so the report does not
depend on the order or parallelism of the trials.
"""
from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import dependence as dep
from . import reductions as red
from .exactnum import Scalar
from .jsonfmt import map_to_json, poly_to_json, scalar_matrix_to_json
from .linalg import ScalarMatrix
from .multipoly import Poly
from .polymap import (
    PolyMap,
    formal_inverse,
    is_keller,
    is_nilpotent,
    jacobian,
    keller_nilpotency,
    quasi_translation_check,
    random_poly,
    substitute_zero,
)
from .sympattern import (
    InstanceSpec,
    ZeroSpaceError,
    forced_zeros,
    generate_instance,
    pattern_build,
    pattern_holds,
    pattern_space,
)


@dataclass(frozen=True)
class HarnessConfig:
    """Size budget for random instances."""

    max_vars: int = 4
    max_degree: int = 3
    max_num: int = 8
    max_den: int = 8
    density: float = 0.5


DEFAULT_CONFIG = HarnessConfig()


@dataclass
class VerifyReport:
    theorem: str
    trials: int
    seed: int
    failures: List[Tuple[int, str, str]] = field(default_factory=list)
    elapsed: float = 0.0
    skipped: bool = False
    message: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures and not self.skipped

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIPPED"
        return "PASS" if not self.failures else "FAIL"

    def to_json(self, with_elapsed: bool = False) -> dict:
        out = {
            "theorem": self.theorem,
            "trials": self.trials,
            "seed": self.seed,
            "status": self.status,
            "failures": [{"seed": s, "input": d, "property": p} for s, d, p in self.failures],
        }
        if self.message:
            out["message"] = self.message
        if with_elapsed:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def trial_seed(seed: int, index: int) -> int:
    h = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# random instances

def random_h(rng, n: int, degrees=(2, 3), cfg: HarnessConfig = DEFAULT_CONFIG,
             field_: str = "rational", triangular: bool = False) -> PolyMap:
    """Random H with term degrees in ``degrees``; ``triangular`` makes JH strictly upper triangular."""
    comps = []
    for i in range(n):
        if triangular:
            k = n - 1 - i
            if k == 0:
                comps.append(Poly.zero(n))
                continue
            p = random_poly(rng, k, degrees, cfg.density, cfg.max_num, cfg.max_den, field_)
            comps.append(p.reindex(n, list(range(i + 1, n))))
        else:
            comps.append(random_poly(rng, n, degrees, cfg.density, cfg.max_num, cfg.max_den, field_))
    return PolyMap(n, comps)


def random_degrees(rng, top: int = 3) -> Tuple[int, ...]:
    degs = [d for d in range(2, top + 1) if rng.random() < 0.6]
    return tuple(degs) or (rng.randint(2, top),)


def random_f(rng, n: int, cfg: HarnessConfig = DEFAULT_CONFIG, field_: str = "rational",
             triangular: Optional[bool] = None) -> PolyMap:
    if triangular is None:
        triangular = rng.random() < 0.5
    triangular = triangular and n > 1
    zero = PolyMap.zero(n, n)
    for _ in range(8):
        H = random_h(rng, n, random_degrees(rng, cfg.max_degree), cfg, field_, triangular)
        if H != zero:
            break
    return PolyMap.identity(n) + H


def _instance(rng, name: str, N: int, degs=None) -> PolyMap:
    degs = frozenset(degs or random_degrees(rng))
    return generate_instance(InstanceSpec(N, degs, name, "none"), rng.randrange(2**32))


def _witness_has_zero_tail(G: PolyMap, H: PolyMap, n: int) -> bool:
    """Every witness of G has zero entries past n, and its head is a witness of H."""
    for w in dep.solve_dependence(G):
        if any(not c.is_zero() for c in w.lam[n:]):
            return False
        if not dep.lambda_annihilates(H, w.lam[:n]):
            return False
    return True


# ---------------------------------------------------------------------------
# suites: each takes (rng, cfg) and returns (input for the digest, violated properties)

Trial = Tuple[object, List[str]]


def _meng(rng, cfg) -> Trial:
    n = rng.randint(1, min(3, cfg.max_vars))
    F = random_f(rng, n, cfg)
    M = red.meng_extend(F)
    bad = []
    if not pattern_holds(jacobian(M.h_part()), pattern_build("rsjc", 2 * n)):
        bad.append("rsjc")
    sliced = substitute_zero(M, range(n, 2 * n))
    if sliced != F.reindex(2 * n, range(n)).concat(PolyMap.zero(n, 2 * n)):
        bad.append("y=0 slice")
    if is_nilpotent(jacobian(F.h_part())) != is_nilpotent(jacobian(M.h_part())):
        bad.append("nilpotency transfer")
    if n <= 2 and is_keller(F) != is_keller(M):
        bad.append("keller transfer")
    return map_to_json(F), bad


def _hessequiv(rng, cfg) -> Trial:
    N = rng.randint(1, 3)
    src = rng.choice(("sjc", "rsjc"))
    dst = "rsjc" if src == "sjc" else "sjc"
    F = PolyMap.identity(N) + _instance(rng, src, N)
    G = red.sjc_rsjc_conj(F)
    bad = []
    if not pattern_holds(jacobian(G.h_part()), pattern_build(dst, N)):
        bad.append(f"{src}->{dst}")
    if red.sjc_rsjc_conj(G, inverse=True) != F:
        bad.append("round trip")
    if N <= 2 and keller_nilpotency(F) != keller_nilpotency(G):
        bad.append("keller/nilpotency transfer")
    return map_to_json(F), bad


def _rsjc_dsjc(rng, cfg) -> Trial:
    n = rng.randint(1, 3)
    src = rng.choice(("rsjc", "dsjc"))
    dst, direction = ("dsjc", "to_dsjc") if src == "rsjc" else ("rsjc", "to_rsjc")
    F = PolyMap.identity(2 * n) + _instance(rng, src, 2 * n)
    G = red.rsjc_dsjc_conj(F, direction)
    back = "to_rsjc" if direction == "to_dsjc" else "to_dsjc"
    bad = []
    if not pattern_holds(jacobian(G.h_part()), pattern_build(dst, 2 * n)):
        bad.append(f"{src}->{dst}")
    if red.rsjc_dsjc_conj(G, back) != F:
        bad.append("round trip")
    if n == 1 and keller_nilpotency(F) != keller_nilpotency(G):
        bad.append("keller/nilpotency transfer")
    return map_to_json(F), bad


def _druzkowski(rng, cfg) -> Trial:
    n = rng.randint(1, 2)
    F = random_f(rng, n, cfg)
    G = red.rsjc_dsjc_conj(red.meng_extend(F), "to_dsjc")
    bad = []
    if not pattern_holds(jacobian(G.h_part()), pattern_build("dsjc", 2 * n)):
        bad.append("dsjc")
    # negating the first half gives linear part (-x, y) and a symmetric Jacobian
    flip = ScalarMatrix.diagonal([-1] * n + [1] * n)
    neg = G.apply_matrix(flip) - PolyMap.linear(flip)
    if not pattern_holds(jacobian(neg), pattern_build("sjc", 2 * n)):
        bad.append("negated half is sjc")
    if is_nilpotent(jacobian(F.h_part())) != is_nilpotent(jacobian(G.h_part())):
        bad.append("nilpotency transfer")
    if n == 1 and is_keller(F) != is_keller(G):
        bad.append("keller transfer")
    return map_to_json(F), bad


def _asym_degree(rng, cfg) -> Trial:
    name = rng.choice(("asjc", "rasjc"))
    n = rng.randint(2, 4)
    degs = tuple(d for d in (2, 3, 4) if rng.random() < 0.5) or (rng.randint(2, 4),)
    dim, _ = pattern_space(InstanceSpec(n, frozenset(degs), name, "none"))
    bad = [] if dim == 0 else [f"pattern_space dimension {dim} != 0"]
    return {"pattern": name, "n": n, "degrees": list(degs)}, bad


def _random_pair(rng, cfg):
    n = rng.randint(1, 2)
    odd = rng.random() < 0.5
    big = n + 1 if odd else n
    Ff = random_f(rng, big, cfg)
    Ft = random_f(rng, n, cfg)
    return n, odd, Ff, Ft


def _djck(rng, cfg) -> Trial:
    n, odd, Ff, Ft = _random_pair(rng, cfg)
    case = rng.choice(("generic", "tilde_id", "pair_id"))
    if case == "tilde_id":
        Ft = PolyMap.identity(n)
    elif case == "pair_id":
        Ff = PolyMap.identity(Ff.n_in)
    G = red.djc_pair(Ff, Ft, odd)
    N = G.n_in
    JG = jacobian(G.h_part())
    bad = []
    if not pattern_holds(JG, pattern_build("djc", N)):
        bad.append("djc")
    if case == "tilde_id" and not pattern_holds(JG, pattern_build("hvjc", N)):
        bad.append("hvjc when F~ = y")
    if case == "pair_id" and not pattern_holds(JG, pattern_build("ahavjc", N)):
        bad.append("ahavjc when (F, f) = id")
    if red.djc_split(G, odd) != (Ff, Ft):
        bad.append("split(pair) round trip")
    if N <= 4 and is_keller(G) != (is_keller(Ff) and is_keller(Ft)):
        bad.append("keller transfer")
    return {"pair": map_to_json(Ff), "tilde": map_to_json(Ft), "odd": odd}, bad


def _dotdecom(rng, cfg) -> Trial:
    N = rng.randint(2, 4)
    F = PolyMap.identity(N) + _instance(rng, "djc", N)
    plus, minus = red.center_decompose(F)
    bad = []
    if plus + minus != F:
        bad.append("sum")
    for part, name in ((plus, "hvjc"), (minus, "ahavjc")):
        nonlinear = part - PolyMap.linear(part.linear_part())
        if not pattern_holds(jacobian(nonlinear), pattern_build(name, N)):
            bad.append(name)
    return map_to_json(F), bad


def _nplusone(rng, cfg) -> Trial:
    n = rng.randint(1, 2)
    name = rng.choice(("cjc", "acjc", "dsjc"))
    bad = []
    middle = {(n, j) for j in range(2 * n + 1)} | {(i, n) for i in range(2 * n + 1)}
    if forced_zeros(pattern_build(name, 2 * n + 1)) != middle:
        bad.append("forced zeros = middle row and column")
    F = PolyMap.identity(2 * n) + _instance(rng, name, 2 * n)
    E = red.dsjc_stabilize(F, "embed")
    if not pattern_holds(jacobian(E.h_part()), pattern_build(name, 2 * n + 1)):
        bad.append(f"embed keeps {name}")
    if red.dsjc_stabilize(E, "project") != F:
        bad.append("project(embed) round trip")
    G = PolyMap.identity(2 * n + 1) + _instance(rng, name, 2 * n + 1)
    P = red.dsjc_stabilize(G, "project")
    if not pattern_holds(jacobian(P.h_part()), pattern_build(name, 2 * n)):
        bad.append(f"project keeps {name}")
    if red.dsjc_stabilize(P, "embed") != G:
        bad.append("embed(project) round trip")
    return map_to_json(F), bad


def _cjcr(rng, cfg) -> Trial:
    n = rng.randint(1, 2)
    triangular = n > 1 and rng.random() < 0.5
    F = random_f(rng, n, cfg, "gaussian", triangular)
    R = red.realify(F)
    bad = []
    if not R.coefficients_in(Scalar.is_rational):
        bad.append("real coefficients")
    if not pattern_holds(jacobian(R.h_part()), pattern_build("cjc", 2 * n)):
        bad.append("cjc")
    if triangular:
        if not formal_inverse(F).exact:
            bad.append("F invertible")
        if not formal_inverse(R, max(F.degree(), 1) ** n).exact:
            bad.append("realify(F) invertible")
    return map_to_json(F), bad


def _power_linear(rng, cfg) -> Trial:
    n = rng.randint(1, 3)
    d = rng.choice((2, 4, 6))
    A = ScalarMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    while True:
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        if a * b**d - a**d * b:
            break
    res = red.power_linear_even(A, d, a, b)
    bad = []
    if not res.B.power(2).is_zero():
        bad.append("B^2 = 0")
    if res.T is not None and d <= 4 and not red.power_linear_identity_holds(A, d, res):
        bad.append("T-conjugation identity")
    return {"A": scalar_matrix_to_json(A), "d": d, "a": a, "b": b}, bad


def _quasi_translation(rng, cfg) -> Trial:
    name = rng.choice(("havjc", "ahvjc", "havsjc", "ahvsjc"))
    N = rng.randint(2, 4)
    H = _instance(rng, name, N)
    x = PolyMap.identity(N)
    bad = []
    if not pattern_holds(jacobian(H), pattern_build(name, N)):
        bad.append(name)
    if not quasi_translation_check(H):
        bad.append("JH.H = 0")
    if (x + H).compose(x - H) != x:
        bad.append("x - H inverts x + H")
    return map_to_json(H), bad


def _meng_dp(rng, cfg) -> Trial:
    n = rng.randint(1, 2)
    H = random_h(rng, n, random_degrees(rng), cfg, triangular=rng.random() < 0.3)
    G = red.meng_extend_dp(H, 2)
    bad = []
    if not pattern_holds(jacobian(G), pattern_build("rsjc", 2 * n)):
        bad.append("rsjc")
    if not _witness_has_zero_tail(G, H, n):
        bad.append("mu = 0")
    return map_to_json(H), bad


def _nred(rng, cfg) -> Trial:
    n = rng.randint(1, 3)
    regime = rng.choice(("none", "det_zero", "nilpotent"))
    if regime == "none":
        H = random_h(rng, n, random_degrees(rng), cfg)
    else:
        # strictly triangular JH is nilpotent, hence singular
        H = random_h(rng, n, random_degrees(rng), cfg, triangular=True)
    d = rng.randint(2, 3)
    P = dep.nred_pad(H, d, regime)
    JP = jacobian(P)
    bad = []
    if regime == "nilpotent" and not is_nilpotent(JP):
        bad.append("nilpotency kept")
    if regime == "det_zero" and not JP.det().is_zero():
        bad.append("det = 0 kept")
    if not _witness_has_zero_tail(P, H, n):
        bad.append("padding witness transfer")
    return {"H": map_to_json(H), "regime": regime, "d": d}, bad


def _random_planar_form(rng, max_deg: int = 5) -> dep.PlanarHessianForm:
    deg = rng.randint(2, max_deg)
    g = random_poly(rng, 1, range(2, deg + 1), 0.7, 6, 4)
    a, b = rng.randint(-4, 4), rng.randint(-4, 4)
    if a == b == 0:
        a = 1
    c, d = rng.randint(-6, 6), rng.randint(-6, 6)
    return dep.PlanarHessianForm(g, Scalar(a), Scalar(b), Scalar(c), Scalar(d))


def _planar_hessian(rng, cfg) -> Trial:
    src = _random_planar_form(rng)
    h = src.reconstruct()
    bad = []
    try:
        out = dep.planar_hessian_decompose(h)
    except ValueError as exc:
        return poly_to_json(h), [f"decompose raised: {exc}"]
    if (out.reconstruct() - h).degree() > 0:
        bad.append("reconstruction")
    if out.g.degree() >= 2:
        a, b = int(out.a.as_rational()), int(out.b.as_rational())
        if not (a > 0 or (a == 0 and b > 0)):
            bad.append("sign normalization")
    return poly_to_json(h), bad


def _dillen_n2(rng, cfg) -> Trial:
    h = _random_planar_form(rng, 4).reconstruct()
    H = PolyMap(2, [h.diff(0), h.diff(1)])
    bad = []
    if not jacobian(H).det().is_zero():
        bad.append("det JH = 0")
    if not dep.solve_dependence(H):
        bad.append("dependence witness exists")
    return poly_to_json(h), bad


SKIPPED = {
    "cru-degree-skip": "the crujc/crrjc/crdjc/crljc patterns are only defined by figures "
                       "missing from the source; not cataloged, so nothing is checked",
}

REGISTRY: Dict[str, Callable] = {
    "meng": _meng,
    "hessequiv": _hessequiv,
    "rsjc-dsjc": _rsjc_dsjc,
    "druzkowski": _druzkowski,
    "asym-degree": _asym_degree,
    "cru-degree-skip": None,
    "djck": _djck,
    "dotdecom": _dotdecom,
    "nplusone": _nplusone,
    "cjcr": _cjcr,
    "power-linear": _power_linear,
    "quasi-translation": _quasi_translation,
    "meng-dp": _meng_dp,
    "nred": _nred,
    "planar-hessian": _planar_hessian,
    "dillen-n2": _dillen_n2,
}

THEOREMS = tuple(REGISTRY)


def run_trial(name: str, seed: int, index: int, cfg: HarnessConfig = DEFAULT_CONFIG):
    """(trial seed, input digest, violated properties) of one trial."""
    s = trial_seed(seed, index)
    rng = random.Random(s)
    try:
        inp, bad = REGISTRY[name](rng, cfg)
    except (ValueError, ArithmeticError, RuntimeError, ZeroSpaceError) as exc:
        return s, "-", [f"exception {type(exc).__name__}: {exc}"]
    return s, digest(inp), bad


def _run_trial_args(args):
    return run_trial(*args)


def verify_theorem(name: str, trials: int = 100, seed: int = 0,
                   cfg: HarnessConfig = DEFAULT_CONFIG, jobs: int = 1) -> VerifyReport:
    if name not in REGISTRY:
        raise KeyError(f"unknown theorem id {name!r}; known: {', '.join(THEOREMS)}")
    if trials < 0:
        raise ValueError("trials must be >= 0")
    t0 = time.perf_counter()
    if REGISTRY[name] is None:
        return VerifyReport(name, trials, seed, skipped=True, message=SKIPPED[name])
    report = VerifyReport(name, trials, seed)
    args = [(name, seed, k, cfg) for k in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_trial_args, args, chunksize=8))
    else:
        results = map(_run_trial_args, args)
    for s, dg, bad in results:
        report.failures.extend((s, dg, p) for p in bad)
    report.elapsed = time.perf_counter() - t0
    return report
