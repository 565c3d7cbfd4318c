import itertools
import json

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import syms
from jacsym.linalg import PolyMatrix, nullspace
from jacsym.multipoly import Poly, monomials_of_degree
from jacsym.polymap import PolyMap, jacobian, quasi_translation_check
from jacsym.sympattern import (
    CATALOG_NAMES,
    GENERATABLE,
    InstanceSpec,
    Pattern,
    SignedConstraint,
    ZeroSpaceError,
    catalog_valid_at,
    forced_zeros,
    generate_instance,
    pattern_build,
    pattern_classify,
    pattern_from_json,
    pattern_holds,
    pattern_linear_system,
    pattern_space,
    pattern_to_json,
)

x1, x2 = Poly.var(2, 0), Poly.var(2, 1)


def mat(rows):
    return PolyMatrix(rows, 2)


def space_dim(name, n, degs):
    return pattern_space(InstanceSpec(n, frozenset(degs), name, "none"))[0]


def test_build_examples():
    P = pattern_build("sjc", 2)
    assert P.constraints == (SignedConstraint("transpose", "+"),)
    assert ((1, 0), (0, 1), 1) in P.equations()
    assert pattern_build("asjc", 3).constraints[0].sign == "-"
    with pytest.raises(ValueError):
        pattern_build("crujc", 4)
    with pytest.raises(ValueError):
        pattern_build("rsnjc", 3)


def test_forced_zero_examples():
    assert forced_zeros(pattern_build("asjc", 3)) == {(0, 0), (1, 1), (2, 2)}
    middle = {(1, j) for j in range(3)} | {(i, 1) for i in range(3)}
    assert forced_zeros(pattern_build("dsjc", 3)) == middle
    assert forced_zeros(pattern_build("cjc", 3)) == middle
    assert forced_zeros(pattern_build("acjc", 3)) == middle
    assert forced_zeros(pattern_build("sjc", 4)) == set()


def test_holds_examples():
    assert pattern_holds(mat([[x1.scale(2), 0], [x2.scale(2), x1.scale(2)]]), pattern_build("rsjc", 2))
    Z = PolyMatrix.zeros(3, 3, 2)
    for name in CATALOG_NAMES:
        if catalog_valid_at(name, 3):
            assert pattern_holds(Z, pattern_build(name, 3))
    assert not pattern_holds(mat([[0, x2.scale(2)], [0, 0]]), pattern_build("sjc", 2))
    with pytest.raises(ValueError):
        pattern_holds(Z, pattern_build("sjc", 2))


def test_classify_examples():
    Z = PolyMatrix.zeros(2, 2, 2)
    assert pattern_classify(Z) == {n for n in CATALOG_NAMES if catalog_valid_at(n, 2)}
    I2 = pattern_classify(PolyMatrix.identity(2, 2))
    assert {"sjc", "rsjc", "djc", "crjc"} <= I2
    assert "hvsjc" not in I2
    skew = pattern_classify(mat([[0, 1], [-1, 0]]))
    assert "asjc" in skew and "sjc" not in skew


def test_space_examples():
    assert space_dim("asjc", 2, {2}) == 0
    assert space_dim("sjc", 2, {2}) == 4
    assert space_dim("rasjc", 3, {2, 3}) == 0
    with pytest.raises(ValueError):
        pattern_space(InstanceSpec(2, frozenset(), "sjc", "none"))


def _sympy_space_dim(pattern, n, degs):
    """Independent oracle: symbolic H with unknown coefficients, solved by sympy."""
    xs = syms(n)
    monos = [e for d in sorted(degs) for e in monomials_of_degree(n, d)]
    cs = sp.symbols(f"c0:{n * len(monos)}")
    H = []
    k = 0
    for _ in range(n):
        expr = 0
        for e in monos:
            expr += cs[k] * sp.Mul(*[x**p for x, p in zip(xs, e)])
            k += 1
        H.append(expr)
    J = sp.Matrix(H).jacobian(xs)
    eqs = []
    for (i, j), (a, b), s in pattern.equations():
        diff = sp.expand(J[a, b] - s * J[i, j])
        if diff != 0:
            eqs.extend(sp.Poly(diff, *xs).coeffs())
    if not eqs:
        return len(cs)
    return len(cs) - sp.Matrix([[sp.diff(q, c) for c in cs] for q in eqs]).rank()


@pytest.mark.parametrize("name,n,degs", [
    ("sjc", 2, {2}), ("asjc", 2, {2}), ("rasjc", 3, {2}), ("rsjc", 3, {2}),
    ("dsjc", 2, {2, 3}), ("djc", 3, {2}), ("cjc", 2, {2}), ("havjc", 3, {2}),
    ("crjc", 3, {2}), ("trasjc", 2, {2, 3}), ("rsnjc", 2, {2}), ("hvsjc", 3, {2}),
])
def test_space_dim_matches_sympy(name, n, degs):
    assert space_dim(name, n, degs) == _sympy_space_dim(pattern_build(name, n), n, degs)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("name", ["asjc", "rasjc"])
def test_antisymmetric_degree_bound(name, n):
    for r in range(1, 4):
        for degs in itertools.combinations((2, 3, 4), r):
            assert space_dim(name, n, degs) == 0
    # degree 1 terms survive
    assert space_dim(name, n, {1}) > 0


def _compose_equations(eqs):
    by_src = {}
    for src, dst, s in eqs:
        by_src.setdefault(src, []).append((dst, s))
    out = []
    for src, dst, s in eqs:
        for dst2, s2 in by_src.get(dst, []):
            out.append((src, dst2, s * s2))
    return out


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES])
@pytest.mark.parametrize("n", [2, 3])
def test_closure_does_not_change_solutions(name, n):
    if not catalog_valid_at(name, n):
        pytest.skip("pattern needs even dimension")
    eqs = pattern_build(name, n).equations()
    rows, unknowns = pattern_linear_system(n, {1, 2}, eqs)
    rows2, _ = pattern_linear_system(n, {1, 2}, eqs + _compose_equations(eqs))
    base = nullspace(rows, len(unknowns))
    assert len(base) == len(nullspace(rows2, len(unknowns)))
    # every basis vector of the original system solves the closed system
    for v in base:
        for r in rows2:
            assert sum((c * v[u] for u, c in r.items()), v[0] * 0) == v[0] * 0


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_forced_zero_consistency(name):
    for n in (2, 3, 4):
        if not catalog_valid_at(name, n):
            continue
        P = pattern_build(name, n)
        fz = forced_zeros(P)
        _, basis = pattern_space(InstanceSpec(n, frozenset({1, 2}), P, "none"))
        for H in basis:
            J = jacobian(H)
            assert pattern_holds(J, P)
            assert all(J[i, j].is_zero() for i, j in fz)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_generated_instances_satisfy_pattern(name):
    for n in (2, 3, 4):
        if not catalog_valid_at(name, n):
            continue
        for seed in range(6):
            degs = frozenset({2, 3} if seed % 2 else {2})
            spec = InstanceSpec(n, degs, name, "none")
            try:
                H = generate_instance(spec, seed)
            except ZeroSpaceError:
                assert name in ("asjc", "rasjc")
                continue
            assert pattern_holds(jacobian(H), pattern_build(name, n))
            assert H.degrees() <= degs
            assert H == generate_instance(spec, seed)


def test_generate_zero_space_error():
    with pytest.raises(ZeroSpaceError, match="space is zero"):
        generate_instance(InstanceSpec(2, frozenset({2}), "asjc", "none"), 0)


@pytest.mark.parametrize("name", ["havjc", "ahvjc", "havsjc", "ahvsjc"])
def test_quasi_translation_generators(name):
    for n in (2, 3, 4):
        for seed in range(5):
            H = generate_instance(InstanceSpec(n, frozenset({2, 3}), name, "none"), seed)
            x = PolyMap.identity(n)
            assert quasi_translation_check(H)
            assert (x + H).compose(x - H) == x


def test_mixed_hv_with_diagonal_forces_everything():
    for name in ("havsjc", "ahvsjc"):
        for n in (2, 3, 4):
            P = pattern_build(name, n)
            assert forced_zeros(P) == {(i, j) for i in range(n) for j in range(n)}


def test_generators_are_nontrivial():
    for name in GENERATABLE:
        if name in ("havsjc", "ahvsjc"):
            continue
        H = generate_instance(InstanceSpec(4, frozenset({2}), name, "none"), 3)
        assert H != PolyMap.zero(4, 4), name


def test_regimes():
    H = generate_instance(InstanceSpec(2, frozenset({2}), "sjc", "det_zero"), 1)
    assert jacobian(H).det().is_zero()
    H = generate_instance(InstanceSpec(3, frozenset({2}), "havjc", "nilpotent"), 1)
    assert jacobian(H).power(3).is_zero()
    with pytest.raises(ValueError):
        pattern_space(InstanceSpec(2, frozenset({2}), "sjc", "nilpotent"))


def test_raw_pattern_json():
    raw = {"dimension": 4, "constraints": [{"map": "transpose", "sign": "sigma"}]}
    P = pattern_from_json(raw)
    assert P.equations() == pattern_build("dsjc", 4).equations()
    assert pattern_from_json(json.loads(json.dumps(pattern_to_json(P)))) == P
    region = {"dimension": 3, "constraints": [{"map": "transpose", "sign": "-", "region": "above_anti_diagonal"}]}
    Q = pattern_from_json(region)
    assert all(i + j < 2 for (i, j), _, _ in Q.equations())
    with pytest.raises(ValueError):
        pattern_from_json({"dimension": 2, "constraints": [{"map": "rotate"}]})


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["sjc", "rsjc", "dsjc", "djc", "cjc", "hvjc", "ahavjc"]), st.integers(0, 10**6))
def test_classify_contains_generated_pattern(name, seed):
    H = generate_instance(InstanceSpec(4, frozenset({2}), name, "none"), seed)
    assert name in pattern_classify(jacobian(H))
