import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.physics.quantum import TensorProduct

from conftest import SQ2, m_to_sp, sp_equal, sp_to_poly, syms
from jacsym.exactnum import HALF_SQRT2, I, Scalar
from jacsym.harness import random_f
from jacsym.linalg import ScalarMatrix
from jacsym.multipoly import Poly
from jacsym.polymap import (
    PolyMap,
    formal_inverse,
    is_keller,
    is_nilpotent,
    jacobian,
    keller_nilpotency,
    substitute_zero,
)
from jacsym.reductions import (
    ReductionError,
    center_decompose,
    djc_pair,
    djc_split,
    dsjc_stabilize,
    meng_extend,
    meng_extend_dp,
    power_linear_even,
    power_linear_identity_holds,
    realify,
    reduction_report,
    rsjc_dsjc_conj,
    sjc_conjugator,
    sjc_rsjc_conj,
)
from jacsym.sympattern import InstanceSpec, classify_map, generate_instance, pattern_build, pattern_holds


def v(n, i):
    return Poly.var(n, i)


def holds(F, name):
    return pattern_holds(jacobian(F.h_part()), pattern_build(name, F.n_in))


# -- meng ------------------------------------------------------------------

def test_meng_identity():
    for n in (1, 2, 3):
        assert meng_extend(PolyMap.identity(n)) == PolyMap.identity(2 * n)


def test_meng_one_variable_matches_gradient_oracle():
    F = PolyMap(1, [v(1, 0) + v(1, 0) ** 2])
    x, y = sp.symbols("x1 x2")
    f = y * (x + x**2)
    M = meng_extend(F)
    assert [sp_to_poly(sp.diff(f, y), 2), sp_to_poly(sp.diff(f, x), 2)] == list(M.components)
    assert M == PolyMap(2, [v(2, 0) + v(2, 0) ** 2, v(2, 1) + (v(2, 0) * v(2, 1)).scale(2)])


def test_meng_two_variables_matches_gradient_oracle():
    F = PolyMap(2, [v(2, 0) + v(2, 1) ** 2, v(2, 1)])
    M = meng_extend(F)
    xs = syms(4)
    Fx = m_to_sp(F.reindex(4, [0, 1]))
    # f(x, y^r) = y_2 F_1 + y_1 F_2, gradient with respect to (y^r, x^r)
    f = xs[3] * Fx[0] + xs[2] * Fx[1]
    order = [xs[3], xs[2], xs[1], xs[0]]
    assert all(sp_equal(a, sp.diff(f, w)) for a, w in zip(m_to_sp(M), order))
    assert "rsjc" in classify_map(M)
    assert M.components[:2] == F.reindex(4, [0, 1]).components


def test_meng_rejects_non_square():
    with pytest.raises(ReductionError):
        meng_extend(PolyMap(2, [v(2, 0)]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_meng_properties(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    F = random_f(rng, n)
    M = meng_extend(F)
    assert holds(M, "rsjc")
    assert substitute_zero(M, range(n, 2 * n)) == F.reindex(2 * n, range(n)).concat(PolyMap.zero(n, 2 * n))
    assert is_nilpotent(jacobian(F.h_part())) == is_nilpotent(jacobian(M.h_part()))
    assert M.h_part().degrees() == F.h_part().degrees()
    # upper right block of JM is zero, lower right is the anti-transpose of JF
    JM, JF = jacobian(M), jacobian(F).subst([v(2 * n, k) for k in range(n)])
    for i in range(n):
        for j in range(n):
            assert JM[i, n + j].is_zero()
            assert JM[n + i, n + j] == JF[n - 1 - j, n - 1 - i]


# -- sjc <-> rsjc ------------------------------------------------------------

def test_sjc_conjugator_identities():
    T = sjc_conjugator(3)
    R = ScalarMatrix.reversal(3)
    assert T.inverse() == (ScalarMatrix.identity(3) - R.scale(I)).scale(HALF_SQRT2)
    assert T.inverse() == (R @ T).scale(-I)
    assert T.transpose() == T


def test_sjc_rsjc_example():
    x1, x2 = v(2, 0), v(2, 1)
    F = PolyMap(2, [x1 + (x1**2).scale(3), x2])
    G = sjc_rsjc_conj(F)
    z = (x1 + x2.scale(I)) ** 2
    c = Scalar(0, 0, mpq(3, 4))  # 3 sqrt2 / 4
    assert G == PolyMap(2, [x1 + z.scale(c), x2 + z.scale(-I * c)])
    assert "rsjc" in classify_map(G)
    # substitution oracle
    X = sp.Matrix(syms(2))
    Ts = (sp.eye(2) + sp.I * sp.Matrix([[0, 1], [1, 0]])) * SQ2 / 2
    TX = Ts * X
    FT = sp.Matrix([TX[0] + 3 * TX[0] ** 2, TX[1]])
    want = Ts.inv() * FT
    assert all(sp_equal(a, b) for a, b in zip(m_to_sp(G), want))
    assert sjc_rsjc_conj(G, inverse=True) == F
    assert sjc_rsjc_conj(PolyMap.identity(3)) == PolyMap.identity(3)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.sampled_from(["sjc", "rsjc"]), st.integers(0, 10**6))
def test_sjc_rsjc_both_directions(n, src, seed):
    F = PolyMap.identity(n) + generate_instance(InstanceSpec(n, frozenset({2, 3}), src, "none"), seed)
    G = sjc_rsjc_conj(F)
    assert holds(G, "rsjc" if src == "sjc" else "sjc")
    assert sjc_rsjc_conj(G, inverse=True) == F


# -- rsjc <-> dsjc ---------------------------------------------------------

def test_rsjc_dsjc_example():
    x, y = v(2, 0), v(2, 1)
    Ht = PolyMap(2, [x**2, (x * y).scale(2)])
    F = PolyMap.identity(2) + Ht
    D = rsjc_dsjc_conj(F, "to_dsjc")
    half = Scalar(1) / 2
    want = PolyMap(2, [(x**2).scale(3) + (x * y).scale(2) - y**2, -(x**2) + (x * y).scale(2) + (y**2).scale(3)])
    assert D.h_part() == want.scale(half)
    assert "dsjc" in classify_map(D)
    assert rsjc_dsjc_conj(D, "to_rsjc") == F
    assert rsjc_dsjc_conj(PolyMap.identity(4)) == PolyMap.identity(4)
    with pytest.raises(ReductionError):
        rsjc_dsjc_conj(PolyMap.identity(3))
    with pytest.raises(ValueError):
        rsjc_dsjc_conj(F, "sideways")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.sampled_from(["rsjc", "dsjc"]), st.integers(0, 10**6))
def test_rsjc_dsjc_transport(n, src, seed):
    F = PolyMap.identity(2 * n) + generate_instance(InstanceSpec(2 * n, frozenset({2, 3}), src, "none"), seed)
    if src == "rsjc":
        G = rsjc_dsjc_conj(F, "to_dsjc")
        assert holds(G, "dsjc") and rsjc_dsjc_conj(G, "to_rsjc") == F
    else:
        G = rsjc_dsjc_conj(F, "to_rsjc")
        assert holds(G, "rsjc") and rsjc_dsjc_conj(G, "to_dsjc") == F
    if n == 1:
        assert keller_nilpotency(F) == keller_nilpotency(G)


# -- stabilization -----------------------------------------------------------

def test_stabilize_examples():
    assert dsjc_stabilize(PolyMap.identity(2), "embed") == PolyMap.identity(3)
    x, y = v(2, 0), v(2, 1)
    F = rsjc_dsjc_conj(PolyMap.identity(2) + PolyMap(2, [x**2, (x * y).scale(2)]))
    E = dsjc_stabilize(F, "embed")
    assert E.n_in == 3 and E[1] == v(3, 1)
    assert "dsjc" in classify_map(E)
    assert dsjc_stabilize(E, "project") == F
    bad = PolyMap(3, [v(3, 0), v(3, 1) + v(3, 0) ** 2, v(3, 2)])
    with pytest.raises(ReductionError):
        dsjc_stabilize(bad, "project")
    bad = PolyMap(3, [v(3, 0) + v(3, 1) ** 2, v(3, 1), v(3, 2)])
    with pytest.raises(ReductionError):
        dsjc_stabilize(bad, "project")


# -- djc ---------------------------------------------------------------------

def test_djc_pair_examples():
    x1, x2, y1 = v(2, 0), v(2, 1), v(1, 0)
    half = Scalar(1) / 2
    Ff = PolyMap(2, [x1 + x2**2, x2])
    G = djc_pair(Ff, PolyMap(1, [y1]), odd=True)
    a, b, c = v(3, 0), v(3, 1), v(3, 2)
    assert G == PolyMap(3, [a + (b**2).scale(half), b, c + (b**2).scale(half)])
    assert {"djc", "hvjc"} <= classify_map(G)
    G2 = djc_pair(PolyMap.identity(2), PolyMap(1, [y1 + y1**2]), odd=True)
    s = ((a - c) ** 2).scale(half)
    assert G2 == PolyMap(3, [a + s, b, c - s])
    cls = classify_map(G2)
    assert {"djc", "ahavjc"} <= cls and "hvjc" not in cls
    assert djc_pair(PolyMap.identity(2), PolyMap.identity(1)) == PolyMap.identity(3)
    assert djc_split(G, True) == (Ff, PolyMap(1, [y1]))
    assert djc_split(G2, True) == (PolyMap.identity(2), PolyMap(1, [y1 + y1**2]))
    assert djc_split(PolyMap.identity(3)) == (PolyMap.identity(2), PolyMap.identity(1))
    with pytest.raises(ReductionError):
        djc_pair(PolyMap(2, [x1.scale(2), x2]), PolyMap(1, [y1]))
    with pytest.raises(ReductionError):
        djc_pair(Ff, PolyMap.identity(2))


def test_djc_split_rejects_non_djc():
    with pytest.raises(ReductionError):
        djc_split(PolyMap(3, [v(3, 0) + v(3, 1) ** 2, v(3, 1), v(3, 2)]))


def test_djc_split_of_hvjc_instance_has_trivial_tilde():
    for seed in range(5):
        for n in (2, 3, 4):
            H = generate_instance(InstanceSpec(n, frozenset({2}), "hvjc", "none"), seed)
            _, Ft = djc_split(PolyMap.identity(n) + H)
            assert Ft == PolyMap.identity(n // 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_djc_round_trips(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    odd = rng.random() < 0.5
    Ff, Ft = random_f(rng, n + 1 if odd else n), random_f(rng, n)
    G = djc_pair(Ff, Ft, odd)
    assert holds(G, "djc")
    assert djc_split(G, odd) == (Ff, Ft)
    assert djc_pair(*djc_split(G, odd), odd) == G
    if G.n_in <= 4:
        assert is_keller(G) == (is_keller(Ff) and is_keller(Ft))


def test_center_decompose_examples():
    x1, x2 = v(2, 0), v(2, 1)
    half = Scalar(1) / 2
    plus, minus = center_decompose(PolyMap.identity(2))
    assert plus == PolyMap(2, [x1 + x2, x1 + x2]).scale(half)
    assert minus == PolyMap(2, [x1 - x2, x2 - x1]).scale(half)
    G = djc_pair(PolyMap(2, [v(2, 0) + v(2, 1) ** 2, v(2, 1)]), PolyMap.identity(1))
    plus, minus = center_decompose(G)
    assert plus + minus == G
    for part, name in ((plus, "hvjc"), (minus, "ahavjc")):
        nonlinear = part - PolyMap.linear(part.linear_part())
        assert pattern_holds(jacobian(nonlinear), pattern_build(name, 3))
    with pytest.raises(ReductionError):
        center_decompose(PolyMap(2, [x1 + x2**2, x2]))


# -- realify ----------------------------------------------------------------

def test_realify_examples():
    assert realify(PolyMap.identity(1)) == PolyMap.identity(2)
    x, y = v(2, 0), v(2, 1)
    R = realify(PolyMap(1, [v(1, 0) + (v(1, 0) ** 2).scale(I)]))
    assert R == PolyMap(2, [x - (x * y).scale(2), y + x**2 - y**2])
    J = jacobian(R.h_part())
    assert J[0, 0] == J[1, 1] and J[0, 1] == -J[1, 0]
    assert "cjc" in classify_map(R)
    F = PolyMap(2, [v(2, 0) + v(2, 1) ** 2, v(2, 1)])
    R = realify(F)
    assert "cjc" in classify_map(R)
    assert R.coefficients_in(Scalar.is_rational)
    with pytest.raises(ReductionError):
        realify(PolyMap(1, [v(1, 0) + (v(1, 0) ** 2).scale(Scalar(0, 0, 1))]))
    with pytest.raises(ReductionError):
        realify(PolyMap(1, [v(1, 0).scale(2)]))


def test_realify_matches_real_imaginary_parts():
    # (Re F(x + iy), Im F(x + iy)) conjugated with (x, y^r), n = 2
    x1, x2 = v(2, 0), v(2, 1)
    F = PolyMap(2, [x1 + (x2**2).scale(I), x2 + (x1 * x2).scale(Scalar(1, -2))])
    a1, a2, b1, b2 = sp.symbols("x1 x2 x3 x4", real=True)
    z = [a1 + sp.I * b2, a2 + sp.I * b1]  # y enters reversed
    Fz = [z[0] + sp.I * z[1] ** 2, z[1] + (1 - 2 * sp.I) * z[0] * z[1]]
    want = [sp.re(sp.expand(Fz[0])), sp.re(sp.expand(Fz[1])), sp.im(sp.expand(Fz[1])), sp.im(sp.expand(Fz[0]))]
    got = m_to_sp(realify(F))
    subs = dict(zip(syms(4), (a1, a2, b1, b2)))
    assert all(sp_equal(g.subs(subs), w) for g, w in zip(got, want))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_realify_invertibility_on_triangular_maps(seed):
    rng = random.Random(seed)
    F = random_f(rng, 2, field_="gaussian", triangular=True)
    R = realify(F)
    assert formal_inverse(F).exact
    assert formal_inverse(R, F.degree() ** 2).exact


# -- power linear ------------------------------------------------------------

def test_power_linear_examples():
    A = ScalarMatrix([[0, 1], [0, 0]])
    res = power_linear_even(A, 2, 1, 2)
    assert res.B == ScalarMatrix.block([[A.scale(2), A.scale(-4)], [A, A.scale(-2)]])
    assert res.B.power(2).is_zero()
    assert res.root == Scalar(2)
    assert res.T == ScalarMatrix([[2, -4], [1, -4]]).kron(ScalarMatrix.identity(2))
    assert power_linear_identity_holds(A, 2, res)
    assert power_linear_even(ScalarMatrix([[0]]), 2, 1, 2).B.is_zero()
    res4 = power_linear_even(A, 4, 1, 2)
    assert res4.T is None and res4.B.power(2).is_zero()
    with pytest.raises(ReductionError):
        power_linear_even(A, 3, 1, 2)
    with pytest.raises(ReductionError):
        power_linear_even(A, 2, 1, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.sampled_from([2, 4, 6]), st.integers(0, 10**6))
def test_power_linear_b_squared(n, d, seed):
    rng = random.Random(seed)
    A = ScalarMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    a, b = rng.choice([(1, 2), (2, 1), (-1, 3), (1, -1), (3, 2)])
    res = power_linear_even(A, d, a, b)
    assert res.B.power(2).is_zero()
    if res.T is not None and d == 2:
        assert power_linear_identity_holds(A, d, res)


def test_power_linear_identity_by_sympy():
    A = ScalarMatrix([[1, 1], [-1, -1]])
    res = power_linear_even(A, 2, 1, 2)
    xs = sp.Matrix(syms(4))
    As = sp.Matrix([[1, 1], [-1, -1]])
    Ts = TensorProduct(sp.Matrix([[2, -4], [1, -4]]), sp.eye(2))
    u = Ts * xs
    Fu = list(u[:2, :] + (As * u[:2, :]).applyfunc(lambda t: t**2)) + list(u[2:, :])
    lhs = Ts.inv() * sp.Matrix(Fu)
    Bs = sp.Matrix([[2, -4], [1, -2]])
    rhs = xs + (TensorProduct(Bs, As) * xs).applyfunc(lambda t: t**2)
    assert sp.expand(lhs - rhs) == sp.zeros(4, 1)
    assert power_linear_identity_holds(A, 2, res)


# -- meng with padding -------------------------------------------------------

def test_meng_dp_examples():
    x, y = v(2, 0), v(2, 1)
    G = meng_extend_dp(PolyMap(1, [v(1, 0) ** 2]), 2)
    assert G == PolyMap(2, [x**2, (x * y).scale(2) + x**2])
    assert jacobian(G) == jacobian(PolyMap(2, [x**2, (x * y).scale(2) + x**2]))
    assert pattern_holds(jacobian(G), pattern_build("rsjc", 2))
    assert meng_extend_dp(PolyMap.zero(1, 1), 3) == PolyMap(2, [Poly.zero(2), x**3])
    G = meng_extend_dp(PolyMap(2, [v(2, 1) ** 2, Poly.zero(2)]), 2)
    assert pattern_holds(jacobian(G), pattern_build("rsjc", 4))
    with pytest.raises(ReductionError):
        meng_extend_dp(PolyMap.zero(1, 1), 1)


def test_reduction_report():
    F = PolyMap(2, [v(2, 0) + v(2, 1) ** 2, v(2, 1)])
    rep = reduction_report([F], [meng_extend(F)])
    assert "rsjc" in rep.output_patterns[0]
    before, after = rep.preserved["before"][0], rep.preserved["after"][0]
    assert before["is_keller"] == after["is_keller"] and before["jh_nilpotent"] == after["jh_nilpotent"]
    assert rep.to_json()["input_patterns"] == sorted(rep.input_patterns)
