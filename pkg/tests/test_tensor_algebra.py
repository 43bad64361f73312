import random

import pytest

from quasihopf.algebra import (
    BasedAlgebra,
    DimensionMismatch,
    LinearSystem,
    NotInvertible,
    Tensor,
    flip,
    mat_inv,
    mat_mul,
    tensor_inv,
)
from quasihopf.cyclo import CycNum, ONE, ZERO, rational
from quasihopf.presets import build_cartan, build_u, u_index


@pytest.fixture(scope="module")
def u():
    return build_u()


@pytest.fixture(scope="module")
def cartan():
    return build_cartan(1)


def random_tensor(alg, arity, rng, terms=5):
    coeffs = {}
    for _ in range(terms):
        key = tuple(rng.randrange(alg.dim) for _ in range(arity))
        coeffs[key] = CycNum(
            tuple(rng.randint(-3, 3) for _ in range(4)), rng.randint(1, 3)
        )
    return Tensor(alg, arity, coeffs)


def test_construction_rejects_bad_tables():
    # a non-associative table: b1*b1 = b0 but unit inconsistent
    labels = ["x", "y"]
    table = {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}, (1, 1): {0: ONE, 1: ONE}}
    with pytest.raises(ValueError):
        BasedAlgebra(labels, table, {0: ONE, 1: ONE})


def test_alg_mul_examples(u):
    # K E = -EK normal-formed: K*E = -(E*K)
    assert u.K * u.E == -(u.E * u.K)
    assert u.E * u.E == u.algebra.zero()
    # F*E = EF - (K - K^-1)/2
    assert u.F * u.E == u.E * u.F - u.commutator_target()


def test_alg_mul_dimension_mismatch(u, cartan):
    with pytest.raises(DimensionMismatch):
        u.E * cartan.algebra.basis(0)


def test_tensor_mul_unit_and_examples(u):
    one2 = Tensor.unit(u.algebra, 2)
    t = Tensor.from_elems([u.E, u.F])
    assert one2 * t == t and t * one2 == t
    # (K (x) K)(E (x) 1) = -EK (x) K
    kk = Tensor.from_elems([u.K, u.K])
    e1 = Tensor.from_elems([u.E, u.algebra.unit()])
    prod = kk * e1
    expect = Tensor.from_elems([-(u.E * u.K), u.K])
    assert prod == expect
    # orthogonal idempotent pairs
    for a in range(2):
        for b in range(2):
            ea = Tensor.from_elems([u.e[a], u.e[b]])
            for c in range(2):
                for d in range(2):
                    ec = Tensor.from_elems([u.e[c], u.e[d]])
                    expect = ea if (a, b) == (c, d) else Tensor(u.algebra, 2, {})
                    assert ea * ec == expect


def test_tensor_mul_associative_random(u, cartan):
    rng = random.Random(11)
    for alg in (u.algebra, cartan.algebra):
        for _ in range(12):
            s = random_tensor(alg, 2, rng)
            t = random_tensor(alg, 2, rng)
            w = random_tensor(alg, 2, rng)
            assert (s * t) * w == s * (t * w)
        for _ in range(4):
            s = random_tensor(alg, 3, rng, terms=3)
            t = random_tensor(alg, 3, rng, terms=3)
            w = random_tensor(alg, 3, rng, terms=3)
            assert (s * t) * w == s * (t * w)


def test_tensor_inv(u, cartan):
    one2 = Tensor.unit(u.algebra, 2)
    assert tensor_inv(one2) == one2
    # K (x) K inverts to K^3 (x) K^3 since K^4 = 1
    kk = Tensor.from_elems([u.K, u.K])
    k3 = u.K * u.K * u.K
    assert tensor_inv(kk) == Tensor.from_elems([k3, k3])
    # the Cartan coassociator inverts to the tabulated inverse entries
    assert tensor_inv(cartan.phi) == cartan.phi_inv
    # a nilpotent perturbation of the identity is invertible
    j = one2 + Tensor.from_elems([u.E, u.F])
    jinv = tensor_inv(j)
    assert j * jinv == one2 and jinv * j == one2
    with pytest.raises(NotInvertible):
        tensor_inv(Tensor.from_elems([u.E, u.F]))


def test_leg_maps(u, cartan):
    # flip swaps legs
    t = Tensor.from_elems([u.E, u.F])
    assert flip(t) == Tensor.from_elems([u.F, u.E])
    # (eps (x) Id)(K (x) E) = eps(K) E = E with eps(e_j) = delta_{j0}
    eps = [ZERO] * 16
    eps[u_index(0, 0, 0)] = ONE
    ke = Tensor.from_elems([u.K, u.E])
    assert ke.contract_leg(0, eps).to_elem() == u.E
    # (Delta_C (x) Id)(e2 (x) e0) expands the first leg over a + b = 2
    t = Tensor(cartan.algebra, 2, {(2, 0): ONE})
    out = t.expand_leg(0, cartan.delta)
    assert out.coeffs == {(a, (2 - a) % 4, 0): ONE for a in range(4)}
    # permutation convention: (2,3,1) sends x(x)y(x)z to y(x)z(x)x
    t3 = Tensor(cartan.algebra, 3, {(0, 1, 2): ONE})
    assert t3.permute_legs((2, 3, 1)).coeffs == {(1, 2, 0): ONE}
    # inserting the unit leg expands over the idempotent support of 1
    t2 = Tensor(cartan.algebra, 2, {(1, 2): ONE})
    mid = t2.insert_unit_leg(1)
    assert mid.coeffs == {(1, k, 2): ONE for k in range(4)}


def test_linear_system_particular_and_nullspace():
    sys = LinearSystem()
    two = rational(2)
    sys.add_equation({"x": ONE, "y": ONE}, two)
    sys.add_equation({"x": ONE, "y": -ONE}, ZERO)
    sol = sys.solve()
    assert sol is not None and not sol.nullspace
    assert sol.particular == {"x": ONE, "y": ONE}
    # underdetermined: one free direction
    sys2 = LinearSystem()
    sys2.add_equation({"a": ONE, "b": -ONE}, ZERO)
    sol2 = sys2.solve()
    assert len(sol2.nullspace) == 1
    # inconsistent
    sys3 = LinearSystem()
    sys3.add_equation({"a": ONE}, ONE)
    sys3.add_equation({"a": ONE}, rational(2))
    assert sys3.solve() is None


def test_mat_helpers():
    m = [[ONE, rational(2)], [ZERO, ONE]]
    inv = mat_inv(m)
    assert mat_mul(m, inv) == [[ONE, ZERO], [ZERO, ONE]]
    with pytest.raises(NotInvertible):
        mat_inv([[ONE, ONE], [ONE, ONE]])


def test_linear_system_random_property(u):
    # particular solutions satisfy the equations; nullspace vectors annihilate
    rng = random.Random(77)
    for _ in range(10):
        n_unknowns = rng.randint(3, 6)
        n_eqs = rng.randint(2, 7)
        rows = []
        for _ in range(n_eqs):
            row = {
                f"x{j}": CycNum((rng.randint(-2, 2), rng.randint(-1, 1), 0, 0))
                for j in range(n_unknowns)
                if rng.random() < 0.7
            }
            rows.append({k: v for k, v in row.items() if v})
        xs = {f"x{j}": CycNum((rng.randint(-3, 3), 0, rng.randint(-1, 1), 0)) for j in range(n_unknowns)}
        rhs = []
        for row in rows:
            total = ZERO
            for k, c in row.items():
                total = total + c * xs[k]
            rhs.append(total)
        sys_ = LinearSystem()
        for row, b in zip(rows, rhs):
            sys_.add_equation(row, b)
        sol = sys_.solve()
        assert sol is not None  # consistent by construction
        assign = dict(sol.particular)
        for row, b in zip(rows, rhs):
            total = -b
            for k, c in row.items():
                total = total + c * assign.get(k, ZERO)
            assert not total
        for null in sol.nullspace:
            for row in rows:
                total = ZERO
                for k, c in row.items():
                    total = total + c * null.get(k, ZERO)
                assert not total


def test_pbw_rewriting_confluence(u):
    # normal-forming a word equals multiplying the normal forms of any split
    from quasihopf.presets import pbw_normal_form

    rng = random.Random(78)
    syms = ["E", "F", "K", "Kinv"]
    for _ in range(25):
        word = [syms[rng.randrange(4)] for _ in range(rng.randint(2, 7))]
        cut = rng.randint(1, len(word) - 1)
        whole = u.element_from_words([(ONE, word)])
        left = u.element_from_words([(ONE, word[:cut])])
        right = u.element_from_words([(ONE, word[cut:])])
        assert left * right == whole
