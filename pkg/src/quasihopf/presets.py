"""Concrete presets: the 16-dimensional quantum group U at a fourth root of
unity and its 4-dimensional Cartan subalgebra C with quasi-Hopf structure.

U has generators E, F, K with KE = -EK, KF = -FK, [E, F] = (K - K^-1)/2,
E^2 = F^2 = 0, K^4 = 1.  Internally U is stored on the idempotent-adapted
basis E^x F^y e_j (x, y in {0,1}, j in Z4, e_j the weight idempotents),
which keeps all Cartan-supported tensors diagonal and sparse; K-power
monomials convert exactly both ways.
"""

from __future__ import annotations

from dataclasses import dataclass
from .algebra import AlgElem, BasedAlgebra, Tensor
from .cyclo import CycNum, BetaChoice, ONE, ZERO, i_power, rational

# -- PBW normal form on words in E, F, K --------------------------------------


def pbw_normal_form(word: list[str]) -> dict[tuple[int, int, int], CycNum]:
    """Rewrite a word in {E, F, K, Kinv} to its exact normal form
    sum of coeff * E^a F^b K^c with a, b in {0,1} and c in Z4."""
    half = rational(1, 2)
    start = []
    for sym in word:
        if sym == "Kinv":
            start += ["K", "K", "K"]
        elif sym in ("E", "F", "K"):
            start.append(sym)
        else:
            raise ValueError(f"unknown generator {sym!r}")
    out: dict[tuple[int, int, int], CycNum] = {}
    stack: list[tuple[CycNum, tuple[str, ...]]] = [(ONE, tuple(start))]
    while stack:
        coeff, w = stack.pop()
        rewritten = False
        for p in range(len(w) - 1):
            x, y = w[p], w[p + 1]
            if x == "K" and y in ("E", "F"):
                stack.append((-coeff, w[:p] + (y, "K") + w[p + 2 :]))
                rewritten = True
            elif x == "F" and y == "E":
                head, tail = w[:p], w[p + 2 :]
                stack.append((coeff, head + ("E", "F") + tail))
                stack.append((-coeff * half, head + ("K",) + tail))
                stack.append((coeff * half, head + ("K", "K", "K") + tail))
                rewritten = True
            elif x == y and x in ("E", "F"):
                rewritten = True  # square is zero: drop the term
            if rewritten:
                break
        if rewritten:
            continue
        a = w.count("E")
        b = w.count("F")
        c = w.count("K") % 4
        if a > 1 or b > 1:
            continue
        key = (a, b, c)
        prev = out.get(key, ZERO)
        tot = prev + coeff
        if tot:
            out[key] = tot
        else:
            out.pop(key, None)
    return out


def _kpow_to_ebasis(kform: dict[tuple[int, int, int], CycNum]) -> dict[tuple[int, int, int], CycNum]:
    """E^a F^b K^c = sum_j i^(j c) E^a F^b e_j."""
    out: dict[tuple[int, int, int], CycNum] = {}
    for (a, b, c), coeff in kform.items():
        for j in range(4):
            key = (a, b, j)
            v = coeff * i_power(j * c)
            prev = out.get(key, ZERO)
            tot = prev + v
            if tot:
                out[key] = tot
            else:
                out.pop(key, None)
    return out


def _ebasis_to_words(a: int, b: int, j: int) -> list[tuple[CycNum, list[str]]]:
    """E^a F^b e_j as a combination of K-power words, e_j = (1/4) sum_m i^(-jm) K^m."""
    quarter = rational(1, 4)
    out = []
    for m in range(4):
        coeff = quarter * i_power(-j * m)
        out.append((coeff, ["E"] * a + ["F"] * b + ["K"] * m))
    return out


def u_index(x: int, y: int, j: int) -> int:
    return x * 8 + y * 4 + (j % 4)


_U_LABELS = [
    f"{pre}e{j}"
    for pre in ("", "F ", "E ", "EF ")
    for j in range(4)
]


@dataclass
class UqPreset:
    """The quantum group U with cached generators and weight idempotents."""

    algebra: BasedAlgebra
    E: AlgElem
    F: AlgElem
    K: AlgElem
    Kinv: AlgElem
    e: list[AlgElem]

    def element_from_words(self, terms: list[tuple[CycNum, list[str]]]) -> AlgElem:
        """Exact element from a combination of generator words."""
        coeffs: dict[int, CycNum] = {}
        for scalar, word in terms:
            for (a, b, c), coeff in pbw_normal_form(word).items():
                for (x, y, j), v in _kpow_to_ebasis({(a, b, c): coeff}).items():
                    k = u_index(x, y, j)
                    prev = coeffs.get(k, ZERO)
                    tot = prev + scalar * v
                    if tot:
                        coeffs[k] = tot
                    else:
                        coeffs.pop(k, None)
        return AlgElem(self.algebra, coeffs)

    def cartan_element(self, weights: list[CycNum]) -> AlgElem:
        """sum_j weights[j] * e_j."""
        return AlgElem(
            self.algebra, {u_index(0, 0, j): w for j, w in enumerate(weights)}
        )

    def commutator_target(self) -> AlgElem:
        """(K - K^-1)/2 = i(e_1 - e_3), the value of [E, F]."""
        return (self.K - self.Kinv).scale(rational(1, 2))


def build_u() -> UqPreset:
    """Construct U and verify its defining relations exactly."""
    table: dict[tuple[int, int], dict[int, CycNum]] = {}
    for x in range(2):
        for y in range(2):
            for j in range(4):
                for u in range(2):
                    for v in range(2):
                        for k in range(4):
                            acc: dict[tuple[int, int, int], CycNum] = {}
                            for c1, w1 in _ebasis_to_words(x, y, j):
                                for c2, w2 in _ebasis_to_words(u, v, k):
                                    scal = c1 * c2
                                    for key, val in pbw_normal_form(w1 + w2).items():
                                        prev = acc.get(key, ZERO)
                                        tot = prev + scal * val
                                        if tot:
                                            acc[key] = tot
                                        else:
                                            acc.pop(key, None)
                            entry = {
                                u_index(*ek): v
                                for ek, v in _kpow_to_ebasis(acc).items()
                            }
                            if entry:
                                table[(u_index(x, y, j), u_index(u, v, k))] = entry
    unit = {u_index(0, 0, j): ONE for j in range(4)}
    alg = BasedAlgebra(_U_LABELS, table, unit, name="u_i(sl2)")
    e = [alg.basis(u_index(0, 0, j)) for j in range(4)]
    E = AlgElem(alg, {u_index(1, 0, j): ONE for j in range(4)})
    F = AlgElem(alg, {u_index(0, 1, j): ONE for j in range(4)})
    K = AlgElem(alg, {u_index(0, 0, j): i_power(j) for j in range(4)})
    Kinv = AlgElem(alg, {u_index(0, 0, j): i_power(-j) for j in range(4)})
    preset = UqPreset(alg, E, F, K, Kinv, e)
    _self_check_u(preset)
    return preset


def _self_check_u(u: UqPreset) -> None:
    one = u.algebra.unit()
    assert u.K * u.E == -(u.E * u.K), "KE = -EK fails"
    assert u.K * u.F == -(u.F * u.K), "KF = -FK fails"
    assert u.E * u.E == u.algebra.zero(), "E^2 = 0 fails"
    assert u.F * u.F == u.algebra.zero(), "F^2 = 0 fails"
    assert u.K * u.Kinv == one and u.Kinv * u.K == one, "K K^-1 = 1 fails"
    assert u.E * u.F - u.F * u.E == u.commutator_target(), "[E,F] fails"
    total = u.algebra.zero()
    for k in range(4):
        total = total + u.e[k]
        assert u.K * u.e[k] == u.e[k].scale(i_power(k)), "K e_k weight fails"
        for j in range(4):
            expect = u.e[k] if j == k else u.algebra.zero()
            assert u.e[k] * u.e[j] == expect, "idempotent orthogonality fails"
    assert total == one, "idempotent completeness fails"


# -- Cartan preset -------------------------------------------------------------

_C_LABELS = ["e0", "e1", "e2", "e3"]


def phi_scalar(beta: BetaChoice, a: int, b: int, c: int, inverse: bool = False) -> CycNum:
    """Coassociator entry phi^+-_(a,b,c): nontrivial only for a, b both odd."""
    if a % 2 == 1 and b % 2 == 1:
        sq = beta.beta_power(2)
        if c % 4 == 1:
            return sq if inverse else -sq
        if c % 4 == 2:
            return -ONE
        if c % 4 == 3:
            return -sq if inverse else sq
    return ONE


def braiding_scalar(beta: BetaChoice, a: int, b: int) -> CycNum:
    """R-matrix entry sigma(a, b) of the Cartan braiding."""
    row = [
        [ONE, ONE, ONE, ONE],
        [ONE, beta.beta, ONE, beta.beta],
        [ONE, -ONE, -ONE, ONE],
        [ONE, -beta.beta, -ONE, beta.beta],
    ]
    return row[a % 4][b % 4]


@dataclass
class CartanPreset:
    """C = group algebra of Z4 on its idempotent basis, with quasi-Hopf data."""

    beta: BetaChoice
    algebra: BasedAlgebra
    delta: list[Tensor]
    counit: list[CycNum]
    antipode: list[AlgElem]
    phi: Tensor
    phi_inv: Tensor
    r: Tensor

    def K_element(self) -> AlgElem:
        return AlgElem(self.algebra, {j: i_power(j) for j in range(4)})


def build_cartan(beta: BetaChoice | int = 1) -> CartanPreset:
    if isinstance(beta, int):
        beta = BetaChoice(beta)
    table = {(i, i): {i: ONE} for i in range(4)}
    unit = {i: ONE for i in range(4)}
    alg = BasedAlgebra(_C_LABELS, table, unit, name="C[Z4]")
    delta = [
        Tensor(alg, 2, {(a, (k - a) % 4): ONE for a in range(4)}) for k in range(4)
    ]
    counit = [ONE, ZERO, ZERO, ZERO]
    antipode = [alg.basis((-k) % 4) for k in range(4)]
    # Orientation: with the R-matrix kept verbatim and the standard (gauge-
    # covariant) hexagon and twist-transport formulas, the coassociator is the
    # "-" tabulation and its inverse the "+" tabulation; the componentwise
    # hexagon equations come out identical either way.
    phi = Tensor(
        alg,
        3,
        {
            (a, b, c): phi_scalar(beta, a, b, c, inverse=True)
            for a in range(4)
            for b in range(4)
            for c in range(4)
        },
    )
    phi_inv = Tensor(
        alg,
        3,
        {
            (a, b, c): phi_scalar(beta, a, b, c)
            for a in range(4)
            for b in range(4)
            for c in range(4)
        },
    )
    r = Tensor(
        alg,
        2,
        {(a, b): braiding_scalar(beta, a, b) for a in range(4) for b in range(4)},
    )
    preset = CartanPreset(beta, alg, delta, counit, antipode, phi, phi_inv, r)
    _self_check_cartan(preset)
    return preset


def _self_check_cartan(c: CartanPreset) -> None:
    one2 = Tensor.unit(c.algebra, 2)
    assert c.phi * c.phi_inv == Tensor.unit(c.algebra, 3), "phi inverse fails"
    for k in range(4):
        # counit rows of the coproduct
        left = c.delta[k].contract_leg(0, c.counit).to_elem()
        right = c.delta[k].contract_leg(1, c.counit).to_elem()
        assert left == c.algebra.basis(k) == right, "Cartan counit fails"
    # antipode is an algebra map on the commutative C
    for i in range(4):
        for j in range(4):
            prod = c.antipode[i] * c.antipode[j]
            expect = c.antipode[i] if i == j else c.algebra.zero()
            assert prod == expect, "antipode fails"
    # quadratic-form diagnostics: R^{k,k} = Q(k), monodromy at (1,1) = beta^2
    for k in range(4):
        assert braiding_scalar(c.beta, k, k) == c.beta.quadratic_form(k)
    mono = braiding_scalar(c.beta, 1, 1) * braiding_scalar(c.beta, 1, 1)
    assert mono == c.beta.beta_power(2)
    assert one2 * c.r == c.r


def embed_cartan_tensor(t: Tensor, u_algebra: BasedAlgebra) -> Tensor:
    """Reinterpret a Cartan tensor inside U (the idempotents are the first
    four basis elements of U, with identical indices)."""
    return Tensor(u_algebra, t.arity, dict(t.coeffs))
