"""Constraint-solving layer: graded coalgebra families on the induced
bimodules, the resulting two-parameter-family coproducts on U, automorphism
normalization to standard form, and the exact R-matrix classification.

Necessity is established by exact linear algebra where constraints are linear
(the R-matrix ansatz) and by finite multiplicative-grid enumeration plus an
exponent-lattice rank computation where they are multiplicative (the
coalgebra-family parameters).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgElem, LinearSystem, Tensor, flip
from .cyclo import CycNum, ONE, ZERO, I_UNIT, BetaChoice
from .modules import ModuleCoalgebra, induce_regular, tensor_act
from .polys import Poly
from .presets import (
    CartanPreset,
    UqPreset,
    braiding_scalar,
    embed_cartan_tensor,
    u_index,
)
from .quasi import (
    QuasiBialgebraData,
    check_hexagons,
    check_r_intertwiner,
    hexagon_residuals,
)


class ZeroParameter(ValueError):
    """A coalgebra-family parameter that must be invertible is zero."""


class ConditionViolated(ValueError):
    """Coproduct existence conditions fail; names the violated constraints."""

    def __init__(self, conditions: list[str], detail: str = ""):
        self.conditions = conditions
        super().__init__(f"violated: {', '.join(conditions)} {detail}".strip())


class NotAutomorphism(ValueError):
    """The rescaling data does not define an algebra automorphism."""


_SIGN_HALF = (1, 1, -1, -1)  # (-1)^(a(a-1)/2) for a mod 4


def sign_half(a: int) -> CycNum:
    return ONE if _SIGN_HALF[a % 4] == 1 else -ONE


def sign_ab(a: int, b: int) -> CycNum:
    """(-1)^(a b)."""
    return ONE if (a * b) % 2 == 0 else -ONE


@dataclass(frozen=True)
class CoalgebraParams:
    """Scalars (c_0 = 1, c_1, c_2, c_3), eps^4 = 1 parametrizing the graded
    coalgebra structures delta on an induced bimodule."""

    c: tuple[CycNum, CycNum, CycNum, CycNum]
    eps: CycNum

    def __post_init__(self):
        if self.c[0] != ONE:
            raise ZeroParameter("c_0 must be 1")
        if not all(self.c):
            raise ZeroParameter("all c_a must be nonzero")
        if self.eps**4 != ONE:
            raise ValueError("eps must be a fourth root of unity")

    def c_l(self, a: int, b: int) -> CycNum:
        return self.c[(a + b) % 4] / self.c[a % 4]

    def c_r(self, a: int, b: int) -> CycNum:
        return self.eps ** (a % 4) * (self.c[(a + b) % 4] / self.c[b % 4]) * sign_half(a)


@dataclass(frozen=True)
class CoproductParams:
    """Lower (F-side) and upper (E-side) family parameters; the existence
    conditions are computed by the builder, not assumed here."""

    lower: CoalgebraParams
    upper: CoalgebraParams

    def quasiperiodicity_holds(self) -> bool:
        c, cb = self.lower.c, self.upper.c
        return all(
            c[(t + 2) % 4] * cb[t] == -(cb[(t + 2) % 4] * c[t]) for t in range(4)
        )

    def standard_d(self) -> CycNum:
        return self.upper.c[1] * self.lower.c[3]


@dataclass(frozen=True)
class StandardFormParams:
    d: CycNum
    eps: int

    def __post_init__(self):
        if not self.d:
            raise ZeroParameter("d must be nonzero")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +-1")


def expected_cbar_matrix(d: CycNum) -> list[list[CycNum]]:
    dinv = d.inv()
    return [
        [ONE, d, -ONE, -d],
        [ONE, -dinv, -ONE, dinv],
        [ONE, d, -ONE, -d],
        [ONE, -dinv, -ONE, dinv],
    ]


def omega_element(u: UqPreset, eps: int) -> AlgElem:
    """omega_eps = sum_a (-eps)^a (-1)^(a(a-1)/2) e_a."""
    sgn = -ONE if eps == 1 else ONE
    return u.cartan_element([sgn ** (a % 4) * sign_half(a) for a in range(4)])


# -- delta family on the induced bimodule ---------------------------------------


def build_delta_family(
    p: CoalgebraParams, side: str, u: UqPreset, cartan: CartanPreset
) -> ModuleCoalgebra:
    """The graded coalgebra on the 8-dimensional induced bimodule:
    delta(top_k) = sum_{a+b=k} top_a (x) top_b and
    delta(low_k) = sum_{a+b=k} c_L^{ab} low_a (x) top_b + c_R^{ab} top_a (x) low_b."""
    rep = induce_regular(u, cartan, side)
    delta: list[dict] = []
    for k in range(4):
        dk_top = {(2 * a, 2 * ((k - a) % 4)): ONE for a in range(4)}
        dk_low = {}
        for a in range(4):
            b = (k - a) % 4
            dk_low[(2 * a + 1, 2 * b)] = p.c_l(a, b)
            dk_low[(2 * a, 2 * b + 1)] = p.c_r(a, b)
        delta.append((dk_top, dk_low))
    interleaved = []
    for k in range(4):
        interleaved.append(delta[k][0])
        interleaved.append(delta[k][1])
    eps = []
    for k in range(4):
        eps.append(ONE if k == 0 else ZERO)
        eps.append(ZERO)
    return ModuleCoalgebra(rep, interleaved, eps)


def cartan_ambient_on_u_module(cartan: CartanPreset, u: UqPreset) -> QuasiBialgebraData:
    """The Cartan quasi-bialgebra as the left ambient for graded-coalgebra
    checks on U-modules restricted to C."""
    return QuasiBialgebraData(
        cartan.algebra,
        list(cartan.delta),
        list(cartan.counit),
        cartan.phi,
        cartan.phi_inv,
        None,
        name="cartan-ambient",
    )


# -- coproduct construction ------------------------------------------------------


def _delta_e_tensors(u: UqPreset) -> list[Tensor]:
    return [
        Tensor(
            u.algebra,
            2,
            {(u_index(0, 0, a), u_index(0, 0, (j - a) % 4)): ONE for a in range(4)},
        )
        for j in range(4)
    ]


def delta_f_tensor(u: UqPreset, p: CoalgebraParams) -> Tensor:
    coeffs = {}
    for a in range(4):
        for b in range(4):
            coeffs[(u_index(0, 1, a), u_index(0, 0, b))] = p.c_l(a, b)
            coeffs[(u_index(0, 0, a), u_index(0, 1, b))] = p.c_r(a, b)
    return Tensor(u.algebra, 2, coeffs)


def delta_e_tensor(u: UqPreset, pbar: CoalgebraParams) -> Tensor:
    coeffs = {}
    for a in range(4):
        for b in range(4):
            coeffs[(u_index(1, 0, a), u_index(0, 0, b))] = pbar.c_l(a, b)
            coeffs[(u_index(0, 0, a), u_index(1, 0, b))] = pbar.c_r(a, b)
    return Tensor(u.algebra, 2, coeffs)


def build_coproduct(
    P: CoproductParams,
    u: UqPreset,
    cartan: CartanPreset,
    force: bool = False,
) -> QuasiBialgebraData:
    """Coproduct on U from the two coalgebra families, with the Cartan
    coassociator.  The existence conditions are certified on the actual
    tensors: Delta(F)^2 = Delta(E)^2 = 0 (nilpotency) and
    [Delta(E), Delta(F)] = Delta((K - K^-1)/2) (commutator)."""
    de = delta_e_tensor(u, P.upper)
    df = delta_f_tensor(u, P.lower)
    d_es = _delta_e_tensors(u)
    violations = []
    if df * df:
        violations.append("nilpotency")
    if de * de:
        violations.append("nilpotency")
    target = Tensor(u.algebra, 2, {})
    for k, c in u.commutator_target().coeffs.items():
        target = target + d_es[k % 4].scale(c)
    if de * df - df * de - target:
        violations.append("commutator")
    if violations and not force:
        raise ConditionViolated(sorted(set(violations)))
    delta = []
    for x in range(2):
        for y in range(2):
            for j in range(4):
                t = d_es[j]
                if y:
                    t = df * t
                if x:
                    t = de * t
                delta.append(t)
    counit = [ZERO] * 16
    counit[u_index(0, 0, 0)] = ONE
    phi = embed_cartan_tensor(cartan.phi, u.algebra)
    phi_inv = embed_cartan_tensor(cartan.phi_inv, u.algebra)
    return QuasiBialgebraData(
        u.algebra, delta, counit, phi, phi_inv, None, name="coproduct-family"
    )


def coproduct_family_params(
    Q: QuasiBialgebraData, u: UqPreset
) -> tuple[CoalgebraParams, CoalgebraParams]:
    """Read the family parameters back off Delta(F), Delta(E) and verify
    every coefficient matches the parametrized form."""
    df = Q.delta_of(u.F)
    de = Q.delta_of(u.E)
    c = tuple(df.coeffs.get((u_index(0, 1, 0), u_index(0, 0, a)), ZERO) for a in range(4))
    cb = tuple(de.coeffs.get((u_index(1, 0, 0), u_index(0, 0, a)), ZERO) for a in range(4))
    if not (all(c) and all(cb)):
        raise ZeroParameter("coproduct is not of nonzero family type")
    c1r = df.coeffs.get((u_index(0, 0, 1), u_index(0, 1, 0)), ZERO)
    cb1r = de.coeffs.get((u_index(0, 0, 1), u_index(1, 0, 0)), ZERO)
    lower = CoalgebraParams(c, c1r / c[1])
    upper = CoalgebraParams(cb, cb1r / cb[1])
    if delta_f_tensor(u, lower) != df or delta_e_tensor(u, upper) != de:
        raise ValueError("coproduct does not lie in the two-parameter family")
    return lower, upper


# -- automorphism normalization --------------------------------------------------


def apply_automorphism(
    Q: QuasiBialgebraData,
    u: UqPreset,
    x: tuple[CycNum, CycNum, CycNum, CycNum],
    xbar: tuple | None = None,
) -> QuasiBialgebraData:
    """Transport Q along the algebra automorphism K -> K, E -> E sum xbar_a e_a,
    F -> F sum x_a e_a (with xbar_1 = x_3^-1, xbar_2 = x_2, xbar_3 = x_1^-1)."""
    if x[0] != ONE or not all(x):
        raise NotAutomorphism("x_0 = 1 and all x_a nonzero required")
    derived = (ONE, x[3].inv(), x[2], x[1].inv())
    if xbar is None:
        xbar = derived
    elif tuple(xbar) != derived:
        raise NotAutomorphism("xbar must be (1, x3^-1, x2, x1^-1)")
    x_inv = (ONE, x[1].inv(), x[2].inv(), x[3].inv())
    xbar_inv = (ONE, xbar[1].inv(), xbar[2].inv(), xbar[3].inv())
    theta = _automorphism_images(u, x, xbar)
    theta_inv = _automorphism_images(u, x_inv, xbar_inv)
    for i in range(16):
        got = _apply_images(theta, _apply_images(theta_inv, u.algebra.basis(i)))
        if got != u.algebra.basis(i):
            raise NotAutomorphism("inverse images do not invert")
    delta = []
    for i in range(16):
        t = Q.delta_of(_apply_images(theta, u.algebra.basis(i)))
        delta.append(t.apply_leg(0, theta_inv).apply_leg(1, theta_inv))
    counit = [Q.counit_of(_apply_images(theta, u.algebra.basis(i))) for i in range(16)]
    phi = Q.phi.apply_leg(0, theta_inv).apply_leg(1, theta_inv).apply_leg(2, theta_inv)
    phi_inv = (
        Q.phi_inv.apply_leg(0, theta_inv).apply_leg(1, theta_inv).apply_leg(2, theta_inv)
    )
    r = None
    if Q.r is not None:
        r = Q.r.apply_leg(0, theta_inv).apply_leg(1, theta_inv)
    return QuasiBialgebraData(
        Q.algebra, delta, counit, phi, phi_inv, r, name=f"{Q.name}-normalized"
    )


def _automorphism_images(u: UqPreset, x: tuple, xbar: tuple) -> list[AlgElem]:
    te = u.E * u.cartan_element(list(xbar))
    tf = u.F * u.cartan_element(list(x))
    images = []
    for xd in range(2):
        for yd in range(2):
            for j in range(4):
                img = u.e[j]
                if yd:
                    img = tf * img
                if xd:
                    img = te * img
                images.append(img)
    return images


def _apply_images(images: list[AlgElem], elem: AlgElem) -> AlgElem:
    out = elem.algebra.zero()
    for k, c in elem.coeffs.items():
        out = out + images[k].scale(c)
    return out


def standard_form(
    P: CoproductParams, u: UqPreset, cartan: CartanPreset
) -> tuple[StandardFormParams, QuasiBialgebraData]:
    """Normalize the lower parameters to 1 by the automorphism with
    x = c^-1; then Delta(F) = F (x) 1 + omega_{-eps} (x) F exactly and
    Delta(E) is the one-parameter matrix in d = cbar_1 c_3."""
    Q = build_coproduct(P, u, cartan)
    x = (ONE, P.lower.c[1].inv(), P.lower.c[2].inv(), P.lower.c[3].inv())
    Qn = apply_automorphism(Q, u, x)
    eps_val = P.lower.eps
    eps = 1 if eps_val == ONE else -1
    if eps_val not in (ONE, -ONE):
        raise ValueError("standard form needs eps = +-1")
    d = P.standard_d()
    params = StandardFormParams(d, eps)
    # verify the normal form exactly
    one = u.algebra.unit()
    expect_df = Tensor.from_elems([u.F, one]) + Tensor.from_elems(
        [omega_element(u, -eps), u.F]
    )
    if Qn.delta_of(u.F) != expect_df:
        raise ValueError("standard form Delta(F) mismatch")
    de = Qn.delta_of(u.E)
    cbar = expected_cbar_matrix(d)
    for a in range(4):
        for b in range(4):
            got = de.coeffs.get((u_index(1, 0, a), u_index(0, 0, b)), ZERO)
            if got != cbar[a][b]:
                raise ValueError(f"standard form cbar_L mismatch at ({a},{b})")
    return params, Qn


def build_standard_coproduct(
    d: CycNum, eps: int, u: UqPreset, cartan: CartanPreset
) -> QuasiBialgebraData:
    """The standard-form coproduct with lower parameters 1 and upper
    parameters (1, d, -1, -d); valid for every nonzero d."""
    if not d:
        raise ZeroParameter("d must be nonzero")
    eps_c = ONE if eps == 1 else -ONE
    lower = CoalgebraParams((ONE, ONE, ONE, ONE), eps_c)
    upper = CoalgebraParams((ONE, d, -ONE, -d), -eps_c)
    return build_coproduct(CoproductParams(lower, upper), u, cartan)


# -- R-matrix classification -----------------------------------------------------

_MONO = {"1": (0, 0), "E": (1, 0), "F": (0, 1), "EF": (1, 1)}
_BLOCKS = [
    ("E", "F"),
    ("F", "E"),
    ("E", "E"),
    ("F", "F"),
    ("EF", "1"),
    ("1", "EF"),
    ("EF", "EF"),
]


@dataclass
class RMatrixResult:
    d: CycNum
    beta_exponent: int
    exists: bool
    r: Tensor | None
    certificate: dict

    def fe_block(self, u: UqPreset) -> list[list[CycNum]]:
        """The (F (x) E)-block coefficients R_FE^(a,b)."""
        if self.r is None:
            raise ValueError("no R-matrix")
        return [
            [
                self.r.coeffs.get((u_index(0, 1, a), u_index(1, 0, b)), ZERO)
                for b in range(4)
            ]
            for a in range(4)
        ]

    def block(self, u: UqPreset, m1: str, m2: str) -> list[list[CycNum]]:
        if self.r is None:
            raise ValueError("no R-matrix")
        x1, y1 = _MONO[m1]
        x2, y2 = _MONO[m2]
        return [
            [
                self.r.coeffs.get((u_index(x1, y1, a), u_index(x2, y2, b)), ZERO)
                for b in range(4)
            ]
            for a in range(4)
        ]


def tabulated_rfe_matrix(d: CycNum, beta: BetaChoice) -> list[list[CycNum]]:
    """The tabulated (F (x) E)-block of the classified R-matrix, Y = d i."""
    i = I_UNIT
    b = beta.beta
    y = d * i
    di = d * i
    two = CycNum.from_int(2)
    rows = [
        [y, -i, y, -i],
        [di, -(i * b), di, -(i * b)],
        [y, i, -y, -i],
        [di, i * b, -di, -(i * b)],
    ]
    return [[two * v for v in row] for row in rows]


def hexagon2_matrix_equations(
    d: CycNum, cartan: CartanPreset, fe: list[list]
) -> list[tuple[tuple[str, tuple[int, int]], object]]:
    """The second-hexagon matrix-equation family in the elimination's own
    bookkeeping, as ((label, (a, b)), residual) pairs (entrywise over (a, b),
    lowered-coproduct column c = 1):

        cbar_L^{a,1} FE[a][b+1] = phi^+_{b+2,1,a+2} sigma(a+2,1) FE[a][b]

    This family carries the normalization content that rigidifies the
    classification: its odd a+b entries hold iff d^2 = -1.  (The fully
    gauge-covariant hexagon residuals alone are satisfied for every nonzero
    d because coassociator-preserving coboundary twists move d around; see
    the normalization notes in the package docs.)"""
    from .presets import phi_scalar

    cbar = expected_cbar_matrix(d)
    eqs = []
    for a in range(4):
        for b in range(4):
            coeff = phi_scalar(cartan.beta, (b + 2) % 4, 1, (a + 2) % 4)
            coeff = coeff * braiding_scalar(cartan.beta, (a + 2) % 4, 1)
            lhs = cbar[a][1] * fe[a][(b + 1) % 4]
            rhs = coeff * fe[a][b]
            eqs.append(((f"hexagon2 matrix equation @ (a,b)=({a},{b})", (a, b)), lhs - rhs))
    return eqs


def solve_rmatrix(
    d: CycNum, u: UqPreset, cartan: CartanPreset, constraints: str = "normalized"
) -> RMatrixResult:
    """Exact elimination for an R-matrix on the standard-form coproduct
    (eps = 1): the ansatz is restricted by grading and counitality with the
    1 (x) 1 block pinned to the Cartan braiding; the intertwiner equations
    with Delta(E), Delta(F), Delta(K) form the linear stage (killing the
    mixed blocks and forcing the F (x) E matrix); then the hexagon
    identities are imposed on the solution family, with the second hexagon
    in its explicit matrix-equation form deciding existence (first Y = d i,
    then d^2 = -1).  ``constraints='covariant'`` drops
    the matrix-equation normalization and keeps only the gauge-covariant
    hexagon residuals (solvable for every nonzero d; the solutions are
    related by coassociator-preserving coboundary twists)."""
    if constraints not in ("normalized", "covariant"):
        raise ValueError("constraints must be 'normalized' or 'covariant'")
    Q = build_standard_coproduct(d, 1, u, cartan)
    alg = u.algebra

    def var(m1, m2, a, b):
        return f"{m1}.{m2}.{a}{b}"

    coeffs: dict[tuple, object] = {}
    for a in range(4):
        for b in range(4):
            key = (u_index(0, 0, a), u_index(0, 0, b))
            coeffs[key] = Poly.const(braiding_scalar(cartan.beta, a, b))
    for m1, m2 in _BLOCKS:
        x1, y1 = _MONO[m1]
        x2, y2 = _MONO[m2]
        for a in range(4):
            for b in range(4):
                key = (u_index(x1, y1, a), u_index(x2, y2, b))
                coeffs[key] = Poly.var(var(m1, m2, a, b))
    r_ansatz = Tensor(alg, 2, coeffs)

    system = LinearSystem()

    def add_poly_equation(poly: Poly):
        const, lin = poly.linear_split()
        system.add_equation(lin, -const)

    one_elem = alg.unit()
    for t in (
        r_ansatz.contract_leg(0, Q.counit) - Tensor.from_elems([one_elem]),
        r_ansatz.contract_leg(1, Q.counit) - Tensor.from_elems([one_elem]),
    ):
        for poly in t.coeffs.values():
            add_poly_equation(Poly.lift(poly))
    for x in (u.K, u.E, u.F):
        dx = Q.delta_of(x)
        resid = r_ansatz * dx - flip(dx) * r_ansatz
        for poly in resid.coeffs.values():
            add_poly_equation(Poly.lift(poly))
    sol = system.solve()
    if sol is None:
        return RMatrixResult(
            d, cartan.beta.exponent, False, None,
            {"constraint_id": "intertwiner", "witness": "linear stage inconsistent"},
        )
    values: dict[str, Poly] = {}
    free_names = [f"t{i}" for i in range(len(sol.nullspace))]
    all_vars = {v for m1, m2 in _BLOCKS for a in range(4) for b in range(4)
                for v in [var(m1, m2, a, b)]}
    for v in sorted(all_vars):
        p = Poly.const(sol.particular.get(v, ZERO))
        for i, null in enumerate(sol.nullspace):
            if v in null:
                p = p + Poly.var(free_names[i]) * null[v]
        values[v] = p

    param_coeffs = {}
    for key, c in r_ansatz.coeffs.items():
        val = c.substitute(values) if isinstance(c, Poly) else Poly.lift(c)
        param_coeffs[key] = val.constant() if val.is_constant() else val
    r_param = Tensor(alg, 2, param_coeffs)

    if constraints == "normalized":
        # eliminate the matrix-equation family first; failures are
        # certified here before any hexagon tensor work
        fe_param = [
            [
                Poly.lift(
                    r_param.coeffs.get((u_index(0, 1, a), u_index(1, 0, b)), ZERO)
                )
                for b in range(4)
            ]
            for a in range(4)
        ]
        matrix_eqs = []
        for (loc, indices), poly in hexagon2_matrix_equations(d, cartan, fe_param):
            poly = Poly.lift(poly)
            if not poly:
                continue
            if poly.is_constant():
                return RMatrixResult(
                    d, cartan.beta.exponent, False, None,
                    {
                        "constraint_id": "hexagon",
                        "witness": loc,
                        "witness_indices": list(indices),
                        "residual_sample": str(poly.constant()),
                    },
                )
            matrix_eqs.append(((loc, indices), poly))
        disp_system = LinearSystem()
        for _, poly in matrix_eqs:
            const, lin = poly.linear_split()
            disp_system.add_equation(lin, -const)
        disp_exprs = disp_system.pivot_expressions()
        if disp_exprs is None:
            probe = LinearSystem()
            witness, indices = "hexagon2 matrix equations", []
            for (loc, idx), poly in matrix_eqs:
                const, lin = poly.linear_split()
                probe.add_equation(lin, -const)
                if probe.inconsistent:
                    witness, indices = loc, list(idx)
                    break
            return RMatrixResult(
                d, cartan.beta.exponent, False, None,
                {"constraint_id": "hexagon", "witness": witness,
                 "witness_indices": indices,
                 "residual_sample": "inconsistent second-hexagon matrix system"},
            )
        if disp_exprs:
            disp_sub = {}
            for p, (rhs, deps) in disp_exprs.items():
                val = Poly.const(rhs)
                for f, coeff in deps.items():
                    val = val - Poly.var(f) * coeff
                disp_sub[p] = val
            new_coeffs = {}
            for key, c in r_param.coeffs.items():
                if isinstance(c, Poly):
                    c = c.substitute(disp_sub)
                    if c.is_constant():
                        c = c.constant()
                new_coeffs[key] = c
            r_param = Tensor(alg, 2, new_coeffs)

    h1, h2 = hexagon_residuals(Q.with_r(r_param))
    equations: list[tuple[str, Poly]] = []
    for name, h in (("hexagon1", h1), ("hexagon2", h2)):
        for key in sorted(h.coeffs):
            label = " (x) ".join(alg.labels[k] for k in key)
            equations.append((f"{name} @ {label}", Poly.lift(h.coeffs[key])))

    r_coeffs = {key: Poly.lift(c) for key, c in r_param.coeffs.items()}
    remaining = equations
    for _ in range(20):
        if not remaining:
            break
        subsystem = LinearSystem()
        pending = []
        for loc, poly in remaining:
            if not poly:
                continue
            if poly.is_constant():
                return RMatrixResult(
                    d, cartan.beta.exponent, False, None,
                    {
                        "constraint_id": "hexagon",
                        "witness": loc,
                        "residual_sample": str(poly.constant()),
                    },
                )
            if poly.degree() == 1:
                const, lin = poly.linear_split()
                subsystem.add_equation(lin, -const)
            pending.append((loc, poly))
        if not pending:
            break
        exprs = subsystem.pivot_expressions()
        if exprs is None:
            # single out an equation that contradicts the earlier ones
            probe = LinearSystem()
            witness = None
            for loc, p in pending:
                if p.degree() != 1:
                    continue
                const, lin = p.linear_split()
                probe.add_equation(lin, -const)
                if probe.inconsistent:
                    witness = loc
                    break
            return RMatrixResult(
                d, cartan.beta.exponent, False, None,
                {"constraint_id": "hexagon", "witness": witness or "linear stage",
                 "residual_sample": "inconsistent linear hexagon system"},
            )
        if not exprs:
            raise RuntimeError("hexagon elimination stalled on quadratic relations")
        round_sub = {}
        for p, (rhs, deps) in exprs.items():
            val = Poly.const(rhs)
            for f, coeff in deps.items():
                val = val - Poly.var(f) * coeff
            round_sub[p] = val
        r_coeffs = {k: c.substitute(round_sub) for k, c in r_coeffs.items()}
        remaining = [(loc, p.substitute(round_sub)) for loc, p in pending]
    else:
        raise RuntimeError("hexagon elimination did not converge")

    undetermined = sorted({v for c in r_coeffs.values() for v in c.variables()})
    zero_sub = {v: Poly.const(ZERO) for v in undetermined}
    final_coeffs = {}
    for key, c in r_coeffs.items():
        val = c.substitute(zero_sub).constant()
        if val:
            final_coeffs[key] = val
    r_final = Tensor(alg, 2, final_coeffs)
    Qr = Q.with_r(r_final)
    inter = check_r_intertwiner(Qr)
    hexa = check_hexagons(Qr)
    if not (inter.ok and hexa.ok):
        raise RuntimeError("solver produced an invalid R-matrix")
    cert = {
        "constraint_id": "solved",
        "free_parameters": len(free_names),
        "undetermined_set_to_zero": undetermined,
    }
    return RMatrixResult(d, cartan.beta.exponent, True, r_final, cert)


def standard_quasi_data_with_r(
    d: CycNum, u: UqPreset, cartan: CartanPreset
) -> QuasiBialgebraData:
    """The full quasitriangular datum for d^2 = -1 (raises if no R exists)."""
    res = solve_rmatrix(d, u, cartan)
    if not res.exists:
        raise ConditionViolated(["braiding"], f"no R-matrix for d = {d}")
    return build_standard_coproduct(d, 1, u, cartan).with_r(res.r)


# -- necessity analyses -----------------------------------------------------------


@dataclass
class DeltaConstraintReport:
    counit_constraints: set
    binomials: set
    expected_binomials: set
    families_match: bool
    anomalies: list
    rank: int
    solution_dim: int


def _canonical_binomial(poly: Poly):
    terms = sorted(poly.terms.items())
    if len(terms) == 1:
        return ("monomial-zero", terms[0][0])
    if len(terms) != 2:
        return None
    (m1, c1), (m2, c2) = terms
    if m1 > m2:
        (m1, c1), (m2, c2) = (m2, c2), (m1, c1)
    return (m2, m1, -(c1 / c2))  # m2 = lambda * m1 with lambda = -c1/c2


def delta_symbolic_constraints(u: UqPreset, cartan: CartanPreset) -> DeltaConstraintReport:
    """Solve the graded-coalgebra constraints symbolically: unknowns
    c_L^{ab}, c_R^{ab}; counitality and quasi-coassociativity (with both
    coassociators acting through the bimodule) are expanded exactly, and the
    surviving relations are compared to the three expected families.  The
    exponent-lattice rank certifies the dimension of the solution torus."""
    rep = induce_regular(u, cartan, "lower")
    L = [[Poly.var(f"L{a}{b}") for b in range(4)] for a in range(4)]
    R = [[Poly.var(f"R{a}{b}") for b in range(4)] for a in range(4)]
    delta = []
    for k in range(4):
        top = {(2 * a, 2 * ((k - a) % 4)): Poly.const(ONE) for a in range(4)}
        low = {}
        for a in range(4):
            b = (k - a) % 4
            low[(2 * a + 1, 2 * b)] = L[a][b]
            low[(2 * a, 2 * b + 1)] = R[a][b]
        delta.append(top)
        delta.append(low)
    eps = []
    for k in range(4):
        eps.append(Poly.const(ONE if k == 0 else ZERO))
        eps.append(Poly.const(ZERO))

    # counitality on the lowered generators
    counit_constraints = set()
    anomalies = []
    for k in range(4):
        c = 2 * k + 1
        for pos in (0, 1):
            acc: dict[int, Poly] = {}
            for (i, j), f in delta[c].items():
                e = eps[i] if pos == 0 else eps[j]
                tgt = j if pos == 0 else i
                if e:
                    acc[tgt] = acc.get(tgt, Poly.const(ZERO)) + e * f
            acc[c] = acc.get(c, Poly.const(ZERO)) - Poly.const(ONE)
            for tgt, poly in acc.items():
                if not poly:
                    continue
                terms = sorted(poly.terms.items())
                if len(terms) == 2 and terms[0][0] == ():
                    counit_constraints.add((terms[1][0], -(terms[0][1] / terms[1][1])))
                else:
                    anomalies.append(("counit", c, str(poly)))
    counit_sub = {}
    for mono, val in counit_constraints:
        counit_sub[mono[0]] = Poly.const(val)

    phi_u = embed_cartan_tensor(cartan.phi, u.algebra)
    phi_inv_c = cartan.phi_inv
    binomials = set()
    for c in range(8):
        inner = delta[c]
        lhs: dict[tuple, Poly] = {}
        rhs: dict[tuple, Poly] = {}
        for (i, j), f in inner.items():
            for key, g in delta[j].items():
                k3 = (i,) + key
                lhs[k3] = lhs.get(k3, Poly.const(ZERO)) + f * g
            for key, g in delta[i].items():
                k3 = key + (j,)
                rhs[k3] = rhs.get(k3, Poly.const(ZERO)) + g * f
        rhs = tensor_act(rep.action, phi_u, rhs, "left")
        rhs = tensor_act(rep.right_action, phi_inv_c, rhs, "right")
        for key in set(lhs) | set(rhs):
            resid = lhs.get(key, Poly.const(ZERO)) - rhs.get(key, Poly.const(ZERO))
            if not resid:
                continue
            resid = resid.substitute(counit_sub)
            if not resid:
                continue
            canon = _canonical_binomial(resid)
            if canon is None or canon[0] == "monomial-zero":
                anomalies.append(("coassoc", c, str(resid)))
            else:
                binomials.add(canon)

    expected = set()
    for a in range(4):
        for b in range(4):
            for cc in range(4):
                f1 = L[a][b] * L[(a + b) % 4][cc] - L[a][(b + cc) % 4]
                f2 = R[a][b] * L[(a + b) % 4][cc] - L[b][cc] * R[a][(b + cc) % 4]
                f3 = R[b][cc] * R[a][(b + cc) % 4] - sign_ab(a, b) * R[(a + b) % 4][cc]
                for poly in (f1, f2, f3):
                    poly = poly.substitute(counit_sub)
                    if not poly:
                        continue
                    canon = _canonical_binomial(poly)
                    if canon is not None and canon[0] != "monomial-zero":
                        expected.add(canon)

    # exponent-lattice rank over Q: unknown order L00..L33, R00..R33
    var_index = {}
    for a in range(4):
        for b in range(4):
            var_index[f"L{a}{b}"] = len(var_index)
    for a in range(4):
        for b in range(4):
            var_index[f"R{a}{b}"] = len(var_index)
    rows = []
    for mono, _val in counit_constraints:
        row = [Fraction(0)] * 32
        row[var_index[mono[0]]] = Fraction(1)
        rows.append(row)
    for m2, m1, _lam in binomials:
        row = [Fraction(0)] * 32
        for v in m2:
            row[var_index[v]] += 1
        for v in m1:
            row[var_index[v]] -= 1
        rows.append(row)
    rank = _rational_rank(rows)
    return DeltaConstraintReport(
        counit_constraints={m[0] for m, _ in counit_constraints},
        binomials=binomials,
        expected_binomials=expected,
        families_match=(binomials == expected and not anomalies),
        anomalies=anomalies,
        rank=rank,
        solution_dim=32 - rank,
    )


def _rational_rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        prow = rows[0]
        inv = 1 / prow[col]
        prow = [c * inv for c in prow]
        new_rows = []
        for r in rows[1:]:
            if r[col]:
                f = r[col]
                r = [c - f * p for c, p in zip(r, prow)]
            if any(r):
                new_rows.append(r)
        rows = new_rows
        rank += 1
        col += 1
    return rank


_MU8 = [CycNum.zeta_power(k) for k in range(8)]


@dataclass
class GridEnumeration:
    grid_size: int
    solutions: list
    all_in_parametrization: bool
    parametrized_count: int


def enumerate_grid_solutions(grid: list[CycNum] | None = None) -> GridEnumeration:
    """All solutions of the coalgebra-family constraint system with entries on
    a finite multiplicative grid.  The reduction to (c_a, d_a) data with
    c_L^{ab} = c_{a+b}/c_a and c_R^{ab} = (-1)^{ab} d_{a+b}/d_b is an exact
    consequence of family 1 / family 3 with counitality; the remaining
    conditions are checked by full expansion, and every solution is tested
    for membership in the parametrization d_n = eps^n c_n (-1)^(n(n-1)/2)."""
    grid = list(_MU8) if grid is None else grid
    solutions = []
    all_param = True
    for c1 in grid:
        for c2 in grid:
            for c3 in grid:
                c = (ONE, c1, c2, c3)
                for d1 in grid:
                    # forced by the (a,c) = (1,1) and (1,2) cocycle instances
                    d2 = -(c2 / (c1 * c1)) * d1 * d1
                    d3 = (c3 / (c1 * c2)) * d1 * d2
                    d = (ONE, d1, d2, d3)
                    if not _full_family_check(c, d):
                        continue
                    solutions.append((c, d))
                    eps = d1 / c1
                    ok = eps**4 == ONE and all(
                        d[n] == eps ** n * c[n] * sign_half(n) for n in range(4)
                    )
                    if not ok:
                        all_param = False
    # completeness cross-check: count parametrized tuples whose d-values land
    # on the grid (for the root-of-unity grid that is all of them)
    grid_set = set(grid)
    eps_values = [v for v in (ONE, I_UNIT, -ONE, -I_UNIT) if True]
    parametrized = 0
    for c1 in grid:
        for c2 in grid:
            for c3 in grid:
                c = (ONE, c1, c2, c3)
                for eps in eps_values:
                    d = tuple(eps ** n * c[n] * sign_half(n) for n in range(4))
                    if all(v in grid_set or v == ONE for v in d):
                        parametrized += 1
    return GridEnumeration(len(grid), solutions, all_param, parametrized)


def _full_family_check(c: tuple, d: tuple) -> bool:
    def cl(a, b):
        return c[(a + b) % 4] / c[a % 4]

    def cr(a, b):
        return sign_ab(a, b) * d[(a + b) % 4] / d[b % 4]

    for a in range(4):
        for b in range(4):
            for e in range(4):
                if cl(a, b) * cl(a + b, e) != cl(a, (b + e) % 4):
                    return False
                if cr(a, b) * cl(a + b, e) != cl(b, e) * cr(a, (b + e) % 4):
                    return False
                lhs = sign_ab(a, b) * cr((a + b) % 4, e)
                if lhs != cr(b, e) * cr(a, (b + e) % 4):
                    return False
    return True
