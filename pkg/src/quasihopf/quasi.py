"""Quasi-bialgebra data bundles and exact axiom checkers.

All checkers are pure and exact: a residual is zero iff every coefficient in
Q(zeta) is identically zero.  Reports list the first offending witnesses in a
deterministic (basis) order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgElem, BasedAlgebra, NotInvertible, Tensor, flip, tensor_inv
from .cyclo import CycNum, ONE, ZERO

WITNESS_CAP = 16


class MissingR(ValueError):
    """An R-matrix check was requested on data without an R-matrix."""


@dataclass
class CheckReport:
    axiom: str
    residual_count: int
    witnesses: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return self.residual_count == 0

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "status": "pass" if self.ok else "fail",
            "residual_count": self.residual_count,
            "witnesses": [list(w) for w in self.witnesses],
        }

    def __str__(self) -> str:
        flag = "PASS" if self.ok else f"FAIL ({self.residual_count} residuals)"
        return f"{self.axiom}: {flag}"


def _tensor_witnesses(alg: BasedAlgebra, t: Tensor, prefix: str = "") -> list:
    out = []
    for key in sorted(t.coeffs):
        name = " (x) ".join(alg.labels[k] for k in key)
        out.append((f"{prefix}{name}", str(t.coeffs[key])))
    return out


def _report(axiom: str, witnesses: list, full: bool) -> CheckReport:
    count = len(witnesses)
    if not full:
        witnesses = witnesses[:WITNESS_CAP]
    return CheckReport(axiom, count, witnesses)


@dataclass
class QuasiBialgebraData:
    """An algebra with coproduct, counit, coassociator and optional R-matrix."""

    algebra: BasedAlgebra
    delta: list[Tensor]
    counit: list[CycNum]
    phi: Tensor
    phi_inv: Tensor
    r: Tensor | None = None
    name: str = "quasi-bialgebra"

    def delta_of(self, x: AlgElem) -> Tensor:
        out = Tensor(self.algebra, 2, {})
        for k, c in x.coeffs.items():
            out = out + self.delta[k].scale(c)
        return out

    def counit_of(self, x: AlgElem) -> CycNum:
        total = ZERO
        for k, c in x.coeffs.items():
            total = total + c * self.counit[k]
        return total

    def with_r(self, r: Tensor | None) -> QuasiBialgebraData:
        return QuasiBialgebraData(
            self.algebra, self.delta, self.counit, self.phi, self.phi_inv, r, self.name
        )


def quasi_from_preset(preset, name: str = "cartan") -> QuasiBialgebraData:
    """Bundle a Cartan-style preset (delta/counit/phi/phi_inv/r) as checker input."""
    return QuasiBialgebraData(
        preset.algebra,
        list(preset.delta),
        list(preset.counit),
        preset.phi,
        preset.phi_inv,
        preset.r,
        name=name,
    )


# -- structural checks ---------------------------------------------------------


def check_structure(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    """Delta and the counit are unital algebra maps; phi is invertible."""
    alg = Q.algebra
    bad = []
    one2 = Tensor.unit(alg, 2)
    d_one = Q.delta_of(alg.unit())
    if d_one != one2:
        bad.append(("Delta(1)", "not 1 (x) 1"))
    if Q.counit_of(alg.unit()) != ONE:
        bad.append(("eps(1)", "not 1"))
    if Q.phi * Q.phi_inv != Tensor.unit(alg, 3):
        bad.append(("phi*phi_inv", "not the unit"))
    for i in range(alg.dim):
        bi = alg.basis(i)
        di = Q.delta[i]
        for j in range(alg.dim):
            prod = bi * alg.basis(j)
            resid = di * Q.delta[j] - Q.delta_of(prod)
            if resid:
                bad.append(
                    (f"Delta({alg.labels[i]} * {alg.labels[j]})", "%d terms" % len(resid.coeffs))
                )
            eps_resid = Q.counit[i] * Q.counit[j] - Q.counit_of(prod)
            if eps_resid:
                bad.append((f"eps({alg.labels[i]} * {alg.labels[j]})", str(eps_resid)))
    return _report("algebra-homomorphism", bad, full)


def check_counit(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    alg = Q.algebra
    bad = []
    for i in range(alg.dim):
        x = alg.basis(i)
        left = Q.delta[i].contract_leg(0, Q.counit).to_elem() - x
        right = Q.delta[i].contract_leg(1, Q.counit).to_elem() - x
        if left:
            bad.append((f"(eps (x) Id) Delta({alg.labels[i]})", str(left)))
        if right:
            bad.append((f"(Id (x) eps) Delta({alg.labels[i]})", str(right)))
    return _report("counit", bad, full)


def check_quasi_coassoc(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    """(Id (x) Delta)Delta(x) = phi ((Delta (x) Id)Delta(x)) phi^-1 on the basis."""
    alg = Q.algebra
    bad = []
    for i in range(alg.dim):
        d = Q.delta[i]
        lhs = d.expand_leg(1, Q.delta)
        rhs = Q.phi * d.expand_leg(0, Q.delta) * Q.phi_inv
        resid = lhs - rhs
        if resid:
            bad.extend(_tensor_witnesses(alg, resid, prefix=f"{alg.labels[i]} @ "))
    return _report("quasi-coassociativity", bad, full)


def check_pentagon(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    phi = Q.phi
    lhs = phi.insert_unit_leg(0) * phi.expand_leg(1, Q.delta) * phi.insert_unit_leg(3)
    rhs = phi.expand_leg(2, Q.delta) * phi.expand_leg(0, Q.delta)
    resid = lhs - rhs
    return _report("pentagon", _tensor_witnesses(Q.algebra, resid), full)


def check_r_intertwiner(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    """R Delta(x) = Delta^op(x) R on the basis."""
    if Q.r is None:
        raise MissingR("no R-matrix present")
    alg = Q.algebra
    bad = []
    for i in range(alg.dim):
        resid = Q.r * Q.delta[i] - flip(Q.delta[i]) * Q.r
        if resid:
            bad.extend(_tensor_witnesses(alg, resid, prefix=f"{alg.labels[i]} @ "))
    return _report("r-intertwiner", bad, full)


def hexagon_residuals(Q: QuasiBialgebraData) -> tuple[Tensor, Tensor]:
    """Both hexagon identities in the gauge-covariant leg-permuted form

        (Delta (x) Id)(R) = Phi_312 R_13 Phi_132^-1 R_23 Phi_123
        (Id (x) Delta)(R) = Phi_231^-1 R_13 Phi_213 R_12 Phi_123^-1

    (subscripts place R/Phi components at positions).  Returns lhs - rhs for
    each.  Componentwise on idempotent-graded data this is exactly the
    scalar system  sigma(a+b,c) = phi^-_{cab} sigma(a,c) phi^+_{acb}
    sigma(b,c) phi^-_{abc}  and its partner, with phi^+- the two tabulated
    coassociator matrices."""
    if Q.r is None:
        raise MissingR("no R-matrix present")
    r, phi, phi_inv = Q.r, Q.phi, Q.phi_inv
    r13 = r.insert_unit_leg(1)
    r23 = r.insert_unit_leg(0)
    r12 = r.insert_unit_leg(2)
    lhs1 = r.expand_leg(0, Q.delta)
    rhs1 = (
        phi.permute_legs((2, 3, 1))
        * r13
        * phi_inv.permute_legs((1, 3, 2))
        * r23
        * phi
    )
    lhs2 = r.expand_leg(1, Q.delta)
    rhs2 = (
        phi_inv.permute_legs((3, 1, 2))
        * r13
        * phi.permute_legs((2, 1, 3))
        * r12
        * phi_inv
    )
    return lhs1 - rhs1, lhs2 - rhs2


def check_hexagons(Q: QuasiBialgebraData, full: bool = False) -> CheckReport:
    h1, h2 = hexagon_residuals(Q)
    bad = _tensor_witnesses(Q.algebra, h1, prefix="hexagon1 @ ")
    bad += _tensor_witnesses(Q.algebra, h2, prefix="hexagon2 @ ")
    return _report("hexagons", bad, full)


AXIOM_CHECKS = {
    "algebra-homomorphism": check_structure,
    "counit": check_counit,
    "quasi-coassociativity": check_quasi_coassoc,
    "pentagon": check_pentagon,
}

R_CHECKS = {
    "r-intertwiner": check_r_intertwiner,
    "hexagons": check_hexagons,
}


def run_all_checks(Q: QuasiBialgebraData, full: bool = False) -> list[CheckReport]:
    reports = [fn(Q, full=full) for fn in AXIOM_CHECKS.values()]
    if Q.r is not None:
        reports += [fn(Q, full=full) for fn in R_CHECKS.values()]
    return reports


# -- gauge twisting -------------------------------------------------------------


@dataclass
class GaugeTwist:
    """Invertible, counit-normalized element J of the tensor square."""

    j: Tensor
    j_inv: Tensor

    def validate(self, Q: QuasiBialgebraData) -> None:
        one2 = Tensor.unit(Q.algebra, 2)
        if self.j * self.j_inv != one2 or self.j_inv * self.j != one2:
            raise NotInvertible("gauge twist inverse fails")
        one = Q.algebra.unit()
        if (
            self.j.contract_leg(0, Q.counit).to_elem() != one
            or self.j.contract_leg(1, Q.counit).to_elem() != one
        ):
            raise ValueError("gauge twist is not counit-normalized")

    @classmethod
    def from_tensor(cls, j: Tensor, j_inv: Tensor | None = None) -> GaugeTwist:
        return cls(j, j_inv if j_inv is not None else tensor_inv(j))


def gauge_twist(Q: QuasiBialgebraData, t: GaugeTwist, check: bool = True) -> QuasiBialgebraData:
    """Twist: Delta^J = J Delta J^-1, the standard coassociator transport,
    and R^J = flip(J) R J^-1."""
    if check:
        t.validate(Q)
    j, j_inv = t.j, t.j_inv
    delta = [j * d * j_inv for d in Q.delta]
    phi = (
        j.insert_unit_leg(0)
        * j.expand_leg(1, Q.delta)
        * Q.phi
        * j_inv.expand_leg(0, Q.delta)
        * j_inv.insert_unit_leg(2)
    )
    phi_inv = (
        j.insert_unit_leg(2)
        * j.expand_leg(0, Q.delta)
        * Q.phi_inv
        * j_inv.expand_leg(1, Q.delta)
        * j_inv.insert_unit_leg(0)
    )
    r = flip(j) * Q.r * j_inv if Q.r is not None else None
    out = QuasiBialgebraData(
        Q.algebra, delta, Q.counit, phi, phi_inv, r, name=f"{Q.name}^J"
    )
    if check and phi * phi_inv != Tensor.unit(Q.algebra, 3):
        raise NotInvertible("twisted coassociator inverse fails")
    return out


def compose_twists(first: GaugeTwist, second: GaugeTwist) -> GaugeTwist:
    """The twist equivalent to twisting by ``first`` then ``second``."""
    return GaugeTwist(second.j * first.j, first.j_inv * second.j_inv)


def diagonal_twist(
    Q: QuasiBialgebraData, idempotent_indices: list[int], scalars: dict[tuple[int, int], CycNum]
) -> GaugeTwist:
    """J = sum lambda_ab (e_a (x) e_b) over the given idempotent line, with
    the counit-normalization lambda_0b = lambda_a0 = 1 filled in."""
    coeffs = {}
    inv_coeffs = {}
    n = len(idempotent_indices)
    for a in range(n):
        for b in range(n):
            lam = scalars.get((a, b), ONE)
            if a == 0 or b == 0:
                lam = ONE
            key = (idempotent_indices[a], idempotent_indices[b])
            coeffs[key] = lam
            inv_coeffs[key] = lam.inv()
    return GaugeTwist(
        Tensor(Q.algebra, 2, coeffs), Tensor(Q.algebra, 2, inv_coeffs)
    )


def nilpotent_enriched_twist(Q: QuasiBialgebraData, diag: GaugeTwist, term: Tensor) -> GaugeTwist:
    """J = D + N for diagonal D and a nilpotent correction N whose legs kill
    themselves under multiplication; inverse by the finite Neumann series."""
    j = diag.j + term
    inv = diag.j_inv
    power = diag.j_inv
    m = diag.j_inv * term
    for _ in range(8):
        power = -(m * power)
        if not power:
            break
        inv = inv + power
    else:
        raise NotInvertible("correction term is not nilpotent")
    one2 = Tensor.unit(Q.algebra, 2)
    if j * inv != one2 or inv * j != one2:
        raise NotInvertible("Neumann inverse failed")
    return GaugeTwist(j, inv)
