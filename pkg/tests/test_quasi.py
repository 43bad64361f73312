import random

import pytest

from quasihopf.algebra import Tensor, tensor_inv
from quasihopf.cyclo import ONE, I_UNIT, rational
from quasihopf.presets import braiding_scalar, build_cartan, build_u, phi_scalar
from quasihopf.quasi import (
    GaugeTwist,
    MissingR,
    QuasiBialgebraData,
    check_counit,
    check_hexagons,
    check_pentagon,
    check_quasi_coassoc,
    check_r_intertwiner,
    compose_twists,
    diagonal_twist,
    gauge_twist,
    nilpotent_enriched_twist,
    quasi_from_preset,
    run_all_checks,
)

UNIT_GRID = [ONE, -ONE, I_UNIT, -I_UNIT, rational(2), rational(1, 2), rational(3)]


@pytest.fixture(scope="module")
def cq():
    return quasi_from_preset(build_cartan(1), name="cartan")


def random_diag_twist(Q, rng):
    scalars = {
        (a, b): UNIT_GRID[rng.randrange(len(UNIT_GRID))]
        for a in range(1, 4)
        for b in range(1, 4)
    }
    return diagonal_twist(Q, list(range(4)), scalars)


def test_cartan_passes_all_axioms(cq):
    for rep in run_all_checks(cq):
        assert rep.ok, str(rep)


@pytest.mark.parametrize("exponent", [3, 5, 7])
def test_other_beta_presets_pass(exponent):
    Q = quasi_from_preset(build_cartan(exponent))
    for rep in run_all_checks(Q):
        assert rep.ok, str(rep)


def test_trivial_phi_with_coassociative_delta(cq):
    flat = QuasiBialgebraData(
        cq.algebra,
        cq.delta,
        cq.counit,
        Tensor.unit(cq.algebra, 3),
        Tensor.unit(cq.algebra, 3),
        None,
        name="flat",
    )
    assert check_pentagon(flat).ok
    assert check_quasi_coassoc(flat).ok
    assert check_counit(flat).ok


def test_pentagon_detects_sign_flip(cq):
    coeffs = dict(cq.phi.coeffs)
    coeffs[(1, 1, 1)] = -coeffs[(1, 1, 1)]
    phi_bad = Tensor(cq.algebra, 3, coeffs)
    bad = QuasiBialgebraData(
        cq.algebra, cq.delta, cq.counit, phi_bad, tensor_inv(phi_bad), None
    )
    assert not check_pentagon(bad).ok
    report = check_pentagon(bad)
    assert report.residual_count > 0 and report.witnesses


def test_hexagon_scalar_identity(cq):
    # independent scalar oracle for the abelian case: both hexagon
    # identities reduce to identities between sigma and the phi entries
    beta = build_cartan(1).beta
    sigma = lambda a, b: braiding_scalar(beta, a, b)
    for a in range(4):
        for b in range(4):
            for c in range(4):
                lhs1 = sigma((a + b) % 4, c)
                rhs1 = (
                    phi_scalar(beta, c, a, b, inverse=True)
                    * sigma(a, c)
                    * phi_scalar(beta, a, c, b)
                    * sigma(b, c)
                    * phi_scalar(beta, a, b, c, inverse=True)
                )
                assert lhs1 == rhs1, ("hex1", a, b, c)
                lhs2 = sigma(a, (b + c) % 4)
                rhs2 = (
                    phi_scalar(beta, b, c, a)
                    * sigma(a, c)
                    * phi_scalar(beta, b, a, c, inverse=True)
                    * sigma(a, b)
                    * phi_scalar(beta, a, b, c)
                )
                assert lhs2 == rhs2, ("hex2", a, b, c)
    assert check_hexagons(cq).ok


def test_missing_r_raises(cq):
    no_r = cq.with_r(None)
    with pytest.raises(MissingR):
        check_r_intertwiner(no_r)
    with pytest.raises(MissingR):
        check_hexagons(no_r)


def test_identity_twist(cq):
    t = GaugeTwist.from_tensor(Tensor.unit(cq.algebra, 2))
    out = gauge_twist(cq, t)
    assert out.delta == cq.delta
    assert out.phi == cq.phi
    assert out.r == cq.r


def test_twist_then_inverse_restores(cq):
    rng = random.Random(21)
    for _ in range(5):
        t = random_diag_twist(cq, rng)
        tw = gauge_twist(cq, t)
        back = gauge_twist(tw, GaugeTwist(t.j_inv, t.j))
        assert back.delta == cq.delta
        assert back.phi == cq.phi
        assert back.r == cq.r


def test_twists_preserve_outcomes_on_cartan(cq):
    rng = random.Random(22)
    for _ in range(10):
        t = random_diag_twist(cq, rng)
        tw = gauge_twist(cq, t)
        for rep in run_all_checks(tw):
            assert rep.ok, str(rep)


def test_twist_preserves_failure(cq):
    # a corrupted coassociator keeps failing after an arbitrary gauge twist
    coeffs = dict(cq.phi.coeffs)
    coeffs[(1, 1, 1)] = -coeffs[(1, 1, 1)]
    phi_bad = Tensor(cq.algebra, 3, coeffs)
    bad = QuasiBialgebraData(
        cq.algebra, cq.delta, cq.counit, phi_bad, tensor_inv(phi_bad), cq.r
    )
    assert not check_pentagon(bad).ok
    rng = random.Random(23)
    t = random_diag_twist(bad, rng)
    tw = gauge_twist(bad, t)
    assert not check_pentagon(tw).ok


def test_compose_twists(cq):
    rng = random.Random(24)
    t1 = random_diag_twist(cq, rng)
    t2 = random_diag_twist(cq, rng)
    step = gauge_twist(gauge_twist(cq, t1), t2)
    joint = gauge_twist(cq, compose_twists(t1, t2))
    assert step.delta == joint.delta
    assert step.phi == joint.phi
    assert step.r == joint.r


def test_nilpotent_twist_inverse():
    u = build_u()
    # dummy ambient over U just to carry the algebra and counit
    diag = GaugeTwist(Tensor.unit(u.algebra, 2), Tensor.unit(u.algebra, 2))
    term = Tensor.from_elems([u.E * u.e[0], u.F * u.e[1]]).scale(rational(3, 2))
    Q = QuasiBialgebraData(
        u.algebra,
        [Tensor(u.algebra, 2, {}) for _ in range(16)],
        [ONE] * 16,
        Tensor.unit(u.algebra, 3),
        Tensor.unit(u.algebra, 3),
    )
    t = nilpotent_enriched_twist(Q, diag, term)
    one2 = Tensor.unit(u.algebra, 2)
    assert t.j * t.j_inv == one2 and t.j_inv * t.j == one2


def test_counit_normalization_enforced(cq):
    j = Tensor(cq.algebra, 2, {(a, b): ONE for a in range(4) for b in range(4)})
    j = j + Tensor(cq.algebra, 2, {(0, 1): ONE})  # breaks (eps (x) Id)(J) = 1
    with pytest.raises(ValueError):
        gauge_twist(cq, GaugeTwist.from_tensor(j))


def test_opposite_coproduct_with_permuted_inverse():
    # Delta^op is quasi-coassociative for the leg-reversed inverse coassociator
    from quasihopf.algebra import flip
    from quasihopf.reports import fgr2_data

    Q = fgr2_data(1)
    delta_op = [flip(d) for d in Q.delta]
    phi_op = Q.phi_inv.permute_legs((3, 2, 1))
    phi_op_inv = Q.phi.permute_legs((3, 2, 1))
    Qop = QuasiBialgebraData(Q.algebra, delta_op, Q.counit, phi_op, phi_op_inv, None)
    assert check_quasi_coassoc(Qop).ok
    assert check_pentagon(Qop).ok


def test_counit_detects_broken_normalization_row():
    # scaling the c_L^{a,0} coefficients of Delta(F) away from 1 breaks the
    # counit identity on the F line
    from quasihopf.cyclo import rational
    from quasihopf.presets import u_index
    from quasihopf.reports import fgr2_data

    Q = fgr2_data(1)
    f_line = [u_index(0, 1, j) for j in range(4)]
    delta = list(Q.delta)
    for idx in f_line:
        coeffs = dict(delta[idx].coeffs)
        for a in range(4):
            key = (u_index(0, 1, a), u_index(0, 0, 0))
            if key in coeffs:
                coeffs[key] = coeffs[key] * rational(2)
        delta[idx] = Tensor(Q.algebra, 2, coeffs)
    bad = QuasiBialgebraData(Q.algebra, delta, Q.counit, Q.phi, Q.phi_inv, None)
    report = check_counit(bad)
    assert not report.ok
    assert any("F e" in loc for loc, _ in report.witnesses)


def test_yang_baxter_consequence():
    # the coassociator-decorated Yang-Baxter identity follows from the
    # intertwiner plus both hexagons; a full-stack integration check
    from quasihopf.reports import fgr2_data

    def qybe_residual(Q):
        r, phi, phi_inv = Q.r, Q.phi, Q.phi_inv
        r12 = r.insert_unit_leg(2)
        r13 = r.insert_unit_leg(1)
        r23 = r.insert_unit_leg(0)
        lhs = (
            r12
            * phi.permute_legs((2, 3, 1))
            * r13
            * phi_inv.permute_legs((1, 3, 2))
            * r23
            * phi
        )
        rhs = (
            phi.permute_legs((3, 2, 1))
            * r23
            * phi_inv.permute_legs((3, 1, 2))
            * r13
            * phi.permute_legs((2, 1, 3))
            * r12
        )
        return lhs - rhs

    cq = quasi_from_preset(build_cartan(1))
    assert not qybe_residual(cq)
    assert not qybe_residual(fgr2_data(1))
