"""Verification reports and the end-to-end reproduction pipeline.

Certification paths are exhaustive and deterministic; the seed only feeds the
randomized property sweeps (parameter tuples and gauge twists).  All numeric
inputs are exact strings, never floats.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .algebra import Tensor, tensor_inv
from .cyclo import CycNum, ONE, I_UNIT, ZETA, parse_cyc, rational
from .classify import (
    CoalgebraParams,
    ConditionViolated,
    CoproductParams,
    build_coproduct,
    build_delta_family,
    build_standard_coproduct,
    cartan_ambient_on_u_module,
    delta_symbolic_constraints,
    enumerate_grid_solutions,
    tabulated_rfe_matrix,
    solve_rmatrix,
    standard_form,
)
from .fusion import (
    verify_unit_column_product,
    verify_shifted_column_chain,
    verify_triplet_displays,
    k_class,
    k_mul,
    singlet,
    singlet_fuse,
    UnsupportedPair,
)
from .modules import ModuleCoalgebra, check_module_coalgebra, restrict_left_to_cartan
from .presets import CartanPreset, UqPreset, build_cartan, build_u, u_index
from .quasi import (
    CheckReport,
    GaugeTwist,
    QuasiBialgebraData,
    diagonal_twist,
    gauge_twist,
    nilpotent_enriched_twist,
    quasi_from_preset,
    run_all_checks,
)


class ConfigError(ValueError):
    """Invalid pipeline or CLI configuration."""


UNIT_SCALARS = [
    ONE,
    -ONE,
    I_UNIT,
    -I_UNIT,
    ZETA,
    CycNum.zeta_power(3),
    rational(2),
    rational(1, 2),
    rational(3, 2),
]

DEFAULT_RMATRIX_GRID = [
    "1",
    "-1",
    "i",
    "-i",
    "zeta",
    "-zeta",
    "zeta^3",
    "-zeta^3",
    "2",
    "1/2",
]

EXPECTED_R_VALUES = ("i", "-i")


@dataclass
class VerificationReport:
    preset: str
    beta_exponent: int
    parameters: dict
    checks: list[CheckReport] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "preset": self.preset,
            "beta_exponent": self.beta_exponent,
            "parameters": self.parameters,
            "checks": [c.to_json() for c in self.checks],
            "ok": self.ok,
            "wall_time_s": round(self.wall_time, 4),
        }


_CACHE: dict = {}


def cached_presets(beta_exponent: int = 1) -> tuple[UqPreset, CartanPreset]:
    key = beta_exponent
    if key not in _CACHE:
        _CACHE[key] = (build_u(), build_cartan(beta_exponent))
    return _CACHE[key]


def fgr2_data(
    beta_exponent: int = 1, d: CycNum = I_UNIT, eps: int = 1
) -> QuasiBialgebraData:
    """The fully certified quasitriangular datum (R attached when eps = 1 and
    d^2 = -1)."""
    u, cartan = cached_presets(beta_exponent)
    Q = build_standard_coproduct(d, eps, u, cartan)
    if eps == 1:
        res = solve_rmatrix(d, u, cartan)
        if res.exists:
            Q = Q.with_r(res.r)
    return Q


def verify_preset(
    preset: str = "fgr2",
    beta_exponent: int = 1,
    d: CycNum | None = None,
    eps: int = 1,
    full: bool = False,
) -> VerificationReport:
    t0 = time.time()
    if preset == "cartan":
        _, cartan = cached_presets(beta_exponent)
        Q = quasi_from_preset(cartan, name="cartan")
        params = {}
    elif preset == "fgr2":
        d = I_UNIT if d is None else d
        Q = fgr2_data(beta_exponent, d, eps)
        params = {"d": str(d), "eps": eps}
    else:
        raise ConfigError(f"unknown preset {preset!r}")
    checks = run_all_checks(Q, full=full)
    return VerificationReport(preset, beta_exponent, params, checks, time.time() - t0)


def classify_rmatrix(
    d_values: list[str] | None = None, beta_exponent: int = 1
) -> dict:
    """Sweep the R-matrix classification over exact d values."""
    u, cartan = cached_presets(beta_exponent)
    d_values = DEFAULT_RMATRIX_GRID if d_values is None else d_values
    t0 = time.time()
    results = []
    for text in d_values:
        d = parse_cyc(text)
        res = solve_rmatrix(d, u, cartan)
        entry = {"d": text, "exists": res.exists, "certificate": res.certificate}
        if res.exists:
            fe = res.fe_block(u)
            entry["r_fe_block"] = [[str(v) for v in row] for row in fe]
            entry["matches_tabulated_matrix"] = fe == tabulated_rfe_matrix(d, cartan.beta)
        results.append(entry)
    return {
        "beta_exponent": beta_exponent,
        "results": results,
        "wall_time_s": round(time.time() - t0, 4),
    }


def classify_coproduct(beta_exponent: int = 1, seed: int = 11) -> dict:
    """Sweep existence conditions over a parameter grid: eps, epsbar fourth
    roots of unity, quasiperiodicity either imposed or broken."""
    u, cartan = cached_presets(beta_exponent)
    rng = random.Random(seed)
    roots = [ONE, I_UNIT, -ONE, -I_UNIT]
    t0 = time.time()
    rows = []
    ok = True
    for eps in roots:
        for epsbar in roots:
            for break_qp in (False, True):
                c = (ONE,) + tuple(
                    UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))] for _ in range(3)
                )
                cbar1 = UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))]
                if break_qp:
                    cbar = (ONE, cbar1, c[2], cbar1 * c[3] / c[1])
                else:
                    cbar = (ONE, cbar1, -c[2], -(cbar1 * c[3] / c[1]))
                P = CoproductParams(
                    CoalgebraParams(c, eps), CoalgebraParams(cbar, epsbar)
                )
                expect = []
                signs_ok = eps**2 == ONE and epsbar**2 == ONE
                if not signs_ok:
                    expect.append("nilpotency")
                # the commutator needs eps^2 = epsbar^2 = 1 (mixed terms),
                # eps epsbar = -1 (odd diagonal) and quasiperiodicity
                if not (signs_ok and eps * epsbar == -ONE and not break_qp):
                    expect.append("commutator")
                try:
                    build_coproduct(P, u, cartan)
                    got: list[str] = []
                except ConditionViolated as err:
                    got = err.conditions
                verdict = sorted(set(got)) == sorted(set(expect))
                ok = ok and verdict
                rows.append(
                    {
                        "eps": str(eps),
                        "epsbar": str(epsbar),
                        "quasiperiodicity_broken": break_qp,
                        "expected": sorted(set(expect)),
                        "certificates": sorted(set(got)),
                        "verdict": verdict,
                    }
                )
    return {
        "beta_exponent": beta_exponent,
        "all_verdicts_match": ok,
        "rows": rows,
        "wall_time_s": round(time.time() - t0, 4),
    }


def coalgebra_check(
    c_values: list[str],
    eps: str,
    side: str = "lower",
    beta_exponent: int = 1,
    full: bool = False,
) -> dict:
    u, cartan = cached_presets(beta_exponent)
    c = tuple(parse_cyc(v) for v in c_values)
    if len(c) != 4:
        raise ConfigError("need exactly four c values (c0 = 1)")
    p = CoalgebraParams(c, parse_cyc(eps))
    mc = build_delta_family(p, side, u, cartan)
    mc_c = ModuleCoalgebra(restrict_left_to_cartan(mc.base, u, cartan), mc.delta, mc.eps)
    ambient = cartan_ambient_on_u_module(cartan, u)
    reports = check_module_coalgebra(
        mc_c, ambient, right_ambient=quasi_from_preset(cartan), full=full
    )
    return {
        "side": side,
        "c": [str(v) for v in c],
        "eps": eps,
        "checks": [r.to_json() for r in reports],
        "ok": all(r.ok for r in reports),
    }


def random_gauge_twist(
    Q: QuasiBialgebraData,
    idem_indices: list[int],
    nil_elems: list,
    rng: random.Random,
    nilpotent: bool = False,
) -> GaugeTwist:
    """Random invertible counit-normalized twist: idempotent-diagonal scalars
    plus optionally one nilpotent cross term."""
    scalars = {
        (a, b): UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))]
        for a in range(1, len(idem_indices))
        for b in range(1, len(idem_indices))
    }
    t = diagonal_twist(Q, idem_indices, scalars)
    if nilpotent and nil_elems:
        x = nil_elems[rng.randrange(len(nil_elems))]
        y = nil_elems[rng.randrange(len(nil_elems))]
        mu = UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))]
        term = Tensor.from_elems([x, y]).scale(mu)
        t = nilpotent_enriched_twist(Q, t, term)
    return t


def twist_invariance_sweep(
    count_cartan: int,
    count_fgr2: int,
    nilpotent_share: float = 0.3,
    beta_exponent: int = 1,
    seed: int = 7,
) -> dict:
    """Random gauge twists must preserve every axiom-check outcome on the
    Cartan preset and on the certified quasitriangular preset."""
    u, cartan = cached_presets(beta_exponent)
    rng = random.Random(seed)
    t0 = time.time()
    cq = quasi_from_preset(cartan)
    fq = fgr2_data(beta_exponent)
    nil_elems = [u.E * u.e[a] for a in range(4)] + [u.F * u.e[a] for a in range(4)]
    failures = []
    for n in range(count_cartan):
        t = random_gauge_twist(cq, [0, 1, 2, 3], [], rng, nilpotent=False)
        tw = gauge_twist(cq, t)
        for rep in run_all_checks(tw):
            if not rep.ok:
                failures.append(("cartan", n, rep.axiom))
    idem = [u_index(0, 0, j) for j in range(4)]
    for n in range(count_fgr2):
        nil = rng.random() < nilpotent_share
        t = random_gauge_twist(fq, idem, nil_elems, rng, nilpotent=nil)
        tw = gauge_twist(fq, t)
        for rep in run_all_checks(tw):
            if not rep.ok:
                failures.append(("fgr2", n, rep.axiom))
    return {
        "twists": count_cartan + count_fgr2,
        "failures": failures,
        "ok": not failures,
        "wall_time_s": round(time.time() - t0, 4),
    }


def coalgebra_family_sweep(
    samples: int, beta_exponent: int = 1, seed: int = 5
) -> dict:
    """Random parameter tuples must pass the module-coalgebra checks exactly."""
    u, cartan = cached_presets(beta_exponent)
    rng = random.Random(seed)
    ambient = cartan_ambient_on_u_module(cartan, u)
    cq = quasi_from_preset(cartan)
    roots4 = [ONE, I_UNIT, -ONE, -I_UNIT]
    t0 = time.time()
    failures = []
    for n in range(samples):
        c = (ONE,) + tuple(
            UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))] for _ in range(3)
        )
        eps = roots4[rng.randrange(4)]
        side = "lower" if rng.random() < 0.5 else "upper"
        p = CoalgebraParams(c, eps)
        mc = build_delta_family(p, side, u, cartan)
        mc_c = ModuleCoalgebra(
            restrict_left_to_cartan(mc.base, u, cartan), mc.delta, mc.eps
        )
        for rep in check_module_coalgebra(mc_c, ambient, right_ambient=cq):
            if not rep.ok:
                failures.append((n, side, rep.axiom))
    return {
        "samples": samples,
        "failures": failures,
        "ok": not failures,
        "wall_time_s": round(time.time() - t0, 4),
    }


def normalization_sweep(samples: int, beta_exponent: int = 1, seed: int = 6) -> dict:
    """Standard form: Delta(F) = F x 1 + omega_{-eps} x F, the tabulated
    cbar matrix in d, and the automorphism round trip."""
    from .classify import apply_automorphism

    u, cartan = cached_presets(beta_exponent)
    rng = random.Random(seed)
    t0 = time.time()
    failures = []
    for n in range(samples):
        c = (ONE,) + tuple(
            UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))] for _ in range(3)
        )
        eps = ONE if rng.random() < 0.5 else -ONE
        cbar1 = UNIT_SCALARS[rng.randrange(len(UNIT_SCALARS))]
        cbar = (ONE, cbar1, -c[2], -(cbar1 * c[3] / c[1]))
        P = CoproductParams(CoalgebraParams(c, eps), CoalgebraParams(cbar, -eps))
        try:
            params, Qn = standard_form(P, u, cartan)
        except ValueError as err:
            failures.append((n, f"standard form failed: {err}"))
            continue
        if params.d != P.upper.c[1] * P.lower.c[3]:
            failures.append((n, "d mismatch"))
        Q = build_coproduct(P, u, cartan)
        x = (ONE, rational(2), I_UNIT, parse_cyc("zeta"))
        x_inv = (ONE, x[1].inv(), x[2].inv(), x[3].inv())
        back = apply_automorphism(apply_automorphism(Q, u, x), u, x_inv)
        if back.delta != Q.delta or back.phi != Q.phi:
            failures.append((n, "automorphism round trip failed"))
    return {
        "samples": samples,
        "failures": failures,
        "ok": not failures,
        "wall_time_s": round(time.time() - t0, 4),
    }


def fusion_section(window: int = 3) -> dict:
    t0 = time.time()
    khom_ok = True
    for p in (2, 3):
        labels = []
        for r in range(-2, 3):
            for s in range(1, p + 1):
                for kind in ("M", "F", "Fbar", "P"):
                    labels.append(singlet(kind, r, s, p))
        labels = sorted(set(labels))
        for a in labels:
            for b in labels:
                try:
                    res = singlet_fuse(a, b, p)
                except UnsupportedPair:
                    continue
                if k_class(res, p) != k_mul(k_class(a, p), k_class(b, p), p):
                    khom_ok = False
    out = {
        "unit_column_product": {p: verify_unit_column_product(p, window) for p in (2, 3)},
        "shifted_column_chain": {p: verify_shifted_column_chain(p, window) for p in (2, 3)},
        "triplet_displays": {p: verify_triplet_displays(p) for p in (2, 3)},
        "k_ring_homomorphism": khom_ok,
        "wall_time_s": round(time.time() - t0, 4),
    }
    out["ok"] = (
        all(out["unit_column_product"].values())
        and all(out["shifted_column_chain"].values())
        and all(out["triplet_displays"].values())
        and khom_ok
    )
    return out


@dataclass
class PipelineConfig:
    beta_exponent: int = 1
    d: str = "i"
    eps: int = 1
    seed: int = 2024
    coalgebra_samples: int = 20
    normalization_samples: int = 10
    twist_samples_cartan: int = 10
    twist_samples_fgr2: int = 6
    rmatrix_grid: list[str] = field(default_factory=lambda: list(DEFAULT_RMATRIX_GRID))
    necessity_grid: str = "mu4"
    fusion_window: int = 3
    inject_fault: bool = False

    @classmethod
    def from_json(cls, data: dict) -> PipelineConfig:
        cfg = cls()
        for key, value in data.items():
            if not hasattr(cfg, key):
                raise ConfigError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
        return cfg

    def validate(self):
        if self.beta_exponent % 8 not in (1, 3, 5, 7):
            raise ConfigError("beta_exponent must be odd")
        if self.eps not in (1, -1):
            raise ConfigError("eps must be 1 or -1")
        if self.necessity_grid not in ("mu4", "mu8"):
            raise ConfigError("necessity_grid must be mu4 or mu8")


def run_pipeline(config: PipelineConfig | None = None) -> dict:
    """Full reproduction: preset certification, coalgebra classification
    (sufficiency + necessity), coproduct conditions, normalization,
    R-matrix classification, fusion rules, twist invariance, plus
    expected-failure probes.  Exit is certified iff every expected-pass
    check passed and every expected-fail probe failed."""
    config = config or PipelineConfig()
    config.validate()
    t0 = time.time()
    u, cartan = cached_presets(config.beta_exponent)
    sections: dict = {}

    cartan_report = verify_preset("cartan", config.beta_exponent)
    d = parse_cyc(config.d)
    fgr2_report = verify_preset("fgr2", config.beta_exponent, d, config.eps)
    if config.inject_fault:
        Q = fgr2_data(config.beta_exponent, d, config.eps)
        coeffs = dict(Q.phi.coeffs)
        key = (1, 1, 1)
        coeffs[key] = -coeffs[key]
        bad_phi = Tensor(Q.algebra, 3, coeffs)
        bad = QuasiBialgebraData(
            Q.algebra, Q.delta, Q.counit, bad_phi, tensor_inv(bad_phi), Q.r
        )
        fgr2_report = VerificationReport(
            "fgr2(faulted)",
            config.beta_exponent,
            {"d": config.d, "eps": config.eps, "fault": "phi entry sign flip"},
            run_all_checks(bad),
        )
    sections["cartan"] = cartan_report.to_json()
    sections["fgr2"] = fgr2_report.to_json()

    rmx = classify_rmatrix(config.rmatrix_grid, config.beta_exponent)
    expected_set = {parse_cyc(t) for t in EXPECTED_R_VALUES}
    rmx_ok = all(
        entry["exists"] == (parse_cyc(entry["d"]) in expected_set)
        and (not entry["exists"] or entry["matches_tabulated_matrix"])
        for entry in rmx["results"]
    )
    rmx["ok"] = rmx_ok
    sections["rmatrix_classification"] = rmx

    cop = classify_coproduct(config.beta_exponent, config.seed)
    cop["ok"] = cop["all_verdicts_match"]
    sections["coproduct_conditions"] = cop

    sections["coalgebra_sufficiency"] = coalgebra_family_sweep(
        config.coalgebra_samples, config.beta_exponent, config.seed
    )
    nec = delta_symbolic_constraints(u, cartan)
    grid = None
    if config.necessity_grid == "mu4":
        grid = [ONE, I_UNIT, -ONE, -I_UNIT]
    enum = enumerate_grid_solutions(grid)
    sections["coalgebra_necessity"] = {
        "families_match": nec.families_match,
        "counit_constraints": sorted(nec.counit_constraints),
        "rank": nec.rank,
        "solution_dim": nec.solution_dim,
        "grid_solutions": len(enum.solutions),
        "grid_all_in_parametrization": enum.all_in_parametrization,
        "ok": nec.families_match
        and nec.solution_dim == 3
        and enum.all_in_parametrization,
    }

    sections["normalization"] = normalization_sweep(
        config.normalization_samples, config.beta_exponent, config.seed
    )
    sections["fusion"] = fusion_section(config.fusion_window)
    sections["twist_invariance"] = twist_invariance_sweep(
        config.twist_samples_cartan,
        config.twist_samples_fgr2,
        beta_exponent=config.beta_exponent,
        seed=config.seed,
    )

    # expected-failure probes: these must keep failing
    probes = {}
    lower = CoalgebraParams((ONE, ONE, ONE, ONE), I_UNIT)
    upper = CoalgebraParams((ONE, ONE, -ONE, -ONE), -I_UNIT)
    try:
        build_coproduct(CoproductParams(lower, upper), u, cartan)
        probes["eps_i_rejected"] = False
    except ConditionViolated as err:
        probes["eps_i_rejected"] = "nilpotency" in err.conditions
    bad_r = solve_rmatrix(ONE, u, cartan)
    probes["d_1_has_no_r"] = (not bad_r.exists) and (
        bad_r.certificate["constraint_id"] == "hexagon"
    )
    cq = quasi_from_preset(cartan)
    coeffs = dict(cq.phi.coeffs)
    coeffs[(1, 1, 1)] = -coeffs[(1, 1, 1)]
    bad_phi = Tensor(cq.algebra, 3, coeffs)
    from .quasi import check_pentagon

    probes["corrupted_phi_fails_pentagon"] = not check_pentagon(
        QuasiBialgebraData(
            cq.algebra, cq.delta, cq.counit, bad_phi, tensor_inv(bad_phi), None
        )
    ).ok
    sections["expected_failure_probes"] = {
        "probes": probes,
        "ok": all(probes.values()),
    }

    certified = all(section.get("ok", False) for section in sections.values())
    return {
        "config": {
            "beta_exponent": config.beta_exponent,
            "d": config.d,
            "eps": config.eps,
            "seed": config.seed,
        },
        "sections": sections,
        "certified": certified,
        "wall_time_s": round(time.time() - t0, 2),
    }
