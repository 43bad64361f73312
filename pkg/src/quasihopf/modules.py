"""Finite-dimensional representations of the quantum group, Verma induction,
module/bimodule coalgebras and their exact axiom checks.

Module vectors and module tensors are sparse index maps, so the same helpers
run with polynomial coefficients during symbolic constraint extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgElem, BasedAlgebra, NotInvertible, Tensor, tensor_inv
from .cyclo import CycNum, ONE, ZERO, i_power, rational
from .presets import CartanPreset, UqPreset, u_index
from .quasi import CheckReport, GaugeTwist, QuasiBialgebraData, _report

Matrix = list  # list of rows of CycNum


def _zero_matrix(n: int) -> Matrix:
    return [[ZERO] * n for _ in range(n)]


def _identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def _mmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = _zero_matrix(n)
    for i in range(n):
        for k in range(n):
            c = a[i][k]
            if not c:
                continue
            row = b[k]
            orow = out[i]
            for j in range(n):
                if row[j]:
                    orow[j] = orow[j] + c * row[j]
    return out


def _madd(a: Matrix, b: Matrix, scalar: CycNum) -> Matrix:
    return [
        [x + scalar * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)
    ]


class ModuleRep:
    """Left module over a based algebra, with an optional right action of a
    second algebra (bimodule); actions are dense matrices on column vectors."""

    def __init__(
        self,
        algebra: BasedAlgebra,
        dim: int,
        action: list[Matrix],
        right_algebra: BasedAlgebra | None = None,
        right_action: list[Matrix] | None = None,
        check: bool = True,
    ):
        self.algebra = algebra
        self.dim = dim
        self.action = action
        self.right_algebra = right_algebra
        self.right_action = right_action
        if check:
            self._check_left()
            if right_action is not None:
                self._check_right()

    def _elem_matrix(self, x: AlgElem, matrices: list[Matrix]) -> Matrix:
        out = _zero_matrix(self.dim)
        for k, c in x.coeffs.items():
            out = _madd(out, matrices[k], c)
        return out

    def left_matrix(self, x: AlgElem) -> Matrix:
        return self._elem_matrix(x, self.action)

    def right_matrix(self, g: AlgElem) -> Matrix:
        return self._elem_matrix(g, self.right_action)

    def _check_left(self):
        if self.left_matrix(self.algebra.unit()) != _identity(self.dim):
            raise ValueError("left unit does not act as identity")
        for i in range(self.algebra.dim):
            for j in range(self.algebra.dim):
                prod = self.algebra.basis(i) * self.algebra.basis(j)
                lhs = _mmul(self.action[i], self.action[j])
                if lhs != self.left_matrix(prod):
                    raise ValueError(
                        f"left action is not a homomorphism at "
                        f"({self.algebra.labels[i]}, {self.algebra.labels[j]})"
                    )

    def _check_right(self):
        ralg = self.right_algebra
        if self.right_matrix(ralg.unit()) != _identity(self.dim):
            raise ValueError("right unit does not act as identity")
        for i in range(ralg.dim):
            for j in range(ralg.dim):
                prod = ralg.basis(i) * ralg.basis(j)
                # right action reverses order: v.(gh) = (v.g).h
                lhs = _mmul(self.right_action[j], self.right_action[i])
                if lhs != self.right_matrix(prod):
                    raise ValueError("right action is not an antihomomorphism-free map")
        for i in range(self.algebra.dim):
            for j in range(ralg.dim):
                if _mmul(self.action[i], self.right_action[j]) != _mmul(
                    self.right_action[j], self.action[i]
                ):
                    raise ValueError("left and right actions do not commute")


def rep_from_generators(u: UqPreset, dim: int, gen_mats: dict[str, Matrix]) -> list[Matrix]:
    """Action matrices for the whole idempotent-adapted basis of U from
    matrices of E, F, K."""
    quarter = rational(1, 4)
    mk = gen_mats["K"]
    kp = [_identity(dim)]
    for _ in range(3):
        kp.append(_mmul(kp[-1], mk))
    e_mats = []
    for j in range(4):
        m = _zero_matrix(dim)
        for p in range(4):
            m = _madd(m, kp[p], quarter * i_power(-j * p))
        e_mats.append(m)
    out = []
    for x in range(2):
        for y in range(2):
            for j in range(4):
                m = e_mats[j]
                if y:
                    m = _mmul(gen_mats["F"], m)
                if x:
                    m = _mmul(gen_mats["E"], m)
                out.append(m)
    return out


def verma(u: UqPreset, k: int) -> ModuleRep:
    """Two-dimensional module on {v, Fv} with K v = i^k v and E v = 0; the
    commutation relation forces E(Fv) = i^k v for odd k and 0 for even k."""
    k %= 4
    ev = i_power(k) if k % 2 else ZERO
    gens = {
        "K": [[i_power(k), ZERO], [ZERO, -i_power(k)]],
        "E": [[ZERO, ev], [ZERO, ZERO]],
        "F": [[ZERO, ZERO], [ONE, ZERO]],
    }
    return ModuleRep(u.algebra, 2, rep_from_generators(u, 2, gens))


def opposite_verma(u: UqPreset, k: int) -> ModuleRep:
    """Two-dimensional module on {w, Ew} with F w = 0; F(Ew) = -i^k w for odd k."""
    k %= 4
    fv = -i_power(k) if k % 2 else ZERO
    gens = {
        "K": [[i_power(k), ZERO], [ZERO, -i_power(k)]],
        "E": [[ZERO, ZERO], [ONE, ZERO]],
        "F": [[ZERO, fv], [ZERO, ZERO]],
    }
    return ModuleRep(u.algebra, 2, rep_from_generators(u, 2, gens))


def induce_regular(u: UqPreset, cartan: CartanPreset, side: str = "lower") -> ModuleRep:
    """The 8-dimensional bimodule: direct sum over k of the (opposite) Verma
    modules, right C-action by idempotent projection onto the k-th summand.
    Basis order: top_0, low_0, top_1, low_1, ...; top_k has weight i^k."""
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    blocks = [
        verma(u, k) if side == "lower" else opposite_verma(u, k) for k in range(4)
    ]
    dim = 8
    action = []
    for idx in range(16):
        m = _zero_matrix(dim)
        for k in range(4):
            blk = blocks[k].action[idx]
            for r in range(2):
                for c in range(2):
                    m[2 * k + r][2 * k + c] = blk[r][c]
        action.append(m)
    right = []
    for j in range(4):
        m = _zero_matrix(dim)
        m[2 * j][2 * j] = ONE
        m[2 * j + 1][2 * j + 1] = ONE
        right.append(m)
    return ModuleRep(u.algebra, dim, action, cartan.algebra, right)


def restrict_left_to_cartan(rep: ModuleRep, u: UqPreset, cartan: CartanPreset) -> ModuleRep:
    """View a U-module as a C-module through the idempotent embedding."""
    action = [rep.action[u_index(0, 0, j)] for j in range(4)]
    return ModuleRep(
        cartan.algebra, rep.dim, action, rep.right_algebra, rep.right_action
    )


# -- module tensors -------------------------------------------------------------


def mat_apply(m: Matrix, vec: dict[int, object]) -> dict[int, object]:
    out: dict[int, object] = {}
    for j, c in vec.items():
        for i in range(len(m)):
            f = m[i][j]
            if not f:
                continue
            v = f * c
            s = out.get(i)
            out[i] = v if s is None else s + v
    return {i: c for i, c in out.items() if c}


def tensor_act(
    matrices: list[Matrix], T: Tensor, mt: dict[tuple, object], side: str
) -> dict[tuple, object]:
    """Act with an algebra tensor (arity n) on a module tensor (n legs); the
    matrices are indexed by the acting algebra's basis.  ``side`` 'left'
    multiplies coefficients T*mt, 'right' gives mt*T (actions commute with
    scalars, only matrix order per leg matters for non-commuting legs)."""
    out: dict[tuple, object] = {}
    for akey, ac in T.coeffs.items():
        mats = [matrices[a] for a in akey]
        for mkey, mc in mt.items():
            coeff = ac * mc if side == "left" else mc * ac
            # expand leg by leg
            partial = {(): coeff}
            dead = False
            for pos, m in enumerate(mats):
                nxt: dict[tuple, object] = {}
                j = mkey[pos]
                col = [(i, m[i][j]) for i in range(len(m)) if m[i][j]]
                if not col:
                    dead = True
                    break
                for prefix, c in partial.items():
                    for i, f in col:
                        v = c * f
                        key = prefix + (i,)
                        s = nxt.get(key)
                        nxt[key] = v if s is None else s + v
                partial = nxt
            if dead:
                continue
            for key, c in partial.items():
                s = out.get(key)
                out[key] = c if s is None else s + c
    return {k: c for k, c in out.items() if c}


@dataclass
class ModuleCoalgebra:
    """A module with comultiplication delta: M -> M (x) M and counit."""

    base: ModuleRep
    delta: list[dict[tuple[int, int], object]]
    eps: list[object]

    def delta_of_vec(self, vec: dict[int, object]) -> dict[tuple, object]:
        out: dict[tuple, object] = {}
        for i, c in vec.items():
            for key, f in self.delta[i].items():
                v = c * f
                s = out.get(key)
                out[key] = v if s is None else s + v
        return {k: c for k, c in out.items() if c}


def _vec_str(rep: ModuleRep, vec: dict) -> str:
    return " + ".join(f"({c})*m{i}" for i, c in sorted(vec.items()))


def check_module_coalgebra(
    mc: ModuleCoalgebra,
    ambient: QuasiBialgebraData,
    right_ambient=None,
    full: bool = False,
) -> list[CheckReport]:
    """Counit, left (and right) linearity, and quasi-coassociativity of a
    module coalgebra, with the coassociator(s) acting through the module
    structure: X -> Phi_H . X (. Phi_G^{-1} for bimodules)."""
    rep = mc.base
    n = rep.dim
    reports = []

    bad = []
    for c in range(n):
        left: dict[int, object] = {}
        right: dict[int, object] = {}
        for (i, j), f in mc.delta[c].items():
            if mc.eps[i]:
                v = mc.eps[i] * f
                s = left.get(j)
                left[j] = v if s is None else s + v
            if mc.eps[j]:
                v = f * mc.eps[j]
                s = right.get(i)
                right[i] = v if s is None else s + v
        left[c] = left.get(c, ZERO) - ONE
        right[c] = right.get(c, ZERO) - ONE
        for name, res in (("eps(c1)c2", left), ("eps(c2)c1", right)):
            res = {k: v for k, v in res.items() if v}
            if res:
                bad.append((f"m{c} {name}", _vec_str(rep, res)))
    reports.append(_report("module-counit", bad, full))

    bad = []
    for h in range(rep.algebra.dim):
        dh = ambient.delta[h]
        label = rep.algebra.labels[h]
        for c in range(n):
            lhs: dict[tuple, object] = {}
            for m in range(n):
                f = rep.action[h][m][c]
                if not f:
                    continue
                for key, g in mc.delta[m].items():
                    v = f * g
                    s = lhs.get(key)
                    lhs[key] = v if s is None else s + v
            rhs = tensor_act(rep.action, dh, mc.delta[c], "left")
            resid = dict(lhs)
            for key, v in rhs.items():
                resid[key] = resid.get(key, ZERO) - v
            resid = {k: v for k, v in resid.items() if v}
            if resid:
                bad.append((f"delta({label}.m{c})", f"{len(resid)} terms"))
            # counit linearity eps(h.c) = eps_H(h) eps(c)
            tot = -(ambient.counit[h] * mc.eps[c])
            for m in range(n):
                f = rep.action[h][m][c]
                if f:
                    tot = tot + f * mc.eps[m]
            if tot:
                bad.append((f"eps({label}.m{c})", str(tot)))
    reports.append(_report("module-left-linearity", bad, full))

    if right_ambient is not None and rep.right_action is not None:
        bad = []
        for g in range(rep.right_algebra.dim):
            dg = right_ambient.delta[g]
            label = rep.right_algebra.labels[g]
            for c in range(n):
                lhs = {}
                for m in range(n):
                    f = rep.right_action[g][m][c]
                    if not f:
                        continue
                    for key, w in mc.delta[m].items():
                        v = f * w
                        s = lhs.get(key)
                        lhs[key] = v if s is None else s + v
                rhs = tensor_act(rep.right_action, dg, mc.delta[c], "right")
                resid = dict(lhs)
                for key, v in rhs.items():
                    resid[key] = resid.get(key, ZERO) - v
                resid = {k: v for k, v in resid.items() if v}
                if resid:
                    bad.append((f"delta(m{c}.{label})", f"{len(resid)} terms"))
                tot = -(mc.eps[c] * right_ambient.counit[g])
                for m in range(n):
                    f = rep.right_action[g][m][c]
                    if f:
                        tot = tot + mc.eps[m] * f
                if tot:
                    bad.append((f"eps(m{c}.{label})", str(tot)))
        reports.append(_report("module-right-linearity", bad, full))

    bad = []
    for c in range(n):
        inner = mc.delta[c]
        lhs: dict[tuple, object] = {}
        rhs: dict[tuple, object] = {}
        for (i, j), f in inner.items():
            for key, g in mc.delta[j].items():
                k3 = (i,) + key
                v = f * g
                s = lhs.get(k3)
                lhs[k3] = v if s is None else s + v
            for key, g in mc.delta[i].items():
                k3 = key + (j,)
                v = g * f
                s = rhs.get(k3)
                rhs[k3] = v if s is None else s + v
        rhs = tensor_act(rep.action, ambient.phi, rhs, "left")
        if right_ambient is not None and rep.right_action is not None:
            rhs = tensor_act(rep.right_action, right_ambient.phi_inv, rhs, "right")
        resid = dict(lhs)
        for key, v in rhs.items():
            resid[key] = resid.get(key, ZERO) - v
        resid = {k: v for k, v in resid.items() if v}
        for key in sorted(resid):
            bad.append((f"m{c} @ {key}", str(resid[key])))
    reports.append(_report("module-quasi-coassociativity", bad, full))
    return reports


def regular_module_coalgebra(
    Q: QuasiBialgebraData,
    right_algebra: BasedAlgebra | None = None,
    right_indices: list[int] | None = None,
) -> ModuleCoalgebra:
    """The regular representation of Q's algebra as a module coalgebra with
    delta = the coproduct; optional right action by multiplication with the
    subalgebra spanned by ``right_indices`` (identified with ``right_algebra``).
    Action checks are skipped: they restate associativity of the algebra."""
    alg = Q.algebra
    n = alg.dim
    action = []
    for i in range(n):
        m = _zero_matrix(n)
        for j in range(n):
            for k, c in (alg.basis(i) * alg.basis(j)).coeffs.items():
                m[k][j] = c
        action.append(m)
    right = None
    if right_indices is not None:
        right = []
        for j in right_indices:
            m = _zero_matrix(n)
            for col in range(n):
                for k, c in (alg.basis(col) * alg.basis(j)).coeffs.items():
                    m[k][col] = c
            right.append(m)
    rep = ModuleRep(alg, n, action, right_algebra, right, check=False)
    delta = [dict(Q.delta[i].coeffs) for i in range(n)]
    return ModuleCoalgebra(rep, delta, list(Q.counit))


def normalize_delta(mc: ModuleCoalgebra, Q: QuasiBialgebraData) -> tuple[GaugeTwist, ModuleCoalgebra]:
    """For a module coalgebra on the regular representation: J = delta(1)^{-1}
    is a gauge twist and J.delta(-) satisfies delta^J(1) = 1 (x) 1."""
    alg = Q.algebra
    if mc.base.dim != alg.dim:
        raise ValueError("normalize_delta needs the regular representation")
    unit_vec = dict(alg.unit_coeffs)
    d1 = mc.delta_of_vec(unit_vec)
    d1_tensor = Tensor(alg, 2, dict(d1))
    try:
        j = tensor_inv(d1_tensor)
    except NotInvertible:
        raise NotInvertible("delta(1) is not invertible: no normalizing twist")
    twist = GaugeTwist(j, d1_tensor)
    new_delta = [
        tensor_act(mc.base.action, j, mc.delta[c], "left") for c in range(mc.base.dim)
    ]
    out = ModuleCoalgebra(mc.base, new_delta, list(mc.eps))
    # delta^J(1) = 1 (x) 1 exactly
    check = out.delta_of_vec(unit_vec)
    expect = Tensor.unit(alg, 2).coeffs
    assert check == dict(expect), "normalization failed to reach delta(1) = 1x1"
    return twist, out
