"""Finite-dimensional based algebras over Q(zeta) and their sparse tensor powers.

A ``BasedAlgebra`` is a basis together with structure constants; associativity
and the two-sided unit are verified on construction.  Elements and tensors are
sparse coefficient maps, so everything here also works with polynomial
coefficients (used by the constraint solvers) as long as they support ``+``,
``*``, unary ``-`` and truthiness for zero-dropping.
"""

from __future__ import annotations

from itertools import product as iter_product
from typing import Sequence

from .cyclo import CycNum, ONE, ZERO


class DimensionMismatch(ValueError):
    """Operands live over different algebras or tensor arities."""


class NotInvertible(ValueError):
    """A tensor-power element has no two-sided inverse."""


class BasedAlgebra:
    """Associative unital algebra given by structure constants on a fixed basis."""

    __slots__ = ("dim", "labels", "table", "right_partners", "unit_coeffs", "name")

    def __init__(
        self,
        labels: Sequence[str],
        table: dict[tuple[int, int], dict[int, CycNum]],
        unit_coeffs: dict[int, CycNum],
        name: str = "algebra",
        check: bool = True,
    ):
        self.dim = len(labels)
        self.labels = list(labels)
        self.name = name
        full: list[list[tuple[tuple[int, CycNum], ...]]] = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                entry = table.get((i, j), {})
                row.append(tuple((k, c) for k, c in sorted(entry.items()) if c))
            full.append(row)
        self.table = full
        self.right_partners = [
            tuple(j for j in range(self.dim) if full[i][j]) for i in range(self.dim)
        ]
        self.unit_coeffs = {k: c for k, c in unit_coeffs.items() if c}
        if check:
            self._check_unit()
            self._check_associativity()

    def basis(self, i: int) -> AlgElem:
        return AlgElem(self, {i: ONE})

    def unit(self) -> AlgElem:
        return AlgElem(self, dict(self.unit_coeffs))

    def element(self, coeffs: dict[int, CycNum]) -> AlgElem:
        return AlgElem(self, coeffs)

    def zero(self) -> AlgElem:
        return AlgElem(self, {})

    def _check_unit(self):
        one = self.unit()
        for i in range(self.dim):
            b = self.basis(i)
            if one * b != b or b * one != b:
                raise ValueError(f"unit fails on basis element {self.labels[i]}")

    def _check_associativity(self):
        for i in range(self.dim):
            bi = self.basis(i)
            for j in range(self.dim):
                bij = bi * self.basis(j)
                for k in range(self.dim):
                    left = bij * self.basis(k)
                    right = bi * (self.basis(j) * self.basis(k))
                    if left != right:
                        raise ValueError(
                            "associativity fails on "
                            f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})"
                        )

    def __repr__(self) -> str:
        return f"BasedAlgebra({self.name}, dim={self.dim})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        sc = []
        for i in range(self.dim):
            for j in range(self.dim):
                entry = self.table[i][j]
                if entry:
                    sc.append([i, j, {str(k): c.to_strings() for k, c in entry}])
        return {
            "dim": self.dim,
            "basis_labels": self.labels,
            "structure_constants": sc,
            "unit": {str(k): c.to_strings() for k, c in self.unit_coeffs.items()},
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "algebra") -> BasedAlgebra:
        table: dict[tuple[int, int], dict[int, CycNum]] = {}
        for i, j, entry in data["structure_constants"]:
            table[(i, j)] = {
                int(k): CycNum.from_strings(v) for k, v in entry.items()
            }
        unit = {int(k): CycNum.from_strings(v) for k, v in data["unit"].items()}
        return cls(data["basis_labels"], table, unit, name=name)


class AlgElem:
    """Sparse element of a based algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: BasedAlgebra, coeffs: dict[int, CycNum]):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    def _require_same(self, other: AlgElem):
        if self.algebra is not other.algebra:
            raise DimensionMismatch("elements of different algebras")

    def __add__(self, other: AlgElem) -> AlgElem:
        self._require_same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return AlgElem(self.algebra, out)

    def __neg__(self) -> AlgElem:
        return AlgElem(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: AlgElem) -> AlgElem:
        return self + (-other)

    def scale(self, scalar) -> AlgElem:
        return AlgElem(self.algebra, {k: scalar * c for k, c in self.coeffs.items()})

    def __mul__(self, other: AlgElem) -> AlgElem:
        self._require_same(other)
        table = self.algebra.table
        out: dict[int, CycNum] = {}
        for i, a in self.coeffs.items():
            row = table[i]
            for j, b in other.coeffs.items():
                ab = a * b
                for k, c in row[j]:
                    s = out.get(k)
                    v = ab * c
                    out[k] = v if s is None else s + v
        return AlgElem(self.algebra, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self.coeffs.items()))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        labels = self.algebra.labels
        return " + ".join(
            f"({c})*{labels[k]}" for k, c in sorted(self.coeffs.items())
        )

    __repr__ = __str__


class Tensor:
    """Sparse element of the arity-fold tensor power of a based algebra."""

    __slots__ = ("algebra", "arity", "coeffs")

    def __init__(self, algebra: BasedAlgebra, arity: int, coeffs: dict[tuple, object]):
        self.algebra = algebra
        self.arity = arity
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    @classmethod
    def unit(cls, algebra: BasedAlgebra, arity: int) -> Tensor:
        out: dict[tuple, CycNum] = {}
        keys = list(algebra.unit_coeffs.items())
        for combo in iter_product(keys, repeat=arity):
            key = tuple(k for k, _ in combo)
            c = ONE
            for _, f in combo:
                c = c * f
            out[key] = c
        return cls(algebra, arity, out)

    @classmethod
    def from_elems(cls, elems: Sequence[AlgElem], scalar=None) -> Tensor:
        alg = elems[0].algebra
        out: dict[tuple, object] = {}
        for combo in iter_product(*(e.coeffs.items() for e in elems)):
            key = tuple(k for k, _ in combo)
            c = scalar if scalar is not None else ONE
            for _, f in combo:
                c = c * f
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return cls(alg, len(elems), out)

    def _require_same(self, other: Tensor):
        if self.algebra is not other.algebra or self.arity != other.arity:
            raise DimensionMismatch("tensors over different algebras or arities")

    def __add__(self, other: Tensor) -> Tensor:
        self._require_same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return Tensor(self.algebra, self.arity, out)

    def __neg__(self) -> Tensor:
        return Tensor(self.algebra, self.arity, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def scale(self, scalar) -> Tensor:
        return Tensor(
            self.algebra, self.arity, {k: scalar * c for k, c in self.coeffs.items()}
        )

    def __mul__(self, other: Tensor) -> Tensor:
        """Componentwise-in-legs product: (a (x) b)(c (x) d) = ac (x) bd.
        The right operand is bucketed by its first leg so that structurally
        orthogonal pairs (ubiquitous on idempotent-adapted bases) are skipped."""
        self._require_same(other)
        table = self.algebra.table
        partners = self.algebra.right_partners
        buckets: dict[int, list] = {}
        for v, b in other.coeffs.items():
            buckets.setdefault(v[0], []).append((v, b))
        out: dict[tuple, object] = {}
        for u, a in self.coeffs.items():
            row0 = u[0]
            for j in partners[row0]:
                for v, b in buckets.get(j, ()):
                    parts = [table[ui][vi] for ui, vi in zip(u, v)]
                    if not all(parts):
                        continue
                    ab = a * b
                    for combo in iter_product(*parts):
                        key = tuple(k for k, _ in combo)
                        c = ab
                        for _, f in combo:
                            c = c * f
                        prev = out.get(key)
                        out[key] = c if prev is None else prev + c
        return Tensor(self.algebra, self.arity, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __hash__(self):
        return hash((id(self.algebra), self.arity, tuple(sorted(self.coeffs.items()))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        labels = self.algebra.labels
        parts = []
        for key, c in sorted(self.coeffs.items()):
            name = " (x) ".join(labels[k] for k in key)
            parts.append(f"({c})*[{name}]")
        return " + ".join(parts)

    __repr__ = __str__

    # -- leg operations -------------------------------------------------------

    def permute_legs(self, spec: Sequence[int]) -> Tensor:
        """Place original leg spec[p] (1-based) at position p; e.g. (2, 3, 1)
        sends x (x) y (x) z to y (x) z (x) x."""
        out: dict[tuple, object] = {}
        for key, c in self.coeffs.items():
            new_key = tuple(key[s - 1] for s in spec)
            prev = out.get(new_key)
            out[new_key] = c if prev is None else prev + c
        return Tensor(self.algebra, self.arity, out)

    def apply_leg(self, pos: int, images: Sequence[AlgElem]) -> Tensor:
        """Apply the linear map given on basis elements to one leg (0-based)."""
        out: dict[tuple, object] = {}
        for key, c in self.coeffs.items():
            for k2, f in images[key[pos]].coeffs.items():
                new_key = key[:pos] + (k2,) + key[pos + 1 :]
                v = c * f
                prev = out.get(new_key)
                out[new_key] = v if prev is None else prev + v
        return Tensor(self.algebra, self.arity, out)

    def expand_leg(self, pos: int, images: Sequence[Tensor]) -> Tensor:
        """Replace one leg by its image under a map into a tensor power
        (raises arity), e.g. a coproduct applied to leg ``pos``."""
        extra = images[0].arity
        out: dict[tuple, object] = {}
        for key, c in self.coeffs.items():
            for sub, f in images[key[pos]].coeffs.items():
                new_key = key[:pos] + sub + key[pos + 1 :]
                v = c * f
                prev = out.get(new_key)
                out[new_key] = v if prev is None else prev + v
        return Tensor(self.algebra, self.arity - 1 + extra, out)

    def contract_leg(self, pos: int, functional: Sequence[CycNum]):
        """Apply a linear functional (e.g. a counit) to one leg; arity drops."""
        if self.arity == 1:
            raise DimensionMismatch("cannot contract an arity-1 tensor to arity 0")
        out: dict[tuple, object] = {}
        for key, c in self.coeffs.items():
            f = functional[key[pos]]
            if not f:
                continue
            new_key = key[:pos] + key[pos + 1 :]
            v = c * f
            prev = out.get(new_key)
            out[new_key] = v if prev is None else prev + v
        return Tensor(self.algebra, self.arity - 1, out)

    def insert_unit_leg(self, pos: int) -> Tensor:
        """Insert the algebra unit as a new leg at position ``pos``."""
        out: dict[tuple, object] = {}
        for key, c in self.coeffs.items():
            for k1, f in self.algebra.unit_coeffs.items():
                new_key = key[:pos] + (k1,) + key[pos:]
                v = c * f
                prev = out.get(new_key)
                out[new_key] = v if prev is None else prev + v
        return Tensor(self.algebra, self.arity + 1, out)

    def to_elem(self) -> AlgElem:
        if self.arity != 1:
            raise DimensionMismatch("only arity-1 tensors convert to elements")
        return AlgElem(self.algebra, {k[0]: c for k, c in self.coeffs.items()})


def flip(t: Tensor) -> Tensor:
    """Swap the two legs of an arity-2 tensor."""
    if t.arity != 2:
        raise DimensionMismatch("flip acts on arity-2 tensors")
    return t.permute_legs((2, 1))


def tensor_inv(t: Tensor) -> Tensor:
    """Exact two-sided inverse in the tensor-power algebra, by sparse
    Gaussian elimination on t*x = 1.  Raises NotInvertible on failure."""
    alg = t.algebra
    one = Tensor.unit(alg, t.arity)
    columns: dict[tuple, dict[tuple, CycNum]] = {}
    support: set[tuple] = set()
    basis_keys = sorted(
        set(iter_product(range(alg.dim), repeat=t.arity))
    )
    # restrict to keys reachable from the support of t and 1 to stay sparse
    rows: dict[tuple, dict[tuple, CycNum]] = {}
    for v in basis_keys:
        col = t * Tensor(alg, t.arity, {v: ONE})
        for u, c in col.coeffs.items():
            rows.setdefault(u, {})[v] = c
    system = LinearSystem()
    row_keys = set(rows) | set(one.coeffs)
    for u in sorted(row_keys):
        system.add_equation(rows.get(u, {}), one.coeffs.get(u, ZERO))
    sol = system.solve()
    if sol is None or sol.nullspace:
        raise NotInvertible("tensor has no inverse (singular system)")
    x = Tensor(alg, t.arity, dict(sol.particular))
    if t * x != one or x * t != one:
        raise NotInvertible("tensor has no two-sided inverse")
    return x


class _Solution:
    __slots__ = ("particular", "nullspace", "pivots")

    def __init__(self, particular, nullspace, pivots):
        self.particular = particular
        self.nullspace = nullspace
        self.pivots = pivots


class LinearSystem:
    """Incremental exact RREF over Q(zeta) with hashable unknown keys."""

    def __init__(self):
        self.pivot_rows: dict[object, dict[object, CycNum]] = {}
        self.pivot_rhs: dict[object, CycNum] = {}
        self.inconsistent = False
        self.columns: set = set()

    def add_equation(self, row: dict[object, CycNum], rhs: CycNum) -> None:
        row = {k: c for k, c in row.items() if c}
        self.columns.update(row)
        # reduce against existing pivots
        for p in list(row):
            if p in self.pivot_rows and row.get(p):
                factor = row[p]
                prow = self.pivot_rows[p]
                for k, c in prow.items():
                    cur = row.get(k, ZERO) - factor * c
                    if cur:
                        row[k] = cur
                    else:
                        row.pop(k, None)
                rhs = rhs - factor * self.pivot_rhs[p]
        row = {k: c for k, c in row.items() if c}
        if not row:
            if rhs:
                self.inconsistent = True
            return
        # normalize on a fresh pivot and back-substitute into older rows
        pivot = min(row, key=_stable_key)
        inv = row[pivot].inv()
        row = {k: inv * c for k, c in row.items()}
        rhs = inv * rhs
        for p, prow in self.pivot_rows.items():
            f = prow.get(pivot)
            if f:
                for k, c in row.items():
                    cur = prow.get(k, ZERO) - f * c
                    if cur:
                        prow[k] = cur
                    else:
                        prow.pop(k, None)
                self.pivot_rhs[p] = self.pivot_rhs[p] - f * rhs
        self.pivot_rows[pivot] = row
        self.pivot_rhs[pivot] = rhs

    def pivot_expressions(self) -> dict | None:
        """Each pivot unknown expressed as (rhs, {free unknown: coefficient})
        meaning pivot = rhs - sum coeff * free."""
        if self.inconsistent:
            return None
        out = {}
        for p, prow in self.pivot_rows.items():
            deps = {k: c for k, c in prow.items() if k != p}
            out[p] = (self.pivot_rhs[p], deps)
        return out

    def solve(self) -> _Solution | None:
        """Particular solution (free unknowns = 0) and nullspace basis."""
        if self.inconsistent:
            return None
        particular = {}
        for p, rhs in self.pivot_rhs.items():
            if rhs:
                particular[p] = rhs
        free = sorted(
            (c for c in self.columns if c not in self.pivot_rows), key=_stable_key
        )
        nullspace = []
        for f in free:
            vec = {f: ONE}
            for p, prow in self.pivot_rows.items():
                c = prow.get(f)
                if c:
                    vec[p] = -c
            nullspace.append(vec)
        return _Solution(particular, nullspace, set(self.pivot_rows))


def _stable_key(k):
    return repr(k)


def mat_mul(a: Sequence[Sequence[CycNum]], b: Sequence[Sequence[CycNum]]) -> list[list[CycNum]]:
    n, m, p = len(a), len(b), len(b[0])
    out = [[ZERO] * p for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for k in range(m):
            c = arow[k]
            if not c:
                continue
            brow = b[k]
            for j in range(p):
                if brow[j]:
                    orow[j] = orow[j] + c * brow[j]
    return out


def mat_inv(a: Sequence[Sequence[CycNum]]) -> list[list[CycNum]]:
    """Dense exact matrix inverse by Gauss-Jordan elimination."""
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise NotInvertible("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inv()
        aug[col] = [inv * c for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [c - f * p for c, p in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
