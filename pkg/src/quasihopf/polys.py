"""Small sparse polynomial ring over Q(zeta) in named commuting variables.

Used by the constraint solvers to carry unknowns through the generic tensor
machinery: monomials are sorted tuples of variable names (with multiplicity),
coefficients are exact CycNums.  Only +, * and substitution are needed.
"""

from __future__ import annotations

from .cyclo import CycNum, ONE, ZERO


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[str, ...], CycNum]):
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def const(cls, c: CycNum) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({(name,): ONE})

    @staticmethod
    def lift(x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, CycNum):
            return Poly.const(x)
        raise TypeError(f"cannot lift {type(x)} to Poly")

    def __add__(self, other) -> Poly:
        other = Poly.lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-Poly.lift(other))

    def __rsub__(self, other) -> Poly:
        return Poly.lift(other) + (-self)

    def __mul__(self, other) -> Poly:
        if isinstance(other, CycNum):
            if not other:
                return Poly({})
            return Poly({m: c * other for m, c in self.terms.items()})
        other = Poly.lift(other)
        out: dict[tuple[str, ...], CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2)) if (m1 and m2) else (m1 or m2)
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        return Poly(out)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Poly, CycNum)):
            return (self - other).terms == {}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> CycNum:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms[()]

    def linear_split(self) -> tuple[CycNum, dict[str, CycNum]]:
        """Return (constant, {var: coeff}) for an affine polynomial."""
        if self.degree() > 1:
            raise ValueError("polynomial is not affine")
        const = ZERO
        lin: dict[str, CycNum] = {}
        for m, c in self.terms.items():
            if m == ():
                const = c
            else:
                lin[m[0]] = c
        return const, lin

    def substitute(self, values: dict[str, object]) -> Poly:
        """Replace variables by CycNum or Poly values."""
        out = Poly({})
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v in m:
                if v in values:
                    term = term * Poly.lift(values[v])
                else:
                    term = term * Poly.var(v)
            out = out + term
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(m) if m else "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__
