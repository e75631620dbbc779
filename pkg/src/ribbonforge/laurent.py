"""Sparse one-variable Laurent polynomials with integer coefficients.

The variable is called A throughout.  Exponents may be negative; the
representation is a dict {exponent: coefficient} holding only nonzero
coefficients, so equality is exact structural equality.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPolynomial:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        d: dict[int, int] = {}
        for exp, c in items:
            if c:
                d[exp] = d.get(exp, 0) + c
                if not d[exp]:
                    del d[exp]
        self._coeffs = d

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPolynomial":
        return LaurentPolynomial()

    @staticmethod
    def one() -> "LaurentPolynomial":
        return LaurentPolynomial({0: 1})

    @staticmethod
    def term(coeff: int, exp: int) -> "LaurentPolynomial":
        """coeff * A**exp"""
        return LaurentPolynomial({exp: coeff})

    # -- inspection ----------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def coeff(self, exp: int) -> int:
        return self._coeffs.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no degree")
        return min(self._coeffs)

    @property
    def max_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no degree")
        return max(self._coeffs)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        d = dict(self._coeffs)
        for exp, c in other._coeffs.items():
            d[exp] = d.get(exp, 0) + c
            if not d[exp]:
                del d[exp]
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = d
        return out

    def __neg__(self) -> "LaurentPolynomial":
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = {exp: -c for exp, c in self._coeffs.items()}
        return out

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        d: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                d[e] = d.get(e, 0) + c1 * c2
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = {e: c for e, c in d.items() if c}
        return out

    def scaled(self, k: int) -> "LaurentPolynomial":
        if not k:
            return LaurentPolynomial.zero()
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = {exp: k * c for exp, c in self._coeffs.items()}
        return out

    def shifted(self, by: int) -> "LaurentPolynomial":
        """Multiply by A**by."""
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = {exp + by: c for exp, c in self._coeffs.items()}
        return out

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if n < 0:
            raise ValueError("negative powers of a general polynomial are not defined")
        result = LaurentPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def div_exact(self, divisor: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact long division; raises ArithmeticError unless it divides evenly."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero()
        lead_exp = divisor.max_exp
        lead_coeff = divisor._coeffs[lead_exp]
        # Exponents are unbounded below, so bound the quotient up front:
        # an exact quotient cannot reach below min_exp(self) - min_exp(divisor).
        floor_exp = self.min_exp - divisor.min_exp
        remainder = self
        quotient: dict[int, int] = {}
        while not remainder.is_zero():
            e = remainder.max_exp
            c = remainder._coeffs[e]
            if c % lead_coeff or e - lead_exp < floor_exp:
                raise ArithmeticError("polynomial division is not exact")
            q = c // lead_coeff
            quotient[e - lead_exp] = q
            remainder = remainder - divisor.shifted(e - lead_exp).scaled(q)
        return LaurentPolynomial(quotient)

    def mirror(self) -> "LaurentPolynomial":
        """The image under A -> A**-1."""
        out = LaurentPolynomial.__new__(LaurentPolynomial)
        out._coeffs = {-exp: c for exp, c in self._coeffs.items()}
        return out

    # -- equality / display -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self._coeffs!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for exp in sorted(self._coeffs, reverse=True):
            c = self._coeffs[exp]
            if exp == 0:
                body = str(abs(c))
            else:
                var = "A" if exp == 1 else f"A^{exp}"
                body = var if abs(c) == 1 else f"{abs(c)}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


A = LaurentPolynomial.term(1, 1)
A_INV = LaurentPolynomial.term(1, -1)

#: The loop value delta = -A^2 - A^-2 of the bracket state sum.
LOOP = LaurentPolynomial({2: -1, -2: -1})
