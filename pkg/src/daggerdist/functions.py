"""Polynomial functions on the coordinate chart of a p-valued group.

A function is an exact polynomial in the chart coordinates.  The group law
acts through substitution: comultiplication sends f(Z) to f(F(X, Y)) in
doubled variables, inversion pulls back along I, and right translation by a
point fixes the second block of the comultiplication.  The pairing with a
distribution reads the moments against the monomial coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .distributions import Distribution
from .groups import PValuedGroup
from .padic import Rational
from .series import DimensionMismatch, NormValue, TruncatedSeries


class DaggerFunction:
    """An exact polynomial function on the chart of ``group``."""

    __slots__ = ("group", "body")

    def __init__(self, group: PValuedGroup, body: TruncatedSeries):
        if body.dim != group.d:
            raise DimensionMismatch(
                f"body has {body.dim} variables, group chart has {group.d}"
            )
        if not body.exact:
            raise ValueError("function bodies must be exact polynomials")
        self.group = group
        self.body = body

    @classmethod
    def monomial(cls, G: PValuedGroup, alpha: Sequence[int], coeff: Rational = 1) -> "DaggerFunction":
        alpha = tuple(int(a) for a in alpha)
        return cls(G, TruncatedSeries(G.d, max(sum(alpha), 0), {alpha: coeff}))

    @classmethod
    def coordinate(cls, G: PValuedGroup, i: int) -> "DaggerFunction":
        return cls(G, TruncatedSeries.variable(i, G.d, 1))

    def eval_at(self, x: Sequence) -> Fraction:
        return self.body.evaluate(self.group.check_point(x))

    def __add__(self, other: "DaggerFunction") -> "DaggerFunction":
        cap = max(self.body.cap, other.body.cap)
        return DaggerFunction(self.group, self.body.with_cap(cap) + other.body.with_cap(cap))

    def __mul__(self, other: "DaggerFunction") -> "DaggerFunction":
        cap = self.body.degree() + other.body.degree()
        cap = max(cap, 0)
        return DaggerFunction(self.group, self.body.with_cap(cap) * other.body.with_cap(cap))

    def scale(self, c: Rational) -> "DaggerFunction":
        return DaggerFunction(self.group, self.body.scale(c))

    def comul(self, cap: Optional[int] = None) -> TruncatedSeries:
        """f(F(X, Y)) in 2d variables; exact when the cap is generous enough."""
        G = self.group
        deg = max(self.body.degree(), 0)
        if cap is None:
            cap = max(deg * G.degmax(), 1)
        return self.body.substitute([Fi.with_cap(cap) for Fi in G.F], cap=cap)

    def inv_pullback(self, cap: Optional[int] = None) -> "DaggerFunction":
        """f(I(Z)): the pullback along group inversion."""
        G = self.group
        deg = max(self.body.degree(), 0)
        if cap is None:
            cap = max(deg * G.degmax(), 1)
        return DaggerFunction(G, self.body.substitute([Ii.with_cap(cap) for Ii in G.I], cap=cap))

    def right_translate(self, h: Sequence) -> "DaggerFunction":
        """(R_h f)(x) = f(x h), by fixing the second block of the comultiplication."""
        G = self.group
        h = G.check_point(h)
        two = self.comul()
        fixed = {G.d + i: h[i] for i in range(G.d)}
        return DaggerFunction(G, two.partial_evaluate(fixed))

    def gauss_norm(self, rho: Sequence[Rational]) -> NormValue:
        return self.body.gauss_norm(rho, self.group.p)

    def __eq__(self, other):
        if not isinstance(other, DaggerFunction):
            return NotImplemented
        return self.group is other.group and self.body == other.body

    def __repr__(self):
        return f"DaggerFunction({self.body!r})"


def pair(lam: Distribution, f: DaggerFunction) -> Fraction:
    """lambda(f) = sum_beta c_beta * mu_beta over the support of f."""
    if f.group is not lam.group:
        raise ValueError("function and distribution live on different groups")
    total = Fraction(0)
    for beta, c in f.body.terms.items():
        total += c * lam.moment(beta)
    return total
