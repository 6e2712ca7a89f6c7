"""Sparse multivariate polynomials over the rationals.

Terms are a dict from exponent tuples to Fractions with no stored zeros.
Nothing here ever truncates: the degree-capped quotient lives in
``algebras.FunctionModel``, which wraps these with a truncating product.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian


def _frac(v):
    return v if isinstance(v, Fraction) else Fraction(v)


class Poly:
    __slots__ = ("n", "c")

    def __init__(self, n, coeffs=None):
        self.n = n
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _frac(v)
                if v == 0:
                    continue
                e = tuple(e)
                if len(e) != n or any(k < 0 for k in e):
                    raise ValueError(f"bad exponent tuple {e!r} for {n} variables")
                self.c[e] = self.c.get(e, Fraction(0)) + v
            self.c = {e: v for e, v in self.c.items() if v}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def const(cls, n, v):
        return cls(n, {(0,) * n: _frac(v)})

    @classmethod
    def var(cls, n, i):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, n, exps, coeff=1):
        return cls(n, {tuple(exps): _frac(coeff)})

    # -- predicates & access ----------------------------------------------
    def is_zero(self):
        return not self.c

    def total_degree(self):
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.c), default=-1)

    def constant_term(self):
        return self.c.get((0,) * self.n, Fraction(0))

    def coeff(self, exps):
        return self.c.get(tuple(exps), Fraction(0))

    def terms_sorted(self):
        return sorted(self.c.items())

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            raise ValueError("variable counts differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, Fraction(0)) + v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
        p = Poly.zero(self.n)
        p.c = out
        return p

    def __neg__(self):
        p = Poly.zero(self.n)
        p.c = {e: -v for e, v in self.c.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        v = _frac(scalar)
        p = Poly.zero(self.n)
        if v:
            p.c = {e: v * w for e, w in self.c.items()}
        return p

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        self._check(other)
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                w = out.get(e, Fraction(0)) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        p = Poly.zero(self.n)
        p.c = out
        return p

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, frozenset(self.c.items())))

    # -- calculus -----------------------------------------------------------
    def diff(self, i):
        out = {}
        for e, v in self.c.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = v * e[i]
        p = Poly.zero(self.n)
        p.c = out
        return p

    def diff_multi(self, alpha):
        p = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                p = p.diff(i)
                if p.is_zero():
                    return p
        return p

    def truncate(self, degree_cap):
        """Drop all terms of total degree above the cap."""
        p = Poly.zero(self.n)
        p.c = {e: v for e, v in self.c.items() if sum(e) <= degree_cap}
        return p

    def eval(self, point):
        if len(point) != self.n:
            raise ValueError("point dimension mismatch")
        point = [_frac(x) for x in point]
        total = Fraction(0)
        for e, v in self.c.items():
            w = v
            for x, k in zip(point, e):
                for _ in range(k):
                    w *= x
            total += w
        return total

    def __repr__(self):
        if not self.c:
            return "0"
        bits = []
        for e, v in self.terms_sorted():
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            bits.append(f"{v}" + ("*" + mono if mono else ""))
        return " + ".join(bits)


def monomials_upto(n, cap):
    """All exponent tuples in n variables of total degree <= cap, graded-lex."""
    out = []
    for d in range(cap + 1):
        out.extend(e for e in _cartesian(range(d + 1), repeat=n) if sum(e) == d)
    return out
