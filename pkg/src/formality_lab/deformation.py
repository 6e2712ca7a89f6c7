"""Star products as truncated bidifferential series.

A product is the ordinary polynomial multiplication plus a finite list of
corrections P_1..P_nt, each an arity-2 polynomial-coefficient operator, all
vanishing when either argument is the constant 1.  Associativity is checked
with exact arithmetic on untruncated polynomials, order by order in the
deformation parameter: the corrections live in the operator complex, so the
order-m associativity defect is literally the order-m flatness residual of
the series viewed as a degree-1 element there.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial

from . import polydiff as pd
from .algebras import FunctionModel
from .cartan import MultiVector, hkr, poisson_bracket
from .core.series import FormalSeries
from .linfty import MCElement
from .poly import Poly, monomials_upto


def _identity_operator(nvars):
    z = (0,) * nvars
    return pd.PolyDiffOperator(nvars, 1, {(z,): Poly.const(nvars, 1)})


def _vanishes_on_unit(op):
    """True when every term differentiates every slot at least once."""
    z = (0,) * op.nvars
    return all(z not in key for key in op.terms)


class StarProduct:
    """Multiplication plus corrections ops[m], 1 <= m <= nt."""

    def __init__(self, model, ops, nt):
        self.model = model
        self.nt = nt
        self.ops = {}
        for m, op in ops.items():
            if not 1 <= m <= nt:
                if m > nt:
                    continue
                raise ValueError("correction orders start at 1")
            if op.nvars != model.nvars or op.arity != 2:
                raise ValueError("corrections must be arity-2 on the base variables")
            if not _vanishes_on_unit(op):
                raise ValueError(f"order-{m} correction does not vanish on the unit")
            if op.terms:
                self.ops[m] = op
        self.unit_normalized = True

    def correction(self, m):
        return self.ops.get(m)

    def star(self, f, g):
        """f*g as {t-order: polynomial}, zero orders omitted."""
        out = {}
        fg = f * g
        if not fg.is_zero():
            out[0] = fg
        for m, op in self.ops.items():
            v = op.apply([f, g])
            if not v.is_zero():
                out[m] = v
        return out

    def star_series(self, a, b):
        """Convolution of two {order: polynomial} dictionaries."""
        out = {}
        for ka, fa in a.items():
            for kb, fb in b.items():
                base = ka + kb
                if base > self.nt:
                    continue
                prod0 = fa * fb
                if not prod0.is_zero():
                    cur = out.get(base)
                    out[base] = prod0 if cur is None else cur + prod0
                for m, op in self.ops.items():
                    k = base + m
                    if k > self.nt:
                        continue
                    v = op.apply([fa, fb])
                    if v.is_zero():
                        continue
                    cur = out.get(k)
                    out[k] = v if cur is None else cur + v
        return {k: v for k, v in out.items() if not v.is_zero()}


def moyal(pi, nt, model=None):
    """Exponential-type product of a constant antisymmetric matrix.

    ops[m](f,g) = (1/m!) sum pi^{i1 j1}..pi^{im jm}
                  d_{i1..im} f * d_{j1..jm} g.
    """
    n = len(pi)
    for row in pi:
        if len(row) != n:
            raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            if Fraction(pi[i][j]) != -Fraction(pi[j][i]):
                raise ValueError("matrix must be antisymmetric")
    if model is None:
        model = FunctionModel(n, 4)
    entries = [
        (i, j, Fraction(pi[i][j]))
        for i in range(n)
        for j in range(n)
        if pi[i][j]
    ]
    ops = {}
    for m in range(1, nt + 1):
        op = pd.PolyDiffOperator(n, 2)
        scale = Fraction(1, factorial(m))
        for combo in product(entries, repeat=m):
            alpha = [0] * n
            beta = [0] * n
            coeff = scale
            for i, j, v in combo:
                alpha[i] += 1
                beta[j] += 1
                coeff *= v
            key = (tuple(alpha), tuple(beta))
            cur = op.terms.get(key)
            tot = (cur.constant_term() if cur else Fraction(0)) + coeff
            if tot:
                op.terms[key] = Poly.const(n, tot)
            else:
                op.terms.pop(key, None)
        if op.terms:
            ops[m] = op
    return StarProduct(model, ops, nt)


class StarReport:
    def __init__(self, checked, witnesses):
        self.checked = checked
        self.witnesses = witnesses

    @property
    def ok(self):
        return not self.witnesses

    def __repr__(self):
        state = "pass" if self.ok else f"{len(self.witnesses)} violations"
        return f"StarReport({state}, {self.checked} checked)"


def check_associativity(s, degree=None):
    """(f*g)*h - f*(g*h) on all monomial triples up to ``degree``.

    Witnesses are (exponent triple, t-order, defect polynomial).
    """
    if degree is None:
        degree = s.model.cap
    n = s.model.nvars
    monos = monomials_upto(n, degree)
    witnesses = []
    checked = 0
    for ea in monos:
        fa = {0: Poly.monomial(n, ea)}
        for eb in monos:
            fb = Poly.monomial(n, eb)
            ab = s.star_series(fa, {0: fb})
            for ec in monos:
                fc = {0: Poly.monomial(n, ec)}
                bc = s.star_series({0: fb}, fc)
                lhs = s.star_series(ab, fc)
                rhs = s.star_series(fa, bc)
                checked += 1
                for k in sorted(set(lhs) | set(rhs)):
                    d = lhs.get(k, Poly.zero(n)) - rhs.get(k, Poly.zero(n))
                    if not d.is_zero():
                        witnesses.append(((ea, eb, ec), k, d))
    return StarReport(checked, witnesses)


def _opposite(op):
    out = pd.PolyDiffOperator(op.nvars, 2)
    out.terms = {(b, a): p for (a, b), p in op.terms.items()}
    return out


def leading_poisson(s):
    """Reconstruct the first-order antisymmetric part as a bivector.

    The commutator bracket {f,g} = P_1(f,g) - P_1(g,f) is read off on
    coordinate pairs; the reconstruction must reproduce the full
    antisymmetrization identically, otherwise the product's first-order
    part has higher-derivative antisymmetric terms and no bivector
    describes it.
    """
    n = s.model.nvars
    P1 = s.correction(1) or pd.PolyDiffOperator.zero(n, 2)
    anti = P1 - _opposite(P1)
    out = MultiVector(n, 2)
    for i in range(n):
        for j in range(i + 1, n):
            cij = anti.apply([Poly.var(n, i), Poly.var(n, j)])
            if not cij.is_zero():
                out.c[(i, j)] = cij
    if hkr(out) != anti:
        raise ValueError("antisymmetrized part is not of bivector type")
    return out


class Equivalence:
    """Series of arity-1 operators; identity at order zero, unit-preserving."""

    def __init__(self, nvars, ops, nt):
        self.nvars = nvars
        self.nt = nt
        self.ops = {}
        for m, op in ops.items():
            if not 1 <= m <= nt:
                if m > nt:
                    continue
                raise ValueError("correction orders start at 1")
            if op.nvars != nvars or op.arity != 1:
                raise ValueError("equivalences are arity-1 on the base variables")
            if not _vanishes_on_unit(op):
                raise ValueError(f"order-{m} term does not kill the unit")
            if op.terms:
                self.ops[m] = op

    def order(self, m):
        if m == 0:
            return _identity_operator(self.nvars)
        return self.ops.get(m)

    def compose(self, other):
        if self.nvars != other.nvars or self.nt != other.nt:
            raise ValueError("shapes differ")
        ops = {}
        for m in range(1, self.nt + 1):
            acc = None
            for i in range(m + 1):
                a = self.order(i)
                b = other.order(m - i)
                if a is None or b is None:
                    continue
                term = a.insert(b, 0)
                acc = term if acc is None else acc + term
            if acc is not None and acc.terms:
                ops[m] = acc
        return Equivalence(self.nvars, ops, self.nt)

    def inverse(self):
        inv = {0: _identity_operator(self.nvars)}
        for m in range(1, self.nt + 1):
            acc = None
            for i in range(1, m + 1):
                a = self.ops.get(i)
                b = inv.get(m - i)
                if a is None or b is None or not b.terms:
                    continue
                term = a.insert(b, 0)
                acc = term if acc is None else acc + term
            inv[m] = -acc if acc is not None else pd.PolyDiffOperator.zero(self.nvars, 1)
        return Equivalence(self.nvars, {m: op for m, op in inv.items() if m >= 1}, self.nt)

    def apply_poly(self, f):
        """T(f) as {order: polynomial}."""
        out = {0: f}
        for m, op in self.ops.items():
            v = op.apply([f])
            if not v.is_zero():
                out[m] = v
        return out


def apply_equivalence(T, s):
    """The conjugated product (a,b) -> T(inv(a) * inv(b)), order by order."""
    if T.nvars != s.model.nvars:
        raise ValueError("variable counts differ")
    nt = s.nt
    if T.nt != nt:
        raise ValueError("order caps differ")
    inv = T.inverse()

    def star_order(j):
        if j == 0:
            return pd.PolyDiffOperator.multiplication(s.model.nvars)
        return s.correction(j)

    ops = {}
    for m in range(1, nt + 1):
        acc = None
        for i in range(m + 1):
            Ti = T.order(i)
            if Ti is None:
                continue
            for j in range(m - i + 1):
                Pj = star_order(j)
                if Pj is None:
                    continue
                for k in range(m - i - j + 1):
                    Ik = inv.order(k)
                    Il = inv.order(m - i - j - k)
                    if Ik is None or Il is None or not Ik.terms or not Il.terms:
                        continue
                    term = Ti.insert(Pj.insert(Ik, 0).insert(Il, 1), 0)
                    acc = term if acc is None else acc + term
        if acc is not None and acc.terms:
            ops[m] = acc
    return StarProduct(s.model, ops, nt)


def star_to_mc(s):
    """The correction series as a degree-1 element of the operator complex."""
    return MCElement(dict(s.ops), s.nt)


def mc_to_star(mc, model):
    """Inverse packaging; round-trips with star_to_mc."""
    return StarProduct(model, dict(mc.parts), mc.nt)


class TraceCandidate:
    """Finite-order distribution at the origin with series coefficients:
    tau(f) = sum_alpha c_alpha * (d^alpha f)(0)."""

    def __init__(self, nvars, coeffs, nt):
        self.nvars = nvars
        self.nt = nt
        self.coeffs = {}
        for alpha, c in coeffs.items():
            alpha = tuple(alpha)
            if len(alpha) != nvars or any(a < 0 for a in alpha):
                raise ValueError(f"bad jet order {alpha!r}")
            if not isinstance(c, FormalSeries):
                c = FormalSeries.scalar(c, nt)
            if c.nt != nt or (c.ulo, c.uhi) != (0, 0):
                raise ValueError("coefficient caps differ")
            if not c.is_zero():
                self.coeffs[alpha] = c

    def evaluate(self, f):
        out = FormalSeries.zero(self.nt)
        for alpha, c in self.coeffs.items():
            v = f.coeff(alpha)
            if v:
                weight = v
                for a in alpha:
                    weight *= factorial(a)
                out = out + weight * c
        return out

    def evaluate_orders(self, parts):
        out = FormalSeries.zero(self.nt)
        for m, f in parts.items():
            v = self.evaluate(f)
            if not v.is_zero():
                out = out + FormalSeries.monomial(m, 0, self.nt) * v
        return out


def trace_defect(tau, s, degree=None):
    """tau(f*g - g*f) over monomial pairs; witnesses carry the series value."""
    if degree is None:
        degree = s.model.cap
    n = s.model.nvars
    monos = monomials_upto(n, degree)
    witnesses = []
    checked = 0
    for ea in monos:
        fa = Poly.monomial(n, ea)
        for eb in monos:
            fb = Poly.monomial(n, eb)
            fwd = s.star(fa, fb)
            bwd = s.star(fb, fa)
            comm = {}
            for k in set(fwd) | set(bwd):
                d = fwd.get(k, Poly.zero(n)) - bwd.get(k, Poly.zero(n))
                if not d.is_zero():
                    comm[k] = d
            val = tau.evaluate_orders(comm)
            checked += 1
            if not val.is_zero():
                witnesses.append(((ea, eb), val))
    return StarReport(checked, witnesses)


def poisson_defect(tau, pi0, degree=4):
    """tau({f,g}) over monomial pairs for a bivector's bracket."""
    n = pi0.nvars
    monos = monomials_upto(n, degree)
    witnesses = []
    checked = 0
    for ea in monos:
        fa = Poly.monomial(n, ea)
        for eb in monos:
            fb = Poly.monomial(n, eb)
            val = tau.evaluate(poisson_bracket(pi0, fa, fb))
            checked += 1
            if not val.is_zero():
                witnesses.append(((ea, eb), val))
    return StarReport(checked, witnesses)
