"""Polynomial multivector fields and differential forms with exact calculus.

Multivectors are encoded as polynomials in even coordinates and odd frame
symbols: a degree-k field is a dict from strictly increasing index tuples
(i_1 < .. < i_k) to polynomial coefficients.  The bracket of multivectors
is the canonical odd Poisson bracket of that encoding; the four axioms it
must satisfy (vector-field case = Lie derivative, functions bracket to
zero, shifted graded Lie, odd Leibniz over the wedge) are enforced by the
test suite rather than hand-threaded signs.

Everything is computed on honest polynomials -- no degree cap -- because
partial derivatives do not descend to the capped quotient.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .poly import Poly
from .polydiff import PolyDiffOperator


def _merge_sign(left, right):
    """Sign for sorting the concatenation of two increasing tuples.

    Returns (sign, merged) or None when an index repeats (the product
    vanishes).  Odd symbols anticommute, so the sign counts inversions.
    """
    if set(left) & set(right):
        return None
    inv = sum(1 for a in left for b in right if a > b)
    merged = tuple(sorted(left + right))
    return (-1 if inv % 2 else 1, merged)


def _sort_tuple_sign(tup):
    """Sort an arbitrary index tuple, tracking the anticommutation sign."""
    if len(set(tup)) != len(tup):
        return None
    inv = sum(
        1 for a in range(len(tup)) for b in range(a + 1, len(tup)) if tup[a] > tup[b]
    )
    return (-1 if inv % 2 else 1, tuple(sorted(tup)))


def _remove_index(key, i):
    """Odd partial derivative / first-slot insertion on a basis symbol:
    returns (sign, key minus i) or None if i is absent."""
    if i not in key:
        return None
    pos = key.index(i)
    return (-1 if pos % 2 else 1, key[:pos] + key[pos + 1 :])


class _Exterior:
    """Shared shape of multivectors and forms: graded, exterior, sparse."""

    __slots__ = ("nvars", "k", "c")

    def __init__(self, nvars, k, coeffs=None):
        if k < 0:
            raise ValueError("exterior degree must be >= 0")
        self.nvars = nvars
        self.k = k
        self.c = {}
        if coeffs:
            for key, p in coeffs.items():
                key = tuple(key)
                if len(key) != k or list(key) != sorted(set(key)):
                    raise ValueError(f"index tuple {key!r} not strictly increasing")
                if any(not 0 <= i < nvars for i in key):
                    raise ValueError(f"index out of range in {key!r}")
                if not isinstance(p, Poly):
                    p = Poly.const(nvars, p)
                if not p.is_zero():
                    q = self.c.get(key)
                    s = p if q is None else q + p
                    if s.is_zero():
                        self.c.pop(key, None)
                    else:
                        self.c[key] = s

    @classmethod
    def zero(cls, nvars, k):
        return cls(nvars, k)

    def _check(self, other):
        if type(self) is not type(other) or self.nvars != other.nvars or self.k != other.k:
            raise ValueError("mismatched exterior elements")

    def __add__(self, other):
        # a zero element is degree-agnostic: over-contracting produces
        # degree-0 zeros that must still combine with honest degrees
        if self.k != other.k:
            if self.is_zero() and type(self) is type(other) and self.nvars == other.nvars:
                out = type(other)(other.nvars, other.k)
                out.c = dict(other.c)
                return out
            if other.is_zero() and type(self) is type(other) and self.nvars == other.nvars:
                out = type(self)(self.nvars, self.k)
                out.c = dict(self.c)
                return out
        self._check(other)
        out = type(self)(self.nvars, self.k)
        out.c = dict(self.c)
        for key, p in other.c.items():
            q = out.c.get(key)
            s = p if q is None else q + p
            if s.is_zero():
                out.c.pop(key, None)
            else:
                out.c[key] = s
        return out

    def __neg__(self):
        out = type(self)(self.nvars, self.k)
        out.c = {key: -p for key, p in self.c.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        out = type(self)(self.nvars, self.k)
        if isinstance(scalar, Poly):
            for key, p in self.c.items():
                s = scalar * p
                if not s.is_zero():
                    out.c[key] = s
            return out
        scalar = scalar if isinstance(scalar, Fraction) else Fraction(scalar)
        if scalar:
            out.c = {key: scalar * p for key, p in self.c.items()}
        return out

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.nvars == other.nvars and self.k == other.k and self.c == other.c

    def is_zero(self):
        return not self.c

    def wedge(self, other):
        if type(self) is not type(other) or self.nvars != other.nvars:
            raise ValueError("mismatched wedge factors")
        out = type(self)(self.nvars, self.k + other.k)
        for ka, pa in self.c.items():
            for kb, pb in other.c.items():
                ms = _merge_sign(ka, kb)
                if ms is None:
                    continue
                sign, merged = ms
                term = sign * (pa * pb)
                if term.is_zero():
                    continue
                q = out.c.get(merged)
                s = term if q is None else q + term
                if s.is_zero():
                    out.c.pop(merged, None)
                else:
                    out.c[merged] = s
        return out

    def __repr__(self):
        return f"{type(self).__name__}(k={self.k}, {len(self.c)} terms)"


class MultiVector(_Exterior):
    """Sum of c_I(x) * frame_I with I strictly increasing; k = |I|."""

    @classmethod
    def function(cls, poly):
        return cls(poly.n, 0, {(): poly})

    @classmethod
    def coordinate_field(cls, nvars, i):
        return cls(nvars, 1, {(i,): Poly.const(nvars, 1)})


class Form(_Exterior):
    """Sum of c_I(x) * dx^I with I strictly increasing."""

    @classmethod
    def function(cls, poly):
        return cls(poly.n, 0, {(): poly})


def pairing(mv, form):
    """<frame_I, dx^J> = delta_IJ on increasing tuples (determinant rule)."""
    if not isinstance(mv, MultiVector) or not isinstance(form, Form):
        raise TypeError("pairing takes (MultiVector, Form)")
    if mv.nvars != form.nvars or mv.k != form.k:
        raise ValueError("mismatched pairing")
    total = Poly.zero(mv.nvars)
    for key, p in mv.c.items():
        q = form.c.get(key)
        if q is not None:
            total = total + p * q
    return total


# -- Schouten bracket via the odd-symbol encoding ------------------------------

def _half_bracket(A, B):
    """sum_i (odd derivative of A by frame_i) wedge (d/dx_i of B's coefficients)."""
    n = A.nvars
    out = MultiVector(n, A.k + B.k - 1)
    for i in range(n):
        for ka, pa in A.c.items():
            rem = _remove_index(ka, i)
            if rem is None:
                continue
            sa, ka2 = rem
            for kb, pb in B.c.items():
                dpb = pb.diff(i)
                if dpb.is_zero():
                    continue
                ms = _merge_sign(ka2, kb)
                if ms is None:
                    continue
                sign, merged = ms
                term = (sa * sign) * (pa * dpb)
                if term.is_zero():
                    continue
                q = out.c.get(merged)
                s = term if q is None else q + term
                if s.is_zero():
                    out.c.pop(merged, None)
                else:
                    out.c[merged] = s
    return out


def schouten(A, B):
    """The multivector bracket.

    [A, B] = (-1)^(a-1) sum_i (d_frame_i A) ^ (d_x_i B)
                      -  sum_i (d_x_i A) ^ (d_frame_i B)

    with a = exterior degree of A.  The sign placement is pinned by the
    test battery: restriction to vector fields is the Lie derivative,
    functions bracket to zero, the shifted grading makes it a graded Lie
    bracket, and it is an odd derivation of the wedge.  Those four facts
    determine it uniquely among the sign variants of this formula shape.
    """
    if A.nvars != B.nvars:
        raise ValueError("variable counts differ")
    if A.k == 0 and B.k == 0:
        return MultiVector.zero(A.nvars, 0)
    first = _half_bracket(A, B)
    second = _half_bracket(B, A)
    # second term rewritten: sum_i (d_x_i A)^(d_frame_i B) equals
    # (-1)^((a-1)(b-1)) * _half_bracket(B, A) up to the factor-swap sign,
    # so work directly with the two raw halves and calibrated signs.
    sa = -1 if (A.k - 1) % 2 else 1
    # swap (d_ksi B)^(d_x A) -> (d_x A)^(d_ksi B): degrees (B.k-1) and A.k
    sw = -1 if ((B.k - 1) * A.k) % 2 else 1
    return sa * first - sw * second


def jacobiator(pi):
    """(1/2)[pi, pi] for a bivector: the trivector obstructing Jacobi.

    Normalized so that pairing it against df ^ dg ^ dh gives exactly the
    cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}}.
    """
    if pi.k != 2:
        raise ValueError("jacobiator takes a bivector")
    return Fraction(1, 2) * schouten(pi, pi)


def poisson_bracket(pi, f, g):
    """{f, g} = <pi, df ^ dg>."""
    if pi.k != 2:
        raise ValueError("poisson_bracket takes a bivector")
    return pairing(pi, deRham_d(Form.function(f)).wedge(deRham_d(Form.function(g))))


# -- Cartan calculus on forms -----------------------------------------------------

def deRham_d(alpha):
    n = alpha.nvars
    out = Form(n, alpha.k + 1)
    for key, p in alpha.c.items():
        for i in range(n):
            dp = p.diff(i)
            if dp.is_zero():
                continue
            ms = _merge_sign((i,), key)
            if ms is None:
                continue
            sign, merged = ms
            term = sign * dp
            q = out.c.get(merged)
            s = term if q is None else q + term
            if s.is_zero():
                out.c.pop(merged, None)
            else:
                out.c[merged] = s
    return out


def contract(mv, alpha):
    """i_mv with i_{X^Y} = i_X o i_Y and first-slot single insertions."""
    if mv.nvars != alpha.nvars:
        raise ValueError("variable counts differ")
    n = mv.nvars
    if mv.k > alpha.k:
        return Form.zero(n, 0)
    out = Form(n, alpha.k - mv.k)
    for kv, pv in mv.c.items():
        for kf, pf in alpha.c.items():
            sign = 1
            key = kf
            dead = False
            for i in reversed(kv):  # innermost factor inserts first
                rem = _remove_index(key, i)
                if rem is None:
                    dead = True
                    break
                s, key = rem
                sign *= s
            if dead:
                continue
            term = sign * (pv * pf)
            if term.is_zero():
                continue
            q = out.c.get(key)
            s2 = term if q is None else q + term
            if s2.is_zero():
                out.c.pop(key, None)
            else:
                out.c[key] = s2
    return out


def lie_derivative(mv, alpha):
    """L = d i - (-1)^k i d for a degree-k multivector."""
    first = deRham_d(contract(mv, alpha))
    second = contract(mv, deRham_d(alpha))
    if mv.k % 2:
        return first + second
    return first - second


# -- bridges to the operator world -------------------------------------------------

def hkr(mv):
    """The multidifferential operator (a_1..a_k) -> <mv, da_1 ^ .. ^ da_k>.

    Expands the determinant pairing: each increasing tuple I contributes
    sum over permutations sigma of sgn(sigma) * c_I * prod d_{i_sigma(b)}.
    A 0-vector becomes the arity-0 cochain (the function itself).
    """
    n = mv.nvars
    k = mv.k
    if k == 0:
        return PolyDiffOperator.element(mv.c.get((), Poly.zero(n)))
    terms = {}
    for key, p in mv.c.items():
        for perm in permutations(range(k)):
            inv = sum(
                1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b]
            )
            sgn = -1 if inv % 2 else 1
            tkey = []
            for b in range(k):
                e = [0] * n
                e[key[perm[b]]] = 1
                tkey.append(tuple(e))
            tkey = tuple(tkey)
            q = terms.get(tkey)
            s = sgn * p if q is None else q + sgn * p
            if s.is_zero():
                terms.pop(tkey, None)
            else:
                terms[tkey] = s
    op = PolyDiffOperator(n, k)
    op.terms = terms
    return op


def connes_mu(entries):
    """(1/n!) a_0 da_1 ^ .. ^ da_n for a list of polynomial tensor factors."""
    if not entries:
        raise ValueError("need at least the degree-0 entry")
    n = len(entries) - 1
    out = Form.function(entries[0])
    for a in entries[1:]:
        out = out.wedge(deRham_d(Form.function(a)))
    return Fraction(1, factorial(n)) * out


def connes_mu_chain(model, ch):
    """Apply connes_mu to every tensor term of a chain over the capped model.

    Faithful as long as the total degree of each term stays at or below the
    cap (no truncation ever fires on the samples used).
    """
    nv = model.nvars
    total = Form.zero(nv, ch.n) if ch.n else Form.zero(nv, 0)
    for tup, coeff in ch.c.items():
        entries = [model.basis_poly(i) for i in tup]
        total = total + coeff * connes_mu(entries)
    return total


# -- Lie algebroids ------------------------------------------------------------------

class Algebroid:
    """Trivialized algebroid: rank-r frame over polynomial functions.

    anchor[i] is the coefficient list of the vector field rho(e_i);
    brackets[(i, j)] (i < j) lists the frame coefficients of [e_i, e_j].
    """

    def __init__(self, nvars, rank, anchor, brackets=None):
        self.nvars = nvars
        self.rank = rank
        if len(anchor) != rank or any(len(row) != nvars for row in anchor):
            raise ValueError("anchor must be rank x nvars")
        self.anchor = [
            [p if isinstance(p, Poly) else Poly.const(nvars, p) for p in row]
            for row in anchor
        ]
        self.brackets = {}
        if brackets:
            for (i, j), coeffs in brackets.items():
                if not 0 <= i < j < rank:
                    raise ValueError("bracket keys must have i < j")
                if len(coeffs) != rank:
                    raise ValueError("bracket value must list all frame coefficients")
                coeffs = [
                    p if isinstance(p, Poly) else Poly.const(nvars, p) for p in coeffs
                ]
                if any(not p.is_zero() for p in coeffs):
                    self.brackets[(i, j)] = coeffs

    @classmethod
    def tangent(cls, nvars):
        """The tangent algebroid in the coordinate frame."""
        anchor = [
            [Poly.const(nvars, 1 if i == j else 0) for j in range(nvars)]
            for i in range(nvars)
        ]
        return cls(nvars, nvars, anchor)

    def anchor_apply(self, i, f):
        out = Poly.zero(self.nvars)
        for j, p in enumerate(self.anchor[i]):
            if not p.is_zero():
                out = out + p * f.diff(j)
        return out

    def bracket_frame(self, i, j):
        """[e_i, e_j] as a frame coefficient list (antisymmetry built in)."""
        zero = [Poly.zero(self.nvars) for _ in range(self.rank)]
        if i == j:
            return zero
        if i < j:
            return list(self.brackets.get((i, j), zero))
        flipped = self.brackets.get((j, i))
        if flipped is None:
            return zero
        return [-p for p in flipped]

    def check_anchor_is_lie_map(self):
        """rho([e_i,e_j]) = [rho(e_i), rho(e_j)] as vector fields."""
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                br = self.bracket_frame(i, j)
                lhs = [Poly.zero(self.nvars) for _ in range(self.nvars)]
                for l, coeff in enumerate(br):
                    if coeff.is_zero():
                        continue
                    for v in range(self.nvars):
                        lhs[v] = lhs[v] + coeff * self.anchor[l][v]
                for v in range(self.nvars):
                    rhs = Poly.zero(self.nvars)
                    for w in range(self.nvars):
                        rhs = rhs + self.anchor[i][w] * self.anchor[j][v].diff(w)
                        rhs = rhs - self.anchor[j][w] * self.anchor[i][v].diff(w)
                    if lhs[v] != rhs:
                        return False
        return True

    def check_jacobi(self):
        """[[e_i,e_j],e_k] + cyclic = 0, expanding function coefficients
        with the anchor Leibniz rule."""
        def bracket_section(coeffs, k):
            # [sum_l c_l e_l, e_k] = sum_l (c_l [e_l,e_k] - rho(e_k)(c_l) e_l)
            out = [Poly.zero(self.nvars) for _ in range(self.rank)]
            for l, c in enumerate(coeffs):
                if c.is_zero():
                    continue
                for m, b in enumerate(self.bracket_frame(l, k)):
                    if not b.is_zero():
                        out[m] = out[m] + c * b
                out[l] = out[l] - self.anchor_apply(k, c)
            return out

        for i in range(self.rank):
            for j in range(self.rank):
                for k in range(self.rank):
                    total = [Poly.zero(self.nvars) for _ in range(self.rank)]
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        part = bracket_section(self.bracket_frame(a, b), c)
                        for m in range(self.rank):
                            total[m] = total[m] + part[m]
                    if any(not p.is_zero() for p in total):
                        return False
        return True


class EForm(_Exterior):
    """Form on an algebroid frame: indices run over 0..rank-1, coefficients
    are polynomial functions on the base (nvars variables)."""

    # nvars here is the RANK for index bounds; the base variable count rides
    # on the coefficients.  Construct through eform() to keep that straight.


def eform(algebroid, k, coeffs=None):
    f = EForm(algebroid.rank, k)
    if coeffs:
        for key, p in coeffs.items():
            key = tuple(key)
            if len(key) != k or list(key) != sorted(set(key)):
                raise ValueError(f"index tuple {key!r} not strictly increasing")
            if not isinstance(p, Poly):
                p = Poly.const(algebroid.nvars, p)
            if p.n != algebroid.nvars:
                raise ValueError("coefficient variable count mismatch")
            if not p.is_zero():
                f.c[key] = p
    return f


def algebroid_d(E, omega):
    """Frame-wise de Rham differential:

    (d w)(e_{K_0},..,e_{K_m}) = sum_a (-1)^a rho(e_{K_a}) w(.. no a ..)
                              + sum_{a<b} (-1)^(a+b) w([e_{K_a},e_{K_b}], ..)
    """
    m = omega.k
    out = EForm(E.rank, m + 1)
    for K in combinations(range(E.rank), m + 1):
        val = Poly.zero(E.nvars)
        for a in range(m + 1):
            rest = K[:a] + K[a + 1 :]
            c = omega.c.get(rest)
            if c is not None:
                term = E.anchor_apply(K[a], c)
                val = val + term if a % 2 == 0 else val - term
        for a in range(m + 1):
            for b in range(a + 1, m + 1):
                br = E.bracket_frame(K[a], K[b])
                rest = tuple(x for t, x in enumerate(K) if t not in (a, b))
                for l, coeff in enumerate(br):
                    if coeff.is_zero():
                        continue
                    srt = _sort_tuple_sign((l,) + rest)
                    if srt is None:
                        continue
                    ssign, stup = srt
                    c = omega.c.get(stup)
                    if c is None:
                        continue
                    sign = -1 if (a + b) % 2 else 1
                    val = val + (sign * ssign) * (coeff * c)
        if not val.is_zero():
            out.c[K] = val
    return out
