"""Cochains and chains of a finite-dimensional algebra, as lookup tables.

Everything in this module is tabulated on basis tuples of a
``StructureAlgebra``, so all the operator identities (square-zero
differentials, bracket compatibilities, the chain-level action of
cochains) hold exactly -- including on degree-capped polynomial models,
which are honest finite-dimensional algebras.

Degrees: an arity-n cochain has bracket degree n-1.  Chains of length
n+1 (one unreduced slot plus n reducible ones) sit in homological
degree n.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian

from .core.basis import vadd_into
from .core.linalg import rank_kernel


class Cochain:
    """Multilinear map A^arity -> A given by table[(i_1..i_n)] = output vec."""

    __slots__ = ("algebra", "arity", "table")

    def __init__(self, algebra, arity, table=None):
        if arity < 0:
            raise ValueError("arity must be >= 0")
        self.algebra = algebra
        self.arity = arity
        self.table = {}
        if table:
            dim = algebra.dim
            for tup, v in table.items():
                tup = tuple(tup)
                if len(tup) != arity or any(not 0 <= i < dim for i in tup):
                    raise ValueError(f"bad input tuple {tup!r}")
                vv = {k: Fraction(c) for k, c in v.items() if Fraction(c) != 0}
                if vv:
                    acc = self.table.setdefault(tup, {})
                    vadd_into(acc, vv)
                    if not acc:
                        del self.table[tup]

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, algebra, arity):
        return cls(algebra, arity)

    @classmethod
    def multiplication(cls, algebra):
        c = cls(algebra, 2)
        for key, v in algebra.table.items():
            if v:
                c.table[key] = dict(v)
        return c

    @classmethod
    def identity(cls, algebra):
        c = cls(algebra, 1)
        for i in range(algebra.dim):
            c.table[(i,)] = {i: Fraction(1)}
        return c

    @classmethod
    def element(cls, algebra, vector):
        c = cls(algebra, 0)
        vv = {k: Fraction(v) for k, v in vector.items() if Fraction(v) != 0}
        if vv:
            c.table[()] = vv
        return c

    @property
    def lie_degree(self):
        return self.arity - 1

    # -- vector space ---------------------------------------------------------
    def _check(self, other):
        if self.algebra is not other.algebra or self.arity != other.arity:
            raise ValueError("cochain shapes differ")

    def __add__(self, other):
        self._check(other)
        out = Cochain(self.algebra, self.arity)
        out.table = {t: dict(v) for t, v in self.table.items()}
        for t, v in other.table.items():
            acc = out.table.setdefault(t, {})
            vadd_into(acc, v)
            if not acc:
                del out.table[t]
        return out

    def __neg__(self):
        out = Cochain(self.algebra, self.arity)
        out.table = {t: {k: -c for k, c in v.items()} for t, v in self.table.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        scalar = scalar if isinstance(scalar, Fraction) else Fraction(scalar)
        out = Cochain(self.algebra, self.arity)
        if scalar:
            out.table = {
                t: {k: scalar * c for k, c in v.items()} for t, v in self.table.items()
            }
        return out

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.arity == other.arity
            and self.table == other.table
        )

    def is_zero(self):
        return not self.table

    def __repr__(self):
        return f"Cochain(arity={self.arity}, {len(self.table)} entries)"

    # -- evaluation -------------------------------------------------------------
    def apply(self, args):
        if len(args) != self.arity:
            raise ValueError("argument count mismatch")
        out = {}
        for tup, val in self.table.items():
            c = Fraction(1)
            for i, a in zip(tup, args):
                c *= a.get(i, Fraction(0))
                if not c:
                    break
            if c:
                vadd_into(out, val, c)
        return out

    # -- reduced (vanishing on the unit) subspace ---------------------------------
    def is_reduced(self):
        ui = self.algebra.unit_index
        if ui is None:
            raise ValueError("need a unit-adapted basis")
        return all(ui not in tup for tup in self.table)

    def reduce(self):
        """Restrict inputs to the complement of the unit: the table entries
        touching the unit index are dropped."""
        ui = self.algebra.unit_index
        if ui is None:
            raise ValueError("need a unit-adapted basis")
        out = Cochain(self.algebra, self.arity)
        out.table = {
            t: dict(v) for t, v in self.table.items() if ui not in t
        }
        return out

    # -- insertion --------------------------------------------------------------
    def insert(self, other, pos):
        """Feed ``other``'s output into argument slot ``pos``."""
        if self.algebra is not other.algebra:
            raise ValueError("different algebras")
        if not 0 <= pos < self.arity:
            raise ValueError("insertion slot out of range")
        n, m = self.arity, other.arity
        out = Cochain(self.algebra, n + m - 1)
        for dtup, dvec in self.table.items():
            k = dtup[pos]
            for etup, evec in other.table.items():
                c = evec.get(k)
                if not c:
                    continue
                key = dtup[:pos] + etup + dtup[pos + 1 :]
                acc = out.table.setdefault(key, {})
                vadd_into(acc, dvec, c)
                if not acc:
                    del out.table[key]
        return out


def circle(D, E):
    """Insertion sum with alternating signs (-1)^((arity(E)-1)*j)."""
    n, m = D.arity, E.arity
    if n + m == 0:
        # no slots to insert into and the honest arity would be negative:
        # report an arity-0 zero sentinel
        return Cochain.zero(D.algebra, 0)
    out = Cochain.zero(D.algebra, n + m - 1)
    for j in range(n):
        term = D.insert(E, j)
        if ((m - 1) * j) % 2:
            term = -term
        out = out + term
    return out


def bracket(D, E):
    n, m = D.arity, E.arity
    second = circle(E, D)
    if ((n - 1) * (m - 1)) % 2:
        return circle(D, E) + second
    return circle(D, E) - second


def cup(D, E):
    """(D cup E)(..) = (-1)^(nm) D(first n) * E(last m)."""
    if D.algebra is not E.algebra:
        raise ValueError("different algebras")
    A = D.algebra
    n, m = D.arity, E.arity
    sign = -1 if (n * m) % 2 else 1
    out = Cochain(A, n + m)
    for dtup, dvec in D.table.items():
        for etup, evec in E.table.items():
            prod = A.mul(dvec, evec)
            if not prod:
                continue
            key = dtup + etup
            acc = out.table.setdefault(key, {})
            vadd_into(acc, prod, sign)
            if not acc:
                del out.table[key]
    return out


def delta(D):
    """Coboundary: bracket with the product cochain."""
    return bracket(Cochain.multiplication(D.algebra), D)


def basis_cochains(algebra, arity, reduced=False):
    """Elementary cochains e_{tuple, output}, in a deterministic order."""
    if reduced:
        slots = algebra.bar_indices()
    else:
        slots = list(range(algebra.dim))
    out = []
    for tup in _cartesian(slots, repeat=arity):
        for k in range(algebra.dim):
            c = Cochain(algebra, arity)
            c.table[tup] = {k: Fraction(1)}
            out.append(c)
    return out


def from_polydiff(op, model, algebra):
    """Tabulate a polydifferential operator on the degree-capped model.

    ``model`` is the FunctionModel whose monomials index ``algebra``
    (see ``algebras.jet_algebra``); evaluation truncates at the cap.
    """
    C = Cochain.zero(algebra, op.arity)
    for tup in _cartesian(range(model.dim), repeat=op.arity):
        args = [model.basis_poly(i) for i in tup]
        val = op.apply(args).truncate(model.cap)
        v = model.poly_to_vec(val)
        if v:
            C.table[tup] = v
    return C


# -- chains ---------------------------------------------------------------------

class Chain:
    """Element of A^(tensor n+1): c[(i_0..i_n)] = coefficient."""

    __slots__ = ("algebra", "n", "c")

    def __init__(self, algebra, n, coeffs=None):
        if n < 0:
            raise ValueError("chain degree must be >= 0")
        self.algebra = algebra
        self.n = n
        self.c = {}
        if coeffs:
            dim = algebra.dim
            for tup, v in coeffs.items():
                tup = tuple(tup)
                if len(tup) != n + 1 or any(not 0 <= i < dim for i in tup):
                    raise ValueError(f"bad chain tuple {tup!r}")
                v = Fraction(v)
                w = self.c.get(tup, Fraction(0)) + v
                if w:
                    self.c[tup] = w
                else:
                    self.c.pop(tup, None)

    @classmethod
    def elementary(cls, algebra, tup):
        return cls(algebra, len(tup) - 1, {tuple(tup): Fraction(1)})

    def _check(self, other):
        if self.algebra is not other.algebra or self.n != other.n:
            raise ValueError("chain shapes differ")

    def __add__(self, other):
        self._check(other)
        out = Chain(self.algebra, self.n)
        out.c = dict(self.c)
        for t, v in other.c.items():
            w = out.c.get(t, Fraction(0)) + v
            if w:
                out.c[t] = w
            else:
                out.c.pop(t, None)
        return out

    def __neg__(self):
        out = Chain(self.algebra, self.n)
        out.c = {t: -v for t, v in self.c.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        scalar = scalar if isinstance(scalar, Fraction) else Fraction(scalar)
        out = Chain(self.algebra, self.n)
        if scalar:
            out.c = {t: scalar * v for t, v in self.c.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.algebra is other.algebra and self.n == other.n and self.c == other.c

    def is_zero(self):
        return not self.c

    def normalized(self):
        """Kill terms with the unit in a reducible slot (positions 1..n)."""
        ui = self.algebra.unit_index
        if ui is None:
            raise ValueError("need a unit-adapted basis")
        out = Chain(self.algebra, self.n)
        out.c = {t: v for t, v in self.c.items() if ui not in t[1:]}
        return out

    def __repr__(self):
        return f"Chain(n={self.n}, {len(self.c)} terms)"


def chain_b(ch):
    """Tensor-contraction boundary: adjacent products plus the wrap term."""
    A, n = ch.algebra, ch.n
    if n == 0:
        return Chain(A, 0)  # nothing below degree zero
    out = Chain(A, n - 1)
    for tup, coeff in ch.c.items():
        for i in range(n):
            prod = A.table.get((tup[i], tup[i + 1]))
            if not prod:
                continue
            sign = -1 if i % 2 else 1
            key_head, key_tail = tup[:i], tup[i + 2 :]
            for k, v in prod.items():
                key = key_head + (k,) + key_tail
                w = out.c.get(key, Fraction(0)) + sign * coeff * v
                if w:
                    out.c[key] = w
                else:
                    out.c.pop(key, None)
        prod = A.table.get((tup[n], tup[0]))
        if prod:
            sign = -1 if n % 2 else 1
            tail = tup[1:n]
            for k, v in prod.items():
                key = (k,) + tail
                w = out.c.get(key, Fraction(0)) + sign * coeff * v
                if w:
                    out.c[key] = w
                else:
                    out.c.pop(key, None)
    return out


def connes_B(ch):
    """Degree-raising cyclic differential on the reduced complex.

    B(a_0 .. a_n) = sum_i (-1)^(n i) 1 (x) a_i .. a_n (x) a_0 .. a_{i-1},
    with terms whose reducible slots hit the unit projected away.
    """
    A, n = ch.algebra, ch.n
    ui = A.unit_index
    if ui is None:
        raise ValueError("need a unit-adapted basis")
    out = Chain(A, n + 1)
    for tup, coeff in ch.c.items():
        for i in range(n + 1):
            rotated = tup[i:] + tup[:i]
            if ui in rotated:
                continue
            sign = -1 if (n * i) % 2 else 1
            key = (ui,) + rotated
            w = out.c.get(key, Fraction(0)) + sign * coeff
            if w:
                out.c[key] = w
            else:
                out.c.pop(key, None)
    return out


def lie_action(D, ch):
    """Chain-level action of an arity-d cochain, lowering degree by d-1.

    Interior terms slide D across the reducible slots; wrap terms feed the
    slot-0 entry into D and put the output back into slot 0:

        sum_{i=0}^{n-d}  (-1)^((d-1)(i+1)) a_0 .. a_i (x) D(a_{i+1}..a_{i+d}) .. a_n
      + sum_{j=n-d+1}^{n} (-1)^(n(j+1))    D(a_{j+1}..a_n, a_0..a_{d+j-n-1}) (x) a_{d+j-n} .. a_j
    """
    A = ch.algebra
    d = D.arity
    if d == 0:
        raise ValueError("arity-0 cochains do not act on chains")
    n = ch.n
    if d > n + 1:
        return Chain(A, 0)  # the action truncates to zero below the bottom
    out = Chain(A, n - d + 1)
    for tup, coeff in ch.c.items():
        for i in range(n - d + 1):
            val = D.table.get(tup[i + 1 : i + d + 1])
            if not val:
                continue
            sign = -1 if ((d - 1) * (i + 1)) % 2 else 1
            head, tail = tup[: i + 1], tup[i + d + 1 :]
            for k, v in val.items():
                key = head + (k,) + tail
                w = out.c.get(key, Fraction(0)) + sign * coeff * v
                if w:
                    out.c[key] = w
                else:
                    out.c.pop(key, None)
        for j in range(max(n - d + 1, 0), n + 1):
            args = tup[j + 1 : n + 1] + tup[0 : d + j - n]
            val = D.table.get(args)
            if not val:
                continue
            sign = -1 if (n * (j + 1)) % 2 else 1
            rest = tup[d + j - n : j + 1]
            for k, v in val.items():
                key = (k,) + rest
                w = out.c.get(key, Fraction(0)) + sign * coeff * v
                if w:
                    out.c[key] = w
                else:
                    out.c.pop(key, None)
    return out


def cyclic_differential(parts):
    """Apply b + uB to a finite u-polynomial of reduced chains.

    ``parts`` maps u-power -> Chain; the result does too.  Chains are kept
    in reduced form throughout.
    """
    out = {}
    for k, ch in parts.items():
        if ch.n >= 1:
            bpart = chain_b(ch).normalized()
            if not bpart.is_zero():
                acc = out.get(k)
                out[k] = bpart if acc is None else acc + bpart
        Bpart = connes_B(ch)
        if not Bpart.is_zero():
            acc = out.get(k + 1)
            out[k + 1] = Bpart if acc is None else acc + Bpart
    return {k: v for k, v in out.items() if not v.is_zero()}


# -- homology -----------------------------------------------------------------

def _chain_tuples(algebra, n, reduced):
    first = range(algebra.dim)
    if reduced:
        rest = algebra.bar_indices()
    else:
        rest = list(range(algebra.dim))
    for head in first:
        for tail in _cartesian(rest, repeat=n):
            yield (head,) + tail


def homology_betti(algebra, top, reduced=True):
    """Chain-complex Betti numbers in degrees 0..top."""
    dims = []
    tuple_index = {}
    for n in range(top + 2):
        tuples = list(_chain_tuples(algebra, n, reduced))
        tuple_index[n] = {t: i for i, t in enumerate(tuples)}
        dims.append(len(tuples))
    # rank of b: C_n -> C_{n-1}
    ranks = [0] * (top + 2)
    for n in range(1, top + 2):
        cols = []
        for t in tuple_index[n]:
            img = chain_b(Chain.elementary(algebra, t))
            if reduced:
                img = img.normalized()
            col = {tuple_index[n - 1][s]: v for s, v in img.c.items()}
            if col:
                cols.append(col)
        rank, _ = rank_kernel(cols, dims[n - 1])
        ranks[n] = rank
    return [dims[n] - ranks[n] - ranks[n + 1] for n in range(top + 1)]


def cohomology_betti(algebra, top, reduced=True):
    """Cochain-complex Betti numbers in degrees 0..top."""
    if reduced:
        slots = algebra.bar_indices()
    else:
        slots = list(range(algebra.dim))
    dim = algebra.dim

    def basis_keys(n):
        return [
            (t, k) for t in _cartesian(slots, repeat=n) for k in range(dim)
        ]

    key_index = {}
    dims = []
    for n in range(top + 2):
        keys = basis_keys(n)
        key_index[n] = {key: i for i, key in enumerate(keys)}
        dims.append(len(keys))
    ranks = [0] * (top + 2)  # ranks[n] = rank of delta: C^n -> C^(n+1)
    for n in range(top + 1):
        cols = []
        for (t, k) in key_index[n]:
            e = Cochain(algebra, n)
            e.table[t] = {k: Fraction(1)}
            de = delta(e)
            col = {}
            for tt, vv in de.table.items():
                if reduced and any(i not in slots for i in tt):
                    continue
                for kk, c in vv.items():
                    col[key_index[n + 1][(tt, kk)]] = c
            if col:
                cols.append(col)
        rank, _ = rank_kernel(cols, dims[n + 1])
        ranks[n] = rank
    return [dims[n] - ranks[n] - (ranks[n - 1] if n else 0) for n in range(top + 1)]
