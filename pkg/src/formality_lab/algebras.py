"""Finite-dimensional associative algebras given by structure constants,
plus the degree-capped polynomial models that feed them.

Elements are sparse vectors over basis indices (dict index -> Fraction),
matching the vector helpers in ``core.basis``.
"""

from __future__ import annotations

from fractions import Fraction

from .core.basis import vec, vadd_into
from .core.linalg import solve
from .poly import Poly, monomials_upto


class StructureAlgebra:
    """Associative unital algebra with a fixed basis and multiplication table.

    table[(i, j)] is the sparse expansion of (basis i) * (basis j).
    """

    def __init__(self, labels, table, unit_vector=None):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = {}
        for (i, j), v in table.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"table key {(i, j)} out of range")
            entry = {k: Fraction(c) for k, c in v.items() if Fraction(c) != 0}
            for k in entry:
                if not 0 <= k < self.dim:
                    raise ValueError(f"table value index {k} out of range")
            if entry:
                self.table[(i, j)] = entry
        if unit_vector is None:
            unit_vector = self._solve_unit()
        self.unit = {k: Fraction(c) for k, c in unit_vector.items() if Fraction(c) != 0}
        # index of the unit when it is literally a basis element
        self.unit_index = None
        if len(self.unit) == 1:
            ((k, c),) = self.unit.items()
            if c == 1:
                self.unit_index = k

    def _solve_unit(self):
        # u * b_j = b_j for all j: unknowns u_i, equations indexed by (j, k).
        rows = []
        rhs = []
        for j in range(self.dim):
            cols = {}
            for i in range(self.dim):
                for k, c in self.table.get((i, j), {}).items():
                    cols.setdefault(k, {})[i] = c
            for k in range(self.dim):
                rows.append(cols.get(k, {}))
                rhs.append(Fraction(1) if k == j else Fraction(0))
        u = solve(rows, rhs, self.dim)
        if u is None:
            raise ValueError("algebra has no unit")
        return u

    def basis_vector(self, i):
        return vec((i, 1))

    def mul(self, v, w):
        out = {}
        for i, a in v.items():
            for j, b in w.items():
                entry = self.table.get((i, j))
                if entry:
                    vadd_into(out, entry, a * b)
        return out

    def bar_indices(self):
        """Basis indices spanning the complement of the unit line.

        Only defined when the unit is itself a basis element; the reduced
        (normalized) machinery in the cochain modules requires that.
        """
        if self.unit_index is None:
            raise ValueError("unit is not a basis element; pick a unit-adapted basis")
        return [i for i in range(self.dim) if i != self.unit_index]

    def strip_unit(self, v):
        """Project a vector to the span of the non-unit basis elements."""
        ui = self.unit_index
        if ui is None:
            raise ValueError("unit is not a basis element")
        return {i: c for i, c in v.items() if i != ui}

    def check_associative(self):
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.table.get((i, j), {})
                for k in range(self.dim):
                    left = self.mul(ij, vec((k, 1)))
                    right = self.mul(vec((i, 1)), self.table.get((j, k), {}))
                    if left != right:
                        return False
        return True

    def check_unital(self):
        for i in range(self.dim):
            b = vec((i, 1))
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                return False
        return True


# -- specific algebras -------------------------------------------------------

def dual_numbers():
    """k[x]/(x^2) with basis 1, x."""
    return StructureAlgebra(
        ["1", "x"],
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {}},
    )


def trunc_poly_algebra(cap):
    """k[x]/(x^(cap+1)) with basis 1, x, ..., x^cap."""
    labels = ["1"] + [f"x^{k}" if k > 1 else "x" for k in range(1, cap + 1)]
    table = {}
    for i in range(cap + 1):
        for j in range(cap + 1):
            table[(i, j)] = {i + j: 1} if i + j <= cap else {}
    return StructureAlgebra(labels, table)


def mat2_elementary():
    """2x2 matrices over k in the elementary-matrix basis e11,e12,e21,e22."""
    labels = ["e11", "e12", "e21", "e22"]
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    table = {}
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            table[(i, j)] = {idx[(a, d)]: 1} if b == c else {}
    return StructureAlgebra(labels, table)


def mat2_unital():
    """2x2 matrices in a basis containing the identity: 1, e12, e21, e22.

    This is the basis to use for reduced-complex computations, where the
    unit must be a basis element.
    """
    # e11 = 1 - e22 in this basis.
    one = {0: Fraction(1)}
    e12 = {1: Fraction(1)}
    e21 = {2: Fraction(1)}
    e22 = {3: Fraction(1)}
    e11 = {0: Fraction(1), 3: Fraction(-1)}
    names = [one, e12, e21, e22]

    ref = mat2_elementary()
    # express each product in the new basis via the change of basis
    new_in_old = [
        {0: Fraction(1), 3: Fraction(1)},  # 1 = e11 + e22
        {1: Fraction(1)},
        {2: Fraction(1)},
        {3: Fraction(1)},
    ]
    # old elementary basis in the new basis
    old_in_new = [e11, e12, e21, e22]
    table = {}
    for i in range(4):
        for j in range(4):
            prod_old = ref.mul(new_in_old[i], new_in_old[j])
            entry = {}
            for k, c in prod_old.items():
                vadd_into(entry, old_in_new[k], c)
            table[(i, j)] = entry
    return StructureAlgebra(["1", "e12", "e21", "e22"], table)


class FunctionModel:
    """Polynomial functions in nvars variables, all degrees above cap cut off.

    The product truncates, so this is the quotient by the (cap+1)-st power
    of the maximal ideal at the origin -- a genuine finite-dimensional
    algebra. Partial derivatives do NOT descend to the quotient, so any
    computation that needs them must run on honest polynomials instead
    (see ``cartan`` and ``polydiff``).
    """

    def __init__(self, nvars, cap):
        self.nvars = nvars
        self.cap = cap
        self.monomials = monomials_upto(nvars, cap)
        self.index = {e: i for i, e in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def mul(self, p, q):
        return (p * q).truncate(self.cap)

    def project(self, p):
        return p.truncate(self.cap)

    def basis_poly(self, i):
        return Poly.monomial(self.nvars, self.monomials[i])

    def poly_to_vec(self, p):
        if p.n != self.nvars:
            raise ValueError("variable count mismatch")
        out = {}
        for e, v in p.c.items():
            if sum(e) <= self.cap:
                out[self.index[e]] = v
        return out

    def vec_to_poly(self, v):
        return Poly(self.nvars, {self.monomials[i]: c for i, c in v.items()})

    def _label(self, e):
        if not any(e):
            return "1"
        bits = []
        for i, k in enumerate(e):
            name = f"x{i}" if self.nvars > 1 else "x"
            bits.append(name if k == 1 else f"{name}^{k}")
        return "*".join(bits)

    def as_structure_algebra(self):
        labels = [self._label(e) for e in self.monomials]
        table = {}
        for i, ei in enumerate(self.monomials):
            for j, ej in enumerate(self.monomials):
                e = tuple(a + b for a, b in zip(ei, ej))
                table[(i, j)] = {self.index[e]: 1} if sum(e) <= self.cap else {}
        return StructureAlgebra(labels, table)


def jet_algebra(nvars, cap):
    return FunctionModel(nvars, cap).as_structure_algebra()
