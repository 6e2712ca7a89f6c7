"""Constant symplectic calculus on series-valued forms.

Forms carry two formal weights: a deformation order t (Laurent below, capped
above like the scalar series ideal) and a periodicity weight u (hard window
both ways).  On standard R^2n the module builds the twisted de Rham
differentials, the finite exponential of the duality contraction, a duality
star, and the composite that turns the volume normalization into the
multiplication operator exp(-omega/(u t)).

Two sign conventions, both recorded in the convention ledger.  First, the
exponential arrows use the OPPOSITE sign of cartan.contract, so each
symplectic plane contracts its own area form to +1; lie transport stays on
the cartan convention.  That choice makes both exponential conjugations and
the contraction identity exp(z i)(omega^n/n!) = z^n exp(omega/z) hold with
no stray signs.  Second, the duality star exchanges d and L only up to the
parity (-1)^(deg+1), and no per-degree rescaling removes the sign from both
exchanges at once; the complexes downstream of the star therefore carry the
parity in their differentials (see diff_tL_ud_dressed).  Every arrow is then
an on-the-nose chain map, and since the dressing is an invertible diagonal
it changes no kernel, image, or class.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial

from .cartan import (
    Form,
    MultiVector,
    algebroid_d,
    contract,
    deRham_d,
    jacobiator,
    lie_derivative,
)
from .core.linalg import rank_kernel, solve
from .core.series import WindowOverflow
from .poly import Poly, monomials_upto


class SymplecticData:
    """Standard structure on 2n variables: x_i = var i, y_i = var n+i,
    area = sum dx_i ^ dy_i, dual bivector with {x_i, y_j} = delta_ij."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("need at least one symplectic plane")
        self.n = n
        self.nvars = 2 * n
        one = Poly.const(self.nvars, 1)
        self.omega = Form(self.nvars, 2, {(i, n + i): one for i in range(n)})
        self.pi0 = MultiVector(self.nvars, 2, {(i, n + i): one for i in range(n)})

    def omega_power(self, j):
        """omega^j / j!"""
        out = Form.function(Poly.const(self.nvars, 1))
        for _ in range(j):
            out = out.wedge(self.omega)
        return Fraction(1, factorial(j)) * out

    def volume(self):
        return self.omega_power(self.n)

    def contract(self, alpha):
        """The pipeline contraction (sign-flipped; see module docstring)."""
        return Fraction(-1) * contract(self.pi0, alpha)

    def lie(self, alpha):
        return lie_derivative(self.pi0, alpha)


class SeriesForm:
    """parts[(kt, ku, k)] = homogeneous degree-k form at weight t^kt u^ku.

    kt above the window top drops silently (ideal semantics); kt below the
    bottom or ku outside its window raises WindowOverflow.
    """

    __slots__ = ("nvars", "twin", "uwin", "parts")

    def __init__(self, nvars, parts=None, twin=(-4, 4), uwin=(-4, 4)):
        self.nvars = nvars
        self.twin = tuple(twin)
        self.uwin = tuple(uwin)
        self.parts = {}
        if parts:
            for (kt, ku, k), form in parts.items():
                if form.k != k or form.nvars != nvars:
                    raise ValueError("part key disagrees with its form")
                self._add(kt, ku, form)

    @classmethod
    def zero(cls, nvars, twin=(-4, 4), uwin=(-4, 4)):
        return cls(nvars, None, twin, uwin)

    @classmethod
    def wrap(cls, form, twin=(-4, 4), uwin=(-4, 4), kt=0, ku=0):
        out = cls.zero(form.nvars, twin, uwin)
        out._add(kt, ku, form)
        return out

    def _add(self, kt, ku, form):
        if form.is_zero():
            return
        if kt > self.twin[1]:
            return
        if kt < self.twin[0] or not self.uwin[0] <= ku <= self.uwin[1]:
            raise WindowOverflow(f"t^{kt} u^{ku} left the window")
        key = (kt, ku, form.k)
        cur = self.parts.get(key)
        s = form if cur is None else cur + form
        if s.is_zero():
            self.parts.pop(key, None)
        else:
            self.parts[key] = s

    def _windows(self, other):
        if self.nvars != other.nvars or self.twin != other.twin or self.uwin != other.uwin:
            raise ValueError("mismatched series forms")

    def __add__(self, other):
        self._windows(other)
        out = SeriesForm.zero(self.nvars, self.twin, self.uwin)
        out.parts = dict(self.parts)
        for (kt, ku, _), form in other.parts.items():
            out._add(kt, ku, form)
        return out

    def __neg__(self):
        out = SeriesForm.zero(self.nvars, self.twin, self.uwin)
        out.parts = {key: -form for key, form in self.parts.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        out = SeriesForm.zero(self.nvars, self.twin, self.uwin)
        for key, form in self.parts.items():
            s = scalar * form
            if not s.is_zero():
                out.parts[key] = s
        return out

    def __eq__(self, other):
        if not isinstance(other, SeriesForm):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.twin == other.twin
            and self.uwin == other.uwin
            and self.parts == other.parts
        )

    def is_zero(self):
        return not self.parts

    def shift(self, dt, du, coeff=1):
        """Multiply by coeff * t^dt u^du."""
        out = SeriesForm.zero(self.nvars, self.twin, self.uwin)
        for (kt, ku, _), form in self.parts.items():
            out._add(kt + dt, ku + du, coeff * form)
        return out

    def map_form(self, fn, dt=0, du=0):
        """Apply a linear form operation to every part, with a weight shift."""
        out = SeriesForm.zero(self.nvars, self.twin, self.uwin)
        for (kt, ku, _), form in self.parts.items():
            out._add(kt + dt, ku + du, fn(form))
        return out

    def __repr__(self):
        keys = ", ".join(f"t^{kt}u^{ku}:deg{k}" for kt, ku, k in sorted(self.parts))
        return f"SeriesForm({keys or '0'})"


# ---------------------------------------------------------------------------
# differentials of the five complexes threaded by the composite
# ---------------------------------------------------------------------------

def diff_d(sd, alpha):
    return alpha.map_form(deRham_d)


def diff_td(sd, alpha):
    return alpha.map_form(deRham_d, dt=1)


def diff_td_uL(sd, alpha):
    return alpha.map_form(deRham_d, dt=1) + alpha.map_form(sd.lie, du=1)


def diff_tL_ud(sd, alpha):
    return alpha.map_form(sd.lie, dt=1) + alpha.map_form(deRham_d, du=1)


def diff_ud(sd, alpha):
    return alpha.map_form(deRham_d, du=1)


def _parity_dress(alpha, fn, dt, du):
    """Apply fn weighted by (-1)^(deg+1) on each homogeneous part."""
    out = SeriesForm.zero(alpha.nvars, alpha.twin, alpha.uwin)
    for (kt, ku, k), form in alpha.parts.items():
        out._add(kt + dt, ku + du, Fraction((-1) ** (k + 1)) * fn(form))
    return out


def diff_tL_ud_dressed(sd, alpha):
    """(-1)^(deg+1) (t*L + u*d): the star conjugate of t*d + u*L.

    The duality star exchanges d and L only up to the parity of the form
    degree (on a degree-k input, star(d a) = (-1)^(k+1) L(star a) and
    star(L a) = (-1)^(k+1) d(star a)); no per-degree rescaling of the star
    can remove that sign on both exchanges at once, so the complexes past
    the star carry it in their differential instead.  The dressing is an
    invertible diagonal, so kernels, images and classes agree with the
    undressed t*L + u*d.
    """
    return _parity_dress(alpha, sd.lie, 1, 0) + _parity_dress(alpha, deRham_d, 0, 1)


def diff_ud_dressed(sd, alpha):
    """(-1)^(deg+1) u*d, the dressing carried past the final conjugation."""
    return _parity_dress(alpha, deRham_d, 0, 1)


def brylinski_d(sd, alpha, mode="full"):
    """The twisted differential: mode "lie" is t*L alone, "full" is t*L + u*d."""
    if mode == "lie":
        return alpha.map_form(sd.lie, dt=1)
    if mode == "full":
        return diff_tL_ud(sd, alpha)
    raise ValueError(f"unknown mode {mode!r}")


def contract_exp(sd, alpha, dt, du, sign=1):
    """exp(sign * t^dt u^du * i) with the pipeline contraction.

    Finite on every part: each contraction drops the form degree by two.
    """
    out = SeriesForm.zero(alpha.nvars, alpha.twin, alpha.uwin)
    for (kt, ku, _), form in alpha.parts.items():
        m = 0
        cur = form
        while not cur.is_zero():
            coeff = Fraction(sign ** m, factorial(m))
            out._add(kt + m * dt, ku + m * du, coeff * cur)
            cur = sd.contract(cur)
            m += 1
    return out


def untwist(sd, alpha, inverse=False):
    """exp(-(t/u) i), conjugating t*L + u*d into u*d; inverse flips the sign."""
    return contract_exp(sd, alpha, dt=1, du=-1, sign=1 if inverse else -1)


# ---------------------------------------------------------------------------
# the duality star
# ---------------------------------------------------------------------------

def _pair_single(sd, i, j):
    """The bivector pairing on coordinate covectors: <dz_i, dz_j>."""
    if j == i + sd.n and i < sd.n:
        return 1
    if i == j + sd.n and j < sd.n:
        return -1
    return 0


def _pair_det(sd, I, J):
    """Determinant extension of the covector pairing to increasing tuples."""
    k = len(I)
    if k == 0:
        return Fraction(1)
    rows = [[Fraction(_pair_single(sd, a, b)) for b in J] for a in I]
    det = Fraction(1)
    for col in range(k):
        piv = None
        for r in range(col, k):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, k):
            if rows[r][col]:
                f = rows[r][col] * inv
                for c in range(col, k):
                    rows[r][c] -= f * rows[col][c]
    return det


def _complement_sign(I, nvars):
    """dz_I ^ dz_{I^c} = sign * dz_{0..nvars-1}."""
    Ic = tuple(i for i in range(nvars) if i not in I)
    seq = I + Ic
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign, Ic


def symplectic_star(sd, form):
    """The degree-reversing duality: alpha ^ star(beta) = <alpha, beta> vol.

    <,> is the determinant extension of the covector pairing; vol is
    omega^n/n!.  Involutive, star(1) = vol, and it exchanges the two twisted
    differentials exactly (asserted in tests, not assumed here).
    """
    if form.nvars != sd.nvars:
        raise ValueError("variable counts differ")
    k = form.k
    if k > sd.nvars:
        # only the zero form lives above the top degree
        return Form(sd.nvars, 0)
    vol = sd.volume()
    vcoeff = vol.c[tuple(range(sd.nvars))].constant_term()
    out = Form(sd.nvars, sd.nvars - k)
    for J, c in form.c.items():
        for I in combinations(range(sd.nvars), k):
            lam = _pair_det(sd, I, J)
            if not lam:
                continue
            sign, Ic = _complement_sign(I, sd.nvars)
            # alpha = dz_I forces the Ic coefficient: sign * coeff = lam * vcoeff
            term = (lam * vcoeff / sign) * c
            cur = out.c.get(Ic)
            s = term if cur is None else cur + term
            if s.is_zero():
                out.c.pop(Ic, None)
            else:
                out.c[Ic] = s
    return out


def series_star(sd, alpha):
    return alpha.map_form(lambda f: symplectic_star(sd, f))


# ---------------------------------------------------------------------------
# the composite
# ---------------------------------------------------------------------------

def degree_twist(sd, alpha):
    """(-1)^n t^(k-n) on each degree-k part: regrades d into t*d."""
    out = SeriesForm.zero(alpha.nvars, alpha.twin, alpha.uwin)
    sign = Fraction((-1) ** sd.n)
    for (kt, ku, k), form in alpha.parts.items():
        out._add(kt + k - sd.n, ku, sign * form)
    return out


def u_regrade(sd, alpha):
    """u^(n-k) on each degree-k part."""
    out = SeriesForm.zero(alpha.nvars, alpha.twin, alpha.uwin)
    for (kt, ku, k), form in alpha.parts.items():
        out._add(kt, ku + sd.n - k, form)
    return out


def nu_pipeline(sd, alpha):
    """degree twist, then exp((u/t) i), then the star, then exp(-(t/u) i)."""
    val = degree_twist(sd, alpha)
    val = contract_exp(sd, val, dt=-1, du=1, sign=1)
    val = series_star(sd, val)
    return contract_exp(sd, val, dt=1, du=-1, sign=-1)


def nu0(sd, alpha):
    return u_regrade(sd, nu_pipeline(sd, alpha))


def pipeline_stages(sd):
    """The arrows with their (source, target) differentials, in order."""
    return [
        (degree_twist, diff_d, diff_td),
        (lambda s, a: contract_exp(s, a, dt=-1, du=1, sign=1), diff_td, diff_td_uL),
        (series_star, diff_td_uL, diff_tL_ud_dressed),
        (lambda s, a: contract_exp(s, a, dt=1, du=-1, sign=-1),
         diff_tL_ud_dressed, diff_ud_dressed),
    ]


class PipelineReport:
    def __init__(self, checked, witnesses):
        self.checked = checked
        self.witnesses = witnesses

    @property
    def ok(self):
        return not self.witnesses

    def __repr__(self):
        state = "pass" if self.ok else f"{len(self.witnesses)} violations"
        return f"PipelineReport({state}, {self.checked} checked)"


def check_pipeline_chain_maps(sd, samples):
    """arrow(d_src(a)) == d_tgt(arrow(a)) for every stage and sample."""
    witnesses = []
    checked = 0
    for stage, (arrow, dsrc, dtgt) in enumerate(pipeline_stages(sd)):
        for a in samples:
            lhs = arrow(sd, dsrc(sd, a))
            rhs = dtgt(sd, arrow(sd, a))
            checked += 1
            if lhs != rhs:
                witnesses.append((stage, a, lhs - rhs))
    return PipelineReport(checked, witnesses)


# ---------------------------------------------------------------------------
# the contraction identity
# ---------------------------------------------------------------------------

_Z_TOKENS = {"t": (1, 0), "u": (0, 1), "t/u": (1, -1), "u/t": (-1, 1)}


def exp_contract_identity(n, z="t/u", twin=(-4, 4), uwin=(-4, 4)):
    """exp(z i)(omega^n/n!) versus sum_j z^(n-j) omega^j/j!, exactly."""
    if z not in _Z_TOKENS:
        raise ValueError(f"unknown weight token {z!r}")
    dt, du = _Z_TOKENS[z]
    sd = SymplecticData(n)
    lhs = contract_exp(sd, SeriesForm.wrap(sd.volume(), twin, uwin), dt, du, sign=1)
    rhs = SeriesForm.zero(sd.nvars, twin, uwin)
    for j in range(n + 1):
        rhs._add((n - j) * dt, (n - j) * du, sd.omega_power(j))
    return PipelineReport(1, [] if lhs == rhs else [("exp-contract", lhs, rhs)])


# ---------------------------------------------------------------------------
# exactness and the flat expansion
# ---------------------------------------------------------------------------

def _form_basis(nvars, k, cap):
    for key in combinations(range(nvars), k):
        for e in monomials_upto(nvars, cap):
            yield key, e


def d_primitive(form, cap=None):
    """A beta with d(beta) = form, coefficients of degree <= cap, or None."""
    if form.k == 0:
        return None
    nvars = form.nvars
    if cap is None:
        cap = 1 + max(
            (sum(e) for c in form.c.values() for e in c.c), default=0
        )
    cols = list(_form_basis(nvars, form.k - 1, cap))
    images = []
    eqs = {}
    for j, (key, e) in enumerate(cols):
        img = deRham_d(Form(nvars, form.k - 1, {key: Poly.monomial(nvars, e)}))
        images.append(img)
        for fkey, c in img.c.items():
            for ee in c.c:
                eqs.setdefault((fkey, ee), len(eqs))
    for fkey, c in form.c.items():
        for ee in c.c:
            eqs.setdefault((fkey, ee), len(eqs))
    rows = [dict() for _ in range(len(eqs))]
    for j, img in enumerate(images):
        for fkey, c in img.c.items():
            for ee, v in c.c.items():
                rows[eqs[(fkey, ee)]][j] = v
    rhs = [Fraction(0)] * len(eqs)
    for fkey, c in form.c.items():
        for ee, v in c.c.items():
            rhs[eqs[(fkey, ee)]] = v
    x = solve(rows, rhs, len(cols))
    if x is None:
        return None
    out = Form(nvars, form.k - 1)
    for j, v in x.items():
        key, e = cols[j]
        cur = out.c.get(key)
        term = Poly.monomial(nvars, e, v)
        s = term if cur is None else cur + term
        if s.is_zero():
            out.c.pop(key, None)
        else:
            out.c[key] = s
    return out


class FlatExpansion:
    """The weight-0 class plus exhibited primitives for every positive part."""

    def __init__(self, value, klass, primitives, ok):
        self.value = value
        self.klass = klass
        self.primitives = primitives
        self.ok = ok

    def __repr__(self):
        state = "ok" if self.ok else "INCOMPLETE"
        return f"FlatExpansion({state}, class={self.klass})"


def ahat_flat(n, nt, uwin=(-4, 4)):
    """Run the composite on 1 over flat R^2n and split class from exact junk.

    The degree-0 parts are the reported expansion; every positive-degree part
    must be d-exact with an explicitly solved primitive, so the class is the
    constant 1 whatever nt is.
    """
    sd = SymplecticData(n)
    twin = (-max(n, nt), nt)
    one = SeriesForm.wrap(Form.function(Poly.const(sd.nvars, 1)), twin, uwin)
    value = nu0(sd, one)
    klass = {}
    primitives = {}
    ok = True
    for (kt, ku, k), form in sorted(value.parts.items()):
        if k == 0:
            klass[(kt, ku)] = form.c[()].constant_term()
            continue
        prim = d_primitive(form)
        primitives[(kt, ku, k)] = prim
        if prim is None or deRham_d(prim) != form:
            ok = False
    return FlatExpansion(value, klass, primitives, ok)


# ---------------------------------------------------------------------------
# degeneration probe
# ---------------------------------------------------------------------------

class ProbeRow:
    __slots__ = ("grade", "dim", "homology", "predicted")

    def __init__(self, grade, dim, homology, predicted):
        self.grade = grade
        self.dim = dim
        self.homology = homology
        self.predicted = predicted

    @property
    def match(self):
        return self.homology == self.predicted

    def __repr__(self):
        return (
            f"ProbeRow(J={self.grade}, dim={self.dim}, "
            f"H={self.homology}, E1={self.predicted})"
        )


class ProbeTable:
    def __init__(self, rows, nt, cap):
        self.rows = rows
        self.nt = nt
        self.cap = cap

    @property
    def degenerate(self):
        return all(r.match for r in self.rows)

    def __repr__(self):
        state = "degenerate" if self.degenerate else "NOT degenerate"
        return f"ProbeTable({state} at caps, nt={self.nt}, cap={self.cap})"


def _graded_ranks(nvars, cap, nt, image):
    """dims and ranks of a grade-raising map on forms x t-powers.

    Basis vectors are (t-power, index tuple, monomial), graded by
    form degree + 2 * t-power.  ``image`` maps a basis vector to a list of
    (t-power, Form) pieces; anything above the caps must not appear.
    """
    index = {}
    grades = {}
    for j in range(nt):
        for k in range(nvars + 1):
            for key, e in _form_basis(nvars, k, cap):
                grades.setdefault(k + 2 * j, []).append((j, key, e))
    for J, vecs in grades.items():
        for pos, v in enumerate(vecs):
            index[v] = (J, pos)
    dims = {J: len(vecs) for J, vecs in grades.items()}
    ranks = {}
    for J, vecs in sorted(grades.items()):
        rows = []
        ncols = dims.get(J + 1, 0)
        for j, key, e in vecs:
            row = {}
            for jj, piece in image(j, key, e):
                if jj >= nt:
                    continue
                for fkey, c in piece.c.items():
                    for ee, v in c.c.items():
                        if sum(ee) > cap:
                            raise ValueError(
                                "coefficient cap is not stable under the transport"
                            )
                        Jp, pos = index[(jj, fkey, ee)]
                        if Jp != J + 1:
                            raise ValueError("image is not grade-raising")
                        row[pos] = row.get(pos, Fraction(0)) + v
            rows.append({p: v for p, v in row.items() if v})
        rank, _ = rank_kernel(rows, ncols)
        ranks[J] = rank
    return dims, ranks


def spectral_degeneration_probe(pi, cap, nt):
    """Rank table of (forms x t-adic, d + t*L) against the split prediction.

    The prediction column counts classes of the plain d-model times the
    t-powers; equality of every row is what collapse of the t-filtration
    looks like at these finite caps.  A probe, not a proof.
    """
    nvars = pi.nvars

    def image_full(j, key, e):
        form = Form(nvars, len(key), {key: Poly.monomial(nvars, e)})
        return [(j, deRham_d(form)), (j + 1, lie_derivative(pi, form))]

    def image_d(j, key, e):
        form = Form(nvars, len(key), {key: Poly.monomial(nvars, e)})
        return [(j, deRham_d(form))]

    dims, ranks = _graded_ranks(nvars, cap, nt, image_full)
    ddims, dranks = _graded_ranks(nvars, cap, 1, image_d)
    betti_d = {
        q: ddims[q] - dranks.get(q, 0) - dranks.get(q - 1, 0) for q in ddims
    }
    rows = []
    for J in sorted(dims):
        hom = dims[J] - ranks.get(J, 0) - ranks.get(J - 1, 0)
        pred = sum(
            betti_d.get(J - 2 * j, 0) for j in range(nt) if J - 2 * j >= 0
        )
        rows.append(ProbeRow(J, dims[J], hom, pred))
    return ProbeTable(rows, nt, cap)


# ---------------------------------------------------------------------------
# algebroid inputs, validated but not pushed further
# ---------------------------------------------------------------------------

class AlgebroidReport:
    __slots__ = ("pairing_inverse", "pi0", "poisson")

    def __init__(self, pairing_inverse, pi0, poisson):
        self.pairing_inverse = pairing_inverse
        self.pi0 = pi0
        self.poisson = poisson

    def __repr__(self):
        tag = "poisson" if self.poisson else "NOT poisson"
        return f"AlgebroidReport({tag}, pi0={self.pi0!r})"


def _invert_constant_matrix(M):
    r = len(M)
    aug = [row[:] + [Fraction(1 if i == j else 0) for j in range(r)] for i, row in enumerate(M)]
    for col in range(r):
        piv = None
        for i in range(col, r):
            if aug[i][col]:
                piv = i
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(r):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[r:] for row in aug]


def algebroid_pipeline_stub(E, omega):
    """Validate a frame pairing and emit its dual bivector on the base.

    Checks: degree 2, closedness in the frame calculus, constant coefficients,
    nondegeneracy.  The dual bivector is pushed to the base through the anchor
    and its Jacobi obstruction reported.  Nothing downstream is computed.
    """
    if omega.k != 2:
        raise ValueError("the pairing must have degree 2")
    if not algebroid_d(E, omega).is_zero():
        raise ValueError("the pairing is not closed on the frame")
    r = E.rank
    M = [[Fraction(0)] * r for _ in range(r)]
    for (a, b), p in omega.c.items():
        if p != Poly.const(E.nvars, p.constant_term()):
            raise ValueError("only constant frame pairings are inverted here")
        M[a][b] = p.constant_term()
        M[b][a] = -p.constant_term()
    inv = _invert_constant_matrix(M)
    if inv is None:
        raise ValueError("the pairing is degenerate on the frame")
    # dual bivector convention: matrix of pi0 = -(matrix of omega)^(-1),
    # so the tangent frame with pairing dx^dy dualizes to +dx-frame^dy-frame
    W = [[-v for v in row] for row in inv]
    pi = MultiVector(E.nvars, 2)
    for a in range(r):
        for b in range(a + 1, r):
            if not W[a][b]:
                continue
            ra = MultiVector(E.nvars, 1, {(i,): p for i, p in enumerate(E.anchor[a]) if not p.is_zero()})
            rb = MultiVector(E.nvars, 1, {(i,): p for i, p in enumerate(E.anchor[b]) if not p.is_zero()})
            pi = pi + W[a][b] * ra.wedge(rb)
    return AlgebroidReport(W, pi, jacobiator(pi).is_zero())
