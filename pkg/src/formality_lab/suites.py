"""Job implementations behind the CLI: each op packages one family of
identity checks over the library and reports pass/fail with exact witnesses.

Everything here is deterministic.  Randomized sweeps draw from fixed seeds,
iteration follows declaration or sorted order, and all arithmetic is exact,
so a manifest always produces the same outcome objects.

The built-in suite "core-identities" expands to the whole battery at the
default caps; individual ops accept small overrides where noted.
"""

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

from . import ahat as ah
from . import cartan as ct
from . import deformation as df
from . import hochschild as hh
from . import linfty as lf
from . import polydiff as pd
from .algebras import (
    FunctionModel,
    dual_numbers,
    jet_algebra,
    mat2_unital,
    trunc_poly_algebra,
)
from .manifest import ManifestError
from .poly import Poly, monomials_upto

HALF = Fraction(1, 2)


class JobOutcome:
    """What one job reports: a status, a one-line summary, a table of
    deterministic data, and the first few exact witnesses on failure."""

    __slots__ = ("status", "summary", "data", "witnesses")

    def __init__(self, status, summary, data=None, witnesses=None):
        if status not in ("pass", "fail", "info"):
            raise ValueError(f"bad status {status!r}")
        self.status = status
        self.summary = summary
        self.data = data or {}
        self.witnesses = witnesses or []

    def __repr__(self):
        return f"JobOutcome({self.status}, {self.summary!r})"


MAX_WITNESSES = 5


class _Tally:
    """Collects checks and failures; formats at most MAX_WITNESSES."""

    def __init__(self):
        self.checked = 0
        self.failed = 0
        self.witnesses = []

    def ok(self, passed, describe):
        self.checked += 1
        if not passed:
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(describe())
        return passed

    def outcome(self, label, data=None):
        data = dict(data or {})
        data["checked"] = self.checked
        data["failed"] = self.failed
        if self.failed:
            return JobOutcome(
                "fail",
                f"{label}: {self.failed} of {self.checked} checks failed",
                data,
                self.witnesses,
            )
        return JobOutcome("pass", f"{label}: {self.checked} checks", data)


# ------------------------------------------------------------------ helpers

def _int_arg(args, key, default, where, minimum=1):
    v = args.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ManifestError(f"{where}: {key!r} must be an integer >= {minimum}")
    return v


def _bool_arg(args, key, default, where):
    v = args.get(key, default)
    if not isinstance(v, bool):
        raise ManifestError(f"{where}: {key!r} must be true or false")
    return v


def _int_list_arg(args, key, default, where, minimum=1):
    v = args.get(key, list(default))
    if (
        not isinstance(v, list)
        or not v
        or any(isinstance(x, bool) or not isinstance(x, int) or x < minimum for x in v)
    ):
        raise ManifestError(f"{where}: {key!r} must be a list of integers >= {minimum}")
    return v


_PRESET_ALGEBRAS = {
    "dual-numbers": dual_numbers,
    "truncated-poly-3": lambda: trunc_poly_algebra(3),
    "matrix-2x2": mat2_unital,
}


def _algebra_arg(args, manifest, where, default=None):
    name = args.get("algebra", default)
    if name is None:
        raise ManifestError(f"{where}: missing 'algebra'")
    if name in _PRESET_ALGEBRAS:
        return name, _PRESET_ALGEBRAS[name]()
    return name, manifest.resolve(name, "algebra", where)


def _rand_cochain(A, arity, rng, nterms=3):
    basis = hh.basis_cochains(A, arity)
    c = hh.Cochain.zero(A, arity)
    for e in rng.sample(basis, min(nterms, len(basis))):
        c = c + rng.choice([1, 2, -1]) * e
    return c


def _all_chains(A, n, reduced=False):
    rest = A.bar_indices() if reduced else list(range(A.dim))
    for head in range(A.dim):
        for tail in product(rest, repeat=n):
            yield hh.Chain.elementary(A, (head,) + tail)


def _rand_poly(rng, n, deg, nterms=2):
    p = Poly.zero(n)
    for _ in range(nterms):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        p = p + Poly.monomial(n, tuple(e), Fraction(rng.randint(-2, 2)))
    return p


def _rand_mv(rng, n, k, deg=1):
    return ct.MultiVector(
        n, k, {key: _rand_poly(rng, n, deg) for key in combinations(range(n), k)}
    )


def _mv_basis(n, kmax, deg):
    """Monomial multivector basis: one coefficient monomial per index tuple."""
    out = []
    for k in range(kmax + 1):
        for key in combinations(range(n), k):
            for e in monomials_upto(n, deg):
                out.append(ct.MultiVector(n, k, {key: Poly.monomial(n, e)}))
    return out


def _mv_label(v):
    parts = []
    for key, p in sorted(v.c.items()):
        for e, c in p.terms_sorted():
            parts.append(f"{c}*x^{list(e)}@{list(key)}")
    return " + ".join(parts) if parts else "0"


def _form_samples(sd, cap=2):
    out = []
    for k in range(sd.nvars + 1):
        for key in combinations(range(sd.nvars), k):
            for e in monomials_upto(sd.nvars, cap):
                out.append(ct.Form(sd.nvars, k, {key: Poly.monomial(sd.nvars, e)}))
    return out


def _moyal_plane(nt=4, cap=4):
    return df.moyal([[0, HALF], [-HALF, 0]], nt, FunctionModel(2, cap))


def _skewed_product():
    op = pd.PolyDiffOperator(2, 2, {((1, 0), (1, 0)): 1})
    return df.StarProduct(FunctionModel(2, 4), {1: op}, 3)


def _operator_dgla():
    return lf.dgla(lambda op: op.arity - 1, pd.delta, pd.bracket, [])


def _cochain_dgla(A, arities=(1, 2)):
    gens = []
    for ar in arities:
        for i, c in enumerate(hh.basis_cochains(A, ar)):
            gens.append((f"c{ar}_{i}", c))
    return lf.dgla(lambda c: c.arity - 1, hh.delta, hh.bracket, gens)


def _schouten_structure(gens=()):
    return lf.LInftyStructure(
        lambda v: v.k - 1, {2: lambda a: ct.schouten(a[0], a[1])}, gens
    )


def _schouten_generators():
    one = Poly.const(2, 1)
    x = Poly.var(2, 0)
    y = Poly.var(2, 1)
    return [
        ("f", ct.MultiVector.function(x)),
        ("X", ct.MultiVector(2, 1, {(0,): y})),
        ("Y", ct.MultiVector(2, 1, {(1,): one})),
        ("pi", ct.MultiVector(2, 2, {(0, 1): one})),
        ("rho", ct.MultiVector(2, 2, {(0, 1): x})),
    ]


def _chain_samples(A, top=2):
    out = []
    for n in range(0, top + 1):
        for tup in product(range(A.dim), repeat=n + 1):
            out.append((f"ch{tup}", hh.Chain.elementary(A, tup)))
    return out


def _chains_module(A, S):
    return lf.LInftyModule(
        S,
        lambda ch: -ch.n,
        {0: lambda xs, m: hh.chain_b(m), 1: lambda xs, m: hh.lie_action(xs[0], m)},
        _chain_samples(A),
    )


# ------------------------------------------------------------------ op registry

class OpSpec:
    __slots__ = ("fn", "keys")

    def __init__(self, fn, keys):
        self.fn = fn
        self.keys = frozenset(keys)


OPS = {}


def _op(name, keys=()):
    def wrap(fn):
        OPS[name] = OpSpec(fn, keys)
        return fn

    return wrap


def check_job_args(job, manifest):
    """Load-time validation: known op, known argument keys."""
    spec = OPS.get(job.op)
    if spec is None:
        known = ", ".join(sorted(OPS))
        raise ManifestError(f"job {job.name!r}: unknown op {job.op!r} (have {known})")
    extra = set(job.args) - spec.keys
    if extra:
        allowed = ", ".join(sorted(spec.keys)) or "none"
        raise ManifestError(
            f"job {job.name!r}: unknown argument {sorted(extra)[0]!r}"
            f" for op {job.op!r} (allowed: {allowed})"
        )


def run_job(job, manifest):
    return OPS[job.op].fn(job.args, manifest, f"job {job.name!r}")


# ------------------------------------------------------------------ cochain laws

@_op("identity-suite", keys=("algebra", "jacobi-samples"))
def _identity_suite(args, manifest, where):
    """Square-zero differential, graded Jacobi, product Leibniz, and closure
    of the normalized subcomplex, over small associative algebras."""
    nsamp = _int_arg(args, "jacobi-samples", 20, where)
    if "algebra" in args:
        algebras = [_algebra_arg(args, manifest, where)]
    else:
        algebras = [
            ("truncated-poly-3", trunc_poly_algebra(3)),
            ("matrix-2x2", mat2_unital()),
        ]
    t = _Tally()
    for label, A in algebras:
        for ar in range(0, 4):
            for i, e in enumerate(hh.basis_cochains(A, ar)):
                t.ok(
                    hh.delta(hh.delta(e)).is_zero(),
                    lambda label=label, ar=ar, i=i: (
                        f"{label}: differential fails to square to zero on"
                        f" basis cochain {i} of arity {ar}"
                    ),
                )
        for ar in (1, 2, 3):
            for i, e in enumerate(hh.basis_cochains(A, ar, reduced=True)):
                t.ok(
                    e.is_reduced() and hh.delta(e).is_reduced(),
                    lambda label=label, ar=ar, i=i: (
                        f"{label}: normalized subcomplex not closed on"
                        f" basis cochain {i} of arity {ar}"
                    ),
                )
        rng = random.Random(101)
        pool = [_rand_cochain(A, a, rng) for a in (1, 1, 2, 2, 3)]
        triples = list(combinations_with_replacement(range(len(pool)), 3))
        for idx in triples[:nsamp]:
            D, E, F = (pool[i] for i in idx)
            pa, pb, pc = D.lie_degree, E.lie_degree, F.lie_degree
            z = (
                (-1) ** (pa * pc) * hh.bracket(D, hh.bracket(E, F))
                + (-1) ** (pb * pa) * hh.bracket(E, hh.bracket(F, D))
                + (-1) ** (pc * pb) * hh.bracket(F, hh.bracket(D, E))
            )
            t.ok(
                z.is_zero(),
                lambda label=label, idx=idx: (
                    f"{label}: graded Jacobi fails on sampled triple {idx}"
                ),
            )
        pairs = [(0, 2), (2, 0), (2, 3), (0, 4), (4, 2)]
        for i, j in pairs:
            X, Y = pool[i], pool[j]
            s = -1 if X.arity % 2 else 1
            lhs = hh.delta(hh.cup(X, Y))
            rhs = hh.cup(hh.delta(X), Y) + s * hh.cup(X, hh.delta(Y))
            t.ok(
                lhs == rhs,
                lambda label=label, i=i, j=j: (
                    f"{label}: differential fails the product Leibniz rule"
                    f" on sampled pair ({i}, {j})"
                ),
            )
            t.ok(
                hh.cup(hh.cup(X, Y), X) == hh.cup(X, hh.cup(Y, X)),
                lambda label=label, i=i, j=j: (
                    f"{label}: cup associativity fails on sampled pair ({i}, {j})"
                ),
            )
    return t.outcome("cochain identity suite")


@_op("chain-suite", keys=())
def _chain_suite(args, manifest, where):
    """Boundary and cyclic operators on chains: square-zero laws, the
    action of the multiplication cochain, and transport compatibilities."""
    t = _Tally()
    A = dual_numbers()
    m = hh.Cochain.multiplication(A)
    for n in range(0, 5):
        for ch in _all_chains(A, n):
            if n >= 2:
                t.ok(
                    hh.chain_b(hh.chain_b(ch)).is_zero(),
                    lambda n=n: f"b^2 != 0 on a degree-{n} chain",
                )
            if n >= 1:
                t.ok(
                    hh.chain_b(ch) == hh.lie_action(m, ch),
                    lambda n=n: f"b != action of multiplication at degree {n}",
                )
        for ch in _all_chains(A, n, reduced=True):
            t.ok(
                hh.connes_B(hh.connes_B(ch)).is_zero(),
                lambda n=n: f"B^2 != 0 on a normalized degree-{n} chain",
            )
            if n >= 1:
                anti = hh.chain_b(hh.connes_B(ch)).normalized() + hh.connes_B(
                    hh.chain_b(ch).normalized()
                )
                t.ok(
                    anti.is_zero(),
                    lambda n=n: f"bB + Bb != 0 at degree {n}",
                )
    rng = random.Random(202)
    for d, e in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        D = _rand_cochain(A, d, rng)
        E = _rand_cochain(A, e, rng)
        DE = hh.bracket(D, E)
        sgn = (-1) ** ((d - 1) * (e - 1))
        for n in range(max(d, e), 5):
            for ch in _all_chains(A, n):
                lhs = hh.lie_action(D, hh.lie_action(E, ch)) - sgn * hh.lie_action(
                    E, hh.lie_action(D, ch)
                )
                t.ok(
                    lhs == hh.lie_action(DE, ch),
                    lambda d=d, e=e, n=n: (
                        f"commutator of actions != action of bracket"
                        f" (arities {d},{e}, degree {n})"
                    ),
                )
    for d in (1, 2, 3):
        D = _rand_cochain(A, d, rng).reduce()
        s = (-1) ** (d - 1)
        for n in range(max(d - 1, 0), 4):
            for ch in _all_chains(A, n, reduced=True):
                t1 = hh.connes_B(hh.lie_action(D, ch).normalized())
                t2 = hh.lie_action(D, hh.connes_B(ch)).normalized()
                t.ok(
                    (t1 - s * t2).is_zero(),
                    lambda d=d, n=n: (
                        f"cyclic operator does not commute with the action"
                        f" (arity {d}, degree {n})"
                    ),
                )
    # a second, function-model algebra with randomized chains
    J = jet_algebra(2, 2)
    mJ = hh.Cochain.multiplication(J)
    for tup in _random_tuples(J.dim, 24, random.Random(203)):
        ch = hh.Chain.elementary(J, tup)
        t.ok(
            hh.chain_b(hh.chain_b(ch)).is_zero(),
            lambda tup=tup: f"b^2 != 0 on jet chain {tup}",
        )
        t.ok(
            hh.chain_b(ch) == hh.lie_action(mJ, ch),
            lambda tup=tup: f"b != multiplication action on jet chain {tup}",
        )
        nch = ch.normalized()
        anti = hh.chain_b(hh.connes_B(nch)).normalized() + hh.connes_B(
            hh.chain_b(nch).normalized()
        )
        t.ok(
            anti.is_zero(),
            lambda tup=tup: f"bB + Bb != 0 on jet chain {tup}",
        )
    return t.outcome("chain suite")


def _random_tuples(dim, count, rng):
    out = []
    for _ in range(count):
        n = rng.randint(1, 3)
        out.append(tuple(rng.randrange(dim) for _ in range(n + 1)))
    return out


@_op("betti", keys=("algebra", "top", "reduced", "kind", "expect"))
def _betti(args, manifest, where):
    """Betti numbers of the (co)chain complex of an algebra, optionally
    checked against expected values."""
    label, A = _algebra_arg(args, manifest, where, default="dual-numbers")
    top = _int_arg(args, "top", 4, where, minimum=0)
    reduced = _bool_arg(args, "reduced", True, where)
    kind = args.get("kind", "homology")
    if kind not in ("homology", "cohomology"):
        raise ManifestError(f"{where}: kind must be homology or cohomology")
    fn = hh.homology_betti if kind == "homology" else hh.cohomology_betti
    values = fn(A, top, reduced=reduced)
    data = {"algebra": label, "kind": kind, "reduced": reduced, "betti": values}
    expect = args.get("expect")
    if expect is None:
        return JobOutcome("info", f"betti table of {label} ({kind})", data)
    if not isinstance(expect, list) or any(
        isinstance(x, bool) or not isinstance(x, int) for x in expect
    ):
        raise ManifestError(f"{where}: expect must be a list of integers")
    if values == expect:
        return JobOutcome("pass", f"betti table of {label} matches", data)
    return JobOutcome(
        "fail",
        f"betti table of {label} differs",
        data,
        [f"computed {values}, expected {expect}"],
    )


@_op("betti-agreement", keys=("algebra", "top", "expect"))
def _betti_agreement(args, manifest, where):
    """Betti numbers of the normalized and unnormalized complexes agree,
    for homology and cohomology both."""
    label, A = _algebra_arg(args, manifest, where, default="dual-numbers")
    top = _int_arg(args, "top", 4, where, minimum=0)
    tables = {
        "homology-reduced": hh.homology_betti(A, top, reduced=True),
        "homology-full": hh.homology_betti(A, top, reduced=False),
        "cohomology-reduced": hh.cohomology_betti(A, top, reduced=True),
        "cohomology-full": hh.cohomology_betti(A, top, reduced=False),
    }
    data = {"algebra": label}
    data.update(tables)
    witnesses = []
    base = tables["homology-reduced"]
    for key in ("homology-full", "cohomology-reduced", "cohomology-full"):
        if tables[key] != base:
            witnesses.append(f"{key} = {tables[key]} differs from {base}")
    expect = args.get("expect")
    if expect is not None:
        if not isinstance(expect, list) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in expect
        ):
            raise ManifestError(f"{where}: expect must be a list of integers")
        if base != expect:
            witnesses.append(f"computed {base}, expected {expect}")
    if witnesses:
        return JobOutcome(
            "fail", f"betti tables of {label} disagree", data, witnesses
        )
    return JobOutcome(
        "pass", f"betti tables of {label} agree in degrees 0..{top}", data
    )


# ------------------------------------------------------------------ multivectors

@_op("hkr-suite", keys=("closed-samples",))
def _hkr_suite(args, manifest, where):
    """The symbol-to-operator map lands in cocycles, and its failures to
    respect bracket and product are exact, with solved primitives."""
    nclosed = _int_arg(args, "closed-samples", 20, where)
    t = _Tally()
    rng = random.Random(303)
    for i in range(nclosed):
        if i % 5 < 3:
            piv = _rand_mv(rng, 2, rng.choice([1, 2]), 2)
        else:
            piv = _rand_mv(rng, 3, rng.choice([2, 3]), 1)
        t.ok(
            pd.delta(ct.hkr(piv)).is_zero(),
            lambda i=i: f"operator of sampled multivector {i} is not closed",
        )
    rng = random.Random(304)
    for i in range(3):
        piv = ct.MultiVector(2, 2, {(0, 1): _rand_poly(rng, 2, 2)})
        psi = ct.MultiVector(2, 2, {(0, 1): _rand_poly(rng, 2, 2)})
        defect = pd.bracket(ct.hkr(piv), ct.hkr(psi)) - ct.hkr(ct.schouten(piv, psi))
        Y = pd.delta_primitive(defect)
        t.ok(
            Y is not None and pd.delta(Y) == defect,
            lambda i=i: f"bracket defect {i} has no solved primitive",
        )
    rng = random.Random(305)
    for i in range(3):
        piv = ct.MultiVector(2, 2, {(0, 1): _rand_poly(rng, 2, 1)})
        psi = ct.MultiVector(2, 2, {(0, 1): _rand_poly(rng, 2, 1)})
        defect = pd.cup(ct.hkr(piv), ct.hkr(psi)) - ct.hkr(piv.wedge(psi))
        Y = pd.delta_primitive(defect)
        t.ok(
            Y is not None and pd.delta(Y) == defect,
            lambda i=i: f"product defect {i} has no solved primitive",
        )
    return t.outcome("symbol-map suite")


@_op("mu-suite", keys=("max-degree",))
def _mu_suite(args, manifest, where):
    """The chain-to-form map kills boundaries and turns the cyclic
    operator into the exterior derivative, on monomial chains."""
    maxdeg = _int_arg(args, "max-degree", 3, where)
    model = FunctionModel(2, 4)
    A = jet_algebra(2, 4)
    t = _Tally()
    for nn in range(0, 4):
        for tup in product(range(model.dim), repeat=nn + 1):
            if sum(sum(model.monomials[i]) for i in tup) > maxdeg:
                continue
            ch = hh.Chain.elementary(A, tup)
            t.ok(
                ct.connes_mu_chain(model, hh.chain_b(ch)).is_zero(),
                lambda tup=tup: f"boundary of chain {tup} survives the form map",
            )
            lhs = ct.connes_mu_chain(model, hh.connes_B(ch))
            rhs = ct.deRham_d(ct.connes_mu_chain(model, ch))
            t.ok(
                lhs == rhs,
                lambda tup=tup: (
                    f"cyclic operator does not match d on chain {tup}"
                ),
            )
    return t.outcome("chains-to-forms suite")


@_op("schouten-suite", keys=("bivector-samples",))
def _schouten_suite(args, manifest, where):
    """Bracket axioms on multivectors, the cyclic-sum identity for the
    induced bracket on functions, and the leading term of the constant
    exponential product."""
    nbiv = _int_arg(args, "bivector-samples", 10, where)
    t = _Tally()
    # shifted antisymmetry: exhaustive over the monomial basis, deep coefficients
    basis4 = _mv_basis(3, 3, 2)
    for a, b in combinations_with_replacement(range(len(basis4)), 2):
        A, B = basis4[a], basis4[b]
        s = -1 if ((A.k - 1) * (B.k - 1)) % 2 == 0 else 1
        t.ok(
            ct.schouten(A, B) == s * ct.schouten(B, A),
            lambda A=A, B=B: (
                f"antisymmetry fails on {_mv_label(A)} and {_mv_label(B)}"
            ),
        )
    # shifted Jacobi and wedge Leibniz: exhaustive over the linear-coefficient basis
    basis1 = _mv_basis(3, 3, 1)
    for ia, ib, icx in combinations_with_replacement(range(len(basis1)), 3):
        A, B, C = basis1[ia], basis1[ib], basis1[icx]
        a, b, c = A.k, B.k, C.k
        s1 = -1 if ((a - 1) * (c - 1)) % 2 else 1
        s2 = -1 if ((b - 1) * (a - 1)) % 2 else 1
        s3 = -1 if ((c - 1) * (b - 1)) % 2 else 1
        total = (
            s1 * ct.schouten(A, ct.schouten(B, C))
            + s2 * ct.schouten(B, ct.schouten(C, A))
            + s3 * ct.schouten(C, ct.schouten(A, B))
        )
        t.ok(
            total.is_zero(),
            lambda ia=ia, ib=ib, icx=icx: (
                f"graded Jacobi fails on basis triple ({ia}, {ib}, {icx})"
            ),
        )
        s = -1 if ((a - 1) * b) % 2 else 1
        lhs = ct.schouten(A, B.wedge(C))
        rhs = ct.schouten(A, B).wedge(C) + s * B.wedge(ct.schouten(A, C))
        t.ok(
            lhs == rhs,
            lambda ia=ia, ib=ib, icx=icx: (
                f"wedge Leibniz fails on basis triple ({ia}, {ib}, {icx})"
            ),
        )
    # anchoring: functions commute; fields act by derivative
    monos = monomials_upto(3, 3)
    for ea, eb in combinations_with_replacement(monos, 2):
        f = ct.MultiVector.function(Poly.monomial(3, ea))
        g = ct.MultiVector.function(Poly.monomial(3, eb))
        t.ok(
            ct.schouten(f, g).is_zero(),
            lambda ea=ea, eb=eb: f"functions {ea} and {eb} fail to commute",
        )
    for w in range(3):
        for ex in monomials_upto(3, 2):
            X = ct.MultiVector(3, 1, {(w,): Poly.monomial(3, ex)})
            for ef in monomials_upto(3, 2):
                f = Poly.monomial(3, ef)
                want = Poly.monomial(3, ex) * f.diff(w)
                got = ct.schouten(X, ct.MultiVector.function(f))
                t.ok(
                    got == ct.MultiVector.function(want),
                    lambda w=w, ex=ex, ef=ef: (
                        f"field (e{w}, x^{list(ex)}) fails to derive x^{list(ef)}"
                    ),
                )
    # cyclic-sum identity on randomized bivectors, monomial function triples
    rng = random.Random(404)
    for i in range(nbiv):
        piv = _rand_mv(rng, 3, 2, 2)
        jac = ct.jacobiator(piv)
        for ea, eb, ec in combinations_with_replacement(monomials_upto(3, 2), 3):
            f, g, h = (Poly.monomial(3, e) for e in (ea, eb, ec))
            lhs = (
                ct.poisson_bracket(piv, f, ct.poisson_bracket(piv, g, h))
                + ct.poisson_bracket(piv, g, ct.poisson_bracket(piv, h, f))
                + ct.poisson_bracket(piv, h, ct.poisson_bracket(piv, f, g))
            )
            rhs = ct.pairing(
                jac,
                ct.deRham_d(ct.Form.function(f))
                .wedge(ct.deRham_d(ct.Form.function(g)))
                .wedge(ct.deRham_d(ct.Form.function(h))),
            )
            t.ok(
                lhs == rhs,
                lambda i=i, ea=ea, eb=eb, ec=ec: (
                    f"cyclic sum != closure pairing for sampled bivector {i}"
                    f" on monomials {ea}, {eb}, {ec}"
                ),
            )
    # the leading bivector of the constant exponential product is flat
    pi0 = df.leading_poisson(_moyal_plane())
    t.ok(
        ct.jacobiator(pi0).is_zero(),
        lambda: "leading bivector of the exponential product is not flat",
    )
    return t.outcome("multivector bracket suite")


# ------------------------------------------------------------------ homotopy layer

@_op("linfty-suite", keys=())
def _linfty_suite(args, manifest, where):
    """Structure and module sweeps pass on the genuine packagings and
    fail with witnesses on engineered perturbations."""
    t = _Tally()
    A = dual_numbers()
    S = _cochain_dgla(A)
    rep = lf.check_linfty(S, max_arity=3)
    t.ok(rep.ok, lambda: f"cochain bracket table fails: {len(rep.witnesses)} witnesses")
    Ss = _schouten_structure(_schouten_generators())
    rep2 = lf.check_linfty(Ss, max_arity=3)
    t.ok(
        rep2.ok,
        lambda: f"multivector bracket table fails: {len(rep2.witnesses)} witnesses",
    )
    M = _chains_module(A, S)
    rep3 = lf.check_module(M, max_arity=2)
    t.ok(rep3.ok, lambda: f"chains module fails: {len(rep3.witnesses)} witnesses")
    forms = [
        ("one", ct.Form.function(Poly.const(2, 1))),
        ("fx", ct.Form.function(Poly.var(2, 0))),
        ("dx", ct.Form(2, 1, {(0,): Poly.const(2, 1)})),
        ("xdy", ct.Form(2, 1, {(1,): Poly.var(2, 0)})),
        ("vol", ct.Form(2, 2, {(0, 1): Poly.const(2, 1)})),
    ]
    N = lf.LInftyModule(
        Ss,
        lambda a: a.k,
        {
            0: lambda xs, m: ct.deRham_d(m),
            1: lambda xs, m: ct.lie_derivative(xs[0], m),
        },
        forms,
    )
    rep4 = lf.check_module(N, max_arity=2)
    t.ok(rep4.ok, lambda: f"forms module fails: {len(rep4.witnesses)} witnesses")
    # engineered perturbations must fail
    E = hh.basis_cochains(A, 1)[1]
    bad = lf.dgla(
        lambda c: c.arity - 1,
        lambda c: hh.delta(c) + hh.cup(E, c),
        hh.bracket,
        S.generators[:6],
    )
    repb = lf.check_linfty(bad, max_arity=2)
    t.ok(
        not repb.ok,
        lambda: "perturbed differential slipped through the structure sweep",
    )
    badM = lf.LInftyModule(
        S,
        lambda ch: -ch.n,
        {
            0: lambda xs, m: 2 * hh.chain_b(m),
            1: lambda xs, m: hh.lie_action(xs[0], m),
        },
        _chain_samples(A),
    )
    repc = lf.check_module(badM, max_arity=1)
    t.ok(
        not repc.ok,
        lambda: "rescaled boundary slipped through the module sweep",
    )
    return t.outcome(
        "homotopy-structure suite",
        {
            "structure-tuples": rep.checked + rep2.checked,
            "module-tuples": rep3.checked + rep4.checked,
        },
    )


@_op("mc-star", keys=("star",))
def _mc_star(args, manifest, where):
    """Associativity of the exponential product, flatness of its element
    in the operator complex, and the per-order correspondence between
    associativity defects and flatness residuals on a counterexample."""
    t = _Tally()
    if "star" in args:
        label = args["star"]
        s = manifest.resolve(label, "star-product", where)
    else:
        label = "moyal-half"
        s = _moyal_plane()
    S = _operator_dgla()
    rep = df.check_associativity(s)
    t.ok(
        rep.ok,
        lambda: (
            f"{label}: associativity fails at orders"
            f" {sorted({o for _, o, _ in rep.witnesses})}"
        ),
    )
    res = lf.mc_residual(S, df.star_to_mc(s))
    t.ok(
        not res,
        lambda: f"{label}: flatness residual at orders {sorted(res)}",
    )
    # engineered counterexample: defect orders and residual orders agree,
    # and the residual operator evaluates to the associator
    bad = _skewed_product()
    badrep = df.check_associativity(bad, degree=2)
    badres = lf.mc_residual(S, df.star_to_mc(bad))
    orders = sorted({o for _, o, _ in badrep.witnesses})
    t.ok(
        orders == sorted(badres) == [2],
        lambda: (
            f"counterexample orders disagree: defects {orders},"
            f" residuals {sorted(badres)}"
        ),
    )
    if 2 in badres:
        A2 = badres[2]
        for ea, eb, ec in product(monomials_upto(2, 2), repeat=3):
            fa, fb, fc = (Poly.monomial(2, e) for e in (ea, eb, ec))
            lhs = bad.star_series(bad.star(fa, fb), {0: fc})
            rhs = bad.star_series({0: fa}, bad.star(fb, fc))
            defect = lhs.get(2, Poly.zero(2)) - rhs.get(2, Poly.zero(2))
            t.ok(
                A2.apply([fa, fb, fc]) == defect,
                lambda ea=ea, eb=eb, ec=ec: (
                    f"residual != associator on monomials {ea}, {eb}, {ec}"
                ),
            )
    return t.outcome("flatness/associativity suite", {"star": label})


@_op("gerstenhaber-suite", keys=())
def _gerstenhaber_suite(args, manifest, where):
    """Graded product/bracket compatibility laws on multivectors, plain and
    extended over the odd parameter, plus the square-zero odd operator whose
    second-order defect generates the bracket."""
    t = _Tally()
    gens3 = []
    for k in range(3):
        for key in combinations(range(2), k):
            for e in monomials_upto(2, 3):
                label = f"v{k}{''.join(map(str, key))}_{e[0]}{e[1]}"
                gens3.append(
                    (label, ct.MultiVector(2, k, {key: Poly.monomial(2, e)}))
                )
    plain = lf.GerstenhaberData(
        lambda a: a.k, lambda a, b: a.wedge(b), ct.schouten, gens3
    )
    rep = lf.check_gerstenhaber(plain)
    t.ok(
        rep.ok,
        lambda: (
            f"plain laws fail: {sorted({law for law, _, _ in rep.witnesses})}"
        ),
    )
    gens1 = [(n, g) for n, g in gens3 if g.c and max(
        sum(e) for p in g.c.values() for e in p.c) <= 1]
    E = lf.epsilon_extend(
        lambda a: a.k, lambda a, b: a.wedge(b), ct.schouten, gens1
    )
    repE = lf.check_gerstenhaber(E)
    t.ok(
        repE.ok,
        lambda: (
            f"extended laws fail: {sorted({law for law, _, _ in repE.witnesses})}"
        ),
    )
    # the odd operator's defect against the Leibniz rule is the bracket
    for nx, x0 in gens1:
        for ny, y0 in gens1:
            x, y = E.embed(x0), E.embed(y0)
            k = x.degree
            sgn = -1 if k % 2 else 1
            lhs = E.delta(E.mul(x, y)) - E.mul(E.delta(x), y) - sgn * E.mul(
                x, E.delta(y)
            )
            t.ok(
                lhs == sgn * E.bracket(x, y),
                lambda nx=nx, ny=ny: (
                    f"second-order defect != bracket on ({nx}, {ny})"
                ),
            )
    return t.outcome(
        "graded-product/bracket suite",
        {"plain-checks": rep.checked, "extended-checks": repE.checked},
    )


# ------------------------------------------------------------------ transport layer

@_op("pipeline-chain-maps", keys=("planes", "coefficient-cap"))
def _pipeline_chain_maps(args, manifest, where):
    """Every stage of the weighted-form composition commutes with its
    displayed differentials, on monomial form samples."""
    planes = _int_list_arg(args, "planes", (1, 2), where)
    cap = _int_arg(args, "coefficient-cap", 2, where, minimum=0)
    t = _Tally()
    total = 0
    for n in planes:
        sd = ah.SymplecticData(n)
        samples = [ah.SeriesForm.wrap(f) for f in _form_samples(sd, cap)]
        rep = ah.check_pipeline_chain_maps(sd, samples)
        total += rep.checked
        t.ok(
            rep.ok,
            lambda n=n, rep=rep: (
                f"{len(rep.witnesses)} stage/sample pairs fail at n={n}"
            ),
        )
    return t.outcome("pipeline chain-map suite", {"pairs-checked": total})


@_op("exp-contract", keys=("max-n", "weights"))
def _exp_contract(args, manifest, where):
    """The exponential-contraction identity on volume powers, for each
    weight monomial."""
    max_n = _int_arg(args, "max-n", 4, where)
    weights = args.get("weights", ["t", "u", "t/u"])
    if not isinstance(weights, list) or not all(
        isinstance(w, str) for w in weights
    ):
        raise ManifestError(f"{where}: weights must be a list of strings")
    t = _Tally()
    for n in range(1, max_n + 1):
        for z in weights:
            try:
                rep = ah.exp_contract_identity(n, z)
            except ValueError as e:
                raise ManifestError(f"{where}: {e}")
            t.ok(
                rep.ok,
                lambda n=n, z=z: f"identity fails at n={n}, weight {z}",
            )
    return t.outcome("exponential-contraction suite")


@_op("flat-transport", keys=("planes",))
def _flat_transport(args, manifest, where):
    """The composite on the flat model is multiplication by its value at 1,
    and that value is the alternating volume-power series."""
    planes = _int_list_arg(args, "planes", (1, 2), where)
    t = _Tally()
    for n in planes:
        sd = ah.SymplecticData(n)
        one = ah.SeriesForm.wrap(ct.Form.function(Poly.const(sd.nvars, 1)))
        got = ah.nu0(sd, one)
        want = ah.SeriesForm.zero(sd.nvars)
        for j in range(n + 1):
            want._add(-j, -j, Fraction((-1) ** j) * sd.omega_power(j))
        t.ok(
            got == want,
            lambda n=n: f"value at 1 is not the alternating volume series (n={n})",
        )
        # function-linearity on coordinate multiples of sample forms
        x0 = Poly.var(sd.nvars, 0)
        for f in _form_samples(sd, 1):
            lhs = ah.nu0(sd, ah.SeriesForm.wrap(f.__rmul__(x0)))
            rhs = ah.nu0(sd, ah.SeriesForm.wrap(f)).map_form(
                lambda g: g.__rmul__(x0)
            )
            t.ok(
                lhs == rhs,
                lambda n=n, f=f: (
                    f"function-linearity fails on a degree-{f.k} sample (n={n})"
                ),
            )
    return t.outcome("flat-transport suite")


@_op("ahat-flat", keys=("planes", "nt-values"))
def _ahat_flat(args, manifest, where):
    """The flat-model class expansion is the constant 1, with every
    positive-degree part certified exact, at each series cap."""
    planes = _int_list_arg(args, "planes", (1, 2), where)
    nts = _int_list_arg(args, "nt-values", (2, 3, 4), where, minimum=2)
    t = _Tally()
    classes = {}
    for n in planes:
        for nt in nts:
            rep = ah.ahat_flat(n, nt)
            classes[f"n={n},nt={nt}"] = sorted(
                (list(k), str(v)) for k, v in rep.klass.items()
            )
            t.ok(
                rep.ok and rep.klass == {(0, 0): Fraction(1)},
                lambda n=n, nt=nt, rep=rep: (
                    f"class at n={n}, nt={nt} is {rep.klass}"
                    + ("" if rep.ok else " with uncertified parts")
                ),
            )
    return t.outcome("flat class expansion", {"classes": classes})


@_op(
    "degeneration-probe",
    keys=("multivector", "coefficient-cap", "nt-values", "expect-degenerate"),
)
def _degeneration_probe(args, manifest, where):
    """Graded rank tables of the filtered complex against the split
    prediction; a finite-cap probe, not a proof."""
    if "multivector" in args:
        label = args["multivector"]
        piv = manifest.resolve(label, "multivector", where)
        if piv.k != 2:
            raise ManifestError(f"{where}: {label!r} must have degree 2")
    else:
        label = "standard-plane"
        piv = ct.MultiVector(2, 2, {(0, 1): Poly.const(2, 1)})
    cap = _int_arg(args, "coefficient-cap", 2, where, minimum=0)
    nts = _int_list_arg(args, "nt-values", (2, 3, 4), where)
    tables = {}
    flags = {}
    for nt in nts:
        try:
            table = ah.spectral_degeneration_probe(piv, cap, nt)
        except ValueError as e:
            return JobOutcome(
                "fail",
                f"probe of {label} refused at nt={nt}",
                {"multivector": label},
                [str(e)],
            )
        tables[f"nt={nt}"] = [
            [r.grade, r.dim, r.homology, r.predicted] for r in table.rows
        ]
        flags[f"nt={nt}"] = table.degenerate
    data = {"multivector": label, "rows": tables, "degenerate": flags}
    expect = args.get("expect-degenerate")
    if expect is None:
        return JobOutcome("info", f"probe tables for {label}", data)
    if not isinstance(expect, bool):
        raise ManifestError(f"{where}: expect-degenerate must be true or false")
    bad = [key for key, flag in sorted(flags.items()) if flag is not expect]
    if bad:
        return JobOutcome(
            "fail",
            f"probe of {label} contradicts the expectation",
            data,
            [f"{key}: degenerate={flags[key]}, expected {expect}" for key in bad],
        )
    return JobOutcome("pass", f"probe of {label} as expected at all caps", data)


@_op("trace-defect", keys=("trace", "star", "max-degree", "expect"))
def _trace_defect(args, manifest, where):
    """Commutator defect of a candidate trace against a star product, plus
    the induced-bracket defect against its leading bivector."""
    if "trace" not in args or "star" not in args:
        raise ManifestError(f"{where}: needs 'trace' and 'star' object names")
    tlabel, tau = args["trace"], manifest.resolve(args["trace"], "trace", where)
    slabel, s = args["star"], manifest.resolve(args["star"], "star-product", where)
    degree = _int_arg(args, "max-degree", s.model.cap, where, minimum=0)
    rep = df.trace_defect(tau, s, degree=degree)
    data = {
        "trace": tlabel,
        "star": slabel,
        "pairs-checked": rep.checked,
        "nonzero-pairs": len(rep.witnesses),
    }
    try:
        pi0 = df.leading_poisson(s)
        prep = df.poisson_defect(tau, pi0, degree=degree)
        data["bracket-nonzero-pairs"] = len(prep.witnesses)
    except ValueError:
        data["bracket-nonzero-pairs"] = "no leading bivector"
    witnesses = [
        f"tau(x^{list(ea)} * x^{list(eb)} - x^{list(eb)} * x^{list(ea)}) = {val}"
        for (ea, eb), val in rep.witnesses[:MAX_WITNESSES]
    ]
    expect = args.get("expect")
    if expect is None:
        return JobOutcome(
            "info", f"trace defect of {tlabel} against {slabel}", data, witnesses
        )
    if expect not in ("zero", "nonzero"):
        raise ManifestError(f"{where}: expect must be zero or nonzero")
    good = rep.ok if expect == "zero" else not rep.ok
    if good:
        return JobOutcome(
            "pass", f"trace defect of {tlabel} is {expect} as expected", data
        )
    return JobOutcome(
        "fail",
        f"trace defect of {tlabel} is not {expect}",
        data,
        witnesses,
    )


# ------------------------------------------------------------------ built-in suite

SUITE_NAME = "core-identities"


def expand_suite(args, model, name):
    """The canonical job battery: every identity family at default caps."""
    suite = args.get("suite", SUITE_NAME)
    extra = set(args) - {"suite"}
    if extra:
        raise ManifestError(
            f"job {name!r}: unknown argument {sorted(extra)[0]!r} for op 'suite'"
        )
    if suite != SUITE_NAME:
        raise ManifestError(
            f"job {name!r}: unknown suite {suite!r} (have {SUITE_NAME})"
        )
    return [
        ("core/identities", "identity-suite", {}),
        ("core/chains", "chain-suite", {}),
        (
            "core/betti",
            "betti-agreement",
            {"algebra": "dual-numbers", "top": 4, "expect": [2, 1, 1, 1, 1]},
        ),
        ("core/hkr", "hkr-suite", {}),
        ("core/mu", "mu-suite", {}),
        ("core/linfty", "linfty-suite", {}),
        ("core/mc-star", "mc-star", {}),
        ("core/schouten", "schouten-suite", {}),
        ("core/pipeline", "pipeline-chain-maps", {"planes": [1, 2]}),
        ("core/exp-contract", "exp-contract", {"max-n": 4}),
        ("core/flat-transport", "flat-transport", {"planes": [1, 2]}),
        (
            "core/ahat-flat",
            "ahat-flat",
            {"planes": [1, 2], "nt-values": [2, 3, 4]},
        ),
        (
            "core/probe",
            "degeneration-probe",
            {"coefficient-cap": 2, "nt-values": [2, 3, 4], "expect-degenerate": True},
        ),
        ("core/gerstenhaber", "gerstenhaber-suite", {}),
    ]
