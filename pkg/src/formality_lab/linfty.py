"""Strong-homotopy structure checkers on finite bracket tables.

A structure is a degree function plus a table of n-ary brackets; the
generalized Jacobi, morphism, and module identities are evaluated
directly on supplied element tuples.  Brackets are the "natural" ones
(differential, binary bracket, ...), and every application is dressed
with the suspension sign from core.signs.decalage_sign, so the identities
take the pure shifted-Koszul form: a differential graded Lie algebra
packaged as (l1, l2) passes with no manual sign threading.

Elements are anything with +, scalar *, ==, is_zero (cochains, chains,
multivectors, forms, operator tables, epsilon pairs).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .core.signs import decalage_sign, unshuffle_sign


def _accumulate(acc, coeff, elem):
    if coeff == 0 or elem is None or elem.is_zero():
        return acc
    scaled = coeff * elem if coeff != 1 else elem
    return scaled if acc is None else acc + scaled


class LInftyStructure:
    """Bracket table: brackets[n] is an n-ary callable of degree 2-n.

    Missing arities are zero.  ``generators`` is a list of (name, element)
    pairs the checkers sample; ``degree`` maps an element to its integer
    grading.
    """

    def __init__(self, degree, brackets, generators=(), nar=None):
        self.degree = degree
        self.brackets = dict(brackets)
        self.generators = list(generators)
        self.nar = nar if nar is not None else (max(self.brackets) if self.brackets else 0)

    def apply(self, n, args):
        fn = self.brackets.get(n)
        if fn is None:
            return None
        return fn(list(args))


def dgla(degree, differential, bracket_fn, generators=(), nar=2):
    """Package a differential graded Lie algebra as a structure table."""
    brackets = {2: lambda args: bracket_fn(args[0], args[1])}
    if differential is not None:
        brackets[1] = lambda args: differential(args[0])
    return LInftyStructure(degree, brackets, generators, nar)


class CheckReport:
    """Outcome of an identity sweep: pass/fail plus explicit witnesses."""

    def __init__(self, checked, witnesses, max_arity):
        self.checked = checked
        self.witnesses = witnesses  # list of (names, arity, residual)
        self.max_arity = max_arity

    @property
    def ok(self):
        return not self.witnesses

    def __repr__(self):
        state = "pass" if self.ok else f"{len(self.witnesses)} violations"
        return f"CheckReport({state}, {self.checked} tuples, arity<={self.max_arity})"


def linfty_residual(S, elements):
    """Left side of the generalized Jacobi identity on one tuple."""
    n = len(elements)
    degs = [S.degree(x) for x in elements]
    acc = None
    for p in range(1, n + 1):
        if p not in S.brackets:
            continue
        for I in combinations(range(n), p):
            block = [elements[i] for i in I]
            inner = S.apply(p, block)
            if inner is None or inner.is_zero():
                continue
            rest_idx = [i for i in range(n) if i not in I]
            if (len(rest_idx) + 1) not in S.brackets:
                continue
            eps = unshuffle_sign(n, I, degs, shift=1)
            th_in = decalage_sign([degs[i] for i in I])
            ideg = sum(degs[i] for i in I) + 2 - p
            outer_degs = [ideg] + [degs[i] for i in rest_idx]
            th_out = decalage_sign(outer_degs)
            term = S.apply(len(rest_idx) + 1, [inner] + [elements[i] for i in rest_idx])
            acc = _accumulate(acc, eps * th_in * th_out, term)
    return acc


def check_linfty(S, max_arity=3, tuples=None):
    """Sweep the generalized Jacobi identity over generator tuples."""
    from itertools import combinations_with_replacement

    witnesses = []
    checked = 0
    if tuples is None:
        tuples = []
        for n in range(1, max_arity + 1):
            tuples.extend(combinations_with_replacement(S.generators, n))
    for tup in tuples:
        names = [t[0] for t in tup]
        elems = [t[1] for t in tup]
        res = linfty_residual(S, elems)
        checked += 1
        if res is not None and not res.is_zero():
            witnesses.append((tuple(names), len(elems), res))
    return CheckReport(checked, witnesses, max_arity)


# ------------------------------------------------------------------ morphisms


class LInftyMorphism:
    """maps[n] : n source elements -> target element, degree 1-n."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = dict(maps)

    def apply(self, n, args):
        fn = self.maps.get(n)
        if fn is None:
            return None
        return fn(list(args))


def ordered_partitions(indices, k):
    """All ordered k-tuples of disjoint increasing blocks covering indices."""
    indices = tuple(indices)
    if k == 0:
        if not indices:
            yield ()
        return
    if k == 1:
        if indices:
            yield (indices,)
        return
    n = len(indices)
    for size in range(1, n - k + 2):
        for block in combinations(indices, size):
            remaining = tuple(i for i in indices if i not in block)
            for tail in ordered_partitions(remaining, k - 1):
                yield (block,) + tail


def morphism_residual(f, elements):
    """Difference of the two sides of the morphism identity on one tuple."""
    S, T = f.source, f.target
    n = len(elements)
    degs = [S.degree(x) for x in elements]

    lhs = None
    for p in range(1, n + 1):
        if p not in S.brackets:
            continue
        for I in combinations(range(n), p):
            block = [elements[i] for i in I]
            inner = S.apply(p, block)
            if inner is None or inner.is_zero():
                continue
            rest_idx = [i for i in range(n) if i not in I]
            eps = unshuffle_sign(n, I, degs, shift=1)
            th_in = decalage_sign([degs[i] for i in I])
            ideg = sum(degs[i] for i in I) + 2 - p
            outer_degs = [ideg] + [degs[i] for i in rest_idx]
            th_out = decalage_sign(outer_degs)
            term = f.apply(len(rest_idx) + 1, [inner] + [elements[i] for i in rest_idx])
            lhs = _accumulate(lhs, eps * th_in * th_out, term)

    rhs = None
    for k in range(1, n + 1):
        if k not in T.brackets:
            continue
        inv_k = Fraction(1, 1)
        for j in range(2, k + 1):
            inv_k /= j
        for blocks in ordered_partitions(range(n), k):
            perm = [i for b in blocks for i in b]
            eps = _perm_sign_shifted(perm, degs)
            coeff = eps * inv_k
            args = []
            arg_degs = []
            dead = False
            for b in blocks:
                fb = f.apply(len(b), [elements[i] for i in b])
                if fb is None or fb.is_zero():
                    dead = True
                    break
                coeff *= decalage_sign([degs[i] for i in b])
                args.append(fb)
                arg_degs.append(sum(degs[i] for i in b) + 1 - len(b))
            if dead:
                continue
            coeff *= decalage_sign(arg_degs)
            rhs = _accumulate(rhs, coeff, T.apply(k, args))

    if lhs is None:
        return rhs if rhs is None else (-1) * rhs
    if rhs is None:
        return lhs
    return lhs - rhs


def _perm_sign_shifted(perm, degs):
    """Koszul sign (shift 1) of rearranging 0..n-1 into ``perm``."""
    from .core.signs import koszul_sign

    return koszul_sign(tuple(perm), tuple(degs), shift=1)


def check_morphism(f, max_arity=3, tuples=None):
    from itertools import combinations_with_replacement

    witnesses = []
    checked = 0
    if tuples is None:
        tuples = []
        for n in range(1, max_arity + 1):
            tuples.extend(combinations_with_replacement(f.source.generators, n))
    for tup in tuples:
        names = [t[0] for t in tup]
        elems = [t[1] for t in tup]
        res = morphism_residual(f, elems)
        checked += 1
        if res is not None and not res.is_zero():
            witnesses.append((tuple(names), len(elems), res))
    return CheckReport(checked, witnesses, max_arity)


# ------------------------------------------------------------------ modules


class LInftyModule:
    """actions[p] : (p algebra elements, module element) -> module element.

    actions[0] is the module differential.  ``mdegree`` grades module
    elements (only its parity enters the signs).
    """

    def __init__(self, structure, mdegree, actions, samples=()):
        self.structure = structure
        self.mdegree = mdegree
        self.actions = dict(actions)
        self.samples = list(samples)

    def act(self, p, xs, m):
        fn = self.actions.get(p)
        if fn is None:
            return None
        return fn(list(xs), m)


def module_residual(M, elements, m):
    """The module identity combines two families: brackets feeding the
    action, and nested actions.  The nested family carries the extra sign
    of the odd inner operator passing the untouched front block."""
    S = M.structure
    n = len(elements)
    degs = [S.degree(x) for x in elements]
    mdeg = M.mdegree(m)
    acc = None

    # family 1: l_p on a block, then the action of what remains
    for p in range(1, n + 1):
        if p not in S.brackets:
            continue
        for I in combinations(range(n), p):
            block = [elements[i] for i in I]
            inner = S.apply(p, block)
            if inner is None or inner.is_zero():
                continue
            rest_idx = [i for i in range(n) if i not in I]
            if (len(rest_idx) + 1) not in M.actions:
                continue
            eps = unshuffle_sign(n, I, degs, shift=1)
            th_in = decalage_sign([degs[i] for i in I])
            ideg = sum(degs[i] for i in I) + 2 - p
            outer_degs = [ideg] + [degs[i] for i in rest_idx] + [mdeg]
            th_out = decalage_sign(outer_degs)
            term = M.act(
                len(rest_idx) + 1, [inner] + [elements[i] for i in rest_idx], m
            )
            acc = _accumulate(acc, eps * th_in * th_out, term)

    # family 2: act with one block on m, then act with the complement
    for q in range(0, n + 1):
        if q not in M.actions:
            continue
        for J in combinations(range(n), q):
            rest_idx = [i for i in range(n) if i not in J]
            if len(rest_idx) not in M.actions:
                continue
            inner = M.act(q, [elements[i] for i in J], m)
            if inner is None or inner.is_zero():
                continue
            eps = unshuffle_sign(n, tuple(rest_idx), degs, shift=1)
            # the inner (odd) operator passes the untouched front block
            pass_sign = -1 if sum(degs[i] - 1 for i in rest_idx) % 2 else 1
            th_in = decalage_sign([degs[i] for i in J] + [mdeg])
            inner_mdeg = sum(degs[i] for i in J) + mdeg + 1 - q
            th_out = decalage_sign([degs[i] for i in rest_idx] + [inner_mdeg])
            term = M.act(len(rest_idx), [elements[i] for i in rest_idx], inner)
            acc = _accumulate(acc, eps * pass_sign * th_in * th_out, term)

    return acc


def check_module(M, max_arity=2, tuples=None, module_samples=None):
    from itertools import combinations_with_replacement

    witnesses = []
    checked = 0
    if tuples is None:
        gens = M.structure.generators
        tuples = []
        for n in range(0, max_arity + 1):
            tuples.extend(combinations_with_replacement(gens, n))
    if module_samples is None:
        module_samples = M.samples
    for tup in tuples:
        names = [t[0] for t in tup]
        elems = [t[1] for t in tup]
        for mname, melem in module_samples:
            res = module_residual(M, elems, melem)
            checked += 1
            if res is not None and not res.is_zero():
                witnesses.append((tuple(names + [mname]), len(elems), res))
    return CheckReport(checked, witnesses, max_arity)


class LInftyModuleMorphism:
    """maps[q] : (q algebra elements, M element) -> N element, degree -q."""

    def __init__(self, source_module, target_module, maps):
        if source_module.structure is not target_module.structure:
            raise ValueError("modules must share the algebra structure")
        self.source = source_module
        self.target = target_module
        self.maps = dict(maps)

    def apply(self, q, xs, m):
        fn = self.maps.get(q)
        if fn is None:
            return None
        return fn(list(xs), m)


def module_morphism_residual(phi, elements, m):
    S = phi.source.structure
    M, N = phi.source, phi.target
    n = len(elements)
    degs = [S.degree(x) for x in elements]
    mdeg = M.mdegree(m)
    acc = None

    # bracket into the morphism
    for p in range(1, n + 1):
        if p not in S.brackets:
            continue
        for I in combinations(range(n), p):
            inner = S.apply(p, [elements[i] for i in I])
            if inner is None or inner.is_zero():
                continue
            rest_idx = [i for i in range(n) if i not in I]
            eps = unshuffle_sign(n, I, degs, shift=1)
            th_in = decalage_sign([degs[i] for i in I])
            ideg = sum(degs[i] for i in I) + 2 - p
            th_out = decalage_sign([ideg] + [degs[i] for i in rest_idx] + [mdeg])
            term = phi.apply(
                len(rest_idx) + 1, [inner] + [elements[i] for i in rest_idx], m
            )
            acc = _accumulate(acc, eps * th_in * th_out, term)

    # source action, then morphism (odd inner operator passes the front)
    for q in range(0, n + 1):
        for J in combinations(range(n), q):
            rest_idx = [i for i in range(n) if i not in J]
            inner = M.act(q, [elements[i] for i in J], m)
            if inner is None or inner.is_zero():
                continue
            eps = unshuffle_sign(n, tuple(rest_idx), degs, shift=1)
            pass_sign = -1 if sum(degs[i] - 1 for i in rest_idx) % 2 else 1
            th_in = decalage_sign([degs[i] for i in J] + [mdeg])
            inner_mdeg = sum(degs[i] for i in J) + mdeg + 1 - q
            th_out = decalage_sign([degs[i] for i in rest_idx] + [inner_mdeg])
            term = phi.apply(len(rest_idx), [elements[i] for i in rest_idx], inner)
            acc = _accumulate(acc, eps * pass_sign * th_in * th_out, term)

    # morphism, then target action (the morphism is even: no pass sign)
    for q in range(0, n + 1):
        for J in combinations(range(n), q):
            rest_idx = [i for i in range(n) if i not in J]
            inner = phi.apply(q, [elements[i] for i in J], m)
            if inner is None or inner.is_zero():
                continue
            eps = unshuffle_sign(n, tuple(rest_idx), degs, shift=1)
            th_in = decalage_sign([degs[i] for i in J] + [mdeg])
            inner_mdeg = sum(degs[i] for i in J) + mdeg - q
            th_out = decalage_sign([degs[i] for i in rest_idx] + [inner_mdeg])
            term = N.act(len(rest_idx), [elements[i] for i in rest_idx], inner)
            acc = _accumulate(acc, -eps * th_in * th_out, term)

    return acc


def check_module_morphism(phi, max_arity=2, tuples=None, module_samples=None):
    from itertools import combinations_with_replacement

    witnesses = []
    checked = 0
    if tuples is None:
        gens = phi.source.structure.generators
        tuples = []
        for n in range(0, max_arity + 1):
            tuples.extend(combinations_with_replacement(gens, n))
    if module_samples is None:
        module_samples = phi.source.samples
    for tup in tuples:
        names = [t[0] for t in tup]
        elems = [t[1] for t in tup]
        for mname, melem in module_samples:
            res = module_morphism_residual(phi, elems, melem)
            checked += 1
            if res is not None and not res.is_zero():
                witnesses.append((tuple(names + [mname]), len(elems), res))
    return CheckReport(checked, witnesses, max_arity)


# ------------------------------------------------------------------ Maurer-Cartan


class MCElement:
    """Degree-1 element with positive formal-parameter orders: parts[k]
    is the coefficient of the k-th power, 1 <= k <= nt."""

    def __init__(self, parts, nt):
        self.nt = nt
        self.parts = {}
        for k, v in parts.items():
            if k < 1:
                raise ValueError("gauge/deformation series start at order 1")
            if k <= nt and v is not None and not v.is_zero():
                self.parts[k] = v

    def is_zero(self):
        return not self.parts

    def __eq__(self, other):
        return (
            isinstance(other, MCElement)
            and self.nt == other.nt
            and self.parts == other.parts
        )

    def __add__(self, other):
        if self.nt != other.nt:
            raise ValueError("order caps differ")
        out = dict(self.parts)
        for k, v in other.parts.items():
            cur = out.get(k)
            s = v if cur is None else cur + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return MCElement(out, self.nt)

    def __rmul__(self, scalar):
        return MCElement({k: scalar * v for k, v in self.parts.items()}, self.nt)


def _series_bracket(S, n, series_list, nt):
    """Order-by-order n-ary bracket of formal series elements."""
    from itertools import product as _prod

    out = {}
    orders = [sorted(s.parts) for s in series_list]
    for combo in _prod(*orders):
        k = sum(combo)
        if k > nt:
            continue
        val = S.apply(n, [series_list[i].parts[combo[i]] for i in range(n)])
        if val is None or val.is_zero():
            continue
        cur = out.get(k)
        s = val if cur is None else cur + val
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def mc_residual(S, pi, max_arity=None):
    """sum_n (1/n!) [pi, ..., pi]_n per formal order; zero iff flat."""
    if max_arity is None:
        max_arity = max(S.brackets) if S.brackets else 0
    total = {}
    fact = 1
    for n in range(1, max_arity + 1):
        fact *= n
        if n not in S.brackets:
            continue
        if n > pi.nt and n > 1:
            # each argument carries at least one order: contributions of
            # arity beyond the cap vanish
            continue
        contrib = _series_bracket(S, n, [pi] * n, pi.nt)
        for k, v in contrib.items():
            v = Fraction(1, fact) * v
            cur = total.get(k)
            s = v if cur is None else cur + v
            if s.is_zero():
                total.pop(k, None)
            else:
                total[k] = s
    return total


def gauge(S, X, pi):
    """Gauge transport of a flat element along a degree-0 series X.

    Computes the series whose sum with the differential equals the
    conjugate exp(ad_X)(differential + pi); the differential's own
    contribution enters through -l1(X) at the first step.  Strict
    (two-bracket) structures only.
    """
    if any(n > 2 for n in S.brackets):
        raise ValueError("gauge transport implemented for strict structures only")
    nt = pi.nt
    if X.nt != nt:
        raise ValueError("order caps differ")

    def ad_X(series_parts):
        out = {}
        for kx, vx in X.parts.items():
            for k2, v2 in series_parts.items():
                k = kx + k2
                if k > nt:
                    continue
                val = S.apply(2, [vx, v2])
                if val is None or val.is_zero():
                    continue
                cur = out.get(k)
                s = val if cur is None else cur + val
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    # ad_X(differential + pi) = [X, pi] - l1(X)
    current = ad_X(dict(pi.parts))
    if 1 in S.brackets:
        for kx, vx in X.parts.items():
            if kx > nt:
                continue
            dv = S.apply(1, [vx])
            if dv is None or dv.is_zero():
                continue
            cur = current.get(kx)
            s = (-1) * dv if cur is None else cur - dv
            if s.is_zero():
                current.pop(kx, None)
            else:
                current[kx] = s

    total = dict(pi.parts)
    fact = 1
    j = 1
    while current:
        coeff = Fraction(1, fact)
        for k, v in current.items():
            add = coeff * v
            cur = total.get(k)
            s = add if cur is None else cur + add
            if s.is_zero():
                total.pop(k, None)
            else:
                total[k] = s
        j += 1
        fact *= j
        # every ad_X raises the minimal order by at least one
        if j > nt:
            break
        current = ad_X(current)
    return MCElement(total, nt)


def mc_pushforward(f, pi):
    """sum_n (1/n!) f_n(pi, ..., pi) as a series in the target."""
    nt = pi.nt
    total = {}
    fact = 1
    for n in sorted(f.maps):
        # build factorial incrementally over the arities present
        fct = 1
        for j in range(2, n + 1):
            fct *= j
        if n > nt:
            continue
        contrib = {}
        from itertools import product as _prod

        orders = [sorted(pi.parts)] * n
        for combo in _prod(*orders):
            k = sum(combo)
            if k > nt:
                continue
            val = f.apply(n, [pi.parts[c] for c in combo])
            if val is None or val.is_zero():
                continue
            cur = contrib.get(k)
            s = val if cur is None else cur + val
            if s.is_zero():
                contrib.pop(k, None)
            else:
                contrib[k] = s
        for k, v in contrib.items():
            v = Fraction(1, fct) * v
            cur = total.get(k)
            s = v if cur is None else cur + v
            if s.is_zero():
                total.pop(k, None)
            else:
                total[k] = s
    return MCElement(total, nt)


# ------------------------------------------------------- odd-parameter extension


class EpsilonElement:
    """Pair (body, tail) standing for body + e*tail, where e is an odd
    square-zero parameter of degree +1.  A homogeneous element of degree k
    has body of degree k and tail of degree k-1.  Either part may be None
    (zero)."""

    __slots__ = ("body", "tail", "degree")

    def __init__(self, body, tail, degree):
        self.body = None if (body is None or body.is_zero()) else body
        self.tail = None if (tail is None or tail.is_zero()) else tail
        self.degree = degree

    def is_zero(self):
        return self.body is None and self.tail is None

    def __eq__(self, other):
        if not isinstance(other, EpsilonElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (
            self.degree == other.degree
            and _part_eq(self.body, other.body)
            and _part_eq(self.tail, other.tail)
        )

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("degree mismatch in sum")
        return EpsilonElement(
            _part_add(self.body, other.body),
            _part_add(self.tail, other.tail),
            self.degree,
        )

    def __neg__(self):
        return -1 * self

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        body = None if self.body is None else scalar * self.body
        tail = None if self.tail is None else scalar * self.tail
        return EpsilonElement(body, tail, self.degree)

    def __repr__(self):
        return f"EpsilonElement(deg={self.degree}, body={self.body!r}, tail={self.tail!r})"


def _part_eq(a, b):
    if a is None:
        return b is None or b.is_zero()
    if b is None:
        return a.is_zero()
    return a == b


def _part_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


class EpsilonAlgebra:
    """Graded-commutative product and odd bracket extended over an odd
    parameter e of degree +1.

    The extended product twists the naive bilinear extension by the
    bracket of the two bodies; the extended bracket drops the e*e terms.
    ``delta`` differentiates along e, and together with the product it
    regenerates the bracket (a second-order-operator identity whose
    overall sign check_gerstenhaber verifies).
    """

    def __init__(self, degree, mul, bracket, generators=()):
        self._deg = degree
        self._mul = mul
        self._brk = bracket
        self.generators = list(generators)

    def embed(self, a):
        return EpsilonElement(a, None, self._deg(a))

    def embed_tail(self, b):
        return EpsilonElement(None, b, self._deg(b) + 1)

    def degree(self, x):
        return x.degree

    def mul(self, x, y):
        k = x.degree
        body = None if (x.body is None or y.body is None) else self._mul(x.body, y.body)
        sgn = -1 if k % 2 else 1
        tail = None
        if x.tail is not None and y.body is not None:
            tail = _part_add(tail, self._mul(x.tail, y.body))
        if x.body is not None and y.tail is not None:
            tail = _part_add(tail, sgn * self._mul(x.body, y.tail))
        if x.body is not None and y.body is not None:
            tail = _part_add(tail, sgn * self._brk(x.body, y.body))
        return EpsilonElement(body, tail, k + y.degree)

    def bracket(self, x, y):
        k = x.degree
        body = None if (x.body is None or y.body is None) else self._brk(x.body, y.body)
        sgn = -1 if (k + 1) % 2 else 1
        tail = None
        if x.tail is not None and y.body is not None:
            tail = _part_add(tail, self._brk(x.tail, y.body))
        if x.body is not None and y.tail is not None:
            tail = _part_add(tail, sgn * self._brk(x.body, y.tail))
        return EpsilonElement(body, tail, k + y.degree - 1)

    def delta(self, x):
        """Derivative along the odd parameter: body + e*tail -> tail."""
        return EpsilonElement(x.tail, None, x.degree - 1)


class GerstenhaberData:
    """Plain graded product + odd bracket, same interface as the extended
    algebra but without a delta operator."""

    def __init__(self, degree, mul, bracket, generators=()):
        self.degree = degree
        self.mul = mul
        self.bracket = bracket
        self.generators = list(generators)
        self.delta = None


def epsilon_extend(degree, mul, bracket, generators=()):
    """Extend (V, product, bracket) over the odd parameter; the generator
    list of the result contains both the embedded generators and their
    parameter multiples."""
    E = EpsilonAlgebra(degree, mul, bracket)
    gens = []
    for name, g in generators:
        gens.append((name, E.embed(g)))
        gens.append(("e*" + name, E.embed_tail(g)))
    E.generators = gens
    return E


def check_gerstenhaber(A, max_triples=None):
    """Verify the graded-commutative / odd-Lie / Leibniz laws on the
    generators of A, plus the square-zero and bracket-generating laws of
    delta when A has one.  Returns a CheckReport whose witnesses are
    (law, generator names, residual)."""
    deg = A.degree
    mul = A.mul
    brk = A.bracket
    delta = getattr(A, "delta", None)
    gens = A.generators
    witnesses = []
    checked = 0

    def sgn(e):
        return -1 if e % 2 else 1

    for i, (nx, x) in enumerate(gens):
        for ny, y in gens[i:]:
            dx, dy = deg(x), deg(y)
            checked += 1
            r = mul(x, y) - sgn(dx * dy) * mul(y, x)
            if not r.is_zero():
                witnesses.append(("commutativity", (nx, ny), r))
            checked += 1
            r = brk(x, y) + sgn((dx - 1) * (dy - 1)) * brk(y, x)
            if not r.is_zero():
                witnesses.append(("antisymmetry", (nx, ny), r))
            if delta is not None:
                checked += 1
                r = (
                    delta(mul(x, y))
                    - mul(delta(x), y)
                    - sgn(dx) * mul(x, delta(y))
                    - sgn(dx) * brk(x, y)
                )
                if not r.is_zero():
                    witnesses.append(("second-order-delta", (nx, ny), r))

    if delta is not None:
        for nx, x in gens:
            checked += 1
            r = delta(delta(x))
            if not r.is_zero():
                witnesses.append(("delta-squared", (nx,), r))

    triples = [
        (i, j, k)
        for i in range(len(gens))
        for j in range(len(gens))
        for k in range(len(gens))
    ]
    if max_triples is not None:
        triples = triples[:max_triples]
    for i, j, k in triples:
        nx, x = gens[i]
        ny, y = gens[j]
        nz, z = gens[k]
        dx, dy, dz = deg(x), deg(y), deg(z)
        checked += 1
        r = mul(mul(x, y), z) - mul(x, mul(y, z))
        if not r.is_zero():
            witnesses.append(("associativity", (nx, ny, nz), r))
        checked += 1
        r = (
            brk(x, mul(y, z))
            - mul(brk(x, y), z)
            - sgn((dx - 1) * dy) * mul(y, brk(x, z))
        )
        if not r.is_zero():
            witnesses.append(("bracket-leibniz", (nx, ny, nz), r))
        checked += 1
        r = (
            sgn((dx - 1) * (dz - 1)) * brk(brk(x, y), z)
            + sgn((dy - 1) * (dx - 1)) * brk(brk(y, z), x)
            + sgn((dz - 1) * (dy - 1)) * brk(brk(z, x), y)
        )
        if not r.is_zero():
            witnesses.append(("jacobi", (nx, ny, nz), r))
    return CheckReport(checked, witnesses, 3)
