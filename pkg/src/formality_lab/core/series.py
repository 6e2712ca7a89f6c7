"""Formal series in a nilpotent parameter t and a window-bounded parameter u.

Coefficients are exact rationals.  Truncation semantics differ on purpose:

* powers of t beyond the cap are dropped silently -- truncation in t is a
  quotient by an ideal, so dropping is exact arithmetic in the quotient;
* powers of u outside the window raise ``WindowOverflow`` -- a two-sided
  window is not an ideal, so leaving it silently would corrupt later
  coefficients.
"""

from __future__ import annotations

from fractions import Fraction


class WindowOverflow(ValueError):
    """A u-exponent left the declared window with a nonzero coefficient."""


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected exact rational, got {type(v).__name__}")


class FormalSeries:
    """sum c[(kt,ku)] * t^kt * u^ku with kt in [0, nt], ku in [ulo, uhi]."""

    __slots__ = ("nt", "ulo", "uhi", "c")

    def __init__(self, coeffs=None, *, nt, u_window=(0, 0)):
        ulo, uhi = u_window
        if nt < 0 or ulo > uhi:
            raise ValueError("bad caps")
        self.nt = nt
        self.ulo = ulo
        self.uhi = uhi
        self.c = {}
        if coeffs:
            for (kt, ku), v in coeffs.items():
                v = _as_fraction(v)
                if v == 0:
                    continue
                if kt < 0:
                    raise ValueError("negative t-exponent")
                if kt > nt:
                    continue  # silent: t-truncation is an ideal
                if not (ulo <= ku <= uhi):
                    raise WindowOverflow(f"u^{ku} outside window [{ulo}, {uhi}]")
                self.c[(kt, ku)] = self.c.get((kt, ku), Fraction(0)) + v
            self.c = {k: v for k, v in self.c.items() if v != 0}

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nt, u_window=(0, 0)):
        return cls({}, nt=nt, u_window=u_window)

    @classmethod
    def scalar(cls, v, nt, u_window=(0, 0)):
        return cls({(0, 0): _as_fraction(v)}, nt=nt, u_window=u_window)

    @classmethod
    def monomial(cls, kt, ku, nt, u_window=(0, 0), coeff=1):
        return cls({(kt, ku): _as_fraction(coeff)}, nt=nt, u_window=u_window)

    # -- helpers ---------------------------------------------------------
    def _check_compatible(self, other):
        if (self.nt, self.ulo, self.uhi) != (other.nt, other.ulo, other.uhi):
            raise ValueError("series caps differ")

    def coeff(self, kt, ku):
        return self.c.get((kt, ku), Fraction(0))

    def is_zero(self):
        return not self.c

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.c)
        for k, v in other.c.items():
            w = out.get(k, Fraction(0)) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        s = FormalSeries.zero(self.nt, (self.ulo, self.uhi))
        s.c = out
        return s

    def __neg__(self):
        s = FormalSeries.zero(self.nt, (self.ulo, self.uhi))
        s.c = {k: -v for k, v in self.c.items()}
        return s

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        v = _as_fraction(scalar)
        s = FormalSeries.zero(self.nt, (self.ulo, self.uhi))
        if v:
            s.c = {k: v * w for k, w in self.c.items()}
        return s

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        return series_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.nt, self.ulo, self.uhi) == (other.nt, other.ulo, other.uhi) and self.c == other.c

    def __hash__(self):
        return hash((self.nt, self.ulo, self.uhi, frozenset(self.c.items())))

    def __repr__(self):
        if not self.c:
            return "FormalSeries(0)"
        bits = []
        for (kt, ku) in sorted(self.c):
            bits.append(f"{self.c[(kt, ku)]}*t^{kt}*u^{ku}")
        return "FormalSeries(" + " + ".join(bits) + ")"


def series_mul(a, b):
    """Product of two series with identical caps.

    t-degrees above the cap are discarded silently; a nonzero coefficient
    landing outside the u-window raises WindowOverflow (coefficients that
    cancel to zero outside the window are not an error).
    """
    a._check_compatible(b)
    acc = {}
    for (ta, ua), va in a.c.items():
        for (tb, ub), vb in b.c.items():
            kt = ta + tb
            if kt > a.nt:
                continue
            key = (kt, ua + ub)
            acc[key] = acc.get(key, Fraction(0)) + va * vb
    out = FormalSeries.zero(a.nt, (a.ulo, a.uhi))
    for (kt, ku), v in acc.items():
        if v == 0:
            continue
        if not (a.ulo <= ku <= a.uhi):
            raise WindowOverflow(f"u^{ku} outside window [{a.ulo}, {a.uhi}]")
        out.c[(kt, ku)] = v
    return out
