"""Sparse exact bivariate polynomials over a ground field.

A :class:`BivarPoly` is a map from exponent pairs ``(a, b)`` to nonzero
field coefficients, together with a pair of variable labels.  Everything
is immutable in spirit: operations return fresh polynomials and never
mutate their inputs.

The two division routines carry the load for the rest of the library:

* :func:`divmod_in_v` divides by a polynomial that is monic in the second
  variable, which is how standard-form expansions are peeled off;
* :func:`exact_divide` performs a division that the caller claims is
  exact, and raises :class:`DivisibilityError` with the offending
  remainder otherwise.  Strict transforms and unit extraction are built
  on it, so failure here always means a broken invariant upstream.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisibilityError, ResourceLimitError
from .fields import GroundField

#: Hard ceiling on the number of stored terms in any single polynomial.
#: Substitution can blow degrees up; we fail loudly rather than thrash.
TERM_LIMIT = 10_000


class BivarPoly:
    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: GroundField, terms=None, vars=("u", "v")):
        self.field = field
        self.vars = tuple(vars)
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                c = field(c)
                if c != field.zero:
                    clean[(int(a), int(b))] = c
        if len(clean) > TERM_LIMIT:
            raise ResourceLimitError(
                "polynomial with %d terms exceeds TERM_LIMIT=%d" % (len(clean), TERM_LIMIT)
            )
        self.terms = clean

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, field, vars=("u", "v")):
        return cls(field, {}, vars)

    @classmethod
    def const(cls, field, c, vars=("u", "v")):
        return cls(field, {(0, 0): field(c)}, vars)

    @classmethod
    def monomial(cls, field, a, b, c=1, vars=("u", "v")):
        return cls(field, {(a, b): field(c)}, vars)

    @classmethod
    def gens(cls, field, vars=("u", "v")):
        """Return the two coordinate polynomials, e.g. (u, v)."""
        return (cls.monomial(field, 1, 0, 1, vars), cls.monomial(field, 0, 1, 1, vars))

    # ---- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0, 0), self.field.zero)

    def is_local_unit(self) -> bool:
        """True when the polynomial is a unit in the local ring at the origin."""
        return self.constant_term() != self.field.zero

    def deg_v(self) -> int:
        """Degree in the second variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(b for _, b in self.terms)

    def deg_u(self) -> int:
        if not self.terms:
            return -1
        return max(a for a, _ in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(a + b for a, b in self.terms)

    def v_coefficient(self, b: int) -> "BivarPoly":
        """The coefficient of v^b, as a polynomial in the first variable."""
        return BivarPoly(
            self.field, {(a, 0): c for (a, bb), c in self.terms.items() if bb == b}, self.vars
        )

    def min_exp_first(self) -> int:
        """Smallest exponent of the first variable over all terms."""
        if not self.terms:
            return 0
        return min(a for a, _ in self.terms)

    # ---- ring operations ----------------------------------------------

    def _check_compat(self, other: "BivarPoly"):
        if self.field != other.field:
            raise ValueError("mixed coefficient fields")

    def __add__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_compat(other)
        out = dict(self.terms)
        z = self.field.zero
        for e, c in other.terms.items():
            s = out.get(e, z) + c
            if s == z:
                out.pop(e, None)
            else:
                out[e] = s
        return BivarPoly(self.field, out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly(self.field, {e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_compat(other)
        out = {}
        z = self.field.zero
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                e = (a1 + a2, b1 + b2)
                s = out.get(e, z) + c1 * c2
                if s == z:
                    out.pop(e, None)
                else:
                    out[e] = s
        return BivarPoly(self.field, out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = BivarPoly.const(self.field, 1, self.vars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def scale(self, c) -> "BivarPoly":
        c = self.field(c)
        return BivarPoly(self.field, {e: c * cc for e, cc in self.terms.items()}, self.vars)

    def _as_poly(self, x):
        if isinstance(x, BivarPoly):
            return x
        if isinstance(x, (int, Fraction)) or type(x).__name__ == "Fp":
            return BivarPoly.const(self.field, x, self.vars)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivarPoly.const(self.field, other, self.vars)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    # ---- substitution --------------------------------------------------

    def subs(self, first: "BivarPoly", second: "BivarPoly") -> "BivarPoly":
        """Substitute polynomials for the two variables.

        Exact; the result lives in the variables of the arguments.  Uses
        Horner evaluation in the second variable with cached powers of the
        first to keep intermediate blow-up in check.
        """
        first._check_compat(second)
        field = self.field
        out_vars = first.vars
        zero = BivarPoly.zero(field, out_vars)
        if not self.terms:
            return zero
        # group by exponent of the second variable
        by_b = {}
        for (a, b), c in self.terms.items():
            by_b.setdefault(b, {})[a] = c
        # Horner in `second`, with powers of `first` computed on demand
        pow_cache = {0: BivarPoly.const(field, 1, out_vars)}

        def first_pow(a):
            if a not in pow_cache:
                half = first_pow(a // 2)
                p = half * half
                if a % 2:
                    p = p * first
                pow_cache[a] = p
            return pow_cache[a]

        result = zero
        bs = sorted(by_b, reverse=True)
        prev_b = None
        for b in bs:
            coeff = zero
            for a, c in by_b[b].items():
                coeff = coeff + first_pow(a).scale(c)
            if prev_b is None:
                result = coeff
            else:
                result = result * (second ** (prev_b - b)) + coeff
            prev_b = b
        if prev_b:
            result = result * (second ** prev_b)
        return result

    # ---- serialization -------------------------------------------------

    def to_json(self):
        f = self.field
        terms = sorted(self.terms.items())
        return {
            "vars": list(self.vars),
            "terms": [{"e": [a, b], "c": f.render(c)} for (a, b), c in terms],
        }

    @classmethod
    def from_json(cls, field: GroundField, obj, vars=None) -> "BivarPoly":
        if isinstance(obj, str):
            # bare field element, e.g. "1" for a trivial unit
            return cls.const(field, field.parse(obj), vars or ("u", "v"))
        vnames = tuple(obj.get("vars", vars or ("u", "v")))
        terms = {}
        for t in obj["terms"]:
            a, b = t["e"]
            terms[(int(a), int(b))] = field.parse(t["c"])
        return cls(field, terms, vnames)

    def __str__(self):
        if not self.terms:
            return "0"
        u, v = self.vars
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            factors = []
            cs = self.field.render(c)
            if cs != "1" or (a == 0 and b == 0):
                factors.append(cs)
            if a:
                factors.append(u if a == 1 else "%s^%d" % (u, a))
            if b:
                factors.append(v if b == 1 else "%s^%d" % (v, b))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return "BivarPoly(%s)" % self


# ---- univariate helpers (polynomials in the first variable only) --------


def _u_divmod(f: BivarPoly, g: BivarPoly):
    """Division in k[u] for polynomials with no second-variable part."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    field = f.field
    q = {}
    rem = dict(f.terms)
    dg = g.deg_u()
    lead_g = g.terms[(dg, 0)]
    while rem:
        dr = max(a for a, _ in rem)
        if dr < dg:
            break
        c = rem[(dr, 0)] / lead_g
        q[(dr - dg, 0)] = c
        for (a, _), gc in g.terms.items():
            e = (a + dr - dg, 0)
            s = rem.get(e, field.zero) - c * gc
            if s == field.zero:
                rem.pop(e, None)
            else:
                rem[e] = s
    return (
        BivarPoly(field, q, f.vars),
        BivarPoly(field, rem, f.vars),
    )


def _u_exact_divide(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    q, r = _u_divmod(f, g)
    if not r.is_zero():
        raise DivisibilityError("inexact division in k[u]", remainder=r)
    return q


# ---- public division routines ------------------------------------------


def divmod_in_v(f: BivarPoly, g: BivarPoly):
    """Divide ``f`` by ``g`` where ``g`` is monic in the second variable.

    Returns ``(quotient, remainder)`` with ``deg_v(remainder) < deg_v(g)``
    and ``f == quotient*g + remainder`` exactly.
    """
    dg = g.deg_v()
    if dg < 0:
        raise ZeroDivisionError("division by zero polynomial")
    lead = g.v_coefficient(dg)
    if lead.terms != {(0, 0): g.field.one}:
        raise ValueError("divisor is not monic in %s" % g.vars[1])
    field = f.field
    q = BivarPoly.zero(field, f.vars)
    r = f
    while not r.is_zero() and r.deg_v() >= dg:
        dr = r.deg_v()
        c = r.v_coefficient(dr)  # in k[u]
        shift = BivarPoly(field, {(a, dr - dg): cc for (a, _), cc in c.terms.items()}, f.vars)
        q = q + shift
        r = r - shift * g
    return q, r


def exact_divide(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    """Return ``f / g``, raising :class:`DivisibilityError` if inexact."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    field = f.field
    if f.is_zero():
        return BivarPoly.zero(field, f.vars)
    dg = g.deg_v()
    if dg == 0:
        # coefficient-wise division by a polynomial in u alone
        out = {}
        by_b = {}
        for (a, b), c in f.terms.items():
            by_b.setdefault(b, {})[(a, 0)] = c
        for b, coeffs in by_b.items():
            qb = _u_exact_divide(BivarPoly(field, coeffs, f.vars), g)
            for (a, _), c in qb.terms.items():
                out[(a, b)] = c
        return BivarPoly(field, out, f.vars)
    lead_g = g.v_coefficient(dg)
    q = BivarPoly.zero(field, f.vars)
    r = f
    while not r.is_zero():
        dr = r.deg_v()
        if dr < dg:
            raise DivisibilityError("inexact bivariate division", remainder=r)
        lead_r = r.v_coefficient(dr)
        try:
            qc = _u_exact_divide(lead_r, lead_g)
        except DivisibilityError:
            raise DivisibilityError("inexact bivariate division", remainder=r)
        shift = BivarPoly(field, {(a, dr - dg): c for (a, _), c in qc.terms.items()}, f.vars)
        q = q + shift
        r = r - shift * g
    return q


# ---- rational expressions ----------------------------------------------


class RatExpr:
    """A quotient of two bivariate polynomials, reduced only by monomials.

    Used as backward bookkeeping for blow-up parameters: enough structure
    to feed value and residue queries, with no pretense of canonical form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BivarPoly, den: BivarPoly):
        if den.is_zero():
            raise ZeroDivisionError("rational expression with zero denominator")
        self.num, self.den = _strip_common_monomial(num, den)

    @classmethod
    def from_poly(cls, p: BivarPoly) -> "RatExpr":
        return cls(p, BivarPoly.const(p.field, 1, p.vars))

    def __add__(self, other: "RatExpr") -> "RatExpr":
        return RatExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatExpr") -> "RatExpr":
        return RatExpr(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RatExpr") -> "RatExpr":
        return RatExpr(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatExpr") -> "RatExpr":
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational expression")
        return RatExpr(self.num * other.den, self.den * other.num)

    def __pow__(self, e: int) -> "RatExpr":
        if e >= 0:
            return RatExpr(self.num ** e, self.den ** e)
        return RatExpr(self.den ** (-e), self.num ** (-e))

    def sub_scalar(self, c) -> "RatExpr":
        """self - c for a field constant c."""
        return RatExpr(self.num - self.den.scale(c), self.den)

    def __repr__(self):
        return "(%s) / (%s)" % (self.num, self.den)


def eval_rat(f: BivarPoly, rx: RatExpr, ry: RatExpr) -> RatExpr:
    """Evaluate f at rational-expression arguments for its two variables."""
    one = BivarPoly.const(rx.num.field, 1, rx.num.vars)
    out = RatExpr(BivarPoly.zero(rx.num.field, rx.num.vars), one)
    for (a, b), c in sorted(f.terms.items()):
        term = RatExpr(one.scale(c), one) * rx ** a * ry ** b
        out = out + term
    return out


def _strip_common_monomial(num: BivarPoly, den: BivarPoly):
    """Cancel the largest monomial u^a v^b dividing both sides."""
    if num.is_zero():
        return num, BivarPoly.const(den.field, 1, den.vars)
    a = min(min(e[0] for e in num.terms), min(e[0] for e in den.terms))
    b = min(min(e[1] for e in num.terms), min(e[1] for e in den.terms))
    if a == 0 and b == 0:
        return num, den
    shift = lambda p: BivarPoly(
        p.field, {(e0 - a, e1 - b): c for (e0, e1), c in p.terms.items()}, p.vars
    )
    return shift(num), shift(den)
