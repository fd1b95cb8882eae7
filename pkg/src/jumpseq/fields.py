"""Ground fields with exact arithmetic: the rationals and prime fields.

A :class:`GroundField` is a small factory/descriptor object.  Elements of
the rationals are plain :class:`fractions.Fraction`; elements of a prime
field are :class:`Fp` instances.  Both have decidable equality and exact
inverses, which is all the rest of the library needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Fp:
    """An element of the prime field with ``p`` elements.

    Arithmetic coerces plain integers, so ``Fp(3, 7) + 5`` works and
    ``Fp(0, 7) == 0`` is true.
    """

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed prime fields: %d vs %d" % (self.p, other.p))
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val + o.val, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Fp(-self.val, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val - o.val, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o.val - self.val, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val * o.val, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Fp":
        if self.val == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return Fp(pow(self.val, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp(pow(self.val, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return "Fp(%d, %d)" % (self.val, self.p)

    def __str__(self):
        return str(self.val)


@dataclass(frozen=True)
class GroundField:
    """The coefficient field: ``rationals`` or a prime field.

    ``characteristic`` is 0 for the rationals and the prime p otherwise.
    Calling the field coerces ints, Fractions, strings and existing
    elements into field elements.
    """

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("rationals have characteristic 0")
        elif self.kind == "prime":
            if not _is_prime(self.characteristic):
                raise ValueError("characteristic %r is not prime" % (self.characteristic,))
        else:
            raise ValueError("unknown field kind %r" % (self.kind,))

    def __call__(self, x):
        if self.kind == "rationals":
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise TypeError("cannot coerce %r into the rationals" % (x,))
        # prime field
        if isinstance(x, Fp):
            if x.p != self.characteristic:
                raise ValueError("element of F_%d is not in F_%d" % (x.p, self.characteristic))
            return x
        if isinstance(x, int):
            return Fp(x, self.characteristic)
        if isinstance(x, str):
            return Fp(int(x), self.characteristic)
        raise TypeError("cannot coerce %r into F_%d" % (x, self.characteristic))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def render(self, e) -> str:
        """Canonical decimal string: ``num/den`` over Q, ``0 <= c < p`` over F_p."""
        if self.kind == "rationals":
            f = self(e)
            return "%d/%d" % (f.numerator, f.denominator) if f.denominator != 1 else str(f.numerator)
        return str(self(e).val)

    def parse(self, s: str):
        return self(s)

    def to_json(self):
        if self.kind == "rationals":
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.characteristic}

    @classmethod
    def from_json(cls, obj) -> "GroundField":
        if obj["kind"] == "rationals":
            return cls("rationals", 0)
        if obj["kind"] == "prime":
            return cls("prime", int(obj["p"]))
        raise ValueError("unknown field kind %r" % (obj.get("kind"),))


QQ = GroundField("rationals", 0)


def prime_field(p: int) -> GroundField:
    return GroundField("prime", p)
