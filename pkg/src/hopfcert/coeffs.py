"""Exact scalar arithmetic over Q and prime fields F_p.

Higher modules never touch Python numbers directly; they go through a
FieldSpec, which knows how to canonicalize, add, multiply and invert raw
values.  Raw values are Fractions for Q and ints in [0, p) for F_p.  The
Scalar wrapper exists for callers that want operator syntax.
"""

from fractions import Fraction


class FieldError(ArithmeticError):
    pass


class FieldMismatch(FieldError):
    pass


class DivisionByZero(ZeroDivisionError, FieldError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """Ground field: characteristic 0 means Q, otherwise F_p with p < 2**31."""

    RATIONALS = "Rationals"
    PRIME = "PrimeField"

    __slots__ = ("kind", "characteristic")

    def __init__(self, characteristic=0):
        characteristic = int(characteristic)
        if characteristic != 0:
            if characteristic >= 2**31 or not _is_prime(characteristic):
                raise FieldError(f"characteristic must be 0 or a prime < 2^31, got {characteristic}")
        self.characteristic = characteristic
        self.kind = self.RATIONALS if characteristic == 0 else self.PRIME

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @classmethod
    def from_name(cls, name):
        """'Q' or 'F7' style names, as used in presentation files."""
        if name == "Q":
            return cls(0)
        if name.startswith("F") and name[1:].isdigit():
            return cls(int(name[1:]))
        raise FieldError(f"unknown field {name!r}")

    @property
    def name(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("FieldSpec", self.characteristic))

    def __repr__(self):
        return f"FieldSpec({self.name})"

    # raw-value arithmetic; hot paths in the rest of the package use these

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def canonical(self, v):
        p = self.characteristic
        if p == 0:
            if isinstance(v, Fraction):
                return v
            if isinstance(v, int):
                return Fraction(v)
            if isinstance(v, str):
                return Fraction(v)
            raise FieldError(f"cannot coerce {v!r} into Q")
        if isinstance(v, Fraction):
            num = v.numerator % p
            den = v.denominator % p
            if den == 0:
                raise DivisionByZero(f"{v} has denominator divisible by {p}")
            return num * pow(den, -1, p) % p
        if isinstance(v, int):
            return v % p
        if isinstance(v, str):
            return self.canonical(Fraction(v))
        raise FieldError(f"cannot coerce {v!r} into F{p}")

    def add(self, a, b):
        if self.characteristic:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a, b):
        if self.characteristic:
            return (a - b) % self.characteristic
        return a - b

    def neg(self, a):
        if self.characteristic:
            return (-a) % self.characteristic
        return -a

    def mul(self, a, b):
        if self.characteristic:
            return a * b % self.characteristic
        return a * b

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, v):
        if self.characteristic:
            return str(v)
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"


class Scalar:
    """Immutable field element bound to its FieldSpec."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field.canonical(value))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _check(self, other):
        if not isinstance(other, Scalar):
            other = Scalar(self.field, other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return not self.value

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.canonical(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.characteristic, self.value))

    def __repr__(self):
        return f"Scalar({self.field.name}, {self.field.fmt(self.value)})"

    def __str__(self):
        return self.field.fmt(self.value)


def scalar_add(a, b):
    return a + b


def scalar_mul(a, b):
    return a * b


def scalar_inv(a):
    return a.inverse()


def canonical(x):
    """Re-canonicalize a Scalar (idempotent by construction)."""
    return Scalar(x.field, x.value)
