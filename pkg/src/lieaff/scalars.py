"""Exact commutative rings with identity: ℤ, ℤ/n, GF(p) and ℚ.

Raw ring elements are plain Python ``int`` (or ``Fraction`` for ℚ) in
canonical form; the vectorised helpers on :class:`Ring` operate on numpy
arrays of such elements.  :class:`Scalar` is the checked, ring-tagged
wrapper used at API boundaries.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DomainError, NotAUnitError, UnsupportedError

INTEGERS = "integers"
INTEGERS_MOD_N = "integers-mod-n"
PRIME_FIELD = "prime-field"
RATIONALS = "rationals"
KINDS = (INTEGERS, INTEGERS_MOD_N, PRIME_FIELD, RATIONALS)

# residues above this bound would risk int64 overflow in trilinear sums
_INT64_MODULUS_LIMIT = 2**20


def is_prime(n: int) -> bool:
    """Deterministic primality test."""
    from sympy import isprime

    return bool(isprime(n))


@dataclass(frozen=True)
class Ring:
    """Specification of a scalar ring (the ``RingSpec`` of the instance format)."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown ring kind {self.kind!r}")
        if self.kind in (INTEGERS_MOD_N, PRIME_FIELD):
            if not isinstance(self.modulus, int) or isinstance(self.modulus, bool):
                raise DomainError(f"{self.kind} needs an integer modulus")
            if self.modulus < 2:
                raise DomainError(f"modulus must be >= 2, got {self.modulus}")
            if self.kind == PRIME_FIELD and not is_prime(self.modulus):
                raise DomainError(f"prime-field modulus {self.modulus} is not prime")
        elif self.modulus is not None:
            raise DomainError(f"{self.kind} takes no modulus")

    # -- constructors -------------------------------------------------
    @classmethod
    def integers(cls) -> Ring:
        return cls(INTEGERS)

    @classmethod
    def rationals(cls) -> Ring:
        return cls(RATIONALS)

    @classmethod
    def mod(cls, n: int) -> Ring:
        return cls(INTEGERS_MOD_N, n)

    @classmethod
    def gf(cls, p: int) -> Ring:
        return cls(PRIME_FIELD, p)

    def __str__(self):
        return {
            INTEGERS: "ZZ",
            RATIONALS: "QQ",
            INTEGERS_MOD_N: f"Z/{self.modulus}",
            PRIME_FIELD: f"GF({self.modulus})",
        }[self.kind]

    # -- properties ---------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.modulus is not None

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise UnsupportedError(f"{self} is infinite")
        return self.modulus

    @property
    def is_field(self) -> bool:
        return self.kind in (PRIME_FIELD, RATIONALS) or (
            self.kind == INTEGERS_MOD_N and is_prime(self.modulus)
        )

    @cached_property
    def dtype(self):
        if self.is_finite and self.modulus <= _INT64_MODULUS_LIMIT:
            return np.int64
        return object

    # -- raw element arithmetic ---------------------------------------
    def canonical(self, value):
        """Canonical form of ``value`` (int, Fraction, numpy integer or decimal string)."""
        if isinstance(value, Scalar):
            if value.ring != self:
                raise DomainError(f"scalar from {value.ring} used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (bool, np.bool_)):
            raise DomainError("booleans are not ring elements")
        if isinstance(value, np.integer):
            value = int(value)
        if isinstance(value, float):
            raise DomainError("floating point values are not exact scalars")
        if isinstance(value, Fraction):
            if self.kind == RATIONALS:
                return value
            if value.denominator == 1:
                value = value.numerator
            elif self.is_finite:
                return (value.numerator * self.inv(value.denominator)) % self.modulus
            else:
                raise DomainError(f"{value} is not an integer")
        if not isinstance(value, int):
            raise DomainError(f"cannot interpret {value!r} as an element of {self}")
        if self.kind == RATIONALS:
            return Fraction(value)
        if self.is_finite:
            return value % self.modulus
        return value

    def parse(self, text: str):
        text = text.strip()
        try:
            if "/" in text:
                return self.canonical(Fraction(text))
            return self.canonical(int(text))
        except ValueError as exc:
            raise DomainError(f"cannot parse scalar {text!r}") from exc

    def format(self, value) -> str:
        return str(self.canonical(value))

    def add(self, x, y):
        return self.canonical(x + y)

    def sub(self, x, y):
        return self.canonical(x - y)

    def mul(self, x, y):
        return self.canonical(x * y)

    def neg(self, x):
        return self.canonical(-x)

    def is_unit(self, x) -> bool:
        x = self.canonical(x)
        if self.kind == RATIONALS:
            return x != 0
        if self.kind == INTEGERS:
            return x in (1, -1)
        from math import gcd

        return gcd(x, self.modulus) == 1

    def inv(self, x):
        x = self.canonical(x)
        if not self.is_unit(x):
            raise NotAUnitError(f"{x} is not a unit in {self}")
        if self.kind == RATIONALS:
            return 1 / x
        if self.kind == INTEGERS:
            return x
        return pow(x, -1, self.modulus)

    @property
    def zero(self):
        return self.canonical(0)

    @property
    def one(self):
        return self.canonical(1)

    # -- vectorised helpers -------------------------------------------
    def array(self, values) -> np.ndarray:
        """Canonical numpy array from a (nested) sequence of ring elements."""
        if isinstance(values, np.ndarray) and values.dtype.kind in "iu" and self.dtype is np.int64:
            return values.astype(np.int64) % self.modulus
        if self.dtype is object:
            raw = np.array(values, dtype=object)
            flat = [self.canonical(v) for v in raw.reshape(-1)]
            out = np.empty(raw.shape, dtype=object)
            out.reshape(-1)[:] = flat
            return out
        raw = np.array(values, dtype=object)
        flat = [self.canonical(v) for v in raw.reshape(-1)]
        return np.array(flat, dtype=np.int64).reshape(raw.shape)

    def reduce(self, arr):
        """Canonicalise an array produced by ring-valued integer arithmetic."""
        if self.is_finite:
            return arr % self.modulus
        return arr

    def zeros(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=self.dtype)
        if self.kind == RATIONALS:
            out = out.astype(object)
            out[...] = Fraction(0)
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    # -- domain interface for the verification engine -----------------
    def elements(self) -> np.ndarray:
        if not self.is_finite:
            raise UnsupportedError(f"cannot enumerate the infinite ring {self}")
        return np.arange(self.modulus, dtype=self.dtype)

    def frame(self, degree: int) -> np.ndarray:
        return self.array(list(range(degree + 1)))

    def format_value(self, value) -> str:
        return self.format(value)

    def equal(self, x, y) -> np.ndarray:
        return np.asarray(x == y, dtype=bool)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out

    @classmethod
    def from_json(cls, data: dict) -> Ring:
        return cls(data["kind"], data.get("modulus"))


ZZ = Ring.integers()
QQ = Ring.rationals()


def GF(p: int) -> Ring:
    return Ring.gf(p)


def Zmod(n: int) -> Ring:
    return Ring.mod(n)


@dataclass(frozen=True)
class Scalar:
    """A ring element tagged with its ring.  Equality is canonical-form equality."""

    ring: Ring
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.canonical(self.value))

    def _other(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise DomainError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return Scalar(self.ring, other)

    def __add__(self, other):
        return ring_arith("add", self, self._other(other))

    def __sub__(self, other):
        return ring_arith("sub", self, self._other(other))

    def __mul__(self, other):
        return ring_arith("mul", self, self._other(other))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return ring_arith("sub", self._other(other), self)

    def __neg__(self):
        return Scalar(self.ring, -self.value)

    def __str__(self):
        return self.ring.format(self.value)


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}


def ring_arith(op: str, x: Scalar, y: Scalar | None = None) -> Scalar:
    """Apply ``add``, ``sub``, ``mul`` or ``neg`` (``y`` ignored) to scalars of one ring."""
    if op == "neg":
        return Scalar(x.ring, -x.value)
    if op not in _OPS:
        raise DomainError(f"unknown ring operation {op!r}")
    if y is None or x.ring != y.ring:
        raise DomainError(f"ring mismatch: {x.ring} vs {getattr(y, 'ring', None)}")
    return Scalar(x.ring, _OPS[op](x.value, y.value))


def invert(x: Scalar) -> Scalar:
    return Scalar(x.ring, x.ring.inv(x.value))


def enumerate_scalars(ring: Ring) -> list[Scalar]:
    """All elements of a finite ring in ascending canonical order."""
    if not ring.is_finite:
        raise UnsupportedError(f"cannot enumerate the infinite ring {ring}")
    return [Scalar(ring, v) for v in range(ring.modulus)]
