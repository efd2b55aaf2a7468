"""Finite fields F_q with q = p^t.

An element c_0 + c_1 X + ... + c_{t-1} X^{t-1} of F_p[X]/(m) is stored as its
integer code sum(c_i * p**i).  Enumeration order, and every "lex-least" choice
made elsewhere in the package, is code order.

Scalar arithmetic goes through ``FieldElem``; the ``v*`` methods of
``FieldSpec`` do the same arithmetic on numpy arrays of codes and are what the
verifiers use.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    NotSubfieldOrder,
    OrderOverflow,
    ParameterError,
)

DEFAULT_MAX_ORDER = 1 << 20
_TABLE_LIMIT = 1 << 16
_VTABLE_LIMIT = 1024
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n > 0 by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power_decompose(q: int) -> tuple[int, int] | None:
    """Return (p, t) with q = p^t, or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    t = 0
    while q > 1:
        q //= p
        t += 1
    return p, t


# Polynomials over F_p as low-first lists.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        _trim(a)
    return a


def _poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _poly_inverse(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Inverse of a modulo the irreducible m, by the extended Euclidean algorithm."""
    r0, r1 = list(m), _poly_mod(a, m, p)
    s0, s1 = [], [1]
    while r1:
        # one long division step r0 = qt * r1 + rem
        qt = [0] * max(len(r0) - len(r1) + 1, 1)
        rem = list(r0)
        inv_lead = pow(r1[-1], p - 2, p)
        while len(rem) >= len(r1):
            c = rem[-1] * inv_lead % p
            shift = len(rem) - len(r1)
            qt[shift] = c
            for j, x in enumerate(r1):
                rem[shift + j] = (rem[shift + j] - c * x) % p
            _trim(rem)
        prod = _poly_mul(qt, s1, p)
        s_next = _trim([(x - y) % p for x, y in itertools.zip_longest(s0, prod, fillvalue=0)])
        r0, r1, s0, s1 = r1, rem, s1, s_next
    # r0 is a nonzero constant
    c = pow(r0[0], p - 2, p)
    return _poly_mod([x * c for x in s0], m, p)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial (low-first coefficients) over F_p."""
    t = len(modulus) - 1
    if t < 1 or modulus[-1] % p != 1:
        return False
    if t == 1:
        return True
    x = [0, 1]
    if _poly_powmod(x, p**t, modulus, p) != x:
        return False
    for r in prime_factors(t):
        h = _poly_powmod(x, p ** (t // r), modulus, p)
        diff = _trim([(hi - xi) % p for hi, xi in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_poly_gcd(modulus, diff, p)) != 1:
            return False
    return True


def _first_irreducible(p: int, t: int) -> tuple[int, ...]:
    if t == 1:
        return (0, 1)
    # itertools.product varies the last slot fastest, so comparing low-to-high
    # coefficient tuples lexicographically is exactly this iteration order.
    for low in itertools.product(range(p), repeat=t):
        if low[0] == 0:
            continue
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[X]/(modulus); ``modulus`` is monic, low-first."""

    p: int
    t: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.t

    @property
    def order(self) -> int:
        return self.q

    def __repr__(self) -> str:
        return f"F_{self.q}" if self.t == 1 else f"F_{self.p}^{self.t}"

    # constructors
    def __call__(self, n: int) -> FieldElem:
        """Image of the integer n under Z -> F_p -> F_q."""
        return FieldElem(self, n % self.p)

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.q:
            raise ParameterError(f"code {code} out of range for {self!r}")
        return FieldElem(self, code)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElem:
        if len(coeffs) > self.t:
            r = _poly_mod(list(coeffs), self.modulus, self.p)
        else:
            r = [c % self.p for c in coeffs]
        return FieldElem(self, self._from_digits(r))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def gen(self) -> FieldElem:
        """The class of X (zero for prime fields, where the modulus is X)."""
        return self.from_coeffs([0, 1])

    def elements(self) -> Iterator[FieldElem]:
        for c in range(self.q):
            yield FieldElem(self, c)

    def nonzero(self) -> Iterator[FieldElem]:
        for c in range(1, self.q):
            yield FieldElem(self, c)

    # code-level scalar arithmetic
    @cached_property
    def _pw(self) -> tuple[int, ...]:
        return tuple(self.p**i for i in range(self.t))

    def digits(self, a: int) -> list[int]:
        out = []
        p = self.p
        for _ in range(self.t):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _from_digits(self, ds: Iterable[int]) -> int:
        return sum(d * w for d, w in zip(ds, self._pw))

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]] | None:
        q = self.q
        if q > _TABLE_LIMIT or self.t == 1 and q > 256:
            return None
        g = self._primitive_code()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        return exp, log

    def _primitive_code(self) -> int:
        q = self.q
        if q == 2:
            return 1
        fs = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // r) != 1 for r in fs):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _mul_slow(self, a: int, b: int) -> int:
        if self.t == 1:
            return a * b % self.p
        prod = _poly_mul(self.digits(a), self.digits(b), self.p)
        return self._from_digits(_poly_mod(prod, self.modulus, self.p))

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def add_c(self, a: int, b: int) -> int:
        if self.t == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        w = 1
        for _ in range(self.t):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += (ra + rb) % p * w
            w *= p
        return out

    def neg_c(self, a: int) -> int:
        if self.t == 1:
            return -a % self.p
        p = self.p
        out = 0
        w = 1
        for _ in range(self.t):
            a, r = divmod(a, p)
            out += (-r % p) * w
            w *= p
        return out

    def sub_c(self, a: int, b: int) -> int:
        return self.add_c(a, self.neg_c(b))

    def mul_c(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tabs = self._tables
        if tabs is not None:
            exp, log = tabs
            return exp[log[a] + log[b]]
        return self._mul_slow(a, b)

    def pow_c(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv_c(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        tabs = self._tables
        if tabs is not None:
            exp, log = tabs
            return exp[log[a] * e % (self.q - 1)]
        if self.t == 1:
            return pow(a, e, self.p)
        return self._pow_slow(a, e % (self.q - 1))

    def inv_c(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        tabs = self._tables
        if tabs is not None:
            exp, log = tabs
            return exp[(self.q - 1 - log[a]) % (self.q - 1)]
        if self.t == 1:
            return pow(a, self.p - 2, self.p)
        return self._from_digits(_poly_inverse(self.digits(a), self.modulus, self.p))

    # vectorised arithmetic on int64 code arrays
    @cached_property
    def _vtables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        """Addition, multiplication and negation tables for small extensions."""
        if self.t == 1 or self.q > _VTABLE_LIMIT:
            return None
        codes = np.arange(self.q, dtype=np.int64)
        addt = self._vadd_digits(codes[:, None], codes[None, :])
        mult = self._vmul_digits(codes[:, None], codes[None, :])
        negt = self.vfrom_digits((-self.vdigits(codes)) % self.p)
        return addt, mult, negt

    def vdigits(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // w) % self.p for w in self._pw], axis=-1)

    def vfrom_digits(self, ds: np.ndarray) -> np.ndarray:
        w = np.array(self._pw, dtype=np.int64)
        return (ds * w).sum(axis=-1)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.t == 1:
            return (a + b) % self.p
        tabs = self._vtables
        if tabs is not None:
            return tabs[0][a, b]
        return self._vadd_digits(a, b)

    def _vadd_digits(self, a, b) -> np.ndarray:
        return self.vfrom_digits((self.vdigits(a) + self.vdigits(b)) % self.p)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.t == 1:
            return (-a) % self.p
        tabs = self._vtables
        if tabs is not None:
            return tabs[2][a]
        return self.vfrom_digits((-self.vdigits(a)) % self.p)

    def vsub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.t == 1:
            return (a - b) % self.p
        tabs = self._vtables
        if tabs is not None:
            return tabs[0][a, tabs[2][b]]
        return self.vfrom_digits((self.vdigits(a) - self.vdigits(b)) % self.p)

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.t == 1:
            return (a * b) % self.p
        tabs = self._vtables
        if tabs is not None:
            return tabs[1][a, b]
        return self._vmul_digits(a, b)

    def _vmul_digits(self, a, b) -> np.ndarray:
        p, t = self.p, self.t
        a, b = np.broadcast_arrays(a, b)
        da, db = self.vdigits(a), self.vdigits(b)
        c = np.zeros(a.shape + (2 * t - 1,), dtype=np.int64)
        for i in range(t):
            for j in range(t):
                c[..., i + j] = (c[..., i + j] + da[..., i] * db[..., j]) % p
        m = self.modulus
        for k in range(2 * t - 2, t - 1, -1):
            ck = c[..., k] % p
            for j in range(t):
                if m[j]:
                    c[..., k - t + j] = (c[..., k - t + j] - ck * m[j]) % p
        return self.vfrom_digits(c[..., :t] % p)

    def to_json(self) -> dict:
        return {"p": self.p, "t": self.t, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj: dict) -> FieldSpec:
        spec = make_field(int(obj["p"]), int(obj["t"]), max_order=1 << 62)
        if "modulus" in obj and tuple(obj["modulus"]) != spec.modulus:
            mod = tuple(int(c) for c in obj["modulus"])
            if len(mod) != spec.t + 1 or not is_irreducible(mod, spec.p):
                raise ParameterError("modulus is not a monic irreducible of degree t")
            return FieldSpec(spec.p, spec.t, mod)
        return spec


@lru_cache(maxsize=None)
def _make_field_cached(p: int, t: int) -> FieldSpec:
    return FieldSpec(p, t, _first_irreducible(p, t))


def make_field(p: int, t: int = 1, *, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """The field of order p^t with the lexicographically smallest monic
    irreducible modulus (coefficients compared low-to-high)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if t < 1:
        raise ParameterError("extension degree must be at least 1")
    if p**t > max_order:
        raise OrderOverflow(f"{p}^{t} exceeds the order cap {max_order}")
    return _make_field_cached(p, t)


def field_of_order(q: int, *, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    pt = prime_power_decompose(q)
    if pt is None:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(*pt, max_order=max_order)


class FieldElem:
    """An element of a ``FieldSpec``.  Python ints mix in through Z -> F_p."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")

    def __add__(self, other):
        return FieldElem(self.field, self.field.add_c(self.code, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub_c(self.code, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub_c(self._coerce(other), self.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_c(self.code))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul_c(self.code, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.mul_c(self.code, self.field.inv_c(o)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.mul_c(self._coerce(other), self.field.inv_c(self.code)))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow_c(self.code, e))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv_c(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.code == other.code and self.field == other.field

    def __lt__(self, other: FieldElem) -> bool:
        return self.code < other.code

    def __hash__(self):
        return hash((self.field.p, self.field.t, self.code))

    def __repr__(self) -> str:
        if self.field.t == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"{c}*X" if i == 1 else f"{c}*X^{i}"))
        return " + ".join(terms) or "0"


# module-level operations
def _check(x: FieldElem, y: FieldElem) -> None:
    if x.field != y.field:
        raise FieldMismatch(f"{x.field!r} vs {y.field!r}")


def add(x: FieldElem, y: FieldElem) -> FieldElem:
    _check(x, y)
    return x + y


def sub(x: FieldElem, y: FieldElem) -> FieldElem:
    _check(x, y)
    return x - y


def mul(x: FieldElem, y: FieldElem) -> FieldElem:
    _check(x, y)
    return x * y


def inv(x: FieldElem) -> FieldElem:
    return x.inverse()


def power(x: FieldElem, e: int) -> FieldElem:
    return x**e


def subfield_degree(spec: FieldSpec, q0: int) -> int:
    """Return k with q = q0^k, checking that F_{q0} sits inside ``spec``."""
    pt = prime_power_decompose(q0)
    if pt is None or pt[0] != spec.p or spec.t % pt[1] != 0:
        raise NotSubfieldOrder(f"{q0} is not the order of a subfield of {spec!r}")
    return spec.t // pt[1]


def frobenius(x: FieldElem, q0: int) -> FieldElem:
    """The relative Frobenius x -> x^{q0}."""
    subfield_degree(x.field, q0)
    return x**q0


def rel_norm(x: FieldElem, q0: int) -> FieldElem:
    """Relative norm to F_{q0}: the product of the Frobenius conjugates."""
    k = subfield_degree(x.field, q0)
    out = x.field.one
    y = x
    for _ in range(k):
        out = out * y
        y = y**q0
    return out


def subfield_elements(spec: FieldSpec, q0: int) -> list[FieldElem]:
    subfield_degree(spec, q0)
    return [x for x in spec.elements() if x**q0 == x]


def power_residues(spec: FieldSpec, d: int) -> frozenset[FieldElem]:
    """The nonzero d-th powers."""
    if d < 1:
        raise ParameterError("d must be positive")
    return frozenset(x**d for x in spec.nonzero())


def residue_count(spec: FieldSpec, d: int) -> int:
    return (spec.q - 1) // math.gcd(d, spec.q - 1)


def dth_root(spec: FieldSpec, y: FieldElem, d: int) -> FieldElem | None:
    """The code-least v with v^d = y, or None."""
    if y.field != spec:
        raise FieldMismatch("y lives in a different field")
    for v in spec.elements():
        if v**d == y:
            return v
    return None
