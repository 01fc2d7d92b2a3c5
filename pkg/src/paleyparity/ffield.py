"""Arithmetic in F_q for odd prime powers q = p^e.

Elements are plain ints in ``[0, q)``. The base-p digits of an element are its
polynomial coefficients, lowest degree first, modulo the defining polynomial.
With this encoding ``0..p-1`` is the prime field and integer order is the
canonical element order (lexicographic on the coefficient vector read from the
leading coefficient down).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    NoBuiltinPolynomial,
    NonResidue,
    NotPrime,
    NotPrimePower,
    ReduciblePolynomial,
    TooLarge,
)

# full eta / square-root tables are kept up to this order
TABLE_LIMIT = 1 << 20
MAX_ORDER = 1 << 31

# Monic moduli, coefficients low-to-high (Conway polynomials).
BUILTIN_MODULI: dict[int, tuple[int, ...]] = {
    9: (2, 2, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
    49: (3, 6, 1),
    81: (2, 0, 0, 2, 1),
    121: (2, 7, 1),
    125: (3, 3, 0, 1),
    169: (2, 12, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    p, e = fs[0], 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# -- polynomials over F_p, coefficient lists low-to-high ---------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_rem(prod, f, p)


def _poly_powmod(a: Sequence[int], n: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_rem(a, f, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        n >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True

    def frob(i: int) -> list[int]:
        h = [0, 1]
        for _ in range(i):
            h = _poly_powmod(h, p, f, p)
        return h

    diff = frob(e)
    diff += [0] * (2 - len(diff))
    diff[1] = (diff[1] - 1) % p
    if _trim(diff):
        return False
    for ell in prime_factors(e):
        h = frob(e // ell)
        h += [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _poly_gcd(f, h, p)
        if len(g) > 1:
            return False
    return True


class FiniteField:
    """The field F_q with q = p**e, p odd.

    Immutable after construction. Scalar operations take and return ints;
    the ``*_arr`` variants work elementwise on numpy integer arrays.
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        p, e = int(p), int(e)
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported")
        q = p**e
        if q > MAX_ORDER:
            raise TooLarge(f"q = {q} exceeds 2^31")
        self.p, self.e, self.q = p, e, q
        self.half = (q - 1) // 2

        if e == 1:
            self.modulus: tuple[int, ...] | None = None
        else:
            if modulus is None:
                if q not in BUILTIN_MODULI:
                    raise NoBuiltinPolynomial(f"no built-in modulus for q = {q}")
                modulus = BUILTIN_MODULI[q]
            mod = [int(c) % p for c in modulus]
            if len(mod) != e + 1 or mod[-1] != 1:
                raise ReduciblePolynomial("modulus must be monic of degree e")
            if not is_irreducible(mod, p):
                raise ReduciblePolynomial(f"{mod} is reducible over F_{p}")
            self.modulus = tuple(mod)
        self._pows = [p**i for i in range(e)]

        self._tables = q <= TABLE_LIMIT
        if e > 1:
            self._build_log_tables()
        if self._tables:
            self._build_char_tables()

    # -- construction helpers ------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        return self.element(_poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def _slow_pow(self, a: int, n: int) -> int:
        return self.element(_poly_powmod(self.coeffs(a), n, self.modulus, self.p))

    def _build_log_tables(self) -> None:
        q = self.q
        self._gen = None
        self._exp = self._log = None
        if not self._tables:
            return
        factors = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._slow_pow(g, (q - 1) // ell) != 1 for ell in factors):
                self._gen = g
                break
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, self._gen)
        exp[q - 1:] = exp[: q - 1]
        self._exp, self._log = exp, log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()

    def _build_char_tables(self) -> None:
        q = self.q
        eta = np.full(q, -1, dtype=np.int8)
        root = np.full(q, -1, dtype=np.int64)
        eta[0] = 0
        root[0] = 0
        if self.e == 1:
            xs = np.arange(1, q, dtype=np.int64)
            sq = xs * xs % q
            eta[sq] = 1
            # descending assignment leaves the smaller of x, q - x
            root[sq[::-1]] = xs[::-1]
        else:
            ks = np.arange(0, q - 1, 2, dtype=np.int64)
            squares = self._exp[ks]
            eta[squares] = 1
            r1 = self._exp[ks // 2]
            r2 = self.neg_arr(r1)
            root[squares] = np.minimum(r1, r2)
        self._eta = eta
        self._root = root
        self._eta_list = eta.tolist()
        self._root_list = root.tolist()

    # -- representation ------------------------------------------------------

    def coeffs(self, x: int) -> list[int]:
        """Coefficient vector of x, low-to-high, length e."""
        out = []
        for _ in range(self.e):
            x, c = divmod(x, self.p)
            out.append(c)
        return out

    def element(self, coeffs: Iterable[int]) -> int:
        x = 0
        for i, c in enumerate(coeffs):
            x += (int(c) % self.p) * self.p**i
        return x

    def elements(self) -> range:
        return range(self.q)

    def check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise ValueError(f"{x} is not an element of GF({self.q})")
        return x

    def to_json(self) -> dict:
        modulus = [0, 1] if self.modulus is None else list(self.modulus)
        return {"p": self.p, "e": self.e, "modulus": modulus}

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.e, self.modulus))

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        out = 0
        for w in self._pows:
            out += ((a // w + b // w) % p) * w
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return -a % p
        out = 0
        for w in self._pows:
            out += (-(a // w) % p) * w
        return out

    def sub(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a - b) % p
        out = 0
        for w in self._pows:
            out += ((a // w - b // w) % p) * w
        return out

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        if self.e == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp_list[(self.q - 1 - self._log_list[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        if self.e == 1:
            return pow(a, n, self.p)
        if self._exp is not None:
            return self._exp_list[self._log_list[a] * n % (self.q - 1)]
        return self._slow_pow(a, n)

    def prod(self, xs: Iterable[int]) -> int:
        out = 1
        for x in xs:
            out = self.mul(out, x)
        return out

    # -- quadratic character and square roots -------------------------------

    def eta(self, x: int) -> int:
        """Quadratic character: +1 on nonzero squares, -1 on nonsquares, 0 at 0."""
        if self._tables:
            return self._eta_list[x]
        if x == 0:
            return 0
        return 1 if self.pow(x, self.half) == 1 else -1

    def sqrt(self, x: int) -> int:
        """The canonically smaller square root of x. Raises NonResidue."""
        if self._tables:
            r = self._root_list[x]
            if r < 0:
                raise NonResidue(f"{x} is not a square in {self!r}")
            return r
        if x == 0:
            return 0
        if self.eta(x) != 1:
            raise NonResidue(f"{x} is not a square in {self!r}")
        r = self._tonelli_shanks(x)
        assert self.mul(r, r) == x
        return min(r, self.neg(r))

    def nonsquare(self) -> int:
        """Canonically smallest nonsquare."""
        for x in range(2, self.q):
            if self.eta(x) == -1:
                return x
        raise AssertionError("no nonsquare found")  # unreachable for odd q

    def _tonelli_shanks(self, a: int) -> int:
        s, Q = 0, self.q - 1
        while Q % 2 == 0:
            Q //= 2
            s += 1
        z = self.nonsquare()
        m, c = s, self.pow(z, Q)
        t, r = self.pow(a, Q), self.pow(a, (Q + 1) // 2)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return r

    # -- vectorized ----------------------------------------------------------

    def _digitwise(self, a, b, op):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return op(a, b) % self.p
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pows:
            out += (op(a // w % p, b // w % p) % p) * w
        return out

    def add_arr(self, a, b) -> np.ndarray:
        return self._digitwise(a, b, np.add)

    def sub_arr(self, a, b) -> np.ndarray:
        return self._digitwise(a, b, np.subtract)

    def neg_arr(self, a) -> np.ndarray:
        return self._digitwise(0, a, np.subtract)

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return a * b % self.p
        if self._exp is None:
            raise TooLarge("vectorized extension-field arithmetic needs q <= 2^20")
        zero = (a == 0) | (b == 0)
        out = self._exp[np.where(zero, 0, self._log[a] + self._log[b])]
        return np.where(zero, 0, out)

    def eta_arr(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self._tables:
            return self._eta[x]
        return np.vectorize(self.eta, otypes=[np.int8])(x)


@lru_cache(maxsize=64)
def _cached_field(p: int, e: int, modulus: tuple[int, ...] | None) -> FiniteField:
    return FiniteField(p, e, modulus)


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Build (or fetch from cache) the field of order p**e."""
    mod = None if modulus is None else tuple(int(c) for c in modulus)
    return _cached_field(int(p), int(e), mod)


def field_of_order(q: int) -> FiniteField:
    """Field of order q using the built-in modulus table for extensions."""
    p, e = prime_power(int(q))
    return make_field(p, e)
