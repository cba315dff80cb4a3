"""Exact arithmetic over GF(2^r).

Elements are plain Python ints in [0, 2^r); the bits of an element are the
coefficients of a polynomial over GF(2).  Addition is XOR (characteristic 2),
multiplication is polynomial product reduced modulo an irreducible polynomial.

A ``GF`` instance owns precomputed log/antilog tables keyed to a primitive
element, so multiplicative operations are table lookups.  Table construction
is cross-checked against carryless multiply-and-reduce at startup, and the
modulus is checked for irreducibility, so a bad polynomial or generator is
rejected at construction time rather than corrupting results silently.
"""

from __future__ import annotations

from functools import lru_cache

__all__ = ["GF", "gf", "DEFAULT_POLYS"]

# Primitive polynomials (integer bit encoding) for each supported bit width.
# All are primitive with generator alpha = x (i.e. the element 2), which is
# verified at construction.
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,          # x^3 + x + 1
    4: 0b10011,         # x^4 + x + 1
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,           # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,        # x^16 + x^12 + x^3 + x + 1
}

MAX_R = 16


def _clmul(a: int, b: int) -> int:
    """Carryless (GF(2)[x]) product of two integers."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _clmod(a: int, mod: int) -> int:
    """Remainder of a modulo mod in GF(2)[x]."""
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _clmulmod(a: int, b: int, mod: int) -> int:
    return _clmod(_clmul(a, b), mod)


def _is_irreducible(poly: int, r: int) -> bool:
    """Exhaustive trial division by every polynomial of degree 1..r//2."""
    if poly.bit_length() - 1 != r:
        return False
    for d in range(1, r // 2 + 1):
        for low in range(1 << d):
            divisor = (1 << d) | low
            if _clmod(poly, divisor) == 0:
                return False
    return True


def _prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


class GF:
    """The finite field GF(2^r) with a fixed primitive polynomial.

    All operations are pure and the instance is immutable after construction,
    so a single field can be shared freely across workers.
    """

    def __init__(self, r: int, poly: int | None = None, generator: int = 2):
        if not 1 <= r <= MAX_R:
            raise ValueError(f"bit width r={r} out of supported range 1..{MAX_R}")
        if poly is None:
            poly = DEFAULT_POLYS[r]
        if not _is_irreducible(poly, r):
            raise ValueError(f"polynomial {poly:#x} is not irreducible of degree {r}")
        self.r = r
        self.poly = poly
        self.order = 1 << r          # q = 2^r
        if r == 1:
            generator = 1
        if not 0 < generator < self.order:
            raise ValueError("generator out of range")
        self.generator = generator
        self._check_generator_order()
        self._build_tables()
        self._validate_tables()

    # -- construction-time checks -------------------------------------------

    def _check_generator_order(self):
        m = self.order - 1
        if m == 1:
            return
        if self._clpow(self.generator, m) != 1:
            raise ValueError("generator does not have full multiplicative order")
        for p in _prime_factors(m):
            if self._clpow(self.generator, m // p) == 1:
                raise ValueError(
                    f"generator {self.generator} has order dividing {m // p}; not primitive"
                )

    def _clpow(self, a: int, k: int) -> int:
        res = 1
        while k:
            if k & 1:
                res = _clmulmod(res, a, self.poly)
            a = _clmulmod(a, a, self.poly)
            k >>= 1
        return res

    def _build_tables(self):
        q = self.order
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = _clmulmod(x, self.generator, self.poly)
        for i in range(q - 1, 2 * q - 2):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log

    def _validate_tables(self):
        q = self.order
        seen = set(self._exp[: q - 1])
        if len(seen) != q - 1 or 0 in seen:
            raise AssertionError("antilog table is not a bijection onto the nonzero elements")
        # Deterministic spot-check of table multiplication against the
        # carryless reference (full cross-check is infeasible for r=16).
        step = max(1, (q - 1) // 17)
        for a in range(1, q, step):
            for b in range(1, q, max(1, step // 3 + 1)):
                if self.mul(a, b) != _clmulmod(a, b, self.poly):
                    raise AssertionError(f"table product disagrees with carryless product for ({a},{b})")

    # -- arithmetic ---------------------------------------------------------

    def _check(self, *vals: int):
        for v in vals:
            if not 0 <= v < self.order:
                raise ValueError(f"value {v} not an element of GF(2^{self.r})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return a ^ b

    sub = add  # characteristic 2

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._exp[self.order - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        self._check(a)
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero base with negative exponent")
            return 0 if k else 1
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    # -- iteration helpers --------------------------------------------------

    def elements(self):
        return range(self.order)

    def nonzero(self):
        return range(1, self.order)

    def rand(self, rng) -> int:
        """Uniform element, including zero."""
        return rng.randrange(self.order)

    def rand_nonzero(self, rng) -> int:
        return rng.randrange(1, self.order)

    def __eq__(self, other):
        return (
            isinstance(other, GF)
            and (self.r, self.poly, self.generator) == (other.r, other.poly, other.generator)
        )

    def __hash__(self):
        return hash((self.r, self.poly, self.generator))

    def __repr__(self):
        return f"GF(2^{self.r}, poly={self.poly:#x})"


@lru_cache(maxsize=None)
def gf(r: int, poly: int | None = None) -> GF:
    """Cached field factory; repeated lookups share one table set."""
    return GF(r, poly)
