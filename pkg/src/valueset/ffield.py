"""Exact arithmetic in F_p and F_(p^m).

Field elements are plain Python ints: the canonical index of an element is
sum(coeffs[i] * p**i), i.e. the little-endian base-p encoding of its
coefficient vector over the prime field.  All file formats and histogram
keys use this index.  A Field object carries the modulus and provides the
arithmetic; indices from different fields must not be mixed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    NotMonicError,
    NotPrimeError,
    OrderTooLargeError,
    SingularMatrixError,
)

# Exhaustive operations (enumeration, histograms, coverage) refuse to run
# above this order.  A configuration constant, not baked into arithmetic.
ENUMERATION_CAP = 2 ** 26

# Extension fields at or below this order get log/exp multiplication tables.
_TABLE_CAP = 2 ** 16

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_PROBABILISTIC_ROUNDS = 64
_PROBABILISTIC_SALT = 0x76616C73  # fixed salt so large-n tests are reproducible


def _miller_rabin_witness(n: int, a: int, d: int, r: int) -> bool:
    """True if a witnesses the compositeness of n = 2^r * d + 1."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2^64, 64-round Miller-Rabin above.

    The witness set {2,...,37} is exact for n < 2^64.  Above that the bases
    come from a generator seeded by n, so results are reproducible; the
    error probability is at most 4^-64.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < 2 ** 64:
        bases = _MR_WITNESSES
    else:
        rng = random.Random(_PROBABILISTIC_SALT ^ n)
        bases = [rng.randrange(2, n - 1) for _ in range(_PROBABILISTIC_ROUNDS)]
    return not any(_miller_rabin_witness(n, a, d, r) for a in bases)


# ---------------------------------------------------------------------------
# Polynomial arithmetic over F_p on little-endian coefficient lists.  Used to
# build extension fields; the Field class below wraps it for element ops.
# ---------------------------------------------------------------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a: list[int], g: list[int], p: int) -> list[int]:
    a = list(a)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(a) - 1 >= dg and a:
        a = _trim(a)
        if len(a) - 1 < dg:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dg
        for i, gi in enumerate(g):
            a[shift + i] = (a[shift + i] - coef * gi) % p
        a = _trim(a)
    return a


def _ppowmod(base: list[int], e: int, g: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, g, p)
    while e > 0:
        if e & 1:
            result = _pmod(_pmul(result, base, p), g, p)
        base = _pmod(_pmul(base, base, p), g, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _prime_factors(n: int) -> list[int]:
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


def is_irreducible(poly: list[int], p: int) -> bool:
    """Rabin test: poly (monic, little-endian coeffs, degree >= 1) over F_p."""
    poly = list(poly)
    if not poly or poly[-1] != 1:
        raise NotMonicError(f"polynomial must be monic over F_{p}")
    m = len(poly) - 1
    if m < 1:
        raise NotMonicError("degree must be at least 1")
    x = [0, 1]
    # x^(p^m) == x mod poly, and gcd(x^(p^(m/l)) - x, poly) == 1 for prime l | m
    for ell in _prime_factors(m):
        h = _ppowmod(x, p ** (m // ell), poly, p)
        h = _trim([(hc - xc) % p for hc, xc in _zip_pad(h, x)])
        if len(_pgcd(h, poly, p)) - 1 >= 1:
            return False
    h = _ppowmod(x, p ** m, poly, p)
    h = _trim([(hc - xc) % p for hc, xc in _zip_pad(h, x)])
    return not h


def _zip_pad(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Field:
    """F_(p^m) with elements addressed by canonical integer index.

    Immutable and safe to share across workers; all operations are pure.
    The multiplication tables for extension fields are built lazily and
    cached on first use.
    """

    p: int
    m: int
    q: int
    modulus: tuple[int, ...] | None  # monic, little-endian, length m+1; None iff m == 1
    _tables: dict = dc_field(default_factory=dict, repr=False, compare=False)

    # -- element construction ------------------------------------------------

    def coeffs(self, e: int) -> tuple[int, ...]:
        """Coefficient vector (little-endian base-p digits of the index)."""
        out = []
        for _ in range(self.m):
            e, d = divmod(e, self.p)
            out.append(d)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        idx = 0
        for c in reversed(list(coeffs)):
            idx = idx * self.p + c % self.p
        return idx

    def scalar(self, c: int) -> int:
        """Embed an integer as a constant field element."""
        return c % self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def gen(self) -> int:
        """The extension generator (the residue of x); only for m > 1."""
        if self.m == 1:
            raise ValueError("prime field has no extension generator")
        return self.p

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p, out, mult = self.p, 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += (da + db) % p * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        p, out, mult = self.p, 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += (da - db) % p * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        log, exp = self._logexp()
        if log is not None:
            return exp[log[a] + log[b]]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        log, exp = self._logexp()
        if log is not None:
            return exp[(self.q - 1 - log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        """a**e with the convention 0**0 == 1; e is a nonnegative big integer."""
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        log, exp = self._logexp()
        if log is not None:
            return exp[log[a] * (e % (self.q - 1)) % (self.q - 1)]
        e %= self.q - 1
        if e == 0:
            return 1
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _pmod(_pmul(list(self.coeffs(a)), list(self.coeffs(b)), self.p),
                     list(self.modulus), self.p)
        return self.from_coeffs(prod + [0] * (self.m - len(prod)))

    def _logexp(self):
        """Lazy discrete-log tables keyed off a multiplicative generator."""
        if self.q > _TABLE_CAP:
            return None, None
        cached = self._tables.get("logexp")
        if cached is None:
            cached = self._build_logexp()
            self._tables["logexp"] = cached
        return cached

    def _build_logexp(self):
        q = self.q
        for g in range(2, q):
            exp = [1] * (2 * q - 3)
            log = [0] * q
            x = 1
            ok = True
            for i in range(1, q - 1):
                x = self._mul_poly(x, g)
                if x == 1:
                    ok = False
                    break
                exp[i] = x
                log[x] = i
            if ok:
                for i in range(q - 1, 2 * q - 3):
                    exp[i] = exp[i - (q - 1)]
                return log, exp
        raise AssertionError("no multiplicative generator found; field is corrupt")

    # -- enumeration ---------------------------------------------------------

    def elements(self, start: int = 0, stop: int | None = None):
        """All elements in increasing canonical-index order (or a sub-range)."""
        if self.q > ENUMERATION_CAP:
            raise OrderTooLargeError(
                f"q = {self.q} exceeds the enumeration cap 2^26")
        return range(start, self.q if stop is None else stop)

    # -- serialization -------------------------------------------------------

    def describe(self) -> dict:
        """Field description used in result files."""
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["modulus"] = list(self.modulus)
        return out

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))


def make_field(p: int, m: int = 1, modulus=None, require_enumerable: bool = False) -> Field:
    """Build F_(p^m), verifying primality and finding a modulus for m > 1.

    The modulus search is deterministic: monic degree-m candidates are tried
    in increasing canonical index of their coefficient vector, so the same
    field is produced on every run.  An explicit modulus (little-endian,
    monic, degree m) may be supplied instead; it is verified irreducible.
    """
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    q = p ** m
    if require_enumerable and q > ENUMERATION_CAP:
        raise OrderTooLargeError(f"q = {q} exceeds the enumeration cap 2^26")
    if m == 1:
        return Field(p=p, m=m, q=q, modulus=None)
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != m + 1:
            raise ValueError(f"modulus must have degree {m}")
        if any(not 0 <= c < p for c in modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible over F_p")
        return Field(p=p, m=m, q=q, modulus=modulus)
    for idx in range(p ** m):
        cand = []
        e = idx
        for _ in range(m):
            e, d = divmod(e, p)
            cand.append(d)
        cand.append(1)
        if is_irreducible(cand, p):
            return Field(p=p, m=m, q=q, modulus=tuple(cand))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def split_range(n: int, parts: int) -> list[tuple[int, int]]:
    """Split [0, n) into at most `parts` contiguous disjoint sub-ranges."""
    parts = max(1, min(parts, n)) if n else 1
    size, rem = divmod(n, parts)
    out = []
    lo = 0
    for i in range(parts):
        hi = lo + size + (1 if i < rem else 0)
        out.append((lo, hi))
        lo = hi
    return out


def solve_linear(matrix, rhs, field: Field) -> list[int]:
    """Solve a square system over `field` by Gaussian elimination.

    Pivots on the first nonzero entry in each column; raises
    SingularMatrixError when no pivot exists.
    """
    n = len(rhs)
    a = [list(row) for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    b = list(rhs)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(inv, v) for v in a[col]]
        b[col] = field.mul(inv, b[col])
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [field.sub(v, field.mul(factor, w)) for v, w in zip(a[r], a[col])]
                b[r] = field.sub(b[r], field.mul(factor, b[col]))
    return b
