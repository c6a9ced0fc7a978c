"""Exact modular arithmetic over odd square-free moduli.

Jacobi symbols, prime square roots (canonical representative), CRT glue,
modulus validation with verified factorization, and a minimal F_{p^2}
implemented as F_p[T]/(T^2 - d) for the smallest non-residue d.
"""

from dataclasses import dataclass
from math import gcd

from .errors import (
    FieldMismatch,
    InvalidInput,
    InvalidModulus,
    NotOdd,
    NotPrime,
    NotSquareFree,
    TooSmall,
)

# Deterministic Miller-Rabin witness set, valid far beyond 2^64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise InvalidModulus(f"jacobi needs positive odd n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def inv_mod(a: int, n: int) -> int:
    return pow(a, -1, n)


def sqrt_mod_prime(a: int, p: int):
    """Canonical square root of a mod prime p, or None when a is a non-residue.

    Canonical means the representative in [0, (p-1)/2]; sqrt(0) = 0.
    """
    if not is_prime(p) or p == 2:
        raise NotPrime(f"sqrt_mod_prime needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    if jacobi(a, p) == -1:
        return None
    if p % 4 == 3:
        t = pow(a, (p + 1) // 4, p)
    else:
        t = _tonelli(a, p)
    return min(t, p - t)


def _tonelli(a: int, p: int) -> int:
    # p ≡ 1 (mod 4), a a known quadratic residue
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def crt_combine(pairs) -> int:
    """Combine [(residue, prime), ...] into the residue mod the product.

    Primes must be pairwise distinct; duplicates raise InvalidInput.
    """
    pairs = list(pairs)
    primes = [p for _, p in pairs]
    if len(set(primes)) != len(primes):
        raise InvalidInput(f"duplicate moduli in {primes}")
    x, m = 0, 1
    for r, p in pairs:
        if m > 1 and gcd(m, p) != 1:
            raise InvalidInput(f"moduli not coprime: {m}, {p}")
        # x' ≡ x (mod m), x' ≡ r (mod p)
        k = (r - x) * inv_mod(m, p) % p
        x += m * k
        m *= p
    return x % m


@dataclass(frozen=True)
class Modulus:
    """An odd square-free modulus with its verified prime factorization."""

    q: int
    primes: tuple

    def __post_init__(self):
        assert all(is_prime(p) for p in self.primes)
        prod = 1
        for p in self.primes:
            prod *= p
        assert prod == self.q


def _factor(n: int):
    """Factor n > 1 by trial division then Pollard rho; returns sorted primes with multiplicity."""
    out = []
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67):
        while n % p == 0:
            out.append(p)
            n //= p
    d = 71
    while d * d <= n and d < 100_000:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 2
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out.append(m)
                continue
            stack.extend(_rho_split(m))
    return sorted(out)


def _rho_split(n: int):
    # Brent's cycle variant; deterministic constant schedule
    if n % 2 == 0:
        return [2, n // 2]
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return [d, n // d]
        c += 1


def make_modulus(q: int) -> Modulus:
    """Validate q as an odd square-free integer >= 3 and factor it."""
    if not isinstance(q, int):
        raise InvalidInput(f"modulus must be int, got {type(q)!r}")
    if q < 3:
        raise TooSmall(f"modulus must be >= 3, got {q}")
    if q % 2 == 0:
        raise NotOdd(f"modulus must be odd, got {q}")
    primes = _factor(q)
    if len(set(primes)) != len(primes):
        raise NotSquareFree(f"{q} has a repeated prime factor")
    return Modulus(q=q, primes=tuple(primes))


def is_square_mod(a: int, mod: Modulus) -> bool:
    """True iff a is a square mod q, prime by prime (0 counts as a square)."""
    return all(jacobi(a, p) != -1 for p in mod.primes)


def sqrt_mod_squarefree(a: int, mod: Modulus):
    """Canonical t with t^2 ≡ a (mod q), or None.

    Per-prime canonical roots glued by CRT, so the result is deterministic.
    """
    parts = []
    for p in mod.primes:
        r = sqrt_mod_prime(a % p, p)
        if r is None:
            return None
        parts.append((r, p))
    return crt_combine(parts)


# -- F_{p^2} -------------------------------------------------------------------


def find_nonresidue(p: int) -> int:
    """Smallest d >= 2 with (d/p) = -1."""
    d = 2
    while jacobi(d, p) != -1:
        d += 1
    return d


@dataclass(frozen=True)
class Fp2Elem:
    """a + b*T in F_p[T]/(T^2 - d), d a fixed non-residue mod p."""

    a: int
    b: int
    p: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0


def fp2_elem(a: int, b: int, p: int, d=None) -> Fp2Elem:
    if d is None:
        d = find_nonresidue(p)
    return Fp2Elem(a, b, p, d)


def _same_field(x: Fp2Elem, y: Fp2Elem):
    if x.p != y.p or x.d != y.d:
        raise FieldMismatch(f"({x.p},{x.d}) vs ({y.p},{y.d})")


def fp2_mul(x: Fp2Elem, y: Fp2Elem) -> Fp2Elem:
    _same_field(x, y)
    p, d = x.p, x.d
    return Fp2Elem((x.a * y.a + d * x.b * y.b) % p, (x.a * y.b + x.b * y.a) % p, p, d)


def fp2_add(x: Fp2Elem, y: Fp2Elem) -> Fp2Elem:
    _same_field(x, y)
    return Fp2Elem((x.a + y.a) % x.p, (x.b + y.b) % x.p, x.p, x.d)


def fp2_pow(x: Fp2Elem, k: int) -> Fp2Elem:
    if k < 0:
        raise InvalidInput("negative exponent")
    out = Fp2Elem(1, 0, x.p, x.d)
    base = x
    while k:
        if k & 1:
            out = fp2_mul(out, base)
        base = fp2_mul(base, base)
        k >>= 1
    return out


def fp2_norm(x: Fp2Elem) -> int:
    """Norm to F_p: x * conj(x) = a^2 - d b^2."""
    return (x.a * x.a - x.d * x.b * x.b) % x.p
