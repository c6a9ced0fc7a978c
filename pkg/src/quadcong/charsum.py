"""Exact character-sum evaluation for binary quadratic forms.

Covers, all in exact integer arithmetic (numpy int8/int64 internally):

* real characters jacobi(. , d) for odd square-free d (d = 1 = trivial),
* incomplete sums of chi(Q(x, y)) over discs and boxes,
* complete-grid sums and their per-prime factorization,
* divisor-indexed character sums and the positivity test for square values,
* minimal integral lifts of a coefficient class mod q,
* shift parameters (a, b) with Q(x + n s) = Q(s) * companion(n + a, b) mod q,
* shifted complete product sums over F_p (split route) and F_{p^2}
  (norm route), their prime-by-prime product over composite q, and the
  windowed power sums built from them,
* exponential sums sum_x e_p(y.x) chi(Q(x)) for ternary Q, with the
  adjugate-based magnitude dichotomy.

Sums over F_p grids are table-driven: the character table is rolled by
each shift via views into a doubled array, so no index arithmetic happens
in the inner loops.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import gcd, isqrt, prod

import numpy as np

from .errors import (
    CertificateMismatch,
    FieldMismatch,
    InvalidInput,
    NotInGoodSet,
    PrincipalCharacter,
    RegionTooLarge,
    SingularQTilde,
)
from .intvec import cross3
from .lattice import lift_lattice
from .modmath import (
    Modulus,
    crt_combine,
    find_nonresidue,
    inv_mod,
    is_prime,
    is_square_mod,
    jacobi,
    make_modulus,
)
from .qforms import BinaryForm, TernaryForm, adjugate4, monic_companion

POINT_BUDGET = 10**9


def _guard_points(n: int, what: str):
    if n > POINT_BUDGET:
        raise RegionTooLarge(f"{what}: {n} points exceeds budget {POINT_BUDGET}")


# ---------------------------------------------------------------- characters


@dataclass(frozen=True)
class Character:
    """Real character m -> jacobi(m, d) for odd square-free d; d = 1 is trivial."""

    d: int

    @property
    def principal(self) -> bool:
        return self.d == 1

    def evaluate(self, m: int) -> int:
        return jacobi(m, self.d)

    def table(self) -> np.ndarray:
        return jacobi_table(self.d)


def make_character(d: int) -> Character:
    if d != 1:
        make_modulus(d)  # validates odd, square-free, >= 3
    return Character(d)


@lru_cache(maxsize=None)
def _legendre_table(p: int) -> np.ndarray:
    # table[i] = jacobi(i, p); residues marked by squaring, 0 at 0
    t = np.full(p, -1, dtype=np.int8)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    t[sq] = 1
    t[0] = 0
    t.flags.writeable = False
    return t


@lru_cache(maxsize=None)
def jacobi_table(d: int) -> np.ndarray:
    """int8 array of jacobi(i, d) for i in [0, d); read-only, cached."""
    if d == 1:
        t = np.ones(1, dtype=np.int8)
        t.flags.writeable = False
        return t
    mod = make_modulus(d)
    t = np.ones(d, dtype=np.int8)
    idx = np.arange(d, dtype=np.int64)
    for p in mod.primes:
        t = t * _legendre_table(p)[idx % p]
    t.flags.writeable = False
    return t


# ------------------------------------------------------------------- regions


@dataclass(frozen=True)
class Disc:
    """Lattice points with (x - cx)^2 + (y - cy)^2 <= r_sq."""

    cx: int
    cy: int
    r_sq: int

    def rows(self):
        if self.r_sq < 0:
            return
        r = isqrt(self.r_sq)
        for y in range(self.cy - r, self.cy + r + 1):
            w = isqrt(self.r_sq - (y - self.cy) ** 2)
            yield y, self.cx - w, self.cx + w

    def point_count(self) -> int:
        return sum(hi - lo + 1 for _, lo, hi in self.rows())


@dataclass(frozen=True)
class Box:
    """Lattice points with x_lo <= x <= x_hi, y_lo <= y <= y_hi (empty if inverted)."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def rows(self):
        if self.x_hi < self.x_lo:
            return
        for y in range(self.y_lo, self.y_hi + 1):
            yield y, self.x_lo, self.x_hi

    def point_count(self) -> int:
        w = self.x_hi - self.x_lo + 1
        h = self.y_hi - self.y_lo + 1
        return max(w, 0) * max(h, 0)


def incomplete_sum(chi: Character, form: BinaryForm, region) -> int:
    """Exact sum of chi(Q(x, y)) over the lattice points of the region.

    Row-major iteration; each row is evaluated with vectorized table lookups.
    """
    _guard_points(region.point_count(), "incomplete_sum")
    d = chi.d
    t = chi.table()
    a, b, c = form.a % d, form.b % d, form.c % d
    total = 0
    for y, lo, hi in region.rows():
        xs = np.arange(lo, hi + 1, dtype=np.int64) % d
        vals = (a * xs * xs + (b * y % d) * xs + (c * y * y % d)) % d
        total += int(t[vals].sum(dtype=np.int64))
    return total


def full_grid_sum_direct(form: BinaryForm, d: int) -> int:
    """Sum of jacobi(Q(x, y), d) over the complete d x d residue grid."""
    _guard_points(d * d, "full_grid_sum_direct")
    t = jacobi_table(d)
    a, b, c = form.a % d, form.b % d, form.c % d
    xs = np.arange(d, dtype=np.int64)
    sq = (xs * xs) % d
    total = 0
    block = max(1, (1 << 22) // d)
    for y0 in range(0, d, block):
        ys = xs[y0 : y0 + block]
        vals = (
            a * sq[None, :]
            + (b * ys % d)[:, None] * xs[None, :]
            + (c * sq[y0 : y0 + block] % d)[:, None]
        ) % d
        total += int(t[vals].sum(dtype=np.int64))
    return total


def full_grid_sum(form: BinaryForm, mod: Modulus) -> int:
    """Complete-grid sum mod q as the product of per-prime grid sums.

    The residue grid mod q is the product of the grids mod each prime and
    jacobi(. , q) splits likewise, so the q^2-point sum factors exactly.
    """
    out = 1
    for p in mod.primes:
        out *= full_grid_sum_direct(form, p)
    return out


# ------------------------------------------------------- divisor square test


def divisor_char_sum(v: int, mod: Modulus) -> int:
    """Sum of jacobi(v, d) over all divisors d of q (including d = 1).

    Computed two ways (divisor enumeration and the per-prime product
    expansion) which must agree; the shared value is returned.
    """
    primes = mod.primes
    by_divisors = 0
    for k in range(len(primes) + 1):
        for subset in combinations(primes, k):
            by_divisors += jacobi(v, prod(subset) if subset else 1)
    by_product = prod(1 + jacobi(v, p) for p in primes)
    if by_divisors != by_product:
        raise CertificateMismatch("divisor sum does not match product expansion")
    return by_product


def divisor_sum_positive(form: BinaryForm, mod: Modulus, point) -> bool:
    """True iff the divisor character sum at Q(point) is positive.

    Positivity is equivalent to Q(point) being a square mod q; both tests
    are run and cross-checked.
    """
    v = form.evaluate(point)
    positive = divisor_char_sum(v, mod) > 0
    if positive != is_square_mod(v, mod):
        raise CertificateMismatch("positivity disagrees with per-prime square test")
    return positive


# ------------------------------------------------------------- minimal lifts


@dataclass(frozen=True)
class MinimalLift:
    form: BinaryForm  # shortest-vector representative of the class
    lam: int  # form's coefficients are lam * (original class) mod q


def minimal_lift(a: int, b: int, c: int, mod: Modulus) -> MinimalLift:
    """Shortest integral form whose coefficient vector is a multiple of
    (a, b, c) mod q.

    det4(lift) = lam^2 * det4(class) mod q; when the class is nonsingular
    mod q this forces q not to divide det4(lift).
    """
    q = mod.q
    lat = lift_lattice(a, b, c, mod)
    va, vb, vc = lat.shortest
    if va % q == 0 and vb % q == 0 and vc % q == 0:
        raise CertificateMismatch("minimal lattice vector vanishes mod q")
    cls = (a, b, c)
    pairs = []
    for p in mod.primes:
        rp = tuple(x % p for x in cls)
        if rp == (0, 0, 0):
            pairs.append((0, p))
            continue
        i = next(k for k in range(3) if rp[k] != 0)
        lam_p = (va, vb, vc)[i] * inv_mod(rp[i], p) % p
        for k in range(3):
            if ((va, vb, vc)[k] - lam_p * rp[k]) % p != 0:
                raise CertificateMismatch("lattice vector not proportional to class")
        pairs.append((lam_p, p))
    lam = crt_combine(pairs)
    lift = BinaryForm(va, vb, vc)
    cls_det = 4 * a * c - b * b
    if (lift.det4() - lam * lam * cls_det) % q != 0:
        raise CertificateMismatch("determinant congruence failed")
    if gcd(cls_det, q) == 1 and gcd(lift.det4(), q) == q:
        raise CertificateMismatch("lift determinant divisible by q")
    return MinimalLift(form=lift, lam=lam)


def in_lift_lattice(v, cls, mod: Modulus) -> bool:
    """Is v = lam * cls mod q for some integer lam?  Checked prime by prime."""
    for p in mod.primes:
        if all(x % p == 0 for x in cls):
            if any(x % p for x in v):
                return False
        elif any(x % p for x in cross3(v, cls)):
            return False
    return True


# ------------------------------------------------------------ shift machinery


@dataclass(frozen=True)
class ShiftParams:
    """Companion coordinates: Q(x + n s) = Q(s) * companion(n + a, b) mod q."""

    a: int
    b: int


def shift_params(form: BinaryForm, s, x, mod: Modulus, check: bool = True) -> ShiftParams:
    """Companion coordinates (a, b) for the shift s and base point x.

    Requires Q(s) to be a unit mod q.  When check is set, the defining
    identity is verified at n = 0..3 (a failure would be a bug, not bad
    input, hence the assert).
    """
    q = mod.q
    qs = form.evaluate(s) % q
    if gcd(qs, q) != 1:
        raise NotInGoodSet(f"Q(s) = {qs} is not a unit mod {q}")
    iqs = inv_mod(qs, q)
    s1, s2 = s
    x1, x2 = x
    a = (form.a * x1 * s1 + form.b * x1 * s2 + form.c * x2 * s2) * iqs % q
    b = (x2 * s1 - x1 * s2) * iqs % q
    if check:
        qt = monic_companion(form)
        for n in range(4):
            lhs = form.evaluate((x1 + n * s1, x2 + n * s2)) % q
            rhs = qs * qt.evaluate((n + a, b)) % q
            assert lhs == rhs, "shift identity violated (bug)"
    return ShiftParams(a=a, b=b)


def poly_identity_check(form: BinaryForm, s, x, mod: Modulus) -> bool:
    """Coefficientwise check of
    (A b X - a Y)(s2 X - s1 Y) = s2 b Q(X, Y) - (x2 X - x1 Y) Y  mod q."""
    q = mod.q
    sp = shift_params(form, s, x, mod, check=False)
    a, b = sp.a, sp.b
    s1, s2 = s
    x1, x2 = x
    lhs = (form.a * b * s2, -form.a * b * s1 - a * s2, a * s1)
    rhs = (s2 * b * form.a, s2 * b * form.b - x2, s2 * b * form.c + x1)
    return all((u - v) % q == 0 for u, v in zip(lhs, rhs))


def good_shift_vectors(form: BinaryForm, lift: BinaryForm, bound: int, mod: Modulus):
    """Positive vectors s with ||s|| <= bound, Q(s) a unit mod q, lift(s) != 0.

    Lexicographic order, hence deterministic.
    """
    q = mod.q
    out = []
    for s1 in range(1, bound + 1):
        for s2 in range(1, isqrt(bound * bound - s1 * s1) + 1):
            s = (s1, s2)
            if gcd(form.evaluate(s) % q, q) != 1:
                continue
            if lift.evaluate(s) == 0:
                continue
            out.append(s)
    return out


def shift_pair_counts(
    form: BinaryForm,
    lift: BinaryForm,
    mod: Modulus,
    center,
    radius_sq: int,
    shift_bound: int,
    dense=None,
):
    """Count, for each (a, b) mod q, the pairs (s, x) producing those
    companion coordinates, with s a good shift vector and x in the disc
    ||x - center||^2 <= radius_sq.

    Returns a q x q int64 array for q <= 256 and a dict {(a, b): count}
    beyond (override with dense=True/False); both carry identical counts.
    """
    q = mod.q
    shifts = good_shift_vectors(form, lift, shift_bound, mod)
    disc = Disc(center[0], center[1], radius_sq)
    _guard_points(disc.point_count() * max(len(shifts), 1), "shift_pair_counts")
    pts = [(x1, x2) for x2, lo, hi in disc.rows() for x1 in range(lo, hi + 1)]
    # disc rows yield (y, lo, hi); here the pair is (x1, x2) with x2 the row
    xs1 = np.array([p[0] for p in pts], dtype=np.int64)
    xs2 = np.array([p[1] for p in pts], dtype=np.int64)
    use_dense = (q <= 256) if dense is None else dense
    counts = np.zeros((q, q), dtype=np.int64) if use_dense else {}
    fa, fb, fc = form.a % q, form.b % q, form.c % q
    for s1, s2 in shifts:
        qs = form.evaluate((s1, s2)) % q
        iqs = inv_mod(qs, q)
        av = (fa * xs1 * s1 + fb * xs1 * s2 + fc * xs2 * s2) * iqs % q
        bv = (xs2 * s1 - xs1 * s2) * iqs % q
        if use_dense:
            np.add.at(counts, (av, bv), 1)
        else:
            for key in zip(av.tolist(), bv.tolist()):
                counts[key] = counts.get(key, 0) + 1
    return counts


def second_moment(counts) -> int:
    """Sum of squared pair counts over the (a, b) grid."""
    if isinstance(counts, dict):
        return sum(v * v for v in counts.values())
    return int((counts.astype(np.int64) ** 2).sum(dtype=np.int64))


# ------------------------------------------------- shifted complete sums


@dataclass(frozen=True)
class DiffProducts:
    """Pairwise difference products of a tuple of shifts.

    products[i] = prod over j != i of (n_j - n_i); overall_gcd is the gcd of
    all of them, 0 when every product vanishes.
    """

    ns: tuple
    products: tuple
    overall_gcd: int


def diff_products(ns) -> DiffProducts:
    ns = tuple(ns)
    prods = []
    for i, ni in enumerate(ns):
        v = 1
        for j, nj in enumerate(ns):
            if j != i:
                v *= nj - ni
        prods.append(v)
    g = 0
    for v in prods:
        g = gcd(g, v)
    return DiffProducts(ns=ns, products=tuple(prods), overall_gcd=g)


def _require_scan_prime(p: int, chi):
    if not is_prime(p) or p == 2:
        raise InvalidInput(f"{p} is not an odd prime")
    if chi is not None:
        if chi.principal:
            raise PrincipalCharacter("trivial character gives a degenerate sum")
        if chi.d != p:
            raise FieldMismatch(f"character modulus {chi.d} != prime {p}")


def linear_shift_sum(p: int, ns, chi: Character = None) -> int:
    """sum over a mod p of jacobi(prod_i (n_i + a), p): the one-variable
    shifted product sum.  O(p) via rolled table views."""
    _require_scan_prime(p, chi)
    t = _legendre_table(p)
    t2 = np.concatenate([t, t])
    ns = tuple(n % p for n in ns)
    acc = t2[ns[0] : ns[0] + p].copy()
    for n in ns[1:]:
        np.multiply(acc, t2[n : n + p], out=acc)
    return int(acc.sum(dtype=np.int64))


@lru_cache(maxsize=None)
def _norm_table(p: int):
    """(d, T) with d the least non-residue and T[c, e] = jacobi(c^2 - d e^2, p).

    T is the norm-character table of F_{p^2} = F_p[T]/(T^2 - d): the value at
    the field element c + eT is jacobi(Norm(c + eT), p).
    """
    d = find_nonresidue(p)
    cs = np.arange(p, dtype=np.int64)
    vals = (cs[:, None] ** 2 - d * cs[None, :] ** 2) % p
    t = _legendre_table(p)[vals]
    t.flags.writeable = False
    return d, t


def norm_shift_sum(p: int, ns, chi: Character = None) -> int:
    """Shifted product sum over F_{p^2} through the norm character.

    Equals the two-variable complete sum for any inert companion form: the
    substitution z = a - (root) b identifies the (a, b) grid with F_{p^2}
    and sends companion(n + a, b) to Norm(n + z).
    """
    _require_scan_prime(p, chi)
    _, t = _norm_table(p)
    t2 = np.vstack([t, t])
    ns = tuple(n % p for n in ns)
    acc = t2[ns[0] : ns[0] + p, :].copy()
    for n in ns[1:]:
        np.multiply(acc, t2[n : n + p, :], out=acc)
    return int(acc.sum(dtype=np.int64))


@lru_cache(maxsize=None)
def _form_grid_table(p: int, a: int, b: int, c: int) -> np.ndarray:
    """T[x, y] = jacobi(a x^2 + b x y + c y^2, p) over the full p x p grid."""
    xs = np.arange(p, dtype=np.int64)
    vals = (a * xs[:, None] ** 2 + b * xs[:, None] * xs[None, :] + c * xs[None, :] ** 2) % p
    t = _legendre_table(p)[vals]
    t.flags.writeable = False
    return t


def _check_companion(p: int, qt: BinaryForm):
    if qt.det4() % p == 0:
        raise SingularQTilde(f"det4 = {qt.det4()} vanishes mod {p}")
    if qt.a % p == 0:
        raise InvalidInput("companion leading coefficient must be a unit")


def form_shift_sum_direct(p: int, ns, qt: BinaryForm) -> int:
    """Direct O(p^2) evaluation of the shifted companion-form product sum:
    sum over (a, b) mod p of jacobi(prod_i qt(n_i + a, b), p)."""
    _require_scan_prime(p, None)
    _check_companion(p, qt)
    t = _form_grid_table(p, qt.a % p, qt.b % p, qt.c % p)
    t2 = np.vstack([t, t])
    ns = tuple(n % p for n in ns)
    acc = t2[ns[0] : ns[0] + p, :].copy()
    for n in ns[1:]:
        np.multiply(acc, t2[n : n + p, :], out=acc)
    return int(acc.sum(dtype=np.int64))


def splits_mod(qt: BinaryForm, p: int) -> bool:
    """Does the companion form factor into two linear forms over F_p?"""
    return jacobi(qt.disc(), p) == 1


def form_shift_sum(p: int, ns, qt: BinaryForm, chi: Character = None, check: bool = True) -> int:
    """Shifted companion-form product sum mod an odd prime p.

    Uses the factored route: the square of the one-variable sum when qt
    splits mod p, the norm-character sum when qt is inert.  With check set
    (the default) the direct O(p^2) grid enumeration is also computed and
    the two must agree.
    """
    _require_scan_prime(p, chi)
    _check_companion(p, qt)
    if len(ns) == 0 or len(ns) % 2 != 0:
        raise InvalidInput("shift tuple must have positive even length")
    if splits_mod(qt, p):
        s1 = linear_shift_sum(p, ns)
        val = s1 * s1
    else:
        val = norm_shift_sum(p, ns)
    if check:
        direct = form_shift_sum_direct(p, ns, qt)
        if direct != val:
            raise CertificateMismatch(
                f"factored route {val} != direct grid {direct} at p = {p}"
            )
    return val


def form_shift_sum_q(qt: BinaryForm, mod: Modulus, ns, check: bool = False) -> int:
    """Product over p | q of the prime-level sums: the composite-q sum.

    Exact by the residue-grid factorization; the per-prime dual-route check
    is optional here because it doubles the work.
    """
    out = 1
    for p in mod.primes:
        out *= form_shift_sum(p, ns, qt, check=check)
    return out


def _companion_value_table(qt: BinaryForm, q: int) -> np.ndarray:
    """jacobi(qt(x, y), q) over the full q x q grid, int8."""
    a, b, c = qt.a % q, qt.b % q, qt.c % q
    xs = np.arange(q, dtype=np.int64)
    grid = (a * xs[:, None] ** 2 + b * xs[:, None] * xs[None, :] + c * xs[None, :] ** 2) % q
    return jacobi_table(q)[grid]


def form_shift_sum_q_direct(qt: BinaryForm, mod: Modulus, ns) -> int:
    """O(q^2) direct evaluation over the composite grid, for cross-checking."""
    q = mod.q
    _guard_points(q * q * len(ns), "form_shift_sum_q_direct")
    tg = _companion_value_table(qt, q)
    t2 = np.vstack([tg, tg])
    ns = tuple(n % q for n in ns)
    acc = t2[ns[0] : ns[0] + q, :].astype(np.int64)
    for n in ns[1:]:
        acc *= t2[n : n + q, :]
    return int(acc.sum(dtype=np.int64))


def shifted_sum_bound(p: int, r: int, overall_gcd: int) -> int:
    """Unconditional integer bound 4 r^2 p gcd(p, Delta) for the prime-level
    sum; gcd(p, 0) = p covers the fully degenerate tuples."""
    return 4 * r * r * p * gcd(p, overall_gcd)


# ------------------------------------------------------- windowed power sums


def window_power_sum(qt: BinaryForm, mod: Modulus, h: int, r: int) -> int:
    """sum over (a, b) mod q of (sum_{n=1..h} jacobi(qt(n + a, b), q))^{2r}."""
    q = mod.q
    if h < 1 or r < 1:
        raise InvalidInput("window length and power must be positive")
    _guard_points(q * q * h ** (2 * r), "window_power_sum")
    tg = _companion_value_table(qt, q)
    t2 = np.vstack([tg, tg])
    w = np.zeros((q, q), dtype=np.int64)
    for n in range(1, h + 1):
        m = n % q
        w += t2[m : m + q, :]
    return int((w ** (2 * r)).sum(dtype=np.int64))


def window_power_sum_expanded(qt: BinaryForm, mod: Modulus, h: int, r: int, check: bool = False) -> int:
    """The same power sum via the tuple expansion: sum over all 2r-tuples in
    [1, h]^{2r} of the composite shifted product sum.  Test-scale only."""
    _guard_points(h ** (2 * r) * len(mod.primes) * 4, "window_power_sum_expanded")
    total = 0
    for ns in product(range(1, h + 1), repeat=2 * r):
        total += form_shift_sum_q(qt, mod, ns, check=check)
    return total


def max_window_power_sum(qt: BinaryForm, mod: Modulus, n: int, r: int) -> int:
    """sum over (a, b) of the max over subintervals I of (0, n] of
    |sum_{m in I} jacobi(qt(m + a, b), q)|^{2r}; all O(n^2) subintervals
    are examined directly."""
    q = mod.q
    if n < 1 or r < 1:
        raise InvalidInput("window length and power must be positive")
    _guard_points(q * q * n * n, "max_window_power_sum")
    tg = _companion_value_table(qt, q)
    t2 = np.vstack([tg, tg])
    prefix = [np.zeros((q, q), dtype=np.int64)]
    for m in range(1, n + 1):
        prefix.append(prefix[-1] + t2[m % q : m % q + q, :])
    best = np.zeros((q, q), dtype=np.int64)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            np.maximum(best, np.abs(prefix[j] - prefix[i]), out=best)
    return int((best ** (2 * r)).sum(dtype=np.int64))


# ----------------------------------------------------------- exponential sums


@dataclass(frozen=True)
class ExpCharSum:
    """Record for sum_x e_p(y.x) jacobi(Q(x), p) over x mod p.

    phase_coefficients[k] is the exact integer sum of jacobi(Q(x), p) over
    the phase class y.x = k; the magnitude is their root-of-unity combination.
    """

    p: int
    y: tuple
    phase_coefficients: tuple
    magnitude: float
    adj_zero: bool  # p divides the adjugate form at y
    large: bool  # magnitude exceeds p^{3/2}, the dichotomy threshold


def exp_char_sum(form: TernaryForm, p: int, y) -> ExpCharSum:
    """Exact-coefficient evaluation of the ternary exponential character sum.

    The sum is grouped by the phase y.x mod p into an integer coefficient
    vector, so the only floating point is the final root-of-unity dot
    product (error well below 1e-6 for p <= 101).
    """
    if not is_prime(p) or p == 2:
        raise InvalidInput(f"{p} is not an odd prime")
    if p > 101:
        raise RegionTooLarge(f"p = {p} exceeds the enumeration cap 101")
    t = _legendre_table(p)
    xs = np.arange(p, dtype=np.int64)
    y1, y2, y3 = (c % p for c in y)
    a11, a22, a33 = form.a11 % p, form.a22 % p, form.a33 % p
    a12, a13, a23 = form.a12 % p, form.a13 % p, form.a23 % p
    coef = np.zeros(p, dtype=np.int64)
    grid2 = xs[:, None]  # x2 axis
    grid3 = xs[None, :]  # x3 axis
    q22 = a22 * grid2 * grid2
    q33 = a33 * grid3 * grid3
    q23 = a23 * grid2 * grid3
    for x1 in range(p):
        vals = (a11 * x1 * x1 + q22 + q33 + a12 * x1 * grid2 + a13 * x1 * grid3 + q23) % p
        phase = (y1 * x1 + y2 * grid2 + y3 * grid3) % p
        coef += np.bincount(
            phase.ravel(), weights=t[vals].ravel(), minlength=p
        ).astype(np.int64)
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    s = complex(np.dot(coef.astype(np.float64), roots))
    adj_zero = adjugate4(form).evaluate(tuple(int(c) for c in y)) % p == 0
    mag = abs(s)
    return ExpCharSum(
        p=p,
        y=(y1, y2, y3),
        phase_coefficients=tuple(int(c) for c in coef),
        magnitude=mag,
        adj_zero=adj_zero,
        large=mag > p**1.5,
    )
