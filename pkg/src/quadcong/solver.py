"""Constructive solver: small nonzero solutions of Q(x) ≡ 0 (mod q).

The pipeline, for a ternary form Q nonsingular mod an odd square-free q:

1. form the negated adjugate form mod q (small symmetric lift),
2. find a small witness a with (-Q^adj)(a) ≡ t^2 (mod q)
   (restriction to a coprime plane + square-value search on a binary form),
3. split a = content * primitive, q = q0 * q1 with q0 = gcd(q, content),
4. reduce the plane lattice orthogonal to the primitive part,
5. restrict Q to that plane; the restriction factors into linear forms mod q1
   because its discriminant is a square mod q1 by the witness certificate,
6. pick (u, v) in the congruence lattice of the linear factor inside an exact
   box with u*v area q1, and return x = q0 * (u x1 + v x2).

Every inequality in the trace is checked in exact integer arithmetic; the
final guarantee is 3 ||x||^4 <= 64 q^2 ||a||^2, i.e. ||x||^2 <= (8/sqrt 3) q ||a||.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt

from .errors import (
    CertificateMismatch,
    SearchExhausted,
    SingularForm,
    TraceInvariantViolation,
)
from .intvec import add, content, dot, norm_sq, scale
from .lattice import (
    congruence_basis2,
    iter_vectors_by_norm,
    orthogonal_basis,
    weighted_short_vectors,
)
from .modmath import (
    Modulus,
    crt_combine,
    inv_mod,
    is_square_mod,
    sqrt_mod_prime,
    sqrt_mod_squarefree,
)
from .qforms import (
    BinaryForm,
    TernaryForm,
    adjoint_mod,
    negate_mod,
    nonsingular_mod,
    restrict,
)


def coprime_point_search(f, n: int, mod: Modulus, cap: int = 2**30):
    """First positive point a in [1, A]^n with gcd(f(a), q) = 1.

    Scans sup-norm shells A = 1, 2, 3, ... in lexicographic order inside each
    shell, so the hit minimizes max(a_i) over everything examined.  Raises
    SearchExhausted once the box edge passes ``cap``.
    """
    q = mod.q
    for a in range(1, cap + 1):
        for point in product(range(1, a + 1), repeat=n):
            if max(point) != a:
                continue
            if gcd(f(point) % q, q) == 1:
                return point
    raise SearchExhausted(f"no coprime point with sup-norm <= {cap}")


def square_value_binary(form: BinaryForm, mod: Modulus, cap=None):
    """Smallest nonzero (x, y) whose value is a square mod q (prime by prime).

    Norm-shell enumeration with the canonical vec_key tie-break; the cap
    starts at 4 q^0.3 + 16 and doubles up to q^0.5 before giving up.
    """
    q = mod.q
    if cap is None:
        cap = 4.0 * q**0.3 + 16.0
    cap_max = max(float(q) ** 0.5, cap)
    cap_sq = int(cap * cap) + 1
    for s, v in iter_vectors_by_norm(2):
        while s > cap_sq:
            if cap >= cap_max:
                raise SearchExhausted(f"no square value below norm {cap_max}")
            cap = min(2 * cap, cap_max)
            cap_sq = int(cap * cap) + 1
        if is_square_mod(form.evaluate(v), mod):
            return v
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RestrictionChoice:
    """Six small positive integers giving a plane on which Q stays nonsingular."""

    vecs: tuple  # (a1, a2, a3, a4, a5, a6)
    form: BinaryForm  # R(u, v) = Q(a1 u + a2 v, a3 u + a4 v, a5 u + a6 v)
    delta4: int  # det4 of the restriction, coprime to q
    max_abs: int


def _restriction_form(form: TernaryForm, a) -> BinaryForm:
    col1 = (a[0], a[2], a[4])
    col2 = (a[1], a[3], a[5])
    return restrict(form, col1, col2)


def ternary_to_binary(form: TernaryForm, mod: Modulus) -> RestrictionChoice:
    """Restrict a nonsingular ternary form to a plane keeping det coprime to q."""

    def delta4(a):
        return _restriction_form(form, a).det4()

    a = coprime_point_search(delta4, 6, mod)
    r = _restriction_form(form, a)
    return RestrictionChoice(vecs=a, form=r, delta4=r.det4(), max_abs=max(a))


@dataclass(frozen=True)
class SquareValueWitness:
    x: tuple  # 3-vector with form(x) ≡ t^2 (mod q)
    t: int
    choice: RestrictionChoice
    uv: tuple


def square_value_ternary(form: TernaryForm, mod: Modulus) -> SquareValueWitness:
    """Small x != 0 with form(x) ≡ t^2 (mod q), via a plane restriction.

    ||x|| <= sqrt(6) * max_abs * ||(u, v)|| always holds for the
    reconstruction (checked exactly as an invariant).
    """
    choice = ternary_to_binary(form, mod)
    u, v = square_value_binary(choice.form, mod)
    a1, a2, a3, a4, a5, a6 = choice.vecs
    x = (a1 * u + a2 * v, a3 * u + a4 * v, a5 * u + a6 * v)
    t = sqrt_mod_squarefree(form.evaluate(x), mod)
    if t is None:
        raise CertificateMismatch("restriction produced a non-square value")
    assert x != (0, 0, 0)
    assert norm_sq(x) <= 6 * choice.max_abs**2 * (u * u + v * v)
    return SquareValueWitness(x=x, t=t, choice=choice, uv=(u, v))


def linear_split(r_form: BinaryForm, primes) -> tuple:
    """Linear form (l1, l2) mod prod(primes) with l1 u + l2 v dividing R there.

    Per prime: if R vanishes identically the constraint is trivial ((0, 0));
    if the leading coefficient vanishes, v | R and we take (0, 1); otherwise
    R = A (u - z1 v)(u - z2 v) with z_i the mod-p roots, and the smaller root
    is chosen.  Requires disc(R) to be a square mod every prime, which the
    solver certificate guarantees; violations raise CertificateMismatch.
    """
    pairs1, pairs2 = [], []
    for p in primes:
        a, b, c = r_form.a % p, r_form.b % p, r_form.c % p
        if a == 0 and b == 0 and c == 0:
            l1, l2 = 0, 0
        elif a == 0:
            l1, l2 = 0, 1
        else:
            s = sqrt_mod_prime(r_form.disc() % p, p)
            if s is None:
                raise CertificateMismatch(f"disc(R) is a non-residue mod {p}")
            i2a = inv_mod(2 * a, p)
            z1 = (-b + s) * i2a % p
            z2 = (-b - s) * i2a % p
            z = min(z1, z2)
            l1, l2 = 1, (-z) % p
        pairs1.append((l1, p))
        pairs2.append((l2, p))
    return crt_combine(pairs1), crt_combine(pairs2)


@dataclass(frozen=True)
class SolveTrace:
    """Full audit record of one solve; every field is exact."""

    q: int
    form: TernaryForm
    witness: tuple  # a, the square-value witness for the negated adjugate
    t: int
    content: int  # gcd of witness coordinates
    primitive: tuple  # witness // content
    q0: int
    q1: int
    x1: tuple
    x2: tuple
    plane_form: BinaryForm  # restriction of form to the plane orthogonal to primitive
    linear: tuple  # (l1, l2) mod q1
    uv: tuple
    solution: tuple

    def solution_norm_sq(self) -> int:
        return norm_sq(self.solution)

    def witness_norm_sq(self) -> int:
        return norm_sq(self.witness)

    def chain_ok(self) -> bool:
        """3 ||x||^4 <= 64 q^2 ||a||^2, i.e. ||x||^2 <= (8/sqrt 3) q ||a||, exactly."""
        nx = self.solution_norm_sq()
        return 3 * nx * nx <= 64 * self.q * self.q * self.witness_norm_sq()


_TRACE_FIELDS = (
    "q",
    "form",
    "witness",
    "t",
    "content",
    "primitive",
    "q0",
    "q1",
    "x1",
    "x2",
    "plane_form",
    "linear",
    "uv",
    "solution",
)


def trace_lines(trace: SolveTrace):
    """Line-oriented serialization, one field per line, fixed order."""
    out = []
    for name in _TRACE_FIELDS:
        val = getattr(trace, name)
        if isinstance(val, TernaryForm) or isinstance(val, BinaryForm):
            text = val.row()
        elif isinstance(val, tuple):
            text = " ".join(str(c) for c in val)
        else:
            text = str(val)
        out.append(f"{name}: {text}")
    return out


def parse_trace(lines) -> SolveTrace:
    vals = {}
    for line in lines:
        name, _, rest = line.partition(":")
        vals[name.strip()] = rest.strip()
    ints = lambda s: tuple(int(t) for t in s.split())
    return SolveTrace(
        q=int(vals["q"]),
        form=TernaryForm(*ints(vals["form"])),
        witness=ints(vals["witness"]),
        t=int(vals["t"]),
        content=int(vals["content"]),
        primitive=ints(vals["primitive"]),
        q0=int(vals["q0"]),
        q1=int(vals["q1"]),
        x1=ints(vals["x1"]),
        x2=ints(vals["x2"]),
        plane_form=BinaryForm(*ints(vals["plane_form"])),
        linear=ints(vals["linear"]),
        uv=ints(vals["uv"]),
        solution=ints(vals["solution"]),
    )


def _box_pair(l1: int, l2: int, q1: int, n1: int, n2: int):
    """Min-weight (u, v) with q1 | l1 u + l2 v inside the exact pigeonhole box.

    The box is |u| <= (q1 ||x2|| / ||x1||)^(1/2), |v| <= (q1 ||x1|| / ||x2||)^(1/2);
    both bounds are irrational, so membership is tested by the equivalent
    quartic comparisons u^4 n1 <= q1^2 n2 and v^4 n2 <= q1^2 n1.  The weight
    u^2 n1 + v^2 n2 is the squared triangle-inequality budget.
    """
    if q1 == 1:
        basis = congruence_basis2(0, 0, 1)
    else:
        basis = congruence_basis2(l1, l2, q1)
    cap = isqrt(4 * q1 * q1 * n1 * n2)  # floor(2 q1 sqrt(n1 n2)) >= weight of a box point
    q1sq = q1 * q1
    for _, v in weighted_short_vectors(basis, n1, n2, cap):
        u_, v_ = v
        if u_**4 * n1 <= q1sq * n2 and v_**4 * n2 <= q1sq * n1:
            return v
    raise AssertionError("pigeonhole guarantee violated (bug)")


def solve_from_witness(form: TernaryForm, mod: Modulus, witness, t: int) -> SolveTrace:
    """Pipeline tail: build a solution from a square-value witness for -Q^adj."""
    q = mod.q
    neg_adj = negate_mod(adjoint_mod(form, mod), mod)
    if neg_adj.evaluate(witness) % q != (t * t) % q:
        raise CertificateMismatch("witness does not certify -Q^adj(a) = t^2 mod q")
    alpha = content(witness)
    a0 = tuple(c // alpha for c in witness)
    q0 = gcd(q, alpha)
    q1 = q // q0
    q1_primes = tuple(p for p in mod.primes if q1 % p == 0)

    basis = orthogonal_basis(a0)
    x1, x2 = basis.b1, basis.b2
    r_form = restrict(form, x1, x2)
    if q1 > 1:
        linear = linear_split(r_form, q1_primes)
    else:
        linear = (0, 0)
    n1, n2 = norm_sq(x1), norm_sq(x2)
    uv = _box_pair(linear[0], linear[1], q1, n1, n2)
    x = scale(add(scale(x1, uv[0]), scale(x2, uv[1])), q0)

    trace = SolveTrace(
        q=q,
        form=form,
        witness=tuple(witness),
        t=t % q,
        content=alpha,
        primitive=a0,
        q0=q0,
        q1=q1,
        x1=x1,
        x2=x2,
        plane_form=r_form,
        linear=linear,
        uv=uv,
        solution=x,
    )
    _check_trace(trace, mod)
    return trace


def solve_ternary(form: TernaryForm, mod: Modulus) -> SolveTrace:
    """Small nonzero x with form(x) ≡ 0 (mod q), with a verified audit trace."""
    if not nonsingular_mod(form, mod):
        raise SingularForm(f"det shares a factor with {mod.q}")
    neg_adj = negate_mod(adjoint_mod(form, mod), mod)
    w = square_value_ternary(neg_adj, mod)
    return solve_from_witness(form, mod, w.x, w.t)


def _check_trace(trace: SolveTrace, mod: Modulus):
    """Exact invariant checks; raises TraceInvariantViolation on any breach."""
    q = trace.q
    x = trace.solution

    def need(cond, msg):
        if not cond:
            raise TraceInvariantViolation(msg)

    need(x != (0, 0, 0), "zero solution")
    need(trace.form.evaluate(x) % q == 0, "Q(x) != 0 mod q")
    need(trace.q0 * trace.q1 == q, "q0 q1 != q")
    a0 = trace.primitive
    need(content(a0) == 1, "primitive part not primitive")
    need(tuple(scale(a0, trace.content)) == trace.witness, "witness != content * primitive")
    need(dot(a0, trace.x1) == 0 and dot(a0, trace.x2) == 0, "plane not orthogonal")
    n1, n2 = norm_sq(trace.x1), norm_sq(trace.x2)
    na0 = norm_sq(a0)
    need(3 * n1 * n2 <= 4 * na0, "reduced plane basis too skew")
    u, v = trace.uv
    need((u, v) != (0, 0), "zero box pair")
    q1sq = trace.q1 * trace.q1
    need(u**4 * n1 <= q1sq * n2, "u outside the pigeonhole box")
    need(v**4 * n2 <= q1sq * n1, "v outside the pigeonhole box")
    if trace.q1 > 1:
        l1, l2 = trace.linear
        need((l1 * u + l2 * v) % trace.q1 == 0, "congruence violated")
    need(trace.plane_form.evaluate((u, v)) % trace.q1 == 0, "q1 does not divide R(u, v)")
    core = add(scale(trace.x1, u), scale(trace.x2, v))
    need(tuple(scale(core, trace.q0)) == x, "solution is not q0 (u x1 + v x2)")
    nc = norm_sq(core)
    need(nc * nc <= 16 * q1sq * n1 * n2, "triangle-inequality budget exceeded")
    need(trace.chain_ok(), "norm chain constant violated")


def verify_trace(trace: SolveTrace, mod: Modulus):
    """Replay every certificate in a parsed trace; raises on any breach.

    Covers the square-value witness, the plane construction, the box point,
    and the final norm chain, so a trace that passes is a proof the recorded
    solution is a valid small zero mod q.
    """
    if trace.q != mod.q:
        raise TraceInvariantViolation(f"trace modulus {trace.q} != {mod.q}")
    neg_adj = negate_mod(adjoint_mod(trace.form, mod), mod)
    if neg_adj.evaluate(trace.witness) % mod.q != trace.t * trace.t % mod.q:
        raise TraceInvariantViolation("witness certificate broken")
    restricted = restrict(trace.form, trace.x1, trace.x2)
    if restricted != trace.plane_form:
        raise TraceInvariantViolation("plane form does not match the basis")
    _check_trace(trace, mod)
