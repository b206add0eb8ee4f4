"""Arbitrary-precision integer primitives shared by every other module:
2-adic valuations, integer roots, perfect-power detection, primality,
modular Cullen residues, and Brent-cycle factoring.

All functions are pure; nothing here holds mutable state, so everything is
safe to call from any number of worker processes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_MR_ROUNDS = 64
DEFAULT_RHO_BUDGET = 10**6

# Below this limit the first thirteen prime bases give a deterministic
# Miller-Rabin answer (Sorenson & Webster); it comfortably covers 2**64.
_DET_MR_LIMIT = 3_317_044_064_679_887_385_961_981
_DET_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit, ascending."""
    if limit < 2:
        return ()
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            start = p * p
            sieve[start : limit + 1 : p] = b"\x00" * ((limit - start) // p + 1)
    return tuple(i for i, v in enumerate(sieve) if v)


_SMALL_PRIMES = primes_up_to(1000)


def v2(x: int) -> int:
    """Largest e with 2^e dividing x (x >= 1)."""
    if x < 1:
        raise ValueError("v2 requires x >= 1")
    return (x & -x).bit_length() - 1


def odd_part(x: int) -> int:
    """x with every factor of 2 removed."""
    if x < 1:
        raise ValueError("odd_part requires x >= 1")
    return x >> v2(x)


def int_nth_root(x: int, w: int) -> tuple[int, bool]:
    """(floor(x^(1/w)), exact?) for x >= 1, w >= 2.

    Exact integer arithmetic throughout; the float fast path is corrected
    so boundary cases cannot leak through.
    """
    if x < 1:
        raise ValueError("int_nth_root requires x >= 1")
    if w < 2:
        raise ValueError("int_nth_root requires w >= 2")
    if x == 1:
        return 1, True
    if w >= x.bit_length():
        # 2^w > x, so the root can only be 1
        return 1, False
    if x < (1 << 53):
        r = int(round(x ** (1.0 / w)))
        r = max(r, 1)
    else:
        # Newton iteration from an over-estimate; converges to the floor
        r = 1 << -(-x.bit_length() // w)
        while True:
            t = ((w - 1) * r + x // r ** (w - 1)) // w
            if t >= r:
                break
            r = t
    while r**w > x:
        r -= 1
    while (r + 1) ** w <= x:
        r += 1
    return r, r**w == x


@dataclass(frozen=True)
class PowerSignature:
    """Maximal representation x = base**exponent with base not a power itself."""

    base: int
    exponent: int


def power_signature(x: int) -> PowerSignature:
    """Canonical perfect-power form of x >= 2; exponent 1 iff x is not a power.

    Tries exponents from the largest possible downward, so the first exact
    root gives the maximal exponent and the base cannot itself be a power.
    """
    if x < 2:
        raise ValueError("power_signature requires x >= 2")
    for w in range(x.bit_length() - 1, 1, -1):
        root, exact = int_nth_root(x, w)
        if exact:
            return PowerSignature(root, w)
    return PowerSignature(x, 1)


def _mr_witness(x: int, a: int, d: int, s: int) -> bool:
    """True if base a says 'probably prime' for x - 1 = d * 2^s."""
    a %= x
    if a == 0:
        return True
    t = pow(a, d, x)
    if t == 1 or t == x - 1:
        return True
    for _ in range(s - 1):
        t = t * t % x
        if t == x - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
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


def _strong_lucas(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters."""
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0:
            return n == abs(D)
        D = -(D + 2) if D > 0 else -(D - 2)
    Q = (1 - D) // 4
    d = n + 1
    s = v2(d)
    d >>= s
    inv2 = (n + 1) // 2
    U, V, Qk = 1, 1, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (U + V) * inv2 % n, (D * U + V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_prime(x: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Primality test: exact below 2^64, probabilistic above.

    Above the deterministic range the answer comes from `rounds`
    Miller-Rabin rounds (bases drawn reproducibly from x) plus a strong
    Lucas test; see prime_certainty for the proven/probable label.
    """
    if x < 2:
        return False
    for p in _SMALL_PRIMES:
        if x == p:
            return True
        if x % p == 0:
            return False
    if x < 1_002_001:
        # trial division by primes < 1001 is complete here
        return True
    d = x - 1
    s = v2(d)
    d >>= s
    if x < _DET_MR_LIMIT:
        return all(_mr_witness(x, a, d, s) for a in _DET_MR_BASES)
    rng = random.Random(f"mr:{x}")
    for _ in range(rounds):
        a = rng.randrange(2, x - 1)
        if not _mr_witness(x, a, d, s):
            return False
    return _strong_lucas(x)


def prime_certainty(x: int) -> str:
    """'proven' when the is_prime answer is deterministic, else 'probable'."""
    return "proven" if x < _DET_MR_LIMIT else "probable"


def cullen_mod(n: int, q: int) -> int:
    """(n * 2^n + 1) mod q without materializing the Cullen number."""
    if n < 1:
        raise ValueError("cullen_mod requires n >= 1")
    if q < 2:
        raise ValueError("cullen_mod requires q >= 2")
    return (n % q * pow(2, n, q) + 1) % q


def _brent_rho(x: int, budget: int) -> tuple[int | None, int]:
    """Brent-cycle factor attempt; returns (factor or None, iterations used).

    Starting points and polynomial offsets are drawn from an RNG seeded by
    x itself, so repeated runs walk the identical sequence.
    """
    if x % 2 == 0:
        return (2 if x > 2 else None), 0
    rng = random.Random(f"rho:{x}")
    used = 0
    while used < budget:
        y = rng.randrange(1, x)
        c = rng.randrange(1, x)
        m = 128
        g = r = q = 1
        xs = ys = y
        while g == 1 and used < budget:
            xs = y
            advance = min(r, budget - used)
            for _ in range(advance):
                y = (y * y + c) % x
            used += advance
            if advance < r:
                break
            k = 0
            while k < r and g == 1 and used < budget:
                ys = y
                steps = min(m, r - k, budget - used)
                for _ in range(steps):
                    y = (y * y + c) % x
                    q = q * abs(xs - y) % x
                used += steps
                g = math.gcd(q, x)
                k += steps
            r *= 2
        if g == x:
            # batched gcd overshot; replay one step at a time
            g = 1
            while g == 1 and used < budget:
                ys = (ys * ys + c) % x
                used += 1
                g = math.gcd(abs(xs - ys), x)
        if 1 < g < x:
            return g, used
    return None, used


def pollard_rho(x: int, budget: int = DEFAULT_RHO_BUDGET) -> int | None:
    """A nontrivial factor of composite x, or None once the budget is spent.

    Callers are expected to have ruled x prime out already; a prime input
    simply exhausts the budget.
    """
    if x < 4:
        return None
    factor, _ = _brent_rho(x, budget)
    return factor


@dataclass(frozen=True)
class FactorResult:
    """Outcome of a budgeted factorization.

    factors maps prime -> exponent (primality per is_prime, so 'probable'
    above the deterministic range); cofactor is 1 exactly when the
    factorization is complete, otherwise the unfactored composite part.
    """

    factors: dict[int, int]
    cofactor: int
    rho_used: int

    @property
    def complete(self) -> bool:
        return self.cofactor == 1


def bounded_factor(
    x: int,
    trial_primes: tuple[int, ...] = (),
    rho_budget: int = DEFAULT_RHO_BUDGET,
    mr_rounds: int = DEFAULT_MR_ROUNDS,
) -> FactorResult:
    """Factor x by trial division then Brent rho, within an iteration budget."""
    if x < 1:
        raise ValueError("bounded_factor requires x >= 1")
    factors: dict[int, int] = {}
    for p in trial_primes:
        while x % p == 0:
            factors[p] = factors.get(p, 0) + 1
            x //= p
        if x == 1:
            break
    rho_used = 0
    leftovers = 1
    stack = [x] if x > 1 else []
    while stack:
        t = stack.pop()
        if t == 1:
            continue
        if is_prime(t, mr_rounds):
            factors[t] = factors.get(t, 0) + 1
            continue
        remaining = rho_budget - rho_used
        if remaining <= 0:
            leftovers *= t
            continue
        f, used = _brent_rho(t, remaining)
        rho_used += used
        if f is None:
            leftovers *= t
        else:
            stack.append(f)
            stack.append(t // f)
    return FactorResult(factors, leftovers, rho_used)
