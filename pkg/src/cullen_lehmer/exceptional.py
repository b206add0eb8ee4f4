"""The exceptional-prime analysis for C_n = n * 2^n + 1.

A prime factor p of C_n escapes the generic size bound only when the odd
part of n is a perfect odd power, n1 = rho^w with w >= 3 odd dividing
n + alpha, and then p = rho * 2^((n+alpha)/w) + 1 = (n * 2^n)^(1/w) + 1.
This module enumerates those candidates, checks the linear relation that
characterizes the configuration, certifies compositeness of all but the
largest-w candidate via the X^u + 1 cofactor split, and scans ranges of n
for uniqueness violations (two prime candidates for one n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool

from . import arith, structure
from .structure import CullenInstance, PrimeShape


@dataclass(frozen=True)
class ExceptionalCandidate:
    """One admissible (w, rho) pair and the value p it produces.

    Invariants: rho**w == n1, w | (n + alpha), (p - 1)**w == n * 2^n.
    bound_ok records p <= (n * 2^n)^(1/3) + 1.
    """

    w: int
    rho: int
    exponent: int
    p: int
    is_prime: bool
    bound_ok: bool


@dataclass(frozen=True)
class CompositenessCertificate:
    """Witness that candidate p = Y^lam + 1 is divisible by Y + 1."""

    w: int
    p: int
    lam: int
    divisor: int
    cofactor: int


def exceptional_relation(
    inst: CullenInstance, shape: PrimeShape, rho: int, u: int, w: int
) -> bool:
    """The relation (2^alpha * rho^w + alpha) * u == w * a tying a prime's
    shape exponent to the decomposition of n in the exceptional configuration.

    Preconditions (violations raise with a named reason): shape.m == rho**u,
    n1 == rho**w, and u <= w.  The shape may be hypothetical (non-prime p);
    only the arithmetic identity is evaluated.
    """
    if rho < 3 or rho % 2 == 0:
        raise ValueError("rho must be odd and >= 3")
    if shape.m != rho**u:
        raise ValueError("shape multiplier is not rho**u")
    if inst.n1 != rho**w:
        raise ValueError("odd part of n is not rho**w")
    if u > w:
        raise ValueError("u exceeds w")
    return (2**inst.alpha * rho**w + inst.alpha) * u == w * shape.a


def exceptional_candidates(inst: CullenInstance) -> list[ExceptionalCandidate]:
    """All exceptional-prime candidates for this n, ascending in w.

    Empty when n1 == 1 (the all-Fermat-prime branch) and when no odd
    w >= 3 divides both the signature exponent of n1 and n + alpha.
    """
    if inst.n1 == 1:
        return []
    sig = inst.n1_signature
    assert sig is not None
    total = inst.n + inst.alpha
    cube_root = None
    out = []
    for w in range(3, sig.exponent + 1, 2):
        if sig.exponent % w or total % w:
            continue
        if cube_root is None:
            cube_root = arith.int_nth_root(inst.n << inst.n, 3)[0]
        rho = sig.base ** (sig.exponent // w)
        exponent = total // w
        p = rho * (1 << exponent) + 1
        out.append(
            ExceptionalCandidate(
                w=w,
                rho=rho,
                exponent=exponent,
                p=p,
                is_prime=arith.is_prime(p),
                bound_ok=p <= cube_root + 1,
            )
        )
    return out


def exceptional_bound_ok(cand: ExceptionalCandidate, inst: CullenInstance) -> bool:
    """p <= (n * 2^n)^(1/3) + 1, compared in exact integers."""
    root, _ = arith.int_nth_root(inst.n << inst.n, 3)
    return cand.p <= root + 1


def odd_power_cofactor(x: int, u: int) -> tuple[int, int]:
    """Split x^u + 1 as (x + 1) * cofactor for odd u >= 3; both parts > 1.

    This is what makes any candidate with a spare odd exponent composite.
    """
    if u < 3 or u % 2 == 0:
        raise ValueError("odd_power_cofactor requires odd u >= 3")
    if x < 2:
        raise ValueError("odd_power_cofactor requires x >= 2")
    total = x**u + 1
    divisor = x + 1
    return divisor, total // divisor


def certify_smaller_composite(
    inst: CullenInstance, cands: list[ExceptionalCandidate]
) -> list[CompositenessCertificate]:
    """For n with several candidates, certify every non-maximal-w candidate
    composite by exhibiting the Y + 1 divisor of p = Y^lam + 1.

    lam = lcm(w, w_max) / w is odd and > 1 whenever w < w_max, so the split
    is always available; the certificate is verified before being returned.
    """
    if len(cands) < 2:
        raise ValueError("certification needs at least two candidates")
    sig = inst.n1_signature
    assert sig is not None
    total = inst.n + inst.alpha
    w_max = max(c.w for c in cands)
    certs = []
    for cand in cands:
        if cand.w == w_max:
            continue
        joint = math.lcm(cand.w, w_max)
        lam = joint // cand.w
        y = sig.base ** (sig.exponent // joint) * (1 << (total // joint))
        divisor, cofactor = odd_power_cofactor(y, lam)
        if lam % 2 == 0 or lam <= 1:
            raise RuntimeError(f"n={inst.n}: lambda={lam} is not odd > 1")
        if divisor * cofactor != cand.p or not 1 < divisor < cand.p:
            raise RuntimeError(f"n={inst.n}: cofactor split failed for w={cand.w}")
        certs.append(CompositenessCertificate(cand.w, cand.p, lam, divisor, cofactor))
    return certs


def scan_exceptional(
    n_lo: int, n_hi: int
) -> list[tuple[CullenInstance, list[ExceptionalCandidate]]]:
    """(instance, candidates) for every n in [n_lo, n_hi] with candidates."""
    out = []
    for n in range(n_lo, n_hi + 1):
        inst = structure.decompose(n)
        cands = exceptional_candidates(inst)
        if cands:
            out.append((inst, cands))
    return out


def _scan_chunk(args: tuple[int, int]) -> list[int]:
    lo, hi = args
    violations = []
    for inst, cands in scan_exceptional(lo, hi):
        if len(cands) >= 2:
            # cross-check: all but the largest-w candidate must certify composite
            certify_smaller_composite(inst, cands)
        if sum(c.is_prime for c in cands) >= 2:
            violations.append(inst.n)
    return violations


def uniqueness_scan(n_max: int, workers: int = 1) -> list[int]:
    """All n in [3, n_max] carrying two or more prime exceptional candidates.

    The underlying uniqueness theorem predicts an empty list; whatever is
    found is returned.  Multi-candidate n additionally get their smaller-w
    candidates certified composite as an internal consistency check.
    """
    if n_max < 3:
        raise ValueError("uniqueness_scan requires n_max >= 3")
    if workers <= 1:
        return _scan_chunk((3, n_max))
    step = max(1, (n_max - 2) // (workers * 8))
    chunks = [(lo, min(lo + step - 1, n_max)) for lo in range(3, n_max + 1, step)]
    with Pool(workers) as pool:
        parts = pool.map(_scan_chunk, chunks)
    return sorted(n for part in parts for n in part)
