"""The inequality engine behind the exclusion cascade.

Writing k for the number of distinct prime factors of C_n = n * 2^n + 1,
two bounds collide once n is large:

    k > 1 + sqrt(n) / (9 * sqrt(ln n))      (size of the prime factors)
    k < 2.4 * ln n                          (premise from the prior estimate)

Their crossover, together with caps on Fermat-prime factors and on factors
whose shape multiplier m exceeds 1, drives n down in stages to the final
form n = 2^alpha * 3^beta with n < 200,000 and k <= 15.  All logarithms are
natural; comparisons that land near a boundary are re-evaluated with
50-digit Decimal arithmetic, and everything that can be compared in exact
integers is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from . import arith

# Distinct-prime-factor lower bound for any Lehmer number (Cohen & Hagis).
LEHMER_MIN_OMEGA = 14

# Largest gamma with 2^(2^gamma) + 1 known prime.
KNOWN_FERMAT_GAMMA_CAP = 4

# Rounded constants the cascade must stay under, step by step.
STATED_CROSSOVER = 1_400_000
STATED_N_AT_K17 = 260_000
STATED_N_AT_K15 = 200_000
STATED_LOG3_AT_CROSSOVER = 12.9
STATED_LOG3_AT_260K = 11.4
STATED_LOG5_AT_260K = 7.8
STATED_Q5_CAP = 9.8

_REL_TOL = 1e-9


def _ln_decimal(n: int, prec: int = 50) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return Decimal(n).ln()


def _n_exceeds_log_poly(n: int, num: int, den: int, power: int) -> bool:
    """Exact-minded test of n * den > num * (ln n)^power.

    Uses floats away from the boundary and 50-digit Decimals within a
    relative 1e-9 band of it, so the cascade cannot flip on rounding noise.
    """
    lhs = n * den
    rhs = num * math.log(n) ** power
    if abs(lhs - rhs) > _REL_TOL * max(abs(lhs), abs(rhs), 1.0):
        return lhs > rhs
    with localcontext() as ctx:
        ctx.prec = 50
        return Decimal(lhs) > Decimal(num) * _ln_decimal(n) ** power


def _least_n_satisfying(predicate, lo: int, hi_start: int) -> int:
    """Least n >= lo with predicate(n) true, assuming predicate is monotone
    (false then true) on [lo, inf)."""
    hi = hi_start
    while not predicate(hi):
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def k_lower(n: int) -> float:
    """Lower bound 1 + sqrt(n) / (9 * sqrt(ln n)) on the distinct-prime
    count of a Lehmer C_n."""
    if n < 3:
        raise ValueError("k_lower requires n >= 3")
    return 1.0 + math.sqrt(n) / (9.0 * math.sqrt(math.log(n)))


def k_upper(n: int) -> float:
    """Upper bound 2.4 * ln n on the same count; the premise the
    refinement starts from."""
    if n < 3:
        raise ValueError("k_upper requires n >= 3")
    return 2.4 * math.log(n)


def k_crossover() -> int:
    """Least N from which sqrt(n)/(9*sqrt(ln n)) >= 2.4*ln n for all n >= N.

    Equivalent to 25*n > 11664*(ln n)^3, monotone for n > e^3; every
    surviving n lies strictly below the returned value.
    """
    predicate = lambda n: _n_exceeds_log_poly(n, 11664, 25, 3)
    return _least_n_satisfying(predicate, 32, 1 << 17)


def n_threshold(k_max: int) -> int:
    """Least N with k_lower(n) > k_max for every n >= N.

    sqrt(n/ln n) is strictly increasing for n >= 3, so bisection on
    n > 81*(k_max-1)^2 * ln n is sound.
    """
    if k_max < 2:
        raise ValueError("n_threshold requires k_max >= 2")
    coeff = 81 * (k_max - 1) ** 2
    predicate = lambda n: _n_exceeds_log_poly(n, coeff, 1, 1)
    return _least_n_satisfying(predicate, 3, 4096)


def _fermat_fits(gamma: int, n_bound: int) -> bool:
    """2^(2^gamma) <= n_bound * 2^n_bound + 1, compared without giant ints."""
    e = 1 << gamma
    if e <= n_bound:
        return True
    return e - n_bound <= 64 and (1 << (e - n_bound)) <= n_bound


def fermat_gamma_cap(n_bound: int) -> tuple[int, int]:
    """(size cap, effective cap) on gamma for Fermat-prime factors of C_n
    with n <= n_bound.

    The size cap is the largest gamma whose Fermat number fits below
    C_{n_bound}; the effective cap additionally respects that only
    gamma <= 4 are known to give primes.
    """
    if n_bound < 3:
        raise ValueError("fermat_gamma_cap requires n_bound >= 3")
    gamma = 0
    while _fermat_fits(gamma + 1, n_bound):
        gamma += 1
    return gamma, min(gamma, KNOWN_FERMAT_GAMMA_CAP)


def nonfermat_factor_cap(n_bound: int, min_m: int) -> int:
    """Cap on the number of distinct prime factors of C_n whose shape
    multiplier m exceeds 1, i.e. floor(log(n_bound) / log(min_m)).

    Those multipliers are distinct odd divisors >= min_m whose product is
    bounded by the odd part of n < n_bound.  The floor is certified by
    exact integer powers.
    """
    if n_bound < 2 or min_m < 3 or min_m % 2 == 0:
        raise ValueError("nonfermat_factor_cap requires n_bound >= 2 and odd min_m >= 3")
    f = int(math.log(n_bound) / math.log(min_m))
    while min_m ** (f + 1) <= n_bound:
        f += 1
    while f > 0 and min_m**f > n_bound:
        f -= 1
    return f


def q5_exclusion_cap(n_bound: int, q: int) -> float | None:
    """Cap 3 + ln(n_bound / q^3) / ln 3 on m > 1 factors when a prime
    q >= 5 divides n and the odd part of n is a cube or higher power.

    Returns None when q^3 > n_bound: no such n exists at all, so the case
    is vacuous rather than bounded.
    """
    if q < 5 or not arith.is_prime(q):
        raise ValueError("q5_exclusion_cap requires a prime q >= 5")
    if q**3 > n_bound:
        return None
    return 3.0 + math.log(n_bound / q**3) / math.log(3)


def check_two_thirds(n: int) -> bool:
    """Exact check of n * 2^n / ((n * 2^n)^(1/3) + 1) > 2^(2n/3).

    Cubing both sides reduces it to D > E * (f^2 + f) with f the real cube
    root of T = n * 2^n, D = T^3 - 2^(2n) * (T + 1) and E = 3 * 2^(2n);
    f^2 + f is then caged between integer bounds at ever finer binary
    scales until the comparison is decided, so the verdict never rests on
    floating point.
    """
    if n < 1:
        raise ValueError("check_two_thirds requires n >= 1")
    t = n << n
    d = t**3 - ((t + 1) << (2 * n))
    if d <= 0:
        return False
    e = 3 << (2 * n)
    s = 0
    while True:
        r, _ = arith.int_nth_root(t << (3 * s), 3)
        hi = (r + 1) ** 2 + ((r + 1) << s)
        lo = r * r + (r << s)
        lhs = d << (2 * s)
        if lhs > e * hi:
            return True
        if lhs <= e * lo:
            return False
        s += 8


@dataclass(frozen=True)
class BoundStep:
    """One stage of the cascade: the bounds in force after it ran.

    n_bound and k_bound are the computed values; the stated_* fields carry
    the rounded constants the computation must stay under.
    """

    label: str
    assumptions: tuple[str, ...]
    k_bound: int | None
    n_bound: int | None
    stated_n_bound: int | None
    anchor: str
    detail: str


@dataclass(frozen=True)
class FinalForm:
    form: str
    n_max: int
    n_max_computed: int
    k_max: int


@dataclass(frozen=True)
class BoundChain:
    steps: tuple[BoundStep, ...]
    final_form: FinalForm | None
    min_omega: int

    @property
    def complete(self) -> bool:
        return self.final_form is not None


def refine_chain(min_omega: int = LEHMER_MIN_OMEGA) -> BoundChain:
    """Run the whole cascade under the hypothesis that some C_n is a Lehmer
    number with at least min_omega distinct prime factors.

    A side case (3 does not divide n; a prime q >= 5 divides n) is refuted
    when its k bound drops below min_omega.  If a main-line k bound itself
    drops below min_omega the hypothesis space is already empty and the
    cascade stops without reaching the final form, since the remaining
    steps presume survivable k.
    """
    base = ("lehmer C_n", "n1 = rho^w, w >= 3")
    steps: list[BoundStep] = []

    crossover = k_crossover()
    n_stated = STATED_CROSSOVER
    n_computed = crossover
    steps.append(
        BoundStep(
            label="crossover of the k bounds",
            assumptions=base,
            k_bound=None,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="k-crossover",
            detail=(
                f"sqrt(n)/(9 sqrt(ln n)) >= 2.4 ln n from n = {crossover}; "
                f"surviving n < {crossover} (stated {n_stated})"
            ),
        )
    )

    size_cap, eff_cap = fermat_gamma_cap(n_stated)
    fermat_count = eff_cap + 1
    steps.append(
        BoundStep(
            label="Fermat-prime cap",
            assumptions=base,
            k_bound=None,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="fermat-cap",
            detail=(
                f"2^(2^gamma)+1 <= C_n forces gamma <= {size_cap}; known primes "
                f"force gamma <= {eff_cap}, so at most {fermat_count} Fermat-prime factors"
            ),
        )
    )

    cap3 = nonfermat_factor_cap(n_stated, 3)
    k_bound = fermat_count + cap3
    steps.append(
        BoundStep(
            label="factor count, m >= 3",
            assumptions=base,
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="count-m3",
            detail=(
                f"ln({n_stated})/ln 3 = {math.log(n_stated) / math.log(3):.4f} "
                f"(stated <= {STATED_LOG3_AT_CROSSOVER}) caps m>1 factors at {cap3}; "
                f"k <= {fermat_count}+{cap3} = {k_bound}"
            ),
        )
    )
    if k_bound < min_omega:
        return _halted_chain(steps, k_bound, min_omega)

    n_computed = n_threshold(k_bound)
    n_stated = STATED_N_AT_K17
    steps.append(
        BoundStep(
            label=f"n threshold at k <= {k_bound}",
            assumptions=base,
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="threshold-k17",
            detail=(
                f"sqrt(n)/(9 sqrt(ln n)) > {k_bound - 1} from n = {n_computed}; "
                f"surviving n < {n_computed} (stated {n_stated})"
            ),
        )
    )

    cap3 = nonfermat_factor_cap(n_stated, 3)
    k_bound = fermat_count + cap3
    steps.append(
        BoundStep(
            label="factor count refreshed",
            assumptions=base,
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="count-m3-refresh",
            detail=(
                f"ln({n_stated})/ln 3 = {math.log(n_stated) / math.log(3):.4f} "
                f"(stated <= {STATED_LOG3_AT_260K}) caps m>1 factors at {cap3}; "
                f"k <= {fermat_count}+{cap3} = {k_bound}"
            ),
        )
    )
    if k_bound < min_omega:
        return _halted_chain(steps, k_bound, min_omega)

    cap5 = nonfermat_factor_cap(n_stated, 5)
    branch_k = fermat_count + cap5
    contradiction = branch_k < min_omega
    steps.append(
        BoundStep(
            label="side case: 3 does not divide n",
            assumptions=base + ("3 does not divide n",),
            k_bound=branch_k,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="case-3-coprime",
            detail=(
                f"m odd, m | n1, 3 excluded, so m >= 5: ln({n_stated})/ln 5 = "
                f"{math.log(n_stated) / math.log(5):.4f} (stated < {STATED_LOG5_AT_260K}) "
                f"caps m>1 factors at {cap5}; k <= {fermat_count}+{cap5} = {branch_k}"
                + (
                    f" < {min_omega}: contradiction, hence 3 | n"
                    if contradiction
                    else f" >= {min_omega}: no contradiction"
                )
            ),
        )
    )
    if not contradiction:
        return BoundChain(tuple(steps), None, min_omega)

    fermat_count -= 1  # 3 | n makes C_n = 1 mod 3, dropping the Fermat prime 3
    k_bound = fermat_count + cap3
    steps.append(
        BoundStep(
            label="3 divides n",
            assumptions=base + ("3 | n",),
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="three-divides",
            detail=(
                f"3 | n gives C_n = 1 mod 3, so the Fermat prime 3 is excluded: "
                f"k <= {fermat_count}+{cap3} = {k_bound}"
            ),
        )
    )
    if k_bound < min_omega:
        return _halted_chain(steps, k_bound, min_omega)

    n_computed = n_threshold(k_bound)
    n_stated = STATED_N_AT_K15
    steps.append(
        BoundStep(
            label=f"n threshold at k <= {k_bound}",
            assumptions=base + ("3 | n",),
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="threshold-k15",
            detail=(
                f"sqrt(n)/(9 sqrt(ln n)) > {k_bound - 1} from n = {n_computed}; "
                f"surviving n < {n_computed} (stated {n_stated})"
            ),
        )
    )

    q5_cap = q5_exclusion_cap(n_stated, 5)
    assert q5_cap is not None
    branch_k = int(q5_cap) + (fermat_count)
    q5_contradiction = branch_k < min_omega
    steps.append(
        BoundStep(
            label="side case: some prime q >= 5 divides n",
            assumptions=base + ("3 | n", "q >= 5 divides n"),
            k_bound=branch_k,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="case-q5",
            detail=(
                f"q^3 | n1 then caps m>1 factors at 3 + ln({n_stated}/125)/ln 3 = "
                f"{q5_cap:.4f} (stated < {STATED_Q5_CAP}); worst case q = 5, larger q "
                f"only shrink it, and q >= 59 has q^3 > {n_stated}; "
                f"k <= {int(q5_cap)}+{fermat_count} = {branch_k}"
                + (
                    f" < {min_omega}: contradiction, hence no q >= 5 divides n"
                    if q5_contradiction
                    else f" >= {min_omega}: no contradiction"
                )
            ),
        )
    )
    if not q5_contradiction:
        return BoundChain(tuple(steps), None, min_omega)

    final = FinalForm(
        form="2^a*3^b",
        n_max=n_stated,
        n_max_computed=n_computed,
        k_max=k_bound,
    )
    steps.append(
        BoundStep(
            label="final form",
            assumptions=base + ("3 | n",),
            k_bound=k_bound,
            n_bound=n_computed,
            stated_n_bound=n_stated,
            anchor="final-form",
            detail=(
                f"n = 2^a*3^b, n < {n_stated} (computed {n_computed}), k <= {k_bound}"
            ),
        )
    )
    return BoundChain(tuple(steps), final, min_omega)


def _halted_chain(steps: list[BoundStep], k_bound: int, min_omega: int) -> BoundChain:
    steps.append(
        BoundStep(
            label="cascade halted",
            assumptions=steps[-1].assumptions,
            k_bound=k_bound,
            n_bound=steps[-1].n_bound,
            stated_n_bound=steps[-1].stated_n_bound,
            anchor="halt",
            detail=(
                f"main-line bound k <= {k_bound} is already below the distinct-prime "
                f"threshold {min_omega}; no hypothetical survives, the staged case "
                "analysis stops before the final form"
            ),
        )
    )
    return BoundChain(tuple(steps), None, min_omega)
