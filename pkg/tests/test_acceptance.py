"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines and the
measured runtimes next to their budgets.
"""

import math
import random
import time

import sympy

from cullen_lehmer import arith, bounds, exceptional, screen, structure


def _verdict(tag: str, ok: bool, detail: str) -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    assert ok, f"{tag}: {detail}"


def test_criterion_1_bound_chain_reproduction(capsys):
    from cullen_lehmer import cli

    t0 = time.perf_counter()
    exit_code = cli.main(["bounds"])
    cmd_out = capsys.readouterr().out
    chain = bounds.refine_chain()
    crossover = bounds.k_crossover()
    t17 = bounds.n_threshold(17)
    t15 = bounds.n_threshold(15)
    caps = (
        bounds.nonfermat_factor_cap(1_400_000, 3),
        bounds.nonfermat_factor_cap(260_000, 3),
        bounds.nonfermat_factor_cap(260_000, 5),
    )
    size_cap, _ = bounds.fermat_gamma_cap(1_400_000)
    q5 = bounds.q5_exclusion_cap(200_000, 5)
    elapsed = time.perf_counter() - t0

    ok = (
        exit_code == 0
        and "n = 2^α·3^β, n < 200,000, k ≤ 15" in cmd_out
        and crossover <= 1_400_000
        and t17 <= 260_000
        and t15 <= 200_000
        and caps == (12, 11, 7)
        and size_cap == 20
        and q5 is not None
        and q5 < 9.8
        and chain.complete
        and chain.final_form.form == "2^a*3^b"
        and chain.final_form.n_max == 200_000
        and chain.final_form.k_max == 15
        and elapsed < 1.0
    )
    _verdict(
        "criterion 1 (bound-chain reproduction)",
        ok,
        f"cmd_bounds exit={exit_code}, crossover={crossover}<=1.4e6, n(17)={t17}<=260000, "
        f"n(15)={t15}<=200000, caps={caps}, fermat size cap={size_cap}, q5={q5:.4f}<9.8, "
        f"final={chain.final_form}, {elapsed:.3f}s < 1s",
    )


def test_criterion_2_uniqueness_property():
    t0 = time.perf_counter()
    violations = exceptional.uniqueness_scan(10_000)
    rows = exceptional.scan_exceptional(3, 10_000)
    for inst, cands in rows:
        for c in cands:
            assert (c.p - 1) ** c.w == inst.n << inst.n
    multi = [(inst, cands) for inst, cands in rows if len(cands) >= 2]
    certified = 0
    for inst, cands in multi:
        certs = exceptional.certify_smaller_composite(inst, cands)
        assert len(certs) == len(cands) - 1
        certified += len(certs)
    # the scan range holds no multi-candidate n (the smallest is 19683), so
    # exercise the certification clause on that value as well
    inst = structure.decompose(19683)
    cands = exceptional.exceptional_candidates(inst)
    certs = exceptional.certify_smaller_composite(inst, cands)
    cert_ok = len(certs) == 1 and certs[0].p % certs[0].divisor == 0
    elapsed = time.perf_counter() - t0

    ok = violations == [] and cert_ok and elapsed < 300
    _verdict(
        "criterion 2 (uniqueness scan to 10^4)",
        ok,
        f"violations={violations}, multi-candidate n in range={[i.n for i, _ in multi]}, "
        f"in-range certificates={certified}, 19683 certified={cert_ok}, "
        f"{elapsed:.1f}s < 300s",
    )


def test_criterion_3_two_thirds_inequality():
    t0 = time.perf_counter()
    failures = [n for n in range(3, 10_001) if not bounds.check_two_thirds(n)]
    elapsed = time.perf_counter() - t0
    ok = failures == [] and elapsed < 60
    _verdict(
        "criterion 3 (two-thirds inequality, exact integers)",
        ok,
        f"n=3..10000 all hold={not failures} (failures={failures[:5]}), {elapsed:.1f}s < 60s",
    )


def _oracle_verdict(n: int, trial_limit: int, search: screen.Verdict):
    """Independent route: materialize C_n, factor by direct division against
    sympy's sieve, apply the necessary conditions straight from definitions.

    Returns (status, witness); ORACLE_STUCK means the remainder resisted the
    oracle's own factoring effort, which is only attempted where the search
    claims a complete factorization exists.
    """
    cn = n * 2**n + 1
    if sympy.isprime(cn):
        return "PRIME_CN", None
    found = []
    for q in sympy.sieve.primerange(2, trial_limit + 1):
        if cn % q == 0:
            e = 1
            while cn % q ** (e + 1) == 0:
                e += 1
            found.append((q, e))
    for q, e in found:
        if (cn - 1) % (q - 1) != 0:
            return "REFUTED_SHAPE", q
        if e >= 2:
            return "REFUTED_SQUARE", q
    rest = cn
    for q, e in found:
        rest //= q**e
    omega = len(found)
    if rest > 1:
        if sympy.isprime(rest):
            omega += 1
        elif search.status == "REFUTED_OMEGA":
            extra = sympy.factorint(rest)
            assert all(sympy.isprime(p) for p in extra)
            assert math.prod(p**e for p, e in extra.items()) == rest
            omega += len(extra)
        else:
            return "ORACLE_STUCK", None
    return ("REFUTED_OMEGA" if omega < bounds.LEHMER_MIN_OMEGA else "UNDECIDED"), None


def test_criterion_4_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches = []
    jointly_undecided = []
    for n in range(1, 301):
        v = screen.witness_search(n)
        status, witness = _oracle_verdict(n, v.trial_limit_used, v)
        if v.status == "UNDECIDED":
            # agreement here means the oracle finds no refutation in scope
            # either: its trial range is clean and the remainder is composite
            if status == "ORACLE_STUCK":
                jointly_undecided.append(n)
            else:
                mismatches.append((n, v.status, status))
        elif (v.status, v.witness) != (status, witness):
            mismatches.append((n, (v.status, v.witness), (status, witness)))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 120
    _verdict(
        "criterion 4 (oracle equivalence, n <= 300)",
        ok,
        f"mismatches={mismatches[:5]}, jointly undecided on {len(jointly_undecided)} n "
        f"(both routes out of factoring budget: {jointly_undecided}), {elapsed:.1f}s < 120s",
    )


def test_criterion_5_desk_scale_finishing_run():
    t0 = time.perf_counter()
    values = screen.enumerate_2a3b(3000)
    report = screen.screen_set(values, screen.ScreenConfig(), workers=2)
    elapsed = time.perf_counter() - t0
    allowed = screen.STATUSES
    stray = [v.n for v in report.verdicts if v.status not in allowed]
    ok = not stray and len(report.verdicts) == len(values)
    _verdict(
        "criterion 5 (desk-scale screen of 2^a*3^b <= 3000)",
        ok,
        f"{len(values)} values, counts={report.counts}, "
        f"UNDECIDED count={len(report.undecided)} at n={report.undecided}, "
        f"stray statuses={stray}, {elapsed:.0f}s "
        f"(full n < 200,000 run stays an optional long job, see README)",
    )


def test_criterion_6_arithmetic_invariants():
    t0 = time.perf_counter()

    rng = random.Random(99)
    for _ in range(10_000):
        x = rng.randrange(1, 10**18)
        assert arith.odd_part(x) << arith.v2(x) == x

    for x in range(2, 1_000_001):
        sig = arith.power_signature(x)
        assert sig.base**sig.exponent == x
        if sig.exponent > 1:
            assert arith.power_signature(sig.base).exponent == 1

    primes_10k = tuple(sympy.sieve.primerange(2, 10_001))
    for n in range(1, 2001):
        cn = structure.cullen_value(n)
        for q in primes_10k:
            assert arith.cullen_mod(n, q) == cn % q
        for _ in range(1000):
            q = rng.randrange(2, 10**6)
            assert arith.cullen_mod(n, q) == cn % q

    sieve = bytearray(b"\x01") * 1_000_001
    sieve[0:2] = b"\x00\x00"
    for p in range(2, 1001):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    for x in range(1_000_001):
        assert arith.is_prime(x) == bool(sieve[x]), x

    for _ in range(200):
        x = rng.randrange(4, 10**10)
        if arith.is_prime(x):
            continue
        f = arith.pollard_rho(x)
        assert f is not None and 1 < f < x and x % f == 0

    odd_primes = [p for p in primes_10k if p > 2]
    for p in odd_primes:
        s = structure.prime_shape(p)
        assert s.m * 2**s.a + 1 == p
    for n in range(1, 501):
        inst = structure.decompose(n)
        target = n * 2**n
        for p in odd_primes:
            s = structure.prime_shape(p)
            assert structure.shape_divides(s, inst) == (target % (p - 1) == 0)

    for n in range(3, 100_001, 3):
        assert arith.cullen_mod(n, 3) == 1

    elapsed = time.perf_counter() - t0
    ok = elapsed < 120
    _verdict(
        "criterion 6 (arith/structure invariant suites)",
        ok,
        f"odd-part/signature/residue/primality/shape/Fermat-residue invariants all hold, "
        f"{elapsed:.1f}s < 120s",
    )
