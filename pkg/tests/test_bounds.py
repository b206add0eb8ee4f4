import math

import mpmath
import pytest

from cullen_lehmer import bounds


def test_k_lower_values():
    assert bounds.k_lower(1_400_000) == pytest.approx(35.947, abs=0.01)
    assert bounds.k_lower(260_000) == pytest.approx(17.045, abs=0.01)
    assert bounds.k_lower(3) == pytest.approx(1 + math.sqrt(3) / (9 * math.sqrt(math.log(3))))
    with pytest.raises(ValueError):
        bounds.k_lower(2)


def test_k_upper_values():
    assert bounds.k_upper(1_400_000) == pytest.approx(2.4 * math.log(1_400_000))
    assert bounds.k_upper(1_400_000) == pytest.approx(33.965, abs=0.01)
    assert bounds.k_upper(260_000) == pytest.approx(29.92, abs=0.01)
    with pytest.raises(ValueError):
        bounds.k_upper(2)


def test_crossover_below_stated():
    n0 = bounds.k_crossover()
    assert n0 <= 1_400_000
    f = lambda n: math.sqrt(n) / (9 * math.sqrt(math.log(n)))
    assert f(n0) >= 2.4 * math.log(n0)
    assert f(n0 - 1) < 2.4 * math.log(n0 - 1)


def test_n_threshold_bisection_consistency():
    for k in range(3, 41):
        t = bounds.n_threshold(k)
        assert bounds.k_lower(t) > k
        assert bounds.k_lower(t - 1) <= k


def test_n_thresholds_below_stated():
    assert bounds.n_threshold(17) <= 260_000
    assert bounds.n_threshold(15) <= 200_000
    with pytest.raises(ValueError):
        bounds.n_threshold(1)


def test_sqrt_n_over_ln_monotone_grid():
    f = lambda n: math.sqrt(n / math.log(n))
    prev = f(3)
    for n in range(4, 200_000, 97):
        cur = f(n)
        assert cur > prev
        prev = cur


@pytest.mark.parametrize(
    "n_bound,size_cap,eff_cap",
    [(1_400_000, 20, 4), (260_000, 17, 4), (15, 4, 4), (1_000_000_000, 29, 4)],
)
def test_fermat_gamma_cap(n_bound, size_cap, eff_cap):
    assert bounds.fermat_gamma_cap(n_bound) == (size_cap, eff_cap)


def test_fermat_gamma_cap_matches_bigint_oracle():
    for n_bound in (3, 15, 100, 5000, 20000):
        cn = n_bound * 2**n_bound + 1
        expected = 0
        while 2 ** (2 ** (expected + 1)) <= cn:
            expected += 1
        assert bounds.fermat_gamma_cap(n_bound)[0] == expected


@pytest.mark.parametrize(
    "n_bound,min_m,expected",
    [(1_400_000, 3, 12), (260_000, 5, 7), (260_000, 3, 11), (200_000, 3, 11)],
)
def test_nonfermat_factor_cap(n_bound, min_m, expected):
    assert bounds.nonfermat_factor_cap(n_bound, min_m) == expected
    assert min_m**expected <= n_bound < min_m ** (expected + 1)


def test_q5_exclusion_cap():
    cap = bounds.q5_exclusion_cap(200_000, 5)
    assert cap == pytest.approx(3 + math.log(1600) / math.log(3))
    assert cap < 9.8
    # monotone decreasing in q, vacuous once q^3 exceeds the bound
    assert bounds.q5_exclusion_cap(200_000, 7) < cap
    assert bounds.q5_exclusion_cap(200_000, 59) is None  # 59^3 = 205379
    assert bounds.q5_exclusion_cap(205_379, 59) is not None
    with pytest.raises(ValueError):
        bounds.q5_exclusion_cap(200_000, 9)


def _two_thirds_oracle(n: int) -> bool:
    # independent high-precision route for the same inequality
    with mpmath.workdps(60):
        t = mpmath.mpf(n) * mpmath.power(2, n)
        lhs = t / (mpmath.cbrt(t) + 1)
        rhs = mpmath.power(2, mpmath.mpf(2 * n) / 3)
        return lhs > rhs


def test_check_two_thirds_small_cases():
    assert bounds.check_two_thirds(1) is False
    # n = 2 holds: cubing gives 512/27 > 16, i.e. 512 > 432, in exact integers
    assert bounds.check_two_thirds(2) is True
    assert bounds.check_two_thirds(3) is True
    assert bounds.check_two_thirds(100) is True
    with pytest.raises(ValueError):
        bounds.check_two_thirds(0)


def test_check_two_thirds_matches_highprec_oracle():
    for n in range(1, 400):
        assert bounds.check_two_thirds(n) == _two_thirds_oracle(n), n


def test_refine_chain_default_reaches_final_form():
    chain = bounds.refine_chain()
    assert chain.complete
    ff = chain.final_form
    assert ff.form == "2^a*3^b"
    assert ff.n_max == 200_000 and ff.k_max == 15
    assert ff.n_max_computed <= 200_000
    anchors = [s.anchor for s in chain.steps]
    assert anchors == [
        "k-crossover",
        "fermat-cap",
        "count-m3",
        "threshold-k17",
        "count-m3-refresh",
        "case-3-coprime",
        "three-divides",
        "threshold-k15",
        "case-q5",
        "final-form",
    ]


def test_refine_chain_n_bounds_nonincreasing_and_below_stated():
    chain = bounds.refine_chain()
    prev = None
    for step in chain.steps:
        assert step.n_bound is not None and step.stated_n_bound is not None
        assert step.n_bound <= step.stated_n_bound
        if prev is not None:
            assert step.n_bound <= prev
        prev = step.n_bound


def test_refine_chain_branch_bounds():
    chain = bounds.refine_chain()
    by_anchor = {s.anchor: s for s in chain.steps}
    assert by_anchor["count-m3"].k_bound == 17
    assert by_anchor["count-m3-refresh"].k_bound == 16
    assert by_anchor["case-3-coprime"].k_bound == 12
    assert by_anchor["three-divides"].k_bound == 15
    assert by_anchor["case-q5"].k_bound == 13


def test_refine_chain_high_threshold_halts():
    chain = bounds.refine_chain(99)
    assert not chain.complete
    assert chain.final_form is None
    assert chain.steps[-1].anchor == "halt"


def test_refine_chain_low_threshold_stops_at_branch():
    # with the gate set below the branch bounds no contradiction ever fires,
    # so 3 | n can not be concluded and the final form is unreachable
    chain = bounds.refine_chain(5)
    assert not chain.complete
    assert chain.steps[-1].anchor == "case-3-coprime"
