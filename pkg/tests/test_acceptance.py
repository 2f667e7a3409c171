"""Acceptance gate: every promised behavior checked at its stated tolerance.

Each criterion prints one PASS line (the assert message carries the same
numbers on failure). Criteria 1-4 share one session fixture that
re-estimates the 11 required power cells at 2000 replicates with B = 2000
permutations per replicate; on two workers this takes a few minutes.
"""

import itertools
import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from intervalorder import (
    IntervalSample,
    PermutationPlan,
    StatisticKind,
    estimate_thetas,
    exhaustive_permutation_test,
    ks_statistic,
    mahalanobis_effect,
    permutation_test,
    run_scenario,
    t_statistic,
)
from intervalorder.simulation import Family, Method, Scenario

from .oracles import (
    constant_width_sample,
    dense_mesh_d_plus,
    mw_below_count,
    random_sample,
)

BASE_SEED = 20260811
REPLICATES = 2000
PERMUTATIONS = 2000
WORKERS = 2

NULL_CELLS = [
    Scenario(family, 0.0, rho, m, n, replicates=REPLICATES, permutations=PERMUTATIONS)
    for family in (Family.NORMAL, Family.T5)
    for (m, n) in ((30, 30), (50, 50))
    for rho in (0.0, 0.8)
]
POWER_CELLS = [
    Scenario(Family.NORMAL, 0.5, 0.0, 30, 30, replicates=REPLICATES, permutations=PERMUTATIONS),
    Scenario(Family.NORMAL, 1.0, 0.0, 30, 30, replicates=REPLICATES, permutations=PERMUTATIONS),
    Scenario(Family.T5, 0.5, 0.4, 50, 50, replicates=REPLICATES, permutations=PERMUTATIONS),
]
ALL_CELLS = NULL_CELLS + POWER_CELLS


def _announce(line: str) -> None:
    print(f"\n{line}", flush=True)


@pytest.fixture(scope="session")
def power_reports():
    reports = {}
    for i, scenario in enumerate(ALL_CELLS):
        reports[scenario] = run_scenario(scenario, seed=BASE_SEED + i, workers=WORKERS)
    return reports


def _label(scenario: Scenario) -> str:
    return (
        f"{scenario.family.value}({scenario.m},{scenario.n}) "
        f"rho={scenario.correlation:g} delta={scenario.delta:g}"
    )


def test_criterion_1_size_calibration(power_reports):
    """Null rejection rates at alpha=0.05 lie in [0.035, 0.065] for every
    method in all 8 null cells (both families, (30,30) and (50,50),
    rho in {0, 0.8})."""
    rates = {}
    for scenario in NULL_CELLS:
        report = power_reports[scenario]
        for method in scenario.methods:
            rates[f"{_label(scenario)} {method.value}"] = report.rate(method)
    offenders = {k: v for k, v in rates.items() if not 0.035 <= v <= 0.065}
    worst = max(abs(v - 0.05) for v in rates.values())
    assert not offenders, f"null rates outside [0.035, 0.065]: {offenders}"
    _announce(
        f"PASS criterion 1 (size calibration): {len(rates)}/24 null rates in "
        f"[0.035, 0.065]; max |rate - 0.05| = {worst:.4f}"
    )


def test_criterion_2_power_reproduction(power_reports):
    """Published power values reproduce at the spot cells: normal (30,30)
    rho=0 U-perm 0.573 +- 0.04 at delta=0.5 and >= 0.96 at delta=1.0, B-KS
    0.829 +- 0.04 at delta=1.0; t5 (50,50) rho=0.4 U-perm 0.686 +- 0.04 at
    delta=0.5."""
    half_normal = power_reports[POWER_CELLS[0]]
    full_normal = power_reports[POWER_CELLS[1]]
    half_t = power_reports[POWER_CELLS[2]]
    checks = [
        ("normal(30,30) rho=0 d=0.5 u-perm", half_normal.rate(Method.U_PERM), 0.533, 0.613),
        ("normal(30,30) rho=0 d=1.0 u-perm", full_normal.rate(Method.U_PERM), 0.96, 1.0),
        ("normal(30,30) rho=0 d=1.0 b-ks", full_normal.rate(Method.B_KS), 0.789, 0.869),
        ("t5(50,50) rho=0.4 d=0.5 u-perm", half_t.rate(Method.U_PERM), 0.646, 0.726),
    ]
    for name, rate, lo, hi in checks:
        assert lo <= rate <= hi, f"{name}: {rate:.4f} outside [{lo}, {hi}]"
    summary = ", ".join(f"{name}={rate:.3f}" for name, rate, _, _ in checks)
    _announce(f"PASS criterion 2 (power reproduction): {summary}")


def test_criterion_3_asymptotic_permutation_agreement(power_reports):
    """|power(U-perm) - power(U-asym)| <= 0.03 in every run cell."""
    gaps = {
        _label(sc): abs(rep.rate(Method.U_PERM) - rep.rate(Method.U_ASYM))
        for sc, rep in power_reports.items()
    }
    worst_cell = max(gaps, key=gaps.get)
    assert all(gap <= 0.03 for gap in gaps.values()), f"calibration gap too large: {gaps}"
    _announce(
        f"PASS criterion 3 (u-perm/u-asym agreement): max gap {gaps[worst_cell]:.4f} "
        f"at {worst_cell} over {len(gaps)} cells (limit 0.03)"
    )


def test_criterion_4_dominance_over_ks(power_reports):
    """In every run cell with delta >= 0.3, power(U-perm) > power(B-KS) - 0.01."""
    cells = [sc for sc in ALL_CELLS if sc.delta >= 0.3]
    assert cells, "no alternative cells were run"
    margins = {
        _label(sc): power_reports[sc].rate(Method.U_PERM) - power_reports[sc].rate(Method.B_KS)
        for sc in cells
    }
    assert all(margin > -0.01 for margin in margins.values()), f"dominance violated: {margins}"
    _announce(
        f"PASS criterion 4 (dominance over the KS test): min margin "
        f"{min(margins.values()):+.4f} over {len(margins)} cells with delta >= 0.3"
    )


def test_criterion_5_mann_whitney_reduction():
    """Constant-width samples reduce exactly to the rank test: T equals
    2*U/(m*n) - 1 against an independent count and scipy on 200 cases with
    m, n <= 12, and the plug-in variance component on large totally ordered
    samples is within 0.01 of 1/3 (the exact rank-test variance identity
    Var(sqrt(N)*T) -> 1/(3*rho*(1-rho)))."""
    rng = np.random.default_rng(BASE_SEED + 100)
    for _ in range(200):
        x = constant_width_sample(rng, int(rng.integers(2, 13)))
        y = constant_width_sample(rng, int(rng.integers(2, 13)))
        m, n = len(x), len(y)
        below = mw_below_count(x.centers(), y.centers())
        # 2U/(mn) - 1 formed with exact integer arithmetic and one division,
        # bit-identical to the statistic's own single-division evaluation
        assert t_statistic(x, y) == (2 * below - m * n) / (m * n)
        assert abs(t_statistic(x, y) - (2 * below / (m * n) - 1)) < 1e-15
        scipy_u = scipy_stats.mannwhitneyu(x.centers(), y.centers(), alternative="two-sided").statistic
        assert below == m * n - int(round(scipy_u))
    big_x = constant_width_sample(rng, 4000)
    big_y = constant_width_sample(rng, 4000)
    component = estimate_thetas(big_x, big_y).variance_component
    assert abs(component - 1 / 3) <= 0.01
    # finite-sample variance identity over all relabellings of a pooled
    # constant-width sample: Var(T) = (N+1)/(3*m*n) exactly
    m, n = 4, 4
    pooled = constant_width_sample(rng, m + n)
    values = []
    for subset in itertools.combinations(range(m + n), m):
        rest = [i for i in range(m + n) if i not in set(subset)]
        xs = IntervalSample.from_arrays(pooled.lower[sorted(subset)], pooled.upper[sorted(subset)])
        ys = IntervalSample.from_arrays(pooled.lower[rest], pooled.upper[rest])
        values.append(t_statistic(xs, ys))
    assert np.var(values) == pytest.approx((m + n + 1) / (3 * m * n), rel=1e-12)
    _announce(
        "PASS criterion 5 (rank-test reduction): 200/200 exact T identities; "
        f"variance component {component:.6f} vs 1/3 (tol 0.01); exact relabelling variance identity"
    )


def test_criterion_6_exhaustive_permutation_oracle():
    """Sampled permutation p-values (B=50000) match exhaustive enumeration
    within 3*sqrt(p*(1-p)/B) plus the add-one smoothing allowance 1/(B+1)
    on 100 random m=n=4 datasets."""
    B = 50000
    rng = np.random.default_rng(101)
    worst = 0.0
    for i in range(100):
        x = random_sample(rng, 4)
        y = random_sample(rng, 4)
        exact = exhaustive_permutation_test(x, y).p_value
        sampled = permutation_test(
            x, y, PermutationPlan(B, 3000 + i, StatisticKind.U_STATISTIC)
        ).p_value
        band = 3 * math.sqrt(exact * (1 - exact) / B) + 1 / (B + 1)
        deviation = abs(sampled - exact)
        worst = max(worst, deviation / band)
        assert deviation <= band, (
            f"dataset {i}: sampled {sampled:.5f} vs exact {exact:.5f}, band {band:.5f}"
        )
    _announce(
        f"PASS criterion 6 (exhaustive oracle): 100/100 within the 3-sigma band; "
        f"worst deviation {worst:.2f} of the band"
    )


def test_criterion_7_ks_grid_exactness():
    """Endpoint-grid KS maxima equal dense-mesh brute force exactly on 100
    random instances with m + n <= 12 (1000 mesh points per axis plus every
    jump corner)."""
    rng = np.random.default_rng(BASE_SEED + 300)
    for i in range(100):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 13 - m))
        x = random_sample(rng, m, integer_grid=bool(rng.integers(2)))
        y = random_sample(rng, n, integer_grid=bool(rng.integers(2)))
        fast = ks_statistic(x, y).d_plus
        brute = dense_mesh_d_plus(x, y)
        assert fast == brute, f"instance {i}: grid {fast!r} != mesh {brute!r}"
    _announce("PASS criterion 7 (KS grid exactness): 100/100 exact dense-mesh matches")


def test_criterion_8_invariance_suite():
    """1000 randomized cases each: exact antisymmetry of T, exact
    monotone-transform invariance of T and the KS statistic, and bit-identical
    permutation outcomes for thread counts 1/2/3 (plus a worker-count check
    for the scenario runner)."""
    rng = np.random.default_rng(BASE_SEED + 400)
    for _ in range(1000):
        x = random_sample(rng, int(rng.integers(1, 9)), integer_grid=bool(rng.integers(2)))
        y = random_sample(rng, int(rng.integers(1, 9)), integer_grid=bool(rng.integers(2)))
        assert t_statistic(x, y) == -t_statistic(y, x)

    for trial in range(1000):
        x = random_sample(rng, int(rng.integers(2, 8)))
        y = random_sample(rng, int(rng.integers(2, 8)))
        if trial % 2 == 0:
            slope, shift = rng.uniform(0.2, 4.0), rng.uniform(-3.0, 3.0)
            g = lambda arr: slope * arr + shift
        else:
            g = np.exp
        gx = IntervalSample.from_arrays(g(x.lower), g(x.upper))
        gy = IntervalSample.from_arrays(g(y.lower), g(y.upper))
        assert t_statistic(gx, gy) == t_statistic(x, y)
        assert ks_statistic(gx, gy).d_plus == ks_statistic(x, y).d_plus

    mismatches = 0
    for trial in range(1000):
        x = random_sample(rng, 6)
        y = random_sample(rng, 6)
        kind = StatisticKind.U_STATISTIC if trial % 2 == 0 else StatisticKind.KS_D_PLUS
        plan = PermutationPlan(4096, trial, kind)  # spans several draw chunks
        base = permutation_test(x, y, plan, threads=1)
        mismatches += (permutation_test(x, y, plan, threads=2) != base) + (
            permutation_test(x, y, plan, threads=3) != base
        )
    assert mismatches == 0

    scenario = Scenario(Family.NORMAL, 0.5, 0.4, 10, 10, replicates=60, permutations=256)
    serial = run_scenario(scenario, seed=BASE_SEED, workers=1)
    parallel = run_scenario(scenario, seed=BASE_SEED, workers=2)
    assert serial.rejections == parallel.rejections
    _announce(
        "PASS criterion 8 (invariance suite): 1000/1000 antisymmetry, 1000/1000 "
        "monotone-transform invariance, 1000/1000 thread-count determinism, "
        "worker-count determinism"
    )


def test_criterion_9_mahalanobis_diagnostic():
    """Effect sizes delta^2/(1-rho^2) equal 1.1905*delta^2 at rho=0.4 and
    2.7778*delta^2 at rho=0.8 to four decimals."""
    for delta in (0.5, 1.0, 2.0):
        assert round(mahalanobis_effect(delta, 0.4) / delta**2, 4) == 1.1905
        assert round(mahalanobis_effect(delta, 0.8) / delta**2, 4) == 2.7778
    assert mahalanobis_effect(0.0, 0.4) == 0.0
    _announce(
        "PASS criterion 9 (effect-size diagnostic): factors 1.1905 and 2.7778 "
        "reproduced to 4 decimals"
    )
