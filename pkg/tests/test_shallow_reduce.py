"""General reduction: scaling, stars, epochs, and the two top drivers."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shallowcut import (
    DiGraph,
    ExactReachabilityOracle,
    ExactTransitiveOracle,
    GeneratorSpec,
    OracleSizeLaw,
    PhasePlan,
    ReductionConfig,
    build_stars,
    compute_size_bound,
    dist_all_pairs,
    generate,
    phase_sigma,
    reduce_hopset,
    reduce_shortcut,
    run_phase,
    scale_down_graph,
    scaled_length,
    verify_shortcut,
)

fractions = st.fractions(
    min_value=Fraction(1, 64), max_value=Fraction(64), max_denominator=64
)


def unit_path(n):
    return DiGraph.from_edges(n, [(i, i + 1, 1) for i in range(n - 1)])


class TestScaledLength:
    def test_small_factor_is_identity(self):
        assert scaled_length(7, 0, Fraction(1, 2)) == 7

    def test_hand_evaluated(self):
        assert scaled_length(7, 3, Fraction(1, 2)) == 2

    def test_huge_factor_floors_at_one(self):
        assert scaled_length(5, 10, Fraction(3)) == 1

    @given(st.integers(1, 10**6), st.integers(0, 20), fractions)
    @settings(max_examples=200, deadline=None)
    def test_exact_ceiling(self, length, j, eps):
        got = scaled_length(length, j, eps)
        factor = eps * 2**j
        expected = length if factor <= 1 else -((-length * factor.denominator) // factor.numerator)
        assert got == expected
        assert got >= 1

    def test_vectorized_matches_scalar(self):
        g = DiGraph.from_edges(4, [(0, 1, 7), (1, 2, 13), (2, 3, 1)], 13)
        scaled = scale_down_graph(g, 3, Fraction(1, 2))
        assert list(scaled.lengths) == [
            scaled_length(w, 3, Fraction(1, 2)) for w in (7, 13, 1)
        ]


class TestPhaseSigma:
    @given(st.integers(0, 20), fractions)
    @settings(max_examples=100, deadline=None)
    def test_is_exact_ceiling(self, j, eps):
        sigma = phase_sigma(j, eps)
        value = eps * 2**j
        assert sigma >= 1
        assert sigma - 1 < value <= sigma or value <= 1 == sigma


class TestBuildStars:
    def test_singletons_only(self):
        assert len(build_stars([(0,), (1,)], 5)) == 0

    def test_component_of_four(self):
        stars = build_stars([(3, 1, 7, 5)], 4)
        assert len(stars) == 6
        assert all(w == 4 for _, _, w in stars)
        assert all(1 in (t, h) for t, h, _ in stars)  # lowest id is the center

    def test_no_scaled_distance_decreases(self):
        # star length d on components of weak diameter <= d keeps distances
        g = DiGraph.from_edges(
            4, [(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1), (1, 2, 1)]
        )
        stars = build_stars([(0, 1), (2, 3)], 2)
        before = dist_all_pairs(g)
        after = dist_all_pairs(g, stars)
        finite = np.isfinite(before)
        assert np.all(after[finite] >= before[finite])


class TestReductionConfig:
    def test_lambda_prime_clamped_to_two(self):
        cfg = ReductionConfig(lam=8, h=8)
        assert cfg.lambda_prime(512) == 2.0

    def test_lambda_prime_unclamped_when_large(self):
        cfg = ReductionConfig(lam=10_000, h=4, eps=Fraction(2))
        assert cfg.lambda_prime(16) == pytest.approx(10_000 / 16)

    def test_eps_scales_lambda_prime_only_below_one(self):
        small = ReductionConfig(lam=4096, h=4, eps=Fraction(1, 2))
        big = ReductionConfig(lam=4096, h=4, eps=Fraction(8))
        assert small.lambda_prime(16) == pytest.approx(4096 / 32)
        assert big.lambda_prime(16) == pytest.approx(4096 / 16)

    def test_epoch_count(self):
        cfg = ReductionConfig(lam=8, h=8)
        assert cfg.epoch_count(1) == 1
        assert cfg.epoch_count(512) == 10  # ceil(log2(512)) + 1

    def test_phase_count_unit_lengths(self):
        assert ReductionConfig(lam=8, h=8).phase_count(1) == 1

    def test_phase_count_weighted(self):
        assert ReductionConfig(lam=8, h=8).phase_count(32) == 6

    def test_strict_mode_rejects_small_lambda(self):
        cfg = ReductionConfig(lam=8, h=8, strict_mode=True)
        with pytest.raises(ValueError):
            cfg.validate_strict(256)

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ReductionConfig(lam=1, h=8)
        with pytest.raises(ValueError):
            ReductionConfig(lam=8, h=0)
        with pytest.raises(ValueError):
            ReductionConfig(lam=8, h=8, eps=Fraction(0))


class TestRunPhase:
    def test_edgeless_graph(self):
        g = DiGraph.from_edges(5, [])
        cfg = ReductionConfig(lam=4, h=2, ldd_repetitions=1)
        out, trace = run_phase(g, PhasePlan(1, 0, 1), cfg, ExactTransitiveOracle(5))
        assert len(out) == 0
        assert trace.oracle_calls >= 1

    def test_output_never_decreases_distances(self):
        g = unit_path(48)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2, eps=Fraction(1, 2))
        out, _ = run_phase(g, PhasePlan(1, 0, 1), cfg, ExactTransitiveOracle(48))
        before = dist_all_pairs(g)
        after = dist_all_pairs(g, out)
        assert np.all((after >= before) | ~np.isfinite(before))


class TestReduceHopset:
    def test_distance_preservation_random_weighted(self):
        rng = np.random.default_rng(3)
        n, m = 48, 140
        t = rng.integers(0, n, size=m)
        h = (t + 1 + rng.integers(0, n - 1, size=m)) % n
        g = DiGraph.from_arrays(n, t, h, rng.integers(1, 9, size=m), 8)
        cfg = ReductionConfig(lam=8, h=8, eps=Fraction(1, 2), ldd_repetitions=2)
        report = reduce_hopset(g, cfg, ExactTransitiveOracle(n))
        assert report.clamp_count == 0
        assert np.array_equal(dist_all_pairs(g, report.hopset), dist_all_pairs(g))

    def test_epoch_hop_metric_never_increases(self):
        g = unit_path(64)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2)
        report = reduce_hopset(g, cfg, ExactTransitiveOracle(64))
        metrics = report.epoch_hop_metrics
        assert metrics == sorted(metrics, reverse=True)

    def test_determinism(self):
        g = unit_path(48)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2, seed=5)
        a = reduce_hopset(g, cfg, ExactTransitiveOracle(48))
        b = reduce_hopset(g, cfg, ExactTransitiveOracle(48))
        assert a.hopset == b.hopset
        assert a.to_json() == b.to_json()

    def test_call_accounting(self):
        g = unit_path(32)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2)
        report = reduce_hopset(g, cfg, ExactTransitiveOracle(32))
        from_traces = sum(
            tr.oracle_calls for epoch in report.epoch_traces for tr in epoch
        )
        assert report.oracle_calls == from_traces
        assert report.ldd_calls == sum(
            len(tr.repetitions) for epoch in report.epoch_traces for tr in epoch
        )

    def test_shallow_graph_already_within_budget(self):
        g = DiGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
        cfg = ReductionConfig(lam=4, h=3, ldd_repetitions=1)
        report = reduce_hopset(g, cfg, ExactTransitiveOracle(4))
        assert report.measured_stretch == 1


class TestReduceShortcut:
    def test_unit_path(self):
        g = unit_path(128)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2)
        report = reduce_shortcut(g, cfg, ExactReachabilityOracle(128))
        assert report.verification is not None and report.verification.passed
        assert report.clamp_count == 0

    def test_single_edge_dag(self):
        g = DiGraph.from_edges(2, [(0, 1, 1)])
        cfg = ReductionConfig(lam=4, h=4, ldd_repetitions=1)
        report = reduce_shortcut(g, cfg, ExactReachabilityOracle(2))
        assert report.verification.passed

    def test_disjoint_paths_stay_disjoint(self):
        g = generate(GeneratorSpec("disjoint-paths", n=128, paths=8))
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2)
        report = reduce_shortcut(g, cfg, ExactReachabilityOracle(128))
        assert report.verification.passed
        block = np.asarray(report.shortcut.tails) // 16
        assert np.array_equal(block, np.asarray(report.shortcut.heads) // 16)

    def test_rejects_weighted_graph(self):
        g = DiGraph.from_edges(2, [(0, 1, 3)])
        cfg = ReductionConfig(lam=4, h=4)
        with pytest.raises(ValueError):
            reduce_shortcut(g, cfg, ExactReachabilityOracle(2))

    def test_verification_matches_external_check(self):
        g = unit_path(64)
        cfg = ReductionConfig(lam=8, h=8, ldd_repetitions=2)
        report = reduce_shortcut(g, cfg, ExactReachabilityOracle(64))
        external = verify_shortcut(g, report.shortcut, 8)
        assert external.passed == report.verification.passed


class TestSizeBound:
    def test_zero_a_uses_small_branch(self):
        cfg = ReductionConfig(lam=8, h=8)
        law = OracleSizeLaw(Fraction(0), Fraction(512 * 512))
        info = compute_size_bound(cfg, 511, law, 512, 1)
        assert info["branch"] == "small-a"
        assert info["bound"] > 0

    def test_large_a_uses_general_branch(self):
        cfg = ReductionConfig(lam=8, h=8)
        law = OracleSizeLaw(Fraction(2), Fraction(0))
        info = compute_size_bound(cfg, 100, law, 512, 1)
        assert info["branch"] == "general"

    def test_small_a_threshold(self):
        cfg = ReductionConfig(lam=8, h=8)
        import math

        log_lam_n = math.log2(512) / math.log2(8)
        law = OracleSizeLaw(Fraction(1, int(4 * log_lam_n**2)), Fraction(1))
        info = compute_size_bound(cfg, 100, law, 512, 1)
        assert info["branch"] == "small-a"
