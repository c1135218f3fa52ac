#include "bgm/error.hpp"
#include "bgm/selector.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace bgm;

namespace {

FeatureMirrorScores scores_of(std::vector<double> w1, std::vector<double> w2)
{
    FeatureMirrorScores s;
    s.w1 = Eigen::Map<Eigen::VectorXd>(w1.data(), static_cast<Eigen::Index>(w1.size()));
    s.w2 = Eigen::Map<Eigen::VectorXd>(w2.data(), static_cast<Eigen::Index>(w2.size()));
    return s;
}

using bgm::testing::random_instance;
using bgm::testing::ranked_scan_cutoff;
using bgm::testing::stats_of;

} // namespace

TEST(EstimateWeights, Examples)
{
    const auto w = estimate_weights(Eigen::Vector3d(0.0, 1.0, -1.0), 1.0);
    EXPECT_DOUBLE_EQ(w.gamma[0], 1.0);
    EXPECT_DOUBLE_EQ(w.gamma[1], 0.5);
    EXPECT_DOUBLE_EQ(w.gamma[2], 0.5);
    EXPECT_DOUBLE_EQ(estimate_weights(Eigen::VectorXd::Ones(1), 2.0).gamma[0], 0.25);
    EXPECT_DOUBLE_EQ(estimate_weights(Eigen::VectorXd::Zero(1), 7.0).gamma[0], 1.0);
}

TEST(EstimateWeights, RejectsKappaBelowOne)
{
    try {
        estimate_weights(Eigen::VectorXd::Zero(2), 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidKappa);
    }
}

TEST(EstimateWeights, MonotoneInBetaAndKappa)
{
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(20, 0.0, 3.0);
    for (double kappa : {1.0, 2.5, 10.0}) {
        const auto w = estimate_weights(b, kappa);
        for (Eigen::Index j = 1; j < b.size(); ++j) EXPECT_LT(w.gamma[j], w.gamma[j - 1]);
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            EXPECT_GT(w.gamma[j], 0.0);
            EXPECT_LE(w.gamma[j], 1.0);
        }
    }
    for (double beta : {0.1, 1.0, 4.0}) {
        const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, beta);
        EXPECT_LT(estimate_weights(one, 3.0).gamma[0], estimate_weights(one, 2.0).gamma[0]);
    }
    EXPECT_LT(estimate_weights(Eigen::VectorXd::Constant(1, 1e6), 1.0).gamma[0], 1e-5);
}

TEST(BgmStatistics, Examples)
{
    const auto s = scores_of({1.0, 0.7, 0.4}, {0.5, 0.0, 0.4});
    WeightVector w;
    w.gamma = Eigen::Vector3d(0.8, 0.3, 1.0);
    const auto m = bgm_statistics(s, w);
    EXPECT_NEAR(m.m_hat[0], 0.6, 1e-15);
    EXPECT_DOUBLE_EQ(m.m_hat[1], 0.7);
    EXPECT_DOUBLE_EQ(m.m_hat[2], 0.0);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_GE(m.m_hat[j], s.w1[j] - s.w2[j]);
}

TEST(BgmStatistics, LengthMismatch)
{
    const auto s = scores_of({1.0, 0.7}, {0.5, 0.0});
    WeightVector w;
    w.gamma = Eigen::Vector3d(1, 1, 1);
    EXPECT_THROW(bgm_statistics(s, w), Error);
}

TEST(FdpComponents, HandEnumeration)
{
    const auto s = stats_of({3.0, -4.0}, {0.5, 1.0}, {1.0, 1.0});
    const auto c = fdp_components(s, 2.0);
    EXPECT_EQ(c.v1, 1u);
    EXPECT_EQ(c.v2, 1u);
    EXPECT_EQ(c.denominator, 1u);
    const auto empty = fdp_components(s, 10.0);
    EXPECT_EQ(empty.v1 + empty.v2 + empty.v3, 0u);
    EXPECT_EQ(empty.denominator, 1u);
}

TEST(FdpComponents, ThirdTermWindow)
{
    // t / gamma = 2, window up to 2 + (2 - 0.5) * 2 = 5
    const auto s = stats_of({2.0, 4.9, 5.1}, {0.5, 0.5, 0.5}, {2.0, 2.0, 2.0});
    const auto c = fdp_components(s, 1.0);
    EXPECT_EQ(c.v2, 0u);
    EXPECT_EQ(c.v3, 2u);
    EXPECT_EQ(c.above, 3u);
}

TEST(FdpComponents, RejectsNonPositiveThreshold)
{
    const auto s = stats_of({1.0}, {1.0});
    EXPECT_THROW(fdp_components(s, 0.0), Error);
    EXPECT_THROW(fdp_components(s, -1.0), Error);
}

TEST(ComputeCutoff, AllNonPositiveIsInfeasible)
{
    const auto r = compute_cutoff(stats_of({-1.0, 0.0, -0.5}, {1.0, 1.0, 1.0}), 0.1);
    EXPECT_FALSE(r.feasible());
    EXPECT_TRUE(std::isinf(r.tau));
    EXPECT_TRUE(r.selected.empty());
}

TEST(ComputeCutoff, SymmetricToy)
{
    const auto r = compute_cutoff(stats_of({5.0, 4.0, 3.0, -1.0}, {1.0, 1.0, 1.0, 1.0}), 0.5);
    ASSERT_TRUE(r.feasible());
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1, 2}));
    // smallest candidate 1 - 0.5 already satisfies 1 / 3 <= 0.5
    EXPECT_DOUBLE_EQ(r.tau, 0.5);
    const auto c = fdp_components(stats_of({5.0, 4.0, 3.0, -1.0}, {1.0, 1.0, 1.0, 1.0}), 2.5);
    EXPECT_EQ(c.v1, 0u);
    EXPECT_EQ(c.v2, 0u);
    EXPECT_EQ(c.denominator, 3u);
}

TEST(ComputeCutoff, RankedCandidates)
{
    const auto s = stats_of({1.0, -3.0, 4.0, 1.0}, {1.0, 1.0, 1.0, 1.0});
    const auto t = candidate_thresholds(s);
    // values 1, 3, 4; smallest gap 1 -> eta 0.5
    EXPECT_EQ(t, (std::vector<double>{0.5, 2.5, 3.5}));
    const auto single = candidate_thresholds(stats_of({2.0}, {1.0}));
    EXPECT_EQ(single, (std::vector<double>{1.0}));
}

TEST(ComputeCutoff, MatchesExhaustiveRankedScan)
{
    std::mt19937_64 gen(2024);
    for (int instance = 0; instance < 200; ++instance) {
        const auto inst = random_instance(gen);
        for (double q : {0.05, 0.1, 0.2}) {
            const auto r = compute_cutoff(stats_of(inst.m, inst.gamma), q);
            const double oracle = ranked_scan_cutoff(inst.m, inst.gamma, q);
            ASSERT_EQ(r.tau, oracle) << "instance " << instance << " q " << q;
            std::vector<std::size_t> expected;
            for (std::size_t j = 0; j < inst.m.size(); ++j)
                if (inst.m[j] > oracle) expected.push_back(j);
            ASSERT_EQ(r.selected, expected);
        }
    }
}

TEST(ComputeCutoff, ExactGridMatchesDenseScan)
{
    std::mt19937_64 gen(77);
    for (int instance = 0; instance < 200; ++instance) {
        const auto inst = random_instance(gen);
        const double q = 0.1;
        const auto stats = stats_of(inst.m, inst.gamma);
        const auto r = compute_cutoff(stats, q, ThresholdGrid::exact);
        const double dense = bgm::testing::dense_scan_cutoff(inst.m, inst.gamma, q);
        ASSERT_EQ(r.feasible(), std::isfinite(dense)) << "instance " << instance;
        if (!r.feasible()) continue;
        // both thresholds sit in the same constancy interval
        const auto a = bgm::testing::naive_counts(inst.m, inst.gamma, r.tau);
        const auto b = bgm::testing::naive_counts(inst.m, inst.gamma, dense);
        EXPECT_EQ(a.v1, b.v1);
        EXPECT_EQ(a.v2, b.v2);
        EXPECT_EQ(a.above, b.above);
        EXPECT_LE(dense, r.tau);
        // never later than the ranked grid
        EXPECT_LE(r.tau, compute_cutoff(stats, q).tau);
    }
}

TEST(ComputeCutoff, FeasibilityAndMinimality)
{
    std::mt19937_64 gen(5);
    for (int instance = 0; instance < 100; ++instance) {
        const auto inst = random_instance(gen);
        const auto stats = stats_of(inst.m, inst.gamma);
        const auto r = compute_cutoff(stats, 0.1);
        if (!r.feasible()) continue;
        const auto at = fdp_components(stats, r.tau);
        EXPECT_LE(at.ratio(), 0.1);
        for (const auto& point : r.fdp_curve) {
            if (point.t >= r.tau) break;
            EXPECT_TRUE(point.counts.above == 0 || point.ratio > 0.1);
        }
    }
}

TEST(ComputeCutoff, NestingInQ)
{
    std::mt19937_64 gen(9);
    for (int instance = 0; instance < 100; ++instance) {
        const auto inst = random_instance(gen);
        const auto stats = stats_of(inst.m, inst.gamma);
        const auto lo = compute_cutoff(stats, 0.05);
        const auto hi = compute_cutoff(stats, 0.2);
        EXPECT_GE(lo.tau, hi.tau);
        EXPECT_TRUE(std::includes(hi.selected.begin(), hi.selected.end(), lo.selected.begin(), lo.selected.end()));
    }
}

TEST(ComputeCutoff, ScalingInvariance)
{
    std::mt19937_64 gen(13);
    for (int instance = 0; instance < 100; ++instance) {
        const auto inst = random_instance(gen);
        const auto stats = stats_of(inst.m, inst.gamma);
        auto scaled = stats;
        const double c = 4.0;
        scaled.m_hat *= c;
        const auto a = compute_cutoff(stats, 0.1);
        const auto b = compute_cutoff(scaled, 0.1);
        EXPECT_EQ(a.selected, b.selected);
        if (a.feasible()) EXPECT_NEAR(b.tau, c * a.tau, 1e-12 * c * a.tau);
    }
}

TEST(ComputeCutoff, UnitWeightsReduceToSymmetricRule)
{
    std::mt19937_64 gen(17);
    for (int instance = 0; instance < 100; ++instance) {
        const auto inst = random_instance(gen, true);
        const auto stats = stats_of(inst.m, inst.gamma);
        for (double t : candidate_thresholds(stats)) {
            const auto c = fdp_components(stats, t);
            EXPECT_EQ(c.v2, 0u);
            int below = 0, above = 0;
            for (double m : inst.m) {
                below += m < -t;
                above += m > t;
            }
            EXPECT_DOUBLE_EQ(c.ratio(), static_cast<double>(below) / std::max(above, 1));
        }
    }
}

TEST(ComputeCutoff, RejectsInvalidQ)
{
    const auto s = stats_of({1.0}, {1.0});
    EXPECT_THROW(compute_cutoff(s, 0.0), Error);
    EXPECT_THROW(compute_cutoff(s, 1.0), Error);
}

TEST(SelectFromScores, KappaTieBreaksToSmallest)
{
    // beta_hat = 1 for features 0-2: gamma halves with each kappa step
    const auto scores = scores_of({3.0, 3.0, 3.0, 0.2, 0.1, 0.05}, {2.8, 2.8, 2.8, 0.1, 0.1, 0.1});
    Eigen::VectorXd beta(6);
    beta << 1, 1, 1, 0, 0, 0;
    const double grid[] = {1.0, 2.0, 3.0};
    const auto sel = select_from_scores(scores, beta, grid, 0.4);
    ASSERT_EQ(sel.records.size(), 3u);
    std::size_t best = 0;
    for (const auto& r : sel.records) best = std::max(best, r.selected.size());
    EXPECT_EQ(sel.final_selected.size(), best);
    for (std::size_t k = 0; k < sel.kappa_index; ++k) EXPECT_LT(sel.records[k].selected.size(), best);
    EXPECT_EQ(sel.kappa_max, sel.records[sel.kappa_index].kappa);
}

TEST(SelectFromScores, SingleKappaMatchesDirectPipeline)
{
    const auto scores = scores_of({3.0, 2.0, 0.5, 0.1, 0.3}, {1.0, 0.4, 0.6, 0.3, 0.2});
    Eigen::VectorXd beta(5);
    beta << 0.9, 0.5, 0.0, 0.0, 0.1;
    const double grid[] = {2.0};
    const auto sel = select_from_scores(scores, beta, grid, 0.3);
    const auto direct = compute_cutoff(bgm_statistics(scores, estimate_weights(beta, 2.0)), 0.3);
    EXPECT_EQ(sel.final_selected, direct.selected);
    EXPECT_EQ(sel.final_cutoff.tau, direct.tau);
}

TEST(SelectFromScores, BaselineEqualsZeroBetaKappaOne)
{
    const auto scores = scores_of({3.0, 2.0, 0.5, 0.1, 0.3}, {1.0, 0.4, 0.6, 0.3, 0.2});
    const auto base = baseline_from_scores(scores, 0.3);
    const double grid[] = {1.0};
    const auto direct = select_from_scores(scores, Eigen::VectorXd::Zero(5), grid, 0.3);
    EXPECT_EQ(base.final_selected, direct.final_selected);
    for (const auto& point : base.final_cutoff.fdp_curve) EXPECT_EQ(point.counts.v2, 0u);
}

TEST(SelectFromScores, ValidatesGridAndQ)
{
    const auto scores = scores_of({1.0}, {0.5});
    const Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);
    const double unsorted[] = {2.0, 1.0};
    const double small[] = {0.5};
    const double ok[] = {1.0};
    EXPECT_THROW(select_from_scores(scores, beta, unsorted, 0.1), Error);
    EXPECT_THROW(select_from_scores(scores, beta, small, 0.1), Error);
    EXPECT_THROW(select_from_scores(scores, beta, std::span<const double>{}, 0.1), Error);
    EXPECT_THROW(select_from_scores(scores, beta, ok, 0.0), Error);
}

TEST(ThresholdGrid, ParseRoundTrip)
{
    EXPECT_EQ(parse_threshold_grid(to_string(ThresholdGrid::ranked)), ThresholdGrid::ranked);
    EXPECT_EQ(parse_threshold_grid(to_string(ThresholdGrid::exact)), ThresholdGrid::exact);
    EXPECT_THROW(parse_threshold_grid("dense"), Error);
}
