#include "bgm/design.hpp"
#include "bgm/lasso.hpp"
#include "bgm/mirrors.hpp"
#include "bgm/selector.hpp"
#include "bgm/simulation.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace bgm;

namespace {

struct Problem {
    StandardizedDesign design;
    Eigen::VectorXd y;
};

Problem linear_problem(Eigen::Index n, Eigen::Index p, std::uint64_t seed)
{
    const auto x = sample_mvn(build_block_toeplitz({p, 0.5}), n, seed);
    const auto truth = gen_beta_linear(p, p / 10, 3.0, n, seed + 1);
    return {standardize_columns(x), gen_response(x, truth, Family::linear, seed + 2)};
}

} // namespace

static void BM_LassoLinear(benchmark::State& state)
{
    const auto n = state.range(0), p = state.range(1);
    const auto prob = linear_problem(n, p, 3);
    const double lambda = 0.1 * lambda_max(prob.design.values(), prob.y);
    for (auto _ : state) {
        auto fit = lasso_linear(prob.design, prob.y, lambda);
        benchmark::DoNotOptimize(fit.coefficients.data());
    }
}
BENCHMARK(BM_LassoLinear)->Args({300, 300})->Args({400, 1000})->Unit(benchmark::kMillisecond);

static void BM_ComputeAllScores(benchmark::State& state)
{
    const auto n = state.range(0), p = state.range(1);
    const auto prob = linear_problem(n, p, 5);
    const double lambda = 0.1 * lambda_max(prob.design.values(), prob.y);
    const auto base = lasso_linear(prob.design, prob.y, lambda);
    MirrorOptions options;
    options.threads = 1;
    for (auto _ : state) {
        auto scores = compute_all_scores(prob.design, prob.y, Family::linear, lambda, 11,
                                         WarmStart{base.coefficients, base.intercept}, options);
        benchmark::DoNotOptimize(scores.w1.data());
    }
}
BENCHMARK(BM_ComputeAllScores)->Args({100, 50})->Args({300, 300})->Unit(benchmark::kMillisecond);

static void BM_ComputeCutoff(benchmark::State& state)
{
    const auto p = state.range(0);
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    BgmStatVector stats;
    stats.m_hat.resize(p);
    stats.gamma.resize(p);
    stats.w2.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        stats.m_hat[j] = z(gen) + (j % 10 == 0 ? 4.0 : 0.0);
        stats.gamma[j] = u(gen);
        stats.w2[j] = std::abs(z(gen));
    }
    const auto grid = state.range(1) == 0 ? ThresholdGrid::ranked : ThresholdGrid::exact;
    for (auto _ : state) {
        auto r = compute_cutoff(stats, 0.1, grid);
        benchmark::DoNotOptimize(r.tau);
    }
}
BENCHMARK(BM_ComputeCutoff)->Args({300, 0})->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
