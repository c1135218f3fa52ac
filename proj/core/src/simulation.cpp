#include "bgm/simulation.hpp"

#include "bgm/design.hpp"
#include "bgm/error.hpp"
#include "bgm/parallel.hpp"
#include "bgm/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace bgm {

namespace {

constexpr const char* kModule = "simulation";

std::vector<std::size_t> sample_without_replacement(Eigen::Index p, Eigen::Index s, Rng& rng)
{
    std::vector<std::size_t> pool(static_cast<std::size_t>(p));
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(s); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(static_cast<std::size_t>(s));
    std::sort(pool.begin(), pool.end());
    return pool;
}

void check_beta_args(Eigen::Index p, Eigen::Index s, double delta, Eigen::Index n)
{
    if (p < 1 || n < 1 || s < 0 || s > p) {
        throw Error(ErrorKind::InvalidSpec, kModule, "need p >= 1, n >= 1 and 0 <= s <= p");
    }
    if (!std::isfinite(delta) || delta < 0.0) {
        throw Error(ErrorKind::InvalidSpec, kModule, "signal amplitude must be finite and >= 0");
    }
}

} // namespace

Eigen::MatrixXd toeplitz_block(Eigen::Index block_size, double rho)
{
    if (block_size < 2) throw Error(ErrorKind::InvalidSpec, kModule, "Toeplitz block size must be >= 2");
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidSpec, kModule, "rho must lie in (0, 1)");
    const auto b = block_size;
    Eigen::MatrixXd block(b, b);
    for (Eigen::Index a = 0; a < b; ++a) {
        for (Eigen::Index c = 0; c < b; ++c) {
            const auto d = std::abs(a - c);
            block(a, c) = d == 0 ? 1.0 : static_cast<double>(b - d - 1) * rho / static_cast<double>(b - 1);
        }
    }
    return block;
}

Eigen::MatrixXd build_block_toeplitz(const BlockToeplitzSpec& spec)
{
    if (spec.p <= 0 || spec.p % 10 != 0) {
        throw Error(ErrorKind::InvalidSpec, kModule, "p must be a positive multiple of 10");
    }
    const auto b = spec.block_size();
    const Eigen::MatrixXd block = toeplitz_block(b, spec.rho);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(spec.p, spec.p);
    for (Eigen::Index k = 0; k < 10; ++k) cov.block(k * b, k * b, b, b) = block;
    return cov;
}

MvnSampler::MvnSampler(const Eigen::MatrixXd& cov)
{
    if (cov.rows() != cov.cols() || cov.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "covariance must be square and non-empty");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const Eigen::MatrixXd jittered = cov + 1e-10 * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
        llt.compute(jittered);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorKind::NotPsd, kModule, "covariance is not positive semidefinite");
        }
    }
    lower_ = llt.matrixL();
}

Eigen::MatrixXd MvnSampler::sample(Eigen::Index n, std::uint64_t seed) const
{
    const auto p = lower_.rows();
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) z(i, k) = normal(rng);
    }
    return z * lower_.transpose();
}

Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& cov, Eigen::Index n, std::uint64_t seed)
{
    return MvnSampler(cov).sample(n, seed);
}

double signal_floor(Eigen::Index p, double delta, Eigen::Index n)
{
    return delta * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

GroundTruth gen_beta_linear(Eigen::Index p, Eigen::Index s, double delta, Eigen::Index n, std::uint64_t seed)
{
    check_beta_args(p, s, delta, n);
    Rng rng(seed);
    GroundTruth truth;
    truth.h1_indices = sample_without_replacement(p, s, rng);
    truth.beta = Eigen::VectorXd::Zero(p);
    const double lower = signal_floor(p, delta, n);
    std::uniform_real_distribution<double> uniform(lower, lower + 0.2);
    for (auto j : truth.h1_indices) truth.beta[static_cast<Eigen::Index>(j)] = uniform(rng);
    return truth;
}

GroundTruth gen_beta_logistic(Eigen::Index p, Eigen::Index s, double delta, Eigen::Index n, std::uint64_t seed)
{
    check_beta_args(p, s, delta, n);
    if (delta == 0.0 && s > 0) {
        throw Error(ErrorKind::InvalidSpec, kModule, "signals need a positive amplitude");
    }
    Rng rng(seed);
    GroundTruth truth;
    truth.h1_indices = sample_without_replacement(p, s, rng);
    truth.beta = Eigen::VectorXd::Zero(p);
    const double value = signal_floor(p, delta, n);
    for (auto j : truth.h1_indices) truth.beta[static_cast<Eigen::Index>(j)] = value;
    return truth;
}

Eigen::VectorXd gen_response(const Eigen::MatrixXd& x, const GroundTruth& truth, Family family, std::uint64_t seed)
{
    if (x.cols() != truth.beta.size()) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "design width does not match beta length");
    }
    Rng rng(seed);
    const Eigen::VectorXd eta = x * truth.beta;
    Eigen::VectorXd y(x.rows());
    if (family == Family::linear) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = eta[i] + normal(rng);
    } else {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            y[i] = uniform(rng) < inverse_link(Family::logistic, eta[i]) ? 1.0 : 0.0;
        }
    }
    return y;
}

FdpPower evaluate_fdp_power(std::span<const std::size_t> selected, const GroundTruth& truth)
{
    const auto p = static_cast<std::size_t>(truth.beta.size());
    std::size_t false_hits = 0;
    std::size_t true_hits = 0;
    for (auto j : selected) {
        if (j >= p) throw Error(ErrorKind::IndexOutOfRange, kModule, "selected index " + std::to_string(j + 1) + " > p");
        if (truth.beta[static_cast<Eigen::Index>(j)] != 0.0) {
            ++true_hits;
        } else {
            ++false_hits;
        }
    }
    FdpPower out;
    out.fdp = static_cast<double>(false_hits) / static_cast<double>(std::max<std::size_t>(selected.size(), 1));
    out.power = static_cast<double>(true_hits) / static_cast<double>(std::max<std::size_t>(truth.h1_indices.size(), 1));
    return out;
}

std::string_view to_string(Method method)
{
    return method == Method::bgm ? "bgm" : "baseline";
}

void SimScenario::validate() const
{
    if (p <= 0 || p % 10 != 0 || p / 10 < 2) {
        throw Error(ErrorKind::InvalidSpec, kModule, "p must be a multiple of 10 with blocks of size >= 2");
    }
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidSpec, kModule, "rho must lie in (0, 1)");
    if (n < 2) throw Error(ErrorKind::InvalidSpec, kModule, "n must be >= 2");
    if (s < 0 || s > p) throw Error(ErrorKind::InvalidSpec, kModule, "need 0 <= s <= p");
    if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorKind::InvalidSpec, kModule, "delta must be >= 0");
    validate_q(q);
    validate_kappa_grid(kappa_grid);
    lambda_rule.validate();
}

SimScenario SimScenario::linear_paper()
{
    SimScenario s;
    s.family = Family::linear;
    s.n = 400;
    s.p = 1000;
    s.s = 50;
    s.delta = 3.0;
    s.rho = 0.5;
    s.replicates = 50;
    return s;
}

SimScenario SimScenario::linear_desk()
{
    SimScenario s = linear_paper();
    s.n = 300;
    s.p = 300;
    s.s = 30;
    s.replicates = 30;
    return s;
}

SimScenario SimScenario::logistic_paper()
{
    SimScenario s;
    s.family = Family::logistic;
    s.n = 600;
    s.p = 1000;
    s.s = 20;
    s.delta = 9.0;
    s.rho = 0.2;
    s.replicates = 100;
    return s;
}

SimScenario SimScenario::logistic_desk()
{
    SimScenario s = logistic_paper();
    s.n = 400;
    s.p = 200;
    s.s = 10;
    s.replicates = 30;
    return s;
}

SimScenario SimScenario::preset(std::string_view name)
{
    if (name == "linear-desk") return linear_desk();
    if (name == "linear-paper") return linear_paper();
    if (name == "logistic-desk") return logistic_desk();
    if (name == "logistic-paper") return logistic_paper();
    throw Error(ErrorKind::Config, kModule, "unknown preset '" + std::string(name) + "'");
}

ReplicateSeeds replicate_seeds(std::uint64_t master_seed, std::size_t replicate_id)
{
    const auto base = derive_seed(master_seed, {static_cast<std::uint64_t>(replicate_id)});
    return ReplicateSeeds{derive_seed(base, {1}), derive_seed(base, {2}), derive_seed(base, {3}),
                          derive_seed(base, {4}), derive_seed(base, {5})};
}

ReplicateData generate_replicate(const SimScenario& scenario, const MvnSampler& sampler, std::size_t replicate_id)
{
    ReplicateData data;
    data.seeds = replicate_seeds(scenario.master_seed, replicate_id);
    data.x = sampler.sample(scenario.n, data.seeds.covariates);
    data.truth = scenario.family == Family::linear
                     ? gen_beta_linear(scenario.p, scenario.s, scenario.delta, scenario.n, data.seeds.beta)
                     : gen_beta_logistic(scenario.p, scenario.s, scenario.delta, scenario.n, data.seeds.beta);
    data.y = gen_response(data.x, data.truth, scenario.family, data.seeds.response);
    return data;
}

ReplicateSummary summarize(std::span<const ReplicateOutcome> outcomes)
{
    ReplicateSummary summary;
    std::vector<const ReplicateOutcome*> ok;
    for (const auto& o : outcomes) {
        if (o.failed) {
            ++summary.failures;
        } else {
            ok.push_back(&o);
        }
    }
    summary.count = ok.size();
    summary.defined = !ok.empty();
    if (!summary.defined) return summary;

    const double k = static_cast<double>(ok.size());
    for (const auto* o : ok) {
        summary.mean_fdp += o->fdp;
        summary.mean_power += o->power;
    }
    summary.mean_fdp /= k;
    summary.mean_power /= k;
    if (ok.size() > 1) {
        double ss_fdp = 0.0;
        double ss_power = 0.0;
        for (const auto* o : ok) {
            ss_fdp += (o->fdp - summary.mean_fdp) * (o->fdp - summary.mean_fdp);
            ss_power += (o->power - summary.mean_power) * (o->power - summary.mean_power);
        }
        summary.sd_fdp = std::sqrt(ss_fdp / (k - 1.0));
        summary.sd_power = std::sqrt(ss_power / (k - 1.0));
    }
    return summary;
}

std::vector<ReplicateRun> run_replicates(const SimScenario& scenario, std::span<const Method> methods)
{
    scenario.validate();
    std::vector<ReplicateRun> runs(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        runs[m].method = methods[m];
        runs[m].outcomes.resize(scenario.replicates);
    }
    if (scenario.replicates == 0) return runs;

    const MvnSampler sampler(build_block_toeplitz(BlockToeplitzSpec{scenario.p, scenario.rho}));
    const unsigned outer_threads = scenario.threads == 0 ? default_thread_count() : scenario.threads;

    parallel_for(scenario.replicates, outer_threads, [&](std::size_t r) {
        const auto start = std::chrono::steady_clock::now();
        for (auto& run : runs) {
            run.outcomes[r].replicate_id = r;
            run.outcomes[r].method = run.method;
        }
        try {
            const auto data = generate_replicate(scenario, sampler, r);
            const auto design = standardize_columns(data.x);
            LambdaRule rule = scenario.lambda_rule;
            rule.seed = data.seeds.folds;
            SelectOptions options;
            options.mirror.functional = scenario.functional;
            options.mirror.threads = outer_threads > 1 ? 1 : 0;
            const auto pipeline = prepare_pipeline(design, data.y, scenario.family, data.seeds.mirrors, rule, options);
            const double prep_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

            for (auto& run : runs) {
                const auto t0 = std::chrono::steady_clock::now();
                const auto selection =
                    run.method == Method::bgm
                        ? select_from_scores(pipeline.scores, pipeline.initial_fit.coefficients, scenario.kappa_grid,
                                             scenario.q, scenario.threshold_grid)
                        : baseline_from_scores(pipeline.scores, scenario.q, scenario.threshold_grid);
                auto& out = run.outcomes[r];
                out.selected = selection.final_selected;
                const auto fp = evaluate_fdp_power(out.selected, data.truth);
                out.fdp = fp.fdp;
                out.power = fp.power;
                out.tau = selection.final_cutoff.tau;
                out.kappa_max = selection.kappa_max;
                out.wall_time =
                    prep_seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
        } catch (const std::exception& e) {
            for (auto& run : runs) {
                run.outcomes[r].failed = true;
                run.outcomes[r].error = e.what();
            }
        }
    });

    for (auto& run : runs) run.summary = summarize(run.outcomes);
    return runs;
}

ReplicateRun run_replicates(const SimScenario& scenario, Method method)
{
    const Method one[] = {method};
    return std::move(run_replicates(scenario, one).front());
}

} // namespace bgm
