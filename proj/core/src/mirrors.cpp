#include "bgm/mirrors.hpp"

#include "bgm/error.hpp"
#include "bgm/parallel.hpp"
#include "bgm/rng.hpp"

#include <cmath>
#include <string>

namespace bgm {

namespace {

constexpr const char* kModule = "mirrors";

Eigen::VectorXd standard_normal(Eigen::Index n, std::uint64_t seed)
{
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

WarmStart split_warm_start(const WarmStart& base, std::size_t feature)
{
    const auto p = base.coefficients.size();
    const auto j = static_cast<Eigen::Index>(feature);
    WarmStart warm;
    warm.intercept = base.intercept;
    warm.coefficients.resize(p + 1);
    warm.coefficients[0] = 0.5 * base.coefficients[j];
    warm.coefficients[1] = 0.5 * base.coefficients[j];
    warm.coefficients.segment(2, j) = base.coefficients.head(j);
    warm.coefficients.tail(p - 1 - j) = base.coefficients.tail(p - 1 - j);
    return warm;
}

} // namespace

MirrorNoise draw_mirror_noise(std::size_t feature, Eigen::Index n, std::uint64_t master_seed)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, kModule, "noise length must be >= 1");
    MirrorNoise noise;
    noise.feature = feature;
    noise.stream_seed = derive_seed(master_seed, {static_cast<std::uint64_t>(feature)});
    noise.zeta1 = standard_normal(n, derive_seed(noise.stream_seed, {1}));
    noise.zeta2 = standard_normal(n, derive_seed(noise.stream_seed, {2}));
    return noise;
}

MirrorDesign build_mirror_design(const StandardizedDesign& design, const MirrorNoise& noise, int copy)
{
    const auto n = design.rows();
    const auto p = design.cols();
    const auto j = static_cast<Eigen::Index>(noise.feature);
    if (j >= p) throw Error(ErrorKind::IndexOutOfRange, kModule, "mirror feature index out of range");
    if (copy != 1 && copy != 2) throw Error(ErrorKind::InvalidArgument, kModule, "mirror copy must be 1 or 2");
    const Eigen::VectorXd& zeta = copy == 1 ? noise.zeta1 : noise.zeta2;
    if (zeta.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "mirror noise length does not match design rows");
    }

    const auto& x = design.values();
    MirrorDesign out;
    out.feature = noise.feature;
    out.copy = copy;
    out.values.resize(n, p + 1);
    out.values.col(0) = x.col(j) + zeta;
    out.values.col(1) = x.col(j) - zeta;
    out.values.middleCols(2, j) = x.leftCols(j);
    out.values.rightCols(p - 1 - j) = x.rightCols(p - 1 - j);
    return out;
}

MirrorPair fit_mirror_pair(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                           std::size_t feature, const MirrorNoise& noise, double lambda,
                           const std::optional<WarmStart>& base_fit, const SolverOptions& options)
{
    std::optional<WarmStart> warm;
    if (base_fit) {
        if (base_fit->coefficients.size() != design.cols()) {
            throw Error(ErrorKind::DimensionMismatch, kModule, "warm start length does not match design width");
        }
        warm = split_warm_start(*base_fit, feature);
    }

    MirrorPair pair;
    for (int copy = 1; copy <= 2; ++copy) {
        LassoFit fit;
        try {
            const auto mirror = build_mirror_design(design, noise, copy);
            fit = fit_lasso(family, mirror.values, y, lambda, warm, options);
        } catch (const Error& e) {
            throw Error(e.kind(), kModule,
                        "feature " + std::to_string(feature + 1) + " copy " + std::to_string(copy) + ": " + e.what());
        }
        pair.converged = pair.converged && fit.converged;
        (copy == 1 ? pair.plus1 : pair.plus2) = fit.coefficients[0];
        (copy == 1 ? pair.minus1 : pair.minus2) = fit.coefficients[1];
    }
    return pair;
}

double mirror_score(double plus, double minus, ScoreFunctional functional)
{
    if (functional == ScoreFunctional::sum) return std::abs(plus) + std::abs(minus);
    return 4.0 * std::abs(plus * minus);
}

FeatureMirrorScores compute_all_scores(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                       double lambda, std::uint64_t master_seed,
                                       const std::optional<WarmStart>& base_fit, const MirrorOptions& options)
{
    const auto p = design.cols();
    FeatureMirrorScores scores;
    scores.w1.resize(p);
    scores.w2.resize(p);
    scores.beta_plus1.resize(p);
    scores.beta_minus1.resize(p);
    scores.beta_plus2.resize(p);
    scores.beta_minus2.resize(p);
    scores.noise_seeds.resize(static_cast<std::size_t>(p));
    std::vector<char> converged(static_cast<std::size_t>(p), 1);
    std::vector<std::string> failures(static_cast<std::size_t>(p));

    parallel_for(static_cast<std::size_t>(p), options.threads, [&](std::size_t j) {
        try {
            const auto noise = draw_mirror_noise(j, design.rows(), master_seed);
            const auto pair = fit_mirror_pair(design, y, family, j, noise, lambda, base_fit, options.solver);
            const auto k = static_cast<Eigen::Index>(j);
            scores.beta_plus1[k] = pair.plus1;
            scores.beta_minus1[k] = pair.minus1;
            scores.beta_plus2[k] = pair.plus2;
            scores.beta_minus2[k] = pair.minus2;
            scores.w1[k] = mirror_score(pair.plus1, pair.minus1, options.functional);
            scores.w2[k] = mirror_score(pair.plus2, pair.minus2, options.functional);
            scores.noise_seeds[j] = noise.stream_seed;
            converged[j] = pair.converged ? 1 : 0;
        } catch (const std::exception& e) {
            failures[j] = e.what();
        }
    });

    std::string message;
    std::size_t failed = 0;
    for (std::size_t j = 0; j < failures.size(); ++j) {
        if (failures[j].empty()) continue;
        ++failed;
        if (failed <= 5) message += "\n  " + failures[j];
    }
    if (failed > 0) {
        throw Error(ErrorKind::SolverFailure, kModule,
                    std::to_string(failed) + " feature(s) failed:" + message);
    }
    for (char c : converged) scores.nonconverged += c ? 0 : 1;
    return scores;
}

} // namespace bgm
