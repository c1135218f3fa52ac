#pragma once

#include "bgm/design.hpp"
#include "bgm/lasso.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace bgm {

/// The two independent standard-normal perturbations for one feature.
struct MirrorNoise {
    std::size_t feature = 0;
    Eigen::VectorXd zeta1;
    Eigen::VectorXd zeta2;
    std::uint64_t stream_seed = 0;
};

/// Draws zeta1 and zeta2 for feature j from substreams keyed by
/// (master_seed, j, copy). The result depends on nothing else.
MirrorNoise draw_mirror_noise(std::size_t feature, Eigen::Index n, std::uint64_t master_seed);

/// n x (p + 1) augmented design with columns (X_j + zeta, X_j - zeta, X_{-j}).
/// The mirror columns are not re-standardized.
struct MirrorDesign {
    Eigen::MatrixXd values;
    std::size_t feature = 0;
    int copy = 1;
};

MirrorDesign build_mirror_design(const StandardizedDesign& design, const MirrorNoise& noise, int copy);

/// Leading two coefficients of the augmented fits for copy 1 and copy 2.
struct MirrorPair {
    double plus1 = 0.0;
    double minus1 = 0.0;
    double plus2 = 0.0;
    double minus2 = 0.0;
    bool converged = true;
};

/// Fits both augmented models for feature j. When `base_fit` is given the
/// solver is warm-started from it with coefficient j split evenly across the
/// two mirror columns.
MirrorPair fit_mirror_pair(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                           std::size_t feature, const MirrorNoise& noise, double lambda,
                           const std::optional<WarmStart>& base_fit = std::nullopt,
                           const SolverOptions& options = {});

enum class ScoreFunctional {
    product,  // 4 |b+ b-|
    sum,      // |b+| + |b-|
};

double mirror_score(double plus, double minus, ScoreFunctional functional = ScoreFunctional::product);

struct FeatureMirrorScores {
    Eigen::VectorXd w1;
    Eigen::VectorXd w2;
    Eigen::VectorXd beta_plus1;
    Eigen::VectorXd beta_minus1;
    Eigen::VectorXd beta_plus2;
    Eigen::VectorXd beta_minus2;
    std::vector<std::uint64_t> noise_seeds;
    std::size_t nonconverged = 0;  // mirror fits that hit their iteration cap
};

struct MirrorOptions {
    ScoreFunctional functional = ScoreFunctional::product;
    unsigned threads = 0;  // 0: hardware concurrency
    SolverOptions solver;
};

/// Runs fit_mirror_pair for every feature and assembles (W1, W2). Fails with a
/// SolverFailure listing every feature whose fit threw.
FeatureMirrorScores compute_all_scores(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                       double lambda, std::uint64_t master_seed,
                                       const std::optional<WarmStart>& base_fit = std::nullopt,
                                       const MirrorOptions& options = {});

} // namespace bgm
