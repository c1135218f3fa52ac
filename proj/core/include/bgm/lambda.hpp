#pragma once

#include "bgm/design.hpp"
#include "bgm/lasso.hpp"

#include <cstdint>
#include <vector>

namespace bgm {

/// How the L1 penalty level is chosen: a fixed value, or K-fold
/// cross-validation over a log-spaced grid from lambda_max downwards.
struct LambdaRule {
    enum class Mode { fixed, cross_validated };

    Mode mode = Mode::cross_validated;
    double value = 0.0;
    int folds = 10;
    int grid_size = 50;
    double grid_ratio = 0.01;
    std::uint64_t seed = 0;

    static LambdaRule fixed(double value);
    static LambdaRule cross_validated(int folds = 10, int grid_size = 50, double grid_ratio = 0.01,
                                      std::uint64_t seed = 0);

    /// Throws InvalidArgument when a field is outside its domain.
    void validate() const;
};

/// Log-spaced decreasing grid lambda_max * ratio^(k / (size - 1)), k = 0..size-1.
std::vector<double> lambda_grid(double lambda_max, int size, double ratio);

/// Fold label in [0, folds) for every row; a seeded shuffle dealt round-robin.
std::vector<int> assign_folds(Eigen::Index n, int folds, std::uint64_t seed);

struct CrossValidationCurve {
    std::vector<double> lambdas;
    std::vector<double> mean_deviance;  // +inf where the path stopped early
    std::size_t best = 0;
};

CrossValidationCurve cross_validate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family,
                                    const LambdaRule& rule, const SolverOptions& options = {});

double select_lambda(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                     const LambdaRule& rule, const SolverOptions& options = {});

} // namespace bgm
