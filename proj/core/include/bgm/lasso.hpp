#pragma once

#include "bgm/design.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace bgm {

enum class Family { linear, logistic };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

/// Inverse link: identity for linear, logistic sigmoid for logistic.
double inverse_link(Family family, double eta);

struct SolverOptions {
    int max_sweeps = 10000;         // linear coordinate-descent sweeps
    double tolerance = 1e-7;        // max |coefficient change| per sweep
    int max_outer = 100;            // logistic quadratic approximations
    int max_inner = 1000;           // sweeps per quadratic approximation
    double outer_tolerance = 1e-6;  // logistic outer-loop coefficient change
    double inner_tolerance = 1e-9;
    bool record_trace = false;      // keep the penalized objective per sweep / outer step
};

struct WarmStart {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
};

struct LassoFit {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    int iterations = 0;
    bool converged = false;
    bool separated = false;  // logistic only: every fitted probability saturated
    double objective = 0.0;
    std::vector<double> objective_trace;
};

double soft_threshold(double z, double lambda);

/// min (1/2n)||y - b0 - X b||^2 + lambda ||b||_1 with an unpenalized intercept.
/// Columns of `x` need not be centred or scaled.
LassoFit lasso_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                      const std::optional<WarmStart>& warm_start = std::nullopt,
                      const SolverOptions& options = {});

/// min (1/n) sum[log(1 + exp(eta_i)) - y_i eta_i] + lambda ||b||_1, eta = b0 + X b,
/// by proximal Newton steps (weighted coordinate descent on each quadratic
/// approximation) with step halving to keep the objective non-increasing.
LassoFit lasso_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                        const std::optional<WarmStart>& warm_start = std::nullopt,
                        const SolverOptions& options = {});

LassoFit fit_lasso(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                   const std::optional<WarmStart>& warm_start = std::nullopt,
                   const SolverOptions& options = {});

inline LassoFit lasso_linear(const StandardizedDesign& design, const Eigen::VectorXd& y, double lambda,
                             const std::optional<WarmStart>& warm_start = std::nullopt,
                             const SolverOptions& options = {})
{
    return lasso_linear(design.values(), y, lambda, warm_start, options);
}

inline LassoFit lasso_logistic(const StandardizedDesign& design, const Eigen::VectorXd& y, double lambda,
                               const std::optional<WarmStart>& warm_start = std::nullopt,
                               const SolverOptions& options = {})
{
    return lasso_logistic(design.values(), y, lambda, warm_start, options);
}

/// Penalized objective of the family at (intercept, coefficients).
double penalized_objective(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double intercept, const Eigen::VectorXd& coefficients, double lambda);

/// Smallest lambda at which every slope is zero: max_j |x_j^T (y - ybar)| / n
/// with x_j centred.
double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Validates the response for a family (length, finite, binary with both
/// classes for logistic). Throws InvalidArgument / BadResponseValues.
void check_response(Family family, const Eigen::VectorXd& y, Eigen::Index n);

} // namespace bgm
