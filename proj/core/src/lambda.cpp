#include "bgm/lambda.hpp"

#include "bgm/error.hpp"
#include "bgm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bgm {

namespace {

constexpr const char* kModule = "glm_solvers";

double held_out_deviance(Family family, double y, double eta)
{
    if (family == Family::linear) {
        const double e = y - eta;
        return e * e;
    }
    const double p = std::clamp(inverse_link(Family::logistic, eta), 1e-15, 1.0 - 1e-15);
    return -2.0 * (y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
    return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
    return out;
}

} // namespace

LambdaRule LambdaRule::fixed(double value)
{
    LambdaRule rule;
    rule.mode = Mode::fixed;
    rule.value = value;
    return rule;
}

LambdaRule LambdaRule::cross_validated(int folds, int grid_size, double grid_ratio, std::uint64_t seed)
{
    LambdaRule rule;
    rule.mode = Mode::cross_validated;
    rule.folds = folds;
    rule.grid_size = grid_size;
    rule.grid_ratio = grid_ratio;
    rule.seed = seed;
    return rule;
}

void LambdaRule::validate() const
{
    if (mode == Mode::fixed) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw Error(ErrorKind::InvalidArgument, kModule, "fixed lambda must be finite and >= 0");
        }
        return;
    }
    if (folds < 2) throw Error(ErrorKind::InvalidArgument, kModule, "cross-validation needs folds >= 2");
    if (grid_size < 10) throw Error(ErrorKind::InvalidArgument, kModule, "lambda grid needs >= 10 points");
    if (!(grid_ratio > 0.0 && grid_ratio < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "grid_ratio must lie in (0, 1)");
    }
}

std::vector<double> lambda_grid(double lambda_max, int size, double ratio)
{
    std::vector<double> grid(static_cast<std::size_t>(size));
    const double log_ratio = std::log(ratio);
    for (int k = 0; k < size; ++k) {
        grid[static_cast<std::size_t>(k)] =
            lambda_max * std::exp(log_ratio * static_cast<double>(k) / static_cast<double>(size - 1));
    }
    return grid;
}

std::vector<int> assign_folds(Eigen::Index n, int folds, std::uint64_t seed)
{
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(derive_seed(seed, {0xf01dULL}));
    // Fisher-Yates with an explicit draw so the permutation is fixed by the seed.
    for (std::size_t i = order.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }
    std::vector<int> fold(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < order.size(); ++k) {
        fold[static_cast<std::size_t>(order[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
    return fold;
}

CrossValidationCurve cross_validate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family,
                                    const LambdaRule& rule, const SolverOptions& options)
{
    rule.validate();
    check_response(family, y, x.rows());
    if (x.rows() < rule.folds) {
        throw Error(ErrorKind::InvalidArgument, kModule, "fewer rows than cross-validation folds");
    }

    CrossValidationCurve curve;
    const double top = lambda_max(x, y);
    curve.lambdas = lambda_grid(top > 0.0 ? top : 1.0, rule.grid_size, rule.grid_ratio);
    std::vector<double> total(curve.lambdas.size(), 0.0);

    const auto fold_of = assign_folds(x.rows(), rule.folds, rule.seed);
    for (int k = 0; k < rule.folds; ++k) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            (fold_of[static_cast<std::size_t>(i)] == k ? test : train).push_back(i);
        }
        const Eigen::MatrixXd x_train = take_rows(x, train);
        const Eigen::VectorXd y_train = take(y, train);
        const Eigen::MatrixXd x_test = take_rows(x, test);
        const Eigen::VectorXd y_test = take(y, test);
        if (family == Family::logistic) {
            const double s = y_train.sum();
            if (s == 0.0 || s == static_cast<double>(y_train.size())) {
                throw Error(ErrorKind::InvalidArgument, kModule,
                            "a cross-validation training fold contains a single class");
            }
        }

        std::optional<WarmStart> warm;
        for (std::size_t l = 0; l < curve.lambdas.size(); ++l) {
            const LassoFit fit = fit_lasso(family, x_train, y_train, curve.lambdas[l], warm, options);
            warm = WarmStart{fit.coefficients, fit.intercept};
            const Eigen::VectorXd eta = (x_test * fit.coefficients).array() + fit.intercept;
            for (Eigen::Index i = 0; i < eta.size(); ++i) total[l] += held_out_deviance(family, y_test[i], eta[i]);
        }
    }

    curve.mean_deviance.resize(total.size());
    const double n = static_cast<double>(x.rows());
    for (std::size_t l = 0; l < total.size(); ++l) curve.mean_deviance[l] = total[l] / n;
    // First minimum along the decreasing grid, so ties go to the larger lambda.
    curve.best = static_cast<std::size_t>(
        std::min_element(curve.mean_deviance.begin(), curve.mean_deviance.end()) - curve.mean_deviance.begin());
    return curve;
}

double select_lambda(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                     const LambdaRule& rule, const SolverOptions& options)
{
    rule.validate();
    if (rule.mode == LambdaRule::Mode::fixed) return rule.value;
    const auto curve = cross_validate(design.values(), y, family, rule, options);
    return curve.lambdas[curve.best];
}

} // namespace bgm
