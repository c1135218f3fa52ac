#include "bgm/lasso.hpp"

#include "bgm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bgm {

namespace {

constexpr const char* kModule = "glm_solvers";

double softplus(double eta)
{
    return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta)
{
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

bool saturated(double prob)
{
    return prob < 1e-10 || prob > 1.0 - 1e-10;
}

void check_lambda(double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "lambda must be finite and non-negative");
    }
}

std::vector<Eigen::Index> nonzero_indices(const Eigen::VectorXd& b)
{
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        if (b[j] != 0.0) idx.push_back(j);
    }
    return idx;
}

// Coordinate descent on (1/2n) sum_i w_i (r_i)^2 + lambda ||b||_1 where the
// residual r is maintained in place. `xw` holds w-weighted columns (or the
// plain columns when unweighted), `curvature[j]` = sum_i w_i x_ij^2 / n.
class CoordinateDescent {
public:
    CoordinateDescent(const Eigen::MatrixXd& x, const Eigen::MatrixXd& xw,
                      const Eigen::VectorXd& curvature, double lambda)
        : x_(x), xw_(xw), curvature_(curvature), lambda_(lambda),
          inv_n_(1.0 / static_cast<double>(x.rows()))
    {
    }

    template <class Indices>
    double sweep(const Indices& indices, Eigen::VectorXd& b, Eigen::VectorXd& r) const
    {
        double max_change = 0.0;
        for (const auto j : indices) {
            const double c = curvature_[j];
            if (c <= 0.0) continue;
            const double old = b[j];
            const double z = xw_.col(j).dot(r) * inv_n_ + c * old;
            const double updated = soft_threshold(z, lambda_) / c;
            if (updated != old) {
                const double delta = updated - old;
                r.noalias() -= delta * x_.col(j);
                b[j] = updated;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        return max_change;
    }

    // Full sweeps interleaved with sweeps restricted to the active set until a
    // full sweep moves no coefficient by `tol` or more. Returns sweeps used.
    template <class OnSweep, class Intercept>
    int solve(Eigen::VectorXd& b, Eigen::VectorXd& r, int max_sweeps, double tol,
              bool& converged, Intercept&& update_intercept, OnSweep&& on_sweep) const
    {
        std::vector<Eigen::Index> all(static_cast<std::size_t>(b.size()));
        for (Eigen::Index j = 0; j < b.size(); ++j) all[static_cast<std::size_t>(j)] = j;

        int sweeps = 0;
        converged = false;
        while (sweeps < max_sweeps) {
            double change = update_intercept(r);
            change = std::max(change, sweep(all, b, r));
            ++sweeps;
            on_sweep();
            if (change < tol) {
                converged = true;
                break;
            }
            const auto active = nonzero_indices(b);
            while (sweeps < max_sweeps) {
                double c = update_intercept(r);
                c = std::max(c, sweep(active, b, r));
                ++sweeps;
                on_sweep();
                if (c < tol) break;
            }
        }
        return sweeps;
    }

private:
    const Eigen::MatrixXd& x_;
    const Eigen::MatrixXd& xw_;
    const Eigen::VectorXd& curvature_;
    double lambda_;
    double inv_n_;
};

void check_shapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const std::optional<WarmStart>& warm_start)
{
    if (x.rows() == 0 || x.cols() == 0) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "empty design");
    }
    if (y.size() != x.rows()) {
        throw Error(ErrorKind::DimensionMismatch, kModule,
                    "response length " + std::to_string(y.size()) + " does not match " +
                        std::to_string(x.rows()) + " rows");
    }
    if (warm_start && warm_start->coefficients.size() != x.cols()) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "warm start has wrong length");
    }
}

} // namespace

std::string_view to_string(Family family)
{
    return family == Family::linear ? "linear" : "logistic";
}

Family parse_family(std::string_view text)
{
    if (text == "linear") return Family::linear;
    if (text == "logistic") return Family::logistic;
    throw Error(ErrorKind::Config, "cli_io", "unknown family '" + std::string(text) + "'");
}

double inverse_link(Family family, double eta)
{
    return family == Family::linear ? eta : sigmoid(eta);
}

double soft_threshold(double z, double lambda)
{
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

void check_response(Family family, const Eigen::VectorXd& y, Eigen::Index n)
{
    if (y.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, kModule, "response length does not match design rows");
    }
    if (!y.allFinite()) {
        throw Error(ErrorKind::BadResponseValues, kModule, "response contains non-finite values");
    }
    if (family == Family::logistic) {
        bool has0 = false;
        bool has1 = false;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            if (y[i] == 0.0) {
                has0 = true;
            } else if (y[i] == 1.0) {
                has1 = true;
            } else {
                throw Error(ErrorKind::BadResponseValues, kModule,
                            "logistic response must be 0/1 (row " + std::to_string(i + 1) + ")");
            }
        }
        if (!has0 || !has1) {
            throw Error(ErrorKind::BadResponseValues, kModule, "logistic response needs both classes");
        }
    }
}

double penalized_objective(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double intercept, const Eigen::VectorXd& coefficients, double lambda)
{
    const double n = static_cast<double>(x.rows());
    const Eigen::VectorXd eta = (x * coefficients).array() + intercept;
    double loss = 0.0;
    if (family == Family::linear) {
        loss = 0.5 * (y - eta).squaredNorm() / n;
    } else {
        for (Eigen::Index i = 0; i < eta.size(); ++i) loss += softplus(eta[i]) - y[i] * eta[i];
        loss /= n;
    }
    return loss + lambda * coefficients.lpNorm<1>();
}

double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    const double n = static_cast<double>(x.rows());
    const Eigen::VectorXd yc = y.array() - y.mean();
    const Eigen::RowVectorXd means = x.colwise().mean();
    double best = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double g = (x.col(j).array() - means[j]).matrix().dot(yc) / n;
        best = std::max(best, std::abs(g));
    }
    return best;
}

LassoFit lasso_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                      const std::optional<WarmStart>& warm_start, const SolverOptions& options)
{
    check_shapes(x, y, warm_start);
    check_lambda(lambda);
    const double n = static_cast<double>(x.rows());

    const Eigen::RowVectorXd means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - means;
    const double ybar = y.mean();
    const Eigen::VectorXd curvature = xc.colwise().squaredNorm().transpose() / n;

    LassoFit fit;
    fit.lambda = lambda;
    fit.coefficients = warm_start ? warm_start->coefficients : Eigen::VectorXd::Zero(x.cols());
    Eigen::VectorXd r = (y.array() - ybar).matrix() - xc * fit.coefficients;

    auto objective = [&] { return 0.5 * r.squaredNorm() / n + lambda * fit.coefficients.lpNorm<1>(); };
    if (options.record_trace) fit.objective_trace.push_back(objective());

    const CoordinateDescent cd(xc, xc, curvature, lambda);
    fit.iterations = cd.solve(
        fit.coefficients, r, options.max_sweeps, options.tolerance, fit.converged,
        [](Eigen::VectorXd&) { return 0.0; },
        [&] {
            if (options.record_trace) fit.objective_trace.push_back(objective());
        });

    fit.intercept = ybar - means.dot(fit.coefficients);
    fit.objective = objective();
    return fit;
}

LassoFit lasso_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                        const std::optional<WarmStart>& warm_start, const SolverOptions& options)
{
    check_shapes(x, y, warm_start);
    check_lambda(lambda);
    check_response(Family::logistic, y, x.rows());
    const double n = static_cast<double>(x.rows());
    const auto rows = x.rows();

    const Eigen::RowVectorXd means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - means;

    LassoFit fit;
    fit.lambda = lambda;
    Eigen::VectorXd b = warm_start ? warm_start->coefficients : Eigen::VectorXd::Zero(x.cols());
    double b0;  // intercept on the centred columns
    if (warm_start) {
        b0 = warm_start->intercept + means.dot(b);
    } else {
        const double ybar = y.mean();
        b0 = std::log(ybar / (1.0 - ybar));
    }

    auto objective = [&](double intercept, const Eigen::VectorXd& coef) {
        const Eigen::VectorXd eta = (xc * coef).array() + intercept;
        double loss = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) loss += softplus(eta[i]) - y[i] * eta[i];
        return loss / n + lambda * coef.lpNorm<1>();
    };

    double current = objective(b0, b);
    if (options.record_trace) fit.objective_trace.push_back(current);

    Eigen::VectorXd eta(rows), prob(rows), w(rows), r(rows);
    Eigen::MatrixXd xw(rows, x.cols());
    Eigen::VectorXd curvature(x.cols());

    for (int outer = 0; outer < options.max_outer; ++outer) {
        eta = (xc * b).array() + b0;
        bool all_saturated = true;
        for (Eigen::Index i = 0; i < rows; ++i) {
            prob[i] = sigmoid(eta[i]);
            if (!saturated(prob[i])) all_saturated = false;
            w[i] = std::max(prob[i] * (1.0 - prob[i]), 1e-12);
            r[i] = (y[i] - prob[i]) / w[i];
        }
        if (all_saturated) {
            fit.separated = true;
            break;
        }
        xw = xc.array().colwise() * w.array();
        curvature = (xw.array() * xc.array()).colwise().sum().transpose() / n;
        const double wsum = w.sum();

        Eigen::VectorXd nb = b;
        double nb0 = b0;
        auto update_intercept = [&](Eigen::VectorXd& res) {
            const double d = w.dot(res) / wsum;
            res.array() -= d;
            nb0 += d;
            return std::abs(d);
        };
        bool inner_converged = false;
        const CoordinateDescent cd(xc, xw, curvature, lambda);
        cd.solve(nb, r, options.max_inner, options.inner_tolerance, inner_converged, update_intercept, [] {});

        // Step halving along the proximal Newton direction.
        const Eigen::VectorXd step_b = nb - b;
        const double step_b0 = nb0 - b0;
        double scale = 1.0;
        double candidate = objective(nb0, nb);
        int halvings = 0;
        while (candidate > current + 1e-13 * std::max(1.0, std::abs(current)) && halvings < 40) {
            scale *= 0.5;
            ++halvings;
            nb = b + scale * step_b;
            nb0 = b0 + scale * step_b0;
            candidate = objective(nb0, nb);
        }
        ++fit.iterations;
        if (candidate > current) {
            // No descent is available along the Newton direction.
            if (options.record_trace) fit.objective_trace.push_back(current);
            fit.converged = true;
            break;
        }

        const double change = std::max((nb - b).cwiseAbs().maxCoeff(), std::abs(nb0 - b0));
        b = nb;
        b0 = nb0;
        current = candidate;
        if (options.record_trace) fit.objective_trace.push_back(current);
        if (change < options.outer_tolerance) {
            fit.converged = true;
            break;
        }
    }

    if (!fit.separated) {
        eta = (xc * b).array() + b0;
        fit.separated = eta.unaryExpr([](double e) { return saturated(sigmoid(e)); }).all();
    }
    fit.coefficients = b;
    fit.intercept = b0 - means.dot(b);
    fit.objective = current;
    return fit;
}

LassoFit fit_lasso(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                   const std::optional<WarmStart>& warm_start, const SolverOptions& options)
{
    return family == Family::linear ? lasso_linear(x, y, lambda, warm_start, options)
                                    : lasso_logistic(x, y, lambda, warm_start, options);
}

} // namespace bgm
