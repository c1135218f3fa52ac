#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace bgm::testing {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937 gen(static_cast<std::uint32_t>(seed * 2654435761u + 17u));
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(gen);
    return m;
}

Eigen::MatrixXd orthonormal_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed)
{
    Eigen::MatrixXd g = gaussian_matrix(n, p, seed);
    g.rowwise() -= g.colwise().mean();
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(n, p);
    // Householder Q columns stay orthogonal to the ones vector because g was centred
    return q * std::sqrt(static_cast<double>(n));
}

double kkt_violation(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LassoFit& fit,
                     double lambda)
{
    const double n = static_cast<double>(x.rows());
    Eigen::VectorXd residual(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double eta = fit.intercept + x.row(i).dot(fit.coefficients);
        const double mu = family == Family::linear ? eta : 1.0 / (1.0 + std::exp(-eta));
        residual[i] = y[i] - mu;
    }
    // gradient of the smooth part is -X^T r / n
    double worst = std::abs(residual.sum() / n);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double g = -x.col(j).dot(residual) / n;
        const double b = fit.coefficients[j];
        const double v = b == 0.0 ? std::max(0.0, std::abs(g) - lambda) : std::abs(g + lambda * (b > 0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a.col(0).setOnes();
    a.rightCols(x.cols()) = x;
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(y);
    return OlsFit{sol[0], sol.tail(x.cols())};
}

namespace {

double logistic_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double b0, double b1, double b2,
                          double lambda)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double eta = b0 + b1 * x(i, 0) + b2 * x(i, 1);
        total += std::log1p(std::exp(-std::abs(eta))) + std::max(eta, 0.0) - y[i] * eta;
    }
    return total / static_cast<double>(x.rows()) + lambda * (std::abs(b1) + std::abs(b2));
}

std::vector<double> axis(double centre, double half, int steps, bool with_zero)
{
    std::vector<double> v;
    for (int a = -steps; a <= steps; ++a) v.push_back(centre + half * a / steps);
    if (with_zero) v.push_back(0.0);
    return v;
}

} // namespace

GridFit logistic_grid_search(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda)
{
    double c[3] = {0.0, 0.0, 0.0};
    double half = 4.0;
    const int steps = 20;
    for (int round = 0; round < 25; ++round) {
        double best = std::numeric_limits<double>::infinity();
        double arg[3] = {c[0], c[1], c[2]};
        const auto a0 = axis(c[0], half, steps, false);
        const auto a1 = axis(c[1], half, steps, true);
        const auto a2 = axis(c[2], half, steps, true);
        for (double t0 : a0)
            for (double t1 : a1)
                for (double t2 : a2) {
                    const double f = logistic_objective(x, y, t0, t1, t2, lambda);
                    if (f < best) {
                        best = f;
                        arg[0] = t0;
                        arg[1] = t1;
                        arg[2] = t2;
                    }
                }
        std::copy(arg, arg + 3, c);
        half *= 0.5;
    }
    return GridFit{c[0], Eigen::Vector2d(c[1], c[2])};
}

NaiveCounts naive_counts(const std::vector<double>& m, const std::vector<double>& gamma, double t)
{
    NaiveCounts c;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (m[j] < -t) c.v1++;
        if (m[j] >= t && m[j] < t / gamma[j]) c.v2++;
        if (m[j] > t) c.above++;
    }
    return c;
}

double dense_scan_cutoff(const std::vector<double>& m, const std::vector<double>& gamma, double q)
{
    std::vector<double> points;
    double top = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        top = std::max(top, std::abs(m[j]));
        points.push_back(std::abs(m[j]));
        points.push_back(std::abs(m[j] * gamma[j]));
    }
    std::sort(points.begin(), points.end());
    std::vector<double> grid;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k] > 0) {
            grid.push_back(points[k]);
            grid.push_back(std::nextafter(points[k], 2.0 * top + 1.0));
        }
        const double lo = k == 0 ? 0.0 : points[k - 1];
        if (points[k] > lo) grid.push_back(0.5 * (lo + points[k]));
    }
    for (int k = 1; k <= 20000; ++k) grid.push_back(top * k / 20000.0);
    std::sort(grid.begin(), grid.end());

    for (double t : grid) {
        if (!(t > 0)) continue;
        const auto c = naive_counts(m, gamma, t);
        if (c.above == 0) continue;
        if (static_cast<double>(c.v1 + c.v2) / std::max(c.above, 1) <= q) return t;
    }
    return std::numeric_limits<double>::infinity();
}

double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, k = 0;
    double d = 0.0;
    while (i < a.size() && k < b.size()) {
        const double v = std::min(a[i], b[k]);
        while (i < a.size() && a[i] == v) ++i;
        while (k < b.size() && b[k] == v) ++k;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(k) / b.size()));
    }
    return d;
}

double ranked_scan_cutoff(const std::vector<double>& m, const std::vector<double>& gamma, double q)
{
    std::vector<double> v;
    for (double x : m)
        if (x != 0.0) v.push_back(std::fabs(x));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) return std::numeric_limits<double>::infinity();
    double eta = v[0] / 2.0;
    for (std::size_t k = 1; k < v.size(); ++k) eta = std::min(eta, (v[k] - v[k - 1]) / 2.0);
    for (double value : v) {
        const double t = value - eta;
        const auto c = naive_counts(m, gamma, t);
        if (c.above > 0 && static_cast<double>(c.v1 + c.v2) / std::max(c.above, 1) <= q) return t;
    }
    return std::numeric_limits<double>::infinity();
}

RandomInstance random_instance(std::mt19937_64& gen, bool unit_gamma)
{
    std::uniform_int_distribution<int> size(1, 50);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::bernoulli_distribution coin(0.3);
    const int p = size(gen);
    RandomInstance inst;
    for (int j = 0; j < p; ++j) {
        // a mix of signals shifted to the right and symmetric nulls
        double m = z(gen);
        if (coin(gen)) m += 3.0;
        inst.m.push_back(m);
        inst.gamma.push_back(unit_gamma ? 1.0 : (coin(gen) ? u(gen) : 1.0));
    }
    return inst;
}

BgmStatVector stats_of(std::vector<double> m, std::vector<double> gamma, std::vector<double> w2)
{
    BgmStatVector s;
    s.m_hat = Eigen::Map<Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    s.gamma = Eigen::Map<Eigen::VectorXd>(gamma.data(), static_cast<Eigen::Index>(gamma.size()));
    if (w2.empty()) w2.assign(m.size(), 0.0);
    s.w2 = Eigen::Map<Eigen::VectorXd>(w2.data(), static_cast<Eigen::Index>(w2.size()));
    return s;
}

double mean(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

} // namespace bgm::testing
