#include "bgm/selector.hpp"

#include "bgm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bgm {

namespace {

constexpr const char* kModule = "bgm_selector";

void check_same_length(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what)
{
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, kModule, std::string(what) + " lengths differ");
    }
}

KappaRecord run_kappa(const FeatureMirrorScores& scores, const WeightVector& weights, double q, ThresholdGrid grid,
                      BgmStatVector& stats, CutoffResult& cutoff)
{
    stats = bgm_statistics(scores, weights);
    cutoff = compute_cutoff(stats, q, grid);
    return KappaRecord{weights.kappa, cutoff.tau, cutoff.selected};
}

} // namespace

void validate_q(double q)
{
    if (!(q > 0.0 && q < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "FDR level q must lie in (0, 1)");
    }
}

void validate_kappa_grid(std::span<const double> kappa_grid)
{
    if (kappa_grid.empty()) throw Error(ErrorKind::InvalidKappa, kModule, "kappa grid is empty");
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        if (!(kappa_grid[i] >= 1.0) || !std::isfinite(kappa_grid[i])) {
            throw Error(ErrorKind::InvalidKappa, kModule, "kappa values must be finite and >= 1");
        }
        if (i > 0 && !(kappa_grid[i] > kappa_grid[i - 1])) {
            throw Error(ErrorKind::InvalidKappa, kModule, "kappa grid must be strictly ascending");
        }
    }
}

WeightVector estimate_weights(const Eigen::VectorXd& beta_hat, double kappa)
{
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
        throw Error(ErrorKind::InvalidKappa, kModule, "kappa must be finite and >= 1");
    }
    WeightVector weights;
    weights.kappa = kappa;
    weights.source_beta = beta_hat;
    weights.gamma.resize(beta_hat.size());
    for (Eigen::Index j = 0; j < beta_hat.size(); ++j) {
        weights.gamma[j] = 1.0 / std::pow(std::abs(beta_hat[j]) + 1.0, kappa);
    }
    return weights;
}

BgmStatVector bgm_statistics(const FeatureMirrorScores& scores, const WeightVector& weights)
{
    check_same_length(scores.w1, scores.w2, "mirror score");
    check_same_length(scores.w1, weights.gamma, "score and weight");
    BgmStatVector stats;
    stats.m_hat = scores.w1 - weights.gamma.cwiseProduct(scores.w2);
    stats.gamma = weights.gamma;
    stats.w2 = scores.w2;
    stats.kappa = weights.kappa;
    return stats;
}

FdpComponents fdp_components(const BgmStatVector& stats, double t)
{
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidThreshold, kModule, "threshold must be positive");
    check_same_length(stats.m_hat, stats.gamma, "statistic and weight");
    check_same_length(stats.m_hat, stats.w2, "statistic and score");

    FdpComponents c;
    for (Eigen::Index j = 0; j < stats.m_hat.size(); ++j) {
        const double m = stats.m_hat[j];
        const double g = stats.gamma[j];
        const double upper = t / g;
        if (m < -t) ++c.v1;
        if (t <= m && m < upper) ++c.v2;
        if (upper <= m && m <= upper + (1.0 / g - g) * stats.w2[j]) ++c.v3;
        if (m > t) ++c.above;
    }
    c.denominator = std::max<std::size_t>(c.above, 1);
    return c;
}

std::string_view to_string(ThresholdGrid grid)
{
    return grid == ThresholdGrid::ranked ? "ranked" : "exact";
}

ThresholdGrid parse_threshold_grid(std::string_view text)
{
    if (text == "ranked") return ThresholdGrid::ranked;
    if (text == "exact") return ThresholdGrid::exact;
    throw Error(ErrorKind::InvalidArgument, kModule, "unknown threshold grid '" + std::string(text) + "'");
}

namespace {

std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<double> ranked_thresholds(const BgmStatVector& stats)
{
    std::vector<double> values;
    for (Eigen::Index j = 0; j < stats.m_hat.size(); ++j) {
        if (stats.m_hat[j] != 0.0) values.push_back(std::abs(stats.m_hat[j]));
    }
    values = sorted_unique(std::move(values));
    if (values.empty()) return {};

    double gap = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) gap = std::min(gap, values[k] - values[k - 1]);
    const double eta = 0.5 * gap;

    std::vector<double> candidates;
    candidates.reserve(values.size());
    for (double v : values) {
        const double t = v - eta;
        if (t > 0.0 && (candidates.empty() || t > candidates.back())) candidates.push_back(t);
    }
    return candidates;
}

std::vector<double> interval_thresholds(const BgmStatVector& stats)
{
    std::vector<double> breaks;
    breaks.reserve(2 * static_cast<std::size_t>(stats.m_hat.size()));
    for (Eigen::Index j = 0; j < stats.m_hat.size(); ++j) {
        const double m = stats.m_hat[j];
        if (m != 0.0) breaks.push_back(std::abs(m));
        if (m > 0.0 && stats.gamma[j] < 1.0) {
            const double scaled = stats.gamma[j] * m;
            if (scaled > 0.0) breaks.push_back(scaled);
        }
    }
    breaks = sorted_unique(std::move(breaks));

    std::vector<double> candidates;
    candidates.reserve(breaks.size());
    double previous = 0.0;
    for (double b : breaks) {
        const double mid = 0.5 * (previous + b);
        if (mid > previous) candidates.push_back(mid);
        previous = b;
    }
    return candidates;
}

} // namespace

std::vector<double> candidate_thresholds(const BgmStatVector& stats, ThresholdGrid grid)
{
    return grid == ThresholdGrid::ranked ? ranked_thresholds(stats) : interval_thresholds(stats);
}

std::vector<std::size_t> select_above(const Eigen::VectorXd& m_hat, double tau)
{
    std::vector<std::size_t> selected;
    for (Eigen::Index j = 0; j < m_hat.size(); ++j) {
        if (m_hat[j] > tau) selected.push_back(static_cast<std::size_t>(j));
    }
    return selected;
}

CutoffResult compute_cutoff(const BgmStatVector& stats, double q, ThresholdGrid grid)
{
    validate_q(q);
    CutoffResult result;
    result.q = q;
    bool found = false;
    for (double t : candidate_thresholds(stats, grid)) {
        const auto counts = fdp_components(stats, t);
        const double ratio = counts.ratio();
        result.fdp_curve.push_back(CutoffPoint{t, counts, ratio});
        if (!found && counts.above > 0 && ratio <= q) {
            found = true;
            result.tau = t;
        }
    }
    if (found) result.selected = select_above(stats.m_hat, result.tau);
    return result;
}

BgmSelection select_from_scores(const FeatureMirrorScores& scores, const Eigen::VectorXd& beta_hat,
                                std::span<const double> kappa_grid, double q, ThresholdGrid grid)
{
    validate_kappa_grid(kappa_grid);
    validate_q(q);
    check_same_length(scores.w1, beta_hat, "score and coefficient");

    BgmSelection selection;
    std::size_t best_size = 0;
    for (std::size_t k = 0; k < kappa_grid.size(); ++k) {
        BgmStatVector stats;
        CutoffResult cutoff;
        selection.records.push_back(run_kappa(scores, estimate_weights(beta_hat, kappa_grid[k]), q, grid, stats, cutoff));
        const auto size = selection.records.back().selected.size();
        if (k == 0 || size > best_size) {
            best_size = size;
            selection.kappa_index = k;
            selection.final_stats = std::move(stats);
            selection.final_cutoff = std::move(cutoff);
        }
    }
    selection.kappa_max = selection.records[selection.kappa_index].kappa;
    selection.final_selected = selection.records[selection.kappa_index].selected;
    return selection;
}

BgmSelection baseline_from_scores(const FeatureMirrorScores& scores, double q, ThresholdGrid grid)
{
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(scores.w1.size());
    const double unit[] = {1.0};
    return select_from_scores(scores, zeros, unit, q, grid);
}

BgmPipeline prepare_pipeline(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                             std::uint64_t master_seed, const LambdaRule& lambda_rule, const SelectOptions& options)
{
    check_response(family, y, design.rows());
    BgmPipeline pipeline;
    pipeline.lambda = select_lambda(design, y, family, lambda_rule, options.solver);
    pipeline.initial_fit = fit_lasso(family, design.values(), y, pipeline.lambda, std::nullopt, options.solver);
    pipeline.scores = compute_all_scores(design, y, family, pipeline.lambda, master_seed,
                                         WarmStart{pipeline.initial_fit.coefficients, pipeline.initial_fit.intercept},
                                         options.mirror);
    return pipeline;
}

BgmSelection self_guiding_select(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                 std::span<const double> kappa_grid, double q, std::uint64_t master_seed,
                                 const LambdaRule& lambda_rule, const SelectOptions& options)
{
    validate_kappa_grid(kappa_grid);
    validate_q(q);
    const auto pipeline = prepare_pipeline(design, y, family, master_seed, lambda_rule, options);
    return select_from_scores(pipeline.scores, pipeline.initial_fit.coefficients, kappa_grid, q,
                              options.threshold_grid);
}

BgmSelection symmetric_baseline_select(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                       double q, std::uint64_t master_seed, const LambdaRule& lambda_rule,
                                       const SelectOptions& options)
{
    validate_q(q);
    const auto pipeline = prepare_pipeline(design, y, family, master_seed, lambda_rule, options);
    return baseline_from_scores(pipeline.scores, q, options.threshold_grid);
}

} // namespace bgm
