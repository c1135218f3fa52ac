#pragma once

#include "bgm/design.hpp"
#include "bgm/lambda.hpp"
#include "bgm/lasso.hpp"
#include "bgm/mirrors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace bgm {

/// gamma_j = (|beta_j| + 1)^(-kappa).
struct WeightVector {
    Eigen::VectorXd gamma;
    double kappa = 1.0;
    Eigen::VectorXd source_beta;
};

WeightVector estimate_weights(const Eigen::VectorXd& beta_hat, double kappa);

/// M_j = W1_j - gamma_j W2_j together with the inputs the FDP estimate needs.
struct BgmStatVector {
    Eigen::VectorXd m_hat;
    Eigen::VectorXd gamma;
    Eigen::VectorXd w2;
    double kappa = 1.0;
};

BgmStatVector bgm_statistics(const FeatureMirrorScores& scores, const WeightVector& weights);

/// Counts behind the FDP estimate at threshold t:
///   v1 = #{M < -t}
///   v2 = #{t <= M < t / gamma}
///   v3 = #{t / gamma <= M <= t / gamma + (1 / gamma - gamma) W2}
///   denominator = max(#{M > t}, 1)
/// Only v1 + v2 enter the cutoff ratio; v3 is kept as a diagnostic.
struct FdpComponents {
    std::size_t v1 = 0;
    std::size_t v2 = 0;
    std::size_t v3 = 0;
    std::size_t above = 0;  // #{M > t}
    std::size_t denominator = 1;

    double ratio() const { return static_cast<double>(v1 + v2) / static_cast<double>(denominator); }
};

FdpComponents fdp_components(const BgmStatVector& stats, double t);

struct CutoffPoint {
    double t = 0.0;
    FdpComponents counts;
    double ratio = 0.0;
};

struct CutoffResult {
    double tau = std::numeric_limits<double>::infinity();
    double q = 0.1;
    std::vector<CutoffPoint> fdp_curve;
    std::vector<std::size_t> selected;  // 0-based, ascending

    bool feasible() const { return tau != std::numeric_limits<double>::infinity(); }
};

/// Which thresholds the cutoff search evaluates.
///   ranked: t_k = v_k - eta for the distinct positive |M_j| values v_1 < v_2 < ...,
///           eta = half the smallest gap in 0 < v_1 < v_2 < ...
///   exact:  one point inside every interval on which all counts are constant
///           (breakpoints {|M_j|} U {gamma_j M_j : M_j > 0}), so the smallest
///           feasible t over the whole half-line is found.
enum class ThresholdGrid { ranked, exact };

std::string_view to_string(ThresholdGrid grid);
ThresholdGrid parse_threshold_grid(std::string_view text);

std::vector<double> candidate_thresholds(const BgmStatVector& stats, ThresholdGrid grid = ThresholdGrid::ranked);

/// Smallest candidate t with (v1 + v2) / denominator <= q and at least one
/// M_j > t. tau = +inf and an empty selection when no candidate qualifies.
CutoffResult compute_cutoff(const BgmStatVector& stats, double q, ThresholdGrid grid = ThresholdGrid::ranked);

std::vector<std::size_t> select_above(const Eigen::VectorXd& m_hat, double tau);

struct KappaRecord {
    double kappa = 1.0;
    double tau = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> selected;
};

struct BgmSelection {
    std::vector<KappaRecord> records;
    std::size_t kappa_index = 0;
    double kappa_max = 1.0;
    std::vector<std::size_t> final_selected;
    BgmStatVector final_stats;
    CutoffResult final_cutoff;
};

/// Steps after the mirror stage: per-kappa weights, statistics, cutoff and
/// selection, then the kappa with the largest selection (smallest on ties).
BgmSelection select_from_scores(const FeatureMirrorScores& scores, const Eigen::VectorXd& beta_hat,
                                std::span<const double> kappa_grid, double q,
                                ThresholdGrid grid = ThresholdGrid::ranked);

/// gamma == 1 for every feature; the cutoff reduces to the symmetric
/// #{M < -t} / max(#{M > t}, 1) rule.
BgmSelection baseline_from_scores(const FeatureMirrorScores& scores, double q,
                                  ThresholdGrid grid = ThresholdGrid::ranked);

struct SelectOptions {
    MirrorOptions mirror;
    SolverOptions solver;  // initial fit and cross-validation
    ThresholdGrid threshold_grid = ThresholdGrid::ranked;
};

/// Everything computed once per data set before the kappa loop.
struct BgmPipeline {
    double lambda = 0.0;
    LassoFit initial_fit;
    FeatureMirrorScores scores;
};

BgmPipeline prepare_pipeline(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                             std::uint64_t master_seed, const LambdaRule& lambda_rule,
                             const SelectOptions& options = {});

BgmSelection self_guiding_select(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                 std::span<const double> kappa_grid, double q, std::uint64_t master_seed,
                                 const LambdaRule& lambda_rule, const SelectOptions& options = {});

BgmSelection symmetric_baseline_select(const StandardizedDesign& design, const Eigen::VectorXd& y, Family family,
                                       double q, std::uint64_t master_seed, const LambdaRule& lambda_rule,
                                       const SelectOptions& options = {});

void validate_kappa_grid(std::span<const double> kappa_grid);
void validate_q(double q);

} // namespace bgm
