#pragma once

#include "bgm/lambda.hpp"
#include "bgm/lasso.hpp"
#include "bgm/selector.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgm {

/// Block-diagonal covariance made of 10 identical unit-diagonal Toeplitz
/// blocks of size p / 10 with linearly decaying off-diagonal correlation.
struct BlockToeplitzSpec {
    Eigen::Index p = 0;
    double rho = 0.5;

    Eigen::Index block_size() const { return p / 10; }
};

/// One block: entry (a, b) = (p' - |a - b| - 1) rho / (p' - 1) off the diagonal.
Eigen::MatrixXd toeplitz_block(Eigen::Index block_size, double rho);

Eigen::MatrixXd build_block_toeplitz(const BlockToeplitzSpec& spec);

/// Draws rows from N(0, cov) through a Cholesky factor computed once.
class MvnSampler {
public:
    /// Throws NotPsd when the factorization fails even after adding 1e-10 I.
    explicit MvnSampler(const Eigen::MatrixXd& cov);

    Eigen::MatrixXd sample(Eigen::Index n, std::uint64_t seed) const;
    const Eigen::MatrixXd& lower_factor() const noexcept { return lower_; }

private:
    Eigen::MatrixXd lower_;
};

Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& cov, Eigen::Index n, std::uint64_t seed);

struct GroundTruth {
    std::vector<std::size_t> h1_indices;  // 0-based, ascending
    Eigen::VectorXd beta;
};

/// Signal magnitude delta * sqrt(ln p / n).
double signal_floor(Eigen::Index p, double delta, Eigen::Index n);

/// s signals drawn uniformly without replacement, beta_j ~ U(floor, floor + 0.2).
GroundTruth gen_beta_linear(Eigen::Index p, Eigen::Index s, double delta, Eigen::Index n, std::uint64_t seed);

/// s signals drawn uniformly without replacement, beta_j = floor.
GroundTruth gen_beta_logistic(Eigen::Index p, Eigen::Index s, double delta, Eigen::Index n, std::uint64_t seed);

/// y = X beta + N(0, I) or Bernoulli(sigmoid(X beta)).
Eigen::VectorXd gen_response(const Eigen::MatrixXd& x, const GroundTruth& truth, Family family, std::uint64_t seed);

struct FdpPower {
    double fdp = 0.0;
    double power = 0.0;
};

/// fdp = |sel & H0| / max(|sel|, 1), power = |sel & H1| / max(|H1|, 1).
/// `selected` is 0-based; throws IndexOutOfRange.
FdpPower evaluate_fdp_power(std::span<const std::size_t> selected, const GroundTruth& truth);

enum class Method { bgm, symmetric_baseline };

std::string_view to_string(Method method);

struct SimScenario {
    Family family = Family::linear;
    Eigen::Index n = 400;
    Eigen::Index p = 1000;
    Eigen::Index s = 50;
    double delta = 3.0;
    double rho = 0.5;
    double q = 0.1;
    std::size_t replicates = 50;
    std::uint64_t master_seed = 1;
    std::vector<double> kappa_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    LambdaRule lambda_rule = LambdaRule::cross_validated();  // seed replaced per replicate
    ScoreFunctional functional = ScoreFunctional::product;
    ThresholdGrid threshold_grid = ThresholdGrid::ranked;
    unsigned threads = 0;

    void validate() const;

    static SimScenario linear_paper();
    static SimScenario linear_desk();
    static SimScenario logistic_paper();
    static SimScenario logistic_desk();
    /// "linear-desk", "linear-paper", "logistic-desk", "logistic-paper".
    static SimScenario preset(std::string_view name);
};

/// Seeds of one replicate, all derived from (master_seed, replicate_id).
struct ReplicateSeeds {
    std::uint64_t covariates;
    std::uint64_t beta;
    std::uint64_t response;
    std::uint64_t mirrors;
    std::uint64_t folds;
};

ReplicateSeeds replicate_seeds(std::uint64_t master_seed, std::size_t replicate_id);

struct ReplicateData {
    Eigen::MatrixXd x;  // raw covariates
    GroundTruth truth;
    Eigen::VectorXd y;
    ReplicateSeeds seeds;
};

ReplicateData generate_replicate(const SimScenario& scenario, const MvnSampler& sampler, std::size_t replicate_id);

struct ReplicateOutcome {
    std::size_t replicate_id = 0;
    Method method = Method::bgm;
    std::vector<std::size_t> selected;  // 0-based
    double fdp = 0.0;
    double power = 0.0;
    double tau = 0.0;
    double kappa_max = 0.0;
    double wall_time = 0.0;  // seconds
    bool failed = false;
    std::string error;
};

struct ReplicateSummary {
    bool defined = false;  // false when no replicate succeeded
    std::size_t count = 0;
    std::size_t failures = 0;
    double mean_fdp = 0.0;
    double sd_fdp = 0.0;
    double mean_power = 0.0;
    double sd_power = 0.0;
};

/// Mean and sample standard deviation (n - 1 denominator; 0 for a single
/// replicate) over the successful outcomes, in index order.
ReplicateSummary summarize(std::span<const ReplicateOutcome> outcomes);

struct ReplicateRun {
    Method method = Method::bgm;
    std::vector<ReplicateOutcome> outcomes;
    ReplicateSummary summary;
};

/// Runs every replicate once and evaluates each requested method on the same
/// simulated data and mirror scores. One ReplicateRun per method, in order.
std::vector<ReplicateRun> run_replicates(const SimScenario& scenario, std::span<const Method> methods);

ReplicateRun run_replicates(const SimScenario& scenario, Method method);

} // namespace bgm
