#pragma once

#include "bgm/dataset.hpp"
#include "bgm/error.hpp"
#include "bgm/lambda.hpp"
#include "bgm/lasso.hpp"
#include "bgm/mirrors.hpp"
#include "bgm/record.hpp"
#include "bgm/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgm {

enum class Command { select, simulate, report };

std::string_view to_string(Command command);
Command parse_command(std::string_view text);

/// Everything one CLI invocation needs. Fields irrelevant to `command` are ignored.
struct RunConfig {
    Command command = Command::select;
    Family family = Family::linear;
    double q = 0.1;
    std::vector<double> kappa_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::uint64_t seed = 1;
    LambdaRule lambda_rule = LambdaRule::cross_validated();
    ScoreFunctional functional = ScoreFunctional::product;
    ThresholdGrid threshold_grid = ThresholdGrid::ranked;
    unsigned threads = 0;

    // select
    DatasetFile dataset;

    // simulate
    std::string preset = "linear-desk";
    std::vector<double> deltas;  // empty: the preset's value
    std::vector<double> rhos;
    std::optional<std::size_t> replicates;
    std::optional<Eigen::Index> n;
    std::optional<Eigen::Index> p;
    std::optional<Eigen::Index> s;
    std::vector<Method> methods = {Method::bgm};
    std::optional<std::filesystem::path> detail_path;

    // report
    std::filesystem::path input;
    ReportFormat format = ReportFormat::json;

    std::optional<std::filesystem::path> output;  // stdout when empty

    /// Throws Config for out-of-domain values; nothing is computed before this passes.
    void validate() const;
};

/// "1:10", "1:10:0.5" (start:stop[:step], inclusive) or "1,2,5".
std::vector<double> parse_kappa_grid(std::string_view text);

/// Comma-separated numbers.
std::vector<double> parse_number_list(std::string_view text);

/// "cv" or a positive number.
LambdaRule parse_lambda_rule(std::string_view text);

/// "bgm", "baseline" or "both".
std::vector<Method> parse_methods(std::string_view text);

/// The timestamp is the only field that depends on when the run happened.
ResultRecord run_select(const RunConfig& config);

struct SimulationTables {
    std::string summary_csv;  // one row per (delta, rho, method)
    std::string detail_csv;   // one row per (delta, rho, method, replicate)
};

/// Scenario grid is delta x rho, delta varying slowest. Every grid point uses
/// the same master seed.
SimulationTables run_simulate(const RunConfig& config);

std::string run_report(const RunConfig& config);

/// 0 success, 2 configuration or parse error, 3 solver failure, 4 I/O error.
int exit_code_for(ErrorKind kind);

} // namespace bgm
