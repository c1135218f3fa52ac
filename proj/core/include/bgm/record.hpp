#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgm {

/// One row of the per-feature table. `index` is 1-based; coefficients are on
/// the standardized scale except `beta_original`.
struct FeatureRow {
    std::size_t index = 0;
    std::string name;
    double beta = 0.0;
    double beta_original = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double gamma = 1.0;
    double m = 0.0;
    bool selected = false;

    bool operator==(const FeatureRow&) const = default;
};

struct KappaSummary {
    double kappa = 1.0;
    std::optional<double> tau;  // empty: no feasible threshold
    std::size_t size = 0;

    bool operator==(const KappaSummary&) const = default;
};

/// Result of `bgm select`. JSON layout (schema_version 1), in this order:
///   schema_version, software_version, family, q, seed, lambda, lambda_rule,
///   threshold_grid, kappa_grid, kappa_max, tau (null when infinite), n, p,
///   selected (1-based), selected_names, per_kappa[{kappa, tau, size}],
///   features[{index, name, beta, beta_original, w1, w2, gamma, m, selected}],
///   timestamp{utc, elapsed_seconds}
/// Only the timestamp object varies between identical runs.
struct ResultRecord {
    int schema_version = 1;
    std::string software_version;
    std::string family;
    double q = 0.1;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    std::string lambda_rule;
    std::string threshold_grid = "ranked";
    std::vector<double> kappa_grid;
    double kappa_max = 1.0;
    std::optional<double> tau;
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<std::size_t> selected;
    std::vector<std::string> selected_names;
    std::vector<KappaSummary> per_kappa;
    std::vector<FeatureRow> features;
    std::string timestamp_utc;
    double elapsed_seconds = 0.0;

    bool operator==(const ResultRecord&) const = default;
};

std::string software_version();

std::string to_json(const ResultRecord& record);

/// Throws ParseError on malformed JSON or missing fields.
ResultRecord parse_result_record(std::string_view json);

/// Per-feature table: header plus exactly p rows.
std::string to_feature_csv(const ResultRecord& record);

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view text);

std::string render_report(const ResultRecord& record, ReportFormat format);

void write_report(const ResultRecord& record, ReportFormat format, const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`. Throws Io.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

} // namespace bgm
