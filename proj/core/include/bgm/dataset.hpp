#pragma once

#include "bgm/lasso.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace bgm {

/// Where a delimited numeric table lives and which column holds the response.
/// `response_column` is a header name or a 1-based column number; when neither
/// it nor `response_path` is set, the last column is the response.
struct DatasetFile {
    std::filesystem::path path;
    char delimiter = ',';
    bool has_header = true;
    std::optional<std::string> response_column;
    std::optional<std::filesystem::path> response_path;
};

struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> column_names;  // empty strings without a header
};

struct NumericTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

/// Parses a rectangular numeric table. Errors carry 1-based line/column:
/// ParseError for non-numeric cells, RaggedRows for short/long rows or empty cells.
NumericTable parse_numeric_table(std::istream& in, char delimiter, bool has_header,
                                 const std::string& source = "<input>");

Dataset load_dataset(const DatasetFile& spec, Family family);

} // namespace bgm
