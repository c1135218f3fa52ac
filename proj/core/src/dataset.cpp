#include "bgm/dataset.hpp"

#include "bgm/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace bgm {

namespace {

constexpr const char* kModule = "cli_io";

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string> split(const std::string& line, char delimiter)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        cells.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

bool is_blank(const std::string& line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, kModule, "cannot open '" + path.string() + "'");
    return in;
}

} // namespace

NumericTable parse_numeric_table(std::istream& in, char delimiter, bool has_header, const std::string& source)
{
    NumericTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header_pending = has_header;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        auto cells = split(line, delimiter);
        if (header_pending) {
            table.header = std::move(cells);
            width = table.header.size();
            header_pending = false;
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width) {
            throw Error(ErrorKind::RaggedRows, kModule,
                        source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(width));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            const auto& cell = cells[c];
            if (cell.empty()) {
                throw Error(ErrorKind::RaggedRows, kModule,
                            source + ": line " + std::to_string(line_no) + " column " + std::to_string(c + 1) +
                                " is missing");
            }
            double value = 0.0;
            const auto* begin = cell.data();
            const auto* end = cell.data() + cell.size();
            if (*begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
                throw Error(ErrorKind::ParseError, kModule,
                            source + ": line " + std::to_string(line_no) + " column " + std::to_string(c + 1) +
                                ": cannot parse '" + cell + "' as a number");
            }
            row[c] = value;
        }
        rows.push_back(std::move(row));
    }

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < width; ++c) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    return table;
}

Dataset load_dataset(const DatasetFile& spec, Family family)
{
    auto in = open_input(spec.path);
    const auto table = parse_numeric_table(in, spec.delimiter, spec.has_header, spec.path.string());
    if (table.values.rows() == 0) {
        throw Error(ErrorKind::ParseError, kModule, spec.path.string() + ": no data rows");
    }

    Dataset data;
    const auto width = table.values.cols();
    auto name_of = [&](Eigen::Index c) {
        return table.header.empty() ? std::string() : table.header[static_cast<std::size_t>(c)];
    };

    if (spec.response_path) {
        auto rin = open_input(*spec.response_path);
        const auto response = parse_numeric_table(rin, spec.delimiter, spec.has_header, spec.response_path->string());
        if (response.values.cols() != 1) {
            throw Error(ErrorKind::ParseError, kModule, spec.response_path->string() + ": expected a single column");
        }
        if (response.values.rows() != table.values.rows()) {
            throw Error(ErrorKind::RaggedRows, kModule,
                        "response has " + std::to_string(response.values.rows()) + " rows but data has " +
                            std::to_string(table.values.rows()));
        }
        data.x = table.values;
        data.y = response.values.col(0);
        for (Eigen::Index c = 0; c < width; ++c) data.column_names.push_back(name_of(c));
    } else {
        Eigen::Index response_col = width - 1;
        if (spec.response_column) {
            const auto& key = *spec.response_column;
            bool found = false;
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                if (table.header[c] == key) {
                    response_col = static_cast<Eigen::Index>(c);
                    found = true;
                    break;
                }
            }
            if (!found) {
                long long index = 0;
                const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
                if (ec != std::errc() || ptr != key.data() + key.size() || index < 1 || index > width) {
                    throw Error(ErrorKind::Config, kModule, "response column '" + key + "' not found");
                }
                response_col = static_cast<Eigen::Index>(index - 1);
            }
        }
        if (width < 2) throw Error(ErrorKind::ParseError, kModule, "need at least one covariate column");
        data.x.resize(table.values.rows(), width - 1);
        Eigen::Index out = 0;
        for (Eigen::Index c = 0; c < width; ++c) {
            if (c == response_col) continue;
            data.x.col(out++) = table.values.col(c);
            data.column_names.push_back(name_of(c));
        }
        data.y = table.values.col(response_col);
    }

    if (family == Family::logistic) {
        for (Eigen::Index i = 0; i < data.y.size(); ++i) {
            if (data.y[i] != 0.0 && data.y[i] != 1.0) {
                throw Error(ErrorKind::BadResponseValues, kModule,
                            "logistic response must be 0 or 1 (data row " + std::to_string(i + 1) + ")");
            }
        }
    }
    return data;
}

} // namespace bgm
