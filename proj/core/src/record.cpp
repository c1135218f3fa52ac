#include "bgm/record.hpp"

#include "bgm/error.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#ifndef BGM_VERSION
#define BGM_VERSION "0.0.0"
#endif

namespace bgm {

namespace {

constexpr const char* kModule = "cli_io";

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v)
{
    return v ? ojson(*v) : ojson(nullptr);
}

std::optional<double> read_optional(const ojson& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string software_version()
{
    return BGM_VERSION;
}

std::string format_double(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

std::string to_json(const ResultRecord& r)
{
    ojson j;
    j["schema_version"] = r.schema_version;
    j["software_version"] = r.software_version;
    j["family"] = r.family;
    j["q"] = r.q;
    j["seed"] = r.seed;
    j["lambda"] = r.lambda;
    j["lambda_rule"] = r.lambda_rule;
    j["threshold_grid"] = r.threshold_grid;
    j["kappa_grid"] = r.kappa_grid;
    j["kappa_max"] = r.kappa_max;
    j["tau"] = optional_number(r.tau);
    j["n"] = r.n;
    j["p"] = r.p;
    j["selected"] = r.selected;
    j["selected_names"] = r.selected_names;
    j["per_kappa"] = ojson::array();
    for (const auto& k : r.per_kappa) {
        ojson e;
        e["kappa"] = k.kappa;
        e["tau"] = optional_number(k.tau);
        e["size"] = k.size;
        j["per_kappa"].push_back(std::move(e));
    }
    j["features"] = ojson::array();
    for (const auto& f : r.features) {
        ojson e;
        e["index"] = f.index;
        e["name"] = f.name;
        e["beta"] = f.beta;
        e["beta_original"] = f.beta_original;
        e["w1"] = f.w1;
        e["w2"] = f.w2;
        e["gamma"] = f.gamma;
        e["m"] = f.m;
        e["selected"] = f.selected;
        j["features"].push_back(std::move(e));
    }
    j["timestamp"] = {{"utc", r.timestamp_utc}, {"elapsed_seconds", r.elapsed_seconds}};
    return j.dump(2) + "\n";
}

ResultRecord parse_result_record(std::string_view text)
{
    try {
        const auto j = ojson::parse(text);
        ResultRecord r;
        r.schema_version = j.at("schema_version").get<int>();
        r.software_version = j.at("software_version").get<std::string>();
        r.family = j.at("family").get<std::string>();
        r.q = j.at("q").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.lambda = j.at("lambda").get<double>();
        r.lambda_rule = j.at("lambda_rule").get<std::string>();
        r.threshold_grid = j.at("threshold_grid").get<std::string>();
        r.kappa_grid = j.at("kappa_grid").get<std::vector<double>>();
        r.kappa_max = j.at("kappa_max").get<double>();
        r.tau = read_optional(j.at("tau"));
        r.n = j.at("n").get<std::size_t>();
        r.p = j.at("p").get<std::size_t>();
        r.selected = j.at("selected").get<std::vector<std::size_t>>();
        r.selected_names = j.at("selected_names").get<std::vector<std::string>>();
        for (const auto& e : j.at("per_kappa")) {
            r.per_kappa.push_back(KappaSummary{e.at("kappa").get<double>(), read_optional(e.at("tau")),
                                               e.at("size").get<std::size_t>()});
        }
        for (const auto& e : j.at("features")) {
            FeatureRow f;
            f.index = e.at("index").get<std::size_t>();
            f.name = e.at("name").get<std::string>();
            f.beta = e.at("beta").get<double>();
            f.beta_original = e.at("beta_original").get<double>();
            f.w1 = e.at("w1").get<double>();
            f.w2 = e.at("w2").get<double>();
            f.gamma = e.at("gamma").get<double>();
            f.m = e.at("m").get<double>();
            f.selected = e.at("selected").get<bool>();
            r.features.push_back(std::move(f));
        }
        r.timestamp_utc = j.at("timestamp").at("utc").get<std::string>();
        r.elapsed_seconds = j.at("timestamp").at("elapsed_seconds").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, kModule, std::string("result JSON: ") + e.what());
    }
}

std::string to_feature_csv(const ResultRecord& r)
{
    std::ostringstream out;
    out << "index,name,beta,beta_original,w1,w2,gamma,m,selected\n";
    for (const auto& f : r.features) {
        out << f.index << ',' << csv_field(f.name) << ',' << format_double(f.beta) << ','
            << format_double(f.beta_original) << ',' << format_double(f.w1) << ',' << format_double(f.w2) << ','
            << format_double(f.gamma) << ',' << format_double(f.m) << ',' << (f.selected ? 1 : 0) << '\n';
    }
    return out.str();
}

ReportFormat parse_report_format(std::string_view text)
{
    if (text == "json") return ReportFormat::json;
    if (text == "csv") return ReportFormat::csv;
    throw Error(ErrorKind::Config, kModule, "unknown report format '" + std::string(text) + "' (json|csv)");
}

std::string render_report(const ResultRecord& record, ReportFormat format)
{
    return format == ReportFormat::json ? to_json(record) : to_feature_csv(record);
}

void write_report(const ResultRecord& record, ReportFormat format, const std::filesystem::path& path)
{
    write_file_atomic(path, render_report(record, format));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, kModule, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::Io, kModule, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, kModule, "cannot move output into '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, kModule, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace bgm
