#include "bgm/commands.hpp"

#include "bgm/design.hpp"
#include "bgm/rng.hpp"
#include "bgm/selector.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

namespace bgm {

namespace {

constexpr const char* kModule = "cli_io";

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::Config, kModule, "invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::optional<double> finite_or_empty(double t)
{
    return std::isfinite(t) ? std::optional<double>(t) : std::nullopt;
}

// Seeds for the two random stages of `select`, both derived from the user seed.
constexpr std::uint64_t kFoldTag = 0xf01d5;
constexpr std::uint64_t kMirrorTag = 0x3a1220;

} // namespace

std::string_view to_string(Command command)
{
    switch (command) {
    case Command::select: return "select";
    case Command::simulate: return "simulate";
    case Command::report: return "report";
    }
    return "?";
}

Command parse_command(std::string_view text)
{
    if (text == "select") return Command::select;
    if (text == "simulate") return Command::simulate;
    if (text == "report") return Command::report;
    throw Error(ErrorKind::Config, kModule, "unknown command '" + std::string(text) + "'");
}

void RunConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, kModule, msg); };
    if (command == Command::report) {
        if (input.empty()) fail("report needs an input file (--in)");
        return;
    }
    if (!(q > 0.0 && q < 1.0)) fail("q must lie in (0, 1), got " + format_double(q));
    if (kappa_grid.empty()) fail("kappa grid is empty");
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        if (!std::isfinite(kappa_grid[i]) || kappa_grid[i] < 1.0) fail("kappa values must be >= 1");
        if (i > 0 && !(kappa_grid[i] > kappa_grid[i - 1])) fail("kappa grid must be strictly ascending");
    }
    try {
        lambda_rule.validate();
    } catch (const Error& e) {
        fail(e.what());
    }
    if (command == Command::select) {
        if (dataset.path.empty()) fail("select needs a data file (--data)");
        return;
    }
    if (methods.empty()) fail("no method requested");
    for (double d : deltas) {
        if (!(d > 0.0)) fail("delta values must be positive");
    }
    for (double r : rhos) {
        if (!(r > 0.0 && r < 1.0)) fail("rho values must lie in (0, 1)");
    }
    if (replicates && *replicates == 0) fail("reps must be positive");
    SimScenario base;
    try {
        base = SimScenario::preset(preset);
    } catch (const Error& e) {
        fail(e.what());
    }
    if (n && *n < 2) fail("n must be >= 2");
    const Eigen::Index dim = p ? *p : base.p;
    if (p && (*p <= 0 || *p % 10 != 0 || *p / 10 < 2)) fail("p must be a multiple of 10 and at least 20");
    if (s && (*s < 0 || *s > dim)) fail("s must lie in [0, p]");
}

std::vector<double> parse_kappa_grid(std::string_view text)
{
    text = trim(text);
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 2 && parts.size() != 3) {
            throw Error(ErrorKind::Config, kModule, "kappa range must be start:stop[:step]");
        }
        const double start = parse_double(parts[0], "kappa");
        const double stop = parse_double(parts[1], "kappa");
        const double step = parts.size() == 3 ? parse_double(parts[2], "kappa step") : 1.0;
        if (!(step > 0.0) || stop < start) throw Error(ErrorKind::Config, kModule, "empty kappa range");
        std::vector<double> grid;
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
        return grid;
    }
    return parse_number_list(text);
}

std::vector<double> parse_number_list(std::string_view text)
{
    std::vector<double> values;
    for (auto part : split(text, ',')) values.push_back(parse_double(part, "number"));
    return values;
}

LambdaRule parse_lambda_rule(std::string_view text)
{
    text = trim(text);
    if (text == "cv") return LambdaRule::cross_validated();
    const double value = parse_double(text, "lambda");
    if (!(value > 0.0)) throw Error(ErrorKind::Config, kModule, "lambda must be positive");
    return LambdaRule::fixed(value);
}

std::vector<Method> parse_methods(std::string_view text)
{
    text = trim(text);
    if (text == "bgm") return {Method::bgm};
    if (text == "baseline") return {Method::symmetric_baseline};
    if (text == "both") return {Method::bgm, Method::symmetric_baseline};
    throw Error(ErrorKind::Config, kModule, "unknown method '" + std::string(text) + "' (bgm|baseline|both)");
}

ResultRecord run_select(const RunConfig& config)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    const auto data = load_dataset(config.dataset, config.family);
    const auto design = standardize_columns(data.x);

    LambdaRule rule = config.lambda_rule;
    rule.seed = derive_seed(config.seed, {kFoldTag});
    SelectOptions options;
    options.mirror.functional = config.functional;
    options.mirror.threads = config.threads;
    options.threshold_grid = config.threshold_grid;
    const auto pipeline =
        prepare_pipeline(design, data.y, config.family, derive_seed(config.seed, {kMirrorTag}), rule, options);
    const auto selection = select_from_scores(pipeline.scores, pipeline.initial_fit.coefficients, config.kappa_grid,
                                              config.q, config.threshold_grid);

    ResultRecord r;
    r.software_version = software_version();
    r.family = std::string(to_string(config.family));
    r.q = config.q;
    r.seed = config.seed;
    r.lambda = pipeline.lambda;
    r.lambda_rule = rule.mode == LambdaRule::Mode::fixed ? "fixed" : "cv";
    r.threshold_grid = std::string(to_string(config.threshold_grid));
    r.kappa_grid = config.kappa_grid;
    r.kappa_max = selection.kappa_max;
    r.tau = finite_or_empty(selection.final_cutoff.tau);
    r.n = static_cast<std::size_t>(design.rows());
    r.p = static_cast<std::size_t>(design.cols());

    const bool named = std::any_of(data.column_names.begin(), data.column_names.end(),
                                   [](const std::string& s) { return !s.empty(); });
    for (auto j : selection.final_selected) {
        r.selected.push_back(j + 1);
        if (named) r.selected_names.push_back(data.column_names[j]);
    }
    for (const auto& rec : selection.records) {
        r.per_kappa.push_back(KappaSummary{rec.kappa, finite_or_empty(rec.tau), rec.selected.size()});
    }

    const auto& beta = pipeline.initial_fit.coefficients;
    const auto beta_original = design.to_original_scale(beta);
    std::vector<bool> chosen(r.p, false);
    for (auto j : selection.final_selected) chosen[j] = true;
    for (std::size_t j = 0; j < r.p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        FeatureRow f;
        f.index = j + 1;
        f.name = j < data.column_names.size() ? data.column_names[j] : std::string();
        f.beta = beta[jj];
        f.beta_original = beta_original[jj];
        f.w1 = pipeline.scores.w1[jj];
        f.w2 = pipeline.scores.w2[jj];
        f.gamma = selection.final_stats.gamma[jj];
        f.m = selection.final_stats.m_hat[jj];
        f.selected = chosen[j];
        r.features.push_back(std::move(f));
    }

    r.timestamp_utc = utc_now();
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

SimulationTables run_simulate(const RunConfig& config)
{
    config.validate();
    const auto base = SimScenario::preset(config.preset);
    const std::vector<double> deltas = config.deltas.empty() ? std::vector<double>{base.delta} : config.deltas;
    const std::vector<double> rhos = config.rhos.empty() ? std::vector<double>{base.rho} : config.rhos;

    std::ostringstream summary;
    std::ostringstream detail;
    summary << "family,n,p,s,delta,rho,q,method,mean_fdp,sd_fdp,mean_power,sd_power,replicates,failures\n";
    detail << "family,n,p,s,delta,rho,q,method,replicate,fdp,power,tau,kappa_max,n_selected,failed\n";

    for (double delta : deltas) {
        for (double rho : rhos) {
            SimScenario scenario = base;
            scenario.delta = delta;
            scenario.rho = rho;
            scenario.q = config.q;
            scenario.kappa_grid = config.kappa_grid;
            scenario.master_seed = config.seed;
            scenario.lambda_rule = config.lambda_rule;
            scenario.functional = config.functional;
            scenario.threshold_grid = config.threshold_grid;
            scenario.threads = config.threads;
            if (config.replicates) scenario.replicates = *config.replicates;
            if (config.n) scenario.n = *config.n;
            if (config.p) scenario.p = *config.p;
            if (config.s) scenario.s = *config.s;
            scenario.validate();

            std::ostringstream prefix;
            prefix << to_string(scenario.family) << ',' << scenario.n << ',' << scenario.p << ',' << scenario.s << ','
                   << format_double(delta) << ',' << format_double(rho) << ',' << format_double(scenario.q);

            const auto runs = run_replicates(scenario, config.methods);
            for (const auto& run : runs) {
                const auto& s = run.summary;
                summary << prefix.str() << ',' << to_string(run.method) << ',';
                if (s.defined) {
                    summary << format_double(s.mean_fdp) << ',' << format_double(s.sd_fdp) << ','
                            << format_double(s.mean_power) << ',' << format_double(s.sd_power);
                } else {
                    summary << "NA,NA,NA,NA";
                }
                summary << ',' << s.count << ',' << s.failures << '\n';

                for (const auto& o : run.outcomes) {
                    detail << prefix.str() << ',' << to_string(run.method) << ',' << o.replicate_id + 1 << ',';
                    if (o.failed) {
                        detail << "NA,NA,NA,NA,NA,1\n";
                        continue;
                    }
                    detail << format_double(o.fdp) << ',' << format_double(o.power) << ','
                           << (std::isfinite(o.tau) ? format_double(o.tau) : std::string("Inf")) << ','
                           << format_double(o.kappa_max) << ',' << o.selected.size() << ",0\n";
                }
            }
        }
    }
    return SimulationTables{summary.str(), detail.str()};
}

std::string run_report(const RunConfig& config)
{
    config.validate();
    const auto record = parse_result_record(read_file(config.input));
    return render_report(record, config.format);
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SolverFailure:
    case ErrorKind::NotPsd:
    case ErrorKind::InvalidThreshold:
        return 3;
    case ErrorKind::Io:
        return 4;
    default:
        return 2;
    }
}

} // namespace bgm
