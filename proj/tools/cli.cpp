#include "cli.hpp"

#include "bgm/commands.hpp"
#include "bgm/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>

namespace bgm::cli {

namespace {

struct RawOptions {
    std::string family = "linear";
    double q = 0.1;
    std::string kappa = "1:10";
    std::string lambda = "cv";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string functional = "product";
    std::string threshold_grid = "ranked";
    std::string out;

    std::string data;
    std::string response;
    std::string response_col;
    std::string delimiter = ",";
    bool no_header = false;
    std::string format = "json";

    std::string preset = "linear-desk";
    std::string delta;
    std::string rho;
    std::optional<std::size_t> reps;
    std::optional<Eigen::Index> n;
    std::optional<Eigen::Index> p;
    std::optional<Eigen::Index> s;
    std::string method = "bgm";
    std::string detail;

    std::string in;
};

void add_common(CLI::App* cmd, RawOptions& o)
{
    cmd->add_option("--q", o.q, "target FDR level in (0, 1)")->capture_default_str();
    cmd->add_option("--kappa", o.kappa, "kappa grid: start:stop[:step] or a comma list")->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "penalty: cv or a positive number")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master random seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
    cmd->add_option("--score", o.functional, "mirror score: product or sum")->capture_default_str();
    cmd->add_option("--thresholds", o.threshold_grid, "cutoff search: ranked or exact")->capture_default_str();
}

ScoreFunctional parse_functional(const std::string& text)
{
    if (text == "product") return ScoreFunctional::product;
    if (text == "sum") return ScoreFunctional::sum;
    throw Error(ErrorKind::Config, "cli_io", "unknown score '" + text + "' (product|sum)");
}

RunConfig to_config(Command command, const RawOptions& o)
{
    RunConfig c;
    c.command = command;
    if (!o.out.empty()) c.output = o.out;
    if (command == Command::report) {
        c.input = o.in;
        c.format = parse_report_format(o.format);
        return c;
    }
    c.q = o.q;
    c.kappa_grid = parse_kappa_grid(o.kappa);
    c.lambda_rule = parse_lambda_rule(o.lambda);
    c.seed = o.seed;
    c.threads = o.threads;
    c.functional = parse_functional(o.functional);
    try {
        c.threshold_grid = parse_threshold_grid(o.threshold_grid);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, "cli_io", e.what());
    }

    if (command == Command::select) {
        c.family = parse_family(o.family);
        c.format = parse_report_format(o.format);
        c.dataset.path = o.data;
        if (o.delimiter.size() != 1) throw Error(ErrorKind::Config, "cli_io", "delimiter must be one character");
        c.dataset.delimiter = o.delimiter == "\\t" ? '\t' : o.delimiter.front();
        c.dataset.has_header = !o.no_header;
        if (!o.response.empty()) c.dataset.response_path = o.response;
        if (!o.response_col.empty()) c.dataset.response_column = o.response_col;
        return c;
    }

    c.preset = o.preset;
    if (!o.delta.empty()) c.deltas = parse_number_list(o.delta);
    if (!o.rho.empty()) c.rhos = parse_number_list(o.rho);
    c.replicates = o.reps;
    c.n = o.n;
    c.p = o.p;
    c.s = o.s;
    c.methods = parse_methods(o.method);
    if (!o.detail.empty()) c.detail_path = o.detail;
    return c;
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out)
{
    if (config.output) {
        write_file_atomic(*config.output, text);
    } else {
        out << text;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Self-guiding bi-Gaussian mirror variable selection with FDR control", "bgm"};
    app.set_version_flag("--version", std::string(software_version()));
    app.set_config("--config", "", "TOML/INI file of option values; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RawOptions o;

    auto* select = app.add_subcommand("select", "select variables from a data set");
    select->add_option("--data", o.data, "delimited numeric table")->required();
    auto* resp = select->add_option("--response", o.response, "separate single-column response file");
    select->add_option("--response-col", o.response_col, "response column name or 1-based index (default: last)")
        ->excludes(resp);
    select->add_option("--family", o.family, "linear or logistic")->capture_default_str();
    select->add_option("--delimiter", o.delimiter, "field separator")->capture_default_str();
    select->add_flag("--no-header", o.no_header, "the first row holds data, not names");
    select->add_option("--format", o.format, "json or csv")->capture_default_str();
    select->add_option("--out", o.out, "output path (default: stdout)");
    add_common(select, o);

    auto* simulate = app.add_subcommand("simulate", "run a simulation scenario grid");
    simulate->add_option("--preset", o.preset, "linear-desk, linear-paper, logistic-desk or logistic-paper")
        ->capture_default_str();
    simulate->add_option("--delta", o.delta, "comma list of signal strengths");
    simulate->add_option("--rho", o.rho, "comma list of correlation levels");
    simulate->add_option("--reps", o.reps, "replicates per scenario point");
    simulate->add_option("--n", o.n, "override sample size");
    simulate->add_option("--p", o.p, "override dimension (multiple of 10)");
    simulate->add_option("--s", o.s, "override sparsity");
    simulate->add_option("--method", o.method, "bgm, baseline or both")->capture_default_str();
    simulate->add_option("--out", o.out, "summary CSV path (default: stdout)");
    simulate->add_option("--detail", o.detail, "per-replicate CSV path");
    add_common(simulate, o);

    auto* report = app.add_subcommand("report", "render a stored result");
    report->add_option("--in", o.in, "result JSON")->required();
    report->add_option("--format", o.format, "json or csv")->capture_default_str();
    report->add_option("--out", o.out, "output path (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (select->parsed()) {
            const auto config = to_config(Command::select, o);
            const auto record = run_select(config);
            emit(config, render_report(record, config.format), out);
        } else if (simulate->parsed()) {
            const auto config = to_config(Command::simulate, o);
            const auto tables = run_simulate(config);
            if (config.detail_path) write_file_atomic(*config.detail_path, tables.detail_csv);
            emit(config, tables.summary_csv, out);
        } else {
            const auto config = to_config(Command::report, o);
            emit(config, run_report(config), out);
        }
    } catch (const Error& e) {
        err << "bgm: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "bgm: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace bgm::cli
