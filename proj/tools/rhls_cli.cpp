// rhls: constants, solver runs, continuation sweeps and verification suites.
//
// Output is JSON lines (or CSV). The first record is the run manifest.
// Exit codes: 0 success, 1 non-convergence or violation, 2 usage error.

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhls/errors.hpp"
#include "rhls/extremal_solver.hpp"
#include "rhls/hls_operator.hpp"
#include "rhls/json_io.hpp"
#include "rhls/numeric.hpp"
#include "rhls/special_constants.hpp"
#include "rhls/sphere_quadrature.hpp"
#include "rhls/verification.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    int n = 1;
    double alpha = 6.0;
    std::optional<double> p;
    std::string rule;  // empty: default rule for n
    int res = 24;
    std::size_t nodes = 4096;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    int max_iter = 5000;
    double damping = 1.0;
    std::string init = "constants";
    std::string ladder;
    std::size_t samples = 0;
    std::string format = "json";
    std::string out;
    unsigned threads = rhls::default_thread_count();
    std::vector<std::string> suites;
    bool all = false;
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Writes records as JSON lines or CSV. CSV gets a fresh header whenever the key set changes.
class Sink {
public:
    Sink(const std::string& format, const std::string& path) : csv_(format == "csv") {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot open output file " + path);
        }
    }

    void manifest(const json& m) {
        if (!csv_) {
            emit(json{{"manifest", m}}.dump());
            return;
        }
        for (const auto& [key, value] : m.items()) emit("# " + key + " = " + (value.is_string() ? value.get<std::string>() : value.dump()));
    }

    void record(const json& r) {
        if (!csv_) {
            emit(r.dump());
            return;
        }
        std::vector<std::string> keys;
        for (const auto& [key, value] : r.items()) keys.push_back(key);
        if (keys != header_) {
            header_ = keys;
            emit(join(keys));
        }
        std::vector<std::string> cells;
        for (const auto& [key, value] : r.items()) {
            std::string cell = value.is_string() ? value.get<std::string>() : value.dump();
            if (cell.find_first_of(",\"") != std::string::npos) cell = quote(cell);
            cells.push_back(cell);
        }
        emit(join(cells));
    }

private:
    static std::string join(const std::vector<std::string>& parts) {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
        return s;
    }

    static std::string quote(const std::string& s) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    void emit(const std::string& line) {
        std::ostream& os = file_ ? *file_ : std::cout;
        os << line << '\n';
        os.flush();
    }

    bool csv_;
    std::unique_ptr<std::ofstream> file_;
    std::vector<std::string> header_;
};

json base_manifest(const std::string& command, const Options& o, std::uint64_t seed) {
    return {{"command", command},
            {"seed", seed},
            {"version", RHLS_VERSION},
            {"git", RHLS_GIT_REVISION},
            {"threads", o.threads},
            {"timestamp", utc_timestamp()}};
}

rhls::QuadratureRule make_rule(const Options& o) {
    if (o.rule.empty()) return rhls::default_rule(o.n);
    const rhls::RuleKind kind = rhls::rule_kind_from_string(o.rule);
    if (kind == rhls::RuleKind::product_hopf) {
        if (o.n != 1) throw UsageError("--rule hopf is only available for n = 1");
        return rhls::product_hopf_rule(o.res);
    }
    return rhls::monte_carlo_rule(o.n, o.nodes, o.seed, true);
}

rhls::SolverConfig make_config(const Options& o) {
    rhls::SolverConfig c;
    c.tol_residual = o.tol;
    c.max_iters = o.max_iter;
    c.damping = o.damping;
    c.init = rhls::init_kind_from_string(o.init);
    if (c.init == rhls::InitKind::warm_start) throw UsageError("--init warm_start is not available from the command line");
    c.seed = o.seed;
    return c;
}

std::vector<double> parse_ladder(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("--ladder: cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

json sandwich(const rhls::ProblemParams& critical, const rhls::QuadratureRule& rule, double estimate) {
    const double lower = rhls::conformal_lower_bound(critical.n, critical.alpha);
    const double upper = rhls::constants_objective(rule, critical);
    return {{"lower", lower}, {"upper_quadrature", upper}, {"in_sandwich", rhls::in_sandwich(lower, upper, estimate)}};
}

// ---------------------------------------------------------------- commands

int cmd_constants(const Options& o, Sink& sink) {
    const int Q = 2 * o.n + 2;
    if (o.n < 1) throw UsageError("--n must be >= 1");
    if (o.alpha == Q) throw UsageError("alpha must differ from Q = " + std::to_string(Q));
    if (!(o.alpha > 0.0)) throw UsageError("alpha must be positive");

    json manifest = base_manifest("constants", o, o.seed);
    manifest["params"] = {{"n", o.n}, {"alpha", o.alpha}};
    sink.manifest(manifest);

    const char* na = "not applicable";
    json row = {{"n", o.n}, {"Q", Q}, {"alpha", o.alpha}};
    row["ball_volume"] = rhls::ball_volume(Q);
    row["sphere_surface"] = rhls::sphere_surface(o.n);
    row["p_alpha"] = rhls::conformal_exponent(o.n, o.alpha);
    row["q_alpha"] = 2.0 * Q / (Q - o.alpha);
    int ok_rows = 0;
    if (o.alpha > Q) {
        row["lower"] = rhls::conformal_lower_bound(o.n, o.alpha);
        for (auto v : {rhls::UpperVariant::quarter_exponent, rhls::UpperVariant::half_exponent,
                       rhls::UpperVariant::quadrature}) {
            row["upper_" + std::string(rhls::to_string(v))] = rhls::conformal_upper_bound(o.n, o.alpha, v);
        }
        row["rule"] = rhls::rule_to_json(rhls::default_rule(o.n));
        row["frank_lieb_D"] = na;
        ++ok_rows;
    } else {
        row["lower"] = na;
        row["upper_quarter-exponent"] = na;
        row["upper_half-exponent"] = na;
        row["upper_quadrature"] = na;
        row["frank_lieb_D"] = rhls::frank_lieb_constant(o.n, o.alpha);
        ++ok_rows;
    }
    sink.record(row);
    return ok_rows > 0 ? kExitOk : kExitFailure;
}

int cmd_solve(const Options& o, Sink& sink) {
    const auto params = o.p ? rhls::ProblemParams::make(o.n, o.alpha, *o.p) : rhls::ProblemParams::critical(o.n, o.alpha);
    const auto config = make_config(o);
    config.validate(params);
    const auto rule = make_rule(o);

    json manifest = base_manifest("solve", o, o.seed);
    manifest["params"] = params;
    manifest["rule"] = rhls::rule_to_json(rule);
    sink.manifest(manifest);

    const auto op = rhls::assemble_operator(rule, params, rhls::kDefaultNodeCap, o.threads);
    const auto result = rhls::alternating_minimize(params, op, config);
    json report = result.report;
    report["record"] = "report";
    if (params.is_critical()) report["sandwich"] = sandwich(params, rule, result.report.N_est);
    sink.record(report);
    return result.report.converged ? kExitOk : kExitFailure;
}

int cmd_continuation(const Options& o, Sink& sink) {
    const auto params = rhls::ProblemParams::critical(o.n, o.alpha);
    auto config = make_config(o);
    if (!o.ladder.empty()) config.ladder = parse_ladder(o.ladder);
    config.validate(params);
    const auto rule = make_rule(o);

    json manifest = base_manifest("continuation", o, o.seed);
    manifest["params"] = params;
    manifest["rule"] = rhls::rule_to_json(rule);
    manifest["ladder"] = config.ladder.empty() ? rhls::default_ladder(params.p_alpha) : config.ladder;
    sink.manifest(manifest);

    const auto op = rhls::assemble_operator(rule, params, rhls::kDefaultNodeCap, o.threads);
    const auto run = rhls::continuation_to_critical(params, op, config);
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        json line = run.steps[k].report;
        line["record"] = "step";
        line["step"] = k + 1;
        sink.record(line);
    }

    json summary = {{"record", "summary"}, {"halted", run.halted}, {"steps", run.steps.size()}};
    if (!run.halted && !run.steps.empty()) {
        const auto& last = run.final_step();
        summary["N_est"] = last.report.N_est;
        summary["converged"] = last.report.converged;
        summary["sandwich"] = sandwich(params, rule, last.report.N_est);
        summary["blowup"] = rhls::blowup_diagnostics(last.report, last.pair, rule, op, params);
    }
    sink.record(summary);
    const bool ok = !run.halted && !run.steps.empty() && run.final_step().report.converged;
    return ok ? kExitOk : kExitFailure;
}

int cmd_verify(const Options& o, Sink& sink) {
    std::vector<rhls::Suite> suites;
    if (o.all) {
        suites = rhls::all_suites();
    } else {
        if (o.suites.empty()) throw UsageError("verify: pass --suite NAME or --all");
        for (const auto& s : o.suites) suites.push_back(rhls::suite_from_string(s));
    }
    json manifest = base_manifest("verify", o, o.seed);
    json names = json::array();
    for (auto s : suites) names.push_back(rhls::to_string(s));
    manifest["params"] = {{"suites", names}, {"samples", o.samples}};
    sink.manifest(manifest);

    std::size_t violations = 0;
    for (auto s : suites) {
        const auto result = rhls::run_suite(s, o.seed, o.samples);
        for (const auto& r : result.records) sink.record(r);
        sink.record({{"suite", rhls::to_string(s)}, {"check", "suite-summary"}, {"violations", result.violations},
                     {"pass", result.violations == 0}, {"seed", o.seed}});
        violations += result.violations;
    }
    return violations == 0 ? kExitOk : kExitFailure;
}

void add_problem_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--n", o.n, "Heisenberg dimension n (sphere S^{2n+1})")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", o.alpha, "Kernel exponent alpha");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--rule", o.rule, "Quadrature rule")->check(CLI::IsMember({"mc", "hopf"}));
    cmd->add_option("--res", o.res, "Product rule resolution")->check(CLI::Range(2, 4096));
    cmd->add_option("--nodes", o.nodes, "Monte Carlo node count")->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--tol", o.tol, "EL residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "Iteration cap per solve")->check(CLI::PositiveNumber);
    cmd->add_option("--damping", o.damping, "Damping theta in (0, 1]");
    cmd->add_option("--init", o.init, "Initial pair")->check(CLI::IsMember({"constants", "random"}));
    cmd->add_option("--threads", o.threads, "Worker threads (default from RHLS_THREADS)")->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "Write output to PATH instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversed HLS extremal problem on the CR sphere and Heisenberg group"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(RHLS_VERSION) + " (" + RHLS_GIT_REVISION + ")");
    Options o;

    auto* constants = app.add_subcommand("constants", "Closed-form constants and bounds");
    add_problem_flags(constants, o);
    add_output_flags(constants, o);

    auto* solve = app.add_subcommand("solve", "Alternating minimization at one exponent");
    add_problem_flags(solve, o);
    solve->add_option("--p", o.p, "Exponent p in (0, p_alpha], default p_alpha");
    add_solver_flags(solve, o);
    add_output_flags(solve, o);

    auto* cont = app.add_subcommand("continuation", "Warm-started ladder up to p_alpha");
    add_problem_flags(cont, o);
    cont->add_option("--ladder", o.ladder, "Comma-separated ascending exponents ending at p_alpha");
    add_solver_flags(cont, o);
    add_output_flags(cont, o);

    auto* verify = app.add_subcommand("verify", "Randomized verification suites");
    verify->add_option("--suite", o.suites, "group-axioms, cayley, bounds, hn, correspondence, gamma");
    verify->add_flag("--all", o.all, "Run every suite");
    verify->add_option("--samples", o.samples, "Samples per check, 0 for suite defaults");
    add_output_flags(verify, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        Sink sink(o.format, o.out);
        if (*constants) return cmd_constants(o, sink);
        if (*solve) return cmd_solve(o, sink);
        if (*cont) return cmd_continuation(o, sink);
        return cmd_verify(o, sink);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
