// hsroot: isolate the real roots of a polynomial system from the command line.
//
//   hsroot solve FILE [options]     solve one system file
//   hsroot bench [--filter S] [--dim<=N] [options]
//                                   run the built-in benchmark systems
//   hsroot check FILE               validate a system file and summarise it
//
// Exit codes: 0 success, 1 input error, 2 search budget exhausted.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "hsroot/isolate.hpp"
#include "hsroot/parser.hpp"
#include "hsroot/report.hpp"

namespace {

using namespace hsroot;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_budget = 2;

struct SolveFlags {
    std::optional<double> width;
    std::optional<int> hs_round;
    std::optional<double> hs_width;
    int max_rounds = 24;
    std::size_t max_boxes = 200'000'000;
    std::size_t threads = default_worker_count();
    std::string format = "text";
    bool no_hs = false;
    bool prune_only = false;
    bool no_backtrack = false;
    bool no_cluster = false;
    bool stats = false;
};

void add_solver_options(CLI::App& cmd, SolveFlags& f) {
    cmd.add_option("--width", f.width, "Target box width (default: initial width / 1024)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--hs-round", f.hs_round, "Run Hansen-Sengupta from this round on (0 = always)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--hs-width", f.hs_width, "Run Hansen-Sengupta on boxes at most this wide (default 1)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--max-rounds", f.max_rounds, "Round budget")->capture_default_str();
    cmd.add_option("--max-boxes", f.max_boxes, "Live box budget")->capture_default_str();
    cmd.add_option("--threads", f.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_flag("--no-hs", f.no_hs, "Bisection and filtering only");
    cmd.add_flag("--prune-only", f.prune_only, "Use Hansen-Sengupta to discard boxes but keep grid boxes");
    cmd.add_flag("--no-backtrack", f.no_backtrack, "Report terminal boxes without merging");
    cmd.add_flag("--no-cluster", f.no_cluster, "Do not join merged boxes that touch");
    cmd.add_flag("--stats", f.stats, "Include per-round statistics in text output");
}

SolverConfig make_config(const SolveFlags& f, const PolySystem& s) {
    SolverConfig cfg;
    cfg.target_width = f.width.value_or(s.initial_box.max_width() / 1024);
    // An explicit round trigger replaces the default width trigger unless a
    // width is also given.
    if (f.hs_round) {
        cfg.hs_enable_round = *f.hs_round;
        cfg.hs_enable_width = f.hs_width;
    } else {
        cfg.hs_enable_width = f.hs_width.value_or(1.0);
    }
    cfg.hs_enabled = !f.no_hs;
    cfg.hs_contract_output = !f.prune_only;
    cfg.max_rounds = f.max_rounds;
    cfg.max_boxes = f.max_boxes;
    cfg.worker_count = f.threads;
    cfg.validate();
    return cfg;
}

IsolateOptions make_options(const SolveFlags& f) {
    IsolateOptions opt;
    opt.backtrack = !f.no_backtrack;
    opt.cluster = !f.no_cluster;
    return opt;
}

RunReport run(const PolySystem& s, const SolverConfig& cfg, const IsolateOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.system_name = s.name;
    rep.variables = s.variables;
    rep.initial_box = s.initial_box;
    rep.config = cfg;
    rep.options = opt;
    rep.result = isolate(s, cfg, opt);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string located(const std::string& path, const std::string& what) {
    const bool has_position = !what.empty() && std::isdigit(static_cast<unsigned char>(what.front()));
    return path + (has_position ? ":" : ": ") + what;
}

std::optional<PolySystem> load(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        std::cerr << "hsroot: " << path << ": no such file\n";
        return std::nullopt;
    }
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_system(text.str(), std::filesystem::path(path).stem().string());
    } catch (const Error& e) {
        std::cerr << "hsroot: " << located(path, e.what()) << "\n";
        return std::nullopt;
    }
}

int cmd_solve(const std::string& path, const SolveFlags& f) {
    auto s = load(path);
    if (!s) return exit_input;
    SolverConfig cfg;
    try {
        cfg = make_config(f, *s);
    } catch (const ConfigError& e) {
        std::cerr << "hsroot: " << e.what() << "\n";
        return exit_input;
    }
    const RunReport rep = run(*s, cfg, make_options(f));
    if (f.format == "json") {
        std::cout << to_json(rep).dump(2) << "\n";
    } else if (f.format == "csv") {
        std::cout << to_csv(rep);
    } else {
        std::cout << to_text(rep, f.stats);
    }
    return rep.result.search.status == SolveStatus::budget_exhausted ? exit_budget : exit_ok;
}

int cmd_check(const std::string& path) {
    auto s = load(path);
    if (!s) return exit_input;
    std::cout << "system     " << s->name << "\n";
    std::cout << "dimension  " << s->dimension() << "\n";
    std::cout << "variables ";
    for (std::size_t i = 0; i < s->dimension(); ++i)
        std::cout << " " << s->variables[i] << " in " << to_string(s->initial_box[i]);
    std::cout << "\n";
    for (std::size_t i = 0; i < s->dimension(); ++i)
        std::cout << "eq " << i + 1 << "  degree " << s->equations[i].degree() << ", "
                  << s->equations[i].terms().size() << " terms\n";
    const Jacobian jac(*s);
    std::size_t nonzero = 0;
    std::cout << "jacobian sparsity\n";
    for (std::size_t i = 0; i < s->dimension(); ++i) {
        std::cout << "  ";
        for (std::size_t j = 0; j < s->dimension(); ++j) {
            const bool nz = !jac(i, j).is_zero();
            nonzero += nz;
            std::cout << (nz ? '*' : '.');
        }
        std::cout << "\n";
    }
    std::cout << nonzero << " of " << s->dimension() * s->dimension() << " entries nonzero\n";
    return exit_ok;
}

int cmd_bench(const std::string& filter, std::optional<std::size_t> max_dim, SolveFlags f, bool boxes_given) {
    // Keep each system inside desk-scale memory unless told otherwise.
    if (!boxes_given) f.max_boxes = 2'000'000;
    std::cout << std::left << std::setw(11) << "name" << std::right << std::setw(4) << "dim" << std::setw(12)
              << "initial" << std::setw(8) << "rounds" << std::setw(7) << "roots" << std::setw(11) << "reference"
              << std::setw(11) << "time(s)" << "\n";
    for (const auto& e : corpus::entries()) {
        if (!filter.empty() && e.name.find(filter) == std::string_view::npos) continue;
        PolySystem s = parse_system(std::string(e.text), std::string(e.name));
        if (max_dim && s.dimension() > *max_dim) continue;
        const SolverConfig cfg = make_config(f, s);
        const RunReport rep = run(s, cfg, make_options(f));
        const Interval& init = s.initial_box[0];
        const std::string initial = "[" + format_double(init.lo()) + " " + format_double(init.hi()) + "]";
        const bool done = rep.result.search.status != SolveStatus::budget_exhausted;
        std::ostringstream time;
        time << std::fixed << std::setprecision(3) << rep.wall_seconds;
        std::cout << std::left << std::setw(11) << e.name << std::right << std::setw(4) << s.dimension()
                  << std::setw(12) << initial << std::setw(8)
                  << (done ? std::to_string(rep.result.search.stats.size()) : "") << std::setw(7)
                  << (done ? std::to_string(rep.result.roots.size()) : "budget") << std::setw(11)
                  << (e.reference_roots ? std::to_string(*e.reference_roots) : "") << std::setw(11)
                  << (done ? time.str() : "") << std::endl;
    }
    return exit_ok;
}

// "--dim<=N" reads naturally on a shell line; CLI11 wants "--max-dim N".
std::vector<std::string> rewrite_args(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) {
        std::string a = argv[i];
        if (a.rfind("--dim<=", 0) == 0) {
            args.push_back(a.substr(7));
            args.push_back("--max-dim");
        } else {
            args.push_back(std::move(a));
        }
    }
    return args;  // CLI11 expects reversed order for vector input
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigorous isolation of real roots of polynomial systems"};
    app.set_version_flag("--version", std::string(hsroot::version));
    app.require_subcommand(1);

    SolveFlags flags;
    std::string path;

    auto* solve = app.add_subcommand("solve", "Isolate the real roots of a system file");
    solve->add_option("file", path, "System file")->required();
    add_solver_options(*solve, flags);
    solve->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();

    std::string filter;
    std::optional<std::size_t> max_dim;
    SolveFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "Run the built-in benchmark systems");
    bench->add_option("--filter", filter, "Only systems whose name contains this text");
    bench->add_option("--max-dim", max_dim, "Only systems of at most this dimension (also --dim<=N)");
    add_solver_options(*bench, bench_flags);

    auto* check = app.add_subcommand("check", "Validate a system file");
    check->add_option("file", path, "System file")->required();

    try {
        app.parse(rewrite_args(argc, argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (*solve) return cmd_solve(path, flags);
        if (*check) return cmd_check(path);
        const bool boxes_given = bench->count("--max-boxes") > 0;
        return cmd_bench(filter, max_dim, bench_flags, boxes_given);
    } catch (const hsroot::Error& e) {
        std::cerr << "hsroot: " << e.what() << "\n";
        return exit_input;
    }
}
