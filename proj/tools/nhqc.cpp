// Command-line front end: every subcommand reads an optional config file,
// applies --set overrides, then writes one or more tables.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nhqc/runs.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    std::string format;
    int threads = 0;
};

// Precedence: command-line flag > --set > config file > built-in default.
nhqc::RunConfig build_config(const CliArgs& args, const CLI::App* cmd) {
    nhqc::RunConfig cfg;
    if (!args.config_path.empty()) cfg = nhqc::parse_config_file(args.config_path, cfg);
    for (const std::string& kv : args.sets) nhqc::apply_override(cfg, kv);
    if (cmd->count("--out") > 0) cfg.output_path = args.out;
    if (cmd->count("--format") > 0) cfg.format = args.format;
    if (cmd->count("--threads") > 0) cfg.threads = args.threads;
    if (cfg.format != "csv" && cfg.format != "json")
        throw nhqc::ConfigError("output.format must be csv or json, got '" + cfg.format +
                                "'");
    if (cfg.threads < 1) throw nhqc::ConfigError("threads must be >= 1");
    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    return cfg;
}

void add_common(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "key = value config file");
    cmd->add_option("--set", args.sets, "override one config key (key=value), repeatable");
    cmd->add_option("--out", args.out, "output path (multi-file commands use it as a stem)");
    cmd->add_option("--format", args.format, "csv or json");
    cmd->add_option("--threads", args.threads, "worker threads for grid commands");
}

void announce(const std::string& path, const nhqc::Table& t) {
    std::cout << "wrote " << path << " (" << t.rows.size() << " rows)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit dissipative-coupling simulator"};
    app.require_subcommand(1);
    CliArgs args;

    const std::vector<std::pair<std::string, std::string>> table_help = {
        {"spectrum", "effective model and eigenmodes at a single parameter point"},
        {"scan2d", "complex spectrum over a 2-D parameter grid"},
        {"epfind", "locate spectral degeneracies on a line or grid"},
        {"evolve", "no-jump state evolution at one parameter point"},
        {"nonrecip", "directional coupling strengths over a 2-D grid"},
        {"asym", "two-run excitation asymmetry over a parameter axis"},
        {"oracle", "compare the reduced model against full-circuit references"},
    };
    for (const auto& [name, help] : table_help) add_common(app.add_subcommand(name, help), args);
    for (const char* fig : {"fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6", "fig7"})
        add_common(app.add_subcommand(fig, std::string("preset dataset ") + fig), args);
    add_common(app.add_subcommand("selftest", "run built-in invariant checks"), args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    try {
        const nhqc::RunConfig cfg = build_config(args, cmd);
        if (name == "selftest") return nhqc::run_selftest(cfg, std::cout);
        if (name.rfind("fig", 0) == 0) {
            for (const auto& [path, table] : nhqc::run_figure(name, cfg)) {
                nhqc::write_table(table, path, cfg.format);
                announce(path, table);
            }
            return 0;
        }
        nhqc::Table table;
        if (name == "spectrum") table = nhqc::run_spectrum(cfg);
        else if (name == "scan2d") table = nhqc::run_scan2d(cfg);
        else if (name == "epfind") table = nhqc::run_epfind(cfg);
        else if (name == "evolve") table = nhqc::run_evolve(cfg);
        else if (name == "nonrecip") table = nhqc::run_nonrecip(cfg);
        else if (name == "asym") table = nhqc::run_asym(cfg);
        else if (name == "oracle") table = nhqc::run_oracle(cfg);
        nhqc::write_table(table, cfg.output_path, cfg.format);
        announce(cfg.output_path, table);
        return 0;
    } catch (const nhqc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nhqc::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nhqc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
