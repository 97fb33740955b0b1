// hbeq: command-line front end for the heterogeneous-beliefs equilibrium.
//
//   hbeq run config.txt            mode taken from the config's `mode` key
//   hbeq measures config.txt       mode given by the subcommand
//   hbeq check                     randomized invariant battery (config optional)

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hbeq/run.hpp"

namespace {

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw hbeq::ParseError(0, "", "cannot read config file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-period heterogeneous-beliefs asset-pricing equilibrium: solve, measure, simulate, check"};
    app.require_subcommand(1);
    app.fallthrough();

    hbeq::ValidationOptions validation;
    hbeq::RunOptions opts;
    std::string out;
    std::string dump;
    app.add_flag("--allow-homogeneous", validation.allow_homogeneous,
                 "accept sigma_theta2_informed == sigma_theta2_true (degenerate test case)");
    app.add_option("--pi-min", validation.pi_min, "lower bound for pi")->capture_default_str();
    app.add_option("--pi-max", validation.pi_max, "upper bound for pi")->capture_default_str();
    app.add_option("--threads", opts.threads, "worker threads for simulation batches")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--out", out, "output path, overrides output.path ('-' for stdout)");
    app.add_option("--dump-paths", dump, "write per-path CSV (simulate mode)");
    app.add_option("--dump-limit", opts.dump_limit, "maximum number of dumped paths")->capture_default_str();

    std::string config_path;
    std::optional<hbeq::Mode> mode;

    auto* run_cmd = app.add_subcommand("run", "run the mode named in the config");
    run_cmd->add_option("config", config_path, "config file ('-' for stdin)")->required();
    run_cmd->callback([&] { mode.reset(); });

    const char* modes[] = {"solve", "measures", "simulate", "sweep", "multi-solve", "multi-measures", "multi-simulate",
                           "leadlag", "check"};
    for (const char* name : modes) {
        const auto m = *hbeq::parse_mode(name);
        auto* sub = app.add_subcommand(name, std::string("run in ") + name + " mode");
        auto* opt = sub->add_option("config", config_path, "config file ('-' for stdin)");
        if (m != hbeq::Mode::check) opt->required();
        sub->callback([&mode, m] { mode = m; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? hbeq::exit_code::ok : hbeq::exit_code::config;
    }

    if (!out.empty()) opts.out = out;
    if (!dump.empty()) opts.dump_paths = dump;

    try {
        const std::string text = config_path.empty() ? std::string("mode = check\n") : read_text(config_path);
        const auto cfg = hbeq::parse_config(text, mode, validation);
        return hbeq::run(cfg, opts, std::cout, std::cerr);
    } catch (const hbeq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hbeq::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hbeq::exit_code::numerical;
    }
}
