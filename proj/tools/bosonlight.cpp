#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bosonlight/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bosonlight: exact-dynamics experiments for truncated Bose-Hubbard "
                 "lattices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    std::int64_t seed = -1;
    bool validate_only = false;

    const std::vector<std::string> experiments = {"constants", "transport", "lr", "hhkl",
                                                  "protocol"};
    for (const auto& name : experiments) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "TOML config file")->required();
        sub->add_option("--out-dir", out_dir, "directory for CSV/JSON output");
        sub->add_option("--workers", workers, "worker threads (0: hardware)");
        sub->add_option("--seed", seed, "override the config RNG seed");
        sub->add_flag("--validate", validate_only,
                      "dry-run: check the config and print findings");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string experiment = app.get_subcommands().front()->get_name();

    std::string config_text;
    try {
        config_text = read_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return bosonlight::kExitInvalidConfig;
    }

    if (validate_only) {
        std::cout << bosonlight::validate_config(experiment, config_text);
        return 0;
    }

    bosonlight::RunOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    if (seed >= 0) options.seed_override = static_cast<std::uint64_t>(seed);

    const bosonlight::RunOutcome outcome =
        bosonlight::run_experiment(experiment, config_text, options);
    if (!outcome.message.empty())
        (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.message << "\n";
    if (outcome.exit_code == 0)
        std::cout << experiment << ": " << outcome.report.points.size()
                  << " rows, all checks satisfied\n";
    return outcome.exit_code;
}
