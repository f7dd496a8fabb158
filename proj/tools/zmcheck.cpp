#include <iostream>

#include "CLI11.hpp"
#include "zm/app.hpp"
#include "zm/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zmcheck: zero-mode inequality verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    std::uint64_t seed = 0;
    std::string fault;

    for (const char* name : {"verify", "identities", "eig", "norms"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--out", out_dir, "output directory (overrides run.out)");
        sub->add_option("--workers", workers, "worker threads (0 = hardware)");
        sub->add_option("--seed", seed, "sampling seed (overrides run.seed)");
        sub->add_option("--debug-fault", fault, "inject a fault: dA-sign");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    const auto* sub = app.get_subcommands().front();

    zm::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = zm::load_config(config_path);
    } catch (const zm::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return zm::kExitConfig;
    }
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--out")) cfg.out_dir = out_dir;
    if (workers > 0) zm::set_worker_count(workers);

    const zm::CommandResult result = zm::run_command(command, cfg, fault);
    if (result.exit_code == zm::kExitConfig) {
        std::cerr << result.summary;
        return result.exit_code;
    }
    std::cout << result.summary;
    try {
        zm::write_outputs(result, cfg.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "cannot write outputs: " << e.what() << "\n";
        return zm::kExitConfig;
    }
    return result.exit_code;
}
