#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "starwave/config.hpp"
#include "starwave/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"star-lattice wave dynamics, scattering and mode inversion"};
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("config", config_path, "run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (default: current)");
    app.add_option("--seed", seed, "override the configuration seed")
        ->each([&](const std::string&) { seed_set = true; });
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << "\n";
            return 1;
        }
        std::ostringstream text;
        text << in.rdbuf();

        starwave::RunConfig cfg = starwave::parse_config(text.str());
        if (seed_set) cfg.seed = seed;
        return starwave::run(cfg, out_dir).exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
