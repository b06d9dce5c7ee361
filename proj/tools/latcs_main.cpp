#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "latcs/runner.hpp"
#include "latcs/version.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int workers = 0;
};

void attach_common(CLI::App* sub, CommonOptions& opts) {
    sub->add_option("--config", opts.config, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory (overrides config and LATCS_OUT_DIR)");
    sub->add_option("--seed", opts.seed, "random seed override for sampled Green values")
        ->each([&opts](const std::string&) { opts.has_seed = true; });
    sub->add_option("--workers", opts.workers, "worker thread count override")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("latcs ") + latcs::kVersion +
                 " - topological vortex solver on integer lattices"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"solve", "solve one configuration on an exhausting box chain"},
        {"sweep", "run a coupling schedule (rising sweep or vanishing-coupling study)"},
        {"green", "tabulate the lattice Green's function"},
        {"decay", "solve and fit the axis decay rate"},
        {"uniqueness", "multi-start agreement probe"},
    };
    std::array<CommonOptions, 5> opts;
    for (std::size_t i = 0; i < 5; ++i)
        attach_common(app.add_subcommand(commands[i].first, commands[i].second), opts[i]);

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < 5; ++i) {
        CLI::App* sub = app.get_subcommand(commands[i].first);
        if (!sub->parsed()) continue;
        const CommonOptions& o = opts[i];
        return latcs::run_from_file(commands[i].first, o.config, o.out, o.has_seed, o.seed,
                                    o.workers);
    }
    return 2;
}
