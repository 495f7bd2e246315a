// bvctrl command-line front end: simulate, bounds, converge, switch-bound,
// rotor-demo. See README.md for config file formats.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bvctrl/cli.hpp"

namespace {

bvctrl::RunConfig load_config(const std::string& config_path, const std::string& out_dir,
                              std::optional<unsigned> seed, int threads) {
    std::ifstream is(config_path);
    if (!is) throw std::runtime_error("cannot open config file " + config_path);
    bvctrl::RunConfig config;
    config.root = bvctrl::json::parse(is);
    config.out_dir = out_dir;
    config.seed_override = seed;
    config.threads = threads;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilinear conservative control systems: Galerkin propagation and a-priori bounds"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir = "out";
    int threads = 1;
    unsigned seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "run configuration JSON")->envname("BVCTRL_CONFIG");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* simulate = app.add_subcommand("simulate", "propagate and write the trajectory");
    auto* bounds = app.add_subcommand("bounds", "verify the requested a-priori bounds");
    auto* converge = app.add_subcommand("converge", "Galerkin error sweep over N");

    auto* switch_bound = app.add_subcommand("switch-bound", "switch-count lower bound");
    int k = 2;
    double epsilon = 0.0;
    std::string model = "rotor";
    double norm_b = 0.0, lambda_1 = 0.0, lambda_k = 0.0;
    switch_bound->add_option("--k", k, "target basis index")->required();
    switch_bound->add_option("--epsilon", epsilon, "neighborhood size");
    switch_bound->add_option("--model", model, "rotor | generic");
    switch_bound->add_option("--norm-b", norm_b, "coupling norm (generic)");
    switch_bound->add_option("--lambda-1", lambda_1, "first eigenvalue (generic)");
    switch_bound->add_option("--lambda-k", lambda_k, "target eigenvalue (generic)");

    auto* demo = app.add_subcommand("rotor-demo", "steering demo cos(3t)/n vs the 9/n reference");
    std::vector<int> demo_ns{10, 50};
    int demo_order = 50;
    double demo_delta = 0.1;
    demo->add_option("--n", demo_ns, "values of n to run");
    demo->add_option("--order", demo_order, "Galerkin order");
    demo->add_option("--delta", demo_delta, "admissibility margin");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::optional<unsigned> seed_opt =
            seed_set ? std::optional<unsigned>(seed) : std::nullopt;
        if (simulate->parsed() || bounds->parsed() || converge->parsed()) {
            if (config_path.empty()) {
                std::cerr << "error: --config is required for this subcommand\n";
                return bvctrl::kUsageError;
            }
            const bvctrl::RunConfig config = load_config(config_path, out_dir, seed_opt, threads);
            if (simulate->parsed()) return bvctrl::cmd_simulate(config, std::cout);
            if (bounds->parsed()) return bvctrl::cmd_bounds(config, std::cout);
            return bvctrl::cmd_converge(config, std::cout);
        }
        if (switch_bound->parsed()) {
            if (model == "rotor") return bvctrl::cmd_switch_bound_rotor(k, epsilon, std::cout);
            return bvctrl::cmd_switch_bound(k, epsilon, norm_b, lambda_1, lambda_k, std::cout);
        }
        return bvctrl::cmd_rotor_demo(demo_ns, demo_order, demo_delta, out_dir, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bvctrl::kUsageError;
    }
}
