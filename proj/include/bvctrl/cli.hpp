// cli.hpp — command implementations behind the bvctrl executable
//
// Each command takes a parsed run configuration, writes its files under
// out_dir and returns a process exit code. Keeping them here (not in main)
// lets the test suites drive them directly.
#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "bvctrl/json_io.hpp"

namespace bvctrl {

enum ExitCode : int {
    kOk = 0,
    kBoundViolation = 1, // a report with analytic constants came back unsatisfied
    kUsageError = 2,
    kInadmissible = 3,
    kNoConvergence = 4,
};

struct RunConfig {
    json root;
    std::filesystem::path out_dir = "out";
    std::optional<unsigned> seed_override;
    int threads = 1;
};

// Propagates the configured system/control and writes trajectory.csv and
// summary.json (plus convergence.json for sampled controls).
int cmd_simulate(const RunConfig& config, std::ostream& log);

// Emits the requested BoundReports (energy | truncation | gga | switches) as
// reports.json / reports.csv. Violation of a bound with analytic constants is
// a hard failure; with estimated constants it is logged as a warning.
int cmd_bounds(const RunConfig& config, std::ostream& log);

// N-sweep of the Galerkin error against the closed-form bound; writes
// convergence.csv with columns N, measured_error, gga_bound.
int cmd_converge(const RunConfig& config, std::ostream& log);

// Prints the switch-count lower bound (and its ceiling) for steering phi_1
// into an eps-neighborhood of phi_k.
int cmd_switch_bound(int k, double epsilon, double norm_b, double lambda_1, double lambda_k,
                     std::ostream& os);

// Rotor specialization: lambda_k = k^2, ||B|| = sqrt(2), plus the bang-bang
// TV lower bound log(2(1-eps))/4.
int cmd_switch_bound_rotor(int k, double epsilon, std::ostream& os);

// Steering demo: cos(3t)/n over [0, 2 pi n] from phi_1; reports the overlaps
// with phi_1 and phi_2 next to the 9/n reference and writes rotor_demo.csv.
int cmd_rotor_demo(const std::vector<int>& ns, int order, double delta,
                   const std::filesystem::path& out_dir, std::ostream& log);

} // namespace bvctrl
