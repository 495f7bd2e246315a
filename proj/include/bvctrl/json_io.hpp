// json_io.hpp — spec parsing and file output
//
// System specs:  { "model": "rotor" | "anharmonic" | "trap" | "custom",
//                  "params": {...}, "N": int, "delta": number? }
//   custom params: { "eigenvalues": [...], "coupling": [[j,k,re,im],...] } (1-based)
// Control specs: { "kind": "pc", "breakpoints": [...], "values": [...] }
//              | { "kind": "sampled", "grid": [...], "samples": [...], "declared_tv": number? }
//              | { "kind": "analytic", "form": "cosine", "amplitude": number,
//                  "frequency": number, "duration": number, "resolution": int }
#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "bvctrl/controls.hpp"
#include "bvctrl/models.hpp"
#include "bvctrl/operators.hpp"
#include "bvctrl/propagator.hpp"
#include "bvctrl/report.hpp"

namespace bvctrl {

using json = nlohmann::json;

using ControlSpec = std::variant<PiecewiseConstantControl, SampledBVControl>;

struct SystemBundle {
    GalerkinSystem system;
    std::string model;
    std::map<std::string, double> metadata;
};

// Builds the order-N system named by the spec, with delta (default 0.1) and
// the model's constants attached. Custom systems may carry a "constants"
// object { "a", "b", "d", "alpha", "estimated" }; without one their constants
// stay unset and admissibility is not enforced.
SystemBundle system_from_json(const json& spec);

// Same spec, compressed at a different order (reference runs).
SystemBundle system_from_json(const json& spec, int order);

ControlSpec control_from_json(const json& spec);
double control_duration(const ControlSpec& control);
double control_sup_abs(const ControlSpec& control);

// amplitude * cos(frequency t) on [0, duration] with the exact analytic TV declared.
SampledBVControl cosine_control(double amplitude, double frequency, double duration,
                                int resolution);

// { "basis_index": k } or { "coefficients": [[re,im], ...] }.
StateVector initial_state_from_json(const json& spec, int N);

json report_to_json(const BoundReport& report);
void write_reports_csv(std::ostream& os, std::span<const BoundReport> reports);

// Columns: t, re_c1, im_c1, ..., norm, h1_norm (17 significant digits).
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

std::string format_g17(double x);
std::uint64_t fnv1a_hash(std::string_view bytes);

} // namespace bvctrl
