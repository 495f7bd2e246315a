// controls.hpp — bounded-variation control signals and their functionals
//
// Controls vanish for t <= 0 by convention. Piecewise-constant controls hold
// value u_j on (t_{j-1}, t_j]; sampled controls carry a grid of point values
// and approximate a BV function by left-endpoint hold.
#pragma once

#include <optional>
#include <span>
#include <vector>

namespace bvctrl {

// ------------------------------ piecewise constant --------------------------

struct PiecewiseConstantControl {
    std::vector<double> breakpoints; // 0 = t_0 < t_1 < ... < t_p = T
    std::vector<double> values;      // u_j on (t_{j-1}, t_j]

    static PiecewiseConstantControl make(std::vector<double> breakpoints,
                                         std::vector<double> values);

    int intervals() const { return static_cast<int>(values.size()); }
    double duration() const { return breakpoints.back(); }
    double value_at(double t) const; // 0 for t <= 0 and t > T
    double sup_abs() const;
};

// --------------------------------- sampled ----------------------------------

struct SampledBVControl {
    std::vector<double> grid;    // strictly increasing, grid[0] = 0
    std::vector<double> samples; // point values on the grid
    std::optional<double> declared_tv; // analytic total variation when known

    static SampledBVControl make(std::vector<double> grid, std::vector<double> samples,
                                 std::optional<double> declared_tv = std::nullopt);

    double duration() const { return grid.back(); }
    double sup_abs() const;
};

// ----------------------------- total variation ------------------------------

// TV over [0,T] under the u(t <= 0) = 0 convention: |u_1| + sum |u_j - u_{j-1}|.
// With include_boundary, the terminal return-to-zero jump |u_p| is appended,
// giving TV over the whole line for a compactly supported control.
double total_variation(const PiecewiseConstantControl& u, bool include_boundary = false);

// Sum of absolute increments of a sample sequence (no boundary convention).
double sample_total_variation(std::span<const double> samples);

// TV of the sampled sequence under the same conventions as above.
double total_variation(const SampledBVControl& u, bool include_boundary = false);

// --------------------------------- L1 norm ----------------------------------

// Integral of |u| over [0, T]; exact for piecewise-constant controls.
double l1_norm(const PiecewiseConstantControl& u, double T);

struct QuadratureResult {
    double value = 0.0;
    double step = 0.0; // largest grid step used by the trapezoid rule
};

// Trapezoid rule on the sample grid, truncated at T.
QuadratureResult l1_norm(const SampledBVControl& u, double T);

// Exact integral of |u - v| over the union of both domains.
double l1_distance(const PiecewiseConstantControl& u, const PiecewiseConstantControl& v);

// ------------------------------ admissibility -------------------------------

// (1 - delta) / a, the open bound on sup|u| for the admissible set; +inf when
// a = 0 (coupling bounded relative to the identity).
double admissibility_threshold(double delta, double a);

bool is_admissible(const PiecewiseConstantControl& u, double delta, double a);
bool is_admissible(const SampledBVControl& u, double delta, double a);

// --------------------------- PC approximation -------------------------------

// Left-endpoint hold on n uniform subintervals of the sample domain. Point
// sampling never increases variation, so TV(result) <= TV(samples), and
// refining n converges pointwise at continuity points.
PiecewiseConstantControl pc_approximate(const SampledBVControl& u, int n);

} // namespace bvctrl
