#include "bvctrl/controls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bvctrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_finite(std::span<const double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) fail(std::string(what) + " contains a non-finite value");
}

} // namespace

// ------------------------------ piecewise constant --------------------------

PiecewiseConstantControl PiecewiseConstantControl::make(std::vector<double> breakpoints,
                                                        std::vector<double> values) {
    if (breakpoints.size() < 2) fail("PiecewiseConstantControl: need at least two breakpoints");
    if (values.size() + 1 != breakpoints.size())
        fail("PiecewiseConstantControl: need exactly one value per interval");
    if (breakpoints.front() != 0.0) fail("PiecewiseConstantControl: first breakpoint must be 0");
    check_finite(breakpoints, "breakpoints");
    check_finite(values, "values");
    for (size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            fail("PiecewiseConstantControl: breakpoints must be strictly increasing");
    return PiecewiseConstantControl{std::move(breakpoints), std::move(values)};
}

double PiecewiseConstantControl::value_at(double t) const {
    if (t <= 0.0 || t > breakpoints.back()) return 0.0;
    // u_j on (t_{j-1}, t_j]
    const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto idx = static_cast<size_t>(it - breakpoints.begin());
    return values[std::min(idx == 0 ? 0 : idx - 1, values.size() - 1)];
}

double PiecewiseConstantControl::sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

// --------------------------------- sampled ----------------------------------

SampledBVControl SampledBVControl::make(std::vector<double> grid, std::vector<double> samples,
                                        std::optional<double> declared_tv) {
    if (grid.size() < 2) fail("SampledBVControl: need at least two grid points");
    if (grid.size() != samples.size()) fail("SampledBVControl: grid/sample size mismatch");
    check_finite(grid, "grid");
    check_finite(samples, "samples");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) fail("SampledBVControl: grid must be strictly increasing");
    if (declared_tv) {
        const double tv = sample_total_variation(samples);
        // Sampling cannot increase variation; allow roundoff on the declared value.
        if (tv > *declared_tv + 1e-9 * std::max(1.0, *declared_tv))
            fail("SampledBVControl: sampled variation " + std::to_string(tv) +
                 " exceeds declared_tv " + std::to_string(*declared_tv));
    }
    return SampledBVControl{std::move(grid), std::move(samples), declared_tv};
}

double SampledBVControl::sup_abs() const {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
}

// ----------------------------- total variation ------------------------------

double total_variation(const PiecewiseConstantControl& u, bool include_boundary) {
    // u(0) = 0 by convention, so the initial jump |u_1| is always present.
    double tv = std::abs(u.values.front());
    for (size_t j = 1; j < u.values.size(); ++j) tv += std::abs(u.values[j] - u.values[j - 1]);
    if (include_boundary) tv += std::abs(u.values.back());
    return tv;
}

double sample_total_variation(std::span<const double> samples) {
    double tv = 0.0;
    for (size_t i = 1; i < samples.size(); ++i) tv += std::abs(samples[i] - samples[i - 1]);
    return tv;
}

double total_variation(const SampledBVControl& u, bool include_boundary) {
    double tv = std::abs(u.samples.front()) + sample_total_variation(u.samples);
    if (include_boundary) tv += std::abs(u.samples.back());
    return tv;
}

// --------------------------------- L1 norm ----------------------------------

double l1_norm(const PiecewiseConstantControl& u, double T) {
    if (T < 0.0) fail("l1_norm: T must be >= 0");
    double acc = 0.0;
    for (size_t j = 0; j < u.values.size(); ++j) {
        const double a = u.breakpoints[j];
        const double b = std::min(u.breakpoints[j + 1], T);
        if (b <= a) break;
        acc += std::abs(u.values[j]) * (b - a);
    }
    return acc;
}

QuadratureResult l1_norm(const SampledBVControl& u, double T) {
    if (T < 0.0) fail("l1_norm: T must be >= 0");
    double acc = 0.0;
    double step = 0.0;
    for (size_t i = 1; i < u.grid.size(); ++i) {
        const double a = u.grid[i - 1];
        if (a >= T) break;
        const double b = std::min(u.grid[i], T);
        const double h = b - a;
        acc += 0.5 * (std::abs(u.samples[i - 1]) + std::abs(u.samples[i])) * h;
        step = std::max(step, h);
    }
    return {acc, step};
}

double l1_distance(const PiecewiseConstantControl& u, const PiecewiseConstantControl& v) {
    std::vector<double> events;
    events.reserve(u.breakpoints.size() + v.breakpoints.size());
    events.insert(events.end(), u.breakpoints.begin(), u.breakpoints.end());
    events.insert(events.end(), v.breakpoints.begin(), v.breakpoints.end());
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    double acc = 0.0;
    for (size_t i = 1; i < events.size(); ++i) {
        const double mid = 0.5 * (events[i - 1] + events[i]);
        acc += std::abs(u.value_at(mid) - v.value_at(mid)) * (events[i] - events[i - 1]);
    }
    return acc;
}

// ------------------------------ admissibility -------------------------------

double admissibility_threshold(double delta, double a) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("admissibility: delta must lie in (0,1)");
    if (a < 0.0) throw std::domain_error("admissibility: a must be >= 0");
    if (a == 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 - delta) / a;
}

bool is_admissible(const PiecewiseConstantControl& u, double delta, double a) {
    return u.sup_abs() < admissibility_threshold(delta, a);
}

bool is_admissible(const SampledBVControl& u, double delta, double a) {
    return u.sup_abs() < admissibility_threshold(delta, a);
}

// --------------------------- PC approximation -------------------------------

PiecewiseConstantControl pc_approximate(const SampledBVControl& u, int n) {
    if (n < 1) fail("pc_approximate: n must be >= 1");
    const int resolution = static_cast<int>(u.grid.size()) - 1;
    if (n > resolution)
        fail("pc_approximate: n = " + std::to_string(n) + " exceeds the sample resolution (" +
             std::to_string(resolution) + " intervals); supply a finer grid");
    if (u.grid.front() != 0.0)
        fail("pc_approximate: sample grid must start at 0");
    const double t0 = u.grid.front();
    const double T = u.grid.back();
    std::vector<double> bps(static_cast<size_t>(n) + 1);
    std::vector<double> vals(static_cast<size_t>(n));
    for (int i = 0; i <= n; ++i) bps[static_cast<size_t>(i)] = t0 + (T - t0) * i / n;
    bps.back() = T;
    for (int i = 0; i < n; ++i) {
        // left-endpoint hold: the sample at the largest grid point <= the
        // subinterval's left endpoint
        const double left = bps[static_cast<size_t>(i)];
        auto it = std::upper_bound(u.grid.begin(), u.grid.end(), left);
        const auto idx = static_cast<size_t>(it - u.grid.begin());
        vals[static_cast<size_t>(i)] = u.samples[idx == 0 ? 0 : idx - 1];
    }
    return PiecewiseConstantControl::make(std::move(bps), std::move(vals));
}

} // namespace bvctrl
