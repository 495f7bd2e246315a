#include "bvctrl/estimates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bvctrl {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
}

void check_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) throw std::domain_error(std::string(what) + " must be >= 0");
}

} // namespace

// ------------------------------ energy growth -------------------------------

double energy_bound(double a, double delta, double tv) {
    check_nonnegative(a, "a");
    check_delta(delta);
    check_nonnegative(tv, "tv");
    return std::exp((2.0 * a / delta) * tv);
}

BoundReport verify_energy_bound(const GalerkinSystem& system,
                                const PiecewiseConstantControl& u,
                                const StateVector& psi0,
                                std::span<const double> record_times) {
    const double ref = weighted_norm(system, psi0, 1.0, NormKind::Homogeneous);
    if (!(ref > 0.0))
        throw std::invalid_argument("verify_energy_bound: initial state has zero energy norm");
    const Trajectory traj = propagate_pc(system, u, psi0, record_times, 1.0);
    double measured = 0.0;
    for (const auto& p : traj.diagnostics) measured = std::max(measured, p.homogeneous_r / ref);

    const double a = system.constants().a;
    const double delta = system.delta();
    const double tv = total_variation(u, false);

    BoundReport report;
    report.name = "energy";
    report.measured = measured;
    report.bound = energy_bound(a, delta, tv);
    report.inputs = {{"a", a},
                     {"delta", delta},
                     {"TV", tv},
                     {"N", static_cast<double>(system.order())},
                     {"psi0_h1", ref}};
    report.estimated_constants = system.constants().estimated;
    return report.finalize();
}

double shifted_energy_bound(double a, double delta, double tv, double eta) {
    if (eta < 0.0) eta = 0.01 * a;
    return energy_bound(a + eta, delta, tv);
}

// ------------------------------- truncation ----------------------------------

double truncation_bound(double tv, double a, double delta, double h1_norm,
                        double lambda_next, double r) {
    check_nonnegative(tv, "tv");
    check_nonnegative(a, "a");
    check_delta(delta);
    check_nonnegative(h1_norm, "h1_norm");
    if (!(lambda_next > 0.0)) throw std::domain_error("truncation_bound: lambda_next must be > 0");
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("truncation_bound: r must lie in [0,1)");
    return std::exp((2.0 / delta) * a * tv) * h1_norm / std::pow(lambda_next, 1.0 - r);
}

// --------------------------- Galerkin approximation -------------------------

double gga_error_bound(double l1, double K, double d, double a, double delta,
                       double alpha, double lambda_next, double h1_norm) {
    check_nonnegative(l1, "l1");
    check_nonnegative(K, "K");
    check_nonnegative(d, "d");
    check_nonnegative(a, "a");
    check_delta(delta);
    check_nonnegative(h1_norm, "h1_norm");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("gga_error_bound: alpha must lie in [0,1)");
    if (!(lambda_next > 0.0)) throw std::domain_error("gga_error_bound: lambda_next must be > 0");
    return l1 * (1.0 + d * K) * d * std::exp((2.0 / delta) * a * K) *
           std::pow(lambda_next, alpha - 1.0) * h1_norm;
}

int gga_dimension_for(double epsilon, double K, double d, double a, double delta,
                      double alpha, double h1_norm, const SpectralDrift& drift,
                      int search_cap) {
    if (!(epsilon > 0.0)) throw std::domain_error("gga_dimension_for: epsilon must be > 0");
    auto bound_at = [&](int N) {
        return gga_error_bound(K, K, d, a, delta, alpha, drift.eigenvalue(N + 1), h1_norm);
    };
    // The bound is non-increasing in N (lambda_{N+1} non-decreasing), so probe
    // by doubling, then bisect for the smallest satisfying order.
    int lo = 1;
    if (bound_at(lo) < epsilon) return lo;
    int hi = 2;
    while (!(bound_at(hi) < epsilon)) {
        lo = hi;
        if (hi > search_cap / 2) {
            if (!(bound_at(search_cap) < epsilon))
                throw std::runtime_error("gga_dimension_for: bound still " +
                                         std::to_string(bound_at(search_cap)) + " at search cap N = " +
                                         std::to_string(search_cap));
            hi = search_cap;
            break;
        }
        hi *= 2;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (bound_at(mid) < epsilon ? hi : lo) = mid;
    }
    return hi;
}

// ------------------------------ switch counts -------------------------------

double switch_count_lower_bound(int k, double epsilon, double norm_b,
                                double lambda_1, double lambda_k) {
    if (k < 1) throw std::domain_error("switch_count_lower_bound: k must be >= 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::domain_error("switch_count_lower_bound: epsilon must lie in [0,1)");
    if (!(norm_b > 0.0)) throw std::domain_error("switch_count_lower_bound: norm_b must be > 0");
    return (lambda_k * (1.0 - epsilon) - lambda_1) / norm_b;
}

TvLowerBound bang_bang_tv_lower_bound(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::domain_error("bang_bang_tv_lower_bound: epsilon must lie in [0,1)");
    const double arg = 2.0 * (1.0 - epsilon);
    if (arg <= 1.0) return {0.0, true};
    return {std::log(arg) / 4.0, false};
}

double tv_lower_bound_generic(double delta, double a, double norm_ratio) {
    check_delta(delta);
    if (!(a > 0.0)) throw std::domain_error("tv_lower_bound_generic: a must be > 0");
    if (!(norm_ratio > 0.0)) throw std::domain_error("tv_lower_bound_generic: ratio must be > 0");
    return norm_ratio <= 1.0 ? 0.0 : (delta / (2.0 * a)) * std::log(norm_ratio);
}

double switch_growth_bound(double psi0_h1, double norm_b, int switch_count) {
    check_nonnegative(psi0_h1, "psi0_h1");
    check_nonnegative(norm_b, "norm_b");
    if (switch_count < 0) throw std::domain_error("switch_growth_bound: switch count must be >= 0");
    return psi0_h1 + norm_b * switch_count;
}

double switch_growth_bound_tv(double psi0_h1, double norm_b, double tv_boundary_inclusive) {
    check_nonnegative(psi0_h1, "psi0_h1");
    check_nonnegative(norm_b, "norm_b");
    check_nonnegative(tv_boundary_inclusive, "tv");
    return psi0_h1 + norm_b * tv_boundary_inclusive;
}

} // namespace bvctrl
