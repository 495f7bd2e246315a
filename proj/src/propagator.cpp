#include "bvctrl/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

namespace bvctrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Eigendecomposition of the Hermitian generator H = i(A_N + u B_N), reused to
// step a state over any interval length.
struct StepDecomposition {
    Eigen::VectorXd frequencies; // eigenvalues of H
    Eigen::MatrixXcd vectors;    // unitary V, columns are eigenvectors

    StateVector apply(double dt, const StateVector& psi) const {
        Eigen::VectorXcd y = vectors.adjoint() * psi;
        for (Eigen::Index k = 0; k < y.size(); ++k)
            y[k] *= std::polar(1.0, -dt * frequencies[k]);
        return vectors * y;
    }

    Eigen::MatrixXcd matrix(double dt) const {
        Eigen::VectorXcd phases(frequencies.size());
        for (Eigen::Index k = 0; k < frequencies.size(); ++k)
            phases[k] = std::polar(1.0, -dt * frequencies[k]);
        return vectors * phases.asDiagonal() * vectors.adjoint();
    }
};

// The generator is real symmetric tri-diagonal exactly when the coupling has
// bandwidth <= 1 and purely imaginary entries (all three example models);
// i B is then real and H = diag(lambda) + u * iB needs no complex solver.
bool has_real_tridiagonal_generator(const GalerkinSystem& system) {
    if (!system.bandwidth() || *system.bandwidth() > 1) return false;
    const auto& b = system.coupling_matrix();
    const int n = system.order();
    for (int j = 0; j < n; ++j) {
        if (b(j, j).real() != 0.0) return false;
        if (j + 1 < n && (b(j, j + 1).real() != 0.0 || b(j + 1, j).real() != 0.0)) return false;
    }
    return true;
}

StepDecomposition decompose(const GalerkinSystem& system, double u) {
    if (!std::isfinite(u)) fail("propagator: control value must be finite");
    const int n = system.order();
    if (has_real_tridiagonal_generator(system)) {
        Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
        const auto& b = system.coupling_matrix();
        for (int j = 0; j < n; ++j) diag[j] = system.eigenvalues()[j] - u * b(j, j).imag();
        for (int j = 0; j + 1 < n; ++j) off[j] = -u * b(j, j + 1).imag();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("propagator: tri-diagonal eigendecomposition failed at order " +
                                     std::to_string(n));
        // renormalize the columns: the QL accumulation leaves them a few ulps
        // off unit length, which biases the norm over long concatenations
        Eigen::MatrixXd v = es.eigenvectors();
        for (int k = 0; k < n; ++k) v.col(k) /= v.col(k).norm();
        return {es.eigenvalues(), v.cast<Complex>()};
    }
    Eigen::MatrixXcd h = system.coupling_matrix() * Complex(0.0, u); // i u B
    for (int j = 0; j < n; ++j) h(j, j) += Complex(system.eigenvalues()[j], 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "propagator: eigendecomposition failed at order " << n << ", u = " << u
           << ", max |H| = " << h.cwiseAbs().maxCoeff();
        throw std::runtime_error(os.str());
    }
    Eigen::MatrixXcd v = es.eigenvectors();
    for (int k = 0; k < n; ++k) v.col(k) /= v.col(k).norm();
    return {es.eigenvalues(), std::move(v)};
}

// Reuses decompositions across intervals that share a control value. Only
// worth the memory when few distinct values occur (bang-bang controls).
class StepCache {
public:
    StepCache(const GalerkinSystem& system, bool enabled)
        : system_(system), enabled_(enabled) {}

    const StepDecomposition& get(double u) {
        if (!enabled_) {
            scratch_ = decompose(system_, u);
            return scratch_;
        }
        const auto key = std::bit_cast<std::uint64_t>(u);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, decompose(system_, u)).first;
        return it->second;
    }

private:
    const GalerkinSystem& system_;
    bool enabled_;
    std::unordered_map<std::uint64_t, StepDecomposition> cache_;
    StepDecomposition scratch_;
};

bool few_distinct_values(const std::vector<double>& values) {
    constexpr size_t kCacheLimit = 64;
    std::vector<double> v(values);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v.size() <= kCacheLimit;
}

void check_admissible(const GalerkinSystem& system, double sup_u) {
    if (!system.has_constants() || system.constants().a == 0.0) return;
    const double threshold = system.admissibility_threshold();
    if (!(sup_u < threshold)) throw AdmissibilityError(sup_u, threshold);
}

TrajectoryPoint diagnostics_at(const GalerkinSystem& system, const StateVector& psi, double r) {
    return {psi.norm(), weighted_norm(system, psi, r, NormKind::Homogeneous),
            weighted_norm(system, psi, r, NormKind::Sobolev)};
}

} // namespace

AdmissibilityError::AdmissibilityError(double sup_u, double threshold)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "control is not admissible: sup|u| = " << sup_u
             << " must stay strictly below (1-delta)/a = " << threshold;
          return os.str();
      }()),
      sup_u_(sup_u),
      threshold_(threshold) {}

BvConvergenceError::BvConvergenceError(BvConvergence record)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "BV refinement did not converge; increments:";
          for (double inc : record.increments) os << " " << inc;
          return os.str();
      }()),
      record_(std::move(record)) {}

Eigen::MatrixXcd step_unitary(const GalerkinSystem& system, double u, double dt) {
    if (dt < 0.0) fail("step_unitary: dt must be >= 0");
    return decompose(system, u).matrix(dt);
}

Trajectory propagate_pc(const GalerkinSystem& system, const PiecewiseConstantControl& u,
                        const StateVector& psi0, std::span<const double> record_times,
                        double diagnostic_r) {
    const int n = system.order();
    if (psi0.size() != n) fail("propagate_pc: initial state size does not match system order");
    check_admissible(system, u.sup_abs());

    const double T = u.duration();
    std::vector<double> records(record_times.begin(), record_times.end());
    std::sort(records.begin(), records.end());
    records.erase(std::unique(records.begin(), records.end()), records.end());
    for (double t : records)
        if (t < 0.0 || t > T) fail("propagate_pc: record time outside [0, T]");

    std::vector<double> events = u.breakpoints;
    events.insert(events.end(), records.begin(), records.end());
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    Trajectory traj;
    traj.diagnostic_r = diagnostic_r;
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    traj.diagnostics.push_back(diagnostics_at(system, psi0, diagnostic_r));

    StepCache cache(system, few_distinct_values(u.values));
    StateVector psi = psi0;
    for (size_t i = 1; i < events.size(); ++i) {
        const double dt = events[i] - events[i - 1];
        if (dt > 0.0) {
            const double value = u.value_at(0.5 * (events[i - 1] + events[i]));
            psi = cache.get(value).apply(dt, psi);
        }
        if (std::binary_search(records.begin(), records.end(), events[i])) {
            traj.times.push_back(events[i]);
            traj.states.push_back(psi);
            traj.diagnostics.push_back(diagnostics_at(system, psi, diagnostic_r));
        }
    }
    return traj;
}

StateVector propagate_pc_final(const GalerkinSystem& system, const PiecewiseConstantControl& u,
                               const StateVector& psi0) {
    const double T = u.duration();
    return propagate_pc(system, u, psi0, std::span<const double>(&T, 1)).states.back();
}

BvConvergence propagate_bv(const GalerkinSystem& system, const SampledBVControl& u,
                           const StateVector& psi0, double tol,
                           int initial_refinement, int max_doublings) {
    if (!(tol > 0.0)) fail("propagate_bv: tol must be > 0");
    if (initial_refinement < 1) fail("propagate_bv: initial refinement must be >= 1");
    if (!system.has_constants() || system.constants().a <= 0.0)
        fail("propagate_bv: system constants with a > 0 are required for the Duhamel estimate");
    check_admissible(system, u.sup_abs());

    const double a = system.constants().a;
    const double delta = system.delta();
    const double h1 = weighted_norm(system, psi0, 1.0, NormKind::Homogeneous);
    if (!std::isfinite(h1)) fail("propagate_bv: initial state has non-finite energy norm");

    const int resolution = static_cast<int>(u.grid.size()) - 1;
    BvConvergence result;
    int n = std::min(initial_refinement, resolution);

    PiecewiseConstantControl prev_pc = pc_approximate(u, n);
    result.refinements.push_back(n);
    StateVector prev = propagate_pc_final(system, prev_pc, psi0);
    result.state = prev;

    for (int k = 0; k < max_doublings; ++k) {
        if (2 * n > resolution) break;
        n *= 2;
        PiecewiseConstantControl pc = pc_approximate(u, n);
        StateVector cur = propagate_pc_final(system, pc, psi0);
        const double increment = (cur - prev).norm();
        // Duhamel a-priori bound: the integrand ||B Y^{u_m} psi|| is controlled
        // by the energy estimate through a and TV of the coarser approximant.
        const double duhamel = l1_distance(pc, prev_pc) * a *
                               std::exp((2.0 * a / delta) * total_variation(prev_pc, false)) * h1;
        result.refinements.push_back(n);
        result.increments.push_back(increment);
        result.duhamel_bounds.push_back(duhamel);
        result.state = cur;
        prev = std::move(cur);
        prev_pc = std::move(pc);
        if (increment < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

BvConvergence propagate_bv_checked(const GalerkinSystem& system, const SampledBVControl& u,
                                   const StateVector& psi0, double tol,
                                   int initial_refinement, int max_doublings) {
    BvConvergence r = propagate_bv(system, u, psi0, tol, initial_refinement, max_doublings);
    if (!r.converged) throw BvConvergenceError(std::move(r));
    return r;
}

Trajectory shift_phase(Trajectory trajectory, double lambda) {
    for (size_t i = 0; i < trajectory.states.size(); ++i)
        trajectory.states[i] *= std::polar(1.0, -lambda * trajectory.times[i]);
    return trajectory;
}

Complex overlap(const StateVector& state, int k) {
    if (k < 1 || k > state.size())
        throw std::out_of_range("overlap: index " + std::to_string(k) + " outside 1.." +
                                std::to_string(state.size()));
    return state[k - 1];
}

} // namespace bvctrl
