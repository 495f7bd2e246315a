// propagator.hpp — unitary propagation of the compressed system
//
// Piecewise-constant controls are propagated by exact per-interval matrix
// exponentials of the skew-Hermitian generator; bounded-variation controls by
// the Cauchy limit over refining piecewise-constant approximants.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bvctrl/controls.hpp"
#include "bvctrl/operators.hpp"

namespace bvctrl {

using StateVector = Eigen::VectorXcd;

// ------------------------------- trajectory ---------------------------------

struct TrajectoryPoint {
    double norm = 0.0;
    double homogeneous_r = 0.0; // || |A|^r psi ||
    double sobolev_r = 0.0;     // || (1+|A|)^r psi ||
};

struct Trajectory {
    std::vector<double> times;        // times[0] = 0
    std::vector<StateVector> states;  // states[0] = initial state
    std::vector<TrajectoryPoint> diagnostics;
    double diagnostic_r = 1.0;
};

// --------------------------------- errors -----------------------------------

class AdmissibilityError : public std::runtime_error {
public:
    AdmissibilityError(double sup_u, double threshold);
    double sup_u() const { return sup_u_; }
    double threshold() const { return threshold_; }

private:
    double sup_u_;
    double threshold_;
};

struct BvConvergence {
    StateVector state;                  // final state at the last refinement
    std::vector<int> refinements;       // interval counts n_0, 2 n_0, ...
    std::vector<double> increments;     // || psi_{2n} - psi_n ||
    std::vector<double> duhamel_bounds; // a-priori bound on each increment
    bool converged = false;
};

class BvConvergenceError : public std::runtime_error {
public:
    explicit BvConvergenceError(BvConvergence record);
    const BvConvergence& record() const { return record_; }

private:
    BvConvergence record_;
};

// --------------------------------- stepping ---------------------------------

// exp(dt (A_N + u B_N)) via Hermitian eigendecomposition of i(A_N + u B_N).
// A real-symmetric tri-diagonal fast path is used when the generator has one
// (diagonal drift, bandwidth-1 coupling with purely imaginary entries).
Eigen::MatrixXcd step_unitary(const GalerkinSystem& system, double u, double dt);

// ------------------------------- propagation --------------------------------

// Concatenates per-interval exponentials in time order, splitting intervals at
// the requested record times. Throws AdmissibilityError when the system's
// constants are attached, a > 0 and sup|u| >= (1-delta)/a.
Trajectory propagate_pc(const GalerkinSystem& system, const PiecewiseConstantControl& u,
                        const StateVector& psi0, std::span<const double> record_times,
                        double diagnostic_r = 1.0);

// Final state only (records just the endpoint).
StateVector propagate_pc_final(const GalerkinSystem& system, const PiecewiseConstantControl& u,
                               const StateVector& psi0);

// Cauchy-limit construction: propagates pc_approximate(u, n) for n = n0, 2 n0,
// 4 n0, ... and stops once successive final states differ by less than tol.
// Each increment is reported next to its Duhamel a-priori bound
//   integral |u_n - u_{2n}|  x  a e^{(2a/delta) TV(u_{2n})} || |A_N| psi0 ||.
// Requires constants with a > 0. The refinement schedule is capped by
// max_doublings and by the sample resolution of u.
BvConvergence propagate_bv(const GalerkinSystem& system, const SampledBVControl& u,
                           const StateVector& psi0, double tol,
                           int initial_refinement = 64, int max_doublings = 8);

// Same, but throws BvConvergenceError (carrying the record) when the
// refinement budget is exhausted before the tolerance is met.
BvConvergence propagate_bv_checked(const GalerkinSystem& system, const SampledBVControl& u,
                                   const StateVector& psi0, double tol,
                                   int initial_refinement = 64, int max_doublings = 8);

// ------------------------------ phase & overlap ------------------------------

// Multiplies the state at time t by e^{-i lambda t}. Propagating with
// eigenvalues (lambda_j + lambda) and then applying shift_phase(-lambda)
// recovers propagation with eigenvalues (lambda_j).
Trajectory shift_phase(Trajectory trajectory, double lambda);

// k-th coefficient <phi_k, psi>, 1-based.
Complex overlap(const StateVector& state, int k);

} // namespace bvctrl
