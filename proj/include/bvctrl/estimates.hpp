// estimates.hpp — closed-form a-priori bounds and their verification
//
// Every bound here is an explicit formula in the control functionals (TV, L1)
// and the relative-bound constants; the verify_* entry points run a simulation
// and report the measured quantity next to the formula value.
#pragma once

#include <span>

#include "bvctrl/controls.hpp"
#include "bvctrl/operators.hpp"
#include "bvctrl/propagator.hpp"
#include "bvctrl/report.hpp"

namespace bvctrl {

// ------------------------------ energy growth -------------------------------

// exp((2a/delta) tv): upper bound on || |A| Y^u_T psi || / || |A| psi || for
// admissible piecewise-constant controls.
double energy_bound(double a, double delta, double tv);

// Propagates and measures max_t || |A_N| Y^u_t psi0 || / || |A_N| psi0 || over
// the recorded times, against energy_bound(a, delta, TV_[0,T](u)) with the
// system's constants.
BoundReport verify_energy_bound(const GalerkinSystem& system,
                                const PiecewiseConstantControl& u,
                                const StateVector& psi0,
                                std::span<const double> record_times);

// Energy bound for the spectrum-shifted generator: the relative bound against
// A + i lambda Id holds with a inflated to a + eta, so this is
// energy_bound(a + eta, delta, tv). eta < 0 selects the default 0.01 a.
double shifted_energy_bound(double a, double delta, double tv, double eta = -1.0);

// ------------------------------- truncation ----------------------------------

// e^{(2/delta) a tv} * h1_norm / lambda_next^{1-r}: bound on the r-norm of the
// tail (Id - pi_N) Y^u_t psi for initial data with homogeneous 1-norm h1_norm.
double truncation_bound(double tv, double a, double delta, double h1_norm,
                        double lambda_next, double r);

// --------------------------- Galerkin approximation -------------------------

// l1 (1 + dK) d e^{(2/delta) a K} lambda_next^{alpha-1} h1_norm: bound on
// || Y^u_t psi - X^u_N(t,0) pi_N psi || for controls with ||u||_L1 + TV < K.
double gga_error_bound(double l1, double K, double d, double a, double delta,
                       double alpha, double lambda_next, double h1_norm);

// Smallest N whose gga_error_bound falls below epsilon; exists because the
// eigenvalues tend to infinity and alpha < 1. Throws when search_cap is hit,
// reporting the bound value at the cap.
int gga_dimension_for(double epsilon, double K, double d, double a, double delta,
                      double alpha, double h1_norm, const SpectralDrift& drift,
                      int search_cap = 1 << 20);

// ------------------------------ switch counts -------------------------------

// (lambda_k (1-eps) - lambda_1) / norm_b: minimum number of switches of a
// {0,1}-valued control steering phi_1 into an eps-neighborhood of phi_k.
double switch_count_lower_bound(int k, double epsilon, double norm_b,
                                double lambda_1, double lambda_k);

struct TvLowerBound {
    double value = 0.0;
    bool vacuous = false; // set when the log argument drops to <= 1
};

// Rotor specialization log(2(1-eps))/4 of the TV lower bound for {0,1}-valued
// controls reaching an eps-neighborhood of phi_2.
TvLowerBound bang_bang_tv_lower_bound(double epsilon);

// Generic form (delta / 2a) log(norm_ratio), inverting the energy bound.
double tv_lower_bound_generic(double delta, double a, double norm_ratio);

// psi0_h1 + norm_b * switch_count: growth of the A-norm under a {0,1}-valued
// control with the given number of switches.
double switch_growth_bound(double psi0_h1, double norm_b, int switch_count);

// General form with the boundary-inclusive total variation in place of the
// switch count (equal to it for {0,1}-valued controls).
double switch_growth_bound_tv(double psi0_h1, double norm_b, double tv_boundary_inclusive);

} // namespace bvctrl
