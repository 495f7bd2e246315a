// models.hpp — the three example systems: anharmonic oscillator, planar rotor,
// harmonic trap
#pragma once

#include <map>
#include <string>

#include "bvctrl/controls.hpp"
#include "bvctrl/operators.hpp"

namespace bvctrl {

// A model is a drift/coupling pair plus its relative-bound constants and some
// named metadata (admissibility radius, operator-norm values, ...). Eigenbasis
// indices are 1-based internally; each builder documents its offset from the
// conventional quantum-number labelling.
struct ModelSystem {
    std::string name;
    SpectralDrift drift;
    CouplingOperator coupling;
    BoundConstants constants;
    std::map<std::string, double> metadata;
};

class WellPosednessError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Oscillator with eigenvalues (2k+1)^alpha (quantum number k >= 0; stored
// index j = k+1) and coupling -i X^beta, X the position matrix from the
// ladder recursion x phi_k = sqrt(k/2) phi_{k-1} + sqrt((k+1)/2) phi_{k+1}.
// X^beta is formed at padded size N+beta and cropped so every retained entry
// is exact. Requires 2 alpha >= beta (throws WellPosednessError otherwise);
// 2 alpha > beta additionally yields the Hypothesis-2 exponent beta/(2 alpha).
// Metadata: "admissibility_radius" (only when 2 alpha = beta, the value
// sqrt((2 beta + 1) 2^-beta)), "hyp2_exponent", "hyp2_satisfied".
ModelSystem build_anharmonic(int alpha, int beta, int N);

// Planar rotor: eigenvalues k^2 (k >= 1) and tri-diagonal coupling with
// b_{k,k} = 0, b_{k,k+1} = -i/2. Analytic constants a = sqrt(2), b = 0,
// d = sqrt(6)/2 at exponent alpha = 0. Metadata: "norm_b" = sqrt(2) (the
// value the switch-count bound uses) and "norm_b_computed" (dense operator
// norm of B_N at the built order, <= 1).
ModelSystem build_rotor(int N);

// Harmonic trap restricted to even states: eigenvalues (2k+1)*lambda over
// even quantum numbers k = 2m (stored as (4m+1)*lambda, m >= 0), coupling
// -i x^2 computed exactly from the scaled ladder recursion at padded size.
// Constants from the tri-diagonal prefix bound at r = 1 (estimated).
// Metadata: "ratio_diag_j100", "ratio_offdiag_j100" (entry asymptotics at
// quantum number j = 100, to compare with 1 and 1/2).
ModelSystem build_trap(double lambda, int N);

// Control cos(3t)/n sampled on [0, 2 pi n] at samples_per_period points per
// period of the cosine, with the analytic total variation declared.
SampledBVControl rotor_steering_control(int n, int samples_per_period = 256);

// Compression of the model at order N with its constants and delta attached.
GalerkinSystem make_system(const ModelSystem& model, int N, double delta);

} // namespace bvctrl
