// operators.hpp — spectral drift A, coupling B, and their finite Galerkin compressions
//
// The drift is represented by its real eigenvalue sequence (lambda_j), with
// A phi_j = -i lambda_j phi_j, and the coupling by its matrix b_{j,k} in the
// same eigenbasis (skew-Hermitian). Compressing to order N yields the finite
// pair (A_N, B_N) that every simulation in this library works on.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bvctrl/report.hpp"

namespace bvctrl {

using Complex = std::complex<double>;

// --------------------------------- drift ------------------------------------

// Increasing real eigenvalue sequence lambda_1 <= lambda_2 <= ..., produced on
// demand for any requested index (1-based). `lower_bound_shift` is a shift
// making lambda_j + shift > 0 for every j; it is applied whenever a spectral
// weight |lambda|^r needs a positive argument.
class SpectralDrift {
public:
    SpectralDrift(std::function<double(int)> eigenvalue_fn,
                  double lower_bound_shift = 0.0,
                  int max_order = 0); // max_order 0 = unbounded

    static SpectralDrift from_values(std::vector<double> values,
                                     double lower_bound_shift = 0.0);

    bool has_eigenvalue(int j) const;
    double eigenvalue(int j) const; // 1-based; throws if j out of range

    // First n eigenvalues, validated: finite, non-decreasing, shift-positive,
    // and strictly growing over a stride of the prefix (guards against
    // sequences that do not tend to +infinity).
    Eigen::VectorXd prefix(int n) const;

    double lower_bound_shift() const { return shift_; }
    int max_order() const { return max_order_; }

private:
    std::function<double(int)> fn_;
    double shift_ = 0.0;
    int max_order_ = 0;
};

// -------------------------------- coupling ----------------------------------

struct CouplingTriplet {
    int row = 0; // 1-based
    int col = 0;
    Complex value;
};

// The operator B through its eigenbasis entries b_{j,k} (1-based). A finite
// bandwidth w means |j-k| > w implies b_{j,k} = 0; no bandwidth means dense.
class CouplingOperator {
public:
    CouplingOperator(std::function<Complex(int, int)> entry_fn,
                     std::optional<int> bandwidth,
                     int max_order = 0);

    static CouplingOperator zero();

    // Builds from sparse 1-based triplets. Entries given on one side of the
    // diagonal are mirrored by skew-Hermiticity; entries given on both sides
    // must agree with it.
    static CouplingOperator from_triplets(const std::vector<CouplingTriplet>& triplets);

    Complex entry(int j, int k) const;
    std::optional<int> bandwidth() const { return bandwidth_; }
    int max_order() const { return max_order_; }

    // Dense n x n matrix of the first n rows/columns. Throws if any stored
    // entry violates b_{j,k} = -conj(b_{k,j}), naming the offending (j,k).
    Eigen::MatrixXcd materialize(int n) const;

private:
    std::function<Complex(int, int)> fn_;
    std::optional<int> bandwidth_;
    int max_order_ = 0;
};

// ------------------------------ Galerkin system -----------------------------

// Relative-bound constants of the operator pair:
//   ||B psi|| <= a ||A psi|| + b ||psi||      (Hypothesis-1 form)
//   ||B psi|| <= d |||A|^alpha psi||          (Hypothesis-2 form)
// `estimated` marks constants obtained from a finite prefix of the entries
// rather than from an analytic supremum.
struct BoundConstants {
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
    double alpha = 1.0;
    bool estimated = true;
};

// Order-N compression pair (A_N, B_N) plus, once attached, the admissibility
// margin delta and the relative-bound constants. Immutable value type.
class GalerkinSystem {
public:
    GalerkinSystem(Eigen::VectorXd eigenvalues,
                   std::optional<double> lambda_next,
                   double lower_bound_shift,
                   Eigen::MatrixXcd coupling,
                   std::optional<int> bandwidth);

    int order() const { return static_cast<int>(eigenvalues_.size()); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    std::optional<double> lambda_next() const { return lambda_next_; }
    double lower_bound_shift() const { return shift_; }
    Eigen::MatrixXcd drift_matrix() const; // diag(-i lambda_j)
    const Eigen::MatrixXcd& coupling_matrix() const { return coupling_; }
    std::optional<int> bandwidth() const { return bandwidth_; }

    bool has_constants() const { return constants_.has_value(); }
    const BoundConstants& constants() const; // throws if unset
    double delta() const;                    // throws if unset

    GalerkinSystem with_constants(BoundConstants constants, double delta) const;

    // Same system with eigenvalues lambda_j + mu (the A - i mu Id device).
    GalerkinSystem with_spectral_offset(double mu) const;

    // sup|u| must stay strictly below this for admissibility; +inf when a = 0.
    double admissibility_threshold() const;

private:
    Eigen::VectorXd eigenvalues_;
    std::optional<double> lambda_next_;
    double shift_ = 0.0;
    Eigen::MatrixXcd coupling_;
    std::optional<int> bandwidth_;
    std::optional<BoundConstants> constants_;
    double delta_ = 0.0;
};

// Order-N compression pi_N A pi_N, pi_N B pi_N. Constants stay unset until
// with_constants is called on the result.
GalerkinSystem compress(const SpectralDrift& drift, const CouplingOperator& coupling, int N);

// --------------------------------- norms ------------------------------------

enum class NormKind {
    Homogeneous, // weights |lambda_j|^r
    Sobolev      // weights (1 + |lambda_j|)^r
};

// || W^r psi || with spectral weights. The lower-bound shift is applied to the
// eigenvalues before weighting whenever any of them is <= 0.
double spectral_weighted_norm(const Eigen::VectorXd& eigenvalues, double shift,
                              const Eigen::VectorXcd& psi, double r, NormKind kind);

double weighted_norm(const GalerkinSystem& system, const Eigen::VectorXcd& psi,
                     double r, NormKind kind);

// --------------------------- tri-diagonal bounds ----------------------------

struct RelativeBoundEstimate {
    double c = 0.0;      // prefix max of |b_{j,j-1}|, |b_{j,j}|, |b_{j,j+1}| over lambda_j^r
    double bound = 0.0;  // sqrt(6) * c
    int prefix = 0;      // J used for the max
    bool estimated = true; // always true: a finite prefix cannot certify a supremum
};

// sqrt(6) * C with C = max_{j<=J} of the three band ratios. Requires
// bandwidth <= 1 and r in [0,1].
RelativeBoundEstimate tridiagonal_relative_bound(const SpectralDrift& drift,
                                                 const CouplingOperator& coupling,
                                                 double r, int J);

// Samples `trials` random unit states in the order-N space and checks
// ||B_N psi|| <= sqrt(6) C |||A_N|^r psi|| with C taken from the system's own
// prefix. Tri-diagonal systems only.
BoundReport verify_relative_bound(const GalerkinSystem& system, double r,
                                  int trials, unsigned seed);

// Dense operator-norm estimate || B_N diag(w_j^{-r}) ||_2 over the order-N
// space; used by models whose coupling is not tri-diagonal.
double prefix_operator_bound(const GalerkinSystem& system, double r);

} // namespace bvctrl
