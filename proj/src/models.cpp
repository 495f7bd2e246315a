#include "bvctrl/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace bvctrl {

namespace {

// C = A * X restricted to bands, with a fixed ascending accumulation order so
// that entries are bit-identical across padded sizes.
Eigen::MatrixXd banded_multiply(const Eigen::MatrixXd& a, int bw_a, const Eigen::MatrixXd& x,
                                int bw_x) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - bw_a - bw_x);
        const int jhi = std::min(n - 1, i + bw_a + bw_x);
        for (int j = jlo; j <= jhi; ++j) {
            double acc = 0.0;
            const int llo = std::max({0, j - bw_x, i - bw_a});
            const int lhi = std::min({n - 1, j + bw_x, i + bw_a});
            for (int l = llo; l <= lhi; ++l) acc += a(i, l) * x(l, j);
            c(i, j) = acc;
        }
    }
    return c;
}

// Position matrix of the ladder recursion x phi_k = sqrt(k/2) phi_{k-1} +
// sqrt((k+1)/2) phi_{k+1}, 0-based, at the given size.
Eigen::MatrixXd position_matrix(int size) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(size, size);
    for (int k = 0; k + 1 < size; ++k) {
        const double v = std::sqrt((k + 1) / 2.0);
        x(k, k + 1) = v;
        x(k + 1, k) = v;
    }
    return x;
}

// X^beta formed at padded size and cropped, so every retained entry is free of
// truncation contamination.
Eigen::MatrixXd position_power_cropped(int beta, int N) {
    const int pad = N + beta;
    const Eigen::MatrixXd x = position_matrix(pad);
    Eigen::MatrixXd p = x;
    int bw = 1;
    for (int i = 1; i < beta; ++i) {
        p = banded_multiply(p, bw, x, 1);
        bw += 1;
    }
    return p.topLeftCorner(N, N);
}

CouplingOperator wrap_matrix(Eigen::MatrixXcd m, int bandwidth) {
    const int n = static_cast<int>(m.rows());
    auto fn = [mat = std::move(m)](int j, int k) { return mat(j - 1, k - 1); };
    return CouplingOperator(std::move(fn), bandwidth, n);
}

} // namespace

// ------------------------------- anharmonic ---------------------------------

ModelSystem build_anharmonic(int alpha, int beta, int N) {
    if (alpha < 1 || beta < 1)
        throw std::invalid_argument("build_anharmonic: alpha and beta must be >= 1");
    if (N < 1) throw std::invalid_argument("build_anharmonic: N must be >= 1");
    if (2 * alpha < beta) {
        std::ostringstream os;
        os << "anharmonic oscillator is well-posed only for 2*alpha >= beta; got alpha = "
           << alpha << ", beta = " << beta << " (2*alpha = " << 2 * alpha << " < " << beta << ")";
        throw WellPosednessError(os.str());
    }

    // quantum number k >= 0, stored index j = k + 1
    SpectralDrift drift([alpha](int j) { return std::pow(2.0 * j - 1.0, alpha); }, 0.0, 0);

    Eigen::MatrixXcd b = Complex(0.0, -1.0) * position_power_cropped(beta, N);
    CouplingOperator coupling = wrap_matrix(std::move(b), beta);

    const double exponent = beta / (2.0 * alpha);
    BoundConstants constants;
    constants.alpha = exponent;
    constants.b = 0.0;
    if (beta == 1) {
        // sup_k of the band ratios is attained at k = 0 and equals 1/sqrt(2)
        constants.d = std::sqrt(3.0);
        constants.estimated = false;
    } else {
        GalerkinSystem probe = compress(drift, coupling, N);
        constants.d = prefix_operator_bound(probe, exponent);
        constants.estimated = true;
    }
    // lambda_j >= 1, so the Hypothesis-2 bound implies ||B psi|| <= d ||A psi||
    constants.a = constants.d;

    ModelSystem model{"anharmonic", std::move(drift), std::move(coupling), constants, {}};
    model.metadata["alpha"] = alpha;
    model.metadata["beta"] = beta;
    model.metadata["hyp2_exponent"] = exponent;
    model.metadata["hyp2_satisfied"] = (2 * alpha > beta) ? 1.0 : 0.0;
    if (2 * alpha == beta)
        model.metadata["admissibility_radius"] = std::sqrt((2.0 * beta + 1.0) * std::pow(2.0, -beta));
    return model;
}

// ---------------------------------- rotor -----------------------------------

ModelSystem build_rotor(int N) {
    if (N < 2) throw std::invalid_argument("build_rotor: N must be >= 2");
    SpectralDrift drift([](int j) { return static_cast<double>(j) * j; }, 0.0, 0);
    CouplingOperator coupling(
        [](int j, int k) {
            return std::abs(j - k) == 1 ? Complex(0.0, -0.5) : Complex(0.0, 0.0);
        },
        1, 0);

    BoundConstants constants;
    constants.a = std::sqrt(2.0);
    constants.b = 0.0;
    constants.d = std::sqrt(6.0) / 2.0; // band ratios peak at k = 1 for any r
    constants.alpha = 0.0;
    constants.estimated = false;

    ModelSystem model{"rotor", std::move(drift), std::move(coupling), constants, {}};
    model.metadata["norm_b"] = std::sqrt(2.0); // the value the switch bound uses
    {
        // i B_N is Hermitian, so ||B_N|| is its largest |eigenvalue|
        const int probe = std::min(N, 200);
        Eigen::MatrixXcd hb = Complex(0.0, 1.0) * model.coupling.materialize(probe);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb, Eigen::EigenvaluesOnly);
        model.metadata["norm_b_computed"] =
            std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
    }
    return model;
}

// ----------------------------------- trap -----------------------------------

ModelSystem build_trap(double lambda, int N) {
    if (!(lambda > 0.0)) throw std::invalid_argument("build_trap: lambda must be > 0");
    if (N < 1) throw std::invalid_argument("build_trap: N must be >= 1");

    // even quantum numbers k = 2m; stored index j = m + 1, eigenvalue (4m+1) lambda
    SpectralDrift drift([lambda](int j) { return (4.0 * (j - 1) + 1.0) * lambda; }, 0.0, 0);

    // x^2 in the sqrt(lambda)-scaled basis is X^2 / lambda; restrict the exact
    // padded square to even rows and columns.
    const int pad = 2 * N + 2;
    const Eigen::MatrixXd x = position_matrix(pad);
    const Eigen::MatrixXd x2 = banded_multiply(x, 1, x, 1);
    Eigen::MatrixXcd b(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            b(r, c) = Complex(0.0, -x2(2 * r, 2 * c) / lambda);
    CouplingOperator coupling = wrap_matrix(std::move(b), 1);

    BoundConstants constants;
    {
        const auto est = tridiagonal_relative_bound(drift, coupling, 1.0, N);
        constants.d = est.bound;
        constants.a = est.bound; // r = 1: the Hypothesis-2 bound is the Hypothesis-1 bound
        constants.b = 0.0;
        constants.alpha = 1.0;
        constants.estimated = true;
    }

    ModelSystem model{"trap", std::move(drift), std::move(coupling), constants, {}};
    model.metadata["lambda"] = lambda;
    // entry growth at quantum number j (even), against the j/lambda and
    // j/(2 lambda) rates
    const int j = 100;
    const int m = j / 2;
    const double diag = (4.0 * m + 1.0) / (2.0 * lambda);
    const double off = std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * lambda);
    model.metadata["ratio_diag_j100"] = diag * lambda / j;
    model.metadata["ratio_offdiag_j100"] = off * lambda / j;
    return model;
}

// ------------------------------ steering control ----------------------------

SampledBVControl rotor_steering_control(int n, int samples_per_period) {
    if (n < 1) throw std::invalid_argument("rotor_steering_control: n must be >= 1");
    if (samples_per_period < 2)
        throw std::invalid_argument("rotor_steering_control: need at least 2 samples per period");
    const double amplitude = 1.0 / n;
    const double duration = 2.0 * std::numbers::pi * n; // n periods of the steering cycle
    const int periods = 3 * n;                          // cosine periods in the duration
    const int intervals = periods * samples_per_period;
    std::vector<double> grid(static_cast<size_t>(intervals) + 1);
    std::vector<double> samples(grid.size());
    for (int i = 0; i <= intervals; ++i) {
        const double t = duration * i / intervals;
        grid[static_cast<size_t>(i)] = t;
        samples[static_cast<size_t>(i)] = amplitude * std::cos(3.0 * t);
    }
    grid.back() = duration;
    // analytic TV of the cosine: 2 * amplitude per half-period, 6n half-periods
    const double tv = 2.0 * amplitude * (6.0 * n);
    return SampledBVControl::make(std::move(grid), std::move(samples), tv);
}

GalerkinSystem make_system(const ModelSystem& model, int N, double delta) {
    return compress(model.drift, model.coupling, N).with_constants(model.constants, delta);
}

} // namespace bvctrl
