#include "doctest.h"

#include <cmath>
#include <random>

#include "bvctrl/models.hpp"
#include "bvctrl/operators.hpp"
#include "support.hpp"

using namespace bvctrl;

TEST_CASE("rotor compression at order 3 reproduces the model matrices") {
    const ModelSystem rotor = build_rotor(3);
    const GalerkinSystem sys = compress(rotor.drift, rotor.coupling, 3);

    const Eigen::MatrixXcd a = sys.drift_matrix();
    CHECK(a(0, 0) == Complex(0.0, -1.0));
    CHECK(a(1, 1) == Complex(0.0, -4.0));
    CHECK(a(2, 2) == Complex(0.0, -9.0));
    CHECK(a(0, 1) == Complex(0.0, 0.0));

    const Eigen::MatrixXcd& b = sys.coupling_matrix();
    CHECK(b(0, 0) == Complex(0.0, 0.0));
    CHECK(b(0, 1) == Complex(0.0, -0.5));
    CHECK(b(1, 0) == Complex(0.0, -0.5));
    CHECK(b(0, 2) == Complex(0.0, 0.0));
    CHECK(sys.lambda_next() == 16.0);
}

TEST_CASE("zero coupling compresses to the zero matrix at every order") {
    const ModelSystem rotor = build_rotor(2);
    for (int n : {1, 4, 9}) {
        const GalerkinSystem sys = compress(rotor.drift, CouplingOperator::zero(), n);
        CHECK(sys.coupling_matrix().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("non-skew-Hermitian couplings are rejected naming the offender") {
    CouplingOperator bad([](int j, int k) { return j == k ? Complex(0.0, 0.0) : Complex(0.3, 0.0); }, 1);
    CHECK_THROWS_WITH_AS(compress(build_rotor(2).drift, bad, 3), doctest::Contains("(1,2)"),
                         std::invalid_argument);

    // conflicting explicit triplets
    CHECK_THROWS_AS(CouplingOperator::from_triplets(
                        {{1, 2, Complex(0.0, -0.5)}, {2, 1, Complex(0.0, 0.5)}}),
                    std::invalid_argument);
    // one-sided triplets are mirrored
    auto ok = CouplingOperator::from_triplets({{1, 2, Complex(0.0, -0.5)}});
    CHECK(ok.entry(2, 1) == Complex(0.0, -0.5));
}

TEST_CASE("compression is consistent under nesting") {
    const ModelSystem rotor = build_rotor(2);
    const GalerkinSystem big = compress(rotor.drift, rotor.coupling, 8);
    const GalerkinSystem small = compress(rotor.drift, rotor.coupling, 5);
    CHECK((big.coupling_matrix().topLeftCorner(5, 5) - small.coupling_matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((big.eigenvalues().head(5) - small.eigenvalues()).cwiseAbs().maxCoeff() == 0.0);

    const ModelSystem osc = build_anharmonic(1, 2, 16);
    const GalerkinSystem obig = compress(osc.drift, osc.coupling, 16);
    const GalerkinSystem osmall = compress(osc.drift, osc.coupling, 9);
    CHECK((obig.coupling_matrix().topLeftCorner(9, 9) - osmall.coupling_matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("i(A_N + u B_N) is Hermitian for every real u") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> du(-2.0, 2.0);
    auto hermitian_defect = [](const GalerkinSystem& sys, double u) {
        Eigen::MatrixXcd h = Complex(0.0, 1.0) * (sys.drift_matrix() + u * sys.coupling_matrix());
        return (h - h.adjoint().eval()).cwiseAbs().maxCoeff();
    };
    const GalerkinSystem rotor = compress(build_rotor(2).drift, build_rotor(2).coupling, 12);
    const ModelSystem osc = build_anharmonic(2, 3, 10);
    const GalerkinSystem anharmonic = compress(osc.drift, osc.coupling, 10);
    const ModelSystem trap = build_trap(0.7, 10);
    const GalerkinSystem trap_sys = compress(trap.drift, trap.coupling, 10);
    for (int trial = 0; trial < 25; ++trial) {
        const double u = du(rng);
        CHECK(hermitian_defect(rotor, u) <= 1e-14);
        CHECK(hermitian_defect(anharmonic, u) <= 1e-14);
        CHECK(hermitian_defect(trap_sys, u) <= 1e-14);
    }
}

TEST_CASE("tri-diagonal relative bound on the rotor") {
    const ModelSystem rotor = build_rotor(2);
    const auto est = tridiagonal_relative_bound(rotor.drift, rotor.coupling, 1.0, 50);
    // C = max_k (1/2)/k^2 attained at k = 1
    CHECK(est.c == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(est.bound == doctest::Approx(std::sqrt(6.0) / 2.0).epsilon(1e-15));
    CHECK(est.estimated);

    const auto zero = tridiagonal_relative_bound(rotor.drift, CouplingOperator::zero(), 1.0, 20);
    CHECK(zero.bound == 0.0);
}

TEST_CASE("tri-diagonal relative bound is monotone in the prefix length") {
    const ModelSystem trap = build_trap(1.0, 220);
    double prev = 0.0;
    for (int j : {5, 20, 80, 200}) {
        const double bound = tridiagonal_relative_bound(trap.drift, trap.coupling, 1.0, j).bound;
        CHECK(bound >= prev);
        prev = bound;
    }
}

TEST_CASE("trap prefix bound dominates the dense operator-norm oracle at N = 200") {
    const ModelSystem trap = build_trap(1.0, 200);
    const auto est = tridiagonal_relative_bound(trap.drift, trap.coupling, 1.0, 200);
    CHECK(std::isfinite(est.bound));

    // brute-force || B_N (1 + |A_N|)^{-1} ||_2; implied by the prefix bound
    const GalerkinSystem sys = compress(trap.drift, trap.coupling, 200);
    Eigen::MatrixXcd scaled = sys.coupling_matrix();
    for (int k = 0; k < 200; ++k) scaled.col(k) /= (1.0 + sys.eigenvalues()[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled);
    CHECK(svd.singularValues()(0) <= est.bound + 1e-12);
}

TEST_CASE("tri-diagonal bound rejects unsupported structure and bad exponents") {
    const ModelSystem osc = build_anharmonic(1, 2, 10); // bandwidth 2
    CHECK_THROWS_AS(tridiagonal_relative_bound(osc.drift, osc.coupling, 1.0, 10),
                    std::invalid_argument);
    const ModelSystem rotor = build_rotor(2);
    CHECK_THROWS_AS(tridiagonal_relative_bound(rotor.drift, rotor.coupling, 1.2, 10),
                    std::domain_error);
    CHECK_THROWS_AS(tridiagonal_relative_bound(rotor.drift, rotor.coupling, -0.1, 10),
                    std::domain_error);
}

TEST_CASE("sampled states never violate the finite tri-diagonal chain") {
    const ModelSystem rotor = build_rotor(2);
    const GalerkinSystem sys =
        compress(rotor.drift, rotor.coupling, 50).with_constants(rotor.constants, 0.1);

    const BoundReport report = verify_relative_bound(sys, 1.0, 100, 2024);
    CHECK(report.satisfied);
    CHECK(report.measured <= std::sqrt(6.0) / 2.0); // exact inequality, no tolerance
    CHECK(report.bound == doctest::Approx(std::sqrt(6.0) / 2.0).epsilon(1e-15));

    // psi = phi_1: ||B phi_1|| = 1/2 and || |A| phi_1 || = 1
    StateVector e1 = StateVector::Zero(50);
    e1[0] = Complex(1.0, 0.0);
    CHECK((sys.coupling_matrix() * e1).norm() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(weighted_norm(sys, e1, 1.0, NormKind::Homogeneous) == doctest::Approx(1.0).epsilon(1e-15));

    // different seeds, same exact dominance
    for (unsigned seed : {1u, 7u, 99u})
        CHECK(verify_relative_bound(sys, 0.5, 40, seed).satisfied);

    // provenance: the prefix C is an estimate unless the analytic constant
    // covers the requested exponent (rotor: alpha = 0)
    CHECK_FALSE(verify_relative_bound(sys, 0.0, 5, 1).estimated_constants);
    CHECK(verify_relative_bound(sys, 1.0, 5, 1).estimated_constants);

    const GalerkinSystem zero =
        compress(rotor.drift, CouplingOperator::zero(), 20).with_constants(rotor.constants, 0.1);
    CHECK(verify_relative_bound(zero, 1.0, 10, 5).measured == 0.0);
}

TEST_CASE("weighted norms: homogeneous vs sobolev") {
    const ModelSystem rotor = build_rotor(2);
    const GalerkinSystem sys = compress(rotor.drift, rotor.coupling, 4);
    StateVector e1 = StateVector::Zero(4);
    e1[0] = Complex(1.0, 0.0);
    CHECK(weighted_norm(sys, e1, 1.0, NormKind::Homogeneous) == doctest::Approx(1.0));
    CHECK(weighted_norm(sys, e1, 1.0, NormKind::Sobolev) == doctest::Approx(2.0));
    CHECK(weighted_norm(sys, e1, 0.0, NormKind::Homogeneous) == doctest::Approx(1.0));

    StateVector mix = StateVector::Zero(4);
    mix[0] = Complex(std::sqrt(0.5), 0.0);
    mix[2] = Complex(0.0, std::sqrt(0.5));
    // sqrt(0.5 * 1^2 + 0.5 * 9^2)
    CHECK(weighted_norm(sys, mix, 1.0, NormKind::Homogeneous) ==
          doctest::Approx(std::sqrt(41.0)).epsilon(1e-14));
}

TEST_CASE("negative eigenvalues are weighted through the lower-bound shift") {
    auto drift = SpectralDrift::from_values({-1.0, 2.0, 5.0}, 2.0);
    const GalerkinSystem sys = compress(drift, CouplingOperator::zero(), 3);
    StateVector e1 = StateVector::Zero(3);
    e1[0] = Complex(1.0, 0.0);
    // weight |(-1) + 2| = 1
    CHECK(weighted_norm(sys, e1, 1.0, NormKind::Homogeneous) == doctest::Approx(1.0));
}

TEST_CASE("spectral drift validation") {
    CHECK_THROWS_AS(SpectralDrift::from_values({3.0, 2.0, 1.0}).prefix(3), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDrift::from_values({-2.0, 1.0}, 1.0).prefix(2), std::invalid_argument);
    // long plateau fails the growth check
    CHECK_THROWS_AS(SpectralDrift::from_values(std::vector<double>(64, 1.0)).prefix(64),
                    std::invalid_argument);
    // finite degeneracy is fine
    CHECK_NOTHROW(SpectralDrift::from_values({1.0, 1.0, 2.0, 3.0, 4.0, 5.0}).prefix(6));
    // requesting beyond a finite sequence
    auto finite = SpectralDrift::from_values({1.0, 2.0});
    CHECK_THROWS_AS(finite.eigenvalue(3), std::invalid_argument);
    CHECK_FALSE(finite.has_eigenvalue(3));
}

TEST_CASE("attaching constants validates delta") {
    const ModelSystem rotor = build_rotor(2);
    const GalerkinSystem sys = compress(rotor.drift, rotor.coupling, 3);
    CHECK_FALSE(sys.has_constants());
    CHECK_THROWS_AS(sys.delta(), std::logic_error);
    CHECK_THROWS_AS(sys.with_constants(rotor.constants, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sys.with_constants(rotor.constants, 0.0), std::invalid_argument);
    const GalerkinSystem with = sys.with_constants(rotor.constants, 0.25);
    CHECK(with.delta() == 0.25);
    CHECK(with.admissibility_threshold() == doctest::Approx(0.75 / std::sqrt(2.0)));
}

TEST_CASE("spectral offset shifts eigenvalues and lambda_next") {
    const ModelSystem rotor = build_rotor(2);
    const GalerkinSystem sys = compress(rotor.drift, rotor.coupling, 3);
    const GalerkinSystem shifted = sys.with_spectral_offset(5.5);
    CHECK(shifted.eigenvalues()[0] == doctest::Approx(6.5));
    CHECK(*shifted.lambda_next() == doctest::Approx(21.5));
    // offsets that push the spectrum negative get a fresh positivity shift
    const GalerkinSystem negative = sys.with_spectral_offset(-2.0);
    CHECK(negative.eigenvalues()[0] == doctest::Approx(-1.0));
    CHECK(negative.lower_bound_shift() > 1.0 - 1e-12);
}
