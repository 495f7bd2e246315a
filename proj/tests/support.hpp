// support.hpp — test-only oracles and generators, independent of the library
// implementation paths they check
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bvctrl/controls.hpp"
#include "bvctrl/propagator.hpp"

namespace oracle {

// ------------------------- Gauss-Hermite quadrature --------------------------

struct GaussHermite {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights; // for the weight e^{-x^2}
};

// Normalized Hermite polynomial pair (h_m(x), h_{m-1}(x)) by the three-term
// recurrence; h_k e^{-x^2/2} is the normalized Hermite function.
inline std::pair<double, double> hermite_pair(int m, double x) {
    double hm1 = 0.0;
    double h = std::pow(std::acos(-1.0), -0.25);
    for (int j = 0; j < m; ++j) {
        const double hp = x * std::sqrt(2.0 / (j + 1)) * h - std::sqrt(double(j) / (j + 1)) * hm1;
        hm1 = h;
        h = hp;
    }
    return {h, hm1};
}

inline double hermite_normalized(int k, double x) { return hermite_pair(k, x).first; }

// Nodes from the Jacobi-matrix eigenvalues polished by Newton steps, weights
// from 1/(m h_{m-1}(x_i)^2). Eigenvector-based weights lose all relative
// accuracy at the extreme nodes, which matters once the integrand carries
// high-degree polynomials.
inline GaussHermite gauss_hermite(int m) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd off(m - 1);
    for (int k = 1; k < m; ++k) off[k - 1] = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    GaussHermite gh;
    gh.nodes = es.eigenvalues();
    gh.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        double x = gh.nodes[i];
        double hm = 0.0, hm1 = 0.0;
        for (int iter = 0; iter < 3; ++iter) { // h_m'(x) = sqrt(2m) h_{m-1}(x)
            std::tie(hm, hm1) = hermite_pair(m, x);
            x -= hm / (std::sqrt(2.0 * m) * hm1);
        }
        std::tie(hm, hm1) = hermite_pair(m, x);
        gh.nodes[i] = x;
        gh.weights[i] = 1.0 / (m * hm1 * hm1);
    }
    return gh;
}

// <phi_j, x^beta phi_k> for normalized Hermite functions, exact for
// 2m - 1 >= j + k + beta.
inline double hermite_matrix_element(int j, int k, int beta, const GaussHermite& gh) {
    double acc = 0.0;
    for (int i = 0; i < gh.nodes.size(); ++i) {
        const double x = gh.nodes[i];
        acc += gh.weights[i] * hermite_normalized(j, x) * hermite_normalized(k, x) *
               std::pow(x, beta);
    }
    return acc;
}

// ------------------------ series/squaring matrix exponential -----------------

// exp(M) by scaling-and-squaring with a plain Taylor series; an independent
// route that never forms an eigendecomposition.
inline Eigen::MatrixXcd expm_series(Eigen::MatrixXcd m) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    m /= std::pow(2.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * m) / double(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// ------------------------------ 1D quadrature --------------------------------

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Fine-grid summation of |increments|, the brute-force total variation of a
// sampled function.
inline double fine_grid_tv(const std::function<double(double)>& f, double a, double b, int n) {
    double tv = 0.0;
    double prev = f(a);
    for (int i = 1; i <= n; ++i) {
        const double cur = f(a + (b - a) * i / n);
        tv += std::abs(cur - prev);
        prev = cur;
    }
    return tv;
}

} // namespace oracle

namespace gen {

inline bvctrl::StateVector random_unit_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    bvctrl::StateVector psi(n);
    for (int j = 0; j < n; ++j) psi[j] = std::complex<double>(gauss(rng), gauss(rng));
    psi.normalize();
    return psi;
}

// Random admissible piecewise-constant control with values in
// (-0.95 u_max, 0.95 u_max) and a handful of intervals.
inline bvctrl::PiecewiseConstantControl random_admissible_pc(std::mt19937_64& rng, double u_max,
                                                             int max_intervals = 8) {
    std::uniform_int_distribution<int> count(1, max_intervals);
    std::uniform_real_distribution<double> dur(0.1, 1.0);
    std::uniform_real_distribution<double> val(-0.95 * u_max, 0.95 * u_max);
    const int p = count(rng);
    std::vector<double> bps{0.0};
    std::vector<double> vals;
    for (int j = 0; j < p; ++j) {
        bps.push_back(bps.back() + dur(rng));
        vals.push_back(val(rng));
    }
    return bvctrl::PiecewiseConstantControl::make(std::move(bps), std::move(vals));
}

// {0, hi}-valued control starting and ending at 0 value is not required;
// alternates starting from hi or 0 at random.
inline bvctrl::PiecewiseConstantControl random_two_level(std::mt19937_64& rng, double hi,
                                                         int max_intervals = 9) {
    std::uniform_int_distribution<int> count(1, max_intervals);
    std::uniform_real_distribution<double> dur(0.1, 0.8);
    std::bernoulli_distribution start(0.5);
    const int p = count(rng);
    bool on = start(rng);
    std::vector<double> bps{0.0};
    std::vector<double> vals;
    for (int j = 0; j < p; ++j) {
        bps.push_back(bps.back() + dur(rng));
        vals.push_back(on ? hi : 0.0);
        on = !on;
    }
    return bvctrl::PiecewiseConstantControl::make(std::move(bps), std::move(vals));
}

} // namespace gen
