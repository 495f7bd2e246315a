#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bvctrl/controls.hpp"
#include "support.hpp"

using namespace bvctrl;
using std::numbers::pi;

namespace {

SampledBVControl sampled_cosine(double amplitude, double freq, double duration, int intervals) {
    std::vector<double> grid(static_cast<size_t>(intervals) + 1), samples(grid.size());
    for (int i = 0; i <= intervals; ++i) {
        grid[static_cast<size_t>(i)] = duration * i / intervals;
        samples[static_cast<size_t>(i)] = amplitude * std::cos(freq * grid[static_cast<size_t>(i)]);
    }
    return SampledBVControl::make(std::move(grid), std::move(samples));
}

} // namespace

TEST_CASE("total variation of a piecewise-constant control") {
    auto u = PiecewiseConstantControl::make({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.5, -0.3, 0.0});
    CHECK(total_variation(u) == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(total_variation(u, true) == doctest::Approx(1.6).epsilon(1e-15));

    auto constant = PiecewiseConstantControl::make({0.0, 2.0}, {0.7});
    CHECK(total_variation(constant, true) == doctest::Approx(1.4).epsilon(1e-15));
    // the initial jump from u(0^-) = 0 is always part of the variation
    CHECK(total_variation(constant, false) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("total variation of the sampled steering cosine matches the fine-grid oracle") {
    // cos(3t)/n on [0, 2 pi n]: 6n half-periods of swing 2/n, so TV = 12 for every n
    for (int n : {1, 4}) {
        const double duration = 2.0 * pi * n;
        auto u = sampled_cosine(1.0 / n, 3.0, duration, 64 * 3 * n);
        const double fine = oracle::fine_grid_tv(
            [&](double t) { return std::cos(3.0 * t) / n; }, 0.0, duration, 200000);
        CHECK(fine == doctest::Approx(12.0).epsilon(1e-6));
        CHECK(sample_total_variation(u.samples) == doctest::Approx(12.0).epsilon(1e-9));
    }
}

TEST_CASE("L1 norm of piecewise-constant controls is exact") {
    auto one = PiecewiseConstantControl::make({0.0, 2.0}, {1.0});
    CHECK(l1_norm(one, 2.0) == doctest::Approx(2.0).epsilon(1e-15));

    auto two = PiecewiseConstantControl::make({0.0, 1.0, 3.0}, {1.0, -1.0});
    CHECK(l1_norm(two, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(l1_norm(two, 2.0) == doctest::Approx(2.0).epsilon(1e-15)); // truncated horizon
}

TEST_CASE("L1 quadrature of a sampled cosine agrees with the Simpson oracle") {
    const double T = 2.0 * pi;
    auto u = sampled_cosine(0.1, 3.0, T, 4096);
    const auto got = l1_norm(u, T);
    const double expected = oracle::simpson([](double t) { return std::abs(std::cos(3.0 * t)) / 10.0; },
                                            0.0, T, 200000);
    CHECK(expected == doctest::Approx(0.4).epsilon(1e-8)); // analytic: 4/10
    CHECK(got.value == doctest::Approx(expected).epsilon(1e-5));
    CHECK(got.step == doctest::Approx(T / 4096).epsilon(1e-12));
}

TEST_CASE("admissibility is a strict inequality") {
    auto near = PiecewiseConstantControl::make({0.0, 1.0}, {0.49});
    auto at = PiecewiseConstantControl::make({0.0, 1.0}, {0.5});
    CHECK(is_admissible(near, 0.5, 1.0));
    CHECK_FALSE(is_admissible(at, 0.5, 1.0));

    CHECK(admissibility_threshold(0.1, std::sqrt(2.0)) ==
          doctest::Approx(0.9 / std::sqrt(2.0)).epsilon(1e-15));

    // a = 0: every bounded control is admissible
    auto big = PiecewiseConstantControl::make({0.0, 1.0}, {1e6});
    CHECK(is_admissible(big, 0.5, 0.0));
}

TEST_CASE("admissibility is monotone in delta") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dval(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto u = PiecewiseConstantControl::make({0.0, 1.0, 2.0}, {dval(rng), dval(rng)});
        const double d1 = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
        const double d2 = std::uniform_real_distribution<double>(0.01, d1)(rng);
        if (is_admissible(u, d1, 1.3)) CHECK(is_admissible(u, d2, 1.3));
    }
}

TEST_CASE("TV and L1 are absolutely homogeneous") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto u = gen::random_admissible_pc(rng, 1.0);
        const double s = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        auto scaled = u;
        for (double& v : scaled.values) v *= s;
        CHECK(total_variation(scaled) == doctest::Approx(std::abs(s) * total_variation(u)));
        CHECK(total_variation(scaled, true) == doctest::Approx(std::abs(s) * total_variation(u, true)));
        CHECK(l1_norm(scaled, u.duration()) == doctest::Approx(std::abs(s) * l1_norm(u, u.duration())));
    }
}

TEST_CASE("TV is invariant under breakpoint refinement") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        auto u = gen::random_admissible_pc(rng, 1.0);
        // split a random interval without introducing a new value
        std::uniform_int_distribution<size_t> pick(0, u.values.size() - 1);
        const size_t j = pick(rng);
        const double mid = 0.5 * (u.breakpoints[j] + u.breakpoints[j + 1]);
        std::vector<double> bps = u.breakpoints;
        std::vector<double> vals = u.values;
        bps.insert(bps.begin() + static_cast<long>(j) + 1, mid);
        vals.insert(vals.begin() + static_cast<long>(j), u.values[j]);
        auto refined = PiecewiseConstantControl::make(std::move(bps), std::move(vals));
        CHECK(total_variation(refined) == doctest::Approx(total_variation(u)).epsilon(1e-15));
    }
}

TEST_CASE("subsampling never increases the variation of a sample sequence") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> dval(-2.0, 2.0);
    std::bernoulli_distribution keep(0.6);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> len(2, 40);
        std::vector<double> samples(static_cast<size_t>(len(rng)));
        for (double& s : samples) s = dval(rng);
        std::vector<double> sub;
        for (double s : samples)
            if (keep(rng)) sub.push_back(s);
        CHECK(sample_total_variation(sub) <= sample_total_variation(samples) + 1e-15);
    }
}

TEST_CASE("pc_approximate holds the left sample and keeps TV non-increasing") {
    SUBCASE("monotone ramp") {
        std::vector<double> grid, samples;
        for (int i = 0; i <= 100; ++i) {
            grid.push_back(i / 100.0);
            samples.push_back(i / 100.0);
        }
        auto u = SampledBVControl::make(grid, samples);
        for (int n : {1, 7, 100}) {
            auto pc = pc_approximate(u, n);
            CHECK(total_variation(pc, false) <= sample_total_variation(samples) + 1e-15);
        }
        CHECK(sample_total_variation(samples) == doctest::Approx(1.0));
    }
    SUBCASE("constant samples give a constant control") {
        auto u = SampledBVControl::make({0.0, 0.5, 1.0}, {0.3, 0.3, 0.3});
        auto pc = pc_approximate(u, 2);
        CHECK(pc.values == std::vector<double>{0.3, 0.3});
        CHECK(sample_total_variation(pc.values) == 0.0);
    }
    SUBCASE("coarse grids have no more variation than fine ones") {
        auto u = sampled_cosine(0.1, 3.0, 2.0 * pi, 4096);
        auto coarse = pc_approximate(u, 64);
        auto fine = pc_approximate(u, 4096);
        CHECK(sample_total_variation(coarse.values) <= sample_total_variation(fine.values) + 1e-15);
        CHECK(sample_total_variation(fine.values) <= sample_total_variation(u.samples) + 1e-15);
    }
    SUBCASE("left-endpoint hold converges pointwise at continuity points") {
        auto u = sampled_cosine(1.0, 1.0, 3.0, 3000);
        auto pc = pc_approximate(u, 3000);
        CHECK(pc.value_at(1.7) == doctest::Approx(std::cos(1.7)).epsilon(1e-3));
    }
}

TEST_CASE("pc_approximate rejects refinements beyond the sample resolution") {
    auto u = SampledBVControl::make({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
    CHECK_THROWS_WITH_AS(pc_approximate(u, 3) /* > 2 intervals */,
                         doctest::Contains("finer grid"), std::invalid_argument);
}

TEST_CASE("declared TV below the sampled variation is rejected") {
    CHECK_THROWS_AS(SampledBVControl::make({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 0.5),
                    std::invalid_argument);
    CHECK_NOTHROW(SampledBVControl::make({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 2.0));
}

TEST_CASE("piecewise-constant evaluation conventions") {
    auto u = PiecewiseConstantControl::make({0.0, 1.0, 2.0}, {0.4, -0.2});
    CHECK(u.value_at(-1.0) == 0.0);
    CHECK(u.value_at(0.0) == 0.0);  // u vanishes on t <= 0
    CHECK(u.value_at(0.5) == 0.4);
    CHECK(u.value_at(1.0) == 0.4);  // value on (t_{j-1}, t_j]
    CHECK(u.value_at(1.5) == -0.2);
    CHECK(u.value_at(2.0) == -0.2);
    CHECK(u.value_at(2.5) == 0.0);
    CHECK(u.sup_abs() == 0.4);
}

TEST_CASE("l1_distance is exact on merged breakpoints") {
    auto u = PiecewiseConstantControl::make({0.0, 1.0, 2.0}, {1.0, 0.0});
    auto v = PiecewiseConstantControl::make({0.0, 0.5, 2.0}, {1.0, 0.5});
    // |u - v|: 0 on (0,0.5], 0.5 on (0.5,1], 0.5 on (1,2]
    CHECK(l1_distance(u, v) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(l1_distance(u, u) == 0.0);
}

TEST_CASE("control validation") {
    CHECK_THROWS_AS(PiecewiseConstantControl::make({0.5, 1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseConstantControl::make({0.0, 1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseConstantControl::make({0.0, 1.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(SampledBVControl::make({0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SampledBVControl::make({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
}
