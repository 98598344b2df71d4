#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "ismi/errors.hpp"
#include "ismi/gp_example.hpp"
#include "ismi/knn_mi.hpp"

using namespace ismi;
using namespace ismi::gp;
using std::numbers::pi;

TEST_CASE("phase convention: w = (sin phi, cos phi)") {
    CHECK(phase_of(Vec2(0, 1)).phi == doctest::Approx(0.0));
    CHECK(phase_of(Vec2(1, 0)).phi == doctest::Approx(pi / 2));
    CHECK(phase_of(Vec2(0, -2)).phi == doctest::Approx(pi));
    CHECK(phase_of(Vec2(-1, 0)).phi == doctest::Approx(3 * pi / 2));
    const auto z = phase_of(Vec2(0, 0));
    CHECK(z.degenerate);
    CHECK(z.phi == 0.0);
}

TEST_CASE("ERM phase points along the sample mean") {
    const std::vector<Vec2> s{Vec2(1, 0), Vec2(0, 1)};
    CHECK(erm_phase(s).phi == doctest::Approx(pi / 4));
}

TEST_CASE("exact generalization error") {
    CHECK(exact_gen_erm(2) == doctest::Approx(std::sqrt(pi) / 2));
    CHECK(exact_gen_noisy(8, 0.05) == doctest::Approx(0.05 * std::sqrt(pi / 16)));
}

TEST_CASE("phase density integrates to one") {
    for (int n : {2, 3, 16, 1024})
        for (double r : {0.0, 0.2, 1.0, 3.0, 7.5}) {
            QuadratureConfig cfg;
            cfg.tolerance = 1e-12;
            const double mass = integrate([&](double p) { return phase_pdf(p, r, n); }, 0.0, 2 * pi, cfg);
            CHECK(std::abs(mass - 1.0) <= 1e-6);
        }
}

TEST_CASE("phase density matches conditional sampling") {
    for (int n : {3, 10}) {
        for (double r : {0.5, 2.0}) {
            const auto samples = sample_conditional_phases(r, n, 100000, 17 + n, 1);
            CHECK(ks_distance(samples, phase_density(r, n)) < 0.02);
        }
    }
}

TEST_CASE("at n = 2 the MI agrees with a kNN estimate from samples") {
    // (W, Z_1) drawn from the model; W as a 2-vector avoids the phase wrap.
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    const int N = 20000;
    SampleCloud c{PointMatrix(N, 2), PointMatrix(N, 2), 5};
    for (int i = 0; i < N; ++i) {
        const std::vector<Vec2> s{Vec2(g(rng), g(rng)), Vec2(g(rng), g(rng))};
        const double phi = erm_phase(s).phi;
        c.w(i, 0) = std::sin(phi);
        c.w(i, 1) = std::cos(phi);
        c.z(i, 0) = s[0].x();
        c.z(i, 1) = s[0].y();
    }
    CHECK(std::abs(knn_mi(c).estimate - ismi_gp(2)) < 0.05);
}

TEST_CASE("bound is finite from n = 2, above the truth and below the chaining reference") {
    CHECK(std::isinf(ismi_bound_gp(1)));
    for (int n = 2; n <= 1024; n *= 2) {
        const double b = ismi_bound_gp(n);
        CHECK(std::isfinite(b));
        CHECK(b >= exact_gen_erm(n));
        CHECK(b < cmi_reference(n));
    }
}

TEST_CASE("added noise cannot increase the information") {
    for (int n : {2, 8, 64})
        for (double eps : {0.0, 0.05, 0.5, 1.0}) CHECK(ismi_gp(n, eps) <= ismi_gp(n) + 1e-8);
    CHECK(ismi_gp(4, 0.0) == 0.0);
}

TEST_CASE("noisy bound dominates the noisy truth") {
    for (int n : {2, 16, 256}) CHECK(ismi_bound_gp(n, 0.05) >= exact_gen_noisy(n, 0.05));
}

TEST_CASE("Monte Carlo gen matches sqrt(pi / 2n)") {
    for (int n : {1, 5}) {
        const auto mc = monte_carlo_gen({n, 1.0}, 20000, 3, 1);
        CHECK(std::abs(mc.mean - exact_gen_erm(n)) <= 3 * mc.se);
    }
}

TEST_CASE("bad parameters") {
    CHECK_THROWS_AS(ismi_gp(0), DomainError);
    CHECK_THROWS_AS(exact_gen_noisy(4, 1.5), DomainError);
}
