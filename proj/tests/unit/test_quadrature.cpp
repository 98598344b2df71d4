#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ismi/errors.hpp"
#include "ismi/quadrature.hpp"

using namespace ismi;
using std::numbers::pi;

TEST_CASE("both rules integrate smooth functions to tolerance") {
    for (auto rule : {QuadratureRule::Simpson, QuadratureRule::GaussLegendre}) {
        QuadratureConfig cfg;
        cfg.rule = rule;
        cfg.tolerance = 1e-12;
        CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi, cfg) == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, cfg) ==
              doctest::Approx(std::exp(1.0) - 1).epsilon(1e-11));
    }
}

TEST_CASE("differential entropy of known densities") {
    // Uniform on [0, 3): log 3
    Density1D u{[](double) { return 1.0 / 3; }, 0.0, 3.0};
    CHECK(differential_entropy(u) == doctest::Approx(std::log(3.0)).epsilon(1e-10));

    // Standard normal truncated at +-12: 1/2 log(2 pi e)
    Density1D g{[](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * pi); }, -12.0, 12.0};
    g.config.tolerance = 1e-11;
    CHECK(differential_entropy(g) == doctest::Approx(0.5 * std::log(2 * pi * std::numbers::e)).epsilon(1e-9));

    // Exponential(2) truncated at 40: 1 - log 2
    Density1D e{[](double x) { return 2 * std::exp(-2 * x); }, 0.0, 40.0};
    e.config.tolerance = 1e-11;
    CHECK(differential_entropy(e) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("unnormalized or negative densities are rejected") {
    Density1D half{[](double) { return 0.5; }, 0.0, 1.0};
    CHECK_THROWS_AS(differential_entropy(half), NonNormalized);
    Density1D neg{[](double x) { return x < 0.5 ? -1.0 : 3.0; }, 0.0, 1.0};
    CHECK_THROWS_AS(differential_entropy(neg), DomainError);
}

TEST_CASE("Rayleigh expectations") {
    CHECK(expectation_over_rayleigh([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation_over_rayleigh([](double r) { return r; }) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-12));
    CHECK(expectation_over_rayleigh([](double r) { return r * r; }, 2.0) == doctest::Approx(8.0).epsilon(1e-10));
}
