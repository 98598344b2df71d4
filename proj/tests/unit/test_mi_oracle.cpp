#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ismi/bounds.hpp"
#include "ismi/errors.hpp"
#include "ismi/mi_oracle.hpp"

using namespace ismi;

TEST_CASE("mutual information of a copied fair bit is log 2") {
    // W = Z_1, uniform on {0, 1}
    DiscreteJoint j({2, 2}, {0.5, 0.0, 0.0, 0.5});
    const int a[] = {0}, b[] = {1};
    CHECK(discrete_mi(j, a, b) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("independent coordinates carry no information") {
    DiscreteJoint j({2, 3}, {0.1, 0.2, 0.1, 0.15, 0.3, 0.15});
    const int a[] = {0}, b[] = {1};
    CHECK(std::abs(discrete_mi(j, a, b)) < 1e-15);
}

TEST_CASE("parity of two bits: each sample alone is uninformative") {
    // W = Z_1 xor Z_2 with uniform independent bits.
    std::vector<double> p(8, 0.0);
    for (int z1 = 0; z1 < 2; ++z1)
        for (int z2 = 0; z2 < 2; ++z2) p[static_cast<std::size_t>(((z1 ^ z2) * 2 + z1) * 2 + z2)] = 0.25;
    DiscreteJoint j({2, 2, 2}, p);
    const auto gap = chain_rule_gap(j);
    CHECK(gap.full == doctest::Approx(std::log(2.0)));
    CHECK(std::abs(gap.per_sample_sum) < 1e-15);
}

TEST_CASE("marginals and unravel are consistent") {
    DiscreteJoint j({2, 3}, {0.1, 0.2, 0.1, 0.15, 0.3, 0.15});
    const int c1[] = {1};
    const auto m = j.marginal(c1);
    CHECK(m[0] == doctest::Approx(0.25));
    CHECK(m[1] == doctest::Approx(0.5));
    CHECK(j.unravel(4) == std::vector<int>{1, 1});
}

TEST_CASE("invalid tables are rejected") {
    CHECK_THROWS_AS(DiscreteJoint({2, 2}, {0.5, 0.5, 0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(DiscreteJoint({2, 2}, {1.0, 0.0, 0.0}), DomainError);
    DiscreteJoint j({2, 2}, {0.25, 0.25, 0.25, 0.25});
    const int a[] = {0, 1}, b[] = {1};
    CHECK_THROWS_AS(discrete_mi(j, a, b), DomainError);
}

TEST_CASE("correlated samples violate the chain-rule precondition") {
    // Z_1 = Z_2, W constant
    DiscreteJoint j({1, 2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK_THROWS_AS(chain_rule_gap(j), PreconditionError);
}

TEST_CASE("per-sample information never exceeds the full information on random joints") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ws(1, 4), ns(1, 3), zs(2, 3);
    for (int t = 0; t < 1000; ++t) {
        const int n = ns(rng);
        std::vector<int> z(static_cast<std::size_t>(n));
        for (auto& s : z) s = zs(rng);
        const auto j = random_product_joint(ws(rng), z, rng);
        const auto gap = chain_rule_gap(j);
        REQUIRE(gap.per_sample_sum <= gap.full + 1e-9);
        // Jensen: the per-sample sub-Gaussian bound is the tighter one
        const double per = sub_gaussian_ismi({gap.per_sample, gap.full}, 1.0).upper;
        REQUIRE(per <= full_mi_bound(gap.full, n, 1.0) + 1e-9);
    }
}

TEST_CASE("Gaussian MI of a correlated pair is -1/2 log(1 - rho^2)") {
    for (double rho : {0.0, 0.3, 0.9}) {
        GaussianJointSpec s{Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1),
                            Eigen::MatrixXd::Constant(1, 1, rho)};
        CHECK(gaussian_mi(s) == doctest::Approx(-0.5 * std::log1p(-rho * rho)).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian MI is infinite for a deterministic relation") {
    GaussianJointSpec s{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                        Eigen::MatrixXd::Identity(2, 2)};
    CHECK(std::isinf(gaussian_mi(s)));
}
