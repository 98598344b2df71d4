#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ismi/errors.hpp"
#include "ismi/knn_mi.hpp"

using namespace ismi;

namespace {

SampleCloud gaussian_pair(double rho, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SampleCloud c{PointMatrix(n, 1), PointMatrix(n, 1), 5};
    for (int i = 0; i < n; ++i) {
        const double a = g(rng), b = g(rng);
        c.w(i, 0) = a;
        c.z(i, 0) = rho * a + std::sqrt(1 - rho * rho) * b;
    }
    return c;
}

}  // namespace

TEST_CASE("both variants recover Gaussian MI") {
    for (auto v : {KsgVariant::Revised, KsgVariant::Classic}) {
        for (double rho : {0.0, 0.5, 0.9}) {
            double err = 0.0;
            for (std::uint64_t s = 0; s < 4; ++s) err += std::abs(knn_mi(gaussian_pair(rho, 3000, s), v).estimate +
                                                                  0.5 * std::log1p(-rho * rho));
            CHECK(err / 4 < 0.05);
        }
    }
}

TEST_CASE("estimate is invariant to a joint row permutation") {
    auto c = gaussian_pair(0.6, 500, 3);
    const double before = knn_mi(c).estimate;
    std::vector<int> perm(500);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    SampleCloud p{c.w, c.z, c.k};
    for (int i = 0; i < 500; ++i) {
        p.w.row(i) = c.w.row(perm[static_cast<std::size_t>(i)]);
        p.z.row(i) = c.z.row(perm[static_cast<std::size_t>(i)]);
    }
    CHECK(knn_mi(p).estimate == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("a +-1 label with a continuous partner is handled through tie splitting") {
    // Z = (X, Y) with Y = sign(X): I(W; Z) for W = X is large, for independent W near zero.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const int n = 2000;
    SampleCloud c{PointMatrix(n, 1), PointMatrix(n, 2), 5};
    for (int i = 0; i < n; ++i) {
        const double x = g(rng);
        c.w(i, 0) = g(rng);
        c.z(i, 0) = x;
        c.z(i, 1) = x >= 0 ? 1.0 : -1.0;
    }
    CHECK(std::abs(knn_mi(c).estimate) < 0.05);
}

TEST_CASE("degenerate clouds and bad shapes are rejected") {
    SampleCloud c{PointMatrix::Zero(50, 1), PointMatrix::Random(50, 1), 5};
    CHECK_THROWS_AS(knn_mi(c), DegenerateCloud);
    SampleCloud small{PointMatrix::Random(4, 1), PointMatrix::Random(4, 1), 5};
    CHECK_THROWS_AS(knn_mi(small), DomainError);
    SampleCloud mismatch{PointMatrix::Random(10, 1), PointMatrix::Random(9, 1), 3};
    CHECK_THROWS_AS(knn_mi(mismatch), DomainError);
}

TEST_CASE("variant names round-trip") {
    for (auto v : {KsgVariant::Revised, KsgVariant::Classic}) CHECK(ksg_variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(ksg_variant_from_string("nope"), DomainError);
}
