#include <random>

#include "doctest.h"
#include "ismi/kdtree.hpp"

using namespace ismi;

namespace {

PointMatrix random_points(std::mt19937_64& rng, int n, int d, bool lattice) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> u(0, 3);
    PointMatrix p(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) p(i, j) = lattice ? u(rng) : g(rng);
    return p;
}

}  // namespace

TEST_CASE("kd-tree neighbors equal brute force, ties included") {
    std::mt19937_64 rng(11);
    for (int inst = 0; inst < 200; ++inst) {
        const int n = 20 + inst * 5, d = 1 + inst % 4, k = 1 + inst % 7;
        const bool lattice = inst % 3 == 0;  // many exact distance ties
        const auto pts = random_points(rng, n, d, lattice);
        KdTree tree(pts, 1 + inst % 16);
        for (int q = 0; q < 10; ++q) {
            const Eigen::Index i = (q * 37 + inst) % n;
            const auto row = tree.point(i);
            REQUIRE(tree.knn(row, k, i) == brute_force_knn(pts, row, k, i));
            const double r = tree.knn(row, k, i).back().distance;
            std::size_t strict = 0, loose = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dj = max_norm_distance(row, tree.point(j));
                strict += dj < r;
                loose += dj <= r;
            }
            REQUIRE(tree.count_within(row, r, true, i) == strict);
            REQUIRE(tree.count_within(row, r, false, i) == loose);
        }
    }
}

TEST_CASE("neighbors come back sorted by distance then index") {
    PointMatrix p(4, 1);
    p << 0.0, 1.0, -1.0, 2.0;
    const double q[] = {0.0};
    const auto nb = brute_force_knn(p, q, 3, 0);
    REQUIRE(nb.size() == 3);
    CHECK(nb[0].index == 1);
    CHECK(nb[1].index == 2);
    CHECK(nb[2].index == 3);
}

TEST_CASE("max-norm distance") {
    const double a[] = {0.0, 3.0, -1.0}, b[] = {1.0, 1.0, 2.5};
    CHECK(max_norm_distance(a, b) == 3.5);
}
