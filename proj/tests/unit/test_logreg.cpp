#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ismi/errors.hpp"
#include "ismi/logreg.hpp"

using namespace ismi;
using namespace ismi::logreg;

TEST_CASE("training is bit-identical under any permutation of the rows") {
    auto rng = substream(1, 0, 0);
    const auto data = generate_dataset(DataModel::reference(), 60, rng);
    const auto base = train_logreg(data);
    REQUIRE(base.converged);
    std::vector<Eigen::Index> perm(60);
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (int t = 0; t < 5; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        Dataset p{Eigen::MatrixXd(60, 2), Eigen::VectorXd(60)};
        for (Eigen::Index i = 0; i < 60; ++i) {
            p.x.row(i) = data.x.row(perm[static_cast<std::size_t>(i)]);
            p.y(i) = data.y(perm[static_cast<std::size_t>(i)]);
        }
        const auto other = train_logreg(p);
        CHECK(other.w == base.w);
        CHECK(other.iterations == base.iterations);
    }
}

TEST_CASE("trained weights satisfy the first-order condition") {
    auto rng = substream(2, 0, 0);
    const auto data = generate_dataset(DataModel::reference(), 100, rng);
    const auto m = train_logreg(data);
    CHECK(m.converged);
    CHECK(logistic_gradient(m.w, data).norm() < 1e-6);
    CHECK(m.final_objective < std::log(2.0));
}

TEST_CASE("gradient matches finite differences") {
    auto rng = substream(3, 0, 0);
    const auto data = generate_dataset(DataModel::reference(), 30, rng);
    const Eigen::VectorXd w = Eigen::Vector2d(0.3, -0.7);
    const auto g = logistic_gradient(w, data);
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
        e(j) = 1e-6;
        const double fd = (logistic_objective(w + e, data) - logistic_objective(w - e, data)) / 2e-6;
        CHECK(g(j) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("a symmetric dataset leaves w at zero, which predicts +1") {
    Dataset d{Eigen::MatrixXd(4, 2), Eigen::VectorXd(4)};
    d.x << 1, 2, -1, -2, 3, 0, -3, 0;
    d.y << 1, 1, -1, -1;  // each point paired with its mirror under the same label
    const auto m = train_logreg(d);
    CHECK(m.iterations == 0);
    CHECK(m.w.isZero());
    CHECK(classify(m.w, Eigen::Vector2d(-5, 1)) == 1);
    CHECK(zero_one_loss(m.w, Eigen::Vector2d(-5, 1), -1.0) == 1);
    CHECK(population_risk(DataModel::reference(), m.w) == 0.5);
}

TEST_CASE("closed-form risk of a linear rule agrees with held-out error") {
    const auto model = DataModel::reference();
    // w = (1, 1): margin 2 / sqrt(8) on both classes
    CHECK(population_risk(model, Eigen::Vector2d(1, 1)) == doctest::Approx(0.5 * std::erfc(0.5)).epsilon(1e-12));
    auto rng = substream(4, 0, 0);
    for (const Eigen::Vector2d w : {Eigen::Vector2d(1, 1), Eigen::Vector2d(0.2, -1.0), Eigen::Vector2d(-1, -0.5)}) {
        const auto test = generate_dataset(model, 200000, rng);
        const double p = population_risk(model, w);
        const double se = std::sqrt(p * (1 - p) / 200000);
        CHECK(std::abs(empirical_risk(w, test) - p) <= 4 * se);
    }
}

TEST_CASE("separable draws are redrawn and counted") {
    const auto model = DataModel::reference();
    int resampled = 0;
    for (int t = 0; t < 200; ++t) {
        auto rng = substream(5, 0, static_cast<std::uint64_t>(t));
        const auto out = run_trial(model, 3, 0, rng);
        resampled += out.resampled;
        CHECK(std::isfinite(out.w.norm()));
    }
    CHECK(resampled > 0);
}

TEST_CASE("exchangeable samples carry the same information, and shuffling removes it") {
    const auto runs = collect_runs(DataModel::reference(), 25, 3000, 0, 77, 1);
    const double i1 = knn_mi(make_cloud(runs, 5, 0)).estimate;
    const double i2 = knn_mi(make_cloud(runs, 5, 1)).estimate;
    CHECK(std::abs(i1 - i2) < 0.05);
    const auto control = ismi_from_mi(knn_mi(make_independent_cloud(runs, 5, 77)), 0);
    CHECK(control.bound <= 0.05);
}

TEST_CASE("estimate bracket and clamping") {
    const auto pos = ismi_from_mi({0.02, 0.005, KsgVariant::Revised, 5, 5000}, 0);
    CHECK(pos.bound == doctest::Approx(0.1));
    CHECK(pos.bound_se > 0.0);
    const auto neg = ismi_from_mi({-0.01, 0.005, KsgVariant::Revised, 5, 5000}, 0);
    CHECK(neg.bound == 0.0);
    CHECK(neg.mi_hat == -0.01);
}

TEST_CASE("preconditions") {
    const auto model = DataModel::reference();
    CHECK_THROWS_AS(empirical_gen_error(model, 10, 50, 10000, 1), DomainError);
    CHECK_THROWS_AS(empirical_gen_error(model, 10, 200, 100, 1), DomainError);
    CHECK_THROWS_AS(estimate_ismi_bound(model, 10, 999, 5, 1), DomainError);
    DataModel bad = model;
    bad.sigma(0, 1) = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
