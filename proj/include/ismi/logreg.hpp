#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "ismi/knn_mi.hpp"
#include "ismi/parallel.hpp"

namespace ismi::logreg {

/// Balanced two-class Gaussian mixture: Y = +-1 equiprobable, X ~ N(mu_Y, Sigma).
struct DataModel {
    Eigen::VectorXd mu_plus;
    Eigen::VectorXd mu_minus;
    Eigen::MatrixXd sigma;

    int dim() const { return static_cast<int>(mu_plus.size()); }
    void validate() const;

    /// d = 2, mu_+ = (1, 1), mu_- = (-1, -1), Sigma = 4 I.
    static DataModel reference();
};

struct Dataset {
    Eigen::MatrixXd x;  // n x d
    Eigen::VectorXd y;  // +-1

    Eigen::Index size() const { return x.rows(); }
};

Dataset generate_dataset(const DataModel& model, int n, Rng& rng);

struct TrainConfig {
    double step = 0.1;
    double grad_tol = 1e-6;
    int max_iterations = 10000;
};

struct TrainedModel {
    Eigen::VectorXd w;
    int iterations = 0;
    double final_objective = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
};

/// (1/n) sum log(1 + exp(-y_i w'x_i)).
double logistic_objective(const Eigen::VectorXd& w, const Dataset& data);
Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& w, const Dataset& data);

/// Full-batch gradient descent from w = 0 without regularization. A step that
/// would raise the objective is rejected and retried at half the step size.
/// Rows are put in a canonical order first, so any permutation of the
/// training set yields a bit-identical w.
TrainedModel train_logreg(const Dataset& data, const TrainConfig& cfg = {});

/// +1 when w'x >= 0.
int classify(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x);
int zero_one_loss(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x, double y);
double empirical_risk(const Eigen::VectorXd& w, const Dataset& data);

/// P(error | w) = 1/2 Q(w'mu_+ / s) + 1/2 Q(-w'mu_- / s), s = sqrt(w' Sigma w).
double population_risk(const DataModel& model, const Eigen::VectorXd& w);

/// 0-1 loss is bounded in [0, 1], so it is 1/2-sub-Gaussian (Hoeffding).
inline constexpr double kSubGaussianR = 0.5;

/// One training run: the trained w, the first training sample and the risks.
struct TrialOutcome {
    Eigen::VectorXd w;
    Eigen::VectorXd z_first;   // (x_1, y_1)
    Eigen::VectorXd z_second;  // (x_2, y_2), empty when n = 1
    double train_risk = 0.0;
    double test_risk = 0.0;
    int resampled = 0;
    bool converged = true;
};

/// Trains on a fresh dataset, redrawing it when it is linearly separable
/// (diverging weights); test risk uses `test_size` fresh samples.
TrialOutcome run_trial(const DataModel& model, int n, int test_size, Rng& rng, const TrainConfig& cfg = {});

struct GenErrorEstimate {
    double mean;
    double se;
    int resampled;
};

GenErrorEstimate empirical_gen_error(const DataModel& model, int n, int trials, int test_size, std::uint64_t seed,
                                     int threads = 1);

struct IsmiEstimate {
    double bound;
    double bound_se;
    double mi_hat;  // unclamped estimate
    double mi_se;
    KsgVariant variant;
    int k;
    int runs;
    int resampled;
};

/// sqrt(max(I, 0) / 2) with an SE bracket from I +- se.
IsmiEstimate ismi_from_mi(const KnnMiResult& mi, int resampled);

/// Cloud of (w, z_j) pairs from collected runs; sample_index selects z_1 (0) or z_2 (1).
SampleCloud make_cloud(const std::vector<TrialOutcome>& runs, int k, int sample_index = 0);

/// Same cloud with w rows taken from another run, which makes w independent of z.
SampleCloud make_independent_cloud(const std::vector<TrialOutcome>& runs, int k, std::uint64_t seed);

/// Trains N times on independent datasets and estimates the ISMI bound from I(W; Z_1).
IsmiEstimate estimate_ismi_bound(const DataModel& model, int n, int runs, int k, std::uint64_t seed,
                                 int threads = 1, KsgVariant variant = KsgVariant::Revised);

/// Collects `runs` trials for one n; shared by the gen-error and bound estimates.
std::vector<TrialOutcome> collect_runs(const DataModel& model, int n, int runs, int test_size, std::uint64_t seed,
                                       int threads = 1);

}  // namespace ismi::logreg
