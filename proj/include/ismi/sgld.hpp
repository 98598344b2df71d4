#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ismi/logreg.hpp"
#include "ismi/parallel.hpp"

namespace ismi::sgld {

/// Step sizes and noise scales for iterations t = 1..T (stored at t - 1).
struct Schedule {
    std::vector<double> eta;
    std::vector<double> sigma;

    int length() const { return static_cast<int>(eta.size()); }
    void validate() const;

    /// eta_t = c / t, sigma_t = sqrt(eta_t).
    static Schedule harmonic(double c, int iterations);
    static Schedule constant(double eta, double sigma, int iterations);
};

enum class Sampling { WithoutReplacement, WithReplacement };

std::string to_string(Sampling s);

/// Realized sample indices U_1..U_T (0-based samples) and, per sample, the
/// 1-based iterations at which it was used.
struct Path {
    int n = 0;
    std::vector<int> indices;
    std::vector<std::vector<int>> iterations;

    static Path from_indices(int n, std::vector<int> indices);
};

Path sample_path(int n, int epochs, Sampling scheme, Rng& rng);

/// (R / n) sum_i sqrt(sum_{t in T_i} eta_t^2 L^2 / sigma_t^2).
double ismi_bound_per_path(const Path& path, const Schedule& schedule, double L, double R);

/// Per-iteration information budget (d/2) log(1 + eta_t^2 L^2 / (d sigma_t^2)).
std::vector<double> per_step_information(const Schedule& schedule, double L, int d);

/// Same as ismi_bound_per_path before relaxing log(1 + x) <= x.
double pre_relaxation_bound(const Path& path, const Schedule& schedule, double L, double R, int d);

/// (R L sqrt(c) / n) sum_i sqrt(1/i + (log(K - 1) + 1) / n); requires K >= 2.
double analytic_ismi_bound(int n, int epochs, double c, double L, double R);

/// (R L sqrt(c) / sqrt(n)) int_0^1 sqrt(1/x + 1 + log(K - 1)) dx, the continuum form of the sum.
double analytic_ismi_integral(int n, int epochs, double c, double L, double R);

/// (R L / sqrt(n)) sqrt(c log(nK) + c).
double pensia_bound(int n, int epochs, double c, double L, double R);

/// Average of ismi_bound_per_path over sampled without-replacement paths.
MeanSe monte_carlo_path_bound(int n, int epochs, double c, double L, double R, int paths, std::uint64_t seed,
                              int threads = 1);

struct RunConfig {
    int n = 0;  // 0: take from the dataset
    int epochs = 1;
    double c = 1.0;
    double L = 1.0;  // gradient clipping norm
    double R = 0.5;
    Sampling sampling = Sampling::WithoutReplacement;
};

struct Trajectory {
    std::vector<Eigen::VectorXd> iterates;  // W_0 .. W_T
    std::vector<double> grad_norms;         // after clipping
    std::vector<double> epoch_objective;    // full logistic objective after each epoch
    Eigen::VectorXd final() const { return iterates.back(); }
};

/// W_t = W_{t-1} - eta_t clip_L(grad l(W_{t-1}, Z_{U_t})) + sigma_t xi on the logistic loss.
Trajectory run_sgld(const logreg::Dataset& data, const Path& path, const Schedule& schedule, double L, Rng& rng);

/// Draws the path and harmonic schedule from `cfg` and runs SGLD.
Trajectory run_sgld(const logreg::Dataset& data, const RunConfig& cfg, Rng& rng);

}  // namespace ismi::sgld
