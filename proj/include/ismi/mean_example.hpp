#pragma once

#include <cstdint>

#include "ismi/bounds.hpp"
#include "ismi/mi_oracle.hpp"
#include "ismi/parallel.hpp"

namespace ismi::mean {

/// Learning the mean of N(mu, sigma^2 I_d) from n samples with squared loss.
/// All outputs are shift invariant, so mu is taken to be zero.
struct Params {
    int d = 2;
    double sigma_sq = 1.0;
    int n = 10;

    void validate() const;
    /// Variance scale of the loss of an independent (W, Z) pair: (n + 1) sigma^2 / n.
    double sigma_l_sq() const { return (n + 1.0) * sigma_sq / n; }
};

double exact_gen(const Params& p);

/// (d/2) log(n / (n - 1)); requires n >= 2.
double exact_per_sample_mi(const Params& p);

/// Covariance blocks (Sigma/n, Sigma, cross Sigma/n) of (W, Z_i).
GaussianJointSpec covariance_blocks(const Params& p);

/// sigma^2 d sqrt(2 (n+1)^2 / n^2 log(n / (n-1))).
double ismi_bound_mean(const Params& p);

/// Same value assembled from the chi-squared CGF bound and the generic ISMI engine.
GenBound ismi_bound_composed(const Params& p);

MeanSe monte_carlo_gen(const Params& p, int trials, std::uint64_t seed, int threads = 1);

}  // namespace ismi::mean
