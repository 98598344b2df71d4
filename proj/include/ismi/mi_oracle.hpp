#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace ismi {

/// Finite joint probability table over (W, Z_1, ..., Z_n).
///
/// Coordinate 0 is W, coordinates 1..n are the samples. Entries are stored
/// row-major with the last coordinate varying fastest.
class DiscreteJoint {
public:
    DiscreteJoint(std::vector<int> sizes, std::vector<double> probs);

    const std::vector<int>& sizes() const { return sizes_; }
    std::span<const double> probs() const { return probs_; }
    int rank() const { return static_cast<int>(sizes_.size()); }
    int num_samples() const { return rank() - 1; }

    /// Marginal table over the given coordinates, in the order given.
    std::vector<double> marginal(std::span<const int> coords) const;

    /// Decompose a flat index into per-coordinate outcomes.
    std::vector<int> unravel(std::size_t flat) const;

private:
    std::vector<int> sizes_;
    std::vector<double> probs_;
};

/// Covariance blocks of a jointly Gaussian pair (W, Z).
struct GaussianJointSpec {
    Eigen::MatrixXd cov_w;
    Eigen::MatrixXd cov_z;
    Eigen::MatrixXd cross;  // Cov[W, Z], dim_w x dim_z

    Eigen::MatrixXd joint() const;
};

double discrete_mi(const DiscreteJoint& joint, std::span<const int> coords_a, std::span<const int> coords_b);

/// 1/2 log(|Cov W| |Cov Z| / |Cov joint|); +inf when the joint covariance is singular.
double gaussian_mi(const GaussianJointSpec& spec);

struct ChainRuleGap {
    double full;                    // I(W; S)
    double per_sample_sum;          // sum_i I(W; Z_i)
    std::vector<double> per_sample; // I(W; Z_i)
};

/// Requires the Z-marginal to factor into independent coordinates (tolerance 1e-9).
ChainRuleGap chain_rule_gap(const DiscreteJoint& joint);

/// Random joint with product Z-marginal: P(Z_i) drawn independently, then P(W | Z_1..Z_n).
/// Entries are exponential draws normalized per distribution.
DiscreteJoint random_product_joint(int w_size, std::span<const int> z_sizes, std::mt19937_64& rng);

}  // namespace ismi
