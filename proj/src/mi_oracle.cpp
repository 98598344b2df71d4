#include "ismi/mi_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ismi/errors.hpp"

namespace ismi {

namespace {

double xlogx_ratio(double p, double q) {
    return p > 0.0 ? p * std::log(p / q) : 0.0;
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<int> sizes, std::vector<double> probs)
    : sizes_(std::move(sizes)), probs_(std::move(probs)) {
    if (sizes_.empty()) throw DomainError("DiscreteJoint: no coordinates");
    std::size_t total = 1;
    for (int s : sizes_) {
        if (s < 1) throw DomainError("DiscreteJoint: alphabet sizes must be positive");
        total *= static_cast<std::size_t>(s);
    }
    if (probs_.size() != total) throw DomainError("DiscreteJoint: table size does not match alphabet sizes");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw DomainError("DiscreteJoint: negative or NaN entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("DiscreteJoint: entries do not sum to one");
}

std::vector<int> DiscreteJoint::unravel(std::size_t flat) const {
    std::vector<int> out(sizes_.size());
    for (int c = rank() - 1; c >= 0; --c) {
        out[c] = static_cast<int>(flat % sizes_[c]);
        flat /= sizes_[c];
    }
    return out;
}

std::vector<double> DiscreteJoint::marginal(std::span<const int> coords) const {
    std::size_t total = 1;
    for (int c : coords) {
        if (c < 0 || c >= rank()) throw DomainError("DiscreteJoint: coordinate out of range");
        total *= static_cast<std::size_t>(sizes_[c]);
    }
    std::vector<double> out(total, 0.0);
    std::vector<int> idx(sizes_.size(), 0);
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
        std::size_t m = 0;
        for (int c : coords) m = m * sizes_[c] + idx[c];
        out[m] += probs_[flat];
        for (int c = rank() - 1; c >= 0; --c) {
            if (++idx[c] < sizes_[c]) break;
            idx[c] = 0;
        }
    }
    return out;
}

double discrete_mi(const DiscreteJoint& joint, std::span<const int> coords_a, std::span<const int> coords_b) {
    for (int a : coords_a)
        if (std::find(coords_b.begin(), coords_b.end(), a) != coords_b.end())
            throw DomainError("discrete_mi: coordinate sets overlap");

    std::vector<int> both(coords_a.begin(), coords_a.end());
    both.insert(both.end(), coords_b.begin(), coords_b.end());
    const auto pa = joint.marginal(coords_a);
    const auto pb = joint.marginal(coords_b);
    const auto pab = joint.marginal(both);

    double mi = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j)
            mi += xlogx_ratio(pab[i * pb.size() + j], pa[i] * pb[j]);
    // Rounding leaves +-1e-16 or so for independent coordinates, which a square
    // root would blow up to 1e-8; snap anything below the accumulated rounding floor.
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(pab.size());
    return mi < floor && mi > -1e-12 ? 0.0 : mi;
}

Eigen::MatrixXd GaussianJointSpec::joint() const {
    const auto dw = cov_w.rows(), dz = cov_z.rows();
    Eigen::MatrixXd j(dw + dz, dw + dz);
    j.topLeftCorner(dw, dw) = cov_w;
    j.topRightCorner(dw, dz) = cross;
    j.bottomLeftCorner(dz, dw) = cross.transpose();
    j.bottomRightCorner(dz, dz) = cov_z;
    return j;
}

namespace {

// Log-determinant of a symmetric PSD matrix via LDLT; -inf if singular.
double log_det_psd(const Eigen::MatrixXd& m) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const auto diag = ldlt.vectorD();
    const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    double s = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag(i) <= 1e-14 * scale) return -std::numeric_limits<double>::infinity();
        s += std::log(diag(i));
    }
    return s;
}

}  // namespace

double gaussian_mi(const GaussianJointSpec& spec) {
    if (spec.cov_w.rows() != spec.cov_w.cols() || spec.cov_z.rows() != spec.cov_z.cols() ||
        spec.cross.rows() != spec.cov_w.rows() || spec.cross.cols() != spec.cov_z.rows())
        throw DomainError("gaussian_mi: block dimensions are inconsistent");
    const double lw = log_det_psd(spec.cov_w);
    const double lz = log_det_psd(spec.cov_z);
    if (!std::isfinite(lw) || !std::isfinite(lz)) throw DomainError("gaussian_mi: marginal covariance is singular");
    const double lj = log_det_psd(spec.joint());
    if (!std::isfinite(lj)) return std::numeric_limits<double>::infinity();
    return std::max(0.0, 0.5 * (lw + lz - lj));
}

ChainRuleGap chain_rule_gap(const DiscreteJoint& joint) {
    const int n = joint.num_samples();
    if (n < 1) throw PreconditionError("chain_rule_gap: joint has no sample coordinates");

    std::vector<int> zs(n);
    std::iota(zs.begin(), zs.end(), 1);
    const auto pz = joint.marginal(zs);
    std::vector<std::vector<double>> singles;
    for (int c : zs) singles.push_back(joint.marginal(std::span<const int>(&c, 1)));
    for (std::size_t flat = 0; flat < pz.size(); ++flat) {
        std::size_t rest = flat;
        double prod = 1.0;
        for (int c = n - 1; c >= 0; --c) {
            const auto sz = singles[c].size();
            prod *= singles[c][rest % sz];
            rest /= sz;
        }
        if (std::abs(prod - pz[flat]) > 1e-9)
            throw PreconditionError("chain_rule_gap: Z-marginal is not a product distribution");
    }

    const int w = 0;
    ChainRuleGap gap{};
    gap.full = discrete_mi(joint, std::span<const int>(&w, 1), zs);
    for (int c : zs) {
        gap.per_sample.push_back(discrete_mi(joint, std::span<const int>(&w, 1), std::span<const int>(&c, 1)));
        gap.per_sample_sum += gap.per_sample.back();
    }
    return gap;
}

DiscreteJoint random_product_joint(int w_size, std::span<const int> z_sizes, std::mt19937_64& rng) {
    if (w_size < 1 || z_sizes.empty()) throw DomainError("random_product_joint: bad alphabet sizes");
    std::exponential_distribution<double> expo(1.0);
    auto draw_simplex = [&](std::size_t m) {
        std::vector<double> p(m);
        double s = 0.0;
        for (auto& v : p) s += (v = expo(rng));
        for (auto& v : p) v /= s;
        return p;
    };

    std::vector<std::vector<double>> pz;
    std::size_t z_total = 1;
    for (int s : z_sizes) {
        pz.push_back(draw_simplex(static_cast<std::size_t>(s)));
        z_total *= static_cast<std::size_t>(s);
    }

    std::vector<int> sizes{w_size};
    sizes.insert(sizes.end(), z_sizes.begin(), z_sizes.end());
    std::vector<double> probs(static_cast<std::size_t>(w_size) * z_total);
    std::vector<std::vector<double>> cond(z_total);
    for (auto& c : cond) c = draw_simplex(static_cast<std::size_t>(w_size));

    const int n = static_cast<int>(z_sizes.size());
    for (std::size_t zf = 0; zf < z_total; ++zf) {
        std::size_t rest = zf;
        double prod = 1.0;
        for (int c = n - 1; c >= 0; --c) {
            prod *= pz[c][rest % z_sizes[c]];
            rest /= z_sizes[c];
        }
        for (int wv = 0; wv < w_size; ++wv) probs[wv * z_total + zf] = prod * cond[zf][wv];
    }
    // Renormalize away accumulated rounding so the 1e-12 sum invariant holds.
    const double s = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& p : probs) p /= s;
    return DiscreteJoint(std::move(sizes), std::move(probs));
}

}  // namespace ismi
