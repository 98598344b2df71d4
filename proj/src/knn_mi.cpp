#include "ismi/knn_mi.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <cstdint>

#include "ismi/errors.hpp"

namespace ismi {

std::string to_string(KsgVariant v) { return v == KsgVariant::Revised ? "ksg-revised" : "ksg-classic"; }

KsgVariant ksg_variant_from_string(const std::string& s) {
    if (s == "ksg-revised" || s == "revised") return KsgVariant::Revised;
    if (s == "ksg-classic" || s == "classic") return KsgVariant::Classic;
    throw DomainError("unknown KSG variant: " + s);
}

namespace {

double index_jitter(std::uint64_t row, std::uint64_t col) {
    // splitmix64 finalizer on (row, col)
    std::uint64_t x = row * 0x9E3779B97F4A7C15ULL + col * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53 - 0.5;
}

bool all_columns_constant(const PointMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (m.col(c).maxCoeff() > m.col(c).minCoeff()) return false;
    return true;
}

// Unit sample variance per column. MI is unchanged, but the max-norm then
// weighs both parts comparably instead of letting the wider one set every radius.
void standardize(PointMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double mean = m.col(c).mean();
        const double sd = std::sqrt((m.col(c).array() - mean).square().sum() / static_cast<double>(m.rows()));
        if (sd > 0.0) m.col(c) = (m.col(c).array() - mean) / sd;
    }
}

void jitter(PointMatrix& m, Eigen::Index col_offset) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double spread = m.col(c).maxCoeff() - m.col(c).minCoeff();
        const double scale = 1e-12 * std::max(1.0, spread);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            m(r, c) += scale * index_jitter(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c + col_offset));
    }
}

}  // namespace

KnnMiResult knn_mi(const SampleCloud& cloud, KsgVariant variant) {
    const auto n = cloud.w.rows();
    const int k = cloud.k;
    if (cloud.z.rows() != n) throw DomainError("knn_mi: w and z row counts differ");
    if (cloud.w.cols() < 1 || cloud.z.cols() < 1) throw DomainError("knn_mi: empty part");
    if (k < 1 || n <= k) throw DomainError("knn_mi: need N > k >= 1");
    if (cloud.w.hasNaN() || cloud.z.hasNaN()) throw DomainError("knn_mi: NaN in sample cloud");
    if (all_columns_constant(cloud.w) || all_columns_constant(cloud.z))
        throw DegenerateCloud("knn_mi: a part of the cloud is constant; neighbor counts are undefined");

    PointMatrix w = cloud.w, z = cloud.z;
    standardize(w);
    standardize(z);
    jitter(w, 0);
    jitter(z, w.cols());
    PointMatrix joint(n, w.cols() + z.cols());
    joint << w, z;

    const KdTree joint_tree(joint);
    const KdTree w_tree(std::move(w));
    const KdTree z_tree(std::move(z));

    using boost::math::digamma;
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto nb = joint_tree.knn(joint_tree.point(i), k, i);
        const double eps = nb.back().distance;
        const auto nw = static_cast<double>(w_tree.count_within(w_tree.point(i), eps, true, i));
        const auto nz = static_cast<double>(z_tree.count_within(z_tree.point(i), eps, true, i));
        const double term = variant == KsgVariant::Classic ? -(digamma(nw + 1.0) + digamma(nz + 1.0))
                                                           : -(std::log(nw + 1.0) + std::log(nz + 1.0));
        sum += term;
        sum_sq += term * term;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = std::max(0.0, sum_sq / nn - mean * mean);
    const double offset = variant == KsgVariant::Classic ? digamma(static_cast<double>(k)) + digamma(nn)
                                                         : digamma(static_cast<double>(k)) + std::log(nn);
    return {offset + mean, std::sqrt(var / nn), variant, k, n};
}

}  // namespace ismi
