#pragma once

#include <string>

#include "ismi/kdtree.hpp"

namespace ismi {

enum class KsgVariant {
    /// Log-count form with log N; the variant analyzed for consistency of fixed-k estimators.
    Revised,
    /// Kraskov-Stoegbauer-Grassberger estimator 1 (digamma form).
    Classic,
};

std::string to_string(KsgVariant v);
KsgVariant ksg_variant_from_string(const std::string& s);

/// N paired rows of (w-part, z-part) for kNN mutual information estimation.
struct SampleCloud {
    PointMatrix w;
    PointMatrix z;
    int k = 5;
};

struct KnnMiResult {
    double estimate;
    double std_error;  // standard deviation of per-row terms over sqrt(N)
    KsgVariant variant;
    int k;
    Eigen::Index n;
};

/// Max-norm KSG estimate of I(w; z) in nats. May be slightly negative.
///
/// Every column is first scaled to unit sample variance.
///
/// Exact distance ties (e.g. a discrete label embedded as +-1) are split by a
/// deterministic per-row jitter of relative size 1e-12, after which marginal
/// neighbors are counted strictly inside the joint k-th neighbor distance.
/// Throws DegenerateCloud when the whole w-part or z-part is constant.
KnnMiResult knn_mi(const SampleCloud& cloud, KsgVariant variant = KsgVariant::Revised);

}  // namespace ismi
