#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ismi {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Neighbor {
    Eigen::Index index;
    double distance;

    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

double max_norm_distance(std::span<const double> a, std::span<const double> b);

/// Immutable kd-tree under the max-norm. Neighbors are ordered by (distance, index).
class KdTree {
public:
    explicit KdTree(PointMatrix points, int leaf_size = 12);

    Eigen::Index size() const { return points_.rows(); }
    Eigen::Index dim() const { return points_.cols(); }
    std::span<const double> point(Eigen::Index i) const {
        return {points_.data() + i * points_.cols(), static_cast<std::size_t>(points_.cols())};
    }

    std::vector<Neighbor> knn(std::span<const double> query, int k,
                              std::optional<Eigen::Index> exclude = std::nullopt) const;

    /// Points at distance < radius (strict) or <= radius, never counting `exclude`.
    std::size_t count_within(std::span<const double> query, double radius, bool strict = true,
                             std::optional<Eigen::Index> exclude = std::nullopt) const;

private:
    struct Node {
        Eigen::Index begin, end;
        int left = -1, right = -1;
    };

    int build(Eigen::Index begin, Eigen::Index end);
    double box_distance(int node, std::span<const double> q) const;
    double box_far_distance(int node, std::span<const double> q) const;
    void knn_visit(int node, std::span<const double> q, int k, std::optional<Eigen::Index> exclude,
                   std::vector<Neighbor>& heap) const;
    std::size_t count_visit(int node, std::span<const double> q, double radius, bool strict,
                            std::optional<Eigen::Index> exclude) const;

    PointMatrix points_;
    std::vector<Eigen::Index> order_;
    std::vector<Node> nodes_;
    std::vector<double> box_lo_, box_hi_;
    int leaf_size_;
};

std::vector<Neighbor> brute_force_knn(const PointMatrix& points, std::span<const double> query, int k,
                                      std::optional<Eigen::Index> exclude = std::nullopt);

/// Exact k nearest neighbors; brute force for at most 256 points, kd-tree otherwise.
std::vector<Neighbor> knn_search(const PointMatrix& points, std::span<const double> query, int k);

}  // namespace ismi
