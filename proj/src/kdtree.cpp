#include "ismi/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ismi/errors.hpp"

namespace ismi {

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

KdTree::KdTree(PointMatrix points, int leaf_size) : points_(std::move(points)), leaf_size_(std::max(1, leaf_size)) {
    if (points_.rows() == 0 || points_.cols() == 0) throw DomainError("KdTree: empty point set");
    order_.resize(static_cast<std::size_t>(points_.rows()));
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    nodes_.reserve(static_cast<std::size_t>(2 * points_.rows() / leaf_size_ + 2));
    build(0, points_.rows());
}

int KdTree::build(Eigen::Index begin, Eigen::Index end) {
    const auto d = points_.cols();
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    box_lo_.resize(box_lo_.size() + d, std::numeric_limits<double>::infinity());
    box_hi_.resize(box_hi_.size() + d, -std::numeric_limits<double>::infinity());
    double* lo = box_lo_.data() + id * d;
    double* hi = box_hi_.data() + id * d;
    for (auto i = begin; i < end; ++i) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const double v = points_(order_[i], c);
            lo[c] = std::min(lo[c], v);
            hi[c] = std::max(hi[c], v);
        }
    }
    if (end - begin <= leaf_size_) return id;

    Eigen::Index split_dim = 0;
    double widest = -1.0;
    for (Eigen::Index c = 0; c < d; ++c) {
        if (hi[c] - lo[c] > widest) {
            widest = hi[c] - lo[c];
            split_dim = c;
        }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) { return points_(a, split_dim) < points_(b, split_dim); });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double KdTree::box_distance(int node, std::span<const double> q) const {
    const auto d = points_.cols();
    const double* lo = box_lo_.data() + node * d;
    const double* hi = box_hi_.data() + node * d;
    double dist = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
        if (q[c] < lo[c]) dist = std::max(dist, lo[c] - q[c]);
        else if (q[c] > hi[c]) dist = std::max(dist, q[c] - hi[c]);
    }
    return dist;
}

double KdTree::box_far_distance(int node, std::span<const double> q) const {
    const auto d = points_.cols();
    const double* lo = box_lo_.data() + node * d;
    const double* hi = box_hi_.data() + node * d;
    double dist = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) dist = std::max({dist, std::abs(q[c] - lo[c]), std::abs(q[c] - hi[c])});
    return dist;
}

void KdTree::knn_visit(int node, std::span<const double> q, int k, std::optional<Eigen::Index> exclude,
                       std::vector<Neighbor>& heap) const {
    if (static_cast<int>(heap.size()) == k && box_distance(node, q) > heap.front().distance) return;
    const Node& nd = nodes_[node];
    if (nd.left < 0) {
        for (auto i = nd.begin; i < nd.end; ++i) {
            const auto idx = order_[i];
            if (exclude && *exclude == idx) continue;
            const Neighbor cand{idx, max_norm_distance(point(idx), q)};
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    const double dl = box_distance(nd.left, q), dr = box_distance(nd.right, q);
    if (dl <= dr) {
        knn_visit(nd.left, q, k, exclude, heap);
        knn_visit(nd.right, q, k, exclude, heap);
    } else {
        knn_visit(nd.right, q, k, exclude, heap);
        knn_visit(nd.left, q, k, exclude, heap);
    }
}

std::vector<Neighbor> KdTree::knn(std::span<const double> query, int k, std::optional<Eigen::Index> exclude) const {
    const auto available = size() - (exclude ? 1 : 0);
    if (k < 1 || k > available) throw DomainError("KdTree::knn: k out of range");
    if (static_cast<Eigen::Index>(query.size()) != dim()) throw DomainError("KdTree::knn: query dimension mismatch");
    std::vector<Neighbor> heap;
    heap.reserve(static_cast<std::size_t>(k));
    knn_visit(0, query, k, exclude, heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
}

std::size_t KdTree::count_visit(int node, std::span<const double> q, double radius, bool strict,
                                std::optional<Eigen::Index> exclude) const {
    const double near = box_distance(node, q);
    if (strict ? near >= radius : near > radius) return 0;
    const Node& nd = nodes_[node];
    const double far = box_far_distance(node, q);
    if (strict ? far < radius : far <= radius) {
        std::size_t c = static_cast<std::size_t>(nd.end - nd.begin);
        if (exclude && c > 0) {
            for (auto i = nd.begin; i < nd.end; ++i)
                if (order_[i] == *exclude) {
                    --c;
                    break;
                }
        }
        return c;
    }
    if (nd.left < 0) {
        std::size_t c = 0;
        for (auto i = nd.begin; i < nd.end; ++i) {
            const auto idx = order_[i];
            if (exclude && *exclude == idx) continue;
            const double dist = max_norm_distance(point(idx), q);
            if (strict ? dist < radius : dist <= radius) ++c;
        }
        return c;
    }
    return count_visit(nd.left, q, radius, strict, exclude) + count_visit(nd.right, q, radius, strict, exclude);
}

std::size_t KdTree::count_within(std::span<const double> query, double radius, bool strict,
                                 std::optional<Eigen::Index> exclude) const {
    if (static_cast<Eigen::Index>(query.size()) != dim()) throw DomainError("KdTree::count_within: dimension mismatch");
    return count_visit(0, query, radius, strict, exclude);
}

std::vector<Neighbor> brute_force_knn(const PointMatrix& points, std::span<const double> query, int k,
                                      std::optional<Eigen::Index> exclude) {
    const auto available = points.rows() - (exclude ? 1 : 0);
    if (k < 1 || k > available) throw DomainError("brute_force_knn: k out of range");
    std::vector<Neighbor> all;
    all.reserve(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (exclude && *exclude == i) continue;
        all.push_back({i, max_norm_distance({points.data() + i * points.cols(), static_cast<std::size_t>(points.cols())},
                                            query)});
    }
    std::partial_sort(all.begin(), all.begin() + k, all.end());
    all.resize(static_cast<std::size_t>(k));
    return all;
}

std::vector<Neighbor> knn_search(const PointMatrix& points, std::span<const double> query, int k) {
    if (points.rows() <= 256) return brute_force_knn(points, query, k);
    return KdTree(points).knn(query, k);
}

}  // namespace ismi
