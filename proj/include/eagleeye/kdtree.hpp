#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eagleeye/types.hpp"

namespace eagleeye {

// Squared Euclidean distance. Every distance comparison in the library goes
// through this function so that recomputed distances are bit-identical to
// the ones the index ranked by.
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct Neighbor {
    double dist2 = 0.0;
    PointId id = 0;

    // Total order: distance first, then id.
    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.id < b.id);
    }
    friend bool operator<=(const Neighbor& a, const Neighbor& b) { return !(b < a); }
    bool operator==(const Neighbor&) const = default;
};

struct AcceptAll {
    bool operator()(PointId) const { return true; }
};

/// Exact k-nearest-neighbor index over a fixed point set.
///
/// Results are sorted by (distance, id); equal distances resolve to the
/// smaller id, so queries are reproducible with duplicated points. Setting
/// leaf_size >= n turns the tree into a single brute-force leaf.
class KdTree {
public:
    KdTree() = default;
    KdTree(std::span<const double> coords, std::size_t dim, std::size_t leaf_size = 16);

    std::size_t size() const { return ids_.size(); }
    std::size_t dim() const { return dim_; }

    // k nearest points among those for which accept(id) holds.
    template <class Accept>
    void knn(std::span<const double> query, std::size_t k, Accept&& accept,
             std::vector<Neighbor>& out) const {
        out.clear();
        if (k == 0 || nodes_.empty()) return;
        out.reserve(k + 1);
        search(0, query, k, accept, out);
        std::sort_heap(out.begin(), out.end());
    }

    std::vector<Neighbor> knn(std::span<const double> query, std::size_t k,
                              std::optional<PointId> exclude = std::nullopt) const {
        std::vector<Neighbor> out;
        if (exclude) {
            const PointId ex = *exclude;
            knn(query, k, [ex](PointId id) { return id != ex; }, out);
        } else {
            knn(query, k, AcceptAll{}, out);
        }
        return out;
    }

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(std::vector<PointId>& order, std::span<const double> coords,
                       std::uint32_t begin, std::uint32_t end);

    double box_distance(std::size_t node, std::span<const double> q) const {
        const double* lo = &bounds_[node * 2 * dim_];
        const double* hi = lo + dim_;
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            double d = 0.0;
            if (q[i] < lo[i]) d = lo[i] - q[i];
            else if (q[i] > hi[i]) d = q[i] - hi[i];
            s += d * d;
        }
        return s;
    }

    template <class Accept>
    void search(std::size_t node_index, std::span<const double> q, std::size_t k,
                Accept& accept, std::vector<Neighbor>& heap) const {
        const Node& node = nodes_[node_index];
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const PointId id = ids_[i];
                if (!accept(id)) continue;
                const Neighbor cand{squared_distance(q, {&data_[i * dim_], dim_}), id};
                if (heap.size() < k) {
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
        const double dl = box_distance(static_cast<std::size_t>(node.left), q);
        const double dr = box_distance(static_cast<std::size_t>(node.right), q);
        const bool left_first = dl <= dr;
        const std::size_t first = static_cast<std::size_t>(left_first ? node.left : node.right);
        const std::size_t second = static_cast<std::size_t>(left_first ? node.right : node.left);
        const double d_first = left_first ? dl : dr;
        const double d_second = left_first ? dr : dl;
        // Ties at the worst distance can still be displaced by a smaller id,
        // hence <= rather than <.
        if (heap.size() < k || d_first <= heap.front().dist2) search(first, q, k, accept, heap);
        if (heap.size() < k || d_second <= heap.front().dist2) search(second, q, k, accept, heap);
    }

    std::size_t dim_ = 0;
    std::size_t leaf_size_ = 16;
    std::vector<Node> nodes_;
    std::vector<double> bounds_;  // per node: lo[dim], hi[dim]
    std::vector<double> data_;    // coordinates in tree order
    std::vector<PointId> ids_;    // original id of each tree slot
};

}  // namespace eagleeye
