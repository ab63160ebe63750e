#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eagleeye/kdtree.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

inline constexpr std::uint8_t kReferenceLabel = 0;
inline constexpr std::uint8_t kTestLabel = 1;

inline std::uint8_t label_of(Role role) {
    return role == Role::Test ? kTestLabel : kReferenceLabel;
}

/// Exact neighbor index over the union of reference and test points.
///
/// Union ids place the reference block first: reference point i has union
/// id i, test point j has union id n_ref + j. Distance ties therefore favor
/// reference points, then lower original ids.
class UnionIndex {
public:
    UnionIndex(const Dataset& reference, const Dataset& test);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t reference_count() const { return n_reference_; }
    std::size_t test_count() const { return labels_.size() - n_reference_; }
    std::size_t count(Role role) const {
        return role == Role::Test ? test_count() : reference_count();
    }

    // n_test / (n_reference + n_test)
    double p_hat() const {
        return static_cast<double>(test_count()) / static_cast<double>(size());
    }

    std::uint8_t label(PointId uid) const { return labels_[uid]; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }

    PointId to_union(Role role, PointId id) const {
        return role == Role::Test ? static_cast<PointId>(n_reference_ + id) : id;
    }
    std::pair<Role, PointId> origin(PointId uid) const {
        if (uid < n_reference_) return {Role::Reference, uid};
        return {Role::Test, static_cast<PointId>(uid - n_reference_)};
    }
    PointId first_union_id(Role role) const {
        return role == Role::Test ? static_cast<PointId>(n_reference_) : PointId{0};
    }

    std::span<const double> point(PointId uid) const { return {&coords_[uid * dim_], dim_}; }

    // k nearest union points of uid, excluding uid itself.
    std::vector<Neighbor> knn(PointId uid, std::size_t k) const {
        return tree_.knn(point(uid), k, uid);
    }
    std::vector<Neighbor> knn(std::span<const double> query, std::size_t k,
                              std::optional<PointId> exclude = std::nullopt) const {
        return tree_.knn(query, k, exclude);
    }
    template <class Accept>
    void knn(std::span<const double> query, std::size_t k, Accept&& accept,
             std::vector<Neighbor>& out) const {
        tree_.knn(query, k, std::forward<Accept>(accept), out);
    }

private:
    std::size_t dim_ = 0;
    std::size_t n_reference_ = 0;
    std::vector<double> coords_;
    std::vector<std::uint8_t> labels_;
    KdTree tree_;
};

/// Binary membership sequence of a query point: entry k-1 is 1 when the
/// k-th nearest union point carries query_label.
std::vector<std::uint8_t> membership_sequence(const UnionIndex& index,
                                              std::span<const double> query,
                                              std::optional<PointId> exclude_id,
                                              std::size_t k_max, std::uint8_t query_label);

/// Precomputed neighbor lists (self excluded) of fixed length for a
/// contiguous range of union ids.
class NeighborCache {
public:
    NeighborCache() = default;
    NeighborCache(const UnionIndex& index, std::size_t length, PointId first, std::size_t count);
    // All union points.
    NeighborCache(const UnionIndex& index, std::size_t length)
        : NeighborCache(index, length, 0, index.size()) {}

    std::size_t length() const { return length_; }
    bool contains(PointId uid) const { return uid >= first_ && uid - first_ < count_; }
    std::span<const PointId> list(PointId uid) const {
        return {&ids_[(uid - first_) * length_], length_};
    }

private:
    std::size_t length_ = 0;
    PointId first_ = 0;
    std::size_t count_ = 0;
    std::vector<PointId> ids_;
};

}  // namespace eagleeye
