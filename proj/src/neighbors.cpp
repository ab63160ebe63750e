#include "eagleeye/neighbors.hpp"

#include <sstream>

#include "eagleeye/parallel.hpp"

namespace eagleeye {

namespace {

// Brute force beats the tree once dimensions get high or sets tiny.
std::size_t leaf_size_for(std::size_t n, std::size_t dim) {
    if (n < 64 || dim > 24) return std::max<std::size_t>(n, 1);
    return 16;
}

}  // namespace

UnionIndex::UnionIndex(const Dataset& reference, const Dataset& test)
    : dim_(reference.dim()), n_reference_(reference.size()) {
    if (reference.dim() != test.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "reference and test dimensions differ");
    }
    coords_.reserve(reference.coords().size() + test.coords().size());
    coords_.insert(coords_.end(), reference.coords().begin(), reference.coords().end());
    coords_.insert(coords_.end(), test.coords().begin(), test.coords().end());
    labels_.assign(reference.size(), kReferenceLabel);
    labels_.resize(reference.size() + test.size(), kTestLabel);
    tree_ = KdTree(coords_, dim_, leaf_size_for(labels_.size(), dim_));
}

std::vector<std::uint8_t> membership_sequence(const UnionIndex& index,
                                              std::span<const double> query,
                                              std::optional<PointId> exclude_id,
                                              std::size_t k_max, std::uint8_t query_label) {
    const std::size_t available = index.size() - (exclude_id ? 1 : 0);
    if (k_max > available) {
        std::ostringstream msg;
        msg << "k_max = " << k_max << " exceeds the " << available << " available neighbors";
        throw Error(ErrorCode::KMaxTooLarge, msg.str());
    }
    const auto neighbors = index.knn(query, k_max, exclude_id);
    std::vector<std::uint8_t> seq(neighbors.size());
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
        seq[k] = index.label(neighbors[k].id) == query_label ? 1 : 0;
    }
    return seq;
}

NeighborCache::NeighborCache(const UnionIndex& index, std::size_t length, PointId first,
                             std::size_t count)
    : length_(std::min(length, index.size() - 1)), first_(first), count_(count) {
    ids_.resize(count_ * length_);
    parallel_for(count_, [&](std::size_t i) {
        const auto uid = static_cast<PointId>(first_ + i);
        const auto neighbors = index.knn(uid, length_);
        PointId* dst = &ids_[i * length_];
        for (std::size_t k = 0; k < length_; ++k) dst[k] = neighbors[k].id;
    });
}

}  // namespace eagleeye
