#include "eagleeye/kdtree.hpp"

#include <limits>
#include <numeric>

namespace eagleeye {

KdTree::KdTree(std::span<const double> coords, std::size_t dim, std::size_t leaf_size)
    : dim_(dim), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "kd-tree dimension must be >= 1");
    const std::size_t n = coords.size() / dim_;
    if (n == 0) return;
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidConfig, "too many points for a 32-bit index");
    }
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    nodes_.reserve(2 * (n / leaf_size_ + 1));
    build(order, coords, 0, static_cast<std::uint32_t>(n));

    data_.resize(n * dim_);
    for (std::size_t slot = 0; slot < n; ++slot) {
        std::copy_n(&coords[order[slot] * dim_], dim_, &data_[slot * dim_]);
    }
    ids_ = std::move(order);
}

std::int32_t KdTree::build(std::vector<PointId>& order, std::span<const double> coords,
                           std::uint32_t begin, std::uint32_t end) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1});
    bounds_.resize(nodes_.size() * 2 * dim_);

    double* lo = &bounds_[static_cast<std::size_t>(index) * 2 * dim_];
    double* hi = lo + dim_;
    std::fill(lo, lo + dim_, std::numeric_limits<double>::infinity());
    std::fill(hi, hi + dim_, -std::numeric_limits<double>::infinity());
    for (std::uint32_t i = begin; i < end; ++i) {
        const double* p = &coords[order[i] * dim_];
        for (std::size_t d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    if (end - begin <= leaf_size_) return index;

    std::size_t split = 0;
    double widest = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        if (hi[d] - lo[d] > widest) {
            widest = hi[d] - lo[d];
            split = d;
        }
    }
    if (widest <= 0.0) return index;  // all points coincide

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](PointId a, PointId b) {
                         const double ca = coords[a * dim_ + split];
                         const double cb = coords[b * dim_ + split];
                         return ca < cb || (ca == cb && a < b);
                     });
    const std::int32_t left = build(order, coords, begin, mid);
    const std::int32_t right = build(order, coords, mid, end);
    nodes_[static_cast<std::size_t>(index)].left = left;
    nodes_[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace eagleeye
