#include "eagleeye/clustering.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "eagleeye/kdtree.hpp"
#include "eagleeye/parallel.hpp"

namespace eagleeye {

void check_clustering_params(const ClusteringParams& params) {
    if (params.k_density < 2) throw Error(ErrorCode::InvalidConfig, "k_density must be >= 2");
    if (params.min_cluster_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "min_cluster_size must be >= 1");
    }
    if (!(params.merge_ratio > 0.0 && params.merge_ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "merge_ratio must lie in (0, 1]");
    }
}

DensityPeaksClusterer::DensityPeaksClusterer(ClusteringParams params) : params_(params) {
    check_clustering_params(params_);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
};

}  // namespace

ClusterLabels DensityPeaksClusterer::cluster(std::span<const double> coords,
                                             std::size_t dim) const {
    if (dim == 0 || coords.empty()) throw Error(ErrorCode::EmptyInput, "nothing to cluster");
    const std::size_t n = coords.size() / dim;
    const std::size_t k = std::min(params_.k_density, n - 1);

    // Neighbor lists and log densities.
    std::vector<std::vector<Neighbor>> knn(n);
    std::vector<double> log_rho(n, 0.0);
    if (k > 0) {
        const KdTree tree(coords, dim, n < 64 ? n : 16);
        parallel_for(n, [&](std::size_t i) {
            const auto id = static_cast<PointId>(i);
            knn[i] = tree.knn(coords.subspan(i * dim, dim), k, id);
            const double r2 = std::max(knn[i].back().dist2, DBL_MIN);
            log_rho[i] = -0.5 * static_cast<double>(dim) * std::log(r2);
        });
    }
    // Strict total order on density; equal densities rank the smaller id higher.
    const auto denser = [&](std::size_t a, std::size_t b) {
        return log_rho[a] > log_rho[b] || (log_rho[a] == log_rho[b] && a < b);
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), denser);

    std::vector<int> label(n, -1);
    std::vector<std::size_t> peak_of;  // cluster -> peak point
    for (const std::size_t i : order) {
        std::size_t parent = i;
        for (const auto& nb : knn[i]) {
            if (denser(nb.id, i)) {
                parent = nb.id;
                break;
            }
        }
        if (parent == i) {
            label[i] = static_cast<int>(peak_of.size());
            peak_of.push_back(i);
        } else {
            label[i] = label[parent];
        }
    }
    const int raw_count = static_cast<int>(peak_of.size());

    // Saddle density between each pair of adjacent clusters.
    std::map<std::pair<int, int>, double> saddle;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : knn[i]) {
            int a = label[i];
            int b = label[nb.id];
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            const double s = std::min(log_rho[i], log_rho[nb.id]);
            auto [it, inserted] = saddle.try_emplace({a, b}, s);
            if (!inserted) it->second = std::max(it->second, s);
        }
    }
    struct Edge {
        double saddle;
        int a, b;
    };
    std::vector<Edge> edges;
    edges.reserve(saddle.size());
    for (const auto& [key, s] : saddle) edges.push_back({s, key.first, key.second});
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        if (l.saddle != r.saddle) return l.saddle > r.saddle;
        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });

    UnionFind groups(raw_count);
    std::vector<std::size_t> group_peak = peak_of;
    const double log_ratio = std::log(params_.merge_ratio);
    for (const auto& e : edges) {
        const int ra = groups.find(e.a);
        const int rb = groups.find(e.b);
        if (ra == rb) continue;
        const std::size_t pa = group_peak[ra];
        const std::size_t pb = group_peak[rb];
        if (e.saddle > log_ratio + std::min(log_rho[pa], log_rho[pb])) {
            // Keep the root whose peak is denser.
            const bool a_wins = denser(pa, pb);
            const int root = a_wins ? ra : rb;
            const int child = a_wins ? rb : ra;
            groups.parent[child] = root;
        }
    }

    // Final numbering by decreasing peak density, dropping small clusters.
    std::vector<std::size_t> size(raw_count, 0);
    for (std::size_t i = 0; i < n; ++i) ++size[groups.find(label[i])];
    std::vector<int> roots;
    for (int c = 0; c < raw_count; ++c) {
        if (groups.find(c) == c && size[c] >= params_.min_cluster_size) roots.push_back(c);
    }
    std::sort(roots.begin(), roots.end(),
              [&](int l, int r) { return denser(group_peak[l], group_peak[r]); });
    std::vector<int> final_id(raw_count, kNoiseLabel);
    for (std::size_t j = 0; j < roots.size(); ++j) final_id[roots[j]] = static_cast<int>(j);

    ClusterLabels out;
    out.count = static_cast<int>(roots.size());
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = final_id[groups.find(label[i])];
    return out;
}

ClusterLabels cluster_flagged(const Dataset& points, const ClusteringParams& params) {
    if (points.empty()) throw Error(ErrorCode::EmptyInput, "no flagged points to cluster");
    return DensityPeaksClusterer(params).cluster(points.coords(), points.dim());
}

}  // namespace eagleeye
