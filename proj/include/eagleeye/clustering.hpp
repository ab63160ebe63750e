#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eagleeye/types.hpp"

namespace eagleeye {

inline constexpr int kNoiseLabel = -1;

/// Partition of a point subset into clusters 0..count-1 and noise.
struct ClusterLabels {
    std::vector<int> labels;  // aligned with the input rows
    int count = 0;

    bool operator==(const ClusterLabels&) const = default;
};

// Interface for the clustering step applied to flagged points.
class Clusterer {
public:
    virtual ~Clusterer() = default;
    // coords is row-major n x dim; n >= 1.
    virtual ClusterLabels cluster(std::span<const double> coords, std::size_t dim) const = 0;
};

/// Simplified density-peaks clustering.
///
/// Log density is -d * ln(r_k), with r_k the distance to the k-th neighbor.
/// Each point links to the nearest of its k neighbors with higher density;
/// points without one are peaks. Two clusters merge when their saddle
/// density (the best min(rho_i, rho_j) over neighbor pairs straddling them)
/// exceeds merge_ratio times the smaller peak density. Clusters below
/// min_cluster_size become noise. Surviving clusters are numbered by
/// decreasing peak density.
class DensityPeaksClusterer : public Clusterer {
public:
    explicit DensityPeaksClusterer(ClusteringParams params = {});

    ClusterLabels cluster(std::span<const double> coords, std::size_t dim) const override;

    const ClusteringParams& params() const { return params_; }

private:
    ClusteringParams params_;
};

// Throws InvalidConfig for out-of-range parameters.
void check_clustering_params(const ClusteringParams& params);

// Clusters a point set with DensityPeaksClusterer. Throws EmptyInput for an
// empty set.
ClusterLabels cluster_flagged(const Dataset& points, const ClusteringParams& params);

}  // namespace eagleeye
