#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eagleeye/binomial.hpp"
#include "eagleeye/clustering.hpp"
#include "eagleeye/neighbors.hpp"
#include "eagleeye/threshold.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

// {i : upsilon_i >= threshold}, by point id.
IdSet flag(std::span<const ScoreRecord> scores, double threshold);

struct IdeStats {
    std::size_t iterations = 0;
    std::size_t rescored = 0;            // point rescorings after the initial pass
    std::size_t overflow_requeries = 0;  // rescorings that outran the cached lists

    bool operator==(const IdeStats&) const = default;
};

struct IdeOutcome {
    PartitionResult partition;  // flagged is left empty here
    IdeStats stats;
};

// Neighbor-list length cached for density equalization: k_max plus a margin
// that absorbs most removals before a fresh query is needed.
std::size_t ide_cache_length(std::size_t k_max, std::size_t union_size);

/// Iterative density equalization.
///
/// Repeatedly removes the highest-scoring active scanned point (ties to the
/// smaller id) together with the run of same-set points that precede the
/// first other-set point in its active neighbor list, at most k_max of them,
/// until every active scanned point scores below threshold. Scores use the
/// frozen table. Only points whose k_max-neighborhood lost a member are
/// rescored after a removal.
///
/// cache must hold the lists of every scanned point with length >= k_max.
/// Throws NonTermination if more iterations than scanned points are needed.
IdeOutcome ide_prune(const UnionIndex& index, const NeighborCache& cache, Direction direction,
                     const UpsilonTable& table, double threshold);

PartitionResult ide_prune(const Dataset& reference, const Dataset& test, Direction direction,
                          double threshold, const EagleEyeConfig& config);

// Lower q-quantile with linear interpolation between order statistics.
// values must be non-empty.
double lower_quantile(std::vector<double> values, double q);

struct RepechageCluster {
    int alpha = 0;
    IdSet flagged;
    IdSet pruned;
    IdSet members;
    double threshold = 0.0;
};

struct RepechageOutcome {
    std::vector<RepechageCluster> clusters;  // ascending alpha
    std::vector<DroppedCluster> dropped;
    std::size_t noise_count = 0;
};

// labels is aligned with flagged; upsilon is indexed by scanned point id.
RepechageOutcome repechage(const IdSet& flagged, std::span<const int> labels,
                           const IdSet& pruned, std::span<const double> upsilon, double q);

// Score of every point of the non-scanned set, computed as if it belonged
// to the scanned set: neighbors from the union without the point itself,
// the fixed success probability of the scan, self excluded.
std::vector<double> injected_scores(const UnionIndex& index, const NeighborCache& cache,
                                    Direction direction, const UpsilonTable& table);

// Points of the non-scanned set whose injected score reaches threshold.
IdSet inject_background(const Dataset& reference, const Dataset& test, double threshold,
                        const EagleEyeConfig& config,
                        Direction direction = Direction::TestOverdensity);

/// Assigns each injected point to the cluster of its nearest flagged point
/// (ties to the smaller flagged id) and keeps it when its injected score
/// reaches that cluster's repêchage threshold. Injected points whose
/// nearest flagged point is noise or in a dropped cluster are not assigned.
std::map<int, IdSet> assign_injected(const IdSet& injected, const Dataset& injected_points,
                                     std::span<const double> injected_upsilon,
                                     const IdSet& flagged, const Dataset& flagged_points,
                                     std::span<const int> labels,
                                     const std::map<int, double>& thresholds);

struct DirectionRun {
    Direction direction = Direction::TestOverdensity;
    NullModel null_model;
    std::vector<ScoreRecord> scores;  // one per scanned point, by id
    PartitionResult partition;
    std::vector<int> flagged_labels;  // aligned with partition.flagged
    std::vector<double> injected_upsilon;  // per non-scanned point; empty without injection
    IdSet injected;                        // injected candidates before assignment
    AnomalyReport report;
    IdeStats ide;
    std::size_t pruned_unflagged = 0;  // pruned points whose own score is below threshold
};

struct PipelineRun {
    EagleEyeConfig config;
    std::size_t n_reference = 0;
    std::size_t n_test = 0;
    std::size_t dim = 0;
    double p_hat = 0.0;
    std::vector<std::string> warnings;
    DirectionRun test_scan;
    DirectionRun reference_scan;

    const DirectionRun& scan(Direction d) const {
        return d == Direction::TestOverdensity ? test_scan : reference_scan;
    }
};

// Both directions end to end. Throws on validation failure or any stage
// error; nothing partial is returned.
PipelineRun run(const Dataset& reference, const Dataset& test, const EagleEyeConfig& config);

// Clusterer-injected variant for swapping the clustering stage.
PipelineRun run(const Dataset& reference, const Dataset& test, const EagleEyeConfig& config,
                const Clusterer& clusterer);

}  // namespace eagleeye
