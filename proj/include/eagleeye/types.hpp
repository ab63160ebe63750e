#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eagleeye/error.hpp"

namespace eagleeye {

using PointId = std::uint32_t;

// Sorted, duplicate-free list of point ids.
using IdSet = std::vector<PointId>;

enum class Role { Reference, Test };

// Which set is scanned for an overdensity. TestOverdensity scans the test
// set with success probability p_hat; ReferenceOverdensity scans the
// reference set with 1 - p_hat.
enum class Direction { TestOverdensity, ReferenceOverdensity };

enum class Metric { Euclidean };

enum class ThresholdMethod { ExactDP, MonteCarlo };

std::string_view to_string(Role role);
std::string_view to_string(Direction direction);
std::string_view to_string(ThresholdMethod method);

inline Role scanned_role(Direction d) {
    return d == Direction::TestOverdensity ? Role::Test : Role::Reference;
}
inline Role other_role(Role r) {
    return r == Role::Test ? Role::Reference : Role::Test;
}

/// Ordered collection of d-dimensional points stored row-major.
///
/// Point ids are the row indices 0..n-1. Coordinates are used as given;
/// any feature scaling is the caller's job. Finiteness is checked by
/// validate(), not here, so that invalid input can be reported rather
/// than thrown mid-construction.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t dim, std::vector<double> coords, Role role);

    static Dataset from_rows(const std::vector<std::vector<double>>& rows, Role role);

    // Copies a row-major block of n * dim values.
    static Dataset from_row_major(std::span<const double> values, std::size_t n,
                                  std::size_t dim, Role role);

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return coords_.empty(); }
    Role role() const { return role_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    const std::vector<double>& coords() const { return coords_; }

    bool operator==(const Dataset&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    Role role_ = Role::Reference;
};

struct ClusteringParams {
    std::size_t k_density = 20;
    double merge_ratio = 0.6;
    std::size_t min_cluster_size = 5;

    bool operator==(const ClusteringParams&) const = default;
};

struct EagleEyeConfig {
    std::size_t k_max = 500;
    double p_ext = 1e-5;
    double q = 0.01;
    Metric metric = Metric::Euclidean;
    std::uint64_t seed = 0;
    std::size_t n_null_sequences = 1'000'000;
    ThresholdMethod threshold_method = ThresholdMethod::ExactDP;
    bool run_injection = true;
    ClusteringParams clustering;

    bool operator==(const EagleEyeConfig&) const = default;
};

struct Violation {
    ErrorCode code;
    std::string message;
};

struct ValidationOutcome {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    // n_test / (n_reference + n_test); meaningful only when ok().
    double p_hat = 0.0;

    bool ok() const { return violations.empty(); }

    // Throws the first violation as an Error.
    void throw_if_failed() const;
};

ValidationOutcome validate(const Dataset& reference, const Dataset& test,
                           const EagleEyeConfig& config);

/// Anomaly score of one scanned point.
///
/// The neighbor-membership sequence is stored packed, one bit per rank;
/// B(i,K) is recovered by prefix popcounts.
struct ScoreRecord {
    PointId point_id = 0;
    double upsilon = 0.0;
    std::uint32_t k_star = 1;
    std::uint32_t k_max = 0;
    std::vector<std::uint64_t> membership_bits;

    bool member(std::size_t k) const {  // 1-based rank
        const std::size_t i = k - 1;
        return (membership_bits[i / 64] >> (i % 64)) & 1u;
    }
    std::uint32_t b_count(std::size_t k) const;
    std::vector<std::uint32_t> b_counts() const;

    bool operator==(const ScoreRecord&) const = default;
};

struct PartitionResult {
    Direction direction = Direction::TestOverdensity;
    double threshold = 0.0;
    IdSet flagged;
    IdSet pruned;
    IdSet equalized;

    bool operator==(const PartitionResult&) const = default;
};

// Quality flags attached to estimates.
inline constexpr std::string_view kFlagNegativePurity = "negative_purity";
inline constexpr std::string_view kFlagZeroBackground = "zero_background";
inline constexpr std::string_view kFlagNoReferenceBackground = "no_reference_background";

struct Estimates {
    std::optional<double> purity;
    std::optional<double> s_over_sqrt_b;
    std::vector<std::string> flags;

    bool operator==(const Estimates&) const = default;
};

struct ClusterEntry {
    int alpha = 0;
    IdSet flagged;   // flagged points carrying this label
    IdSet pruned;    // pruned ∩ flagged
    IdSet members;   // repêchage set
    double repechage_threshold = 0.0;
    IdSet injected;  // ids of the other set, injected and retained
    Estimates estimates;

    bool operator==(const ClusterEntry&) const = default;
};

struct DroppedCluster {
    int alpha = 0;
    std::size_t flagged_count = 0;

    bool operator==(const DroppedCluster&) const = default;
};

struct AnomalyReport {
    Direction direction = Direction::TestOverdensity;
    std::vector<ClusterEntry> clusters;
    // Clusters with no pruned representative; the repêchage quantile is
    // undefined for them.
    std::vector<DroppedCluster> dropped;
    std::size_t noise_count = 0;
    IdSet total_members;
    IdSet total_injected;
    Estimates totals;

    bool operator==(const AnomalyReport&) const = default;
};

}  // namespace eagleeye
