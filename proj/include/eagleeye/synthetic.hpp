#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eagleeye/types.hpp"

namespace eagleeye {

inline constexpr int kBackgroundTruth = -1;

struct UniformBox {
    std::vector<double> low;   // per coordinate
    std::vector<double> high;
};

struct StandardGaussian {};

struct BackgroundSpec {
    std::variant<UniformBox, StandardGaussian> shape;
    std::size_t count = 0;
};

struct GaussianAnomaly {
    std::vector<double> center;
    std::vector<double> sigma;  // per coordinate standard deviation
    std::size_t count = 0;
};

// First three coordinates uniform inside a solid torus around the z axis,
// the rest N(center, pad_sigma).
struct TorusAnomaly {
    std::vector<double> center;
    double major_radius = 0.0;
    double minor_radius = 0.0;
    double pad_sigma = 0.0;
    std::size_t count = 0;
};

// Relocates each background point inside the sphere, with the given
// probability, to a fresh background draw. Point count is unchanged.
struct SphericalDeletion {
    std::vector<double> center;
    double radius = 0.0;
    double removal_probability = 0.0;
};

using AnomalySpec = std::variant<GaussianAnomaly, TorusAnomaly, SphericalDeletion>;

struct SampleSpec {
    BackgroundSpec background;
    std::vector<AnomalySpec> anomalies;
};

struct ScenarioSpec {
    std::string name;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    SampleSpec reference;
    SampleSpec test;
};

struct GeneratedSample {
    Dataset data;
    // kBackgroundTruth, or the index of the generating entry in anomalies.
    std::vector<int> truth;
};

struct GeneratedScenario {
    GeneratedSample reference;
    GeneratedSample test;
};

// Throws SpecError on any inconsistency (dimension mismatch, torus below
// three dimensions, non-positive radius or scale, probability outside [0,1]).
void check_scenario(const ScenarioSpec& spec);

// Every component draws from its own counter-based stream keyed by the
// sample, the component slot and the seed, so adding or removing one
// component leaves the draws of the others untouched.
GeneratedScenario generate(const ScenarioSpec& spec);

// YAML scenario documents; see presets/ for the format. Throws SpecError.
ScenarioSpec parse_scenario(std::string_view text);
ScenarioSpec load_scenario(const std::string& path);

struct ClusterTruth {
    int alpha = 0;
    int anomaly = kBackgroundTruth;  // plurality truth label among members
    std::size_t flagged = 0;
    std::size_t flagged_signal = 0;
    std::size_t pruned = 0;
    std::size_t pruned_signal = 0;
    std::size_t members = 0;
    std::size_t members_signal = 0;
    std::optional<double> true_purity;
    std::optional<double> true_s_over_sqrt_b;
};

struct AnomalyRecovery {
    int anomaly = 0;
    std::size_t planted = 0;
    std::size_t recovered = 0;  // planted points in clusters matched to it
    double recall = 0.0;
    std::vector<int> clusters;
};

struct TruthEvaluation {
    std::vector<ClusterTruth> clusters;
    std::vector<AnomalyRecovery> anomalies;  // every anomaly index present in truth
    std::optional<double> total_true_purity;
    std::optional<double> total_true_s_over_sqrt_b;
};

// truth holds the labels of the set scanned by the report's direction.
TruthEvaluation evaluate_against_truth(const AnomalyReport& report, std::span<const int> truth);

}  // namespace eagleeye
