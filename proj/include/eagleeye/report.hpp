#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eagleeye/pipeline.hpp"
#include "eagleeye/threshold.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

inline constexpr std::string_view kReportFormat = "eagleeye-report";
inline constexpr std::string_view kReportVersion = "1.0";

struct DirectionSection {
    Direction direction = Direction::TestOverdensity;
    NullModel null_model;
    std::size_t scanned_count = 0;
    std::size_t flagged_count = 0;
    std::size_t pruned_count = 0;
    std::size_t equalized_count = 0;
    std::size_t pruned_unflagged = 0;
    std::size_t injected_candidates = 0;
    IdeStats ide;
    AnomalyReport report;

    bool operator==(const DirectionSection&) const = default;
};

/// Serializable summary of a pipeline run. Holds only values that are a
/// function of the inputs, so equal runs serialize to equal bytes.
struct ReportDocument {
    std::string format = std::string(kReportFormat);
    std::string version = std::string(kReportVersion);
    EagleEyeConfig config;
    std::size_t n_reference = 0;
    std::size_t n_test = 0;
    std::size_t dim = 0;
    double p_hat = 0.0;
    std::vector<std::string> warnings;
    DirectionSection test_scan;
    DirectionSection reference_scan;

    bool operator==(const ReportDocument&) const = default;
};

ReportDocument make_report(const PipelineRun& run);

// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string serialize(const ReportDocument& doc);

// Throws ParseError for malformed documents or a format/version mismatch.
ReportDocument parse_report(std::string_view text);

}  // namespace eagleeye
