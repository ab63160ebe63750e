#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "eagleeye/report.hpp"
#include "eagleeye/threshold.hpp"
#include "eagleeye/types.hpp"

// Flat entry points over row-major buffers, the surface a foreign-language
// binding wraps. No logic lives here beyond marshaling.
namespace eagleeye::api {

struct MatrixView {
    std::span<const double> values;  // rows * cols, row-major
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// Full pipeline; the same document the CLI writes for the same data.
ReportDocument detect(MatrixView reference, MatrixView test, const EagleEyeConfig& config);

NullModel threshold(std::size_t k_max, double p_success, double p_ext,
                    ThresholdMethod method = ThresholdMethod::ExactDP, std::uint64_t seed = 0,
                    std::size_t n_null_sequences = 1'000'000);

// Scores of the scanned set of one direction against the full union.
std::vector<ScoreRecord> score_all(MatrixView reference, MatrixView test, Direction direction,
                                   const EagleEyeConfig& config);

struct ErrorInfo {
    std::string_view name;
    int exit_code;
};

ErrorInfo describe(ErrorCode code);

}  // namespace eagleeye::api
