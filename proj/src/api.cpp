#include "eagleeye/api.hpp"

#include "eagleeye/neighbors.hpp"
#include "eagleeye/pipeline.hpp"
#include "eagleeye/scoring.hpp"

namespace eagleeye::api {

namespace {

Dataset to_dataset(MatrixView m, Role role) {
    if (m.cols == 0) throw Error(ErrorCode::EmptyDataset, "array has no columns");
    return Dataset::from_row_major(m.values, m.rows, m.cols, role);
}

}  // namespace

ReportDocument detect(MatrixView reference, MatrixView test, const EagleEyeConfig& config) {
    const Dataset ref = to_dataset(reference, Role::Reference);
    const Dataset tst = to_dataset(test, Role::Test);
    return make_report(run(ref, tst, config));
}

NullModel threshold(std::size_t k_max, double p_success, double p_ext, ThresholdMethod method,
                    std::uint64_t seed, std::size_t n_null_sequences) {
    return null_threshold(k_max, p_success, p_ext, method, seed, n_null_sequences);
}

std::vector<ScoreRecord> score_all(MatrixView reference, MatrixView test, Direction direction,
                                   const EagleEyeConfig& config) {
    const Dataset ref = to_dataset(reference, Role::Reference);
    const Dataset tst = to_dataset(test, Role::Test);
    validate(ref, tst, config).throw_if_failed();
    const UnionIndex index(ref, tst);
    return eagleeye::score_all(index, direction, config);
}

ErrorInfo describe(ErrorCode code) { return {to_string(code), exit_code_for(code)}; }

}  // namespace eagleeye::api
