#include "eagleeye/types.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace eagleeye {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::KMaxTooLarge: return "KMaxTooLarge";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::UnreachableExtremeness: return "UnreachableExtremeness";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::ZeroAnomaly: return "ZeroAnomaly";
        case ErrorCode::ZeroBackground: return "ZeroBackground";
        case ErrorCode::SpecError: return "SpecError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonFiniteInput:
        case ErrorCode::KMaxTooLarge:
        case ErrorCode::EmptyDataset:
        case ErrorCode::InvalidConfig:
        case ErrorCode::DomainError:
        case ErrorCode::SpecError:
        case ErrorCode::ParseError:
        case ErrorCode::IoError:
            return 2;
        case ErrorCode::UnreachableExtremeness:
            return 3;
        default:
            return 4;
    }
}

std::string_view to_string(Role role) {
    return role == Role::Test ? "test" : "reference";
}

std::string_view to_string(Direction direction) {
    return direction == Direction::TestOverdensity ? "test_overdensity"
                                                   : "reference_overdensity";
}

std::string_view to_string(ThresholdMethod method) {
    return method == ThresholdMethod::ExactDP ? "exact" : "mc";
}

Dataset::Dataset(std::size_t dim, std::vector<double> coords, Role role)
    : dim_(dim), coords_(std::move(coords)), role_(role) {
    if (dim_ == 0) {
        throw Error(ErrorCode::DimensionMismatch, "dataset dimension must be at least 1");
    }
    if (coords_.size() % dim_ != 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    "coordinate count is not a multiple of the dimension");
    }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, Role role) {
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyDataset, "cannot infer dimension of an empty row list");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            std::ostringstream msg;
            msg << "row " << i << " has " << rows[i].size() << " columns, expected " << dim;
            throw Error(ErrorCode::DimensionMismatch, msg.str());
        }
        coords.insert(coords.end(), rows[i].begin(), rows[i].end());
    }
    return Dataset(dim, std::move(coords), role);
}

Dataset Dataset::from_row_major(std::span<const double> values, std::size_t n,
                                std::size_t dim, Role role) {
    if (values.size() != n * dim) {
        throw Error(ErrorCode::DimensionMismatch, "buffer size does not equal rows * columns");
    }
    return Dataset(dim, std::vector<double>(values.begin(), values.end()), role);
}

void ValidationOutcome::throw_if_failed() const {
    if (!violations.empty()) {
        throw Error(violations.front().code, violations.front().message);
    }
}

ValidationOutcome validate(const Dataset& reference, const Dataset& test,
                           const EagleEyeConfig& config) {
    ValidationOutcome out;
    auto fail = [&](ErrorCode code, std::string msg) {
        out.violations.push_back({code, std::move(msg)});
    };

    if (reference.empty()) fail(ErrorCode::EmptyDataset, "reference dataset is empty");
    if (test.empty()) fail(ErrorCode::EmptyDataset, "test dataset is empty");
    if (!reference.empty() && !test.empty() && reference.dim() != test.dim()) {
        std::ostringstream msg;
        msg << "reference has dimension " << reference.dim() << ", test has dimension "
            << test.dim();
        fail(ErrorCode::DimensionMismatch, msg.str());
    }

    auto check_finite = [&](const Dataset& ds) {
        const auto& c = ds.coords();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!std::isfinite(c[i])) {
                std::ostringstream msg;
                msg << to_string(ds.role()) << " point " << i / ds.dim() << " has a non-finite coordinate";
                fail(ErrorCode::NonFiniteInput, msg.str());
                return;
            }
        }
    };
    check_finite(reference);
    check_finite(test);

    if (config.k_max == 0) fail(ErrorCode::InvalidConfig, "k_max must be positive");
    if (!(config.p_ext > 0.0 && config.p_ext < 1.0)) {
        fail(ErrorCode::InvalidConfig, "p_ext must lie in (0, 1)");
    }
    if (!(config.q >= 0.0 && config.q <= 1.0)) {
        fail(ErrorCode::InvalidConfig, "q must lie in [0, 1]");
    }
    if (config.threshold_method == ThresholdMethod::MonteCarlo && config.n_null_sequences == 0) {
        fail(ErrorCode::InvalidConfig, "n_null_sequences must be positive");
    }
    if (config.clustering.k_density < 2) fail(ErrorCode::InvalidConfig, "k_density must be >= 2");
    if (config.clustering.min_cluster_size < 1) {
        fail(ErrorCode::InvalidConfig, "min_cluster_size must be >= 1");
    }
    if (!(config.clustering.merge_ratio > 0.0 && config.clustering.merge_ratio <= 1.0)) {
        fail(ErrorCode::InvalidConfig, "merge_ratio must lie in (0, 1]");
    }

    const std::size_t total = reference.size() + test.size();
    if (config.k_max >= total) {
        std::ostringstream msg;
        msg << "k_max = " << config.k_max << " must be smaller than the union size " << total;
        fail(ErrorCode::KMaxTooLarge, msg.str());
    } else if (static_cast<double>(config.k_max) > 0.05 * static_cast<double>(total)) {
        std::ostringstream msg;
        msg << "k_max = " << config.k_max << " exceeds 5% of the union size " << total
            << "; the binomial approximation to the neighbor process degrades";
        out.warnings.push_back(msg.str());
    }

    if (total > 0) {
        out.p_hat = static_cast<double>(test.size()) / static_cast<double>(total);
    }
    return out;
}

std::uint32_t ScoreRecord::b_count(std::size_t k) const {
    std::uint32_t count = 0;
    const std::size_t full = k / 64;
    for (std::size_t w = 0; w < full; ++w) count += std::popcount(membership_bits[w]);
    const std::size_t rem = k % 64;
    if (rem != 0) {
        count += std::popcount(membership_bits[full] & ((std::uint64_t{1} << rem) - 1));
    }
    return count;
}

std::vector<std::uint32_t> ScoreRecord::b_counts() const {
    std::vector<std::uint32_t> out(k_max);
    std::uint32_t running = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        running += member(k) ? 1 : 0;
        out[k - 1] = running;
    }
    return out;
}

}  // namespace eagleeye
