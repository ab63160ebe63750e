#pragma once

#include <span>
#include <string>
#include <string_view>

#include "eagleeye/pipeline.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

/// Parses delimited numeric text, one point per row.
///
/// The delimiter is a comma when the first data row contains one, otherwise
/// runs of blanks or tabs. A first row holding any non-numeric field is
/// taken as a header. Blank lines are ignored. Throws ParseError naming the
/// line for malformed fields, NaN or infinity, and ragged rows;
/// NonFiniteInput for values outside the double range; EmptyDataset when no
/// data rows remain.
Dataset parse_dataset(std::string_view text, Role role, std::string_view source = "<input>");

// Reads a file with parse_dataset(); IoError when it cannot be opened.
Dataset read_dataset(const std::string& path, Role role = Role::Reference);

// Comma-separated rows with shortest round-trip formatting, no header.
std::string format_dataset(const Dataset& data);
void write_dataset(const std::string& path, const Dataset& data);

// Ground-truth table with columns role, id, truth.
std::string format_truth(std::span<const int> reference, std::span<const int> test);

/// Per-point table for plotting, one row per point of either set.
///
/// Columns: role, id, upsilon, k_star, flagged, pruned, equalized, cluster,
/// repechage, injected_upsilon, injected. The first columns describe the
/// point in its own scan; the injected columns describe it as an injected
/// point of the opposite scan. cluster is -1 for flagged noise and empty
/// for unflagged points; injected_upsilon is empty when injection is off.
std::string format_score_table(const PipelineRun& run);

// Writes text verbatim; IoError on failure.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace eagleeye
