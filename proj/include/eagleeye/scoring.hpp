#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eagleeye/binomial.hpp"
#include "eagleeye/neighbors.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

// Bernoulli success probability of a scan: p_hat for the test scan,
// 1 - p_hat for the reference scan.
double success_probability(const UnionIndex& index, Direction direction);

// Builds the record for one membership sequence; the sequence length is the
// record's k_max and must not exceed table.k_max().
ScoreRecord score_sequence(PointId point_id, std::span<const std::uint8_t> sequence,
                           const UpsilonTable& table);

/// Scores every scanned point of a direction.
///
/// active_mask, when non-empty, holds one byte per union id; union points
/// with a zero byte are invisible as neighbors and, if they belong to the
/// scanned set, get no record. Records come back in ascending point id.
/// Throws KMaxTooLarge when fewer than table.k_max() active neighbors
/// remain for some point.
std::vector<ScoreRecord> score_all(const UnionIndex& index, Direction direction,
                                   const UpsilonTable& table,
                                   std::span<const std::uint8_t> active_mask = {});

std::vector<ScoreRecord> score_all(const UnionIndex& index, Direction direction,
                                   const EagleEyeConfig& config,
                                   std::span<const std::uint8_t> active_mask = {});

}  // namespace eagleeye
