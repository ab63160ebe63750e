#include "eagleeye/scoring.hpp"

#include <algorithm>
#include <sstream>

#include "eagleeye/parallel.hpp"

namespace eagleeye {

double success_probability(const UnionIndex& index, Direction direction) {
    const double p = index.p_hat();
    return direction == Direction::TestOverdensity ? p : 1.0 - p;
}

ScoreRecord score_sequence(PointId point_id, std::span<const std::uint8_t> sequence,
                           const UpsilonTable& table) {
    if (sequence.size() > table.k_max()) {
        throw Error(ErrorCode::DomainError, "sequence longer than the table's k_max");
    }
    ScoreRecord rec;
    rec.point_id = point_id;
    rec.k_max = static_cast<std::uint32_t>(sequence.size());
    rec.membership_bits.assign((sequence.size() + 63) / 64, 0);
    std::size_t s = 0;
    for (std::size_t k = 1; k <= sequence.size(); ++k) {
        if (sequence[k - 1]) {
            ++s;
            rec.membership_bits[(k - 1) / 64] |= std::uint64_t{1} << ((k - 1) % 64);
        }
        rec.upsilon = std::max(rec.upsilon, table(s, k));
    }
    s = 0;
    for (std::size_t k = 1; k <= sequence.size(); ++k) {
        s += sequence[k - 1] ? 1 : 0;
        if (ties_maximum(table(s, k), rec.upsilon)) {
            rec.k_star = static_cast<std::uint32_t>(k);
            break;
        }
    }
    return rec;
}

std::vector<ScoreRecord> score_all(const UnionIndex& index, Direction direction,
                                   const UpsilonTable& table,
                                   std::span<const std::uint8_t> active_mask) {
    const Role role = scanned_role(direction);
    const std::uint8_t own = label_of(role);
    const PointId first = index.first_union_id(role);
    const std::size_t n = index.count(role);
    const std::size_t k_max = table.k_max();
    const bool masked = !active_mask.empty();
    if (masked && active_mask.size() != index.size()) {
        throw Error(ErrorCode::InvalidConfig, "active mask must cover every union point");
    }

    std::vector<PointId> scanned;
    scanned.reserve(n);
    std::size_t active_total = index.size();
    if (masked) {
        active_total = 0;
        for (const auto a : active_mask) active_total += a ? 1 : 0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!masked || active_mask[first + i]) scanned.push_back(static_cast<PointId>(i));
    }
    if (!scanned.empty() && k_max + 1 > active_total) {
        std::ostringstream msg;
        msg << "k_max = " << k_max << " exceeds the " << active_total - 1
            << " active neighbors";
        throw Error(ErrorCode::KMaxTooLarge, msg.str());
    }

    std::vector<ScoreRecord> out(scanned.size());
    parallel_for(scanned.size(), [&](std::size_t j) {
        const PointId uid = first + scanned[j];
        std::vector<Neighbor> neighbors;
        if (masked) {
            index.knn(index.point(uid), k_max,
                      [&](PointId id) { return id != uid && active_mask[id] != 0; }, neighbors);
        } else {
            neighbors = index.knn(uid, k_max);
        }
        std::vector<std::uint8_t> seq(neighbors.size());
        for (std::size_t k = 0; k < neighbors.size(); ++k) {
            seq[k] = index.label(neighbors[k].id) == own ? 1 : 0;
        }
        out[j] = score_sequence(scanned[j], seq, table);
    });
    return out;
}

std::vector<ScoreRecord> score_all(const UnionIndex& index, Direction direction,
                                   const EagleEyeConfig& config,
                                   std::span<const std::uint8_t> active_mask) {
    const UpsilonTable table(config.k_max, success_probability(index, direction));
    return score_all(index, direction, table, active_mask);
}

}  // namespace eagleeye
