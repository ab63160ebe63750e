#include "eagleeye/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eagleeye/estimators.hpp"
#include "eagleeye/kdtree.hpp"
#include "eagleeye/parallel.hpp"
#include "eagleeye/scoring.hpp"

namespace eagleeye {

IdSet flag(std::span<const ScoreRecord> scores, double threshold) {
    IdSet out;
    for (const auto& s : scores) {
        if (s.upsilon >= threshold) out.push_back(s.point_id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ide_cache_length(std::size_t k_max, std::size_t union_size) {
    const std::size_t margin = std::max<std::size_t>(16, k_max / 4);
    return std::min(k_max + margin, union_size - 1);
}

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
constexpr std::uint32_t kOverflow = std::numeric_limits<std::uint32_t>::max();

// Max over a fixed range with ties to the smaller index.
class ArgmaxTree {
public:
    explicit ArgmaxTree(std::size_t n) {
        size_ = 1;
        while (size_ < n) size_ <<= 1;
        value_.assign(2 * size_, kMinusInf);
        index_.assign(2 * size_, std::numeric_limits<std::size_t>::max());
        for (std::size_t i = 0; i < size_; ++i) index_[size_ + i] = i;
        for (std::size_t v = size_ - 1; v >= 1; --v) pull(v);
    }

    void set(std::size_t i, double v) {
        std::size_t node = size_ + i;
        value_[node] = v;
        for (node >>= 1; node >= 1; node >>= 1) pull(node);
    }

    double top_value() const { return value_[1]; }
    std::size_t top_index() const { return index_[1]; }

private:
    void pull(std::size_t v) {
        const std::size_t l = 2 * v;
        const std::size_t r = l + 1;
        const bool left = value_[l] > value_[r] || (value_[l] == value_[r] && index_[l] < index_[r]);
        value_[v] = left ? value_[l] : value_[r];
        index_[v] = left ? index_[l] : index_[r];
    }

    std::size_t size_;
    std::vector<double> value_;
    std::vector<std::size_t> index_;
};

double upsilon_of(const UnionIndex& index, std::span<const PointId> neighbors,
                  std::uint8_t own, const UpsilonTable& table) {
    double best = 0.0;
    std::size_t s = 0;
    for (std::size_t k = 1; k <= neighbors.size(); ++k) {
        s += index.label(neighbors[k - 1]) == own ? 1 : 0;
        best = std::max(best, table(s, k));
    }
    return best;
}

// State of density equalization for one direction.
class Equalizer {
public:
    Equalizer(const UnionIndex& index, const NeighborCache& cache, Direction direction,
              const UpsilonTable& table)
        : index_(index),
          cache_(cache),
          table_(table),
          role_(scanned_role(direction)),
          own_(label_of(role_)),
          first_(index.first_union_id(role_)),
          n_(index.count(role_)),
          k_max_(table.k_max()),
          active_(index.size(), 1),
          horizon_pos_(n_, 0),
          horizon_(n_),
          upsilon_(n_, 0.0),
          argmax_(n_),
          stamp_(n_, 0) {
        if (n_ == 0) return;
        if (!cache.contains(first_) || !cache.contains(static_cast<PointId>(first_ + n_ - 1)) ||
            cache.length() < k_max_) {
            throw Error(ErrorCode::InvalidConfig, "neighbor cache does not cover the scanned set");
        }
        build_reverse_index();
        std::vector<std::size_t> all(n_);
        for (std::size_t i = 0; i < n_; ++i) all[i] = i;
        rescore(all);
    }

    IdeOutcome run(double threshold) {
        IdeOutcome out;
        out.partition.direction = Role::Test == role_ ? Direction::TestOverdensity
                                                      : Direction::ReferenceOverdensity;
        out.partition.threshold = threshold;
        IdSet& pruned = out.partition.pruned;
        std::vector<PointId> neighbors;
        std::vector<PointId> removed;
        std::vector<std::size_t> dirty;
        std::uint32_t iteration = 0;
        while (n_ > 0 && argmax_.top_value() >= threshold) {
            if (++iteration > n_) {
                throw Error(ErrorCode::NonTermination,
                            "density equalization exceeded one iteration per scanned point");
            }
            const std::size_t top = argmax_.top_index();
            active_neighbors(top, neighbors);
            removed.assign(1, static_cast<PointId>(first_ + top));
            for (const PointId id : neighbors) {
                if (index_.label(id) != own_) break;
                removed.push_back(id);
            }
            for (const PointId uid : removed) {
                active_[uid] = 0;
                argmax_.set(uid - first_, kMinusInf);
                pruned.push_back(uid - first_);
            }

            dirty.clear();
            const auto mark = [&](std::size_t j) {
                if (!active_[first_ + j] || stamp_[j] == iteration) return;
                stamp_[j] = iteration;
                dirty.push_back(j);
            };
            for (const PointId r : removed) {
                for (std::size_t e = rev_offset_[r]; e < rev_offset_[r + 1]; ++e) {
                    const auto [j, pos] = rev_entries_[e];
                    if (horizon_pos_[j] == kOverflow || pos <= horizon_pos_[j]) mark(j);
                }
            }
            // Overflowed points see beyond their cached lists.
            std::erase_if(overflowed_, [&](std::size_t j) { return !active_[first_ + j]; });
            for (const std::size_t j : overflowed_) {
                const auto p = index_.point(static_cast<PointId>(first_ + j));
                for (const PointId r : removed) {
                    if (Neighbor{squared_distance(p, index_.point(r)), r} <= horizon_[j]) {
                        mark(j);
                        break;
                    }
                }
            }
            std::sort(dirty.begin(), dirty.end());
            rescore(dirty);
            stats_.rescored += dirty.size();
        }
        stats_.iterations = iteration;
        std::sort(pruned.begin(), pruned.end());
        for (std::size_t i = 0; i < n_; ++i) {
            if (active_[first_ + i]) out.partition.equalized.push_back(static_cast<PointId>(i));
        }
        out.stats = stats_;
        return out;
    }

private:
    void build_reverse_index() {
        const std::size_t length = cache_.length();
        rev_offset_.assign(index_.size() + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (const PointId r : cache_.list(static_cast<PointId>(first_ + i))) ++rev_offset_[r + 1];
        }
        for (std::size_t r = 0; r < index_.size(); ++r) rev_offset_[r + 1] += rev_offset_[r];
        rev_entries_.resize(rev_offset_.back());
        std::vector<std::size_t> fill(rev_offset_.begin(), rev_offset_.end() - 1);
        for (std::size_t i = 0; i < n_; ++i) {
            const auto list = cache_.list(static_cast<PointId>(first_ + i));
            for (std::size_t pos = 0; pos < length; ++pos) {
                rev_entries_[fill[list[pos]]++] = {static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(pos)};
            }
        }
    }

    // First k_max active neighbors of scanned point j. Returns true when the
    // cached list ran out and the tree had to be queried.
    bool active_neighbors(std::size_t j, std::vector<PointId>& out,
                          std::uint32_t* horizon_pos = nullptr, Neighbor* horizon = nullptr) const {
        out.clear();
        const auto uid = static_cast<PointId>(first_ + j);
        const auto list = cache_.list(uid);
        for (std::size_t pos = 0; pos < list.size(); ++pos) {
            if (!active_[list[pos]]) continue;
            out.push_back(list[pos]);
            if (out.size() == k_max_) {
                if (horizon_pos) *horizon_pos = static_cast<std::uint32_t>(pos);
                return false;
            }
        }
        std::vector<Neighbor> found;
        index_.knn(index_.point(uid), k_max_,
                   [&](PointId id) { return id != uid && active_[id] != 0; }, found);
        if (found.size() < k_max_) {
            std::ostringstream msg;
            msg << "k_max = " << k_max_ << " exceeds the active neighbors left during equalization";
            throw Error(ErrorCode::KMaxTooLarge, msg.str());
        }
        out.clear();
        for (const auto& nb : found) out.push_back(nb.id);
        if (horizon_pos) *horizon_pos = kOverflow;
        if (horizon) *horizon = found.back();
        return true;
    }

    void rescore(const std::vector<std::size_t>& points) {
        std::vector<std::uint8_t> overflow(points.size(), 0);
        parallel_for(points.size(), [&](std::size_t t) {
            const std::size_t j = points[t];
            std::vector<PointId> neighbors;
            overflow[t] = active_neighbors(j, neighbors, &horizon_pos_[j], &horizon_[j]) ? 1 : 0;
            upsilon_[j] = upsilon_of(index_, neighbors, own_, table_);
        });
        for (std::size_t t = 0; t < points.size(); ++t) {
            const std::size_t j = points[t];
            argmax_.set(j, upsilon_[j]);
            if (overflow[t]) {
                ++stats_.overflow_requeries;
                if (std::find(overflowed_.begin(), overflowed_.end(), j) == overflowed_.end()) {
                    overflowed_.push_back(j);
                }
            }
        }
    }

    const UnionIndex& index_;
    const NeighborCache& cache_;
    const UpsilonTable& table_;
    Role role_;
    std::uint8_t own_;
    PointId first_;
    std::size_t n_;
    std::size_t k_max_;
    std::vector<std::uint8_t> active_;  // per union id
    std::vector<std::uint32_t> horizon_pos_;
    std::vector<Neighbor> horizon_;  // meaningful for overflowed points only
    std::vector<double> upsilon_;
    ArgmaxTree argmax_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::size_t> rev_offset_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rev_entries_;  // (scanned, position)
    std::vector<std::size_t> overflowed_;
    IdeStats stats_;
};

Dataset subset(const Dataset& source, const IdSet& ids) {
    std::vector<double> coords;
    coords.reserve(ids.size() * source.dim());
    for (const PointId id : ids) {
        const auto p = source.point(id);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return Dataset(source.dim(), std::move(coords), source.role());
}

IdSet sorted_union(IdSet a, const IdSet& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

}  // namespace

IdeOutcome ide_prune(const UnionIndex& index, const NeighborCache& cache, Direction direction,
                     const UpsilonTable& table, double threshold) {
    Equalizer eq(index, cache, direction, table);
    return eq.run(threshold);
}

PartitionResult ide_prune(const Dataset& reference, const Dataset& test, Direction direction,
                          double threshold, const EagleEyeConfig& config) {
    const UnionIndex index(reference, test);
    const Role role = scanned_role(direction);
    const NeighborCache cache(index, ide_cache_length(config.k_max, index.size()),
                              index.first_union_id(role), index.count(role));
    const UpsilonTable table(config.k_max, success_probability(index, direction));
    IdeOutcome outcome = ide_prune(index, cache, direction, table, threshold);
    std::vector<ScoreRecord> scores = score_all(index, direction, table);
    outcome.partition.flagged = flag(scores, threshold);
    return outcome.partition;
}

double lower_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values[lo];
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

RepechageOutcome repechage(const IdSet& flagged, std::span<const int> labels,
                           const IdSet& pruned, std::span<const double> upsilon, double q) {
    if (labels.size() != flagged.size()) {
        throw Error(ErrorCode::InvalidConfig, "cluster labels must align with the flagged set");
    }
    std::map<int, RepechageCluster> by_alpha;
    RepechageOutcome out;
    for (std::size_t i = 0; i < flagged.size(); ++i) {
        if (labels[i] == kNoiseLabel) {
            ++out.noise_count;
            continue;
        }
        auto& c = by_alpha[labels[i]];
        c.alpha = labels[i];
        c.flagged.push_back(flagged[i]);
        if (std::binary_search(pruned.begin(), pruned.end(), flagged[i])) {
            c.pruned.push_back(flagged[i]);
        }
    }
    for (auto& [alpha, c] : by_alpha) {
        std::sort(c.flagged.begin(), c.flagged.end());
        std::sort(c.pruned.begin(), c.pruned.end());
        if (c.pruned.empty()) {
            out.dropped.push_back({alpha, c.flagged.size()});
            continue;
        }
        std::vector<double> pruned_scores;
        for (const PointId id : c.pruned) pruned_scores.push_back(upsilon[id]);
        c.threshold = lower_quantile(std::move(pruned_scores), q);
        for (const PointId id : c.flagged) {
            if (upsilon[id] >= c.threshold) c.members.push_back(id);
        }
        out.clusters.push_back(std::move(c));
    }
    return out;
}

std::vector<double> injected_scores(const UnionIndex& index, const NeighborCache& cache,
                                    Direction direction, const UpsilonTable& table) {
    const Role scanned = scanned_role(direction);
    const Role other = other_role(scanned);
    const std::uint8_t own = label_of(scanned);
    const PointId first = index.first_union_id(other);
    const std::size_t n = index.count(other);
    const std::size_t k_max = table.k_max();
    if (n > 0 && (!cache.contains(first) || !cache.contains(static_cast<PointId>(first + n - 1)) ||
                  cache.length() < k_max)) {
        throw Error(ErrorCode::InvalidConfig, "neighbor cache does not cover the injected set");
    }
    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const auto list = cache.list(static_cast<PointId>(first + i)).first(k_max);
        out[i] = upsilon_of(index, list, own, table);
    });
    return out;
}

IdSet inject_background(const Dataset& reference, const Dataset& test, double threshold,
                        const EagleEyeConfig& config, Direction direction) {
    const UnionIndex index(reference, test);
    const Role other = other_role(scanned_role(direction));
    const NeighborCache cache(index, config.k_max, index.first_union_id(other),
                              index.count(other));
    const UpsilonTable table(config.k_max, success_probability(index, direction));
    const auto scores = injected_scores(index, cache, direction, table);
    IdSet out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= threshold) out.push_back(static_cast<PointId>(i));
    }
    return out;
}

std::map<int, IdSet> assign_injected(const IdSet& injected, const Dataset& injected_points,
                                     std::span<const double> injected_upsilon,
                                     const IdSet& flagged, const Dataset& flagged_points,
                                     std::span<const int> labels,
                                     const std::map<int, double>& thresholds) {
    std::map<int, IdSet> out;
    if (injected.empty() || flagged.empty()) return out;
    if (labels.size() != flagged.size()) {
        throw Error(ErrorCode::InvalidConfig, "cluster labels must align with the flagged set");
    }
    const Dataset sub = subset(flagged_points, flagged);
    // Rows of sub follow the ascending flagged ids, so the tree's id
    // tie-break is the flagged-id tie-break.
    const KdTree tree(sub.coords(), sub.dim(), flagged.size() < 64 ? flagged.size() : 16);
    std::vector<int> target(injected.size(), kNoiseLabel);
    parallel_for(injected.size(), [&](std::size_t i) {
        const auto nearest = tree.knn(injected_points.point(injected[i]), 1);
        target[i] = labels[nearest.front().id];
    });
    for (std::size_t i = 0; i < injected.size(); ++i) {
        const auto it = thresholds.find(target[i]);
        if (it == thresholds.end()) continue;
        if (injected_upsilon[injected[i]] >= it->second) out[target[i]].push_back(injected[i]);
    }
    return out;
}

namespace {

struct DirectionInputs {
    Direction direction;
    const Dataset* scanned;
    const Dataset* other;
    UpsilonTable table;
};

}  // namespace

PipelineRun run(const Dataset& reference, const Dataset& test, const EagleEyeConfig& config) {
    return run(reference, test, config, DensityPeaksClusterer(config.clustering));
}

PipelineRun run(const Dataset& reference, const Dataset& test, const EagleEyeConfig& config,
                const Clusterer& clusterer) {
    const ValidationOutcome validation = validate(reference, test, config);
    validation.throw_if_failed();

    PipelineRun result;
    result.config = config;
    result.n_reference = reference.size();
    result.n_test = test.size();
    result.dim = reference.dim();
    result.warnings = validation.warnings;

    const UnionIndex index(reference, test);
    result.p_hat = index.p_hat();
    const NeighborCache cache(index, ide_cache_length(config.k_max, index.size()));

    DirectionInputs inputs[2] = {
        {Direction::TestOverdensity, &test, &reference,
         UpsilonTable(config.k_max, success_probability(index, Direction::TestOverdensity))},
        {Direction::ReferenceOverdensity, &reference, &test,
         UpsilonTable(config.k_max, success_probability(index, Direction::ReferenceOverdensity))},
    };
    DirectionRun* runs[2] = {&result.test_scan, &result.reference_scan};

    // Thresholds, scores, flags and equalization per direction.
    for (int d = 0; d < 2; ++d) {
        const auto& in = inputs[d];
        DirectionRun& out = *runs[d];
        out.direction = in.direction;
        if (d == 1 && inputs[0].table.p_success() == in.table.p_success()) {
            out.null_model = runs[0]->null_model;
        } else {
            out.null_model = null_threshold(config.k_max, in.table.p_success(), config.p_ext,
                                            config.threshold_method, config.seed,
                                            config.n_null_sequences);
        }
        const double threshold = out.null_model.threshold;

        const Role role = scanned_role(in.direction);
        const std::uint8_t own = label_of(role);
        const PointId first = index.first_union_id(role);
        out.scores.resize(index.count(role));
        parallel_for(out.scores.size(), [&](std::size_t i) {
            const auto list = cache.list(static_cast<PointId>(first + i)).first(config.k_max);
            std::vector<std::uint8_t> seq(list.size());
            for (std::size_t k = 0; k < list.size(); ++k) seq[k] = index.label(list[k]) == own;
            out.scores[i] = score_sequence(static_cast<PointId>(i), seq, in.table);
        });

        IdeOutcome ide = ide_prune(index, cache, in.direction, in.table, threshold);
        out.partition = std::move(ide.partition);
        out.ide = ide.stats;
        out.partition.flagged = flag(out.scores, threshold);
        for (const PointId id : out.partition.pruned) {
            if (out.scores[id].upsilon < threshold) ++out.pruned_unflagged;
        }
    }

    // Clustering, repêchage, injection and estimates.
    for (int d = 0; d < 2; ++d) {
        const auto& in = inputs[d];
        DirectionRun& out = *runs[d];
        const DirectionRun& opposite = *runs[1 - d];
        AnomalyReport& report = out.report;
        report.direction = in.direction;
        const IdSet& flagged = out.partition.flagged;

        if (!flagged.empty()) {
            const Dataset flagged_points = subset(*in.scanned, flagged);
            out.flagged_labels =
                clusterer.cluster(flagged_points.coords(), flagged_points.dim()).labels;
        }
        std::vector<double> upsilon(out.scores.size());
        for (std::size_t i = 0; i < upsilon.size(); ++i) upsilon[i] = out.scores[i].upsilon;
        RepechageOutcome rep =
            repechage(flagged, out.flagged_labels, out.partition.pruned, upsilon, config.q);
        report.dropped = std::move(rep.dropped);
        report.noise_count = rep.noise_count;

        std::map<int, IdSet> injected_by_alpha;
        if (config.run_injection) {
            out.injected_upsilon = injected_scores(index, cache, in.direction, in.table);
            for (std::size_t i = 0; i < out.injected_upsilon.size(); ++i) {
                if (out.injected_upsilon[i] >= out.null_model.threshold) {
                    out.injected.push_back(static_cast<PointId>(i));
                }
            }
            std::map<int, double> thresholds;
            for (const auto& c : rep.clusters) thresholds[c.alpha] = c.threshold;
            injected_by_alpha = assign_injected(out.injected, *in.other, out.injected_upsilon,
                                                flagged, *in.scanned, out.flagged_labels,
                                                thresholds);
        }

        EstimatorCounts base;
        base.n_own = in.scanned->size();
        base.pruned_own = out.partition.pruned.size();
        base.n_other = in.other->size();
        base.pruned_other = opposite.partition.pruned.size();

        for (auto& c : rep.clusters) {
            ClusterEntry entry;
            entry.alpha = c.alpha;
            entry.flagged = std::move(c.flagged);
            entry.pruned = std::move(c.pruned);
            entry.members = std::move(c.members);
            entry.repechage_threshold = c.threshold;
            if (config.run_injection) {
                entry.injected = injected_by_alpha[c.alpha];
                EstimatorCounts counts = base;
                counts.anomalous = entry.members.size();
                counts.injected = entry.injected.size();
                entry.estimates = estimate(counts);
            }
            report.total_members = sorted_union(std::move(report.total_members), entry.members);
            report.total_injected = sorted_union(std::move(report.total_injected), entry.injected);
            report.clusters.push_back(std::move(entry));
        }
        if (config.run_injection && !report.clusters.empty()) {
            EstimatorCounts counts = base;
            counts.anomalous = report.total_members.size();
            counts.injected = report.total_injected.size();
            report.totals = estimate(counts);
        }
    }
    return result;
}

}  // namespace eagleeye
