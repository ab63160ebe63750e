#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "eagleeye/error.hpp"
#include "eagleeye/scoring.hpp"
#include "oracles/brute_knn.hpp"
#include "support.hpp"

using namespace eagleeye;

namespace {

struct Pair {
    std::vector<double> r, t;
    std::size_t dim;
    UnionIndex index() const {
        return UnionIndex(support::dataset(r, dim, Role::Reference), support::dataset(t, dim, Role::Test));
    }
};

Pair random_pair(std::size_t nr, std::size_t nt, std::size_t dim, std::uint64_t seed) {
    return {support::uniform_block(nr, dim, seed), support::uniform_block(nt, dim, seed + 1000), dim};
}

}  // namespace

TEST(SuccessProbability, Directions) {
    const auto p = random_pair(30, 10, 2, 1);
    const auto idx = p.index();
    EXPECT_DOUBLE_EQ(success_probability(idx, Direction::TestOverdensity), 0.25);
    EXPECT_DOUBLE_EQ(success_probability(idx, Direction::ReferenceOverdensity), 0.75);
}

TEST(ScoreSequence, SmallestArgmax) {
    const UpsilonTable table(6, 0.5);
    const std::vector<std::uint8_t> b{1, 0, 1, 0, 1, 0};
    const auto r = score_sequence(4, b, table);
    EXPECT_EQ(r.point_id, 4u);
    EXPECT_EQ(r.k_star, 1u);
    EXPECT_EQ(r.k_max, 6u);
    EXPECT_NEAR(r.upsilon, std::log(2.0), 1e-14);  // tied at every odd K
    EXPECT_EQ(r.b_counts(), (std::vector<std::uint32_t>{1, 1, 2, 2, 3, 3}));
}

TEST(ScoreAll, AgainstBruteForce) {
    const auto p = random_pair(150, 120, 3, 5);
    const auto idx = p.index();
    const auto u = oracle::union_coords(p.r, p.t);
    for (const Direction d : {Direction::TestOverdensity, Direction::ReferenceOverdensity}) {
        const UpsilonTable table(30, success_probability(idx, d));
        const auto rec = score_all(idx, d, table);
        const Role role = scanned_role(d);
        ASSERT_EQ(rec.size(), idx.count(role));
        for (std::size_t i = 0; i < rec.size(); ++i) {
            EXPECT_EQ(rec[i].point_id, i);
            const PointId uid = idx.to_union(role, static_cast<PointId>(i));
            const auto nn = oracle::knn(u, 3, idx.point(uid), 30, uid);
            std::vector<double> profile;
            std::size_t s = 0;
            for (std::size_t k = 1; k <= 30; ++k) {
                s += (nn[k - 1].id >= 150) == (role == Role::Test);
                profile.push_back(table(s, k));
            }
            const double best = *std::max_element(profile.begin(), profile.end());
            std::size_t kbest = 1;
            while (profile[kbest - 1] < best * (1 - 1e-12)) ++kbest;
            EXPECT_EQ(rec[i].upsilon, best);
            EXPECT_EQ(rec[i].k_star, kbest);
        }
    }
}

TEST(ScoreAll, DuplicatedSetsAreFiniteAndReproducible) {
    const auto pts = support::uniform_block(200, 2, 9);
    const UnionIndex idx(support::dataset(pts, 2, Role::Reference), support::dataset(pts, 2, Role::Test));
    EagleEyeConfig cfg;
    cfg.k_max = 20;
    const auto a = score_all(idx, Direction::TestOverdensity, cfg);
    const auto b = score_all(idx, Direction::TestOverdensity, cfg);
    EXPECT_EQ(a, b);
    for (const auto& r : a) {
        EXPECT_TRUE(std::isfinite(r.upsilon));
        EXPECT_FALSE(r.member(1));  // zero-distance twin is the reference copy
    }
}

TEST(ScoreAll, WorkerCountIndependent) {
    const auto p = random_pair(400, 400, 3, 17);
    const auto idx = p.index();
    EagleEyeConfig cfg;
    cfg.k_max = 40;
    std::vector<ScoreRecord> a, b;
    {
        support::WorkerScope s(1);
        a = score_all(idx, Direction::TestOverdensity, cfg);
    }
    {
        support::WorkerScope s(4);
        b = score_all(idx, Direction::TestOverdensity, cfg);
    }
    EXPECT_EQ(a, b);
}

TEST(ScoreAll, MaskHidesPoints) {
    const auto p = random_pair(60, 60, 2, 23);
    const auto idx = p.index();
    const UpsilonTable table(10, 0.5);
    std::vector<std::uint8_t> mask(idx.size(), 1);
    for (std::size_t u = 0; u < idx.size(); u += 3) mask[u] = 0;
    const auto rec = score_all(idx, Direction::TestOverdensity, table, mask);
    const auto u = oracle::union_coords(p.r, p.t);
    std::size_t expected = 0;
    for (PointId i = 0; i < 60; ++i) expected += mask[60 + i];
    ASSERT_EQ(rec.size(), expected);
    for (const auto& r : rec) {
        const PointId uid = 60 + r.point_id;
        ASSERT_TRUE(mask[uid]);
        const auto all = oracle::rank_all(u, 2, idx.point(uid), uid, [&](std::size_t v) { return mask[v] != 0; });
        for (std::size_t k = 1; k <= 10; ++k) EXPECT_EQ(r.member(k), all[k - 1].id >= 60);
    }
}

TEST(ScoreAll, KMaxTooLargeAfterMasking) {
    const auto p = random_pair(10, 10, 2, 29);
    const auto idx = p.index();
    const UpsilonTable table(15, 0.5);
    std::vector<std::uint8_t> mask(idx.size(), 1);
    for (std::size_t u = 0; u < 8; ++u) mask[u] = 0;
    try {
        score_all(idx, Direction::TestOverdensity, table, mask);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::KMaxTooLarge);
    }
}
