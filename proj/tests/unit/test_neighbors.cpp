#include <gtest/gtest.h>

#include "eagleeye/kdtree.hpp"
#include "eagleeye/neighbors.hpp"
#include "oracles/brute_knn.hpp"
#include "support.hpp"

using namespace eagleeye;

class KnnExactness : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KnnExactness, MatchesBruteForce) {
    const std::size_t dim = GetParam();
    const auto coords = support::uniform_block(3000, dim, 11 + dim);
    const KdTree tree(coords, dim);
    const auto queries = support::uniform_block(200, dim, 99 + dim);
    for (std::size_t q = 0; q < 200; ++q) {
        const std::span<const double> query(&queries[q * dim], dim);
        const auto got = tree.knn(query, 40);
        const auto want = oracle::knn(coords, dim, query, 40);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].id, want[i].id);
            EXPECT_EQ(got[i].dist2, want[i].d2);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Dims, KnnExactness, ::testing::Values(2, 8, 14));

TEST(KdTree, DuplicatesBreakTiesById) {
    std::vector<double> coords;
    for (int i = 0; i < 50; ++i) coords.insert(coords.end(), {0.5, 0.5});
    const KdTree tree(coords, 2, 4);
    const std::vector<double> q{0.5, 0.5};
    const auto got = tree.knn(q, 10, PointId{3});
    ASSERT_EQ(got.size(), 10u);
    std::vector<PointId> ids;
    for (const auto& n : got) ids.push_back(n.id);
    EXPECT_EQ(ids, (std::vector<PointId>{0, 1, 2, 4, 5, 6, 7, 8, 9, 10}));
}

TEST(KdTree, FilterAndShortResult) {
    const auto coords = support::uniform_block(30, 3, 5);
    const KdTree tree(coords, 3);
    std::vector<Neighbor> out;
    tree.knn(std::span<const double>(&coords[0], 3), 100, [](PointId id) { return id % 2 == 0; },
             out);
    EXPECT_EQ(out.size(), 15u);
    for (const auto& n : out) EXPECT_EQ(n.id % 2, 0u);
}

TEST(UnionIndex, TwoPointLabels) {
    const auto ref = Dataset::from_rows({{0.0, 0.0}}, Role::Reference);
    const auto test = Dataset::from_rows({{1.0, 0.0}}, Role::Test);
    const UnionIndex idx(ref, test);
    EXPECT_EQ(idx.size(), 2u);
    EXPECT_EQ(idx.labels(), (std::vector<std::uint8_t>{0, 1}));
    EXPECT_EQ(idx.to_union(Role::Test, 0), 1u);
    EXPECT_EQ(idx.origin(1).first, Role::Test);
    EXPECT_DOUBLE_EQ(idx.p_hat(), 0.5);
}

TEST(UnionIndex, DuplicatedSetsPairAtZeroDistance) {
    const auto pts = support::uniform_block(100, 3, 7);
    const UnionIndex idx(support::dataset(pts, 3, Role::Reference),
                         support::dataset(pts, 3, Role::Test));
    EXPECT_EQ(idx.size(), 200u);
    for (PointId i = 0; i < 100; ++i) {
        const auto nn = idx.knn(i, 1);
        EXPECT_EQ(nn[0].id, i + 100);
        EXPECT_EQ(nn[0].dist2, 0.0);
    }
}

TEST(MembershipSequence, SmallExample) {
    // Query test point at the origin; neighbors test, ref, test in that order.
    const auto ref = Dataset::from_rows({{2.0}, {10.0}}, Role::Reference);
    const auto test = Dataset::from_rows({{0.0}, {1.0}, {3.0}}, Role::Test);
    const UnionIndex idx(ref, test);
    const auto b = membership_sequence(idx, test.point(0), idx.to_union(Role::Test, 0), 3, kTestLabel);
    EXPECT_EQ(b, (std::vector<std::uint8_t>{1, 0, 1}));
}

TEST(MembershipSequence, MatchesBruteForceLabels) {
    const auto r = support::uniform_block(100, 2, 21);
    const auto t = support::uniform_block(100, 2, 22);
    const UnionIndex idx(support::dataset(r, 2, Role::Reference), support::dataset(t, 2, Role::Test));
    const auto u = oracle::union_coords(r, t);
    for (PointId i = 0; i < 100; ++i) {
        const PointId uid = idx.to_union(Role::Test, i);
        const auto b = membership_sequence(idx, idx.point(uid), uid, 50, kTestLabel);
        const auto want = oracle::knn(u, 2, idx.point(uid), 50, uid);
        for (std::size_t k = 0; k < 50; ++k) EXPECT_EQ(b[k], want[k].id >= 100 ? 1 : 0);
    }
}

TEST(MembershipSequence, DuplicatesAreDeterministic) {
    const auto pts = support::uniform_block(20, 2, 4);
    const UnionIndex idx(support::dataset(pts, 2, Role::Reference),
                         support::dataset(pts, 2, Role::Test));
    const PointId uid = idx.to_union(Role::Test, 5);
    const auto a = membership_sequence(idx, idx.point(uid), uid, 15, kTestLabel);
    const auto b = membership_sequence(idx, idx.point(uid), uid, 15, kTestLabel);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a[0], 0);  // its reference twin comes first
}

TEST(NeighborCache, ListsMatchQueries) {
    const auto r = support::uniform_block(200, 3, 31);
    const auto t = support::uniform_block(150, 3, 32);
    const UnionIndex idx(support::dataset(r, 3, Role::Reference), support::dataset(t, 3, Role::Test));
    const NeighborCache cache(idx, 25, idx.first_union_id(Role::Test), 150);
    EXPECT_TRUE(cache.contains(200));
    EXPECT_FALSE(cache.contains(10));
    for (PointId uid = 200; uid < 350; ++uid) {
        const auto nn = idx.knn(uid, 25);
        const auto list = cache.list(uid);
        for (std::size_t k = 0; k < 25; ++k) EXPECT_EQ(list[k], nn[k].id);
    }
}
