#include <gtest/gtest.h>

#include <sstream>

#include "eagleeye/error.hpp"
#include "eagleeye/io.hpp"
#include "eagleeye/report.hpp"
#include "support.hpp"

using namespace eagleeye;

namespace {

const PipelineRun& small_run() {
    static const PipelineRun r = [] {
        auto ref = support::uniform_block(2000, 2, 1);
        auto test = support::concat(support::uniform_block(1900, 2, 2),
                                    support::gaussian_block(100, 2, 3, {0.3, 0.7}, 0.01));
        EagleEyeConfig cfg;
        cfg.k_max = 40;
        return run(support::dataset(ref, 2, Role::Reference), support::dataset(test, 2, Role::Test), cfg);
    }();
    return r;
}

}  // namespace

TEST(Report, RoundTrip) {
    const ReportDocument doc = make_report(small_run());
    ASSERT_FALSE(doc.test_scan.report.clusters.empty());
    const std::string text = serialize(doc);
    const ReportDocument back = parse_report(text);
    EXPECT_EQ(back, doc);
    EXPECT_EQ(serialize(back), text);
    EXPECT_EQ(text.back(), '\n');
}

TEST(Report, RoundTripWithMonteCarloAndFlags) {
    ReportDocument doc = make_report(small_run());
    doc.test_scan.null_model.method = ThresholdMethod::MonteCarlo;
    doc.test_scan.null_model.standard_error = 0.0123456789;
    doc.test_scan.null_model.mc_sample_count = 1000;
    doc.warnings = {"k_max large"};
    if (!doc.test_scan.report.clusters.empty()) {
        auto& e = doc.test_scan.report.clusters[0].estimates;
        e.s_over_sqrt_b.reset();
        e.flags = {std::string(kFlagZeroBackground)};
    }
    doc.reference_scan.report.dropped.push_back({3, 7});
    EXPECT_EQ(parse_report(serialize(doc)), doc);
}

TEST(Report, SummaryCounts) {
    const auto& run = small_run();
    const ReportDocument doc = make_report(run);
    EXPECT_EQ(doc.n_reference, 2000u);
    EXPECT_EQ(doc.n_test, 2000u);
    EXPECT_EQ(doc.test_scan.scanned_count, 2000u);
    EXPECT_EQ(doc.test_scan.flagged_count, run.test_scan.partition.flagged.size());
    EXPECT_EQ(doc.test_scan.pruned_count + doc.test_scan.equalized_count, 2000u);
    EXPECT_EQ(doc.test_scan.injected_candidates, run.test_scan.injected.size());
    EXPECT_EQ(doc.config, run.config);
}

TEST(Report, Deterministic) {
    EXPECT_EQ(serialize(make_report(small_run())), serialize(make_report(small_run())));
}

TEST(Report, ParseRejectsBadDocuments) {
    EXPECT_THROW(parse_report("not json"), Error);
    EXPECT_THROW(parse_report("{}"), Error);
    std::string text = serialize(make_report(small_run()));
    const auto pos = text.find("\"1.0\"");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 5, "\"9.9\"");
    try {
        parse_report(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
}

TEST(ScoreTable, OneRowPerPoint) {
    const std::string table = format_score_table(small_run());
    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "role,id,upsilon,k_star,flagged,pruned,equalized,cluster,repechage,injected_upsilon,injected");
    std::size_t rows = 0, ref_rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        ref_rows += line.rfind("reference,", 0) == 0;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    }
    EXPECT_EQ(rows, 4000u);
    EXPECT_EQ(ref_rows, 2000u);
}
