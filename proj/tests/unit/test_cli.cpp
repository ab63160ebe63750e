#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eagleeye/io.hpp"
#include "eagleeye/report.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "eagleeye_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result cli(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt";
    const std::string cmd = std::string(EAGLEEYE_CLI) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Cli, ThresholdPrintsValue) {
    const auto r = cli("threshold --k-max 100 --p-ext 1e-3");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("threshold ", 0), 0u) << r.out;
    const double t = std::stod(r.out.substr(10));
    EXPECT_EQ(t, eagleeye::null_threshold(100, 0.5, 1e-3).threshold);
}

TEST(Cli, ThresholdMonteCarloReportsError) {
    const auto r = cli("threshold --k-max 50 --p-ext 1e-2 --method mc --n-sequences 20000 --seed 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("standard_error"), std::string::npos);
}

TEST(Cli, UnreachableExitsThree) {
    EXPECT_EQ(cli("threshold --k-max 5 --p-ext 1e-5").code, 3);
}

TEST(Cli, UsageErrorsExitOne) {
    const auto dir = scratch();
    write(dir / "a.csv", "1,2\n3,4\n");
    const auto r = cli("detect --reference " + (dir / "a.csv").string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("--test"), std::string::npos);
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("threshold --k-max 5 --p-ext 1e-5 --method fast").code, 1);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, KMaxTooLargeExitsTwo) {
    const auto dir = scratch();
    write(dir / "r.csv", "0,0\n1,0\n0,1\n");
    write(dir / "t.csv", "1,1\n2,2\n");
    EXPECT_EQ(cli("detect --reference " + (dir / "r.csv").string() + " --test " + (dir / "t.csv").string() +
                  " --k-max 5")
                  .code,
              2);
}

TEST(Cli, BadInputExitsTwo) {
    const auto dir = scratch();
    write(dir / "r.csv", "0,0\n1,NaN\n");
    write(dir / "t.csv", "1,1\n2,2\n");
    const auto r = cli("detect --reference " + (dir / "r.csv").string() + " --test " + (dir / "t.csv").string() +
                       " --k-max 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("ParseError"), std::string::npos);
}

TEST(Cli, SimulateIsByteStable) {
    const auto dir = scratch();
    const std::string preset = EAGLEEYE_PRESETS "/gauss7x3.scenario";
    for (const char* tag : {"1", "2"}) {
        const auto r = cli("simulate --scenario " + preset + " --out-reference " + (dir / ("r" + std::string(tag))).string() +
                           " --out-test " + (dir / ("t" + std::string(tag))).string() + " --truth-out " +
                           (dir / ("g" + std::string(tag))).string());
        ASSERT_EQ(r.code, 0) << r.out;
    }
    EXPECT_EQ(slurp(dir / "r1"), slurp(dir / "r2"));
    EXPECT_EQ(slurp(dir / "t1"), slurp(dir / "t2"));
    EXPECT_EQ(slurp(dir / "g1"), slurp(dir / "g2"));
    EXPECT_EQ(eagleeye::read_dataset((dir / "t1").string()).size(), 50000u);
}

TEST(Cli, SimulateSphereDeletionKeepsRowCount) {
    const auto dir = scratch();
    const auto r = cli(std::string("simulate --scenario ") + EAGLEEYE_PRESETS "/sphere-deletion.scenario" +
                       " --out-reference " + (dir / "sr").string() + " --out-test " + (dir / "st").string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(eagleeye::read_dataset((dir / "sr").string()).size(),
              eagleeye::read_dataset((dir / "st").string()).size());
}

TEST(Cli, TorusInTwoDimensionsExitsTwo) {
    const auto dir = scratch();
    write(dir / "torus2d.scenario",
          "name: t\ndimension: 2\nseed: 1\n"
          "reference:\n  background: {kind: uniform_box, low: 0, high: 1, count: 10}\n"
          "test:\n  background: {kind: uniform_box, low: 0, high: 1, count: 10}\n"
          "  anomalies:\n    - {kind: torus, center: [0, 0], major_radius: 0.3, count: 5}\n");
    EXPECT_EQ(cli("simulate --scenario " + (dir / "torus2d.scenario").string() + " --out-reference " +
                  (dir / "x").string() + " --out-test " + (dir / "y").string())
                  .code,
              2);
}

TEST(Cli, DetectReportIsStableAndParses) {
    const auto dir = scratch();
    const auto r = support::uniform_block(1500, 2, 1);
    const auto t = support::concat(support::uniform_block(1420, 2, 2),
                                   support::gaussian_block(80, 2, 3, {0.5, 0.5}, 0.01));
    eagleeye::write_dataset((dir / "dr.csv").string(), support::dataset(r, 2, eagleeye::Role::Reference));
    eagleeye::write_dataset((dir / "dt.csv").string(), support::dataset(t, 2, eagleeye::Role::Test));
    const std::string base = "detect --reference " + (dir / "dr.csv").string() + " --test " +
                             (dir / "dt.csv").string() + " --k-max 30";
    ASSERT_EQ(cli(base + " --out " + (dir / "rep1.json").string() + " --scores-out " +
                  (dir / "s.csv").string()).code, 0);
    ASSERT_EQ(cli(base + " --out " + (dir / "rep2.json").string()).code, 0);
    const std::string a = slurp(dir / "rep1.json");
    EXPECT_EQ(a, slurp(dir / "rep2.json"));
    const auto doc = eagleeye::parse_report(a);
    EXPECT_EQ(doc.config.k_max, 30u);
    EXPECT_FALSE(doc.test_scan.report.clusters.empty());
    EXPECT_FALSE(slurp(dir / "s.csv").empty());
    // Default k_max is 5% of the union, capped at 500.
    ASSERT_EQ(cli("detect --reference " + (dir / "dr.csv").string() + " --test " + (dir / "dt.csv").string() +
                  " --no-injection --out " + (dir / "rep3.json").string()).code, 0);
    EXPECT_EQ(eagleeye::parse_report(slurp(dir / "rep3.json")).config.k_max, 150u);
}
