// eagleeye command-line front end: detect, threshold, simulate.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "eagleeye/eagleeye.hpp"

namespace {

using namespace eagleeye;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 4;

std::string number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

ThresholdMethod method_of(const std::string& name) {
    return name == "mc" ? ThresholdMethod::MonteCarlo : ThresholdMethod::ExactDP;
}

struct DetectArgs {
    std::string reference;
    std::string test;
    std::optional<std::size_t> k_max;
    double p_ext = 1e-5;
    double q = 0.01;
    std::uint64_t seed = 0;
    std::string method = "exact";
    std::size_t n_sequences = 1'000'000;
    bool no_injection = false;
    std::string out;
    std::string scores_out;
    ClusteringParams clustering;
};

// min(500, 5% of the union), at least 1.
std::size_t default_k_max(std::size_t total) {
    const auto five_percent = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(total)));
    return std::min<std::size_t>(500, std::max<std::size_t>(1, five_percent));
}

int run_detect(const DetectArgs& a) {
    const Dataset reference = read_dataset(a.reference, Role::Reference);
    const Dataset test = read_dataset(a.test, Role::Test);
    EagleEyeConfig config;
    config.k_max = a.k_max.value_or(default_k_max(reference.size() + test.size()));
    config.p_ext = a.p_ext;
    config.q = a.q;
    config.seed = a.seed;
    config.threshold_method = method_of(a.method);
    config.n_null_sequences = a.n_sequences;
    config.run_injection = !a.no_injection;
    config.clustering = a.clustering;

    const PipelineRun run = eagleeye::run(reference, test, config);
    for (const auto& w : run.warnings) std::cerr << "warning: " << w << "\n";
    const std::string doc = serialize(make_report(run));
    if (a.out.empty() || a.out == "-") {
        std::cout << doc;
    } else {
        write_text_file(a.out, doc);
    }
    if (!a.scores_out.empty()) write_text_file(a.scores_out, format_score_table(run));
    return kExitOk;
}

struct ThresholdArgs {
    std::size_t k_max = 0;
    double p_ext = 1e-5;
    double p_hat = 0.5;
    std::string method = "exact";
    std::size_t n_sequences = 1'000'000;
    std::uint64_t seed = 0;
};

int run_threshold(const ThresholdArgs& a) {
    const NullModel m =
        null_threshold(a.k_max, a.p_hat, a.p_ext, method_of(a.method), a.seed, a.n_sequences);
    std::cout << "threshold " << number(m.threshold) << "\n";
    std::cout << "exceedance_probability " << number(m.exceedance_probability) << "\n";
    if (m.standard_error) std::cout << "standard_error " << number(*m.standard_error) << "\n";
    return kExitOk;
}

struct SimulateArgs {
    std::string scenario;
    std::string out_reference;
    std::string out_test;
    std::string truth_out;
    std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& a) {
    ScenarioSpec spec = load_scenario(a.scenario);
    if (a.seed) spec.seed = *a.seed;
    const GeneratedScenario g = generate(spec);
    write_dataset(a.out_reference, g.reference.data);
    write_dataset(a.out_test, g.test.data);
    if (!a.truth_out.empty()) {
        write_text_file(a.truth_out, format_truth(g.reference.truth, g.test.truth));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local over- and under-density detection between a reference and a test sample"};
    app.name("eagleeye");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    DetectArgs detect;
    auto* d = app.add_subcommand("detect", "Run the full detection pipeline on two datasets");
    d->add_option("--reference", detect.reference, "Reference dataset (delimited text)")
        ->required()->check(CLI::ExistingFile);
    d->add_option("--test", detect.test, "Test dataset (delimited text)")
        ->required()->check(CLI::ExistingFile);
    d->add_option("--k-max", detect.k_max,
                  "Maximum neighborhood rank (default: min(500, 5% of all points))");
    d->add_option("--p-ext", detect.p_ext, "Null exceedance probability of the threshold")
        ->capture_default_str();
    d->add_option("--q", detect.q, "Repechage quantile")->capture_default_str();
    d->add_option("--seed", detect.seed, "Seed for Monte-Carlo thresholds")->capture_default_str();
    d->add_option("--threshold-method", detect.method, "exact or mc")
        ->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
    d->add_option("--n-sequences", detect.n_sequences, "Monte-Carlo null sequences")
        ->capture_default_str();
    d->add_flag("--no-injection", detect.no_injection, "Skip background injection and estimates");
    d->add_option("--out", detect.out, "Report path (default: standard output)");
    d->add_option("--scores-out", detect.scores_out, "Per-point score table path");
    d->add_option("--k-density", detect.clustering.k_density, "Clustering density neighbors")
        ->capture_default_str();
    d->add_option("--merge-ratio", detect.clustering.merge_ratio, "Clustering merge ratio")
        ->capture_default_str();
    d->add_option("--min-cluster-size", detect.clustering.min_cluster_size,
                  "Smallest reported cluster")
        ->capture_default_str();

    ThresholdArgs threshold;
    auto* t = app.add_subcommand("threshold", "Critical score threshold under the null");
    t->add_option("--k-max", threshold.k_max, "Maximum neighborhood rank")->required();
    t->add_option("--p-ext", threshold.p_ext, "Null exceedance probability")->required();
    t->add_option("--p-hat", threshold.p_hat, "Bernoulli success probability")
        ->capture_default_str();
    t->add_option("--method", threshold.method, "exact or mc")
        ->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
    t->add_option("--n-sequences", threshold.n_sequences, "Monte-Carlo null sequences")
        ->capture_default_str();
    t->add_option("--seed", threshold.seed, "Monte-Carlo seed")->capture_default_str();

    SimulateArgs simulate;
    auto* s = app.add_subcommand("simulate", "Generate datasets from a scenario file");
    s->add_option("--scenario", simulate.scenario, "Scenario file (YAML)")
        ->required()->check(CLI::ExistingFile);
    s->add_option("--out-reference", simulate.out_reference, "Reference output path")->required();
    s->add_option("--out-test", simulate.out_test, "Test output path")->required();
    s->add_option("--truth-out", simulate.truth_out, "Ground-truth label table path");
    s->add_option("--seed", simulate.seed, "Override the scenario seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*d) return run_detect(detect);
        if (*t) return run_threshold(threshold);
        if (*s) return run_simulate(simulate);
    } catch (const Error& e) {
        std::cerr << "eagleeye: " << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "eagleeye: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
