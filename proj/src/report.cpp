#include "eagleeye/report.hpp"

#include "json.hpp"

namespace eagleeye {

using nlohmann::json;

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ThresholdMethod method_from(const std::string& s) {
    if (s == "exact") return ThresholdMethod::ExactDP;
    if (s == "mc") return ThresholdMethod::MonteCarlo;
    throw Error(ErrorCode::ParseError, "unknown threshold method '" + s + "'");
}

Direction direction_from(const std::string& s) {
    if (s == to_string(Direction::TestOverdensity)) return Direction::TestOverdensity;
    if (s == to_string(Direction::ReferenceOverdensity)) return Direction::ReferenceOverdensity;
    throw Error(ErrorCode::ParseError, "unknown direction '" + s + "'");
}

json to_json(const EagleEyeConfig& c) {
    return {
        {"k_max", c.k_max},
        {"p_ext", c.p_ext},
        {"q", c.q},
        {"metric", "euclidean"},
        {"seed", c.seed},
        {"n_null_sequences", c.n_null_sequences},
        {"threshold_method", std::string(to_string(c.threshold_method))},
        {"run_injection", c.run_injection},
        {"clustering",
         {{"k_density", c.clustering.k_density},
          {"merge_ratio", c.clustering.merge_ratio},
          {"min_cluster_size", c.clustering.min_cluster_size}}},
    };
}

EagleEyeConfig config_from(const json& j) {
    EagleEyeConfig c;
    c.k_max = j.at("k_max").get<std::size_t>();
    c.p_ext = j.at("p_ext").get<double>();
    c.q = j.at("q").get<double>();
    if (j.at("metric").get<std::string>() != "euclidean") {
        throw Error(ErrorCode::ParseError, "unknown metric");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n_null_sequences = j.at("n_null_sequences").get<std::size_t>();
    c.threshold_method = method_from(j.at("threshold_method").get<std::string>());
    c.run_injection = j.at("run_injection").get<bool>();
    const json& cl = j.at("clustering");
    c.clustering.k_density = cl.at("k_density").get<std::size_t>();
    c.clustering.merge_ratio = cl.at("merge_ratio").get<double>();
    c.clustering.min_cluster_size = cl.at("min_cluster_size").get<std::size_t>();
    return c;
}

json to_json(const NullModel& m) {
    return {
        {"k_max", m.k_max},
        {"p_success", m.p_success},
        {"p_ext", m.p_ext},
        {"threshold", m.threshold},
        {"method", std::string(to_string(m.method))},
        {"mc_sample_count", m.mc_sample_count},
        {"exceedance_probability", m.exceedance_probability},
        {"standard_error", optional_json(m.standard_error)},
    };
}

NullModel null_model_from(const json& j) {
    NullModel m;
    m.k_max = j.at("k_max").get<std::size_t>();
    m.p_success = j.at("p_success").get<double>();
    m.p_ext = j.at("p_ext").get<double>();
    m.threshold = j.at("threshold").get<double>();
    m.method = method_from(j.at("method").get<std::string>());
    m.mc_sample_count = j.at("mc_sample_count").get<std::size_t>();
    m.exceedance_probability = j.at("exceedance_probability").get<double>();
    m.standard_error = optional_from<double>(j.at("standard_error"));
    return m;
}

json to_json(const Estimates& e) {
    return {
        {"purity", optional_json(e.purity)},
        {"s_over_sqrt_b", optional_json(e.s_over_sqrt_b)},
        {"flags", e.flags},
    };
}

Estimates estimates_from(const json& j) {
    Estimates e;
    e.purity = optional_from<double>(j.at("purity"));
    e.s_over_sqrt_b = optional_from<double>(j.at("s_over_sqrt_b"));
    e.flags = j.at("flags").get<std::vector<std::string>>();
    return e;
}

json to_json(const AnomalyReport& r) {
    json clusters = json::array();
    for (const auto& c : r.clusters) {
        clusters.push_back({
            {"alpha", c.alpha},
            {"flagged", c.flagged},
            {"pruned", c.pruned},
            {"members", c.members},
            {"repechage_threshold", c.repechage_threshold},
            {"injected", c.injected},
            {"estimates", to_json(c.estimates)},
        });
    }
    json dropped = json::array();
    for (const auto& d : r.dropped) {
        dropped.push_back({{"alpha", d.alpha}, {"flagged_count", d.flagged_count}});
    }
    return {
        {"clusters", clusters},
        {"dropped", dropped},
        {"noise_count", r.noise_count},
        {"totals",
         {{"members", r.total_members},
          {"injected", r.total_injected},
          {"estimates", to_json(r.totals)}}},
    };
}

AnomalyReport anomaly_report_from(const json& j, Direction direction) {
    AnomalyReport r;
    r.direction = direction;
    for (const auto& c : j.at("clusters")) {
        ClusterEntry e;
        e.alpha = c.at("alpha").get<int>();
        e.flagged = c.at("flagged").get<IdSet>();
        e.pruned = c.at("pruned").get<IdSet>();
        e.members = c.at("members").get<IdSet>();
        e.repechage_threshold = c.at("repechage_threshold").get<double>();
        e.injected = c.at("injected").get<IdSet>();
        e.estimates = estimates_from(c.at("estimates"));
        r.clusters.push_back(std::move(e));
    }
    for (const auto& d : j.at("dropped")) {
        r.dropped.push_back({d.at("alpha").get<int>(), d.at("flagged_count").get<std::size_t>()});
    }
    r.noise_count = j.at("noise_count").get<std::size_t>();
    const json& t = j.at("totals");
    r.total_members = t.at("members").get<IdSet>();
    r.total_injected = t.at("injected").get<IdSet>();
    r.totals = estimates_from(t.at("estimates"));
    return r;
}

json to_json(const DirectionSection& s) {
    return {
        {"direction", std::string(to_string(s.direction))},
        {"null_model", to_json(s.null_model)},
        {"scanned_count", s.scanned_count},
        {"flagged_count", s.flagged_count},
        {"pruned_count", s.pruned_count},
        {"equalized_count", s.equalized_count},
        {"pruned_unflagged", s.pruned_unflagged},
        {"injected_candidates", s.injected_candidates},
        {"runtime",
         {{"ide_iterations", s.ide.iterations},
          {"ide_rescored", s.ide.rescored},
          {"ide_overflow_requeries", s.ide.overflow_requeries}}},
        {"anomalies", to_json(s.report)},
    };
}

DirectionSection section_from(const json& j) {
    DirectionSection s;
    s.direction = direction_from(j.at("direction").get<std::string>());
    s.null_model = null_model_from(j.at("null_model"));
    s.scanned_count = j.at("scanned_count").get<std::size_t>();
    s.flagged_count = j.at("flagged_count").get<std::size_t>();
    s.pruned_count = j.at("pruned_count").get<std::size_t>();
    s.equalized_count = j.at("equalized_count").get<std::size_t>();
    s.pruned_unflagged = j.at("pruned_unflagged").get<std::size_t>();
    s.injected_candidates = j.at("injected_candidates").get<std::size_t>();
    const json& rt = j.at("runtime");
    s.ide.iterations = rt.at("ide_iterations").get<std::size_t>();
    s.ide.rescored = rt.at("ide_rescored").get<std::size_t>();
    s.ide.overflow_requeries = rt.at("ide_overflow_requeries").get<std::size_t>();
    s.report = anomaly_report_from(j.at("anomalies"), s.direction);
    return s;
}

DirectionSection section_of(const DirectionRun& d) {
    DirectionSection s;
    s.direction = d.direction;
    s.null_model = d.null_model;
    s.scanned_count = d.scores.size();
    s.flagged_count = d.partition.flagged.size();
    s.pruned_count = d.partition.pruned.size();
    s.equalized_count = d.partition.equalized.size();
    s.pruned_unflagged = d.pruned_unflagged;
    s.injected_candidates = d.injected.size();
    s.ide = d.ide;
    s.report = d.report;
    return s;
}

}  // namespace

ReportDocument make_report(const PipelineRun& run) {
    ReportDocument doc;
    doc.config = run.config;
    doc.n_reference = run.n_reference;
    doc.n_test = run.n_test;
    doc.dim = run.dim;
    doc.p_hat = run.p_hat;
    doc.warnings = run.warnings;
    doc.test_scan = section_of(run.test_scan);
    doc.reference_scan = section_of(run.reference_scan);
    return doc;
}

std::string serialize(const ReportDocument& doc) {
    const json j = {
        {"format", doc.format},
        {"version", doc.version},
        {"config", to_json(doc.config)},
        {"input", {{"n_reference", doc.n_reference}, {"n_test", doc.n_test}, {"dim", doc.dim},
                   {"p_hat", doc.p_hat}}},
        {"warnings", doc.warnings},
        {"test_scan", to_json(doc.test_scan)},
        {"reference_scan", to_json(doc.reference_scan)},
    };
    return j.dump(2) + "\n";
}

ReportDocument parse_report(std::string_view text) {
    try {
        const json j = json::parse(text);
        ReportDocument doc;
        doc.format = j.at("format").get<std::string>();
        doc.version = j.at("version").get<std::string>();
        if (doc.format != kReportFormat) {
            throw Error(ErrorCode::ParseError, "not an eagleeye report");
        }
        if (doc.version != kReportVersion) {
            throw Error(ErrorCode::ParseError, "unsupported report version " + doc.version);
        }
        doc.config = config_from(j.at("config"));
        const json& in = j.at("input");
        doc.n_reference = in.at("n_reference").get<std::size_t>();
        doc.n_test = in.at("n_test").get<std::size_t>();
        doc.dim = in.at("dim").get<std::size_t>();
        doc.p_hat = in.at("p_hat").get<double>();
        doc.warnings = j.at("warnings").get<std::vector<std::string>>();
        doc.test_scan = section_from(j.at("test_scan"));
        doc.reference_scan = section_from(j.at("reference_scan"));
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
    }
}

}  // namespace eagleeye
