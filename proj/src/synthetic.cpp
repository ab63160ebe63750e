#include "eagleeye/synthetic.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eagleeye/rng.hpp"

namespace eagleeye {

namespace {

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorCode::SpecError, what); }

void check_vector(const std::vector<double>& v, std::size_t dim, const std::string& what) {
    if (v.size() != dim) {
        std::ostringstream msg;
        msg << what << " has " << v.size() << " entries, expected " << dim;
        spec_error(msg.str());
    }
    for (const double x : v) {
        if (!std::isfinite(x)) spec_error(what + " must be finite");
    }
}

void check_sample(const SampleSpec& s, std::size_t dim, const std::string& which) {
    if (const auto* box = std::get_if<UniformBox>(&s.background.shape)) {
        check_vector(box->low, dim, which + " background low");
        check_vector(box->high, dim, which + " background high");
        for (std::size_t i = 0; i < dim; ++i) {
            if (!(box->low[i] < box->high[i])) spec_error(which + " background box is empty");
        }
    }
    for (std::size_t j = 0; j < s.anomalies.size(); ++j) {
        const std::string tag = which + " anomaly " + std::to_string(j);
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                check_vector(a.center, dim, tag + " center");
                if constexpr (std::is_same_v<T, GaussianAnomaly>) {
                    check_vector(a.sigma, dim, tag + " sigma");
                    for (const double x : a.sigma) {
                        if (!(x > 0.0)) spec_error(tag + ": sigma must be positive");
                    }
                } else if constexpr (std::is_same_v<T, TorusAnomaly>) {
                    if (dim < 3) spec_error(tag + ": a torus needs at least 3 dimensions");
                    if (!(a.major_radius > 0.0) || !(a.minor_radius > 0.0)) {
                        spec_error(tag + ": torus radii must be positive");
                    }
                    if (!(a.minor_radius <= a.major_radius)) {
                        spec_error(tag + ": minor radius exceeds major radius");
                    }
                    if (dim > 3 && !(a.pad_sigma > 0.0)) {
                        spec_error(tag + ": pad_sigma must be positive");
                    }
                } else {
                    if (!(a.radius > 0.0)) spec_error(tag + ": radius must be positive");
                    if (!(a.removal_probability >= 0.0 && a.removal_probability <= 1.0)) {
                        spec_error(tag + ": removal_probability must lie in [0, 1]");
                    }
                }
            },
            s.anomalies[j]);
    }
}

void draw_background(const BackgroundSpec& bg, std::size_t dim, CounterRng& rng, double* out) {
    if (const auto* box = std::get_if<UniformBox>(&bg.shape)) {
        for (std::size_t i = 0; i < dim; ++i) out[i] = rng.uniform(box->low[i], box->high[i]);
    } else {
        for (std::size_t i = 0; i < dim; ++i) out[i] = rng.normal();
    }
}

void draw_torus(const TorusAnomaly& t, std::size_t dim, CounterRng& rng, double* out) {
    const double big = t.major_radius;
    const double small = t.minor_radius;
    const double reach = big + small;
    double x, y, z;
    do {
        x = rng.uniform(-reach, reach);
        y = rng.uniform(-reach, reach);
        z = rng.uniform(-small, small);
        const double ring = std::hypot(x, y) - big;
        if (ring * ring + z * z <= small * small) break;
    } while (true);
    out[0] = t.center[0] + x;
    out[1] = t.center[1] + y;
    out[2] = t.center[2] + z;
    for (std::size_t i = 3; i < dim; ++i) out[i] = t.center[i] + t.pad_sigma * rng.normal();
}

constexpr std::uint64_t kReferenceTag = 1;
constexpr std::uint64_t kTestTag = 2;

std::uint64_t stream_id(std::uint64_t sample_tag, std::uint64_t slot) {
    return (sample_tag << 32) | slot;
}

GeneratedSample generate_sample(const SampleSpec& s, std::size_t dim, std::uint64_t seed,
                                std::uint64_t tag, Role role) {
    std::size_t total = s.background.count;
    for (const auto& a : s.anomalies) {
        if (const auto* g = std::get_if<GaussianAnomaly>(&a)) total += g->count;
        if (const auto* t = std::get_if<TorusAnomaly>(&a)) total += t->count;
    }
    std::vector<double> coords(total * dim);
    std::vector<int> truth;
    truth.reserve(total);

    CounterRng background_rng(seed, stream_id(tag, 0));
    for (std::size_t i = 0; i < s.background.count; ++i) {
        draw_background(s.background, dim, background_rng, &coords[i * dim]);
        truth.push_back(kBackgroundTruth);
    }
    const std::size_t n_background = s.background.count;

    std::size_t row = n_background;
    for (std::size_t j = 0; j < s.anomalies.size(); ++j) {
        CounterRng rng(seed, stream_id(tag, j + 1));
        const int label = static_cast<int>(j);
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, GaussianAnomaly>) {
                    for (std::size_t n = 0; n < a.count; ++n, ++row) {
                        for (std::size_t i = 0; i < dim; ++i) {
                            coords[row * dim + i] = a.center[i] + a.sigma[i] * rng.normal();
                        }
                        truth.push_back(label);
                    }
                } else if constexpr (std::is_same_v<T, TorusAnomaly>) {
                    for (std::size_t n = 0; n < a.count; ++n, ++row) {
                        draw_torus(a, dim, rng, &coords[row * dim]);
                        truth.push_back(label);
                    }
                } else {
                    const double r2 = a.radius * a.radius;
                    for (std::size_t n = 0; n < n_background; ++n) {
                        double* p = &coords[n * dim];
                        double d2 = 0.0;
                        for (std::size_t i = 0; i < dim; ++i) {
                            d2 += (p[i] - a.center[i]) * (p[i] - a.center[i]);
                        }
                        if (d2 > r2) continue;
                        if (rng.uniform() < a.removal_probability) {
                            draw_background(s.background, dim, rng, p);
                        }
                    }
                }
            },
            s.anomalies[j]);
    }
    return {Dataset(dim, std::move(coords), role), std::move(truth)};
}

// YAML helpers.

std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.line < 0) return "";
    return " (line " + std::to_string(m.line + 1) + ")";
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                const std::string& what) {
    if (!map.IsMap()) spec_error(what + " must be a mapping" + where(map));
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) spec_error("unknown key '" + key + "' in " + what + where(kv.first));
    }
}

YAML::Node required(const YAML::Node& map, const std::string& key, const std::string& what) {
    const YAML::Node n = map[key];
    if (!n) spec_error(what + " is missing '" + key + "'" + where(map));
    return n;
}

template <class T>
T scalar(const YAML::Node& n, const std::string& what) {
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        spec_error(what + " has an invalid value" + where(n));
    }
}

std::size_t count_of(const YAML::Node& n, const std::string& what) {
    const auto v = scalar<long long>(n, what);
    if (v < 0) spec_error(what + " must be non-negative" + where(n));
    return static_cast<std::size_t>(v);
}

// A scalar broadcasts to every coordinate.
std::vector<double> vector_of(const YAML::Node& n, std::size_t dim, const std::string& what) {
    if (n.IsScalar()) return std::vector<double>(dim, scalar<double>(n, what));
    if (!n.IsSequence()) spec_error(what + " must be a number or a list" + where(n));
    std::vector<double> out;
    for (const auto& x : n) out.push_back(scalar<double>(x, what));
    return out;
}

BackgroundSpec parse_background(const YAML::Node& n, std::size_t dim, const std::string& what) {
    check_keys(n, {"kind", "low", "high", "count"}, what);
    BackgroundSpec bg;
    bg.count = count_of(required(n, "count", what), what + " count");
    const auto kind = scalar<std::string>(required(n, "kind", what), what + " kind");
    if (kind == "uniform_box") {
        UniformBox box;
        box.low = vector_of(required(n, "low", what), dim, what + " low");
        box.high = vector_of(required(n, "high", what), dim, what + " high");
        bg.shape = box;
    } else if (kind == "standard_gaussian") {
        if (n["low"] || n["high"]) spec_error(what + ": standard_gaussian takes no bounds");
        bg.shape = StandardGaussian{};
    } else {
        spec_error("unknown background kind '" + kind + "'" + where(n));
    }
    return bg;
}

AnomalySpec parse_anomaly(const YAML::Node& n, std::size_t dim, const std::string& what) {
    if (!n.IsMap()) spec_error(what + " must be a mapping" + where(n));
    const auto kind = scalar<std::string>(required(n, "kind", what), what + " kind");
    if (kind == "gaussian") {
        check_keys(n, {"kind", "center", "sigma", "count"}, what);
        GaussianAnomaly g;
        g.center = vector_of(required(n, "center", what), dim, what + " center");
        g.sigma = vector_of(required(n, "sigma", what), dim, what + " sigma");
        g.count = count_of(required(n, "count", what), what + " count");
        return g;
    }
    if (kind == "torus") {
        check_keys(n, {"kind", "center", "major_radius", "minor_radius", "pad_sigma", "count"},
                   what);
        TorusAnomaly t;
        t.center = vector_of(required(n, "center", what), dim, what + " center");
        t.major_radius = scalar<double>(required(n, "major_radius", what), what);
        t.minor_radius = n["minor_radius"] ? scalar<double>(n["minor_radius"], what)
                                           : t.major_radius / 6.0;
        t.pad_sigma = n["pad_sigma"] ? scalar<double>(n["pad_sigma"], what) : t.major_radius;
        t.count = count_of(required(n, "count", what), what + " count");
        return t;
    }
    if (kind == "spherical_deletion") {
        check_keys(n, {"kind", "center", "radius", "removal_probability"}, what);
        SphericalDeletion s;
        s.center = vector_of(required(n, "center", what), dim, what + " center");
        s.radius = scalar<double>(required(n, "radius", what), what);
        s.removal_probability = scalar<double>(required(n, "removal_probability", what), what);
        return s;
    }
    spec_error("unknown anomaly kind '" + kind + "'" + where(n));
}

SampleSpec parse_sample(const YAML::Node& n, std::size_t dim, const std::string& what) {
    check_keys(n, {"background", "anomalies"}, what);
    SampleSpec s;
    s.background = parse_background(required(n, "background", what), dim, what + " background");
    if (const auto list = n["anomalies"]) {
        if (!list.IsSequence() && !list.IsNull()) {
            spec_error(what + " anomalies must be a list" + where(list));
        }
        std::size_t j = 0;
        for (const auto& a : list) {
            s.anomalies.push_back(parse_anomaly(a, dim, what + " anomaly " + std::to_string(j++)));
        }
    }
    return s;
}

}  // namespace

void check_scenario(const ScenarioSpec& spec) {
    if (spec.dimension == 0) spec_error("dimension must be at least 1");
    check_sample(spec.reference, spec.dimension, "reference");
    check_sample(spec.test, spec.dimension, "test");
}

GeneratedScenario generate(const ScenarioSpec& spec) {
    check_scenario(spec);
    GeneratedScenario out;
    out.reference =
        generate_sample(spec.reference, spec.dimension, spec.seed, kReferenceTag, Role::Reference);
    out.test = generate_sample(spec.test, spec.dimension, spec.seed, kTestTag, Role::Test);
    return out;
}

ScenarioSpec parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        std::ostringstream msg;
        msg << "malformed scenario at line " << e.mark.line + 1 << ": " << e.msg;
        spec_error(msg.str());
    }
    check_keys(root, {"name", "dimension", "seed", "reference", "test"}, "scenario");
    ScenarioSpec spec;
    if (root["name"]) spec.name = scalar<std::string>(root["name"], "name");
    spec.dimension = count_of(required(root, "dimension", "scenario"), "dimension");
    if (root["seed"]) spec.seed = scalar<std::uint64_t>(root["seed"], "seed");
    spec.reference = parse_sample(required(root, "reference", "scenario"), spec.dimension,
                                  "reference");
    spec.test = parse_sample(required(root, "test", "scenario"), spec.dimension, "test");
    check_scenario(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

TruthEvaluation evaluate_against_truth(const AnomalyReport& report, std::span<const int> truth) {
    TruthEvaluation out;
    const auto label = [&](PointId id) {
        if (id >= truth.size()) throw Error(ErrorCode::InvalidConfig, "report id outside truth");
        return truth[id];
    };
    std::map<int, AnomalyRecovery> recovery;
    for (const int t : truth) {
        if (t == kBackgroundTruth) continue;
        auto& r = recovery[t];
        r.anomaly = t;
        ++r.planted;
    }
    std::map<int, std::set<PointId>> recovered_ids;
    std::size_t total_signal = 0;
    std::size_t total_members = 0;

    for (const auto& c : report.clusters) {
        ClusterTruth ct;
        ct.alpha = c.alpha;
        std::map<int, std::size_t> votes;
        for (const PointId id : c.members) ++votes[label(id)];
        std::size_t best = 0;
        for (const auto& [t, n] : votes) {
            if (n > best) {
                best = n;
                ct.anomaly = t;
            }
        }
        const auto signal = [&](const IdSet& ids) {
            if (ct.anomaly == kBackgroundTruth) return std::size_t{0};
            return static_cast<std::size_t>(std::count_if(
                ids.begin(), ids.end(), [&](PointId id) { return label(id) == ct.anomaly; }));
        };
        ct.flagged = c.flagged.size();
        ct.flagged_signal = signal(c.flagged);
        ct.pruned = c.pruned.size();
        ct.pruned_signal = signal(c.pruned);
        ct.members = c.members.size();
        ct.members_signal = signal(c.members);
        if (ct.members > 0) {
            ct.true_purity =
                static_cast<double>(ct.members_signal) / static_cast<double>(ct.members);
        }
        const std::size_t background = ct.members - ct.members_signal;
        if (background > 0) {
            ct.true_s_over_sqrt_b = static_cast<double>(ct.members_signal) /
                                    std::sqrt(static_cast<double>(background));
        }
        if (ct.anomaly != kBackgroundTruth) {
            recovery[ct.anomaly].clusters.push_back(ct.alpha);
            for (const PointId id : c.members) {
                if (label(id) == ct.anomaly) recovered_ids[ct.anomaly].insert(id);
            }
        }
        total_signal += ct.members_signal;
        total_members += ct.members;
        out.clusters.push_back(ct);
    }
    for (auto& [t, r] : recovery) {
        r.recovered = recovered_ids[t].size();
        r.recall = r.planted ? static_cast<double>(r.recovered) / static_cast<double>(r.planted)
                             : 0.0;
        out.anomalies.push_back(r);
    }
    if (total_members > 0) {
        out.total_true_purity =
            static_cast<double>(total_signal) / static_cast<double>(total_members);
        if (total_members > total_signal) {
            out.total_true_s_over_sqrt_b =
                static_cast<double>(total_signal) /
                std::sqrt(static_cast<double>(total_members - total_signal));
        }
    }
    return out;
}

}  // namespace eagleeye
