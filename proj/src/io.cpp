#include "eagleeye/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace eagleeye {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, bool comma) {
    std::vector<std::string_view> out;
    const auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    if (comma) {
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            out.push_back(trim(line.substr(start, pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

enum class FieldStatus { Ok, NotNumber, OutOfRange };

FieldStatus parse_field(std::string_view field, double& value) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return FieldStatus::NotNumber;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec == std::errc::result_out_of_range) return FieldStatus::OutOfRange;
    if (ec != std::errc() || ptr != end) return FieldStatus::NotNumber;
    return FieldStatus::Ok;
}

[[noreturn]] void parse_error(std::string_view source, std::size_t line, const std::string& what,
                              ErrorCode code = ErrorCode::ParseError) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw Error(code, msg.str());
}

std::string number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

Dataset parse_dataset(std::string_view text, Role role, std::string_view source) {
    std::vector<double> coords;
    std::size_t dim = 0;
    bool comma = false;
    bool first_row = true;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            if (eol == text.size()) break;
            continue;
        }
        if (first_row) comma = line.find(',') != std::string_view::npos;
        const auto fields = split_fields(line, comma);

        std::vector<double> row(fields.size());
        bool header = false;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const FieldStatus st = parse_field(fields[i], row[i]);
            if (st == FieldStatus::OutOfRange) {
                parse_error(source, line_no, "value '" + std::string(fields[i]) +
                            "' is outside the representable range", ErrorCode::NonFiniteInput);
            }
            if (st == FieldStatus::NotNumber) {
                if (first_row) {
                    header = true;
                    break;
                }
                parse_error(source, line_no, "field " + std::to_string(i + 1) + " ('" +
                            std::string(fields[i]) + "') is not a number");
            }
            if (!std::isfinite(row[i])) {
                parse_error(source, line_no, "field " + std::to_string(i + 1) + " is not finite");
            }
        }
        if (header) {
            first_row = false;
            if (eol == text.size()) break;
            continue;
        }
        if (dim == 0) {
            dim = fields.size();
        } else if (fields.size() != dim) {
            parse_error(source, line_no, "expected " + std::to_string(dim) + " fields, found " +
                        std::to_string(fields.size()));
        }
        first_row = false;
        coords.insert(coords.end(), row.begin(), row.end());
        if (eol == text.size()) break;
    }
    if (coords.empty()) {
        throw Error(ErrorCode::EmptyDataset, std::string(source) + ": no data rows");
    }
    return Dataset(dim, std::move(coords), role);
}

Dataset read_dataset(const std::string& path, Role role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), role, path);
}

std::string format_dataset(const Dataset& data) {
    std::string out;
    out.reserve(data.size() * data.dim() * 12);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto p = data.point(i);
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j) out += ',';
            out += number(p[j]);
        }
        out += '\n';
    }
    return out;
}

void write_dataset(const std::string& path, const Dataset& data) {
    write_text_file(path, format_dataset(data));
}

std::string format_truth(std::span<const int> reference, std::span<const int> test) {
    std::string out = "role,id,truth\n";
    const auto rows = [&out](std::string_view role, std::span<const int> labels) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            out += role;
            out += ',' + std::to_string(i) + ',' + std::to_string(labels[i]) + '\n';
        }
    };
    rows(to_string(Role::Reference), reference);
    rows(to_string(Role::Test), test);
    return out;
}

namespace {

void append_rows(std::string& out, const DirectionRun& own, const DirectionRun& opposite,
                 bool injection) {
    const std::string_view role = to_string(scanned_role(own.direction));
    const auto& part = own.partition;
    std::vector<int> cluster(own.scores.size(), -2);  // -2: not flagged
    for (std::size_t i = 0; i < part.flagged.size(); ++i) {
        cluster[part.flagged[i]] = own.flagged_labels.empty() ? -1 : own.flagged_labels[i];
    }
    std::vector<std::uint8_t> pruned(own.scores.size(), 0), member(own.scores.size(), 0),
        injected(own.scores.size(), 0);
    for (const PointId id : part.pruned) pruned[id] = 1;
    for (const PointId id : own.report.total_members) member[id] = 1;
    for (const PointId id : opposite.report.total_injected) injected[id] = 1;

    for (std::size_t i = 0; i < own.scores.size(); ++i) {
        const auto& s = own.scores[i];
        out += role;
        out += ',' + std::to_string(i);
        out += ',' + number(s.upsilon);
        out += ',' + std::to_string(s.k_star);
        out += cluster[i] != -2 ? ",1" : ",0";
        out += pruned[i] ? ",1,0" : ",0,1";
        out += ',';
        if (cluster[i] != -2) out += std::to_string(cluster[i]);
        out += member[i] ? ",1," : ",0,";
        if (injection) out += number(opposite.injected_upsilon[i]);
        out += injected[i] ? ",1\n" : ",0\n";
    }
}

}  // namespace

std::string format_score_table(const PipelineRun& run) {
    std::string out =
        "role,id,upsilon,k_star,flagged,pruned,equalized,cluster,repechage,injected_upsilon,"
        "injected\n";
    const bool injection = run.config.run_injection;
    append_rows(out, run.reference_scan, run.test_scan, injection);
    append_rows(out, run.test_scan, run.reference_scan, injection);
    return out;
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace eagleeye
