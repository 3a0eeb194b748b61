#include "viral/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace viral::harness {

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_real(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw IoError("malformed number '" + s + "' in report CSV");
    return v;
}

nlohmann::json real_to_json(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_fixed(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    // Avoid "-0.000000" so equal tables print identically.
    if (std::string_view(buf) == "-0.000000") return "0.000000";
    return buf;
}

std::string to_csv(const Report& report) {
    std::ostringstream os;
    os << "kind";
    for (const auto& name : report.swept_names) os << ',' << name;
    for (std::size_t j = 0; j < report.dim; ++j) os << ",x" << (j + 1);
    os << ",value,time_s,seed,error\n";
    for (const auto& row : report.rows) {
        if (row.swept.size() != report.swept_names.size() || (!row.best.empty() && row.best.size() != report.dim)) {
            throw ContractError("report row does not match the table layout");
        }
        os << row.kind;
        for (double v : row.swept) os << ',' << format_fixed(v);
        for (std::size_t j = 0; j < report.dim; ++j) {
            os << ',' << (row.best.empty() ? std::string("nan") : format_fixed(row.best[j]));
        }
        os << ',' << format_fixed(row.value) << ',' << format_fixed(row.time_s) << ',' << row.seed << ',';
        for (char c : row.error) os << (c == ',' || c == '\n' || c == '\r' ? ';' : c);
        os << '\n';
    }
    return os.str();
}

Report parse_csv(std::string_view text) {
    Report report;
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        const auto nl = text.find('\n', pos);
        lines.push_back(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (lines.empty()) throw IoError("empty report CSV");
    const auto header = split_line(lines[0]);
    if (header.size() < 5 || header.front() != "kind" || header[header.size() - 4] != "value") {
        throw IoError("report CSV header not recognised");
    }
    std::size_t col = 1;
    while (col < header.size() && !(header[col].size() > 1 && header[col][0] == 'x' &&
                                     header[col].find_first_not_of("0123456789", 1) == std::string::npos) &&
           header[col] != "value") {
        report.swept_names.push_back(header[col++]);
    }
    while (col < header.size() && header[col] != "value") {
        ++report.dim;
        ++col;
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split_line(lines[i]);
        if (cells.size() != header.size()) throw IoError("report CSV row " + std::to_string(i) + " has wrong width");
        ReportRow row;
        std::size_t c = 0;
        row.kind = cells[c++];
        for (std::size_t k = 0; k < report.swept_names.size(); ++k) row.swept.push_back(parse_real(cells[c++]));
        bool all_nan = report.dim > 0;
        for (std::size_t j = 0; j < report.dim; ++j) {
            row.best.push_back(parse_real(cells[c++]));
            all_nan = all_nan && std::isnan(row.best.back());
        }
        if (all_nan) row.best.clear();
        row.value = parse_real(cells[c++]);
        row.time_s = parse_real(cells[c++]);
        row.seed = std::stoull(cells[c++]);
        row.error = cells[c++];
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string to_json(const Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r;
        r["kind"] = row.kind;
        for (std::size_t k = 0; k < report.swept_names.size(); ++k) r[report.swept_names[k]] = row.swept[k];
        nlohmann::json best = nlohmann::json::array();
        for (double v : row.best) best.push_back(real_to_json(v));
        r["best_point"] = best;
        r["value"] = real_to_json(row.value);
        r["time_s"] = row.time_s;
        r["seed"] = row.seed;
        if (!row.error.empty()) r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    nlohmann::json doc{{"experiment", report.experiment}, {"swept", report.swept_names}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_report(const Report& report, const std::filesystem::path& path, OutputFormat format) {
    write_text(path, format == OutputFormat::csv ? to_csv(report) : to_json(report));
}

}  // namespace viral::harness
