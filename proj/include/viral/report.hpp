#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viral/core.hpp"

namespace viral::harness {

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view name);

/// One line of an experiment table: the swept variables, the best point and
/// value of a run (or the cell median when kind == "median").
struct ReportRow {
    std::string kind = "run";
    std::vector<double> swept;
    Point best;
    double value = 0.0;
    double time_s = 0.0;
    std::uint64_t seed = 0;
    std::string error;  // non-empty when the run failed

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
    std::string experiment;
    std::vector<std::string> swept_names;
    std::size_t dim = 0;
    std::vector<ReportRow> rows;
};

/// CSV: header row, LF endings, reals with 6 fractional digits.
std::string to_csv(const Report& report);
Report parse_csv(std::string_view text);

/// JSON keeps full double precision.
std::string to_json(const Report& report);

void write_text(const std::filesystem::path& path, std::string_view content);
void write_report(const Report& report, const std::filesystem::path& path, OutputFormat format);

/// Fixed 6-decimal rendering used by every CSV writer ("nan", "inf", "-inf" for non-finite values).
std::string format_fixed(double v);

}  // namespace viral::harness
