#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viral/benchmarks.hpp"
#include "viral/engine.hpp"
#include "viral/report.hpp"

namespace viral::harness {

/// One grid point of an experiment: the values shown in the table's swept
/// columns and the engine configuration they produce.
struct ExperimentCell {
    std::vector<double> swept;
    VSConfig config;
};

struct ExperimentSpec {
    std::string name;
    std::string benchmark;
    std::map<std::string, double> benchmark_parameters;
    std::vector<std::string> swept_names;
    std::vector<ExperimentCell> cells;
    DEConfig de;
    std::size_t repeat = 1;
    std::uint64_t seed_base = 1;
    OutputFormat format = OutputFormat::csv;
    std::filesystem::path output_path;  // empty: do not write
    bool record_timing = true;          // false writes 0 in the time column
    /// When non-empty, each run reports its incumbent at these generations
    /// instead of its final result; the swept column is the generation.
    std::vector<std::uint64_t> checkpoints;

    void validate() const;
};

std::vector<std::string> builtin_spec_names();

/// rosenbrock-table2, rosenbrock-table3, schaffer-table3, twowell-table4, shekel-table5.
ExperimentSpec builtin_spec(const std::string& name);

/// Runs every cell `repeat` times (seeds seed_base, seed_base + 1, ...), emits one
/// row per run and a median row per cell, and writes the output file if a
/// path is set. A failing run is recorded in its row and the sweep continues.
Report run_experiment(const ExperimentSpec& spec);

/// Split `b` into m boxes by recursive bisection of the longest axis; for odd
/// counts the cut is placed proportionally so box volumes stay equal.
std::vector<Bounds> partition_domain(const Bounds& b, std::size_t m);

/// Independent engine per box (N_i split evenly, remainder to the first
/// boxes, N_g unchanged), merged by taking the best worker. m = 1 is exactly
/// run(objective, b, cfg, de_cfg).
RunResult parallel_run(const Objective& objective, const Bounds& b, const VSConfig& cfg, const DEConfig& de_cfg,
                       std::size_t m);

/// CSV: generation,fobj_global,epidemics,elapsed_ms.
std::string trace_csv(const RunResult& result);
void trace_export(const RunResult& result, const std::filesystem::path& path);

}  // namespace viral::harness
