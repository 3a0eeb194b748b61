#include "viral/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace viral::harness {

namespace {

VSConfig table_config(std::size_t ni, std::size_t ng, std::size_t niv, std::size_t ngv, std::size_t nc) {
    VSConfig c;
    c.n_individuals = ni;
    c.n_generations = ng;
    c.n_viral_individuals = niv;
    c.n_viral_generations = ngv;
    c.centers_per_axis = nc;
    return c;
}

struct JobOutcome {
    std::optional<RunResult> result;
    std::string error;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Median row for a group of run rows; coordinates come from the lower-median run.
ReportRow median_row(const std::vector<ReportRow>& runs, const std::vector<double>& swept) {
    ReportRow m;
    m.kind = "median";
    m.swept = swept;
    std::vector<const ReportRow*> ok;
    for (const auto& r : runs) {
        if (r.error.empty() && !std::isnan(r.value)) ok.push_back(&r);
    }
    if (ok.empty()) {
        m.value = std::numeric_limits<double>::quiet_NaN();
        m.error = "no successful runs";
        return m;
    }
    std::stable_sort(ok.begin(), ok.end(), [](const ReportRow* a, const ReportRow* b) { return a->value < b->value; });
    std::vector<double> values, times;
    for (const auto* r : ok) {
        values.push_back(r->value);
        times.push_back(r->time_s);
    }
    const ReportRow* lower = ok[(ok.size() - 1) / 2];
    m.best = lower->best;
    m.seed = lower->seed;
    m.value = median_of(values);
    m.time_s = median_of(times);
    return m;
}

Bounds split_box(const Bounds& b, std::size_t axis, double fraction, bool upper_part) {
    Point lo = b.lower(), hi = b.upper();
    const double cut = b.lower()[axis] + fraction * b.range(axis);
    if (upper_part) {
        lo[axis] = cut;
    } else {
        hi[axis] = cut;
    }
    return Bounds(std::move(lo), std::move(hi));
}

void partition_into(const Bounds& b, std::size_t m, std::vector<Bounds>& out) {
    if (m == 1) {
        out.push_back(b);
        return;
    }
    std::size_t axis = 0;
    for (std::size_t j = 1; j < b.dim(); ++j) {
        if (b.range(j) > b.range(axis)) axis = j;
    }
    const std::size_t left = (m + 1) / 2;
    const double fraction = static_cast<double>(left) / static_cast<double>(m);
    partition_into(split_box(b, axis, fraction, false), left, out);
    partition_into(split_box(b, axis, fraction, true), m - left, out);
}

}  // namespace

void ExperimentSpec::validate() const {
    if (repeat < 1) throw ConfigError("experiment repeat must be at least 1");
    if (cells.empty()) throw ConfigError("experiment has no grid cells");
    for (const auto& c : cells) {
        if (c.swept.size() != swept_names.size() && checkpoints.empty()) {
            throw ConfigError("experiment cell does not match the swept column list");
        }
        c.config.validate();
    }
    bench::registry_lookup(benchmark, benchmark_parameters);
}

std::vector<std::string> builtin_spec_names() {
    return {"rosenbrock-table2", "rosenbrock-table3", "schaffer-table3", "twowell-table4", "shekel-table5"};
}

ExperimentSpec builtin_spec(const std::string& name) {
    ExperimentSpec spec;
    spec.name = name;
    using Row = std::pair<std::size_t, std::size_t>;
    if (name == "rosenbrock-table2") {
        spec.benchmark = "rosenbrock";
        spec.swept_names = {"ni", "ng"};
        for (auto [ni, ng] : {Row{5, 50}, {10, 75}, {30, 100}, {60, 200}, {100, 300}, {400, 1200}}) {
            spec.cells.push_back({{double(ni), double(ng)}, table_config(ni, ng, 150, 75, 7)});
        }
    } else if (name == "rosenbrock-table3") {
        spec.benchmark = "rosenbrock";
        spec.swept_names = {"niv", "ngv"};
        for (auto [niv, ngv] : {Row{5, 50}, {10, 75}, {30, 100}, {60, 200}, {100, 300}, {400, 500}, {400, 1200}}) {
            spec.cells.push_back({{double(niv), double(ngv)}, table_config(40, 100, niv, ngv, 7)});
        }
    } else if (name == "schaffer-table3") {
        spec.benchmark = "schaffer";
        spec.swept_names = {"ni", "ng"};
        for (auto [ni, ng] : {Row{10, 50}, {50, 75}, {100, 100}, {400, 150}, {1000, 200}, {1500, 300}}) {
            spec.cells.push_back({{double(ni), double(ng)}, table_config(ni, ng, 150, 75, 7)});
        }
    } else if (name == "twowell-table4") {
        // Time rescaled by 10: with tau = 3000 the wells swap depth at t = 6000,
        // between the sixth and seventh checkpoints, and the final depth is 3.
        spec.benchmark = "two_well";
        spec.benchmark_parameters = {{"tau", 3000.0}};
        spec.swept_names = {"t"};
        for (std::uint64_t t = 1000; t <= 9000; t += 1000) spec.checkpoints.push_back(t);
        VSConfig c = table_config(100, 9001, 150, 100, 0);
        c.time_varying = true;
        spec.cells.push_back({{}, c});
    } else if (name == "shekel-table5") {
        spec.benchmark = "shekel";
        spec.swept_names = {"ni", "ng"};
        for (auto [ni, ng] : {Row{5, 50}, {10, 75}, {30, 100}, {60, 200}, {100, 300}, {400, 1200}, {800, 1500},
                              {1000, 2000}, {2000, 3000}, {5000, 5000}}) {
            spec.cells.push_back({{double(ni), double(ng)}, table_config(ni, ng, 300, 75, 0)});
        }
    } else {
        std::string valid;
        for (const auto& n : builtin_spec_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("unknown experiment spec '" + name + "'; valid specs: " + valid);
    }
    return spec;
}

Report run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const bench::BenchmarkSpec fn = bench::registry_lookup(spec.benchmark, spec.benchmark_parameters);

    const std::size_t n_jobs = spec.cells.size() * spec.repeat;
    std::vector<JobOutcome> outcomes(n_jobs);
    const auto n = static_cast<std::ptrdiff_t>(n_jobs);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t job = 0; job < n; ++job) {
        const auto& cell = spec.cells[static_cast<std::size_t>(job) / spec.repeat];
        VSConfig cfg = cell.config;
        cfg.seed = spec.seed_base + static_cast<std::uint64_t>(job) % spec.repeat;
        try {
            outcomes[job].result = run(fn.objective, fn.bounds, cfg, spec.de);
        } catch (const std::exception& e) {
            outcomes[job].error = e.what();
        }
    }

    Report report;
    report.experiment = spec.name;
    report.swept_names = spec.swept_names;
    report.dim = fn.arity;

    const auto run_row = [&](const JobOutcome& o, std::uint64_t seed, std::vector<double> swept,
                             std::optional<std::uint64_t> checkpoint) {
        ReportRow row;
        row.swept = std::move(swept);
        row.seed = seed;
        if (!o.result) {
            row.value = std::numeric_limits<double>::quiet_NaN();
            row.error = o.error.empty() ? "run failed" : o.error;
            return row;
        }
        const RunResult& r = *o.result;
        if (checkpoint) {
            const auto it = std::find_if(r.trace.begin(), r.trace.end(),
                                         [&](const TraceRow& tr) { return tr.generation == *checkpoint; });
            if (it == r.trace.end()) {
                row.value = std::numeric_limits<double>::quiet_NaN();
                row.error = "checkpoint beyond the end of the run";
                return row;
            }
            row.best = it->best_point;
            row.value = fn.natural_value(it->fobj_global);
            row.time_s = spec.record_timing ? it->elapsed_ms / 1000.0 : 0.0;
        } else {
            row.best = r.best_point;
            row.value = fn.natural_value(r.best_value);
            row.time_s = spec.record_timing ? r.wall_time_ms / 1000.0 : 0.0;
        }
        return row;
    };

    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
        const auto emit = [&](const std::vector<double>& swept, std::optional<std::uint64_t> checkpoint) {
            std::vector<ReportRow> runs;
            for (std::size_t r = 0; r < spec.repeat; ++r) {
                runs.push_back(run_row(outcomes[c * spec.repeat + r], spec.seed_base + r, swept, checkpoint));
            }
            ReportRow med = median_row(runs, swept);
            // Medians of a maximisation problem are taken on the natural value, so flip order.
            if (fn.sense < 0 && med.error.empty()) {
                std::vector<ReportRow> flipped = runs;
                for (auto& f : flipped) f.value = -f.value;
                med = median_row(flipped, swept);
                med.value = -med.value;
            }
            report.rows.insert(report.rows.end(), runs.begin(), runs.end());
            report.rows.push_back(std::move(med));
        };
        if (spec.checkpoints.empty()) {
            emit(spec.cells[c].swept, std::nullopt);
        } else {
            for (std::uint64_t t : spec.checkpoints) emit({static_cast<double>(t)}, t);
        }
    }

    if (!spec.output_path.empty()) write_report(report, spec.output_path, spec.format);
    return report;
}

std::vector<Bounds> partition_domain(const Bounds& b, std::size_t m) {
    if (m < 1) throw ConfigError("partition count must be at least 1");
    std::vector<Bounds> boxes;
    boxes.reserve(m);
    partition_into(b, m, boxes);
    return boxes;
}

RunResult parallel_run(const Objective& objective, const Bounds& b, const VSConfig& cfg, const DEConfig& de_cfg,
                       std::size_t m) {
    if (m < 1) throw ConfigError("parallel worker count must be at least 1");
    if (m > cfg.n_individuals) {
        throw ConfigError("cannot split " + std::to_string(cfg.n_individuals) + " individuals across " +
                          std::to_string(m) + " workers; each worker needs at least one");
    }
    if (m == 1) {
        RunResult r = run(objective, b, cfg, de_cfg);
        r.workers.push_back({0, b, cfg.n_individuals, r.best_point, r.best_value, r.epidemic_count});
        return r;
    }

    const auto boxes = partition_domain(b, m);
    std::vector<VSConfig> configs(m, cfg);
    for (std::size_t w = 0; w < m; ++w) {
        configs[w].n_individuals = cfg.n_individuals / m + (w < cfg.n_individuals % m ? 1 : 0);
        configs[w].seed = RngStream::child_seed(cfg.seed, w);
        configs[w].validate();
    }

    const auto started = std::chrono::steady_clock::now();
    std::vector<RunResult> results(m);
    std::vector<std::string> errors(m);
    const auto n = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t w = 0; w < n; ++w) {
        try {
            results[w] = run(objective, boxes[w], configs[w], de_cfg);
        } catch (const std::exception& e) {
            errors[w] = e.what();
        }
    }
    for (std::size_t w = 0; w < m; ++w) {
        if (!errors[w].empty()) throw EvaluationError("worker " + std::to_string(w) + " failed: " + errors[w]);
    }

    RunResult merged;
    merged.config_echo = cfg;
    std::size_t best_worker = 0;
    for (std::size_t w = 0; w < m; ++w) {
        const RunResult& r = results[w];
        merged.workers.push_back({w, boxes[w], configs[w].n_individuals, r.best_point, r.best_value, r.epidemic_count});
        merged.epidemic_count += r.epidemic_count;
        if (r.best_value < results[best_worker].best_value) best_worker = w;
    }
    merged.best_point = results[best_worker].best_point;
    merged.best_value = results[best_worker].best_value;

    // Per generation the merged incumbent is the best worker's; a worker that
    // stopped early contributes its last row.
    std::size_t longest = 0;
    for (const auto& r : results) longest = std::max(longest, r.trace.size());
    for (std::size_t g = 0; g < longest; ++g) {
        TraceRow row;
        std::optional<std::size_t> chosen;
        for (std::size_t w = 0; w < m; ++w) {
            const auto& tr = results[w].trace;
            if (tr.empty()) continue;
            const TraceRow& cand = tr[std::min(g, tr.size() - 1)];
            row.epidemics_so_far += cand.epidemics_so_far;
            row.elapsed_ms = std::max(row.elapsed_ms, cand.elapsed_ms);
            if (!chosen || cand.fobj_global < row.fobj_global) {
                chosen = w;
                row.fobj_global = cand.fobj_global;
                row.best_point = cand.best_point;
            }
        }
        row.generation = g;
        row.worker = chosen.value_or(0);
        merged.trace.push_back(std::move(row));
    }
    merged.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return merged;
}

std::string trace_csv(const RunResult& result) {
    if (result.trace.empty()) throw ContractError("trace_export: the run has no trace rows");
    std::ostringstream os;
    os << "generation,fobj_global,epidemics,elapsed_ms\n";
    for (const auto& row : result.trace) {
        os << row.generation << ',' << format_fixed(row.fobj_global) << ',' << row.epidemics_so_far << ','
           << format_fixed(row.elapsed_ms) << '\n';
    }
    return os.str();
}

void trace_export(const RunResult& result, const std::filesystem::path& path) {
    write_text(path, trace_csv(result));
}

}  // namespace viral::harness
