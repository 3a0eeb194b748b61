// viral: command-line front end for the Viral Search optimizer.
//
//   viral run    --function rosenbrock --ni 60 --ng 200 --niv 150 --ngv 75
//   viral bench  --spec rosenbrock-table2 --repeat 5 --out table2.csv
//   viral trace  --function rosenbrock --ni 40 --ng 1000 --niv 150 --ngv 75 --out trace.csv
//   viral schema --length 20 --pc 0.7 --pm 0.01 --schema "11******************" --generations 30 --trials 200
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or I/O error.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "viral/benchmarks.hpp"
#include "viral/engine.hpp"
#include "viral/harness.hpp"
#include "viral/schema_lab.hpp"

namespace {

using namespace viral;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunOptions {
    std::string function = "rosenbrock";
    std::size_t ni = 40, ng = 1000, niv = 150, ngv = 75, nc = 0;
    double rho = 0.05, step = 0.1;
    std::uint64_t seed = 1;
    std::size_t parallel = 1;
    bool time_varying = false;
    bool uniform_init = false;
    bool omp = false;
    std::optional<double> tau;
    std::optional<std::size_t> stagnation;
    std::string out;
    std::string format = "csv";
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool out_required) {
    cmd->add_option("--function", o.function, "Benchmark name")->required();
    cmd->add_option("--ni", o.ni, "Walkers (N_i)")->required();
    cmd->add_option("--ng", o.ng, "Generations (N_g)")->required();
    cmd->add_option("--niv", o.niv, "Epidemic population (N_iv)")->required();
    cmd->add_option("--ngv", o.ngv, "Epidemic generations (N_gv)")->required();
    cmd->add_option("--nc", o.nc, "Centers per axis (0 disables rebalancing)");
    cmd->add_option("--rho", o.rho, "Epidemic half-width as a fraction of the axis range");
    cmd->add_option("--step", o.step, "Walk step stdev as a fraction of the axis range");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--parallel", o.parallel, "Split the domain across M workers");
    cmd->add_flag("--time-varying", o.time_varying, "Re-evaluate the incumbent every generation");
    cmd->add_option("--tau", o.tau, "Time scale of two_well");
    cmd->add_option("--stagnation", o.stagnation, "Stop after this many generations without improvement");
    cmd->add_flag("--uniform-init", o.uniform_init, "Random cloud instead of stratified initial population");
    cmd->add_flag("--omp", o.omp, "Evaluate populations with OpenMP");
    auto* out = cmd->add_option("--out", o.out, "Output path");
    if (out_required) out->required();
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

VSConfig to_config(const RunOptions& o) {
    VSConfig c;
    c.n_individuals = o.ni;
    c.n_generations = o.ng;
    c.n_viral_individuals = o.niv;
    c.n_viral_generations = o.ngv;
    c.centers_per_axis = o.nc;
    c.epidemic_radius_fraction = o.rho;
    c.walk_step_fraction = o.step;
    c.seed = o.seed;
    c.time_varying = o.time_varying;
    c.stagnation_window = o.stagnation;
    c.initializer = o.uniform_init ? Initializer::uniform : Initializer::stratified;
    c.execution = o.omp ? Execution::openmp : Execution::serial;
    return c;
}

struct Prepared {
    bench::BenchmarkSpec spec;
    VSConfig config;
};

Prepared prepare(const RunOptions& o) {
    std::map<std::string, double> params;
    if (o.tau) params["tau"] = *o.tau;
    Prepared p{bench::registry_lookup(o.function, params), to_config(o)};
    if (o.ni < 20 * p.spec.arity) {
        std::cerr << "warning: N_i = " << o.ni << " is below 20 * N_p = " << 20 * p.spec.arity
                  << "; coverage of the domain may be poor\n";
    }
    return p;
}

RunResult execute(const Prepared& p, std::size_t parallel) {
    return harness::parallel_run(p.spec.objective, p.spec.bounds, p.config, DEConfig{}, parallel);
}

void print_summary(const Prepared& p, const RunResult& r) {
    std::printf("function   %s\n", p.spec.name.c_str());
    std::printf("best point %s\n", format_point(r.best_point).c_str());
    std::printf("best value %.9g\n", p.spec.natural_value(r.best_value));
    std::printf("epidemics  %llu\n", static_cast<unsigned long long>(r.epidemic_count));
    std::printf("time (s)   %.6f\n", r.wall_time_ms / 1000.0);
}

std::string run_json(const Prepared& p, const RunResult& r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& row : r.trace) {
        trace.push_back({{"generation", row.generation},
                         {"fobj_global", row.fobj_global},
                         {"best_point", row.best_point},
                         {"epidemics", row.epidemics_so_far},
                         {"elapsed_ms", row.elapsed_ms},
                         {"worker", row.worker}});
    }
    const auto& c = r.config_echo;
    nlohmann::json workers = nlohmann::json::array();
    for (const auto& w : r.workers) {
        workers.push_back({{"worker", w.worker},
                           {"lower", w.box.lower()},
                           {"upper", w.box.upper()},
                           {"n_individuals", w.n_individuals},
                           {"best_point", w.best_point},
                           {"best_value", p.spec.natural_value(w.best_value)}});
    }
    nlohmann::json doc{
        {"function", p.spec.name},
        {"config",
         {{"ni", c.n_individuals},
          {"ng", c.n_generations},
          {"niv", c.n_viral_individuals},
          {"ngv", c.n_viral_generations},
          {"nc", c.centers_per_axis},
          {"rho", c.epidemic_radius_fraction},
          {"step", c.walk_step_fraction},
          {"seed", c.seed},
          {"time_varying", c.time_varying}}},
        {"best_point", r.best_point},
        {"best_value", p.spec.natural_value(r.best_value)},
        {"epidemic_count", r.epidemic_count},
        {"wall_time_ms", r.wall_time_ms},
        {"workers", workers},
        {"trace", trace},
    };
    return doc.dump(2) + "\n";
}

std::string run_csv(const Prepared& p, const RunResult& r) {
    const auto& c = r.config_echo;
    std::string s = "function,ni,ng,niv,ngv";
    for (std::size_t j = 0; j < p.spec.arity; ++j) s += ",x" + std::to_string(j + 1);
    s += ",value,time_s,seed,epidemics\n";
    s += p.spec.name + "," + std::to_string(c.n_individuals) + "," + std::to_string(c.n_generations) + "," +
         std::to_string(c.n_viral_individuals) + "," + std::to_string(c.n_viral_generations);
    for (std::size_t j = 0; j < p.spec.arity; ++j) {
        s += "," + (r.best_point.empty() ? std::string("nan") : harness::format_fixed(r.best_point[j]));
    }
    s += "," + harness::format_fixed(p.spec.natural_value(r.best_value)) + "," +
         harness::format_fixed(r.wall_time_ms / 1000.0) + "," + std::to_string(c.seed) + "," +
         std::to_string(r.epidemic_count) + "\n";
    return s;
}

struct SchemaOptions {
    std::size_t length = 20;
    double pc = 0.7, pm = 0.01;
    std::string pattern;
    std::size_t generations = 30, trials = 200, population = 100;
    std::uint64_t seed = 1;
    bool elitism = false;
    std::string out;
};

int run_schema(const SchemaOptions& o) {
    const auto s = schema::Schema::parse(o.pattern);
    if (s.length() != o.length) {
        throw ConfigError("schema length " + std::to_string(s.length()) + " does not match --length " +
                          std::to_string(o.length));
    }
    if (o.length < 2) throw ConfigError("--length must be at least 2");
    schema::GAParams params{o.pc, o.pm, o.elitism, o.seed};
    params.validate();

    RngStream rng(o.seed);
    auto pop = schema::random_population(o.population, o.length, schema::onemax_fitness, rng);
    if (schema::instance_count(s, pop) == 0) {
        // Plant one instance so the experiment has something to track.
        for (std::size_t i = 0; i < o.length; ++i) {
            if (s.symbols()[i] != schema::Symbol::any) pop.members[0][i] = s.symbols()[i] == schema::Symbol::one;
        }
    }
    const auto report = schema::schema_growth_experiment(pop, s, params, o.generations, o.trials);

    std::string csv = "generation,valid_trials,mean_observed,mean_bound,mean_difference,standard_error,satisfied\n";
    for (const auto& g : report.generations) {
        csv += std::to_string(g.generation) + "," + std::to_string(g.valid_trials) + "," +
               harness::format_fixed(g.mean_observed) + "," + harness::format_fixed(g.mean_bound) + "," +
               harness::format_fixed(g.mean_difference) + "," + harness::format_fixed(g.standard_error) + "," +
               (g.satisfied ? "1" : "0") + "\n";
    }
    if (o.out.empty()) {
        std::cout << csv;
    } else {
        harness::write_text(o.out, csv);
    }
    std::cerr << "schema " << s.str() << ": order " << schema::order(s) << ", defining length "
              << schema::defining_length(s) << ", bound satisfied in " << report.fraction_satisfied * 100.0
              << "% of generations\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Viral Search global optimizer"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Optimise one benchmark function");
    add_run_options(run_cmd, run_opts, false);

    RunOptions trace_opts;
    auto* trace_cmd = app.add_subcommand("trace", "Run and export the per-generation convergence trace");
    add_run_options(trace_cmd, trace_opts, true);

    std::string bench_spec, bench_out, bench_format = "csv";
    std::size_t bench_repeat = 1;
    std::uint64_t bench_seed = 1;
    bool bench_no_timing = false;
    auto* bench_cmd = app.add_subcommand("bench", "Reproduce one of the built-in experiment tables");
    bench_cmd->add_option("--spec", bench_spec, "Experiment spec")
        ->required()
        ->check(CLI::IsMember(harness::builtin_spec_names()));
    bench_cmd->add_option("--repeat", bench_repeat, "Seeded runs per grid cell");
    bench_cmd->add_option("--seed", bench_seed, "First seed");
    bench_cmd->add_option("--out", bench_out, "Output path")->required();
    bench_cmd->add_option("--format", bench_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_flag("--no-timing", bench_no_timing, "Write 0 in the time column (byte-reproducible output)");

    SchemaOptions schema_opts;
    auto* schema_cmd = app.add_subcommand("schema", "Check the schema growth bound on a OneMax GA");
    schema_cmd->add_option("--length", schema_opts.length, "String length m")->required();
    schema_cmd->add_option("--pc", schema_opts.pc, "Crossover probability")->required();
    schema_cmd->add_option("--pm", schema_opts.pm, "Per-bit mutation probability")->required();
    schema_cmd->add_option("--schema", schema_opts.pattern, "Pattern over 0, 1 and *")->required();
    schema_cmd->add_option("--generations", schema_opts.generations, "Generations")->required();
    schema_cmd->add_option("--trials", schema_opts.trials, "Independent trials")->required();
    schema_cmd->add_option("--pop", schema_opts.population, "Population size");
    schema_cmd->add_option("--seed", schema_opts.seed, "RNG seed");
    schema_cmd->add_flag("--elitism", schema_opts.elitism, "Copy the best parent over the worst child");
    schema_cmd->add_option("--out", schema_opts.out, "CSV output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run_cmd) {
            const auto p = prepare(run_opts);
            const auto result = execute(p, run_opts.parallel);
            print_summary(p, result);
            if (!run_opts.out.empty()) {
                harness::write_text(run_opts.out, run_opts.format == "json" ? run_json(p, result) : run_csv(p, result));
            }
        } else if (*trace_cmd) {
            const auto p = prepare(trace_opts);
            const auto result = execute(p, trace_opts.parallel);
            print_summary(p, result);
            harness::trace_export(result, trace_opts.out);
        } else if (*bench_cmd) {
            auto spec = harness::builtin_spec(bench_spec);
            spec.repeat = bench_repeat;
            spec.seed_base = bench_seed;
            spec.output_path = bench_out;
            spec.format = harness::parse_format(bench_format);
            spec.record_timing = !bench_no_timing;
            const auto report = harness::run_experiment(spec);
            for (const auto& row : report.rows) {
                if (row.kind != "median") continue;
                std::printf("%s", spec.name.c_str());
                for (std::size_t k = 0; k < row.swept.size(); ++k) {
                    std::printf(" %s=%g", report.swept_names[k].c_str(), row.swept[k]);
                }
                std::printf(" median=%.6f\n", row.value);
            }
        } else if (*schema_cmd) {
            return run_schema(schema_opts);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ContractError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
