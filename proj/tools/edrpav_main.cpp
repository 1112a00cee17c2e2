// Command-line driver: synthetic studies, timing benchmarks, and real-data
// evaluation for the personalized tuning calibration pipeline.

#include "edrpav/errors.hpp"
#include "edrpav/experiments.hpp"
#include "edrpav/matrix_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CommonOptions {
    std::string methods = "pav,cv5,cv10";
    int k_folds = 5;
    int grid_count = 300;
    double grid_min_log10 = -5.0;
    double grid_max_log10 = 5.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    bool definition2_mode = false;
};

struct SimulateOptions : CommonOptions {
    int n = 50;
    int p = 100;
    int reps = 100;
    double snr = 0.5;
    bool mu_per_column = false;
};

struct DataOptions : CommonOptions {
    std::string data;
    std::string response;
};

void add_common_flags(CLI::App& cmd, CommonOptions& opt) {
    cmd.add_option("--methods", opt.methods,
                   "comma-separated methods: pav, cvK (e.g. cv5), or cv for --k-folds folds")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string& value) -> std::string {
                try {
                    edrpav::parse_methods(value);
                } catch (const std::exception& e) {
                    return e.what();
                }
                return {};
            },
            "METHODS"));
    cmd.add_option("--k-folds", opt.k_folds, "fold count used by the bare method token 'cv'")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    cmd.add_option("--grid-count", opt.grid_count, "number of grid points")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    cmd.add_option("--grid-min-log10", opt.grid_min_log10, "log10 of the smallest grid value")
        ->capture_default_str();
    cmd.add_option("--grid-max-log10", opt.grid_max_log10, "log10 of the largest grid value")
        ->capture_default_str();
    cmd.add_option("--seed", opt.seed, "RNG seed (falls back to EDR_PAV_SEED)")
        ->envname("EDR_PAV_SEED")
        ->capture_default_str();
    cmd.add_option("--out", opt.out, "report file path (stdout when omitted)");
    cmd.add_option("--format", opt.format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--threads", opt.threads, "parallelism cap; keep 1 for timing fidelity")
        ->capture_default_str()
        ->check(CLI::Range(1, 4096));
    cmd.add_flag("--definition2-mode", opt.definition2_mode,
                 "evaluate the full admissible set instead of the early-exit scan");
}

void add_simulate_flags(CLI::App& cmd, SimulateOptions& opt) {
    cmd.add_option("--n", opt.n, "samples per synthetic problem")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    cmd.add_option("--p", opt.p, "covariates per synthetic problem")
        ->capture_default_str()
        ->check(CLI::Range(1, 10000000));
    cmd.add_option("--reps", opt.reps, "number of replications")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000000));
    cmd.add_option("--snr", opt.snr, "signal-to-noise ratio Var(X beta) / Var(noise)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--mu-per-column", opt.mu_per_column,
                 "draw one design mean per column instead of one per matrix");
    add_common_flags(cmd, opt);
}

void add_data_flags(CLI::App& cmd, DataOptions& opt) {
    cmd.add_option("--data", opt.data, "delimited matrix file, samples as rows")->required();
    cmd.add_option("--response", opt.response,
                   "response column: 'first', 'last', a 1-based index, or a header name")
        ->required();
    add_common_flags(cmd, opt);
}

std::string join_invocation(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) s += ' ';
        s += argv[i];
    }
    return s;
}

edrpav::StudyOptions study_options(const CommonOptions& opt, bool measure_timing,
                                   const std::string& invocation) {
    edrpav::StudyOptions options;
    options.measure_timing = measure_timing;
    options.threads = opt.threads;
    options.mode = opt.definition2_mode ? edrpav::SelectionMode::full_pairs
                                        : edrpav::SelectionMode::scan;
    options.seed = opt.seed;
    options.invocation = invocation;
    return options;
}

void write_report(const edrpav::ExperimentReport& report, const CommonOptions& opt) {
    const auto format =
        opt.format == "json" ? edrpav::ReportFormat::json : edrpav::ReportFormat::csv;
    if (opt.out.empty()) {
        if (format == edrpav::ReportFormat::csv)
            std::cout << edrpav::report_to_csv(report);
        else
            std::cout << edrpav::report_to_json(report).dump(2) << '\n';
        return;
    }
    edrpav::emit_report(report, opt.out, format);
}

void run_simulate(const SimulateOptions& opt, bool measure_timing, const std::string& invocation) {
    edrpav::SimConfig config;
    config.n = opt.n;
    config.p = opt.p;
    config.snr = opt.snr;
    config.seed = opt.seed;
    config.grid = {opt.grid_count, opt.grid_min_log10, opt.grid_max_log10};
    config.mu_granularity = opt.mu_per_column ? edrpav::MeanGranularity::per_column
                                              : edrpav::MeanGranularity::per_matrix;

    const auto methods = edrpav::parse_methods(opt.methods, opt.k_folds);
    const auto report = edrpav::run_simulation_study(config, methods, opt.reps,
                                                     study_options(opt, measure_timing, invocation));
    write_report(report, opt);
}

void run_on_file(const DataOptions& opt, edrpav::EvalMode mode, const std::string& invocation) {
    edrpav::LoadOptions load_options;
    load_options.response = opt.response;
    edrpav::LoadedMatrix loaded = edrpav::load_matrix(opt.data, load_options);
    if (!loaded.response) throw edrpav::Error("no response column selected");

    edrpav::RegressionProblem problem;
    problem.design = edrpav::normalize_columns(loaded.values);
    problem.response = *loaded.response;

    const auto grid =
        edrpav::TuningGrid::log_spaced(opt.grid_count, opt.grid_min_log10, opt.grid_max_log10);
    const auto methods = edrpav::parse_methods(opt.methods, opt.k_folds);
    const auto report = edrpav::run_real_data(problem, grid, mode, methods,
                                              study_options(opt, false, invocation));
    write_report(report, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edr ridge path with personalized adaptive tuning calibration"};
    app.require_subcommand(1);
    // Config files only work on the root app; keys live in one INI section
    // per subcommand, e.g. [simulate] followed by n=50.
    app.set_config("--config", "",
                   "INI options file with one [subcommand] section per command");

    SimulateOptions simulate_opt;
    SimulateOptions bench_opt;
    DataOptions fit_opt;
    DataOptions loo_opt;

    CLI::App* simulate =
        app.add_subcommand("simulate", "synthetic accuracy study with deterministic reports");
    add_simulate_flags(*simulate, simulate_opt);

    CLI::App* bench =
        app.add_subcommand("bench", "synthetic study with wall-clock timing comparison");
    add_simulate_flags(*bench, bench_opt);

    CLI::App* fit = app.add_subcommand("fit", "in-sample evaluation on a data file");
    add_data_flags(*fit, fit_opt);

    CLI::App* loo = app.add_subcommand("loo", "leave-one-out evaluation on a data file");
    add_data_flags(*loo, loo_opt);

    // Lets root-level options such as --config appear after the subcommand.
    for (CLI::App* sub : {simulate, bench, fit, loo}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage errors
    }

    const std::string invocation = join_invocation(argc, argv);
    try {
        if (simulate->parsed())
            run_simulate(simulate_opt, false, invocation);
        else if (bench->parsed())
            run_simulate(bench_opt, true, invocation);
        else if (fit->parsed())
            run_on_file(fit_opt, edrpav::EvalMode::in_sample, invocation);
        else if (loo->parsed())
            run_on_file(loo_opt, edrpav::EvalMode::leave_one_out, invocation);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;  // data or numeric errors
    }
    return 0;
}
