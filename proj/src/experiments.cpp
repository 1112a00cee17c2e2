#include "edrpav/experiments.hpp"

#include "edrpav/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

namespace edrpav {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

EdrPath evaluation_path(const RegressionProblem& problem, const TuningGrid& grid) {
    return build_edr_path(build_ridge_path(problem.design, problem.response, grid), problem);
}

// Mean and sample standard deviation of the pooled errors.
std::pair<double, double> error_moments(const std::vector<double>& errors) {
    const double n = static_cast<double>(errors.size());
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= n;
    if (errors.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

std::string mode_name(SelectionMode mode) {
    return mode == SelectionMode::scan ? "scan" : "full_pairs";
}

SelectionMode mode_from_name(const std::string& name) {
    if (name == "scan") return SelectionMode::scan;
    if (name == "full_pairs") return SelectionMode::full_pairs;
    throw Error("unknown selection mode '" + name + "'");
}

// Per-(method, replication) raw measurements before aggregation.
struct MethodAccumulator {
    std::vector<double> errors;
    std::vector<double> seconds;          // one slot per replication / trial
    std::vector<std::uint64_t> factorizations;
};

ExperimentReport assemble_report(const std::vector<MethodSpec>& methods,
                                 std::vector<MethodAccumulator> acc, bool timing_measured,
                                 json metadata) {
    double pav_seconds = 0.0;
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
        if (methods[mi].kind == MethodSpec::Kind::pav) {
            for (double s : acc[mi].seconds) pav_seconds += s;
            break;
        }

    ExperimentReport report;
    report.timing_measured = timing_measured;
    report.metadata = std::move(metadata);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodRecord rec;
        rec.method = methods[mi].name();
        std::tie(rec.mean_error, rec.sd_error) = error_moments(acc[mi].errors);
        rec.errors = std::move(acc[mi].errors);
        for (std::uint64_t f : acc[mi].factorizations) rec.factorizations += f;
        if (timing_measured) {
            for (double s : acc[mi].seconds) rec.seconds += s;
            rec.scaled_runtime = pav_seconds > 0.0 ? rec.seconds / pav_seconds : 0.0;
        }
        report.methods.push_back(std::move(rec));
    }
    return report;
}

}  // namespace

std::string MethodSpec::name() const {
    return kind == Kind::pav ? "pav" : "cv" + std::to_string(folds);
}

std::vector<MethodSpec> parse_methods(const std::string& spec, int default_folds) {
    std::vector<MethodSpec> methods;
    std::string token;
    std::istringstream stream(spec);
    while (std::getline(stream, token, ',')) {
        token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
        std::transform(token.begin(), token.end(), token.begin(), ::tolower);
        if (token.empty()) continue;
        if (token == "pav") {
            methods.push_back({MethodSpec::Kind::pav, 0});
        } else if (token == "cv") {
            methods.push_back({MethodSpec::Kind::cv, default_folds});
        } else if (token.rfind("cv", 0) == 0) {
            int folds = 0;
            try {
                std::size_t used = 0;
                folds = std::stoi(token.substr(2), &used);
                if (used != token.size() - 2) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw Error("unknown method '" + token + "'");
            }
            if (folds < 2) throw Error("cross-validation needs at least 2 folds");
            methods.push_back({MethodSpec::Kind::cv, folds});
        } else {
            throw Error("unknown method '" + token + "'");
        }
    }
    if (methods.empty()) throw Error("no methods requested");
    return methods;
}

PipelineResult run_pipeline(const RegressionProblem& problem, const TuningGrid& grid,
                            const std::vector<SubjectQuery>& subjects, SelectionMode mode,
                            int threads) {
    if (subjects.empty()) throw Error("no subjects given");

    PipelineResult result;
    const std::uint64_t f0 = svd_factorization_count();
    const auto t0 = Clock::now();

    result.path = evaluation_path(problem, grid);
    result.selections.resize(subjects.size());
    detail::parallel_for(subjects.size(), threads, [&](std::size_t i) {
        result.selections[i] = select_tuning(result.path, subjects[i], mode);
    });

    result.seconds = seconds_between(t0, Clock::now());
    result.factorizations = svd_factorization_count() - f0;
    return result;
}

ExperimentReport run_simulation_study(const SimConfig& config,
                                      const std::vector<MethodSpec>& methods, int replications,
                                      const StudyOptions& options) {
    config.validate();
    if (replications < 1) throw Error("replications must be at least 1");
    if (methods.empty()) throw Error("no methods requested");

    const std::size_t n_subjects = static_cast<std::size_t>(config.test_subjects);
    const std::size_t reps = static_cast<std::size_t>(replications);

    std::vector<MethodAccumulator> acc(methods.size());
    for (auto& a : acc) {
        a.errors.resize(reps * n_subjects);
        a.seconds.resize(reps, 0.0);
        a.factorizations.resize(reps, 0);
    }

    bool has_pav = false;
    for (const auto& m : methods) has_pav |= m.kind == MethodSpec::Kind::pav;

    detail::parallel_for(reps, options.threads, [&](std::size_t rep) {
        SimConfig rep_config = config;
        rep_config.seed = mix_seed(config.seed, rep);
        const SyntheticData data = generate_synthetic(rep_config);
        const Index n = data.problem.n_samples();

        std::vector<double> subject_targets(n_subjects);  // z . beta_true
        for (std::size_t s = 0; s < n_subjects; ++s)
            subject_targets[s] = data.subjects[s].z.dot(data.problem.truth->beta);

        // The full-data path feeds both the calibration and the evaluation of
        // any cross-validated tuning; only the calibration run is timed.
        PipelineResult pav;
        EdrPath untimed_path;
        if (has_pav)
            pav = run_pipeline(data.problem, data.grid, data.subjects, options.mode, 1);
        else
            untimed_path = evaluation_path(data.problem, data.grid);
        const EdrPath& eval = has_pav ? pav.path : untimed_path;

        bool pav_recorded = false;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            double* errors = &acc[mi].errors[rep * n_subjects];
            if (methods[mi].kind == MethodSpec::Kind::pav) {
                for (std::size_t s = 0; s < n_subjects; ++s)
                    errors[s] = std::abs(subject_targets[s] - pav.selections[s].prediction);
                if (!pav_recorded) {  // a repeated pav entry reuses the same run
                    acc[mi].seconds[rep] = pav.seconds;
                    acc[mi].factorizations[rep] = pav.factorizations;
                    pav_recorded = true;
                }
            } else {
                const std::uint64_t f0 = svd_factorization_count();
                const auto t0 = Clock::now();
                const FoldPlan plan = make_folds(static_cast<int>(n), methods[mi].folds,
                                                 mix_seed(rep_config.seed, 0xCF00u + methods[mi].folds));
                const CvResult cv = cv_select(data.problem, data.grid, plan);
                acc[mi].seconds[rep] = seconds_between(t0, Clock::now());
                acc[mi].factorizations[rep] = svd_factorization_count() - f0;

                const Vector estimate = eval.ridge.estimates.col(static_cast<Index>(cv.chosen_index));
                for (std::size_t s = 0; s < n_subjects; ++s)
                    errors[s] = std::abs(subject_targets[s] - data.subjects[s].z.dot(estimate));
            }
        }
    });

    json metadata;
    metadata["kind"] = "simulation";
    metadata["config"] = sim_config_to_json(config);
    metadata["replications"] = replications;
    json names = json::array();
    for (const auto& m : methods) names.push_back(m.name());
    metadata["methods"] = names;
    metadata["selection_mode"] = mode_name(options.mode);
    metadata["threads"] = options.threads;
    metadata["timing_measured"] = options.measure_timing;
    if (!options.invocation.empty()) metadata["invocation"] = options.invocation;

    return assemble_report(methods, std::move(acc), options.measure_timing, std::move(metadata));
}

ExperimentReport run_real_data(const RegressionProblem& problem, const TuningGrid& grid,
                               EvalMode mode, const std::vector<MethodSpec>& methods,
                               const StudyOptions& options) {
    const Index n = problem.n_samples();
    if (methods.empty()) throw Error("no methods requested");
    if (n < 3) throw Error("need at least 3 samples");

    bool has_pav = false;
    for (const auto& m : methods) has_pav |= m.kind == MethodSpec::Kind::pav;

    std::vector<MethodAccumulator> acc(methods.size());

    if (mode == EvalMode::in_sample) {
        for (auto& a : acc) {
            a.errors.resize(static_cast<std::size_t>(n));
            a.seconds.resize(1, 0.0);
            a.factorizations.resize(1, 0);
        }

        std::vector<SubjectQuery> subjects;
        subjects.reserve(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i)
            subjects.emplace_back(Vector(problem.design.values.row(i).transpose()));

        PipelineResult pav;
        EdrPath untimed_path;
        if (has_pav)
            pav = run_pipeline(problem, grid, subjects, options.mode, options.threads);
        else
            untimed_path = evaluation_path(problem, grid);
        const EdrPath& eval = has_pav ? pav.path : untimed_path;

        bool pav_recorded = false;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            if (methods[mi].kind == MethodSpec::Kind::pav) {
                for (Index i = 0; i < n; ++i)
                    acc[mi].errors[static_cast<std::size_t>(i)] =
                        std::abs(problem.response[i] - pav.selections[static_cast<std::size_t>(i)].prediction);
                if (!pav_recorded) {
                    acc[mi].seconds[0] = pav.seconds;
                    acc[mi].factorizations[0] = pav.factorizations;
                    pav_recorded = true;
                }
            } else {
                const std::uint64_t f0 = svd_factorization_count();
                const auto t0 = Clock::now();
                const FoldPlan plan = make_folds(static_cast<int>(n), methods[mi].folds,
                                                 mix_seed(options.seed, 0xCF00u + methods[mi].folds));
                const CvResult cv = cv_select(problem, grid, plan);
                acc[mi].seconds[0] = seconds_between(t0, Clock::now());
                acc[mi].factorizations[0] = svd_factorization_count() - f0;

                const Vector pred =
                    problem.design.values * eval.ridge.estimates.col(static_cast<Index>(cv.chosen_index));
                for (Index i = 0; i < n; ++i)
                    acc[mi].errors[static_cast<std::size_t>(i)] = std::abs(problem.response[i] - pred[i]);
            }
        }
    } else {
        const std::size_t trials = static_cast<std::size_t>(n);
        for (auto& a : acc) {
            a.errors.resize(trials);
            a.seconds.resize(trials, 0.0);
            a.factorizations.resize(trials, 0);
        }

        detail::parallel_for(trials, options.threads, [&](std::size_t trial) {
            const Index held = static_cast<Index>(trial);

            RegressionProblem sub;
            sub.design.values.resize(n - 1, problem.n_covariates());
            sub.design.column_norms = problem.design.column_norms;
            sub.response.resize(n - 1);
            Index dst = 0;
            for (Index i = 0; i < n; ++i) {
                if (i == held) continue;
                sub.design.values.row(dst) = problem.design.values.row(i);
                sub.response[dst] = problem.response[i];
                ++dst;
            }

            const std::vector<SubjectQuery> subjects{
                SubjectQuery(Vector(problem.design.values.row(held).transpose()))};
            const double target = problem.response[held];

            PipelineResult pav;
            EdrPath untimed_path;
            if (has_pav)
                pav = run_pipeline(sub, grid, subjects, options.mode, 1);
            else
                untimed_path = evaluation_path(sub, grid);
            const EdrPath& eval = has_pav ? pav.path : untimed_path;

            bool pav_recorded = false;
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                if (methods[mi].kind == MethodSpec::Kind::pav) {
                    acc[mi].errors[trial] = std::abs(target - pav.selections[0].prediction);
                    if (!pav_recorded) {
                        acc[mi].seconds[trial] = pav.seconds;
                        acc[mi].factorizations[trial] = pav.factorizations;
                        pav_recorded = true;
                    }
                } else {
                    const std::uint64_t f0 = svd_factorization_count();
                    const auto t0 = Clock::now();
                    const FoldPlan plan =
                        make_folds(static_cast<int>(n) - 1, methods[mi].folds,
                                   mix_seed(options.seed, (trial + 1) * 0x1000u + methods[mi].folds));
                    const CvResult cv = cv_select(sub, grid, plan);
                    acc[mi].seconds[trial] = seconds_between(t0, Clock::now());
                    acc[mi].factorizations[trial] = svd_factorization_count() - f0;

                    const double pred = problem.design.values.row(held).dot(
                        eval.ridge.estimates.col(static_cast<Index>(cv.chosen_index)));
                    acc[mi].errors[trial] = std::abs(target - pred);
                }
            }
        });
    }

    json metadata;
    metadata["kind"] = "real_data";
    metadata["mode"] = mode == EvalMode::in_sample ? "in_sample" : "leave_one_out";
    metadata["n"] = static_cast<int>(n);
    metadata["p"] = static_cast<int>(problem.n_covariates());
    metadata["grid"] = {{"count", grid.values.size()},
                        {"first", grid.values.front()},
                        {"last", grid.values.back()}};
    json names = json::array();
    for (const auto& m : methods) names.push_back(m.name());
    metadata["methods"] = names;
    metadata["selection_mode"] = mode_name(options.mode);
    metadata["threads"] = options.threads;
    metadata["seed"] = options.seed;
    metadata["timing_measured"] = options.measure_timing;
    if (!options.invocation.empty()) metadata["invocation"] = options.invocation;

    return assemble_report(methods, std::move(acc), options.measure_timing, std::move(metadata));
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string csv = "method,mean_error,sd_error,seconds,scaled_runtime\n";
    for (const auto& rec : report.methods) {
        csv += rec.method;
        csv += ',';
        csv += format_double("%.17g", rec.mean_error);
        csv += ',';
        csv += format_double("%.17g", rec.sd_error);
        csv += ',';
        csv += format_double("%.6f", rec.seconds);
        csv += ',';
        csv += format_double("%.6f", rec.scaled_runtime);
        csv += '\n';
    }
    return csv;
}

json report_to_json(const ExperimentReport& report) {
    json j;
    j["metadata"] = report.metadata;
    j["timing_measured"] = report.timing_measured;
    json results = json::array();
    for (const auto& rec : report.methods) {
        json r;
        r["method"] = rec.method;
        r["mean_error"] = rec.mean_error;
        r["sd_error"] = rec.sd_error;
        r["seconds"] = rec.seconds;
        r["scaled_runtime"] = rec.scaled_runtime;
        r["factorizations"] = rec.factorizations;
        r["errors"] = rec.errors;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

void emit_report(const ExperimentReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (format == ReportFormat::csv)
        out << report_to_csv(report);
    else
        out << report_to_json(report).dump(2) << '\n';
    if (!out.good()) throw IoError("write to '" + path + "' failed");
}

ExperimentReport load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON report: ") + e.what(), 1, 1);
    }

    ExperimentReport report;
    report.metadata = j.value("metadata", json::object());
    report.timing_measured = j.value("timing_measured", false);
    for (const auto& r : j.value("results", json::array())) {
        MethodRecord rec;
        rec.method = r.value("method", "");
        rec.mean_error = r.value("mean_error", 0.0);
        rec.sd_error = r.value("sd_error", 0.0);
        rec.seconds = r.value("seconds", 0.0);
        rec.scaled_runtime = r.value("scaled_runtime", 0.0);
        rec.factorizations = r.value("factorizations", std::uint64_t{0});
        rec.errors = r.value("errors", std::vector<double>{});
        report.methods.push_back(std::move(rec));
    }
    return report;
}

ExperimentReport replay_simulation(const json& report_json) {
    const json& md = report_json.contains("metadata") ? report_json.at("metadata") : report_json;
    if (md.value("kind", "") != "simulation")
        throw Error("replay requires a simulation report");

    const SimConfig config = sim_config_from_json(md.at("config"));
    std::vector<MethodSpec> methods;
    for (const auto& name : md.at("methods"))
        for (const auto& m : parse_methods(name.get<std::string>())) methods.push_back(m);

    StudyOptions options;
    options.mode = mode_from_name(md.value("selection_mode", "scan"));
    options.measure_timing = false;
    options.threads = 1;
    return run_simulation_study(config, methods, md.at("replications").get<int>(), options);
}

json sim_config_to_json(const SimConfig& config) {
    return json{{"n", config.n},
                {"p", config.p},
                {"snr", config.snr},
                {"mu_mean", config.mu_mean},
                {"mu_variance", config.mu_variance},
                {"mu_granularity",
                 config.mu_granularity == MeanGranularity::per_matrix ? "per_matrix" : "per_column"},
                {"grid", {{"count", config.grid.count},
                          {"min_log10", config.grid.min_log10},
                          {"max_log10", config.grid.max_log10}}},
                {"test_subjects", config.test_subjects},
                {"seed", config.seed}};
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig config;
    config.n = j.value("n", config.n);
    config.p = j.value("p", config.p);
    config.snr = j.value("snr", config.snr);
    config.mu_mean = j.value("mu_mean", config.mu_mean);
    config.mu_variance = j.value("mu_variance", config.mu_variance);
    config.mu_granularity = j.value("mu_granularity", "per_matrix") == std::string("per_column")
                                ? MeanGranularity::per_column
                                : MeanGranularity::per_matrix;
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        config.grid.count = g.value("count", config.grid.count);
        config.grid.min_log10 = g.value("min_log10", config.grid.min_log10);
        config.grid.max_log10 = g.value("max_log10", config.grid.max_log10);
    }
    config.test_subjects = j.value("test_subjects", config.test_subjects);
    config.seed = j.value("seed", config.seed);
    return config;
}

}  // namespace edrpav
