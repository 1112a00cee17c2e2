#pragma once

#include "edrpav/cross_validation.hpp"
#include "edrpav/datagen.hpp"
#include "edrpav/pav.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace edrpav {

// A method entered in an experiment: the personalized calibration ("pav")
// or K-fold cross-validation ("cv5", "cv10", ...).
struct MethodSpec {
    enum class Kind { pav, cv };
    Kind kind = Kind::pav;
    int folds = 0;  // cv only

    std::string name() const;
};

// Parses a comma-separated method list such as "pav,cv5,cv10". The bare
// token "cv" uses `default_folds`.
std::vector<MethodSpec> parse_methods(const std::string& spec, int default_folds = 5);

struct MethodRecord {
    std::string method;
    double mean_error = 0.0;
    double sd_error = 0.0;
    double seconds = 0.0;          // 0 when timing was not measured
    double scaled_runtime = 0.0;   // seconds / pav seconds; 1.0 for pav
    std::uint64_t factorizations = 0;
    std::vector<double> errors;    // per subject, replications concatenated
};

struct ExperimentReport {
    std::vector<MethodRecord> methods;
    nlohmann::json metadata;  // config echo, seeds, grid, invocation
    bool timing_measured = false;
};

struct StudyOptions {
    bool measure_timing = false;  // off: timing fields stay 0 and reports are byte-reproducible
    int threads = 1;
    SelectionMode mode = SelectionMode::scan;
    std::uint64_t seed = 0;       // fold seed for real-data runs
    std::string invocation;       // echoed into report metadata
};

// One full calibration pass: factorize, sweep the grid, rewrite the tuning
// scale, then pick a tuning per subject.
struct PipelineResult {
    EdrPath path;
    std::vector<PavSelection> selections;  // one per subject
    double seconds = 0.0;
    std::uint64_t factorizations = 0;
};

PipelineResult run_pipeline(const RegressionProblem& problem, const TuningGrid& grid,
                            const std::vector<SubjectQuery>& subjects,
                            SelectionMode mode = SelectionMode::scan, int threads = 1);

// Synthetic study: regenerates a problem per replication, runs every
// method, and pools per-subject errors |z . (beta_true - beta_hat)|.
ExperimentReport run_simulation_study(const SimConfig& config,
                                      const std::vector<MethodSpec>& methods,
                                      int replications, const StudyOptions& options = {});

enum class EvalMode { in_sample, leave_one_out };

// Real-data evaluation with each sample's own covariate row as the query
// vector; errors are |y_i - x_i . beta_hat|. leave_one_out refits the whole
// pipeline without row i before predicting it.
ExperimentReport run_real_data(const RegressionProblem& problem, const TuningGrid& grid,
                               EvalMode mode, const std::vector<MethodSpec>& methods,
                               const StudyOptions& options = {});

enum class ReportFormat { csv, json };

// CSV: header method,mean_error,sd_error,seconds,scaled_runtime and one row
// per method. JSON: full metadata plus per-subject error vectors, enough to
// replay the experiment.
void emit_report(const ExperimentReport& report, const std::string& path, ReportFormat format);
std::string report_to_csv(const ExperimentReport& report);
nlohmann::json report_to_json(const ExperimentReport& report);

ExperimentReport load_report_json(const std::string& path);

// Reruns a simulation study from the metadata block of a JSON report;
// the result must reproduce the recorded error vectors exactly.
ExperimentReport replay_simulation(const nlohmann::json& report_json);

nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& j);

}  // namespace edrpav
