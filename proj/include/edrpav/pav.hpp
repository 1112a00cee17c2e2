#pragma once

#include "edrpav/edr_path.hpp"

#include <cstdint>
#include <vector>

namespace edrpav {

// Covariate vector of the subject a personalized prediction is requested
// for. The norm is cached; it must exceed 1e-14.
struct SubjectQuery {
    Vector z;
    double norm_z = 0.0;

    explicit SubjectQuery(Vector covariates);
};

// One row of the calibration schedule: a path point together with its
// correlation factor and the correlation-weighted tuning that orders the
// schedule.
struct ScheduleEntry {
    std::size_t point = 0;     // index into EdrPath::points
    double r = 0.0;
    double corr = 0.0;         // c_z(r) = |z . beta| / (||z|| ||beta||)
    double weighted = 0.0;     // c_z(r) * r
    double projection = 0.0;   // z . beta, cached for the pairwise tests
};

enum class SelectionMode {
    scan,        // downward scan with early exit on the first failing index
    full_pairs,  // evaluates the full admissible set; validation mode
};

struct PavSelection {
    double chosen_r = 0.0;
    double chosen_t = 0.0;                 // ridge counterpart of chosen_r
    std::size_t chosen_index = 0;          // position in the schedule
    std::vector<ScheduleEntry> schedule;   // ascending in weighted tuning
    std::vector<std::uint8_t> admissible;  // parallel to schedule
    double prediction = 0.0;               // z . beta at the chosen tuning
    double bound = 0.0;                    // c * r * ||z|| at the chosen tuning
};

// Diagnostics around the noise-dependent oracle tuning, available when the
// problem carries ground truth.
struct OracleDiagnostics {
    double r_oracle = 0.0;
    std::size_t oracle_point = 0;         // index into EdrPath::points
    std::vector<double> lower_bound_rhs;  // per point: 2 |(Xz).u| / (c ||z||)
    double oracle_bound = 0.0;            // c(r_o) * r_o * ||z||
    double selected_error = 0.0;          // |z . (beta_true - beta(r_hat))|
    double optimality_ratio = 0.0;        // selected_error / oracle_bound
};

// c_z(r) = |z . beta| / (||z|| ||beta||), clamped to [0, 1].
// Throws ZeroEstimateError when ||beta|| <= 1e-14.
double correlation_factor(const SubjectQuery& subject, const Vector& estimate);

// Schedule of every retained path point sorted ascending by c_z(r) * r,
// ties broken toward the smaller r.
std::vector<ScheduleEntry> sort_schedule(const EdrPath& path, const SubjectQuery& subject);

// Admissibility test for path points i and j:
// |z . (beta_i - beta_j)| - (c_i r_i + c_j r_j) ||z|| <= 0.
bool pairwise_test(const EdrPath& path, const SubjectQuery& subject, std::size_t i, std::size_t j);

// Picks the tuning for one subject: walks the schedule from the largest
// weighted tuning downward while every pairwise test against the points
// above keeps passing, and returns the last passing index.
PavSelection select_tuning(const EdrPath& path, const SubjectQuery& subject,
                           SelectionMode mode = SelectionMode::scan);

// Noise-dependent oracle benchmark: smallest weighted tuning among points
// with c(r) r ||z|| >= 2 |(Xz) . u|. Requires problem.truth.
OracleDiagnostics oracle_tuning(const EdrPath& path, const SubjectQuery& subject,
                                const RegressionProblem& problem,
                                SelectionMode mode = SelectionMode::scan);

// Closed-form personalized error bound for Gaussian noise with covariance
// sigma^2 I / n: 3 sigma sqrt(8 log(2/delta) / n) ||z||.
double gaussian_bound(double sigma, int n, double delta, double norm_z);

}  // namespace edrpav
