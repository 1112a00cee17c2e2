#pragma once

#include "edrpav/linalg.hpp"
#include "edrpav/pav.hpp"

#include <cstdint>
#include <vector>

namespace edrpav {

struct GridSpec {
    int count = 300;
    double min_log10 = -5.0;
    double max_log10 = 5.0;
};

TuningGrid make_grid(const GridSpec& spec);

// Whether one design mean is drawn per matrix or one per column.
enum class MeanGranularity { per_matrix, per_column };

struct SimConfig {
    int n = 50;
    int p = 100;
    double snr = 0.5;        // Var(X beta) / Var(noise)
    double mu_mean = 0.0;    // design-mean prior: mu ~ N(mu_mean, mu_variance)
    double mu_variance = 10.0;
    MeanGranularity mu_granularity = MeanGranularity::per_matrix;
    GridSpec grid;
    int test_subjects = 100;
    std::uint64_t seed = 0;

    void validate() const;  // throws Error on out-of-range fields
};

struct SyntheticData {
    RegressionProblem problem;
    std::vector<SubjectQuery> subjects;
    TuningGrid grid;
};

// Synthetic problem: X has i.i.d. N(mu, 1) entries with mu ~ N(0, 10),
// columns normalized to unit norm; beta is a standard normal vector
// projected onto the row space of X; noise is i.i.d. N(0, sigma^2) with
// sigma^2 = Var(X beta) / snr; test subjects are uniform on [-1, 1]^p.
// Identical (config, seed) reproduce the data bitwise.
SyntheticData generate_synthetic(const SimConfig& config);

// Keeps a fixed (already normalized) design and regenerates beta, noise
// and the response with the synthetic protocol.
RegressionProblem generate_semisynthetic(const DesignMatrix& design, double snr,
                                         std::uint64_t seed);

// Orthogonal projection onto the row space of the factorized design,
// spanned by the right singular vectors on the rank support.
Vector project_to_row_space(const SvdFactors& factors, const Vector& beta);

}  // namespace edrpav
