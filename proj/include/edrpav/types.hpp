#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace edrpav {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Scale a set of candidate tuning parameters lives on: the ridge scale t
// (squared-norm penalty) or the edr scale r (unsquared-norm penalty).
enum class GridScale { ridge, edr };

// Ordered candidate tuning parameters. Ridge-scale grids are kept sorted
// ascending in t.
struct TuningGrid {
    std::vector<double> values;
    GridScale scale = GridScale::ridge;

    // Log-equispaced grid {10^q} with q running from min_log10 to max_log10
    // in `count` steps.
    static TuningGrid log_spaced(int count, double min_log10, double max_log10);

    std::size_t size() const { return values.size(); }
};

// Design matrix together with the Euclidean norms its columns had before
// unit normalization (all ones when no normalization was applied).
struct DesignMatrix {
    Matrix values;
    Vector column_norms;

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }
};

// Wraps a raw matrix as a design without rescaling its columns.
DesignMatrix as_design(Matrix raw);

// Ground truth carried by synthetic problems: y = X beta + noise exactly.
struct Truth {
    Vector beta;
    Vector noise;
    double sigma = 0.0;  // noise standard deviation used at generation time
};

struct RegressionProblem {
    DesignMatrix design;
    Vector response;
    std::optional<Truth> truth;

    Index n_samples() const { return design.rows(); }
    Index n_covariates() const { return design.cols(); }
};

// Deterministic stream splitter: maps (seed, stream) to an independent
// sub-seed so replications and folds draw from disjoint streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace edrpav
