#pragma once

#include "edrpav/types.hpp"

#include <cstdint>

namespace edrpav {

// Thin SVD X = U diag(d) V^T with d sorted nonincreasing.
struct SvdFactors {
    Matrix u;                // n x k
    Vector singular_values;  // length k = min(n, p)
    Matrix v;                // p x k

    // Singular values at or below this threshold are treated as zero when
    // the factorization is inverted.
    double rank_cutoff() const {
        return singular_values.size() > 0 ? 1e-12 * singular_values[0] : 0.0;
    }
    Index rank() const;
};

// Ridge solutions over a tuning grid, all obtained from one factorization:
// beta(t) = V diag(d_i / (d_i^2 + t)) U^T y.
struct RidgePath {
    SvdFactors factors;
    TuningGrid grid;        // ridge scale, sorted ascending
    Matrix estimates;       // p x m, column i solves the ridge problem at grid.values[i]
    Vector estimate_norms;  // cached Euclidean norms of the columns
};

// Rescales every column of `raw` to unit Euclidean norm.
// Throws ZeroColumnError when a column norm falls below 1e-14.
DesignMatrix normalize_columns(const Matrix& raw);

// Thin SVD of the design. Increments the factorization counter.
SvdFactors svd(const DesignMatrix& x);

// Evaluates the ridge solution at every grid point, reusing `factors`.
// The grid must be positive and sorted ascending.
RidgePath ridge_path(const SvdFactors& factors, const Vector& y, const TuningGrid& grid);

// svd + ridge_path in one call: exactly one factorization per path.
RidgePath build_ridge_path(const DesignMatrix& x, const Vector& y, const TuningGrid& grid);

// Number of factorizations performed by the calling thread since it started.
// Used to verify the one-factorization-per-path accounting.
std::uint64_t svd_factorization_count();

}  // namespace edrpav
