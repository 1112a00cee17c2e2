#include "edrpav/linalg.hpp"

#include "edrpav/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace edrpav {

namespace {
// Per-thread so parallel experiment replications keep exact per-run counts.
thread_local std::uint64_t g_factorizations = 0;
}  // namespace

std::uint64_t svd_factorization_count() { return g_factorizations; }

Index SvdFactors::rank() const {
    const double cutoff = rank_cutoff();
    Index r = 0;
    for (Index i = 0; i < singular_values.size(); ++i)
        if (singular_values[i] > cutoff) ++r;
    return r;
}

DesignMatrix as_design(Matrix raw) {
    Vector ones = Vector::Ones(raw.cols());
    return DesignMatrix{std::move(raw), std::move(ones)};
}

DesignMatrix normalize_columns(const Matrix& raw) {
    if (raw.rows() < 1 || raw.cols() < 1) throw Error("design matrix must be nonempty");
    if (!raw.allFinite()) throw Error("design matrix has non-finite entries");

    Vector norms = raw.colwise().norm();
    for (Index j = 0; j < norms.size(); ++j)
        if (norms[j] < 1e-14) throw ZeroColumnError(static_cast<std::size_t>(j));

    DesignMatrix out;
    out.values = raw * norms.cwiseInverse().asDiagonal();
    out.column_norms = std::move(norms);
    return out;
}

SvdFactors svd(const DesignMatrix& x) {
    Eigen::BDCSVD<Matrix> dec(x.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
    ++g_factorizations;

    SvdFactors f;
    f.u = dec.matrixU();
    f.singular_values = dec.singularValues();
    f.v = dec.matrixV();
    return f;
}

RidgePath ridge_path(const SvdFactors& factors, const Vector& y, const TuningGrid& grid) {
    const Index n = factors.u.rows();
    const Index p = factors.v.rows();
    const Index k = factors.singular_values.size();
    const Index m = static_cast<Index>(grid.values.size());

    if (m == 0) throw EmptyGridError();
    if (grid.scale != GridScale::ridge) throw Error("ridge_path expects a ridge-scale grid");
    if (y.size() != n) throw Error("response length does not match the design");
    for (Index i = 0; i + 1 < m; ++i)
        if (grid.values[i] > grid.values[i + 1]) throw Error("tuning grid must be sorted ascending");
    for (double t : grid.values)
        if (!(t > 0.0)) throw NonpositiveTuningError(t);

    const Vector w = factors.u.transpose() * y;  // k coordinates of y in the left basis
    const double cutoff = factors.rank_cutoff();

    // Spectral filter per grid point: d_i / (d_i^2 + t), zero off the rank support.
    Matrix coeffs(k, m);
    for (Index j = 0; j < m; ++j) {
        const double t = grid.values[j];
        for (Index i = 0; i < k; ++i) {
            const double d = factors.singular_values[i];
            coeffs(i, j) = d > cutoff ? w[i] * d / (d * d + t) : 0.0;
        }
    }

    RidgePath path;
    path.factors = factors;
    path.grid = grid;
    path.estimates.noalias() = factors.v * coeffs;  // p x m
    if (!path.estimates.allFinite()) throw NumericalFailure("ridge path has non-finite entries");
    path.estimate_norms = path.estimates.colwise().norm();
    return path;
}

RidgePath build_ridge_path(const DesignMatrix& x, const Vector& y, const TuningGrid& grid) {
    return ridge_path(svd(x), y, grid);
}

TuningGrid TuningGrid::log_spaced(int count, double min_log10, double max_log10) {
    if (count < 1) throw EmptyGridError();
    if (!(min_log10 <= max_log10)) throw Error("grid range is inverted");

    TuningGrid grid;
    grid.scale = GridScale::ridge;
    grid.values.resize(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.values[0] = std::pow(10.0, min_log10);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        const double q = min_log10 + (max_log10 - min_log10) * i / (count - 1);
        grid.values[static_cast<std::size_t>(i)] = std::pow(10.0, q);
    }
    return grid;
}

}  // namespace edrpav
