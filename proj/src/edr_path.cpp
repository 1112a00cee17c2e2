#include "edrpav/edr_path.hpp"

#include "edrpav/errors.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace edrpav {

namespace {

// Gradient of the unpenalized loss at `beta`: g = 2 X^T (y - X beta).
// Returns (r, kkt) with r = ||g|| and kkt = ||g - r beta / ||beta|| ||.
std::pair<double, double> map_point(const Matrix& x, const Vector& y, const Vector& beta,
                                    double beta_norm, Vector& residual, Vector& gradient) {
    residual.noalias() = y - x * beta;
    gradient.noalias() = 2.0 * (x.transpose() * residual);
    const double r = gradient.norm();
    const double kkt = (gradient - (r / beta_norm) * beta).norm();
    return {r, kkt};
}

}  // namespace

double map_tuning(double t, const Vector& ridge_estimate, const RegressionProblem& problem) {
    if (!(t > 0.0)) throw NonpositiveTuningError(t);
    if (ridge_estimate.size() != problem.n_covariates())
        throw Error("estimate length does not match the design");
    const double norm = ridge_estimate.norm();
    if (norm < 1e-14) throw ZeroEstimateError();

    Vector residual(problem.n_samples()), gradient(problem.n_covariates());
    return map_point(problem.design.values, problem.response, ridge_estimate, norm,
                     residual, gradient).first;
}

EdrPath build_edr_path(RidgePath path, const RegressionProblem& problem) {
    const Index m = static_cast<Index>(path.grid.values.size());
    if (m == 0) throw EmptyGridError();
    if (path.estimates.cols() != m || problem.design.cols() != path.estimates.rows())
        throw Error("path and problem dimensions disagree");

    EdrPath out;
    out.points.reserve(static_cast<std::size_t>(m));

    Vector residual(problem.n_samples()), gradient(problem.n_covariates());
    std::unordered_set<double> seen;  // exact duplicates on the r scale

    for (Index j = 0; j < m; ++j) {
        const double t = path.grid.values[j];
        const double norm = path.estimate_norms[j];
        if (norm < 1e-14) {
            out.warnings.push_back("dropped grid point t=" + std::to_string(t) +
                                   ": estimate is numerically zero");
            continue;
        }
        const auto [r, kkt] = map_point(problem.design.values, problem.response,
                                        path.estimates.col(j), norm, residual, gradient);
        if (!std::isfinite(r)) throw NumericalFailure("tuning map produced a non-finite value");
        if (!seen.insert(r).second) {
            // Keep the earlier (smaller t) occurrence of a duplicated r.
            out.warnings.push_back("dropped grid point t=" + std::to_string(t) +
                                   ": duplicate mapped tuning");
            continue;
        }
        out.points.push_back(EdrPoint{t, r, j, norm, kkt});
    }

    if (out.points.empty()) throw EmptyPathError();
    out.ridge = std::move(path);
    return out;
}

double edr_objective(const Vector& beta, double r, const RegressionProblem& problem) {
    if (beta.size() != problem.n_covariates())
        throw Error("beta length does not match the design");
    return (problem.response - problem.design.values * beta).squaredNorm() + r * beta.norm();
}

}  // namespace edrpav
