#pragma once

// Shared fixtures and independent oracles for the test suite. Oracles avoid
// the library code paths: extended-precision norms, normal-equation solves,
// and literal re-implementations of the selection rules.

#include "edrpav/cross_validation.hpp"
#include "edrpav/datagen.hpp"
#include "edrpav/edr_path.hpp"
#include "edrpav/linalg.hpp"
#include "edrpav/pav.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace support {

using edrpav::DesignMatrix;
using edrpav::EdrPath;
using edrpav::FoldPlan;
using edrpav::Index;
using edrpav::Matrix;
using edrpav::RegressionProblem;
using edrpav::ScheduleEntry;
using edrpav::SubjectQuery;
using edrpav::TuningGrid;
using edrpav::Vector;

inline Matrix random_matrix(Index n, Index p, std::uint64_t seed, double mean = 0.0,
                            double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(mean, sd);
    Matrix m(n, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < n; ++i) m(i, j) = gauss(rng);
    return m;
}

inline Vector random_vector(Index n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sd);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

// Square orthogonal design via QR of a random matrix; X^T X = I.
inline DesignMatrix orthonormal_design(Index n, std::uint64_t seed) {
    const Matrix raw = random_matrix(n, n, seed);
    Eigen::HouseholderQR<Matrix> qr(raw);
    Matrix q = qr.householderQ();
    return edrpav::as_design(std::move(q));
}

// Normalized random design with a standard normal response; no ground truth.
inline RegressionProblem random_problem(Index n, Index p, std::uint64_t seed) {
    RegressionProblem problem;
    problem.design = edrpav::normalize_columns(random_matrix(n, p, seed));
    problem.response = random_vector(n, seed ^ 0x9E37u);
    return problem;
}

// Euclidean norm accumulated in extended precision; independent of Eigen.
inline double precise_norm(const Vector& v) {
    long double sum = 0.0L;
    for (Index i = 0; i < v.size(); ++i)
        sum += static_cast<long double>(v[i]) * static_cast<long double>(v[i]);
    return static_cast<double>(std::sqrt(sum));
}

// Ridge solution straight from the normal equations, no SVD involved.
inline Vector direct_ridge(const Matrix& x, const Vector& y, double t) {
    const Index p = x.cols();
    Matrix gram = x.transpose() * x;
    gram.diagonal().array() += t;
    return gram.ldlt().solve(x.transpose() * y);
}

inline bool schedule_pair_passes(const ScheduleEntry& a, const ScheduleEntry& b, double norm_z) {
    return std::abs(a.projection - b.projection) - (a.weighted + b.weighted) * norm_z <= 0.0;
}

// Literal downward walk: evaluate every upward test product, walk from the
// top while it stays nonzero, and step back up one index after a failure.
inline std::size_t brute_force_scan(const std::vector<ScheduleEntry>& schedule, double norm_z) {
    const std::size_t m = schedule.size();
    std::vector<int> s(m, 1);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = k; j < m; ++j)
            if (!schedule_pair_passes(schedule[k], schedule[j], norm_z)) s[k] = 0;
    std::size_t i = m - 1;
    while (s[i] != 0 && i > 0) --i;
    return s[i] != 0 ? i : i + 1;
}

// Full admissible-set evaluation: index i qualifies when every pair at or
// above it passes; the smallest qualifying index wins.
inline std::size_t brute_force_full(const std::vector<ScheduleEntry>& schedule, double norm_z) {
    const std::size_t m = schedule.size();
    for (std::size_t i = 0; i < m; ++i) {
        bool ok = true;
        for (std::size_t j = i; j < m && ok; ++j)
            for (std::size_t k = j; k < m && ok; ++k)
                ok = schedule_pair_passes(schedule[j], schedule[k], norm_z);
        if (ok) return i;
    }
    return m - 1;  // unreachable: the top index always qualifies
}

// Cross-validation errors recomputed from scratch with per-fold
// normal-equation solves.
inline std::vector<double> naive_cv_errors(const RegressionProblem& problem,
                                           const TuningGrid& grid, const FoldPlan& plan) {
    const Index n = problem.n_samples();
    std::vector<double> sse(grid.values.size(), 0.0);
    for (int k = 0; k < plan.folds; ++k) {
        std::vector<Index> train, held;
        for (Index i = 0; i < n; ++i)
            (plan.assignments[static_cast<std::size_t>(i)] == k ? held : train).push_back(i);
        Matrix x_train(static_cast<Index>(train.size()), problem.n_covariates());
        Vector y_train(static_cast<Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            x_train.row(static_cast<Index>(i)) = problem.design.values.row(train[i]);
            y_train[static_cast<Index>(i)] = problem.response[train[i]];
        }
        for (std::size_t g = 0; g < grid.values.size(); ++g) {
            const Vector beta = direct_ridge(x_train, y_train, grid.values[g]);
            for (Index i : held) {
                const double pred = problem.design.values.row(i).dot(beta);
                sse[g] += (problem.response[i] - pred) * (problem.response[i] - pred);
            }
        }
    }
    for (double& v : sse) v /= static_cast<double>(n);
    return sse;
}

}  // namespace support
