#include "edrpav/cross_validation.hpp"

#include "edrpav/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace edrpav {

FoldPlan make_folds(int n, int folds, std::uint64_t seed) {
    if (n < 1) throw Error("need at least one sample");
    if (folds < 2) throw Error("need at least two folds");
    if (folds > n) throw Error("more folds than samples");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    // Round-robin over the shuffled order keeps fold sizes within one.
    FoldPlan plan{folds, std::vector<int>(static_cast<std::size_t>(n)), seed};
    for (int i = 0; i < n; ++i)
        plan.assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i % folds;
    return plan;
}

CvResult cv_select(const RegressionProblem& problem, const TuningGrid& grid, const FoldPlan& plan) {
    const Index n = problem.n_samples();
    const Index p = problem.n_covariates();
    const std::size_t m = grid.values.size();

    if (m == 0) throw EmptyGridError();
    if (static_cast<Index>(plan.assignments.size()) != n)
        throw Error("fold plan does not match the sample count");
    for (int a : plan.assignments)
        if (a < 0 || a >= plan.folds) throw Error("fold label out of range");

    std::vector<double> sse(m, 0.0);
    for (int k = 0; k < plan.folds; ++k) {
        std::vector<Index> train, held;
        for (Index i = 0; i < n; ++i)
            (plan.assignments[static_cast<std::size_t>(i)] == k ? held : train).push_back(i);
        if (held.empty()) throw Error("fold " + std::to_string(k) + " is empty");
        if (train.empty()) throw Error("fold " + std::to_string(k) + " leaves no training samples");

        Matrix x_train(static_cast<Index>(train.size()), p);
        Vector y_train(static_cast<Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            x_train.row(static_cast<Index>(i)) = problem.design.values.row(train[i]);
            y_train[static_cast<Index>(i)] = problem.response[train[i]];
        }

        // One factorization per fold; columns are not renormalized here, the
        // design is normalized once upstream.
        const RidgePath path = build_ridge_path(as_design(std::move(x_train)), y_train, grid);

        Matrix x_held(static_cast<Index>(held.size()), p);
        Vector y_held(static_cast<Index>(held.size()));
        for (std::size_t i = 0; i < held.size(); ++i) {
            x_held.row(static_cast<Index>(i)) = problem.design.values.row(held[i]);
            y_held[static_cast<Index>(i)] = problem.response[held[i]];
        }
        const Matrix pred = x_held * path.estimates;  // held x m
        for (std::size_t j = 0; j < m; ++j)
            sse[j] += (pred.col(static_cast<Index>(j)) - y_held).squaredNorm();
    }

    CvResult result;
    result.mean_errors.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        result.mean_errors[j] = sse[j] / static_cast<double>(n);

    // Strict < keeps the first (smallest t) minimizer on ties.
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j)
        if (result.mean_errors[j] < result.mean_errors[best]) best = j;
    result.chosen_index = best;
    result.chosen_t = grid.values[best];
    return result;
}

}  // namespace edrpav
