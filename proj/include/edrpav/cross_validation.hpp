#pragma once

#include "edrpav/linalg.hpp"

#include <cstdint>
#include <vector>

namespace edrpav {

// Balanced random partition of {0, ..., n-1} into `folds` groups whose
// sizes differ by at most one.
struct FoldPlan {
    int folds = 0;
    std::vector<int> assignments;  // size n, labels in [0, folds)
    std::uint64_t seed = 0;
};

FoldPlan make_folds(int n, int folds, std::uint64_t seed);

struct CvResult {
    double chosen_t = 0.0;
    std::size_t chosen_index = 0;    // grid index of chosen_t
    std::vector<double> mean_errors; // per grid point: held-out MSE pooled over folds
};

// K-fold cross-validation over the ridge grid. Each fold factorizes its
// training block once (K factorizations total); loss is the mean squared
// prediction error pooled over all held-out samples. Ties pick the
// smallest t.
CvResult cv_select(const RegressionProblem& problem, const TuningGrid& grid, const FoldPlan& plan);

}  // namespace edrpav
