#pragma once

#include "edrpav/linalg.hpp"

#include <string>
#include <vector>

namespace edrpav {

// One grid point of the path after the change of tuning scale. `column`
// indexes the estimate inside the originating ridge path.
struct EdrPoint {
    double t = 0.0;             // ridge tuning
    double r = 0.0;             // mapped edr tuning, r = ||2 X^T (y - X beta)||
    Index column = 0;           // column of RidgePath::estimates
    double estimate_norm = 0.0;
    double kkt_residual = 0.0;  // ||2 X^T (y - X beta) - r beta / ||beta|| ||
};

// Ridge path rewritten on the edr tuning scale. The estimate vectors are
// shared with the underlying ridge path: the minimizer of
// ||y - X b||^2 + r ||b|| at r = phi(t) is the ridge solution at t.
struct EdrPath {
    RidgePath ridge;
    std::vector<EdrPoint> points;       // ascending t; degenerate points dropped
    std::vector<std::string> warnings;  // one note per dropped point

    std::size_t size() const { return points.size(); }
    auto estimate(std::size_t i) const { return ridge.estimates.col(points[i].column); }
};

// Maps a ridge tuning t to the edr scale through the solution it produces:
// r = ||2 X^T (y - X beta)||. Requires t > 0 and a nonzero estimate.
double map_tuning(double t, const Vector& ridge_estimate, const RegressionProblem& problem);

// Applies map_tuning to every path column. Points with a zero estimate are
// dropped with a warning; duplicate r values keep the smallest t. Throws
// EmptyPathError when nothing survives.
EdrPath build_edr_path(RidgePath path, const RegressionProblem& problem);

// Penalized objective ||y - X beta||^2 + r ||beta||.
double edr_objective(const Vector& beta, double r, const RegressionProblem& problem);

}  // namespace edrpav
