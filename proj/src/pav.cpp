#include "edrpav/pav.hpp"

#include "edrpav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace edrpav {

SubjectQuery::SubjectQuery(Vector covariates) : z(std::move(covariates)) {
    if (z.size() == 0 || !z.allFinite()) throw Error("subject vector must be finite and nonempty");
    norm_z = z.norm();
    if (norm_z <= 1e-14) throw Error("subject vector has zero norm");
}

double correlation_factor(const SubjectQuery& subject, const Vector& estimate) {
    const double norm = estimate.norm();
    if (norm <= 1e-14) throw ZeroEstimateError();
    if (estimate.size() != subject.z.size()) throw Error("estimate and subject sizes disagree");
    const double c = std::abs(subject.z.dot(estimate)) / (subject.norm_z * norm);
    return std::clamp(c, 0.0, 1.0);
}

std::vector<ScheduleEntry> sort_schedule(const EdrPath& path, const SubjectQuery& subject) {
    if (path.size() == 0) throw EmptyPathError();
    if (subject.z.size() != path.ridge.estimates.rows())
        throw Error("subject and path dimensions disagree");

    std::vector<ScheduleEntry> schedule(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const EdrPoint& pt = path.points[i];
        const double proj = subject.z.dot(path.estimate(i));
        const double corr = std::clamp(std::abs(proj) / (subject.norm_z * pt.estimate_norm), 0.0, 1.0);
        schedule[i] = ScheduleEntry{i, pt.r, corr, corr * pt.r, proj};
    }
    std::stable_sort(schedule.begin(), schedule.end(),
                     [](const ScheduleEntry& a, const ScheduleEntry& b) {
                         if (a.weighted != b.weighted) return a.weighted < b.weighted;
                         return a.r < b.r;  // ties go to the smaller tuning
                     });
    return schedule;
}

namespace {

// |z . (beta_a - beta_b)| - (c_a r_a + c_b r_b) ||z|| <= 0 on cached entries.
inline bool entry_test(const ScheduleEntry& a, const ScheduleEntry& b, double norm_z) {
    return std::abs(a.projection - b.projection) - (a.weighted + b.weighted) * norm_z <= 0.0;
}

}  // namespace

bool pairwise_test(const EdrPath& path, const SubjectQuery& subject, std::size_t i, std::size_t j) {
    if (i >= path.size() || j >= path.size()) throw Error("pairwise_test index out of range");
    const double proj_i = subject.z.dot(path.estimate(i));
    const double proj_j = subject.z.dot(path.estimate(j));
    const double ci = std::clamp(std::abs(proj_i) / (subject.norm_z * path.points[i].estimate_norm), 0.0, 1.0);
    const double cj = std::clamp(std::abs(proj_j) / (subject.norm_z * path.points[j].estimate_norm), 0.0, 1.0);
    const double lhs = std::abs(proj_i - proj_j) -
                       (ci * path.points[i].r + cj * path.points[j].r) * subject.norm_z;
    return lhs <= 0.0;
}

PavSelection select_tuning(const EdrPath& path, const SubjectQuery& subject, SelectionMode mode) {
    PavSelection sel;
    sel.schedule = sort_schedule(path, subject);
    const std::size_t m = sel.schedule.size();
    sel.admissible.assign(m, 0);

    std::size_t chosen = 0;
    if (mode == SelectionMode::scan) {
        // Walk down from the largest weighted tuning; at index k test against
        // every index above. The first failing index ends the walk and the
        // point just above it is kept. The top index always passes its own test.
        for (std::size_t k = m; k-- > 0;) {
            bool pass = true;
            for (std::size_t j = k; j < m && pass; ++j)
                pass = entry_test(sel.schedule[k], sel.schedule[j], subject.norm_z);
            if (!pass) {
                chosen = k + 1;
                break;
            }
        }
        for (std::size_t k = chosen; k < m; ++k) sel.admissible[k] = 1;
    } else {
        // Validation mode: evaluate every upward test without early exit,
        // then mark indices whose whole suffix is failure-free.
        std::vector<std::uint8_t> pass(m, 1);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = k; j < m; ++j)
                if (!entry_test(sel.schedule[k], sel.schedule[j], subject.norm_z)) pass[k] = 0;
        bool suffix = true;
        for (std::size_t k = m; k-- > 0;) {
            suffix = suffix && pass[k] != 0;
            sel.admissible[k] = suffix ? 1 : 0;
        }
        chosen = m - 1;
        for (std::size_t k = 0; k < m; ++k)
            if (sel.admissible[k]) {
                chosen = k;
                break;
            }
    }

    const ScheduleEntry& e = sel.schedule[chosen];
    sel.chosen_index = chosen;
    sel.chosen_r = e.r;
    sel.chosen_t = path.points[e.point].t;
    sel.prediction = e.projection;
    sel.bound = e.weighted * subject.norm_z;
    return sel;
}

OracleDiagnostics oracle_tuning(const EdrPath& path, const SubjectQuery& subject,
                                const RegressionProblem& problem, SelectionMode mode) {
    if (!problem.truth) throw Error("oracle diagnostics require ground truth");
    if (problem.design.cols() != subject.z.size())
        throw Error("subject and problem dimensions disagree");

    const Vector xz = problem.design.values * subject.z;
    const double q = 2.0 * std::abs(xz.dot(problem.truth->noise));

    const auto schedule = sort_schedule(path, subject);
    OracleDiagnostics diag;
    diag.lower_bound_rhs.assign(path.size(), std::numeric_limits<double>::infinity());

    bool found = false;
    std::size_t best = 0;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const ScheduleEntry& e = schedule[k];
        if (e.corr > 0.0)
            diag.lower_bound_rhs[e.point] = q / (e.corr * subject.norm_z);
        else if (q == 0.0)
            diag.lower_bound_rhs[e.point] = 0.0;
        // Admissible iff r >= rhs, i.e. c r ||z|| >= q; the schedule is sorted
        // ascending in c r, so the first admissible entry is the minimizer.
        if (!found && e.weighted * subject.norm_z >= q) {
            best = k;
            found = true;
        }
    }
    if (!found) throw NoAdmissiblePointError();

    diag.r_oracle = schedule[best].r;
    diag.oracle_point = schedule[best].point;
    diag.oracle_bound = schedule[best].weighted * subject.norm_z;

    const PavSelection sel = select_tuning(path, subject, mode);
    diag.selected_error = std::abs(subject.z.dot(problem.truth->beta) - sel.prediction);
    if (diag.oracle_bound > 0.0)
        diag.optimality_ratio = diag.selected_error / diag.oracle_bound;
    else
        diag.optimality_ratio =
            diag.selected_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diag;
}

double gaussian_bound(double sigma, int n, double delta, double norm_z) {
    if (!(sigma > 0.0)) throw Error("sigma must be positive");
    if (n < 1) throw Error("n must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0, 1)");
    if (!(norm_z >= 0.0)) throw Error("norm_z must be nonnegative");
    return 3.0 * sigma * std::sqrt(8.0 * std::log(2.0 / delta) / n) * norm_z;
}

}  // namespace edrpav
