#include "edrpav/errors.hpp"
#include "edrpav/pav.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace edrpav;

namespace {

// Hand-built path with fully controlled estimates and mapped tunings.
EdrPath fabricate_path(Matrix estimates, const std::vector<double>& tunings) {
    EdrPath path;
    path.ridge.estimates = std::move(estimates);
    path.ridge.estimate_norms = path.ridge.estimates.colwise().norm();
    for (std::size_t i = 0; i < tunings.size(); ++i) {
        const Index col = static_cast<Index>(i);
        path.points.push_back(EdrPoint{0.1 * static_cast<double>(i + 1), tunings[i], col,
                                       path.ridge.estimate_norms[col], 0.0});
    }
    return path;
}

EdrPath path_for(const RegressionProblem& problem, const TuningGrid& grid) {
    return build_edr_path(build_ridge_path(problem.design, problem.response, grid), problem);
}

}  // namespace

TEST_CASE("correlation_factor known values") {
    SubjectQuery z(Vector(Eigen::Vector2d(1.0, 1.0)));

    CHECK(correlation_factor(z, Vector(Eigen::Vector2d(2.0, 2.0))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(correlation_factor(z, Vector(Eigen::Vector2d(1.0, -1.0))) == 0.0);
    CHECK(correlation_factor(z, Vector(Eigen::Vector2d(1.0, 0.0))) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    // Antiparallel counts as fully informative through the absolute value.
    CHECK(correlation_factor(z, Vector(Eigen::Vector2d(-3.0, -3.0))) ==
          doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(correlation_factor(z, Vector(Vector::Zero(2))), ZeroEstimateError);
}

TEST_CASE("correlation_factor stays inside [0, 1] on random input") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SubjectQuery z(support::random_vector(12, 1000 + seed));
        const Vector estimate = support::random_vector(12, 2000 + seed);
        const double c = correlation_factor(z, estimate);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("subject query validates its vector") {
    CHECK_THROWS_AS(SubjectQuery{Vector(Vector::Zero(4))}, Error);
    Vector bad(2);
    bad << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(SubjectQuery{bad}, Error);
}

TEST_CASE("sort_schedule orders by weighted tuning with ties to smaller r") {
    // Two points engineered to swap: weighted values 5 and 2.
    Matrix estimates(2, 2);
    estimates.col(0) = Eigen::Vector2d(1.0, 0.0);  // c = 1 against z = e1
    estimates.col(1) = Eigen::Vector2d(0.0, 1.0);  // c = 0 against z = e1
    EdrPath path = fabricate_path(estimates, {5.0, 2.0});
    SubjectQuery z(Vector(Eigen::Vector2d(1.0, 0.0)));

    const auto schedule = sort_schedule(path, z);
    REQUIRE(schedule.size() == 2);
    CHECK(schedule[0].point == 1);  // weighted 0
    CHECK(schedule[1].point == 0);  // weighted 5
    CHECK(schedule[0].weighted == 0.0);
    CHECK(schedule[1].weighted == 5.0);

    // Equal weighted values: the smaller r comes first.
    Matrix tie(2, 2);
    tie.col(0) = Eigen::Vector2d(0.5, std::sqrt(0.75));  // c = 0.5, r = 2 -> weighted 1
    tie.col(1) = Eigen::Vector2d(1.0, 0.0);              // c = 1.0, r = 1 -> weighted 1
    EdrPath tie_path = fabricate_path(tie, {2.0, 1.0});
    const auto tied = sort_schedule(tie_path, z);
    CHECK(tied[0].r == 1.0);
    CHECK(tied[1].r == 2.0);
}

TEST_CASE("sort_schedule is nondecreasing on random paths") {
    const RegressionProblem problem = support::random_problem(14, 22, 31);
    const EdrPath path = path_for(problem, TuningGrid::log_spaced(35, -3.0, 3.0));
    SubjectQuery z(support::random_vector(22, 32));

    const auto schedule = sort_schedule(path, z);
    REQUIRE(schedule.size() == path.size());
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        CHECK(schedule[i].weighted <= schedule[i + 1].weighted);
    for (const auto& e : schedule) {
        CHECK(e.corr == doctest::Approx(correlation_factor(z, path.estimate(e.point))).epsilon(1e-14));
        CHECK(e.weighted == e.corr * e.r);
    }
}

TEST_CASE("pairwise_test basics") {
    const RegressionProblem problem = support::random_problem(10, 15, 33);
    const EdrPath path = path_for(problem, TuningGrid::log_spaced(12, -2.0, 2.0));
    SubjectQuery z(support::random_vector(15, 34));

    for (std::size_t i = 0; i < path.size(); ++i) CHECK(pairwise_test(path, z, i, i));

    // Identical estimates always pass: zero difference, nonnegative bound.
    Matrix twin(3, 2);
    twin.col(0) = Eigen::Vector3d(1.0, 2.0, 3.0);
    twin.col(1) = Eigen::Vector3d(1.0, 2.0, 3.0);
    EdrPath twin_path = fabricate_path(twin, {0.5, 4.0});
    SubjectQuery zz(Vector(Eigen::Vector3d(0.3, -0.2, 0.9)));
    CHECK(pairwise_test(twin_path, zz, 0, 1));

    CHECK_THROWS_AS(pairwise_test(path, z, 0, path.size()), Error);
}

TEST_CASE("pairwise_test agrees with the direct formula on every pair") {
    const RegressionProblem problem = support::random_problem(13, 18, 35);
    const EdrPath path = path_for(problem, TuningGrid::log_spaced(20, -2.5, 2.5));
    SubjectQuery z(support::random_vector(18, 36));

    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = 0; j < path.size(); ++j) {
            const double pi = z.z.dot(path.estimate(i));
            const double pj = z.z.dot(path.estimate(j));
            const double ci = correlation_factor(z, path.estimate(i));
            const double cj = correlation_factor(z, path.estimate(j));
            const bool expected = std::abs(pi - pj) - (ci * path.points[i].r + cj * path.points[j].r) * z.norm_z <= 0.0;
            CHECK(pairwise_test(path, z, i, j) == expected);
        }
}

TEST_CASE("select_tuning on a single-point path returns that point") {
    const RegressionProblem problem = support::random_problem(8, 10, 37);
    TuningGrid grid;
    grid.values = {0.9};
    const EdrPath path = path_for(problem, grid);
    SubjectQuery z(support::random_vector(10, 38));

    const PavSelection sel = select_tuning(path, z);
    CHECK(sel.chosen_index == 0);
    CHECK(sel.chosen_r == path.points[0].r);
    CHECK(sel.chosen_t == 0.9);
    CHECK(sel.prediction == doctest::Approx(z.z.dot(path.estimate(0))).epsilon(1e-14));
    REQUIRE(sel.admissible.size() == 1);
    CHECK(sel.admissible[0] == 1);
}

TEST_CASE("select_tuning keeps the smallest weighted tuning when all tests pass") {
    // Identical estimates: every pairwise difference is zero.
    Matrix estimates(3, 4);
    for (int j = 0; j < 4; ++j) estimates.col(j) = Eigen::Vector3d(1.0, -1.0, 2.0);
    EdrPath path = fabricate_path(estimates, {1.0, 2.0, 3.0, 4.0});
    SubjectQuery z(Vector(Eigen::Vector3d(0.2, 0.4, -0.1)));

    for (auto mode : {SelectionMode::scan, SelectionMode::full_pairs}) {
        const PavSelection sel = select_tuning(path, z, mode);
        CHECK(sel.chosen_index == 0);
        CHECK(sel.chosen_r == 1.0);
        for (auto flag : sel.admissible) CHECK(flag == 1);
    }
}

TEST_CASE("select_tuning matches the brute-force rules on random instances") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> n_dist(8, 24), p_dist(5, 40), m_dist(1, 40);
    std::uniform_real_distribution<double> lo_dist(-4.0, -0.5), width_dist(1.0, 5.0);

    for (int instance = 0; instance < 60; ++instance) {
        const Index n = n_dist(rng), p = p_dist(rng);
        const int m = m_dist(rng);
        const double lo = lo_dist(rng);
        const RegressionProblem problem = support::random_problem(n, p, 5000 + instance);
        const EdrPath path = path_for(problem, TuningGrid::log_spaced(m, lo, lo + width_dist(rng)));
        SubjectQuery z(support::random_vector(p, 6000 + instance));

        const PavSelection scan = select_tuning(path, z, SelectionMode::scan);
        const PavSelection full = select_tuning(path, z, SelectionMode::full_pairs);

        CHECK(scan.chosen_index == support::brute_force_scan(scan.schedule, z.norm_z));
        CHECK(full.chosen_index == support::brute_force_full(full.schedule, z.norm_z));

        // The two modes select the same point and agree on admissibility.
        CHECK(scan.chosen_index == full.chosen_index);
        CHECK(scan.chosen_r == full.chosen_r);
        REQUIRE(scan.admissible.size() == full.admissible.size());
        for (std::size_t i = 0; i < scan.admissible.size(); ++i)
            CHECK(scan.admissible[i] == full.admissible[i]);

        // The top of the schedule is always admissible.
        CHECK(scan.admissible.back() == 1);
        CHECK(scan.bound == doctest::Approx(scan.schedule[scan.chosen_index].weighted * z.norm_z));
    }
}

TEST_CASE("select_tuning is invariant to the scale of the subject vector") {
    const RegressionProblem problem = support::random_problem(16, 28, 41);
    const EdrPath path = path_for(problem, TuningGrid::log_spaced(30, -3.0, 3.0));
    const Vector base = support::random_vector(28, 42);

    const PavSelection a = select_tuning(path, SubjectQuery(base));
    const PavSelection b = select_tuning(path, SubjectQuery(Vector(3.7 * base)));
    CHECK(a.schedule[a.chosen_index].point == b.schedule[b.chosen_index].point);
    CHECK(a.chosen_r == b.chosen_r);
}

TEST_CASE("oracle_tuning with zero noise admits every point") {
    RegressionProblem problem = support::random_problem(12, 16, 43);
    problem.truth = Truth{support::random_vector(16, 44), Vector::Zero(12), 1.0};
    const EdrPath path = path_for(problem, TuningGrid::log_spaced(25, -2.0, 2.0));
    SubjectQuery z(support::random_vector(16, 45));

    const OracleDiagnostics diag = oracle_tuning(path, z, problem);
    const auto schedule = sort_schedule(path, z);
    CHECK(diag.oracle_point == schedule[0].point);
    CHECK(diag.r_oracle == schedule[0].r);
    CHECK(diag.oracle_bound == doctest::Approx(schedule[0].weighted * z.norm_z));
    for (std::size_t i = 0; i < path.size(); ++i) CHECK(diag.lower_bound_rhs[i] == 0.0);
}

TEST_CASE("oracle_tuning reports when no point is admissible") {
    Matrix design(3, 2);
    design << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    RegressionProblem problem;
    problem.design = as_design(design);
    problem.response = Vector(Eigen::Vector3d(1.0, 0.3, 0.0));
    problem.truth = Truth{Vector(Eigen::Vector2d(1.0, 0.0)), Vector(Eigen::Vector3d(0.0, 0.3, 0.0)), 0.3};

    Matrix estimates(2, 1);
    estimates.col(0) = Eigen::Vector2d(1.0, 0.0);
    EdrPath path = fabricate_path(estimates, {0.5});

    // z is orthogonal to the only estimate, so c = 0 while (Xz).u > 0.
    SubjectQuery z(Vector(Eigen::Vector2d(0.0, 1.0)));
    CHECK_THROWS_AS(oracle_tuning(path, z, problem), NoAdmissiblePointError);

    RegressionProblem no_truth = problem;
    no_truth.truth.reset();
    CHECK_THROWS_AS(oracle_tuning(path, z, no_truth), Error);
}

TEST_CASE("personalized bound holds at every admissible point on orthogonal designs") {
    std::mt19937_64 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const Index n = 20;
    const double sigma = 1.0;

    int nonempty = 0;
    for (int trial = 0; trial < 20; ++trial) {
        RegressionProblem problem;
        problem.design = support::orthonormal_design(n, 9000 + trial);
        Vector beta(n), noise(n);
        for (Index i = 0; i < n; ++i) beta[i] = gauss(rng);
        for (Index i = 0; i < n; ++i) noise[i] = sigma / std::sqrt(double(n)) * gauss(rng);
        problem.response = problem.design.values * beta + noise;
        problem.truth = Truth{beta, problem.response - problem.design.values * beta, sigma};

        const EdrPath path = path_for(problem, TuningGrid::log_spaced(60, -3.0, 3.0));
        Vector zvec(n);
        for (Index i = 0; i < n; ++i) zvec[i] = uniform(rng);
        SubjectQuery z(zvec);

        const double q = 2.0 * std::abs((problem.design.values * z.z).dot(problem.truth->noise));
        bool any_admissible = false;
        for (std::size_t i = 0; i < path.size(); ++i) {
            const double c = correlation_factor(z, path.estimate(i));
            if (c * path.points[i].r * z.norm_z < q) continue;  // not admissible
            any_admissible = true;
            const double error = std::abs(z.z.dot(beta - Vector(path.estimate(i))));
            CHECK(error <= c * path.points[i].r * z.norm_z + 1e-10);
        }

        if (any_admissible) {
            ++nonempty;
            const OracleDiagnostics diag = oracle_tuning(path, z, problem);
            CHECK(diag.selected_error <= 3.0 * diag.oracle_bound + 1e-10);
            CHECK(diag.optimality_ratio <= 3.0 + 1e-10);
        }
    }
    CHECK(nonempty > 0);  // the setup must actually exercise the bound
}

TEST_CASE("gaussian_bound frozen values and scaling") {
    // 3 * sqrt(8 log 4 / 100) evaluated independently.
    CHECK(gaussian_bound(1.0, 100, 0.5, 1.0) == doctest::Approx(0.9990655335).epsilon(1e-8));
    // n = 8 log(2/delta) makes the bound exactly 3 sigma ||z||.
    CHECK(gaussian_bound(1.0, 16, 2.0 * std::exp(-2.0), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gaussian_bound(2.0, 100, 0.5, 1.0) ==
          doctest::Approx(2.0 * gaussian_bound(1.0, 100, 0.5, 1.0)).epsilon(1e-14));
    CHECK(gaussian_bound(1.0, 100, 0.5, 2.5) ==
          doctest::Approx(2.5 * gaussian_bound(1.0, 100, 0.5, 1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(gaussian_bound(1.0, 100, 0.0, 1.0), Error);
    CHECK_THROWS_AS(gaussian_bound(1.0, 100, 1.0, 1.0), Error);
    CHECK_THROWS_AS(gaussian_bound(0.0, 100, 0.5, 1.0), Error);
    CHECK_THROWS_AS(gaussian_bound(1.0, 0, 0.5, 1.0), Error);
}
