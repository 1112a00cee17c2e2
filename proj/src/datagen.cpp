#include "edrpav/datagen.hpp"

#include "edrpav/errors.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace edrpav {

TuningGrid make_grid(const GridSpec& spec) {
    return TuningGrid::log_spaced(spec.count, spec.min_log10, spec.max_log10);
}

void SimConfig::validate() const {
    if (n < 2) throw Error("n must be at least 2");
    if (p < 1) throw Error("p must be at least 1");
    if (!(snr > 0.0)) throw Error("snr must be positive");
    if (!(mu_variance >= 0.0)) throw Error("mu variance must be nonnegative");
    if (grid.count < 2) throw Error("grid needs at least two points");
    if (!(grid.min_log10 <= grid.max_log10)) throw Error("grid range is inverted");
    if (test_subjects < 1) throw Error("need at least one test subject");
}

Vector project_to_row_space(const SvdFactors& factors, const Vector& beta) {
    if (beta.size() != factors.v.rows()) throw Error("beta length does not match the design");
    const double cutoff = factors.rank_cutoff();
    const Index k = factors.singular_values.size();

    Vector loadings = factors.v.transpose() * beta;  // k
    for (Index i = 0; i < k; ++i)
        if (factors.singular_values[i] <= cutoff) loadings[i] = 0.0;
    return factors.v * loadings;
}

namespace {

// Population-style variance (divisor n) of a vector's entries.
double entry_variance(const Vector& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size());
}

// Draws beta on the row space, noise at the requested signal-to-noise
// ratio, and assembles the response. Shared by both generators. The noise
// is re-derived as y - X beta once y is formed so the stored triple
// satisfies the construction identity exactly.
RegressionProblem finish_problem(DesignMatrix design, double snr, std::mt19937_64& rng) {
    const Index n = design.rows();
    const Index p = design.cols();
    std::normal_distribution<double> gauss(0.0, 1.0);

    Vector beta_raw(p);
    for (Index j = 0; j < p; ++j) beta_raw[j] = gauss(rng);
    const SvdFactors factors = svd(design);
    Vector beta = project_to_row_space(factors, beta_raw);

    const Vector signal = design.values * beta;
    const double sigma2 = entry_variance(signal) / snr;
    if (!(sigma2 > 0.0)) throw Error("signal variance is zero; cannot set the noise level");
    const double sigma = std::sqrt(sigma2);

    Vector noise(n);
    for (Index i = 0; i < n; ++i) noise[i] = sigma * gauss(rng);

    RegressionProblem problem;
    problem.response = signal + noise;
    problem.design = std::move(design);
    problem.truth = Truth{std::move(beta), problem.response - signal, sigma};
    return problem;
}

}  // namespace

SyntheticData generate_synthetic(const SimConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double mu_sd = std::sqrt(config.mu_variance);

    // Entry means: one draw for the whole matrix, or one per column.
    Vector mu(config.p);
    if (config.mu_granularity == MeanGranularity::per_matrix)
        mu.setConstant(config.mu_mean + mu_sd * gauss(rng));
    else
        for (int j = 0; j < config.p; ++j) mu[j] = config.mu_mean + mu_sd * gauss(rng);

    Matrix raw(config.n, config.p);
    for (Index j = 0; j < config.p; ++j)
        for (Index i = 0; i < config.n; ++i) raw(i, j) = mu[j] + gauss(rng);

    SyntheticData data;
    data.problem = finish_problem(normalize_columns(raw), config.snr, rng);

    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    data.subjects.reserve(static_cast<std::size_t>(config.test_subjects));
    for (int s = 0; s < config.test_subjects; ++s) {
        Vector z(config.p);
        for (Index j = 0; j < config.p; ++j) z[j] = uniform(rng);
        data.subjects.emplace_back(std::move(z));
    }

    data.grid = make_grid(config.grid);
    return data;
}

RegressionProblem generate_semisynthetic(const DesignMatrix& design, double snr,
                                         std::uint64_t seed) {
    if (!(snr > 0.0)) throw Error("snr must be positive");
    std::mt19937_64 rng(seed);
    return finish_problem(design, snr, rng);
}

}  // namespace edrpav
