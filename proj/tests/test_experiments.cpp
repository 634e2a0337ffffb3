#include "auxmean/experiments.hpp"

#include <cmath>

#include "doctest.h"
#include "auxmean/adversary.hpp"
#include "auxmean/rng.hpp"
#include "test_helpers.hpp"

using namespace auxmean;
using testutil::rel_gap;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.spec.n = 10;
    config.spec.N = 50;
    config.spec.d = 5;
    config.spec.eps = 1.0;
    config.spec.delta_sq = 1.0;
    config.spec.mode = NormMode::Frobenius;
    config.trials = 400;
    config.base_seed = 321;
    return config;
}

}  // namespace

TEST_CASE("sample_gaussian: degenerate covariances") {
    SUBCASE("zero covariance repeats the mean") {
        Eigen::VectorXd mean(3);
        mean << 1.0, -2.0, 0.5;
        const auto samples = sample_gaussian({mean, Eigen::MatrixXd::Zero(3, 3)}, 20, 99);
        for (const auto& x : samples) CHECK(x == mean);
    }
    SUBCASE("rank-one covariance stays on the support line") {
        Eigen::VectorXd u(3);
        u << 0.6, 0.0, 0.8;
        Eigen::VectorXd mean(3);
        mean << 1.0, 1.0, 1.0;
        const auto samples = sample_gaussian({mean, u * u.transpose()}, 50, 7);
        for (const auto& x : samples) {
            const Eigen::VectorXd centered = x - mean;
            const Eigen::VectorXd residual = centered - centered.dot(u) * u;
            CHECK(residual.norm() < 1e-10);
        }
    }
}

TEST_CASE("sample_gaussian: CLT sanity at the identity covariance") {
    const long count = 100000;
    const GaussianMoments moments{Eigen::Vector2d(3.0, -1.0), Eigen::MatrixXd::Identity(2, 2)};
    const auto samples = sample_gaussian(moments, count, 2026);
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& x : samples) mean += x;
    mean /= static_cast<double>(count);
    const double bound = 4.0 / std::sqrt(static_cast<double>(count));
    CHECK(std::abs(mean(0) - 3.0) < bound);
    CHECK(std::abs(mean(1) + 1.0) < bound);
}

TEST_CASE("sample_gaussian is seed-deterministic") {
    const GaussianMoments moments{Eigen::Vector2d(0.0, 0.0), Eigen::MatrixXd::Identity(2, 2)};
    const auto a = sample_gaussian(moments, 10, 5);
    const auto b = sample_gaussian(moments, 10, 5);
    const auto c = sample_gaussian(moments, 10, 6);
    for (int i = 0; i < 10; ++i) CHECK(a[i] == b[i]);
    CHECK(a[0] != c[0]);
}

TEST_CASE("seed mixing separates trials and stream roles") {
    for (std::uint64_t base : {0ULL, 1ULL, 509ULL, 0xffffffffffffffffULL}) {
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            CHECK(mix_seed(base, trial, 1) != mix_seed(base, trial, 2));
            CHECK(mix_seed(base, trial, 1) != mix_seed(base, trial + 1, 1));
        }
    }

    NormalStream stream(12345);
    for (int i = 0; i < 1000; ++i) {
        const double u = stream.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("run_experiment: analytic values at the reference configuration") {
    ExperimentConfig config;
    config.spec.n = 20;
    config.spec.N = 1000;
    config.spec.d = 200;
    config.spec.eps = 1.0;
    config.spec.delta_sq = 1.0;
    config.spec.mode = NormMode::Frobenius;
    config.trials = 2;
    config.base_seed = 1;

    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.stats.size() == 3);

    // Target covariance is (delta^2/sqrt(d)) I, whose trace is delta^2 sqrt(d).
    const double trace = std::sqrt(200.0);
    const double expected_true = trace / 20.0;
    const double pooled_weight = 1000.0 / 1020.0;
    const double expected_pooled = pooled_weight * pooled_weight * 1.0 + trace / 1020.0;

    CHECK(rel_gap(*result.stats[0].analytic_mse, expected_true) < 1e-12);
    CHECK(rel_gap(*result.stats[1].analytic_mse, expected_pooled) < 1e-12);
    CHECK(*result.stats[2].analytic_mse < *result.stats[0].analytic_mse);
    CHECK(*result.stats[2].analytic_mse < *result.stats[1].analytic_mse);
}

TEST_CASE("run_experiment calibrates against the analytic risk") {
    ExperimentConfig config = small_config();
    config.trials = 2000;
    const ExperimentResult result = run_experiment(config);
    for (const EstimatorStats& stats : result.stats) {
        CAPTURE(to_string(stats.estimator));
        CHECK(std::abs(stats.empirical_mse - *stats.analytic_mse) <= 3.0 * stats.std_error);
        CHECK(stats.std_error > 0.0);
        CHECK(stats.trials == 2000);
    }
}

TEST_CASE("run_experiment is reproducible and thread-count independent") {
    const ExperimentConfig config = small_config();
    const ExperimentResult a = run_experiment(config, 1);
    const ExperimentResult b = run_experiment(config, 1);
    const ExperimentResult c = run_experiment(config, 4);
    REQUIRE(a.stats.size() == b.stats.size());
    REQUIRE(a.stats.size() == c.stats.size());
    for (std::size_t k = 0; k < a.stats.size(); ++k) {
        CHECK(a.stats[k].empirical_mse == b.stats[k].empirical_mse);
        CHECK(a.stats[k].std_error == b.stats[k].std_error);
        CHECK(a.stats[k].empirical_mse == c.stats[k].empirical_mse);
        CHECK(a.stats[k].std_error == c.stats[k].std_error);
    }
}

TEST_CASE("run_experiment honors the estimator subset") {
    ExperimentConfig config = small_config();
    config.trials = 5;
    config.estimators = {EstimatorKind::Optimal};
    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.stats.size() == 1);
    CHECK(result.stats[0].estimator == EstimatorKind::Optimal);
}

TEST_CASE("zero radius makes the optimal and pooled arms coincide") {
    ExperimentConfig config = small_config();
    config.spec.eps = 0.0;
    config.trials = 50;
    const ExperimentResult result = run_experiment(config);
    CHECK(rel_gap(result.stats[1].empirical_mse, result.stats[2].empirical_mse) < 1e-12);
}

TEST_CASE("sweep: coupled curves across epsilon") {
    ExperimentConfig config = small_config();
    config.trials = 500;
    config.sweep = std::vector<double>{100.0, 0.001};  // intentionally unsorted

    const auto results = sweep(config);
    REQUIRE(results.size() == 2);
    CHECK(results[0].epsilon == 0.001);
    CHECK(results[1].epsilon == 100.0);

    // Small radius: optimal tracks the pooled mean within Monte Carlo noise.
    const EstimatorStats& pooled_low = results[0].stats[1];
    const EstimatorStats& optimal_low = results[0].stats[2];
    const double combined_low =
        std::sqrt(pooled_low.std_error * pooled_low.std_error +
                  optimal_low.std_error * optimal_low.std_error);
    CHECK(std::abs(pooled_low.empirical_mse - optimal_low.empirical_mse) <=
          3.0 * combined_low);

    // Large radius: optimal tracks the target-only mean.
    const EstimatorStats& true_high = results[1].stats[0];
    const EstimatorStats& optimal_high = results[1].stats[2];
    const double combined_high =
        std::sqrt(true_high.std_error * true_high.std_error +
                  optimal_high.std_error * optimal_high.std_error);
    CHECK(std::abs(true_high.empirical_mse - optimal_high.empirical_mse) <=
          3.0 * combined_high);

    // The analytic optimal risk dominates both baselines at every point.
    for (const auto& result : results) {
        CHECK(*result.stats[2].analytic_mse <=
              *result.stats[0].analytic_mse * (1.0 + 1e-15));
        CHECK(*result.stats[2].analytic_mse <=
              *result.stats[1].analytic_mse * (1.0 + 1e-15));
    }
}

TEST_CASE("analytic optimal risk is nondecreasing along an epsilon sweep") {
    ExperimentConfig config = small_config();
    config.trials = 1;
    config.estimators = {EstimatorKind::Optimal};
    config.sweep = std::vector<double>{0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0};

    const auto results = sweep(config);
    double prev = -1.0;
    for (const auto& result : results) {
        const double analytic = *result.stats[0].analytic_mse;
        CHECK(analytic >= prev - 1e-15);
        prev = analytic;
    }
}

TEST_CASE("sweep requires a nonempty list") {
    ExperimentConfig config = small_config();
    CHECK_THROWS_AS(sweep(config), std::invalid_argument);
    config.sweep = std::vector<double>{};
    CHECK_THROWS_AS(sweep(config), std::invalid_argument);
    config.sweep = std::vector<double>{-1.0};
    CHECK_THROWS_AS(sweep(config), std::invalid_argument);
}

TEST_CASE("to_csv emits the documented schema deterministically") {
    ExperimentConfig config = small_config();
    config.trials = 20;
    const std::vector<ExperimentResult> results{run_experiment(config)};
    const std::string csv = to_csv(results);
    CHECK(csv.rfind("epsilon,estimator,empirical_mse,std_error,analytic_mse,trials,seed\n", 0) ==
          0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + one row per arm
    CHECK(csv.find("true_mean") != std::string::npos);
    CHECK(csv.find("pooled_mean") != std::string::npos);
    CHECK(csv.find("optimal") != std::string::npos);

    const std::string again = to_csv({run_experiment(config)});
    CHECK(csv == again);
}
