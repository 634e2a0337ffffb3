#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "auxmean/estimator.hpp"
#include "auxmean/gaussian.hpp"

namespace auxmean {

enum class EstimatorKind { TrueMean, PooledMean, Optimal };

const char* to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& name);

struct ExperimentConfig {
    ProblemSpec spec;
    long trials = 1000;
    std::uint64_t base_seed = 0;
    std::optional<std::vector<double>> sweep;  // epsilon values
    std::vector<EstimatorKind> estimators{EstimatorKind::TrueMean, EstimatorKind::PooledMean,
                                          EstimatorKind::Optimal};

    void validate() const;
};

struct EstimatorStats {
    EstimatorKind estimator = EstimatorKind::Optimal;
    double empirical_mse = 0.0;
    double std_error = 0.0;  // sample stddev of per-trial squared errors / sqrt(trials)
    long trials = 0;
    std::optional<double> analytic_mse;
};

struct ExperimentResult {
    double epsilon = 0.0;
    std::uint64_t base_seed = 0;
    std::vector<EstimatorStats> stats;
};

/// Draws `count` vectors mean + S^{1/2} w with w standard normal from the
/// deterministic stream seeded by stream_seed (see rng.hpp for the pinned
/// generator and transform). Identical seeds give bit-identical samples.
std::vector<Eigen::VectorXd> sample_gaussian(const GaussianMoments& moments, long count,
                                             std::uint64_t stream_seed);

/// Monte Carlo squared-error comparison of the configured estimators at the
/// worst-case moment pair for config.spec. Per-trial seeds mix
/// (base_seed, trial, stream role), so trials run concurrently on `threads`
/// threads (0 = hardware) with results independent of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 0);

/// One experiment per epsilon in config.sweep, reusing base_seed so the
/// curves are coupled; results ordered by epsilon.
std::vector<ExperimentResult> sweep(const ExperimentConfig& config, int threads = 0);

/// CSV with header epsilon,estimator,empirical_mse,std_error,analytic_mse,trials,seed.
std::string to_csv(const std::vector<ExperimentResult>& results);

}  // namespace auxmean
