#include "auxmean/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "auxmean/adversary.hpp"
#include "auxmean/moments_io.hpp"
#include "auxmean/rng.hpp"

namespace auxmean {

const char* to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::TrueMean: return "true_mean";
        case EstimatorKind::PooledMean: return "pooled_mean";
        case EstimatorKind::Optimal: return "optimal";
    }
    throw std::logic_error("unknown EstimatorKind");
}

EstimatorKind parse_estimator_kind(const std::string& name) {
    if (name == "true_mean") return EstimatorKind::TrueMean;
    if (name == "pooled_mean") return EstimatorKind::PooledMean;
    if (name == "optimal") return EstimatorKind::Optimal;
    throw std::invalid_argument("unknown estimator: " + name);
}

void ExperimentConfig::validate() const {
    spec.validate();
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (estimators.empty()) throw std::invalid_argument("ExperimentConfig: no estimators selected");
    if (sweep) {
        if (sweep->empty()) throw std::invalid_argument("ExperimentConfig: sweep list is empty");
        for (double eps : *sweep) {
            if (!(eps >= 0.0) || !std::isfinite(eps)) {
                throw std::invalid_argument("ExperimentConfig: sweep values must be finite and >= 0");
            }
        }
    }
}

namespace {

// Stream roles mixed into per-trial seeds; target and auxiliary draws stay
// independent even under identical trial indices.
constexpr std::uint64_t kTargetRole = 1;
constexpr std::uint64_t kAuxRole = 2;

double neumaier_sum(const double* xs, long count) {
    double sum = 0.0;
    double comp = 0.0;
    for (long i = 0; i < count; ++i) {
        const double x = xs[i];
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double weight_for(EstimatorKind kind, const ProblemSpec& spec) {
    switch (kind) {
        case EstimatorKind::TrueMean:
            return 1.0;
        case EstimatorKind::PooledMean:
            return static_cast<double>(spec.n) / static_cast<double>(spec.n + spec.N);
        case EstimatorKind::Optimal:
            return optimal_weight(spec);
    }
    throw std::logic_error("unknown EstimatorKind");
}

}  // namespace

std::vector<Eigen::VectorXd> sample_gaussian(const GaussianMoments& moments, long count,
                                             std::uint64_t stream_seed) {
    if (count < 1) throw std::invalid_argument("sample_gaussian: count must be >= 1");
    const Eigen::MatrixXd root = psd_sqrt(moments.cov);

    NormalStream stream(stream_seed);
    std::vector<Eigen::VectorXd> samples;
    samples.reserve(static_cast<std::size_t>(count));
    Eigen::VectorXd w(moments.dim());
    for (long i = 0; i < count; ++i) {
        stream.fill(w);
        samples.push_back(moments.mean + root * w);
    }
    return samples;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const ProblemSpec& spec = config.spec;

    const AdversaryPair pair = worst_case_large_n(spec, optimal_weight(spec));
    const Eigen::MatrixXd root_target = psd_sqrt(pair.p.cov);
    const Eigen::MatrixXd root_aux = psd_sqrt(pair.q.cov);

    std::vector<double> weights;
    weights.reserve(config.estimators.size());
    for (EstimatorKind kind : config.estimators) weights.push_back(weight_for(kind, spec));

    const long trials = config.trials;
    const std::size_t arms = config.estimators.size();
    std::vector<double> sq_errors(arms * static_cast<std::size_t>(trials));

    // The sample mean of {mu + S w_i} is mu + S (sum w_i / count); only the
    // standard-normal sums are accumulated per trial.
    const auto run_range = [&](long begin, long end) {
        Eigen::VectorXd w(spec.d);
        Eigen::VectorXd sum_target(spec.d);
        Eigen::VectorXd sum_aux(spec.d);
        for (long t = begin; t < end; ++t) {
            NormalStream target_stream(
                mix_seed(config.base_seed, static_cast<std::uint64_t>(t), kTargetRole));
            sum_target.setZero();
            for (long i = 0; i < spec.n; ++i) {
                target_stream.fill(w);
                sum_target += w;
            }
            NormalStream aux_stream(
                mix_seed(config.base_seed, static_cast<std::uint64_t>(t), kAuxRole));
            sum_aux.setZero();
            for (long j = 0; j < spec.N; ++j) {
                aux_stream.fill(w);
                sum_aux += w;
            }

            const Eigen::VectorXd mean_target =
                pair.p.mean + root_target * (sum_target / static_cast<double>(spec.n));
            const Eigen::VectorXd mean_aux =
                pair.q.mean + root_aux * (sum_aux / static_cast<double>(spec.N));

            for (std::size_t k = 0; k < arms; ++k) {
                const double s = weights[k];
                const Eigen::VectorXd estimate = s * mean_target + (1.0 - s) * mean_aux;
                sq_errors[k * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)] =
                    (estimate - pair.p.mean).squaredNorm();
            }
        }
    };

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(trials)));
    if (workers == 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long begin = w * chunk;
            const long end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }

    ExperimentResult result;
    result.epsilon = spec.eps;
    result.base_seed = config.base_seed;
    result.stats.reserve(arms);
    for (std::size_t k = 0; k < arms; ++k) {
        const double* slice = sq_errors.data() + k * static_cast<std::size_t>(trials);
        const double mean = neumaier_sum(slice, trials) / static_cast<double>(trials);

        double std_error = 0.0;
        if (trials > 1) {
            std::vector<double> centered(static_cast<std::size_t>(trials));
            for (long t = 0; t < trials; ++t) {
                const double diff = slice[t] - mean;
                centered[static_cast<std::size_t>(t)] = diff * diff;
            }
            const double variance =
                neumaier_sum(centered.data(), trials) / static_cast<double>(trials - 1);
            std_error = std::sqrt(variance / static_cast<double>(trials));
        }

        EstimatorStats stats;
        stats.estimator = config.estimators[k];
        stats.empirical_mse = mean;
        stats.std_error = std_error;
        stats.trials = trials;
        stats.analytic_mse =
            risk_from_moments(ScalarWeight{weights[k]}, pair.p, pair.q, spec.n, spec.N);
        result.stats.push_back(std::move(stats));
    }
    return result;
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& config, int threads) {
    config.validate();
    if (!config.sweep || config.sweep->empty()) {
        throw std::invalid_argument("sweep: config.sweep must be a nonempty list of epsilon values");
    }

    std::vector<double> epsilons = *config.sweep;
    std::sort(epsilons.begin(), epsilons.end());

    std::vector<ExperimentResult> results;
    results.reserve(epsilons.size());
    for (double eps : epsilons) {
        ExperimentConfig point = config;
        point.spec.eps = eps;
        point.sweep.reset();
        results.push_back(run_experiment(point, threads));
    }
    return results;
}

std::string to_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << "epsilon,estimator,empirical_mse,std_error,analytic_mse,trials,seed\n";
    for (const ExperimentResult& result : results) {
        for (const EstimatorStats& stats : result.stats) {
            out << format_double17(result.epsilon) << ',' << to_string(stats.estimator) << ','
                << format_double17(stats.empirical_mse) << ',' << format_double17(stats.std_error)
                << ',';
            if (stats.analytic_mse) out << format_double17(*stats.analytic_mse);
            out << ',' << stats.trials << ',' << result.base_seed << '\n';
        }
    }
    return out.str();
}

}  // namespace auxmean
