#include "auxmean/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace auxmean {

const char* to_string(NormMode mode) {
    switch (mode) {
        case NormMode::Frobenius: return "frobenius";
        case NormMode::Trace: return "trace";
        case NormMode::Operator: return "operator";
    }
    throw std::logic_error("unknown NormMode");
}

NormMode parse_norm_mode(const std::string& name) {
    if (name == "frobenius") return NormMode::Frobenius;
    if (name == "trace") return NormMode::Trace;
    if (name == "operator") return NormMode::Operator;
    throw std::invalid_argument("unknown norm mode: " + name);
}

double dimension_constant(NormMode mode, int d) {
    if (d < 1) throw std::invalid_argument("dimension_constant: d must be positive");
    switch (mode) {
        case NormMode::Frobenius: return std::sqrt(static_cast<double>(d));
        case NormMode::Trace: return 1.0;
        case NormMode::Operator: return static_cast<double>(d);
    }
    throw std::logic_error("unknown NormMode");
}

void ProblemSpec::validate() const {
    if (n < 1) throw std::invalid_argument("ProblemSpec: n must be >= 1");
    if (N < 1) throw std::invalid_argument("ProblemSpec: N must be >= 1");
    if (d < 1) throw std::invalid_argument("ProblemSpec: d must be >= 1");
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("ProblemSpec: eps must be finite and >= 0");
    }
    if (!(delta_sq > 0.0) || !std::isfinite(delta_sq)) {
        throw std::invalid_argument("ProblemSpec: delta_sq must be finite and > 0");
    }
}

double optimal_weight(const ProblemSpec& spec) {
    spec.validate();
    const double r = spec.budget_ratio();
    const double c = dimension_constant(spec.mode, spec.d);
    const double s = (r + c / spec.N) / (r + c / spec.n + c / spec.N);
    return std::clamp(s, 0.0, 1.0);
}

RiskReport minmax_risk(const ProblemSpec& spec) {
    spec.validate();
    const double r = spec.budget_ratio();
    const double c = dimension_constant(spec.mode, spec.d);
    const double n = static_cast<double>(spec.n);
    const double N = static_cast<double>(spec.N);
    // Continuous at r = 0, where the value degenerates to c / (n + N).
    const double risk = c * (c + r * N) / (c * (n + N) + r * n * N);

    RiskReport report;
    report.s_star = optimal_weight(spec);
    report.risk_star = risk;
    report.mode = spec.mode;
    report.spec = spec;
    return report;
}

double scalar_objective(const ProblemSpec& spec, double s) {
    spec.validate();
    const double r = spec.budget_ratio();
    const double c = dimension_constant(spec.mode, spec.d);
    const double miss = s - 1.0;
    return miss * miss * r + c * (s * s / spec.n + miss * miss / spec.N);
}

namespace {

double quadratic_trace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& cov) {
    // Tr(A^T A cov)
    return (A.transpose() * A * cov).trace();
}

}  // namespace

double risk_from_moments(const LinearEstimator& est, const GaussianMoments& p,
                         const GaussianMoments& q, long n, long N) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("risk_from_moments: moment dimensions differ");
    }
    if (n < 1 || N < 1) {
        throw std::invalid_argument("risk_from_moments: sample counts must be >= 1");
    }

    if (const auto* scalar = std::get_if<ScalarWeight>(&est)) {
        if (!std::isfinite(scalar->s)) {
            throw std::invalid_argument("risk_from_moments: scalar weight must be finite");
        }
        const double s = scalar->s;
        const double t = 1.0 - s;
        return s * s * p.cov.trace() / n + t * t * q.cov.trace() / N +
               t * t * (q.mean - p.mean).squaredNorm();
    }

    const auto& pair = std::get<MatrixPair>(est);
    if (pair.A.rows() != p.dim() || pair.A.cols() != p.dim() ||
        pair.B.rows() != p.dim() || pair.B.cols() != p.dim()) {
        throw std::invalid_argument("risk_from_moments: estimator dimensions differ from moments");
    }
    const double variance_target = quadratic_trace(pair.A, p.cov) / n;
    const double variance_aux = quadratic_trace(pair.B, q.cov) / N;
    const double bias = (pair.A * p.mean + pair.B * q.mean - p.mean).squaredNorm();
    return variance_target + variance_aux + bias;
}

double matrix_objective(const ProblemSpec& spec, const Eigen::MatrixXd& A) {
    spec.validate();
    if (A.rows() != spec.d || A.cols() != spec.d) {
        throw std::invalid_argument("matrix_objective: A must be d x d");
    }
    const double r = spec.budget_ratio();
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(spec.d, spec.d);
    const Eigen::MatrixXd deviation = A - identity;
    const Eigen::MatrixXd residual = identity - A;
    const Eigen::MatrixXd m =
        symmetrized(A.transpose() * A / static_cast<double>(spec.n) +
                    residual.transpose() * residual / static_cast<double>(spec.N));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(
        deviation.transpose() * deviation, Eigen::EigenvaluesOnly);
    const double smax_sq = std::max(gram.eigenvalues().maxCoeff(), 0.0);

    switch (spec.mode) {
        case NormMode::Frobenius:
            return smax_sq * r + m.norm();
        case NormMode::Trace: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mev(m, Eigen::EigenvaluesOnly);
            return smax_sq * r + std::max(mev.eigenvalues().maxCoeff(), 0.0);
        }
        case NormMode::Operator:
            return smax_sq * r + m.trace();
    }
    throw std::logic_error("unknown NormMode");
}

namespace {

Eigen::VectorXd sample_mean(const std::vector<Eigen::VectorXd>& samples, const char* label) {
    if (samples.empty()) {
        throw std::invalid_argument(std::string("apply_estimator: empty sample list (") + label + ")");
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(samples.front().size());
    for (const auto& x : samples) {
        if (x.size() != sum.size()) {
            throw std::invalid_argument("apply_estimator: inconsistent sample dimensions");
        }
        sum += x;
    }
    return sum / static_cast<double>(samples.size());
}

}  // namespace

Eigen::VectorXd apply_estimator(const LinearEstimator& est,
                                const std::vector<Eigen::VectorXd>& target_samples,
                                const std::vector<Eigen::VectorXd>& aux_samples) {
    const Eigen::VectorXd mean_target = sample_mean(target_samples, "target");
    const Eigen::VectorXd mean_aux = sample_mean(aux_samples, "auxiliary");
    if (mean_target.size() != mean_aux.size()) {
        throw std::invalid_argument("apply_estimator: target/auxiliary dimensions differ");
    }

    if (const auto* scalar = std::get_if<ScalarWeight>(&est)) {
        if (!std::isfinite(scalar->s)) {
            throw std::invalid_argument("apply_estimator: scalar weight must be finite");
        }
        return scalar->s * mean_target + (1.0 - scalar->s) * mean_aux;
    }
    const auto& pair = std::get<MatrixPair>(est);
    if (pair.A.cols() != mean_target.size() || pair.B.cols() != mean_aux.size()) {
        throw std::invalid_argument("apply_estimator: estimator dimensions differ from samples");
    }
    return pair.A * mean_target + pair.B * mean_aux;
}

}  // namespace auxmean
