#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "auxmean/gaussian.hpp"

namespace auxmean {

/// Covariance norm used to normalize the worst-case MSE. Each mode only
/// changes the dimension constant of the scalarized objective.
enum class NormMode { Frobenius, Trace, Operator };

const char* to_string(NormMode mode);
NormMode parse_norm_mode(const std::string& name);

/// sqrt(d) for Frobenius, 1 for Trace, d for Operator.
double dimension_constant(NormMode mode, int d);

/// Parameters of one min-max mean-estimation problem.
struct ProblemSpec {
    long n = 1;              // samples from the target distribution
    long N = 1;              // samples from the auxiliary distribution
    int d = 1;               // dimension
    double eps = 1.0;        // Wasserstein-2 radius
    double delta_sq = 1.0;   // lower bound on the chosen covariance norm
    NormMode mode = NormMode::Frobenius;

    double budget_ratio() const { return eps * eps / delta_sq; }
    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// A = sI, B = (1-s)I.
struct ScalarWeight {
    double s = 1.0;
};

/// General matrix pair; used only by verification oracles.
struct MatrixPair {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

using LinearEstimator = std::variant<ScalarWeight, MatrixPair>;

struct RiskReport {
    double s_star = 1.0;
    double risk_star = 0.0;   // normalized min-max MSE
    NormMode mode = NormMode::Frobenius;
    ProblemSpec spec;
};

/// Optimal scalar weight s = (r + c/N) / (r + c/n + c/N) with r = eps^2/delta_sq
/// and c the dimension constant; clamped to [0, 1] against rounding.
double optimal_weight(const ProblemSpec& spec);

/// Closed-form min-max risk c (c + r N) / (c (n + N) + r n N), the value of
/// the scalarized objective at the optimal weight.
RiskReport minmax_risk(const ProblemSpec& spec);

/// Scalarized objective g(s) = (s-1)^2 r + c (s^2/n + (1-s)^2/N).
double scalar_objective(const ProblemSpec& spec, double s);

/// Exact (expectation over sampling) unnormalized MSE of a linear estimator
/// when targets come from p and auxiliaries from q:
///   Tr(A^T A Sp)/n + Tr(B^T B Sq)/N + ||A mu_p + B mu_q - mu_p||^2.
double risk_from_moments(const LinearEstimator& est, const GaussianMoments& p,
                         const GaussianMoments& q, long n, long N);

/// Worst-case objective over distributions for a general matrix A with
/// B = I - A, as a function of the normalization mode. With
/// M = A^T A / n + (I-A)^T (I-A) / N:
///   Frobenius: smax(A-I)^2 r + ||M||_F
///   Trace:     smax(A-I)^2 r + ||M||_op
///   Operator:  smax(A-I)^2 r + Tr(M)
double matrix_objective(const ProblemSpec& spec, const Eigen::MatrixXd& A);

/// A * mean(target samples) + B * mean(auxiliary samples). The scalar form
/// never materializes a matrix product.
Eigen::VectorXd apply_estimator(const LinearEstimator& est,
                                const std::vector<Eigen::VectorXd>& target_samples,
                                const std::vector<Eigen::VectorXd>& aux_samples);

}  // namespace auxmean
