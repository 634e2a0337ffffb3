#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "auxmean/estimator.hpp"
#include "auxmean/gaussian.hpp"

namespace auxmean {

/// Worst-case (target, auxiliary) moment pair. The Wasserstein-2 budget is
/// fully spent: mean_shift_sq + cov_budget_sq == eps^2, and the mode norm
/// of p.cov equals delta_sq.
struct AdversaryPair {
    GaussianMoments p;        // worst-case target distribution
    GaussianMoments q;        // worst-case auxiliary distribution
    double mean_shift_sq = 0.0;
    double cov_budget_sq = 0.0;
};

/// Raised when the covariance part of the stationary construction already
/// exceeds the squared radius, leaving no mean-shift budget. Callers should
/// fall back to worst_case_large_n.
class BudgetExhaustedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Worst-case target covariance for the given mode, with mode norm delta_sq:
/// (delta_sq/sqrt(d)) I for Frobenius, rank-one delta_sq u u^T on the given
/// direction for Trace, delta_sq I for Operator.
Eigen::MatrixXd worst_case_target_cov(const ProblemSpec& spec, const Eigen::VectorXd& direction);

/// Limit construction for many auxiliary samples: equal covariances, the
/// entire budget spent on a mean shift of eps along `direction`. For a
/// scalar weight every unit direction is principal, so the pair does not
/// depend on s. `direction` must be unit within 1e-10.
AdversaryPair worst_case_large_n(const ProblemSpec& spec, double s,
                                 const Eigen::VectorXd& direction,
                                 const Eigen::VectorXd& base_mean);
AdversaryPair worst_case_large_n(const ProblemSpec& spec, double s);

/// Finite-N stationary construction: Sq = (N/(N-1))^2 Sp, which costs
/// Tr(Sp)/(N-1)^2 of the squared budget; the remainder goes to the mean
/// shift. Requires N >= 2 and enough budget, else BudgetExhaustedError.
AdversaryPair worst_case_kkt(const ProblemSpec& spec, double s,
                             const Eigen::VectorXd& direction,
                             const Eigen::VectorXd& base_mean);
AdversaryPair worst_case_kkt(const ProblemSpec& spec, double s);

}  // namespace auxmean
