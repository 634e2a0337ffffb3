#include "auxmean/adversary.hpp"

#include <cmath>
#include <sstream>

namespace auxmean {

namespace {

void require_unit(const Eigen::VectorXd& direction) {
    if (std::abs(direction.norm() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "non-unit direction: |norm - 1| = " << std::abs(direction.norm() - 1.0);
        throw std::invalid_argument(msg.str());
    }
}

void require_dims(const ProblemSpec& spec, const Eigen::VectorXd& direction,
                  const Eigen::VectorXd& base_mean) {
    if (direction.size() != spec.d || base_mean.size() != spec.d) {
        throw std::invalid_argument("adversary: direction/base_mean must have length d");
    }
}

}  // namespace

Eigen::MatrixXd worst_case_target_cov(const ProblemSpec& spec, const Eigen::VectorXd& direction) {
    switch (spec.mode) {
        case NormMode::Frobenius:
            return (spec.delta_sq / std::sqrt(static_cast<double>(spec.d))) *
                   Eigen::MatrixXd::Identity(spec.d, spec.d);
        case NormMode::Trace:
            return spec.delta_sq * (direction * direction.transpose());
        case NormMode::Operator:
            return spec.delta_sq * Eigen::MatrixXd::Identity(spec.d, spec.d);
    }
    throw std::logic_error("unknown NormMode");
}

AdversaryPair worst_case_large_n(const ProblemSpec& spec, double s,
                                 const Eigen::VectorXd& direction,
                                 const Eigen::VectorXd& base_mean) {
    spec.validate();
    require_dims(spec, direction, base_mean);
    require_unit(direction);
    if (!std::isfinite(s)) throw std::invalid_argument("worst_case_large_n: s must be finite");

    const Eigen::MatrixXd cov = worst_case_target_cov(spec, direction);
    AdversaryPair pair;
    pair.p = GaussianMoments{base_mean, cov};
    pair.q = GaussianMoments{base_mean + spec.eps * direction, cov};
    pair.mean_shift_sq = spec.eps * spec.eps;
    pair.cov_budget_sq = 0.0;
    return pair;
}

AdversaryPair worst_case_large_n(const ProblemSpec& spec, double s) {
    return worst_case_large_n(spec, s, Eigen::VectorXd::Unit(spec.d, 0),
                              Eigen::VectorXd::Zero(spec.d));
}

AdversaryPair worst_case_kkt(const ProblemSpec& spec, double s,
                             const Eigen::VectorXd& direction,
                             const Eigen::VectorXd& base_mean) {
    spec.validate();
    require_dims(spec, direction, base_mean);
    require_unit(direction);
    if (!std::isfinite(s)) throw std::invalid_argument("worst_case_kkt: s must be finite");
    if (spec.N < 2) throw std::invalid_argument("worst_case_kkt: N must be >= 2");

    const Eigen::MatrixXd cov = worst_case_target_cov(spec, direction);
    const double shrink = static_cast<double>(spec.N - 1);
    const double cov_budget = cov.trace() / (shrink * shrink);
    const double eps_sq = spec.eps * spec.eps;
    if (eps_sq < cov_budget) {
        std::ostringstream msg;
        msg << "budget exhausted: eps^2 = " << eps_sq << " < Tr(cov)/(N-1)^2 = " << cov_budget;
        throw BudgetExhaustedError(msg.str());
    }

    const double scale = static_cast<double>(spec.N) / shrink;
    const double mean_shift = std::sqrt(eps_sq - cov_budget);

    AdversaryPair pair;
    pair.p = GaussianMoments{base_mean, cov};
    pair.q = GaussianMoments{base_mean + mean_shift * direction, (scale * scale) * cov};
    pair.mean_shift_sq = eps_sq - cov_budget;
    pair.cov_budget_sq = cov_budget;
    return pair;
}

AdversaryPair worst_case_kkt(const ProblemSpec& spec, double s) {
    return worst_case_kkt(spec, s, Eigen::VectorXd::Unit(spec.d, 0),
                          Eigen::VectorXd::Zero(spec.d));
}

}  // namespace auxmean
