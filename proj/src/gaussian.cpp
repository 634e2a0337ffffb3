#include "auxmean/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace auxmean {

namespace {

double max_abs(const Eigen::MatrixXd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXd SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("spectral_decompose: matrix must be square");
    }
    const double deviation = max_abs(m - m.transpose());
    if (deviation > kSymmetryTol * max_abs(m)) {
        std::ostringstream msg;
        msg << "asymmetric matrix: max |m - m^T| entry is " << deviation;
        throw std::invalid_argument(msg.str());
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(m));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_decompose: eigendecomposition failed");
    }

    // Eigen sorts nondecreasing; flip to nonincreasing.
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    SpectralDecomposition sd = spectral_decompose(m);
    const double lambda_max = sd.eigenvalues.size() > 0 ? sd.eigenvalues(0) : 0.0;
    const double floor = -kPsdClampTol * std::max(lambda_max, 0.0);

    // Two-sided dead band: |ev| at rounding-noise scale must map to exactly
    // zero variance, or degenerate covariances would sample off their support.
    Eigen::VectorXd roots(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        const double ev = sd.eigenvalues(i);
        if (ev < floor) {
            std::ostringstream msg;
            msg << "not PSD: eigenvalue " << ev << " below clamp band " << floor;
            throw std::invalid_argument(msg.str());
        }
        roots(i) = ev <= -floor ? 0.0 : std::sqrt(ev);
    }

    return symmetrized(sd.eigenvectors * roots.asDiagonal() * sd.eigenvectors.transpose());
}

GaussianMoments make_moments(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
    if (cov.rows() != cov.cols()) {
        throw std::invalid_argument("make_moments: covariance must be square");
    }
    if (mean.size() != cov.rows()) {
        throw std::invalid_argument("make_moments: mean length does not match covariance dimension");
    }

    SpectralDecomposition sd = spectral_decompose(cov);
    const double lambda_max = sd.eigenvalues.size() > 0 ? sd.eigenvalues(0) : 0.0;
    const double floor = -kPsdClampTol * std::max(lambda_max, 0.0);

    bool clamped = false;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        const double ev = sd.eigenvalues(i);
        if (ev < floor) {
            std::ostringstream msg;
            msg << "not PSD: eigenvalue " << ev << " below clamp band " << floor;
            throw std::invalid_argument(msg.str());
        }
        if (ev < 0.0) {
            sd.eigenvalues(i) = 0.0;
            clamped = true;
        }
    }
    // Keep the caller's bits when no clamping was needed.
    if (clamped) {
        cov = symmetrized(sd.reconstruct());
    }
    return GaussianMoments{std::move(mean), std::move(cov)};
}

double gelbrich_w2_squared(const GaussianMoments& p, const GaussianMoments& q) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("gelbrich_w2_squared: dimension mismatch");
    }
    if (p.mean == q.mean && p.cov == q.cov) return 0.0;

    // Tr((Sp^{1/2} Sq Sp^{1/2})^{1/2}) equals the nuclear norm of
    // Sp^{1/2} Sq^{1/2}; singular values avoid taking sqrt of eigenvalues at
    // rounding-noise scale, which matters for rank-deficient covariances.
    const Eigen::MatrixXd root_p = psd_sqrt(p.cov);
    const Eigen::MatrixXd root_q = psd_sqrt(q.cov);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(root_p * root_q);
    const double cross_trace = svd.singularValues().sum();

    const double value = (p.mean - q.mean).squaredNorm() + p.cov.trace() + q.cov.trace() -
                         2.0 * cross_trace;
    return std::max(value, 0.0);
}

}  // namespace auxmean
