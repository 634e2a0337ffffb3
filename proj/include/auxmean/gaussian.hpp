#pragma once

#include <Eigen/Dense>

namespace auxmean {

/// Mean vector plus symmetric PSD covariance — the only distribution
/// representation used in this library.
struct GaussianMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    Eigen::Index dim() const { return mean.size(); }
};

/// Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing,
/// eigenvector columns orthonormal.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    Eigen::MatrixXd reconstruct() const;
};

// Symmetry tolerance, relative to the largest absolute entry.
inline constexpr double kSymmetryTol = 1e-10;
// Eigenvalues in [-kPsdClampTol * lambda_max, 0) are clamped to zero;
// anything below that band is rejected as not PSD.
inline constexpr double kPsdClampTol = 1e-10;

/// 0.5 (m + m^T) as a new matrix; safe to assign back to m (in-place
/// `m = 0.5 * (m + m.transpose())` aliases through the transpose).
inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m.transpose();
    out += m;
    return 0.5 * out;
}

/// Decomposes a symmetric matrix. Throws std::invalid_argument on a
/// non-square or asymmetric input (message carries the max deviation).
SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& m);

/// Principal square root of a symmetric PSD matrix. In-band negative
/// eigenvalues are clamped to zero; below-band ones raise "not PSD".
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

/// Checked constructor: validates symmetry and the PSD clamp band, and
/// requires the mean length to match the covariance dimension.
GaussianMoments make_moments(Eigen::VectorXd mean, Eigen::MatrixXd cov);

/// Squared Wasserstein-2 distance between Gaussians with the given moments:
///   ||mu_p - mu_q||^2 + Tr(Sp + Sq - 2 (Sp^{1/2} Sq Sp^{1/2})^{1/2}).
/// The trace expression can round to a tiny negative at p == q; the result
/// is clamped to be nonnegative.
double gelbrich_w2_squared(const GaussianMoments& p, const GaussianMoments& q);

}  // namespace auxmean
