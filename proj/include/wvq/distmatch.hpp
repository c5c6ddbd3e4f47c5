#pragma once

#include <vector>

#include "wvq/matrix.hpp"

namespace wvq {

struct GaussianMoments {
    std::vector<double> mean;
    SymMatrix cov; // population-normalized (1/n), PSD up to roundoff
};

struct WassersteinGrad {
    Matrix d_codebook; // K x d, dL/de_k
    double loss = 0.0; // the W2 value the gradient belongs to
};

// Sample mean and population covariance of a point set (n >= 2).
GaussianMoments estimate_moments(const FeatureBatch& points);

// Closed-form quadratic Wasserstein distance between two Gaussians:
// sqrt(||mu1-mu2||^2 + tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2)), with the
// trace argument clamped at zero before the outer square root. `jitter`
// is added to both covariance diagonals before any matrix square root.
double w2_gaussian(const GaussianMoments& a, const GaussianMoments& b, double jitter);

// w2_gaussian over the sample moments of the two point sets.
double w2_empirical(const FeatureBatch& features, const Codebook& codebook, double jitter);

// Analytic gradient of w2_empirical with respect to every code vector,
// via the chain rule through the codebook sample mean and covariance.
// Throws DegenerateGradient when the distance is below 1e-9.
WassersteinGrad grad_w2_codebook(const FeatureBatch& features, const Codebook& codebook,
                                 double jitter);

// KL divergence between Gaussians; requires b.cov (and a.cov, through the
// log-determinant ratio) to be strictly positive definite.
double kl_gaussian(const GaussianMoments& a, const GaussianMoments& b);

// Bhattacharyya distance between Gaussians; requires both covariances and
// their average to be strictly positive definite.
double bhattacharyya_gaussian(const GaussianMoments& a, const GaussianMoments& b);

} // namespace wvq
