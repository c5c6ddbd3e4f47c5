#include "wvq/distmatch.hpp"

#include <cmath>

#include "wvq/errors.hpp"
#include "wvq/linalg.hpp"

namespace wvq {

namespace {

SymMatrix add_jitter(const SymMatrix& m, double jitter) {
    if (jitter == 0.0) return m;
    SymMatrix out = m;
    for (std::size_t i = 0; i < m.dim(); ++i) out.set(i, i, m.at(i, i) + jitter);
    return out;
}

SymMatrix sym_sandwich(const SymMatrix& s, const SymMatrix& mid) {
    // s * mid * s, symmetrized against roundoff
    Matrix prod = matmul(matmul(s.full(), mid.full()), s.full());
    return SymMatrix::from_full(prod);
}

struct EigChecked {
    linalg::EigenPair ep;
    double log_det = 0.0;
};

// Eigendecomposition that rejects rank-deficient input.
EigChecked eig_full_rank(const SymMatrix& m, const char* what) {
    EigChecked out;
    out.ep = linalg::eigh_sym(m);
    double lam_max = std::abs(out.ep.values.front());
    double tol = 1e-12 * std::max(lam_max, 1.0);
    for (double lam : out.ep.values) {
        if (lam <= tol) throw SingularCovariance(std::string(what) + ": covariance not full rank");
        out.log_det += std::log(lam);
    }
    return out;
}

SymMatrix inverse_from(const EigChecked& e) {
    std::vector<double> inv = e.ep.values;
    for (double& lam : inv) lam = 1.0 / lam;
    return linalg::reconstruct(e.ep, inv);
}

double quad_form(const SymMatrix& m, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) acc += v[i] * m.at(i, j) * v[j];
    return acc;
}

std::vector<double> mean_diff(const GaussianMoments& a, const GaussianMoments& b) {
    if (a.mean.size() != b.mean.size()) throw InvalidInput("gaussian moments: dimension mismatch");
    std::vector<double> d(a.mean.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.mean[i] - b.mean[i];
    return d;
}

} // namespace

GaussianMoments estimate_moments(const FeatureBatch& points) {
    if (points.rows < 2) throw InsufficientData("estimate_moments: need at least 2 points");
    const std::size_t n = points.rows;
    const std::size_t d = points.cols;

    GaussianMoments m;
    m.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = points.row(i);
        for (std::size_t j = 0; j < d; ++j) m.mean[j] += r[j];
    }
    for (double& v : m.mean) v /= static_cast<double>(n);

    Matrix cov(d, d);
    std::vector<double> centered(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = points.row(i);
        for (std::size_t j = 0; j < d; ++j) centered[j] = r[j] - m.mean[j];
        for (std::size_t j = 0; j < d; ++j) {
            double cj = centered[j];
            for (std::size_t l = 0; l <= j; ++l) cov.at(j, l) += cj * centered[l];
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l <= j; ++l) {
            double v = cov.at(j, l) / static_cast<double>(n);
            cov.at(j, l) = v;
            cov.at(l, j) = v;
        }
    m.cov = SymMatrix::from_full(cov);
    return m;
}

double w2_gaussian(const GaussianMoments& a, const GaussianMoments& b, double jitter) {
    std::vector<double> dm = mean_diff(a, b);
    SymMatrix s1 = add_jitter(a.cov, jitter);
    SymMatrix s2 = add_jitter(b.cov, jitter);

    SymMatrix s1_half = linalg::sqrtm_psd(a.cov, jitter);
    SymMatrix inner = sym_sandwich(s1_half, s2);
    SymMatrix cross = linalg::sqrtm_psd(inner, 0.0);

    double arg = 0.0;
    for (double v : dm) arg += v * v;
    arg += s1.trace() + s2.trace() - 2.0 * cross.trace();
    if (arg < 0.0) arg = 0.0; // roundoff when the distributions nearly match
    return std::sqrt(arg);
}

double w2_empirical(const FeatureBatch& features, const Codebook& codebook, double jitter) {
    if (features.cols != codebook.cols) throw InvalidInput("w2_empirical: dimension mismatch");
    return w2_gaussian(estimate_moments(features), estimate_moments(codebook), jitter);
}

WassersteinGrad grad_w2_codebook(const FeatureBatch& features, const Codebook& codebook,
                                 double jitter) {
    if (features.cols != codebook.cols) throw InvalidInput("grad_w2_codebook: dimension mismatch");
    if (jitter <= 0.0) throw InvalidInput("grad_w2_codebook: jitter must be positive");

    const std::size_t k = codebook.rows;
    const std::size_t d = codebook.cols;

    GaussianMoments mf = estimate_moments(features);
    GaussianMoments mc = estimate_moments(codebook);

    double loss = w2_gaussian(mf, mc, jitter);
    if (loss < 1e-9) throw DegenerateGradient("w2 loss too small for a stable gradient");

    // dL/dSigma2 = (1/2L) (I - S1h A^-1/2 S1h) with A = S1h Sigma2 S1h
    SymMatrix s1_half = linalg::sqrtm_psd(mf.cov, jitter);
    SymMatrix s2 = add_jitter(mc.cov, jitter);
    SymMatrix inner = sym_sandwich(s1_half, s2);
    // inner >= jitter^2 analytically; the tiny extra shift keeps the inverse
    // root finite under roundoff
    SymMatrix inner_invroot = linalg::invsqrtm_psd(inner, jitter * jitter * 1e-6);
    SymMatrix correction = sym_sandwich(s1_half, inner_invroot);

    SymMatrix cov_grad(d);
    double inv_2l = 1.0 / (2.0 * loss);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double identity = (i == j) ? 1.0 : 0.0;
            cov_grad.set(i, j, inv_2l * (identity - correction.at(i, j)));
        }

    // dL/dmu2 = (mu2 - mu1) / L
    std::vector<double> mean_grad(d);
    for (std::size_t j = 0; j < d; ++j) mean_grad[j] = (mc.mean[j] - mf.mean[j]) / loss;

    // Chain rule through mu2 = (1/K) sum e_k and the population covariance:
    // dL/de_k = (1/K) dL/dmu2 + (2/K) dL/dSigma2 (e_k - mu2)
    WassersteinGrad g;
    g.loss = loss;
    g.d_codebook = Matrix(k, d);
    double inv_k = 1.0 / static_cast<double>(k);
    std::vector<double> centered(d);
    for (std::size_t r = 0; r < k; ++r) {
        const double* e = codebook.row(r);
        for (std::size_t j = 0; j < d; ++j) centered[j] = e[j] - mc.mean[j];
        double* out = g.d_codebook.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            double acc = mean_grad[j];
            double gc = 0.0;
            for (std::size_t l = 0; l < d; ++l) gc += cov_grad.at(j, l) * centered[l];
            out[j] = inv_k * (acc + 2.0 * gc);
        }
    }
    return g;
}

double kl_gaussian(const GaussianMoments& a, const GaussianMoments& b) {
    std::vector<double> dm = mean_diff(a, b);
    const std::size_t d = dm.size();

    EigChecked e1 = eig_full_rank(a.cov, "kl_gaussian(Sigma1)");
    EigChecked e2 = eig_full_rank(b.cov, "kl_gaussian(Sigma2)");
    SymMatrix s2_inv = inverse_from(e2);

    double trace_term = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) trace_term += s2_inv.at(i, j) * a.cov.at(j, i);

    return 0.5 * (quad_form(s2_inv, dm) + trace_term - static_cast<double>(d) + e2.log_det - e1.log_det);
}

double bhattacharyya_gaussian(const GaussianMoments& a, const GaussianMoments& b) {
    std::vector<double> dm = mean_diff(a, b);
    const std::size_t d = dm.size();

    SymMatrix avg(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) avg.set(i, j, 0.5 * (a.cov.at(i, j) + b.cov.at(i, j)));

    EigChecked e1 = eig_full_rank(a.cov, "bhattacharyya(Sigma1)");
    EigChecked e2 = eig_full_rank(b.cov, "bhattacharyya(Sigma2)");
    EigChecked ea = eig_full_rank(avg, "bhattacharyya(Sigma)");
    SymMatrix avg_inv = inverse_from(ea);

    return 0.125 * quad_form(avg_inv, dm) + 0.5 * (ea.log_det - 0.5 * (e1.log_det + e2.log_det));
}

} // namespace wvq
