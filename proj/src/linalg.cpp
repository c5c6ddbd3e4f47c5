#include "wvq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wvq/errors.hpp"

namespace wvq::linalg {

namespace {

double offdiag_max(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j) m = std::max(m, std::abs(a.at(i, j)));
    return m;
}

} // namespace

EigenPair eigh_sym(const SymMatrix& m) {
    if (!m.all_finite()) throw InvalidInput("eigh_sym: non-finite entries");
    const std::size_t n = m.dim();
    Matrix a = m.full();
    Matrix v = Matrix::identity(n);

    const double threshold = 1e-12 * std::max(m.frobenius_norm(), 1e-300);
    const int max_sweeps = 128;
    for (int sweep = 0; sweep < max_sweeps && offdiag_max(a) > threshold; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (std::abs(apq) <= threshold) continue;
                double app = a.at(p, p);
                double aqq = a.at(q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a.at(i, p);
                    double aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double apj = a.at(p, j);
                    double aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * aqj;
                    a.at(q, j) = s * apj + c * aqj;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;

                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v.at(i, p);
                    double viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a.at(x, x) > a.at(y, y); });

    EigenPair ep;
    ep.values.resize(n);
    ep.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        ep.values[j] = a.at(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) ep.vectors.at(i, j) = v.at(i, order[j]);
    }
    return ep;
}

SymMatrix reconstruct(const EigenPair& ep, const std::vector<double>& vals) {
    const std::size_t n = ep.values.size();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = vals[k];
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            double vik = ep.vectors.at(i, k) * lam;
            for (std::size_t j = 0; j <= i; ++j) out.at(i, j) += vik * ep.vectors.at(j, k);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) out.at(j, i) = out.at(i, j);
    return SymMatrix::from_full(out);
}

namespace {

std::vector<double> clamped_eigenvalues(const SymMatrix& m, const EigenPair& ep) {
    double floor = -1e-6 * m.frobenius_norm();
    std::vector<double> vals = ep.values;
    for (double& lam : vals) {
        if (lam < floor) throw NotPSD("matrix has a significantly negative eigenvalue");
        if (lam < 0.0) lam = 0.0;
    }
    return vals;
}

} // namespace

SymMatrix sqrtm_psd(const SymMatrix& m, double jitter) {
    EigenPair ep = eigh_sym(m);
    std::vector<double> vals = clamped_eigenvalues(m, ep);
    for (double& lam : vals) lam = std::sqrt(lam + jitter);
    return reconstruct(ep, vals);
}

SymMatrix invsqrtm_psd(const SymMatrix& m, double jitter) {
    EigenPair ep = eigh_sym(m);
    std::vector<double> vals = clamped_eigenvalues(m, ep);
    for (double& lam : vals) {
        double shifted = lam + jitter;
        if (shifted <= 0.0) throw NotPSD("invsqrtm_psd: eigenvalue + jitter not positive");
        lam = 1.0 / std::sqrt(shifted);
    }
    return reconstruct(ep, vals);
}

} // namespace wvq::linalg
