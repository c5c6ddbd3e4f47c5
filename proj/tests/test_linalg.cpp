#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wvq/errors.hpp"
#include "wvq/linalg.hpp"
#include "wvq/rng.hpp"

using namespace wvq;
using namespace wvq::linalg;

namespace {

SymMatrix random_psd(std::size_t d, Xoshiro256pp& rng) {
    Matrix a(d, d);
    for (double& v : a.data) v = rng.next_normal();
    Matrix g = matmul(a, transpose(a));
    for (std::size_t i = 0; i < d; ++i) g.at(i, i) += 0.1;
    return SymMatrix::from_full(g);
}

double recon_error(const SymMatrix& m, const EigenPair& ep) {
    SymMatrix rec = reconstruct(ep, ep.values);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            double d = rec.at(i, j) - m.at(i, j);
            num += d * d;
            den += m.at(i, j) * m.at(i, j);
        }
    return std::sqrt(num) / (1.0 + std::sqrt(den));
}

} // namespace

TEST_CASE("identity eigendecomposition") {
    auto ep = eigh_sym(SymMatrix::identity(3));
    for (double v : ep.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal matrix eigenvalues are sorted descending") {
    auto ep = eigh_sym(SymMatrix::diagonal({1.0, 4.0}));
    CHECK(ep.values[0] == doctest::Approx(4.0));
    CHECK(ep.values[1] == doctest::Approx(1.0));
}

TEST_CASE("2x2 hand-solved eigensystem") {
    SymMatrix m(2);
    m.set(0, 0, 2.0);
    m.set(1, 1, 2.0);
    m.set(0, 1, 1.0);
    auto ep = eigh_sym(m);
    CHECK(ep.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ep.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    // leading eigenvector is (1,1)/sqrt(2) up to sign
    double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ep.vectors.at(0, 0) * ep.vectors.at(1, 0)) == doctest::Approx(s * s).epsilon(1e-10));
}

TEST_CASE("non-finite input rejected") {
    SymMatrix m(2);
    m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(eigh_sym(m), InvalidInput);
}

TEST_CASE("random PSD: reconstruction, orthonormality, trace") {
    Xoshiro256pp rng(Seed{7});
    for (std::size_t d : {2, 5, 16, 32}) {
        SymMatrix m = random_psd(d, rng);
        auto ep = eigh_sym(m);
        CHECK(recon_error(m, ep) < 1e-8);

        // V^T V == I
        Matrix vtv = matmul(transpose(ep.vectors), ep.vectors);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                CHECK(std::abs(vtv.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-8);

        double sum = 0.0;
        for (double v : ep.values) sum += v;
        CHECK(sum == doctest::Approx(m.trace()).epsilon(1e-8));
    }
}

TEST_CASE("sqrtm_psd basics") {
    auto r = sqrtm_psd(SymMatrix::identity(2), 0.0);
    CHECK(r.at(0, 0) == doctest::Approx(1.0));
    CHECK(r.at(0, 1) == doctest::Approx(0.0));

    auto d = sqrtm_psd(SymMatrix::diagonal({4.0, 9.0}), 0.0);
    CHECK(d.at(0, 0) == doctest::Approx(2.0));
    CHECK(d.at(1, 1) == doctest::Approx(3.0));

    SymMatrix m(2);
    m.set(0, 0, 2.0);
    m.set(1, 1, 2.0);
    m.set(0, 1, 1.0);
    auto s = sqrtm_psd(m, 0.0);
    // V diag(sqrt(3), 1) V^T with V = [(1,1),(1,-1)]/sqrt(2)
    double a = (std::sqrt(3.0) + 1.0) / 2.0;
    double b = (std::sqrt(3.0) - 1.0) / 2.0;
    CHECK(s.at(0, 0) == doctest::Approx(a).epsilon(1e-10));
    CHECK(s.at(0, 1) == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("sqrtm_psd squares back to the input") {
    Xoshiro256pp rng(Seed{11});
    for (std::size_t d : {2, 8, 32}) {
        SymMatrix m = random_psd(d, rng);
        SymMatrix r = sqrtm_psd(m, 0.0);
        Matrix sq = matmul(r.full(), r.full());
        double num = 0.0, den = 1.0 + m.frobenius_norm();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double diff = sq.at(i, j) - m.at(i, j);
                num += diff * diff;
            }
        CHECK(std::sqrt(num) / den < 1e-6);
    }
}

TEST_CASE("sqrtm_psd fixed point on projection matrices") {
    // eigenvalues 0/1: the square root is the matrix itself
    Xoshiro256pp rng(Seed{13});
    double v0 = rng.next_normal(), v1 = rng.next_normal();
    double n = std::sqrt(v0 * v0 + v1 * v1);
    v0 /= n;
    v1 /= n;
    SymMatrix p(2);
    p.set(0, 0, v0 * v0);
    p.set(0, 1, v0 * v1);
    p.set(1, 1, v1 * v1);
    SymMatrix r = sqrtm_psd(p, 0.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(r.at(i, j) == doctest::Approx(p.at(i, j)).epsilon(1e-9));
}

TEST_CASE("sqrtm_psd rejects clearly indefinite input") {
    CHECK_THROWS_AS(sqrtm_psd(SymMatrix::diagonal({1.0, -0.5}), 0.0), NotPSD);
}

TEST_CASE("invsqrtm_psd") {
    auto r = invsqrtm_psd(SymMatrix::identity(2), 0.0);
    CHECK(r.at(0, 0) == doctest::Approx(1.0));

    auto d = invsqrtm_psd(SymMatrix::diagonal({4.0, 16.0}), 0.0);
    CHECK(d.at(0, 0) == doctest::Approx(0.5));
    CHECK(d.at(1, 1) == doctest::Approx(0.25));

    // jitter rescues a rank-deficient matrix
    auto j = invsqrtm_psd(SymMatrix::diagonal({0.0, 1.0}), 1e-6);
    CHECK(j.at(0, 0) == doctest::Approx(1000.0).epsilon(1e-6));
    CHECK(j.at(1, 1) == doctest::Approx(1.0).epsilon(1e-5));

    // R (m + jitter I) R == I
    Xoshiro256pp rng(Seed{17});
    SymMatrix m = random_psd(6, rng);
    SymMatrix r6 = invsqrtm_psd(m, 1e-6);
    SymMatrix mj = m;
    for (std::size_t i = 0; i < 6; ++i) mj.set(i, i, m.at(i, i) + 1e-6);
    Matrix prod = matmul(matmul(r6.full(), mj.full()), r6.full());
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j2 = 0; j2 < 6; ++j2)
            CHECK(std::abs(prod.at(i, j2) - (i == j2 ? 1.0 : 0.0)) < 1e-6);
}
