#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <vector>

#include "wvq/errors.hpp"
#include "wvq/quantizer.hpp"
#include "wvq/rng.hpp"
#include "wvq/sampling.hpp"

using namespace wvq;

namespace {

// brute-force oracle, independent of the kernel code
std::vector<std::uint32_t> brute_assign(const FeatureBatch& f, const Codebook& c) {
    std::vector<std::uint32_t> out(f.rows);
    for (std::size_t i = 0; i < f.rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t arg = 0;
        for (std::size_t k = 0; k < c.rows; ++k) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < f.cols; ++j) {
                double diff = f.at(i, j) - c.at(k, j);
                d2 += diff * diff;
            }
            if (d2 < best) {
                best = d2;
                arg = static_cast<std::uint32_t>(k);
            }
        }
        out[i] = arg;
    }
    return out;
}

} // namespace

TEST_CASE("matches the brute-force oracle on random instances") {
    for (std::size_t d : {2, 8, 17}) {
        SourceSpec fs{SourceKind::GaussianIso, d, 0.0, 1.0, {}};
        FeatureBatch f = sample(fs, 500, Seed{31});
        FeatureBatch c = sample(fs, 64, Seed{32});
        Assignment a = quantize(f, c);
        std::vector<std::uint32_t> oracle = brute_assign(f, c);
        CHECK(a.indices == oracle);

        std::vector<std::uint64_t> counts(c.rows, 0);
        std::uint64_t total = 0;
        for (std::uint32_t idx : a.indices) counts[idx]++;
        for (std::uint64_t v : a.counts) total += v;
        CHECK(a.counts == counts);
        CHECK(total == f.rows);
    }
}

TEST_CASE("exact ties resolve to the smallest index") {
    FeatureBatch f(1, 1);
    f.at(0, 0) = 0.0;
    Codebook c(3, 1);
    c.at(0, 0) = 1.0;
    c.at(1, 0) = -1.0;
    c.at(2, 0) = 1.0;
    Assignment a = quantize(f, c);
    CHECK(a.indices[0] == 0);
}

TEST_CASE("idempotence: quantizing the quantized vectors is a fixed point") {
    SourceSpec fs{SourceKind::UniformCube, 4, 0.0, 1.0, {}};
    FeatureBatch f = sample(fs, 300, Seed{33});
    FeatureBatch c = sample(fs, 32, Seed{34});
    Assignment a = quantize(f, c);
    FeatureBatch q = quantized_vectors(f, c, a);
    Assignment a2 = quantize(q, c);
    CHECK(a2.indices == a.indices);
}

TEST_CASE("translation equivariance") {
    SourceSpec fs{SourceKind::GaussianIso, 3, 0.0, 1.0, {}};
    FeatureBatch f = sample(fs, 200, Seed{35});
    FeatureBatch c = sample(fs, 16, Seed{36});
    Assignment a = quantize(f, c);

    FeatureBatch ft = f;
    Codebook ct = c;
    const double shift[] = {3.5, -1.25, 0.75};
    for (std::size_t i = 0; i < ft.rows; ++i)
        for (std::size_t j = 0; j < 3; ++j) ft.at(i, j) += shift[j];
    for (std::size_t k = 0; k < ct.rows; ++k)
        for (std::size_t j = 0; j < 3; ++j) ct.at(k, j) += shift[j];
    Assignment at = quantize(ft, ct);
    CHECK(at.indices == a.indices);
}

TEST_CASE("voronoi consistency: assigned code is never beaten") {
    SourceSpec fs{SourceKind::GaussianIso, 5, 0.0, 1.0, {}};
    FeatureBatch f = sample(fs, 200, Seed{37});
    FeatureBatch c = sample(fs, 40, Seed{38});
    Assignment a = quantize(f, c);
    for (std::size_t i = 0; i < f.rows; ++i) {
        double own = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            double diff = f.at(i, j) - c.at(a.indices[i], j);
            own += diff * diff;
        }
        for (std::size_t k = 0; k < c.rows; ++k) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < 5; ++j) {
                double diff = f.at(i, j) - c.at(k, j);
                d2 += diff * diff;
            }
            CHECK(d2 >= own - 1e-12);
        }
    }
}

TEST_CASE("quantized_vectors gathers codebook rows") {
    FeatureBatch f(2, 2);
    f.at(0, 0) = 10.0;
    f.at(1, 0) = -10.0;
    Codebook c(2, 2);
    c.at(0, 0) = -1.0;
    c.at(0, 1) = 2.0;
    c.at(1, 0) = 1.0;
    c.at(1, 1) = -2.0;
    Assignment a = quantize(f, c);
    FeatureBatch q = quantized_vectors(f, c, a);
    CHECK(q.at(0, 0) == 1.0);
    CHECK(q.at(0, 1) == -2.0);
    CHECK(q.at(1, 0) == -1.0);
    CHECK(q.at(1, 1) == 2.0);
}

TEST_CASE("corrupt assignments are rejected") {
    FeatureBatch f(1, 2);
    Codebook c(2, 2);
    Assignment a = quantize(f, c);
    a.indices[0] = 9;
    CHECK_THROWS_AS(quantized_vectors(f, c, a), CorruptAssignment);
}

TEST_CASE("dimension mismatch is rejected") {
    FeatureBatch f(4, 3);
    Codebook c(2, 2);
    CHECK_THROWS_AS(quantize(f, c), InvalidInput);
}
