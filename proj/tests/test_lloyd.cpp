#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wvq/errors.hpp"
#include "wvq/lloyd.hpp"

using namespace wvq::lloyd;

namespace {

Density1D uniform01() {
    Density1D f;
    f.kind = DensityKind::Uniform;
    f.lo = 0.0;
    f.hi = 1.0;
    return f;
}

Density1D std_normal() {
    Density1D f;
    f.kind = DensityKind::Gaussian;
    f.mean = 0.0;
    f.sigma = 1.0;
    f.lo = -6.0;
    f.hi = 6.0;
    return f;
}

} // namespace

TEST_CASE("uniform density: centers land on the midpoint lattice") {
    for (std::size_t k : {1, 2, 4, 16, 64}) {
        auto centers = lloyd_optimal_centers(uniform01(), k, 1e-12, 500);
        REQUIRE(centers.size() == k);
        for (std::size_t i = 0; i < k; ++i) {
            double expect = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(k));
            CHECK(std::abs(centers[i] - expect) < 1e-8);
        }
    }
}

TEST_CASE("centers are strictly increasing and inside the support") {
    auto centers = lloyd_optimal_centers(std_normal(), 64, 1e-10, 2000);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        CHECK(centers[i] > -6.0);
        CHECK(centers[i] < 6.0);
        if (i > 0) CHECK(centers[i] > centers[i - 1]);
    }
}

TEST_CASE("symmetric density gives symmetric centers") {
    auto centers = lloyd_optimal_centers(std_normal(), 32, 1e-10, 2000);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(centers[i] == doctest::Approx(-centers[31 - i]).epsilon(1e-6));
}

TEST_CASE("k = 1 recovers the density mean") {
    auto g = lloyd_optimal_centers(std_normal(), 1, 1e-12, 100);
    CHECK(std::abs(g[0]) < 1e-9);

    Density1D shifted = std_normal();
    shifted.mean = 2.0;
    shifted.lo = -4.0;
    shifted.hi = 8.0;
    auto s = lloyd_optimal_centers(shifted, 1, 1e-12, 100);
    CHECK(s[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("two-center fixed point for the standard normal") {
    // centers at +-E[|X|] = +-sqrt(2/pi)
    auto centers = lloyd_optimal_centers(std_normal(), 2, 1e-12, 500);
    double expect = std::sqrt(2.0 / 3.14159265358979323846);
    CHECK(centers[0] == doctest::Approx(-expect).epsilon(1e-4));
    CHECK(centers[1] == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("fixed-point property: each center is its interval's conditional mean") {
    Density1D f = std_normal();
    auto centers = lloyd_optimal_centers(f, 16, 1e-12, 5000);
    // numeric conditional means on a fine independent grid
    const std::size_t n = 2000000;
    double h = (f.hi - f.lo) / static_cast<double>(n);
    std::vector<double> m(16, 0.0), w(16, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double x = f.lo + (static_cast<double>(j) + 0.5) * h;
        std::size_t c = 0;
        double best = std::abs(x - centers[0]);
        for (std::size_t i = 1; i < 16; ++i) {
            double d = std::abs(x - centers[i]);
            if (d < best) {
                best = d;
                c = i;
            }
        }
        double p = std::exp(-0.5 * x * x);
        m[c] += p * x;
        w[c] += p;
    }
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(centers[i] == doctest::Approx(m[i] / w[i]).epsilon(1e-4));
}

TEST_CASE("center histogram tracks the cube root of the gaussian density") {
    auto centers = lloyd_optimal_centers(std_normal(), 256, 1e-10, 5000);
    CHECK(center_density_check(centers, std_normal(), 16) > 0.98);
}

TEST_CASE("flat profile falls back to the uniformity bound") {
    auto centers = lloyd_optimal_centers(uniform01(), 64, 1e-12, 500);
    CHECK(center_density_check(centers, uniform01(), 8) == 1.0);
}

TEST_CASE("invalid parameters rejected") {
    Density1D coarse = std_normal();
    coarse.grid = 10;
    CHECK_THROWS_AS(lloyd_optimal_centers(coarse, 4, 1e-9, 100), wvq::InvalidInput);

    Density1D bad_sigma = std_normal();
    bad_sigma.sigma = 0.0;
    CHECK_THROWS_AS(lloyd_optimal_centers(bad_sigma, 4, 1e-9, 100), wvq::InvalidInput);

    Density1D flipped = std_normal();
    flipped.lo = 1.0;
    flipped.hi = -1.0;
    CHECK_THROWS_AS(lloyd_optimal_centers(flipped, 4, 1e-9, 100), wvq::InvalidInput);

    CHECK_THROWS_AS(lloyd_optimal_centers(std_normal(), 0, 1e-9, 100), wvq::InvalidInput);
    CHECK_THROWS_AS(lloyd_optimal_centers(std_normal(), 4, 0.0, 100), wvq::InvalidInput);

    auto centers = lloyd_optimal_centers(std_normal(), 64, 1e-9, 1000);
    CHECK_THROWS_AS(center_density_check(centers, std_normal(), 1), wvq::InsufficientResolution);
    std::vector<double> few(centers.begin(), centers.begin() + 8);
    CHECK_THROWS_AS(center_density_check(few, std_normal(), 4), wvq::InvalidInput);
}
