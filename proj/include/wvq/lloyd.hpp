#pragma once

#include <cstddef>
#include <vector>

namespace wvq::lloyd {

enum class DensityKind { Gaussian, Uniform };

// One-dimensional density, discretized on a uniform grid for exact
// conditional-mean arithmetic. Gaussian is truncated to `range`.
struct Density1D {
    DensityKind kind = DensityKind::Gaussian;
    double mean = 0.0;   // Gaussian
    double sigma = 1.0;  // Gaussian
    double lo = -5.0;    // Uniform support / Gaussian truncation
    double hi = 5.0;
    std::size_t grid = 100000;
};

// Fixed point of the Lloyd iteration: each center is the conditional mean
// of its Voronoi interval. Centers come back strictly increasing.
std::vector<double> lloyd_optimal_centers(const Density1D& f, std::size_t k, double tol,
                                          std::size_t max_iter);

// Pearson correlation between the binned center frequency and the
// normalized f^(1/3) profile at the bin midpoints (the d=1 case of the
// f^(d/(d+2)) optimal quantizer density law). For a flat profile the
// correlation is undefined and
// the check degrades to a max-deviation test: 1.0 when the histogram is
// within 2/k of uniform, 0.0 otherwise.
double center_density_check(const std::vector<double>& centers, const Density1D& f,
                            std::size_t bins);

} // namespace wvq::lloyd
