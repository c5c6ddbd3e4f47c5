#include "wvq/lloyd.hpp"

#include <algorithm>
#include <cmath>

#include "wvq/errors.hpp"

namespace wvq::lloyd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double density_at(const Density1D& f, double x) {
    if (f.kind == DensityKind::Uniform) return 1.0;
    double t = (x - f.mean) / f.sigma;
    return std::exp(-0.5 * t * t) / (f.sigma * std::sqrt(2.0 * kPi));
}

// Piecewise-constant discretization with exact partial-cell mass and
// first-moment integrals, so the Lloyd fixed point carries no Monte Carlo
// noise and the uniform case lands on the exact lattice.
struct Grid {
    double lo, hi, h;
    std::vector<double> mass;   // normalized cell masses
    std::vector<double> prefix; // prefix[j] = sum of mass[0..j)
    std::vector<double> mprefix;  // first-moment prefix
    std::vector<double> m2prefix; // second-moment prefix

    Grid(const Density1D& f) {
        if (f.grid < 1000) throw InvalidInput("Density1D: grid must be >= 1000");
        if (!(f.lo < f.hi)) throw InvalidInput("Density1D: lo must be < hi");
        if (f.sigma <= 0.0) throw InvalidInput("Density1D: sigma must be positive");
        lo = f.lo;
        hi = f.hi;
        h = (hi - lo) / static_cast<double>(f.grid);
        mass.resize(f.grid);
        double total = 0.0;
        for (std::size_t j = 0; j < f.grid; ++j) {
            mass[j] = density_at(f, lo + (static_cast<double>(j) + 0.5) * h);
            total += mass[j];
        }
        for (double& m : mass) m /= total;
        prefix.resize(f.grid + 1, 0.0);
        mprefix.resize(f.grid + 1, 0.0);
        m2prefix.resize(f.grid + 1, 0.0);
        for (std::size_t j = 0; j < f.grid; ++j) {
            double a = lo + static_cast<double>(j) * h;
            double b = a + h;
            prefix[j + 1] = prefix[j] + mass[j];
            mprefix[j + 1] = mprefix[j] + mass[j] * 0.5 * (a + b);
            m2prefix[j + 1] = m2prefix[j] + mass[j] * (a * a + a * b + b * b) / 3.0;
        }
    }

    std::size_t cell_of(double x) const {
        double t = (x - lo) / h;
        if (t <= 0.0) return 0;
        std::size_t j = static_cast<std::size_t>(t);
        return std::min(j, mass.size() - 1);
    }

    double mass_to(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        std::size_t j = cell_of(x);
        double frac = (x - (lo + static_cast<double>(j) * h)) / h;
        return prefix[j] + mass[j] * frac;
    }

    double moment_to(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return mprefix.back();
        std::size_t j = cell_of(x);
        double cell_lo = lo + static_cast<double>(j) * h;
        double frac = (x - cell_lo) / h;
        // centroid of the partial segment [cell_lo, x]
        return mprefix[j] + mass[j] * frac * (cell_lo + 0.5 * frac * h);
    }

    double quantile(double q) const {
        auto it = std::upper_bound(prefix.begin(), prefix.end(), q);
        std::size_t j = (it == prefix.begin()) ? 0 : static_cast<std::size_t>(it - prefix.begin()) - 1;
        j = std::min(j, mass.size() - 1);
        double cell_lo = lo + static_cast<double>(j) * h;
        if (mass[j] <= 0.0) return cell_lo;
        return cell_lo + h * (q - prefix[j]) / mass[j];
    }

    double moment2_to(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return m2prefix.back();
        std::size_t j = cell_of(x);
        double a = lo + static_cast<double>(j) * h;
        double frac = (x - a) / h;
        return m2prefix[j] + mass[j] * frac * (a * a + a * x + x * x) / 3.0;
    }

    // Expected squared distance to the nearest center under the
    // discretized density, integrated exactly over the Voronoi intervals.
    double quantization_error(const std::vector<double>& centers) const {
        double err = 0.0;
        double left = lo;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            double right = (i + 1 < centers.size()) ? 0.5 * (centers[i] + centers[i + 1]) : hi;
            double c = centers[i];
            double m0 = mass_to(right) - mass_to(left);
            double m1 = moment_to(right) - moment_to(left);
            double m2 = moment2_to(right) - moment2_to(left);
            err += m2 - 2.0 * c * m1 + c * c * m0;
            left = right;
        }
        return err;
    }
};

} // namespace

std::vector<double> lloyd_optimal_centers(const Density1D& f, std::size_t k, double tol,
                                          std::size_t max_iter) {
    if (k < 1) throw InvalidInput("lloyd_optimal_centers: k must be >= 1");
    if (tol <= 0.0) throw InvalidInput("lloyd_optimal_centers: tol must be positive");
    Grid grid(f);

    // Initialize from quantiles of the f^(1/3) point-density law, which is
    // where the optimal centers concentrate; starting from quantiles of f
    // itself converges extremely slowly and can stall on an over-peaked
    // configuration.
    std::vector<double> w(grid.mass.size());
    std::vector<double> wprefix(grid.mass.size() + 1, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = std::cbrt(grid.mass[j]);
        wprefix[j + 1] = wprefix[j] + w[j];
    }
    double wtotal = wprefix.back();
    std::vector<double> centers(k);
    for (std::size_t i = 0; i < k; ++i) {
        double q = (static_cast<double>(i) + 0.5) / static_cast<double>(k) * wtotal;
        auto it = std::upper_bound(wprefix.begin(), wprefix.end(), q);
        std::size_t j = (it == wprefix.begin()) ? 0 : static_cast<std::size_t>(it - wprefix.begin()) - 1;
        j = std::min(j, w.size() - 1);
        double cell_lo = grid.lo + static_cast<double>(j) * grid.h;
        centers[i] = (w[j] > 0.0) ? cell_lo + grid.h * (q - wprefix[j]) / w[j] : cell_lo;
    }

    double prev_err = grid.quantization_error(centers);
    std::vector<double> next(k);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double move = 0.0;
        double left = grid.lo;
        for (std::size_t i = 0; i < k; ++i) {
            double right = (i + 1 < k) ? 0.5 * (centers[i] + centers[i + 1]) : grid.hi;
            double m = grid.mass_to(right) - grid.mass_to(left);
            next[i] = (m > 0.0) ? (grid.moment_to(right) - grid.moment_to(left)) / m : centers[i];
            move = std::max(move, std::abs(next[i] - centers[i]));
            left = right;
        }
        centers = next;

        double err = grid.quantization_error(centers);
        if (err > prev_err * (1.0 + 1e-9) + 1e-12)
            throw Error("lloyd_optimal_centers: quantization error increased");
        prev_err = err;

        if (move <= tol) break;
    }
    return centers;
}

double center_density_check(const std::vector<double>& centers, const Density1D& f,
                            std::size_t bins) {
    if (centers.size() < 32) throw InvalidInput("center_density_check: need at least 32 centers");
    if (bins < 2) throw InsufficientResolution("center_density_check: need at least 2 bins");

    double lo = centers.front();
    double hi = centers.back();
    double span = hi - lo;
    if (!(span > 0.0)) throw InsufficientResolution("center_density_check: degenerate center range");
    double width = span / static_cast<double>(bins);

    std::vector<double> freq(bins, 0.0);
    for (double c : centers) {
        std::size_t b = std::min(static_cast<std::size_t>((c - lo) / width), bins - 1);
        freq[b] += 1.0 / static_cast<double>(centers.size());
    }
    std::size_t nonempty = 0;
    for (double v : freq)
        if (v > 0.0) ++nonempty;
    if (nonempty < 2) throw InsufficientResolution("center_density_check: fewer than 2 nonempty bins");

    std::vector<double> expected(bins);
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        double mid = lo + (static_cast<double>(b) + 0.5) * width;
        double v = density_at(f, mid);
        expected[b] = std::cbrt(v); // f^(d/(d+2)) with d = 1
        total += expected[b];
    }
    for (double& v : expected) v /= total;

    double mean_f = 1.0 / static_cast<double>(bins);
    double var_e = 0.0;
    for (double v : expected) var_e += (v - mean_f) * (v - mean_f);
    if (var_e < 1e-18) {
        // flat profile: correlation is undefined, fall back to a uniformity
        // deviation bound of 2/k
        double max_dev = 0.0;
        for (double v : freq) max_dev = std::max(max_dev, std::abs(v - mean_f));
        return max_dev <= 2.0 / static_cast<double>(centers.size()) ? 1.0 : 0.0;
    }

    double mean_obs = mean_f; // both histograms sum to 1 over `bins` bins
    double cov = 0.0, var_o = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        cov += (freq[b] - mean_obs) * (expected[b] - mean_f);
        var_o += (freq[b] - mean_obs) * (freq[b] - mean_obs);
    }
    if (var_o < 1e-18) return 0.0;
    return cov / std::sqrt(var_o * var_e);
}

} // namespace wvq::lloyd
