// NEON distance kernels for aarch64.
#if defined(__aarch64__)

#include <arm_neon.h>

#include "wvq/kernels.hpp"

namespace wvq::kernels {

double l2sq_neon(const double* a, const double* b, std::size_t d) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= d; i += 2) {
        float64x2_t va = vld1q_f64(a + i);
        float64x2_t vb = vld1q_f64(b + i);
        float64x2_t diff = vsubq_f64(va, vb);
        acc = vfmaq_f64(acc, diff, diff);
    }
    double total = vaddvq_f64(acc);
    for (; i < d; ++i) {
        double t = a[i] - b[i];
        total += t * t;
    }
    return total;
}

std::size_t nearest_row_neon(const double* z, const double* codes, std::size_t k, std::size_t d,
                             double* best_out) {
    std::size_t best = 0;
    double best_dist = l2sq_neon(z, codes, d);
    for (std::size_t j = 1; j < k; ++j) {
        double dist = l2sq_neon(z, codes + j * d, d);
        if (dist < best_dist) {
            best_dist = dist;
            best = j;
        }
    }
    if (best_out) *best_out = best_dist;
    return best;
}

} // namespace wvq::kernels

#endif
