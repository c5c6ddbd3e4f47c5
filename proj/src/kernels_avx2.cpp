// AVX2/FMA distance kernels. This translation unit is compiled with
// -mavx2 -mfma; dispatch in kernels.cpp guarantees these entry points are
// only reached on CPUs that support both.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "wvq/kernels.hpp"

namespace wvq::kernels {

double l2sq_avx2(const double* a, const double* b, std::size_t d) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        __m256d diff = _mm256_sub_pd(va, vb);
        acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d sum2 = _mm_add_pd(lo, hi);
    __m128d sum1 = _mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2));
    double total = _mm_cvtsd_f64(sum1);
    for (; i < d; ++i) {
        double t = a[i] - b[i];
        total += t * t;
    }
    return total;
}

std::size_t nearest_row_avx2(const double* z, const double* codes, std::size_t k, std::size_t d,
                             double* best_out) {
    std::size_t best = 0;
    double best_dist = l2sq_avx2(z, codes, d);
    for (std::size_t j = 1; j < k; ++j) {
        double dist = l2sq_avx2(z, codes + j * d, d);
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
