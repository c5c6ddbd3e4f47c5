#include "wvq/kernels.hpp"

#include "wvq/errors.hpp"

namespace wvq::kernels {

double l2sq_scalar(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double t = a[i] - b[i];
        acc += t * t;
    }
    return acc;
}

std::size_t nearest_row_scalar(const double* z, const double* codes, std::size_t k, std::size_t d,
                               double* best_out) {
    std::size_t best = 0;
    double best_dist = l2sq_scalar(z, codes, d);
    for (std::size_t j = 1; j < k; ++j) {
        double dist = l2sq_scalar(z, codes + j * d, d);
        if (dist < best_dist) { // strict: ties keep the smallest index
            best_dist = dist;
            best = j;
        }
    }
    if (best_out) *best_out = best_dist;
    return best;
}

bool backend_supported(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return "scalar";
    case Backend::Avx2:
        return "avx2";
    case Backend::Neon:
        return "neon";
    }
    return "?";
}

namespace {

Backend pick_default() {
    if (backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (backend_supported(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

Backend g_backend = pick_default();

} // namespace

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
    if (!backend_supported(b)) throw InvalidInput("kernel backend not supported on this CPU: " + backend_name(b));
    g_backend = b;
}

double l2sq(const double* a, const double* b, std::size_t d) {
    switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
        return l2sq_avx2(a, b, d);
#endif
#if defined(__aarch64__)
    case Backend::Neon:
        return l2sq_neon(a, b, d);
#endif
    default:
        return l2sq_scalar(a, b, d);
    }
}

std::size_t nearest_row(const double* z, const double* codes, std::size_t k, std::size_t d,
                        double* best_out) {
    switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
        return nearest_row_avx2(z, codes, k, d, best_out);
#endif
#if defined(__aarch64__)
    case Backend::Neon:
        return nearest_row_neon(z, codes, k, d, best_out);
#endif
    default:
        return nearest_row_scalar(z, codes, k, d, best_out);
    }
}

} // namespace wvq::kernels
