#pragma once

#include <cstddef>
#include <string>

namespace wvq::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Backend chosen at startup from CPU features; overridable for
// equivalence testing.
Backend active_backend();
void set_backend(Backend b); // throws InvalidInput if unsupported on this CPU
bool backend_supported(Backend b);
std::string backend_name(Backend b);

// Squared Euclidean distance between two length-d vectors.
double l2sq(const double* a, const double* b, std::size_t d);

// Index of the row of `codes` (k rows, contiguous stride d) closest to z in
// squared Euclidean distance. Ties resolve to the smallest index. If
// best_out is non-null it receives the winning squared distance.
std::size_t nearest_row(const double* z, const double* codes, std::size_t k, std::size_t d,
                        double* best_out);

// Reference implementations, always available regardless of the active
// backend. The oracle side of the scalar/SIMD equivalence tests.
double l2sq_scalar(const double* a, const double* b, std::size_t d);
std::size_t nearest_row_scalar(const double* z, const double* codes, std::size_t k, std::size_t d,
                               double* best_out);

#if defined(__x86_64__) || defined(_M_X64)
double l2sq_avx2(const double* a, const double* b, std::size_t d);
std::size_t nearest_row_avx2(const double* z, const double* codes, std::size_t k, std::size_t d,
                             double* best_out);
#endif
#if defined(__aarch64__)
double l2sq_neon(const double* a, const double* b, std::size_t d);
std::size_t nearest_row_neon(const double* z, const double* codes, std::size_t k, std::size_t d,
                             double* best_out);
#endif

} // namespace wvq::kernels
