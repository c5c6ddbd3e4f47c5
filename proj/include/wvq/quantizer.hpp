#pragma once

#include <cstdint>
#include <vector>

#include "wvq/matrix.hpp"

namespace wvq {

// Nearest-code indices plus per-code occupancy counts.
struct Assignment {
    std::vector<std::uint32_t> indices; // length N, values in [0, K)
    std::vector<std::uint64_t> counts;  // length K, sums to N
};

// Maps every feature to its nearest code vector (squared Euclidean
// distance, ties to the smallest index).
Assignment quantize(const FeatureBatch& features, const Codebook& codebook);

// Row i of the result is the codebook row the assignment picked for
// feature i.
FeatureBatch quantized_vectors(const FeatureBatch& features, const Codebook& codebook,
                               const Assignment& a);

} // namespace wvq
