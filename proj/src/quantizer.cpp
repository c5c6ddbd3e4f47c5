#include "wvq/quantizer.hpp"

#include <cstring>

#include "wvq/errors.hpp"
#include "wvq/kernels.hpp"

namespace wvq {

Assignment quantize(const FeatureBatch& features, const Codebook& codebook) {
    if (features.cols != codebook.cols) throw InvalidInput("quantize: dimension mismatch");
    if (features.rows < 1 || codebook.rows < 1) throw InvalidInput("quantize: empty input");

    const std::size_t n = features.rows;
    const std::size_t k = codebook.rows;
    const std::size_t d = features.cols;

    Assignment a;
    a.indices.resize(n);
    a.counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = kernels::nearest_row(features.row(i), codebook.data.data(), k, d, nullptr);
        a.indices[i] = static_cast<std::uint32_t>(best);
        ++a.counts[best];
    }
    return a;
}

FeatureBatch quantized_vectors(const FeatureBatch& features, const Codebook& codebook,
                               const Assignment& a) {
    if (features.cols != codebook.cols) throw InvalidInput("quantized_vectors: dimension mismatch");
    if (a.indices.size() != features.rows) throw CorruptAssignment("assignment length mismatch");

    FeatureBatch out(features.rows, features.cols);
    for (std::size_t i = 0; i < features.rows; ++i) {
        std::uint32_t idx = a.indices[i];
        if (idx >= codebook.rows) throw CorruptAssignment("assignment index out of range");
        std::memcpy(out.row(i), codebook.row(idx), features.cols * sizeof(double));
    }
    return out;
}

} // namespace wvq
