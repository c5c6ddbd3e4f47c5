#include "wvq/metrics.hpp"

#include <cmath>

#include "wvq/errors.hpp"
#include "wvq/kernels.hpp"

namespace wvq {

double quantization_error(const FeatureBatch& features, const Codebook& codebook,
                          const Assignment& a) {
    if (features.cols != codebook.cols) throw InvalidInput("quantization_error: dimension mismatch");
    if (a.indices.size() != features.rows) throw CorruptAssignment("assignment length mismatch");

    double total = 0.0;
    for (std::size_t i = 0; i < features.rows; ++i) {
        std::uint32_t idx = a.indices[i];
        if (idx >= codebook.rows) throw CorruptAssignment("assignment index out of range");
        total += kernels::l2sq(features.row(i), codebook.row(idx), features.cols);
    }
    return total / static_cast<double>(features.rows);
}

double utilization(const Assignment& a) {
    std::size_t used = 0;
    for (std::uint64_t c : a.counts)
        if (c > 0) ++used;
    return static_cast<double>(used) / static_cast<double>(a.counts.size());
}

UsageHistogram usage_histogram(const Assignment& a) {
    if (a.indices.empty() || a.counts.empty())
        throw InvalidInput("usage_histogram: empty assignment");
    UsageHistogram h;
    double n = static_cast<double>(a.indices.size());
    h.probs.resize(a.counts.size());
    for (std::size_t k = 0; k < a.counts.size(); ++k)
        h.probs[k] = static_cast<double>(a.counts[k]) / n;
    return h;
}

double perplexity(const UsageHistogram& h) {
    double entropy = 0.0;
    for (double p : h.probs)
        if (p > 0.0) entropy -= p * std::log(p); // 0*log(0) := 0
    return std::exp(entropy);
}

CriterionTriple criterion_triple(const FeatureBatch& features, const Codebook& codebook,
                                 const Assignment& a) {
    CriterionTriple t;
    t.quant_error = quantization_error(features, codebook, a);
    t.utilization = utilization(a);
    t.perplexity = perplexity(usage_histogram(a));
    return t;
}

} // namespace wvq
