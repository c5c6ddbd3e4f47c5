#pragma once

#include <vector>

#include "wvq/matrix.hpp"
#include "wvq/quantizer.hpp"

namespace wvq {

// The (E, U, C) evaluation record for one (features, codebook) pair:
// mean squared quantization distortion, fraction of codes used, and
// exponentiated entropy of the usage frequencies.
struct CriterionTriple {
    double quant_error = 0.0;
    double utilization = 0.0;
    double perplexity = 1.0;
};

struct UsageHistogram {
    std::vector<double> probs; // p_k = counts[k] / N
};

double quantization_error(const FeatureBatch& features, const Codebook& codebook,
                          const Assignment& a);
double utilization(const Assignment& a);
UsageHistogram usage_histogram(const Assignment& a);
double perplexity(const UsageHistogram& h);

CriterionTriple criterion_triple(const FeatureBatch& features, const Codebook& codebook,
                                 const Assignment& a);

} // namespace wvq
