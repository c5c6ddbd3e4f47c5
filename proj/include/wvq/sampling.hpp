#pragma once

#include <array>
#include <cstddef>

#include "wvq/matrix.hpp"
#include "wvq/rng.hpp"

namespace wvq {

enum class SourceKind { GaussianIso, UniformCube, UniformDisk };

// Parameterization of one sampling distribution:
//   GaussianIso : N_d(mean_shift * 1, scale^2 * I)
//   UniformCube : Unif_d(mean_shift - scale, mean_shift + scale) per coordinate
//   UniformDisk : uniform over the 2-D disk of radius `scale` at `center`
struct SourceSpec {
    SourceKind kind = SourceKind::GaussianIso;
    std::size_t dim = 1;
    double mean_shift = 0.0;
    double scale = 1.0;
    std::array<double, 2> center = {0.0, 0.0};
};

// Draws an n x d batch. Identical (spec, n, seed) gives a bit-identical
// result.
FeatureBatch sample(const SourceSpec& spec, std::size_t n, Seed seed);

} // namespace wvq
