#include "wvq/sampling.hpp"

#include "wvq/errors.hpp"

namespace wvq {

FeatureBatch sample(const SourceSpec& spec, std::size_t n, Seed seed) {
    if (n < 1) throw InvalidInput("sample: n must be >= 1");
    if (spec.dim < 1) throw InvalidSpec("sample: dim must be >= 1");
    if (spec.scale <= 0.0) throw InvalidSpec("sample: scale must be positive");
    if (spec.kind == SourceKind::UniformDisk && spec.dim != 2)
        throw InvalidSpec("UniformDisk requires dim == 2");

    Xoshiro256pp rng(seed);
    FeatureBatch batch(n, spec.dim);

    switch (spec.kind) {
    case SourceKind::GaussianIso:
        for (double& v : batch.data) v = spec.mean_shift + spec.scale * rng.next_normal();
        break;
    case SourceKind::UniformCube:
        for (double& v : batch.data) v = spec.mean_shift + spec.scale * (2.0 * rng.next_double() - 1.0);
        break;
    case SourceKind::UniformDisk:
        for (std::size_t i = 0; i < n; ++i) {
            // Rejection from the bounding square keeps the density exactly
            // uniform; acceptance rate is pi/4.
            double x, y;
            do {
                x = 2.0 * rng.next_double() - 1.0;
                y = 2.0 * rng.next_double() - 1.0;
            } while (x * x + y * y > 1.0);
            batch.at(i, 0) = spec.center[0] + spec.scale * x;
            batch.at(i, 1) = spec.center[1] + spec.scale * y;
        }
        break;
    }
    return batch;
}

} // namespace wvq
