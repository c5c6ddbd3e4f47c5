#pragma once

#include <cmath>
#include <cstdint>

namespace wvq {

struct Seed {
    std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent child seed from (parent, tag). Tags keep the
// per-purpose streams of one experiment disjoint.
inline Seed derive_seed(Seed parent, std::uint64_t tag) {
    std::uint64_t s = parent.value ^ (0x9e3779b97f4a7c15ull * (tag + 1));
    std::uint64_t v = splitmix64(s);
    return Seed{v};
}

// xoshiro256++, seeded through splitmix64 so that any 64-bit seed yields a
// well-mixed state.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(Seed seed) {
        std::uint64_t sm = seed.value;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_double_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // One standard normal via Box-Muller. The spare from each generated
    // pair is cached, so consecutive calls consume one uniform pair per
    // two normals.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double_open();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace wvq
