#pragma once

#include <cstdint>

#include "normal.hpp"
#include "vec.hpp"

namespace adimc {

// Counter-based uniform stream: value i is a pure function of (key, i), so
// substreams are reproducible and independent of evaluation order.
// Mixing is the splitmix64 finalizer over key + i*golden-ratio increments.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed-derivation rule (documented contract, stable across releases):
//   derive_key(k, i) = mix64(mix64(k + golden) + i*golden)
// Replicate i of a study derives its run key from the base seed with index i;
// a second phase inside one run (NADIS fresh samples) derives index 1 from the
// run key, the main phase uses index 0.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t index) {
    return mix64(mix64(key + kGolden) + index * kGolden);
}

class NormalStream {
public:
    explicit NormalStream(std::uint64_t key) : key_(key) {}

    // Uniform on (0,1), both endpoints excluded: 53-bit mantissa offset by 1/2 ulp.
    double next_uniform() {
        const std::uint64_t z = mix64(key_ + (++n_) * kGolden);
        return (static_cast<double>(z >> 11) + 0.5) * 0x1p-53;
    }

    double next() { return normal_quantile(next_uniform()); }

    void fill(Vec& out) {
        for (double& x : out) x = next();
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t consumed() const { return n_; }

private:
    std::uint64_t key_;
    std::uint64_t n_ = 0;
};

}  // namespace adimc
