#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qfalab {

// splitmix64 finalizer; used to derive independent per-trial seeds so that
// randomized suites give identical results regardless of evaluation order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic generator. All randomness in the library flows through an
// explicit seed; there is no ambient RNG state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in (0, 1]; the offset keeps log() finite.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    }

    std::size_t index(std::size_t bound) {
        return static_cast<std::size_t>(gen_() % bound);
    }

    // Box-Muller; avoids the implementation-defined std::normal_distribution
    // so that identical seeds give identical streams.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qfalab
