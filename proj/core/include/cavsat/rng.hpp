#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cavsat {

/// splitmix64 finalizer. Used to derive independent, reproducible seeds
/// from (base seed, tag, tag, ...) tuples.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return mix64(mix64(base) ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

/// Deterministic RNG. std::mt19937_64 itself is fully specified by the
/// standard, but the <random> distributions are not, so every derived draw
/// (bounded integers, reals, coins, Poisson, shuffles) is implemented here
/// to keep results bit-identical across platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin() { return (next() >> 63) != 0; }

    /// Unbiased uniform integer in [0, n). Lemire's rejection scheme.
    std::uint32_t below(std::uint32_t n) {
        assert(n > 0);
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = (~n + 1u) % n;  // 2^32 mod n
            while (low < threshold) {
                x = next() >> 32;
                m = x * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::size_t index(std::size_t n) {
        assert(n > 0 && n <= 0xffffffffULL);
        return below(static_cast<std::uint32_t>(n));
    }

    /// Poisson draw by Knuth's product method; large means are split using
    /// additivity so the running product never underflows.
    std::uint32_t poisson(double mean) {
        assert(mean >= 0.0);
        std::uint32_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint32_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint32_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::mt19937_64 gen_;
};

}  // namespace cavsat
