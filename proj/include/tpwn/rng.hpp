#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tpwn/rational.hpp"

namespace tpwn {

// The project uses std::mt19937_64 throughout: the standard pins down its
// output sequence bit for bit, so seeded results reproduce everywhere.
// Distribution helpers are hand-rolled below for the same reason; the
// standard's distributions are implementation-defined.
using Rng = std::mt19937_64;

// splitmix64 step (Steele/Lea/Flood mixing constants); used to derive
// independent stream seeds from (seed, stream index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed + stream * 0x9e3779b97f4a7c15ull);
}

// Uniform draw from [0, k) by rejection: no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t k) {
    const std::uint64_t threshold = (0 - k) % k;  // 2^64 mod k
    for (;;) {
        std::uint64_t u = rng();
        if (u >= threshold) return u % k;
    }
}

// Exact weighted choice: index j is picked with probability w_j / sum(w).
// Thresholds are ceil(2^64 * cum_j / total) precomputed once; a raw 64-bit
// draw u then lands in bucket j iff u < threshold_j, which reproduces the
// rational probabilities exactly (u < 2^64 q  iff  u < ceil(2^64 q)).
class WeightedPicker {
  public:
    explicit WeightedPicker(const std::vector<Rational>& weights) {
        Rational total = 0;
        for (const auto& w : weights) total += w;
        mpz_class two64 = mpz_class(1) << 64;
        Rational cum = 0;
        thresholds_.reserve(weights.size());
        for (const auto& w : weights) {
            cum += w;
            Rational scaled = cum / total;
            mpz_class t;
            mpz_cdiv_q(t.get_mpz_t(), mpz_class(two64 * scaled.get_num()).get_mpz_t(),
                       scaled.get_den().get_mpz_t());
            // thresholds can reach 2^64 itself (catch-all), hence 128 bits
            unsigned __int128 wide = static_cast<std::uint64_t>(mpz_class(t >> 64).get_ui());
            wide = (wide << 64) | static_cast<std::uint64_t>(mpz_class(t & mpz_class(UINT64_MAX)).get_ui());
            thresholds_.push_back(wide);
        }
    }

    std::size_t pick(Rng& rng) const {
        unsigned __int128 u = rng();
        for (std::size_t j = 0; j + 1 < thresholds_.size(); ++j)
            if (u < thresholds_[j]) return j;
        return thresholds_.size() - 1;
    }

  private:
    std::vector<unsigned __int128> thresholds_;
};

}  // namespace tpwn
