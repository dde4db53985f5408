#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tonetk {

// Deterministic random source. Draws are produced from a splitmix64-seeded
// mt19937-64 with hand-rolled uniform/normal transforms, so identical seeds
// give identical streams independent of standard-library internals.
// Stages derive independent child streams via child(tag).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();                     // [0, 1)
    double uniform(double lo, double hi); // [lo, hi)
    double normal();                      // N(0, 1), Box-Muller
    std::int64_t uniform_int(std::int64_t n); // [0, n), n > 0

    Rng child(std::uint64_t tag) const;
    std::uint64_t seed() const { return seed_; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<std::int64_t>(i)));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace tonetk
