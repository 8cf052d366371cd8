#pragma once

#include <cstdint>

namespace mizo {

// Counter-based random stream. Every draw is a pure function of
// (seed, stream, counter), so independent consumers (episodes, chains)
// can be given disjoint streams and replayed without shared state.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream_ + 1);
        z += 0xbf58476d1ce4e5b9ULL * (++counter_);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // index into [0, n)
    std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

    // +1 or -1
    double next_sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    // standard normal via Box-Muller (consumes two draws)
    double next_gaussian();

    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

}  // namespace mizo
