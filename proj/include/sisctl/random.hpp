#pragma once

#include <cstdint>
#include <random>

namespace sisctl {

/// Purposes that get an independent random stream from one master seed.
enum class Stream : std::uint64_t {
    Placement = 0x706c6163656d656eULL,
    Weights = 0x7765696768747321ULL,
    InitialState = 0x696e697473746174ULL,
    Probe = 0x70726f6265747269ULL,
};

class Rng {
public:
    Rng(std::uint64_t master_seed, Stream purpose);
    explicit Rng(std::uint64_t raw_seed);

    /// Uniform draw in the open interval (0, 1), built from the top 53 bits
    /// so the sequence does not depend on the standard library's
    /// distribution implementation.
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sisctl
