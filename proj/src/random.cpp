#include "sisctl/random.hpp"

namespace sisctl {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t master_seed, Stream purpose)
    : engine_(splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(purpose))))
{
}

Rng::Rng(std::uint64_t raw_seed) : engine_(splitmix64(raw_seed)) {}

double Rng::uniform01()
{
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
}

}  // namespace sisctl
