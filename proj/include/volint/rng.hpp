#pragma once

#include <cstdint>
#include <random>

namespace volint {

/// Identifies one reproducible random substream. Replication k of a study
/// uses stream_id = k under the study seed.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

using Engine = std::mt19937_64;

/// Seeds a Mersenne Twister from (seed, stream_id) through std::seed_seq so
/// neighbouring stream ids give decorrelated initial states.
inline Engine make_engine(const RngStream& rng) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(rng.seed & 0xffffffffu),
        static_cast<std::uint32_t>(rng.seed >> 32),
        static_cast<std::uint32_t>(rng.stream_id & 0xffffffffu),
        static_cast<std::uint32_t>(rng.stream_id >> 32),
        0x5eedu};
    return Engine(seq);
}

} // namespace volint
