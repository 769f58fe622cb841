#pragma once

#include <cstdint>

namespace cle {

// Counter-based splittable random stream.  A stream is identified by
// (seed, stream_id); the state sequence is a splitmix64 walk whose starting
// point is a strong hash of the pair, so distinct stream ids give
// statistically independent sequences and the same pair always replays the
// same draws.  Trajectory k of an ensemble uses stream_id = k, which is what
// makes serial and parallel runs bit-identical.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // Uniform in (0, 1).
    double uniform();

    // Standard normal (Box-Muller; the spare draw is cached).
    double gaussian();

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cle
