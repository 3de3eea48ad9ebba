#pragma once

#include <cstdint>

namespace sgdlab {

// SplitMix64 finalizer. Used both to derive stream keys and to
// turn counter states into output words.
std::uint64_t mix64(std::uint64_t x);

// Counter-based generator: every draw advances a counter by a fixed
// odd constant and hashes it, so streams indexed by (base_seed,
// substream_id) are reproducible and independent of call interleaving
// across other streams.
class RngStream {
  public:
    RngStream(std::uint64_t base_seed, std::uint64_t substream_id);

    std::uint64_t next_u64();

    // Uniform on (0, 1].
    double next_uniform();

    // Standard normal via Box-Muller; consumes two words per call and
    // keeps no cached spare, so the draw count per call is fixed.
    double next_normal();

    // Uniform integer in [0, bound) via Lemire multiply-shift.
    std::uint64_t next_below(std::uint64_t bound);

    std::uint64_t key() const { return key_; }
    std::uint64_t draws() const { return draws_; }
    std::uint64_t base_seed() const { return base_seed_; }
    std::uint64_t substream_id() const { return substream_id_; }

  private:
    std::uint64_t base_seed_;
    std::uint64_t substream_id_;
    std::uint64_t key_;
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

}  // namespace sgdlab
