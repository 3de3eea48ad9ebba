#include "sgdlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgdlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t substream_id)
    : base_seed_(base_seed),
      substream_id_(substream_id),
      key_(mix64(base_seed + kGolden * (substream_id + 1))),
      state_(key_) {}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    ++draws_;
    return mix64(state_);
}

double RngStream::next_uniform() {
    // 53 high bits, shifted into (0, 1] so log() below is safe.
    const std::uint64_t x = next_u64();
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below bound must be positive");
    const std::uint64_t x = next_u64();
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(bound)) >> 64);
}

}  // namespace sgdlab
