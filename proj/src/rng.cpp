#include "arps/rng.hpp"

#include <cmath>
#include <numbers>

namespace arps {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// (0, 1) open interval: the midpoint of one of 2^53 equal cells.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits & ((1ULL << 53) - 1)) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

CounterStream::CounterStream(NoiseSpec spec, NoiseLane lane) noexcept
    : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
      stream_lo_(static_cast<std::uint32_t>(spec.stream)),
      stream_hi_(static_cast<std::uint32_t>(spec.stream >> 32)),
      lane_bits_(static_cast<std::uint32_t>(lane) << 28) {}

// Counter layout: (block lo, block hi | lane << 28, stream lo, stream hi).
PhiloxCounter CounterStream::raw(std::uint64_t block) const noexcept {
    const PhiloxCounter ctr{static_cast<std::uint32_t>(block),
                            static_cast<std::uint32_t>(block >> 32) ^ lane_bits_, stream_lo_, stream_hi_};
    return philox4x32(ctr, key_);
}

std::array<double, 2> CounterStream::uniform_pair(std::uint64_t block) const noexcept {
    const auto r = raw(block);
    return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
}

std::array<double, 2> CounterStream::normal_pair(std::uint64_t block) const noexcept {
    const auto [u1, u2] = uniform_pair(block);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double NoiseCursor::normal() noexcept {
    if (normal_index_ % 2 == 0) normal_cache_ = normals_.normal_pair(normal_index_ / 2);
    return normal_cache_[normal_index_++ % 2];
}

double NoiseCursor::uniform() noexcept {
    if (uniform_index_ % 2 == 0) uniform_cache_ = uniforms_.uniform_pair(uniform_index_ / 2);
    return uniform_cache_[uniform_index_++ % 2];
}

std::vector<double> gaussian_increments(NoiseSpec spec, std::size_t n) {
    const CounterStream stream(spec);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const auto pair = stream.normal_pair(i / 2);
        out[i] = pair[0];
        if (i + 1 < n) out[i + 1] = pair[1];
    }
    return out;
}

}  // namespace arps
