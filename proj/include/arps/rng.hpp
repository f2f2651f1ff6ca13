#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace arps {

/// Identifies one reproducible noise sequence. Draw k of (seed, stream) is a
/// pure function of (seed, stream, k), so results never depend on how work
/// is split across threads.
struct NoiseSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Independent sub-sequences of one NoiseSpec, used for different purposes
/// so that e.g. bridge uniforms never shift the Gaussian increments.
enum class NoiseLane : std::uint32_t { Gaussian = 0, Bridge = 1, Auxiliary = 2 };

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Random-access view of one lane of a noise sequence.
class CounterStream {
public:
    explicit CounterStream(NoiseSpec spec, NoiseLane lane = NoiseLane::Gaussian) noexcept;

    /// Two standard normals (Box-Muller) from block `block`.
    std::array<double, 2> normal_pair(std::uint64_t block) const noexcept;
    /// Two uniforms in (0, 1) with 53 random bits each.
    std::array<double, 2> uniform_pair(std::uint64_t block) const noexcept;

    double normal_at(std::uint64_t index) const noexcept { return normal_pair(index / 2)[index % 2]; }
    double uniform_at(std::uint64_t index) const noexcept { return uniform_pair(index / 2)[index % 2]; }

private:
    PhiloxCounter raw(std::uint64_t block) const noexcept;

    PhiloxKey key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint32_t lane_bits_;
};

/// Sequential reader over CounterStream that reuses the second half of each
/// block. normal() and uniform() come from separate lanes.
class NoiseCursor {
public:
    explicit NoiseCursor(NoiseSpec spec) noexcept
        : normals_(spec, NoiseLane::Gaussian), uniforms_(spec, NoiseLane::Auxiliary) {}

    double normal() noexcept;
    double uniform() noexcept;

private:
    CounterStream normals_;
    CounterStream uniforms_;
    std::uint64_t normal_index_ = 0;
    std::uint64_t uniform_index_ = 0;
    std::array<double, 2> normal_cache_{};
    std::array<double, 2> uniform_cache_{};
};

/// Draws 0..n-1 of the Gaussian lane of `spec`.
std::vector<double> gaussian_increments(NoiseSpec spec, std::size_t n);

}  // namespace arps
