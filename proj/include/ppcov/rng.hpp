#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace ppcov {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Identifies an independent random stream. The pair fully determines the
/// sequence: the master seed is the Philox key, the stream id occupies the
/// high half of the 128-bit counter and the low half counts blocks.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// Name recorded in run metadata.
inline constexpr std::string_view rng_family = "philox4x32-10";

/// SplitMix64-style mixing of a seed with a path of integers. Used to key
/// nested substreams (replication, split, purpose) off one master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Stateful generator over one RngStream. Satisfies UniformRandomBitGenerator
/// but the variate methods below are the ones the library uses, so results
/// do not depend on the standard library's distribution implementations.
class Generator {
public:
    using result_type = std::uint32_t;

    explicit Generator(RngStream stream) noexcept;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    /// Uniform integer in [lo, hi], unbiased (rejection sampling).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;
    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the U^(1/shape) boost.
    double gamma(double shape);
    /// Chi-square with `df` (> 0) degrees of freedom.
    double chi_square(double df);

    RngStream stream() const noexcept { return stream_; }

private:
    void refill() noexcept;

    RngStream stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned next_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ppcov
