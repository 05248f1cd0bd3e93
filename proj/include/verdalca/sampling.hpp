#pragma once

#include <cstdint>
#include <string_view>

#include "verdalca/types.hpp"

namespace verdalca {

/// Counter-based generator: every draw is a pure function of
/// (seed, run, stream key, counter), so runs can execute in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t run, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double standard_normal() noexcept;

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream key for a parameter id.
std::uint64_t stream_key(std::string_view parameter_id) noexcept;

/// One draw of `spec` around `base` from the given generator.
double draw(const UncertaintySpec& spec, double base, CounterRng& rng);

/// Draw for (seed, run, parameter id); independent of every other draw.
double sample_parameter(const UncertaintySpec& spec, double base, std::uint64_t seed, std::uint64_t run,
                        std::string_view parameter_id);

}  // namespace verdalca
