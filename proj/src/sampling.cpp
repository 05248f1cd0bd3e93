#include "verdalca/sampling.hpp"

#include <cmath>
#include <numbers>

#include "verdalca/database.hpp"

namespace verdalca {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t run, std::uint64_t stream) noexcept
    : base_(splitmix64(splitmix64(splitmix64(seed) ^ run) ^ stream)) {}

std::uint64_t CounterRng::next_u64() noexcept { return splitmix64(base_ + 0xD1B54A32D192ED03ULL * ++counter_); }

double CounterRng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::standard_normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t stream_key(std::string_view parameter_id) noexcept { return fnv1a64(parameter_id); }

double draw(const UncertaintySpec& spec, double base, CounterRng& rng) {
    return std::visit(
        [&](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, FixedDist>) {
                return base;
            } else if constexpr (std::is_same_v<D, LognormalDist>) {
                return base * std::exp(std::log(d.gsd) * rng.standard_normal());
            } else if constexpr (std::is_same_v<D, NormalDist>) {
                return base + d.sd * rng.standard_normal();
            } else if constexpr (std::is_same_v<D, UniformDist>) {
                return d.lo + (d.hi - d.lo) * rng.uniform();
            } else {
                const double u = rng.uniform();
                const double width = d.hi - d.lo;
                if (width <= 0.0) return d.lo;
                const double cut = (d.mode - d.lo) / width;
                if (u < cut) return d.lo + std::sqrt(u * width * (d.mode - d.lo));
                return d.hi - std::sqrt((1.0 - u) * width * (d.hi - d.mode));
            }
        },
        spec);
}

double sample_parameter(const UncertaintySpec& spec, double base, std::uint64_t seed, std::uint64_t run,
                        std::string_view parameter_id) {
    CounterRng rng(seed, run, stream_key(parameter_id));
    return draw(spec, base, rng);
}

}  // namespace verdalca
