#ifndef JOINTSEG_RNG_HPP
#define JOINTSEG_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace jointseg {

/// Seed derivation for independent streams (replicates, grid cells).
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Reproducible random source. The engine is std::mt19937_64, whose output is
/// fixed by the standard; the distributions are implemented here so draws do
/// not depend on the standard library in use.
class Rng {
public:
    static constexpr std::string_view algorithm =
        "mt19937_64; streams seeded by splitmix64(base ^ splitmix64(stream)); uniform = top 53 bits; "
        "normal = Marsaglia polar; poisson = Knuth product of uniforms; integers = rejection sampling";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    double normal();
    unsigned poisson(double mean);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jointseg

#endif  // JOINTSEG_RNG_HPP
