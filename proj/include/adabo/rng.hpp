#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace adabo {

/// Reproducible random stream.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform doubles take the top 53 bits of one draw, and
/// normal deviates use the Marsaglia polar method (pairs are cached), so a
/// seed pins the whole stream independently of the standard library's
/// distribution classes.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lower, upper).
    double uniform(double lower, double upper);
    /// Standard normal deviate.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t mix64(std::uint64_t v);

/// Seed for sub-stream `stream`, element `index`, of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace adabo
