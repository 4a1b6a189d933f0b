#include "spectra/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Uniform in (0, 1]: 53 random bits, offset away from zero for the logarithm.
double unit_interval(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(RngKind kind) {
    return kind == RngKind::gaussian ? "gaussian" : "rademacher";
}

RngKind parse_rng_kind(std::string_view text) {
    if (text == "gaussian") {
        return RngKind::gaussian;
    }
    if (text == "rademacher") {
        return RngKind::rademacher;
    }
    throw ContractViolation("unknown rng kind '" + std::string(text) + "'");
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

Vector sample_vector(std::uint64_t seed, std::uint64_t index, std::size_t n, RngKind kind) {
    const std::uint64_t key = derive_seed(seed, index);
    Vector v(n);
    if (kind == RngKind::rademacher) {
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = (mix64(key + kGolden * i) >> 63) != 0 ? 1.0 : -1.0;
        }
        return v;
    }
    // Box-Muller on counter pairs (2c, 2c+1) -> entries (2c, 2c+1)
    for (std::size_t i = 0; i < n; i += 2) {
        const std::uint64_t c = i / 2;
        const double u1 = unit_interval(mix64(key + kGolden * (2 * c)));
        const double u2 = unit_interval(mix64(key + kGolden * (2 * c + 1)));
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        v[i] = r * std::cos(theta);
        if (i + 1 < n) {
            v[i + 1] = r * std::sin(theta);
        }
    }
    return v;
}

}  // namespace spectra
