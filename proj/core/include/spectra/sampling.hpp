#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "spectra/csr_matrix.hpp"

namespace spectra {

enum class RngKind { gaussian, rademacher };

std::string_view to_string(RngKind kind);
RngKind parse_rng_kind(std::string_view text);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child stream key for (seed, index); used for per-sample and per-shift streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Random vector for sample `index` of stream `seed`. Entry i depends only on
/// (seed, index, i), so results do not depend on evaluation order.
Vector sample_vector(std::uint64_t seed, std::uint64_t index, std::size_t n, RngKind kind);

}  // namespace spectra
