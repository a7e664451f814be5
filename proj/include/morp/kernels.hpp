#pragma once

// Grid-wide data-parallel loops. Each kernel has a scalar reference and, on
// x86-64 builds, an AVX2 variant; the dispatching entry points pick one at
// runtime from the CPU feature set.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace morp::kernels {

enum class Isa { Scalar, Avx2 };

// Cell-state bytes as stored by OccupancyMap.
inline constexpr std::int8_t kInnavigable = -1;
inline constexpr std::int8_t kUnexplored = 0;
inline constexpr std::int8_t kExplored = 1;

Isa detected_isa();
Isa active_isa();
// Forces a variant (tests, benchmarking). Requesting Avx2 on a CPU without it falls back to Scalar.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

// out[i] = 1 iff states[i] is unexplored and at least one 8-neighbour is explored.
void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out);
std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value);
std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);

namespace scalar {
void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out);
std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value);
std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
}  // namespace scalar

#if defined(MORP_HAVE_AVX2)
namespace avx2 {
// Only callable when detected_isa() == Isa::Avx2.
void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out);
std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value);
std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
}  // namespace avx2
#endif

bool avx2_compiled();

}  // namespace morp::kernels
