#include "morp/kernels.hpp"

#include <atomic>
#include <bit>

namespace morp::kernels {

namespace scalar {

void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      std::uint8_t hit = 0;
      if (states[i] == kUnexplored) {
        for (int dy = -1; dy <= 1 && !hit; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
            if (states[static_cast<std::size_t>(ny) * width + nx] == kExplored) {
              hit = 1;
              break;
            }
          }
        }
      }
      out[i] = hit;
    }
  }
}

std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += data[i] == value ? 1 : 0;
  return count;
}

std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < words; ++i) count += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return count;
}

}  // namespace scalar

namespace {

Isa probe() {
#if defined(MORP_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

}  // namespace

bool avx2_compiled() {
#if defined(MORP_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  selected().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out) {
#if defined(MORP_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::frontier_mask(states, width, height, out);
#endif
  scalar::frontier_mask(states, width, height, out);
}

std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value) {
#if defined(MORP_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::count_equal(data, n, value);
#endif
  return scalar::count_equal(data, n, value);
}

std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
#if defined(MORP_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::popcount_and(a, b, words);
#endif
  return scalar::popcount_and(a, b, words);
}

}  // namespace morp::kernels
