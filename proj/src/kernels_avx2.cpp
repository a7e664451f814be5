#include <immintrin.h>

#include <bit>

#include "morp/kernels.hpp"

namespace morp::kernels::avx2 {

namespace {

std::uint8_t frontier_at(const std::int8_t* states, int width, int height, int x, int y) {
  if (states[static_cast<std::size_t>(y) * width + x] != kUnexplored) return 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int nx = x + dx;
      const int ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
      if (states[static_cast<std::size_t>(ny) * width + nx] == kExplored) return 1;
    }
  }
  return 0;
}

inline __m256i load(const std::int8_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

// Per-byte popcount via nibble lookup, summed into four 64-bit lanes.
inline __m256i popcount_bytes_sad(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

}  // namespace

void frontier_mask(const std::int8_t* states, int width, int height, std::uint8_t* out) {
  const __m256i explored = _mm256_set1_epi8(kExplored);
  const __m256i unexplored = _mm256_set1_epi8(kUnexplored);
  const __m256i one = _mm256_set1_epi8(1);
  for (int y = 0; y < height; ++y) {
    const bool interior_row = y > 0 && y + 1 < height;
    int x = 0;
    if (interior_row) {
      const std::int8_t* row = states + static_cast<std::size_t>(y) * width;
      const std::int8_t* up = row - width;
      const std::int8_t* down = row + width;
      out[static_cast<std::size_t>(y) * width] = frontier_at(states, width, height, 0, y);
      x = 1;
      for (; x + 32 + 1 <= width; x += 32) {
        __m256i any = _mm256_cmpeq_epi8(load(up + x - 1), explored);
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(up + x), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(up + x + 1), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(row + x - 1), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(row + x + 1), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(down + x - 1), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(down + x), explored));
        any = _mm256_or_si256(any, _mm256_cmpeq_epi8(load(down + x + 1), explored));
        const __m256i centre = _mm256_cmpeq_epi8(load(row + x), unexplored);
        const __m256i hit = _mm256_and_si256(_mm256_and_si256(any, centre), one);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + static_cast<std::size_t>(y) * width + x), hit);
      }
    }
    for (; x < width; ++x) out[static_cast<std::size_t>(y) * width + x] = frontier_at(states, width, height, x, y);
  }
}

std::size_t count_equal(const std::int8_t* data, std::size_t n, std::int8_t value) {
  const __m256i needle = _mm256_set1_epi8(value);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(load(data + i), needle)));
    count += static_cast<std::size_t>(std::popcount(mask));
  }
  for (; i < n; ++i) count += data[i] == value ? 1 : 0;
  return count;
}

std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, popcount_bytes_sad(_mm256_and_si256(va, vb)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < words; ++i) count += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return count;
}

}  // namespace morp::kernels::avx2
