#include <doctest.h>

#include <vector>

#include "morp/kernels.hpp"
#include "morp/rng.hpp"

namespace k = morp::kernels;

namespace {

std::vector<std::int8_t> random_states(morp::Rng& rng, std::size_t n) {
  std::vector<std::int8_t> s(n);
  for (auto& v : s) v = static_cast<std::int8_t>(static_cast<int>(rng.index(3)) - 1);
  return s;
}

// Frontier definition evaluated cell by cell.
std::vector<std::uint8_t> frontier_reference(const std::vector<std::int8_t>& s, int w, int h) {
  std::vector<std::uint8_t> out(s.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (s[y * w + x] != k::kUnexplored) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if ((dx || dy) && nx >= 0 && ny >= 0 && nx < w && ny < h && s[ny * w + nx] == k::kExplored) {
            out[y * w + x] = 1;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar frontier mask matches the neighbourhood definition") {
  morp::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = rng.range(1, 70);
    const int h = rng.range(1, 20);
    const auto s = random_states(rng, static_cast<std::size_t>(w) * h);
    std::vector<std::uint8_t> out(s.size(), 7);
    k::scalar::frontier_mask(s.data(), w, h, out.data());
    CHECK(out == frontier_reference(s, w, h));
  }
}

TEST_CASE("scalar counting kernels") {
  const std::vector<std::int8_t> d{-1, 0, 1, 1, 0, 1, -1};
  CHECK(k::scalar::count_equal(d.data(), d.size(), 1) == 3);
  CHECK(k::scalar::count_equal(d.data(), d.size(), -1) == 2);
  const std::vector<std::uint64_t> a{0xffULL, 0xf0f0ULL, ~0ULL};
  const std::vector<std::uint64_t> b{0x0fULL, 0xff00ULL, 1ULL};
  CHECK(k::scalar::popcount_and(a.data(), b.data(), a.size()) == 4 + 4 + 1);
}

#if defined(MORP_HAVE_AVX2)
TEST_CASE("avx2 kernels equal the scalar reference") {
  if (k::detected_isa() != k::Isa::Avx2) return;
  morp::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = rng.range(1, 140);
    const int h = rng.range(1, 30);
    const auto s = random_states(rng, static_cast<std::size_t>(w) * h);
    std::vector<std::uint8_t> a(s.size(), 3), b(s.size(), 5);
    k::scalar::frontier_mask(s.data(), w, h, a.data());
    k::avx2::frontier_mask(s.data(), w, h, b.data());
    REQUIRE(a == b);
    for (std::int8_t v = -1; v <= 1; ++v) {
      CHECK(k::scalar::count_equal(s.data(), s.size(), v) == k::avx2::count_equal(s.data(), s.size(), v));
    }
    std::vector<std::uint64_t> x(static_cast<std::size_t>(rng.range(0, 37))), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.next();
      y[i] = rng.next();
    }
    CHECK(k::scalar::popcount_and(x.data(), y.data(), x.size()) ==
          k::avx2::popcount_and(x.data(), y.data(), x.size()));
  }
}
#endif

TEST_CASE("isa selection") {
  const k::Isa before = k::active_isa();
  k::set_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::set_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == k::detected_isa());
  k::set_isa(before);
}
