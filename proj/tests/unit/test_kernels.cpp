#include <random>

#include "fracpack/kernels.hpp"
#include "helpers.hpp"

using namespace fracpack;

namespace {

std::vector<uint64_t> words(std::mt19937_64& rng, size_t n, size_t bits) {
  std::vector<uint64_t> out(n);
  for (auto& w : out) w = rng() & rng();
  if (bits % 64 && n) out.back() &= (uint64_t{1} << (bits % 64)) - 1;
  return out;
}

void compare_tables(const kernels::KernelTable& a, const kernels::KernelTable& b) {
  std::mt19937_64 rng(2024);
  for (size_t n : {1u, 3u, 4u, 5u, 63u, 64u, 65u, 127u, 200u, 513u}) {
    const size_t nw = kernels::words_for(n);
    std::vector<int64_t> irow(n);
    std::vector<double> drow(n);
    for (size_t j = 0; j < n; ++j) {
      irow[j] = static_cast<int64_t>(rng() % 50) - 5;
      drow[j] = static_cast<double>(rng() % 1000) / 100;
    }
    for (int64_t t : {-10, 0, 7, 20, 60}) {
      std::vector<uint64_t> x(nw, ~0ull), y(nw, ~0ull);
      a.mask_le_i64(irow.data(), n, t, x.data());
      b.mask_le_i64(irow.data(), n, t, y.data());
      CHECK(x == y);
      for (size_t j = 0; j < n; ++j) CHECK(((x[j / 64] >> (j % 64)) & 1) == (irow[j] <= t ? 1u : 0u));
    }
    for (double t : {-1.0, 0.0, 3.33, 9.99}) {
      std::vector<uint64_t> x(nw, ~0ull), y(nw, ~0ull);
      a.mask_le_f64(drow.data(), n, t, x.data());
      b.mask_le_f64(drow.data(), n, t, y.data());
      CHECK(x == y);
    }
    for (int rep = 0; rep < 20; ++rep) {
      auto p = words(rng, nw, n), q = words(rng, nw, n), r = words(rng, nw, n);
      CHECK(a.and_any(p.data(), q.data(), nw) == b.and_any(p.data(), q.data(), nw));
      CHECK(a.and3_any(p.data(), q.data(), r.data(), nw) == b.and3_any(p.data(), q.data(), r.data(), nw));
      CHECK(a.popcount(p.data(), nw) == b.popcount(p.data(), nw));
      CHECK(a.and_popcount(p.data(), q.data(), nw) == b.and_popcount(p.data(), q.data(), nw));
      CHECK(a.is_subset(p.data(), q.data(), nw) == b.is_subset(p.data(), q.data(), nw));
      auto pq = p;
      for (size_t w = 0; w < nw; ++w) pq[w] &= q[w];
      CHECK(a.is_subset(pq.data(), q.data(), nw));
      CHECK(b.is_subset(pq.data(), q.data(), nw));
      auto u1 = p, u2 = p;
      a.andnot_inplace(u1.data(), q.data(), nw);
      b.andnot_inplace(u2.data(), q.data(), nw);
      CHECK(u1 == u2);
      u1 = p, u2 = p;
      a.and_inplace(u1.data(), q.data(), nw);
      b.and_inplace(u2.data(), q.data(), nw);
      CHECK(u1 == u2);
      u1 = p, u2 = p;
      a.or_inplace(u1.data(), q.data(), nw);
      b.or_inplace(u2.data(), q.data(), nw);
      CHECK(u1 == u2);
    }
  }
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar table is complete") {
    const auto& s = kernels::scalar();
    CHECK(std::string(s.name) == "scalar");
    CHECK(s.mask_le_i64 != nullptr);
    CHECK(s.is_subset != nullptr);
  }

  TEST_CASE("active table is one of the compiled variants") {
    const auto& act = kernels::active();
    const auto* wide = kernels::avx2();
    CHECK((&act == &kernels::scalar() || (wide && &act == wide)));
    const char* env = std::getenv("FRACPACK_SIMD");
    if (env && std::string(env) == "scalar") CHECK(&act == &kernels::scalar());
  }

  TEST_CASE("scalar matches itself on edge lengths") { compare_tables(kernels::scalar(), kernels::scalar()); }

  TEST_CASE("avx2 kernels are bit-identical to scalar") {
    const auto* wide = kernels::avx2();
    if (!wide) {
      MESSAGE("AVX2 not available on this machine");
      return;
    }
    compare_tables(kernels::scalar(), *wide);
  }
}
