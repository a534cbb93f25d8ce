#include "fracpack/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string_view>

namespace fracpack::kernels {

namespace {

void mask_le_i64_scalar(const int64_t* row, size_t n, int64_t threshold, uint64_t* out) {
  std::memset(out, 0, words_for(n) * sizeof(uint64_t));
  for (size_t j = 0; j < n; ++j) {
    if (row[j] <= threshold) out[j >> 6] |= uint64_t{1} << (j & 63);
  }
}

void mask_le_f64_scalar(const double* row, size_t n, double threshold, uint64_t* out) {
  std::memset(out, 0, words_for(n) * sizeof(uint64_t));
  for (size_t j = 0; j < n; ++j) {
    if (row[j] <= threshold) out[j >> 6] |= uint64_t{1} << (j & 63);
  }
}

bool and_any_scalar(const uint64_t* a, const uint64_t* b, size_t words) {
  for (size_t i = 0; i < words; ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

bool and3_any_scalar(const uint64_t* a, const uint64_t* b, const uint64_t* c, size_t words) {
  for (size_t i = 0; i < words; ++i) {
    if (a[i] & b[i] & c[i]) return true;
  }
  return false;
}

size_t popcount_scalar(const uint64_t* a, size_t words) {
  size_t total = 0;
  for (size_t i = 0; i < words; ++i) total += static_cast<size_t>(__builtin_popcountll(a[i]));
  return total;
}

size_t and_popcount_scalar(const uint64_t* a, const uint64_t* b, size_t words) {
  size_t total = 0;
  for (size_t i = 0; i < words; ++i) total += static_cast<size_t>(__builtin_popcountll(a[i] & b[i]));
  return total;
}

void andnot_inplace_scalar(uint64_t* a, const uint64_t* b, size_t words) {
  for (size_t i = 0; i < words; ++i) a[i] &= ~b[i];
}

void and_inplace_scalar(uint64_t* a, const uint64_t* b, size_t words) {
  for (size_t i = 0; i < words; ++i) a[i] &= b[i];
}

void or_inplace_scalar(uint64_t* a, const uint64_t* b, size_t words) {
  for (size_t i = 0; i < words; ++i) a[i] |= b[i];
}

bool is_subset_scalar(const uint64_t* a, const uint64_t* b, size_t words) {
  for (size_t i = 0; i < words; ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

constexpr KernelTable kScalar{
    "scalar",        mask_le_i64_scalar, mask_le_f64_scalar,    and_any_scalar,
    and3_any_scalar, popcount_scalar,    and_popcount_scalar,   andnot_inplace_scalar,
    and_inplace_scalar, or_inplace_scalar, is_subset_scalar,
};

const KernelTable& choose() {
  const char* env = std::getenv("FRACPACK_SIMD");
  if (env && std::string_view(env) == "scalar") return kScalar;
  if (const KernelTable* wide = avx2()) return *wide;
  return kScalar;
}

}  // namespace

const KernelTable& scalar() { return kScalar; }

const KernelTable* avx2() {
#if defined(FRACPACK_HAVE_AVX2_TU)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace fracpack::kernels
