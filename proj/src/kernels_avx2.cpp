// Compiled with -mavx2 -mpopcnt; only reached through kernels::avx2() after a
// runtime CPU check.
#include <immintrin.h>

#include <cstring>

#include "fracpack/kernels.hpp"

namespace fracpack::kernels::detail {

namespace {

void mask_le_i64_avx2(const int64_t* row, size_t n, int64_t threshold, uint64_t* out) {
  std::memset(out, 0, words_for(n) * sizeof(uint64_t));
  const __m256i thr = _mm256_set1_epi64x(threshold);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + j));
    __m256i gt = _mm256_cmpgt_epi64(v, thr);
    auto bits = static_cast<uint64_t>(~_mm256_movemask_pd(_mm256_castsi256_pd(gt)) & 0xF);
    out[j >> 6] |= bits << (j & 63);
  }
  for (; j < n; ++j) {
    if (row[j] <= threshold) out[j >> 6] |= uint64_t{1} << (j & 63);
  }
}

void mask_le_f64_avx2(const double* row, size_t n, double threshold, uint64_t* out) {
  std::memset(out, 0, words_for(n) * sizeof(uint64_t));
  const __m256d thr = _mm256_set1_pd(threshold);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_loadu_pd(row + j);
    auto bits = static_cast<uint64_t>(_mm256_movemask_pd(_mm256_cmp_pd(v, thr, _CMP_LE_OQ)));
    out[j >> 6] |= bits << (j & 63);
  }
  for (; j < n; ++j) {
    if (row[j] <= threshold) out[j >> 6] |= uint64_t{1} << (j & 63);
  }
}

inline __m256i load(const uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(uint64_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

bool and_any_avx2(const uint64_t* a, const uint64_t* b, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    if (!_mm256_testz_si256(load(a + i), load(b + i))) return true;
  }
  for (; i < words; ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

bool and3_any_avx2(const uint64_t* a, const uint64_t* b, const uint64_t* c, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    __m256i ab = _mm256_and_si256(load(a + i), load(b + i));
    if (!_mm256_testz_si256(ab, load(c + i))) return true;
  }
  for (; i < words; ++i) {
    if (a[i] & b[i] & c[i]) return true;
  }
  return false;
}

// Nibble-table popcount (Mula): per-byte counts via pshufb, folded with sad.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2,
                                       2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0F);
  __m256i lo = _mm256_and_si256(v, low);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

inline size_t horizontal_sum(__m256i acc) {
  alignas(32) uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return static_cast<size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

size_t popcount_avx2(const uint64_t* a, size_t words) {
  __m256i acc = _mm256_setzero_si256();
  size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(load(a + i)), _mm256_setzero_si256()));
  }
  size_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += static_cast<size_t>(_mm_popcnt_u64(a[i]));
  return total;
}

size_t and_popcount_avx2(const uint64_t* a, const uint64_t* b, size_t words) {
  __m256i acc = _mm256_setzero_si256();
  size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    __m256i v = _mm256_and_si256(load(a + i), load(b + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
  }
  size_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += static_cast<size_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

void andnot_inplace_avx2(uint64_t* a, const uint64_t* b, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) store(a + i, _mm256_andnot_si256(load(b + i), load(a + i)));
  for (; i < words; ++i) a[i] &= ~b[i];
}

void and_inplace_avx2(uint64_t* a, const uint64_t* b, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) store(a + i, _mm256_and_si256(load(a + i), load(b + i)));
  for (; i < words; ++i) a[i] &= b[i];
}

void or_inplace_avx2(uint64_t* a, const uint64_t* b, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) store(a + i, _mm256_or_si256(load(a + i), load(b + i)));
  for (; i < words; ++i) a[i] |= b[i];
}

bool is_subset_avx2(const uint64_t* a, const uint64_t* b, size_t words) {
  size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    // testc(b, a) == 1 iff (~b & a) == 0
    if (!_mm256_testc_si256(load(b + i), load(a + i))) return false;
  }
  for (; i < words; ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

constexpr KernelTable kAvx2{
    "avx2",        mask_le_i64_avx2, mask_le_f64_avx2,  and_any_avx2,       and3_any_avx2,   popcount_avx2,
    and_popcount_avx2, andnot_inplace_avx2, and_inplace_avx2, or_inplace_avx2, is_subset_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace fracpack::kernels::detail
