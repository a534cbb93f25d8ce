#pragma once

#include <cstddef>
#include <cstdint>

namespace fracpack::kernels {

// Data-parallel inner loops of the engine: distance-row threshold masks
// (ball membership, strict separation) and word-wise bitset algebra
// (conflict sets, cover sets). Every table entry has a scalar reference;
// wider variants must produce bit-identical output.
struct KernelTable {
  const char* name;
  // out bit j set iff row[j] <= threshold, j < n; trailing bits cleared.
  void (*mask_le_i64)(const int64_t* row, size_t n, int64_t threshold, uint64_t* out);
  void (*mask_le_f64)(const double* row, size_t n, double threshold, uint64_t* out);
  bool (*and_any)(const uint64_t* a, const uint64_t* b, size_t words);
  bool (*and3_any)(const uint64_t* a, const uint64_t* b, const uint64_t* c, size_t words);
  size_t (*popcount)(const uint64_t* a, size_t words);
  size_t (*and_popcount)(const uint64_t* a, const uint64_t* b, size_t words);
  void (*andnot_inplace)(uint64_t* a, const uint64_t* b, size_t words);  // a &= ~b
  void (*and_inplace)(uint64_t* a, const uint64_t* b, size_t words);
  void (*or_inplace)(uint64_t* a, const uint64_t* b, size_t words);
  bool (*is_subset)(const uint64_t* a, const uint64_t* b, size_t words);  // a subset of b
};

const KernelTable& scalar();
/// nullptr when the AVX2 unit was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();
/// Chosen once: FRACPACK_SIMD=scalar forces the reference path, otherwise the
/// widest variant the CPU supports.
const KernelTable& active();

inline size_t words_for(size_t bits) { return (bits + 63) / 64; }

#if defined(FRACPACK_HAVE_AVX2_TU)
namespace detail {
const KernelTable& avx2_table();
}
#endif

}  // namespace fracpack::kernels
