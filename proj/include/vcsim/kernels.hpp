#pragma once
#include <cstdint>
#include <vector>

#include "vcsim/bitslice.hpp"
#include "vcsim/cvu.hpp"

namespace vcsim {

// row-major integer matrix with a declared element bitwidth
struct QMatrix {
  int64_t rows = 0, cols = 0;
  int bitwidth = 8;
  bool is_signed = true;
  std::vector<int32_t> data;

  int32_t at(int64_t r, int64_t c) const { return data[r * cols + c]; }
  QuantizedVector row(int64_t r) const;
  QuantizedVector col(int64_t c) const;
  void validate() const;
};

QMatrix random_matrix(int64_t rows, int64_t cols, int bitwidth, bool is_signed, uint64_t seed);

// C[M x N] = W[M x K] * X[K x N]
std::vector<int64_t> gemm_reference(const QMatrix& w, const QMatrix& x);
std::vector<int64_t> gemm_composed_serial(const QMatrix& w, const QMatrix& x, const SliceConfig& cfg);
std::vector<int64_t> gemm_composed_omp(const QMatrix& w, const QMatrix& x, const SliceConfig& cfg);
// drives execute_cycle tile by tile, the way a CVU column would
std::vector<int64_t> gemm_cvu(const QMatrix& w, const QMatrix& x, const CvuConfig& cfg);

}  // namespace vcsim
