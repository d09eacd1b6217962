#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace vcsim {

constexpr int kMaxBitwidth = 8;

struct QuantizedVector {
  std::vector<int32_t> values;
  int bitwidth = 8;
  bool is_signed = true;

  QuantizedVector() = default;
  QuantizedVector(std::vector<int32_t> v, int bw, bool sgn);  // validates

  std::size_t size() const { return values.size(); }
  void validate() const;
};

bool fits(int64_t v, int bitwidth, bool is_signed);
int64_t min_value(int bitwidth, bool is_signed);
int64_t max_value(int bitwidth, bool is_signed);

struct SliceConfig {
  int alpha = 2;
  int beta = 2;
  int max_bw = kMaxBitwidth;
  void validate() const;
};

struct BitSlicedVector {
  // slices[j][i]: plane j (LSB first) of element i
  std::vector<std::vector<int32_t>> slices;
  int slice_width = 2;
  bool signed_msb = false;

  std::size_t num_slices() const { return slices.size(); }
  std::size_t length() const { return slices.empty() ? 0 : slices.front().size(); }
  std::vector<int64_t> reconstruct() const;
};

struct SlicePlaneProduct {
  int j = 0;
  int k = 0;
  int64_t value = 0;
  int shift = 0;
};

// round bw up to a multiple of sw
int padded_bitwidth(int bitwidth, int slice_width);

std::vector<int32_t> slice_value(int64_t v, int bitwidth, int slice_width, bool is_signed);
BitSlicedVector slice_vector(const QuantizedVector& v, int slice_width);
// as above, but pad to `width` bits first (width >= v.bitwidth)
BitSlicedVector slice_vector_padded(const QuantizedVector& v, int slice_width, int width);

int64_t nbve_dot(std::span<const int32_t> x, std::span<const int32_t> w);

// one entry per (j, k) plane pair, j-major
std::vector<SlicePlaneProduct> plane_products(const QuantizedVector& x, const QuantizedVector& w,
                                              const SliceConfig& cfg);
int64_t compose_dot(const QuantizedVector& x, const QuantizedVector& w, const SliceConfig& cfg);
int64_t dot_exact(const QuantizedVector& x, const QuantizedVector& w);

}  // namespace vcsim
