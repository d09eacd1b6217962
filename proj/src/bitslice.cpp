#include "vcsim/bitslice.hpp"

#include <string>

#include "vcsim/error.hpp"

namespace vcsim {

int64_t min_value(int bw, bool sgn) { return sgn ? -(int64_t{1} << (bw - 1)) : 0; }
int64_t max_value(int bw, bool sgn) {
  return sgn ? (int64_t{1} << (bw - 1)) - 1 : (int64_t{1} << bw) - 1;
}

bool fits(int64_t v, int bw, bool sgn) { return v >= min_value(bw, sgn) && v <= max_value(bw, sgn); }

static void check_bitwidth(int bw) {
  if (bw < 1 || bw > kMaxBitwidth)
    throw RangeError("bitwidth " + std::to_string(bw) + " outside 1..8");
}

QuantizedVector::QuantizedVector(std::vector<int32_t> v, int bw, bool sgn)
    : values(std::move(v)), bitwidth(bw), is_signed(sgn) {
  validate();
}

void QuantizedVector::validate() const {
  check_bitwidth(bitwidth);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!fits(values[i], bitwidth, is_signed))
      throw RangeError("element " + std::to_string(i) + " = " + std::to_string(values[i]) +
                       " does not fit " + std::to_string(bitwidth) + "-bit " +
                       (is_signed ? "signed" : "unsigned"));
}

static bool valid_slice(int sw) { return sw == 1 || sw == 2 || sw == 4; }

void SliceConfig::validate() const {
  if (!valid_slice(alpha) || !valid_slice(beta))
    throw ConfigError("slice widths must be 1, 2 or 4");
  if (max_bw < 1 || max_bw > kMaxBitwidth || max_bw % alpha || max_bw % beta)
    throw ConfigError("slice widths must divide max_bw");
}

int padded_bitwidth(int bw, int sw) { return (bw + sw - 1) / sw * sw; }

std::vector<int64_t> BitSlicedVector::reconstruct() const {
  std::vector<int64_t> out(length(), 0);
  for (std::size_t j = 0; j < slices.size(); ++j)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += int64_t{slices[j][i]} * (int64_t{1} << (slice_width * j));
  return out;
}

// slices of v, sign/zero-extended to `width` bits (a multiple of sw)
static void slice_into(int64_t v, int width, int sw, bool sgn, int32_t* out, std::size_t stride) {
  const int n = width / sw;
  const uint64_t mask = (uint64_t{1} << sw) - 1;
  const uint64_t u = static_cast<uint64_t>(v);  // two's complement bits
  for (int j = 0; j < n; ++j) {
    int64_t s = static_cast<int64_t>((u >> (sw * j)) & mask);
    if (sgn && j == n - 1 && s >= (int64_t{1} << (sw - 1))) s -= int64_t{1} << sw;
    out[j * stride] = static_cast<int32_t>(s);
  }
}

std::vector<int32_t> slice_value(int64_t v, int bw, int sw, bool sgn) {
  check_bitwidth(bw);
  if (!valid_slice(sw)) throw ConfigError("slice width must be 1, 2 or 4");
  if (!fits(v, bw, sgn))
    throw RangeError(std::to_string(v) + " does not fit " + std::to_string(bw) + " bits");
  const int width = padded_bitwidth(bw, sw);
  std::vector<int32_t> out(width / sw);
  slice_into(v, width, sw, sgn, out.data(), 1);
  return out;
}

BitSlicedVector slice_vector_padded(const QuantizedVector& v, int sw, int width) {
  v.validate();
  if (!valid_slice(sw)) throw ConfigError("slice width must be 1, 2 or 4");
  if (width < v.bitwidth || width % sw) throw ConfigError("bad padded width");
  BitSlicedVector out;
  out.slice_width = sw;
  out.signed_msb = v.is_signed;
  const int n = width / sw;
  out.slices.assign(n, std::vector<int32_t>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    int32_t tmp[kMaxBitwidth];
    slice_into(v.values[i], width, sw, v.is_signed, tmp, 1);
    for (int j = 0; j < n; ++j) out.slices[j][i] = tmp[j];
  }
  return out;
}

BitSlicedVector slice_vector(const QuantizedVector& v, int sw) {
  return slice_vector_padded(v, sw, padded_bitwidth(v.bitwidth, sw));
}

int64_t nbve_dot(std::span<const int32_t> x, std::span<const int32_t> w) {
  if (x.size() != w.size())
    throw ShapeError("nbve_dot: lengths " + std::to_string(x.size()) + " and " +
                     std::to_string(w.size()));
  int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += int64_t{x[i]} * w[i];
  return acc;
}

std::vector<SlicePlaneProduct> plane_products(const QuantizedVector& x, const QuantizedVector& w,
                                              const SliceConfig& cfg) {
  cfg.validate();
  if (x.size() != w.size())
    throw ShapeError("compose_dot: lengths " + std::to_string(x.size()) + " and " +
                     std::to_string(w.size()));
  if (x.bitwidth > cfg.max_bw || w.bitwidth > cfg.max_bw)
    throw RangeError("operand bitwidth exceeds max_bw");
  const auto xs = slice_vector(x, cfg.alpha);
  const auto ws = slice_vector(w, cfg.beta);
  std::vector<SlicePlaneProduct> out;
  out.reserve(xs.num_slices() * ws.num_slices());
  for (std::size_t j = 0; j < xs.num_slices(); ++j)
    for (std::size_t k = 0; k < ws.num_slices(); ++k)
      out.push_back({int(j), int(k), nbve_dot(xs.slices[j], ws.slices[k]),
                     cfg.alpha * int(j) + cfg.beta * int(k)});
  return out;
}

int64_t compose_dot(const QuantizedVector& x, const QuantizedVector& w, const SliceConfig& cfg) {
  int64_t acc = 0;
  for (const auto& p : plane_products(x, w, cfg)) acc += p.value * (int64_t{1} << p.shift);
  return acc;
}

int64_t dot_exact(const QuantizedVector& x, const QuantizedVector& w) {
  if (x.size() != w.size())
    throw ShapeError("dot_exact: lengths " + std::to_string(x.size()) + " and " +
                     std::to_string(w.size()));
  int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += int64_t{x.values[i]} * w.values[i];
  return acc;
}

}  // namespace vcsim
