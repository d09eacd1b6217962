#include "vcsim/kernels.hpp"

#include <random>
#include <string>

#include "vcsim/error.hpp"

namespace vcsim {

QuantizedVector QMatrix::row(int64_t r) const {
  return {std::vector<int32_t>(data.begin() + r * cols, data.begin() + (r + 1) * cols), bitwidth,
          is_signed};
}

QuantizedVector QMatrix::col(int64_t c) const {
  std::vector<int32_t> v(rows);
  for (int64_t r = 0; r < rows; ++r) v[r] = at(r, c);
  return {std::move(v), bitwidth, is_signed};
}

void QMatrix::validate() const {
  if (rows < 0 || cols < 0 || int64_t(data.size()) != rows * cols)
    throw ShapeError("matrix storage does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  QuantizedVector(data, bitwidth, is_signed);
}

QMatrix random_matrix(int64_t rows, int64_t cols, int bw, bool sgn, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int64_t> d(min_value(bw, sgn), max_value(bw, sgn));
  QMatrix m{rows, cols, bw, sgn, std::vector<int32_t>(rows * cols)};
  for (auto& v : m.data) v = int32_t(d(rng));
  return m;
}

static void check_shapes(const QMatrix& w, const QMatrix& x) {
  w.validate();
  x.validate();
  if (w.cols != x.rows)
    throw ShapeError("gemm: W is " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                     ", X is " + std::to_string(x.rows) + "x" + std::to_string(x.cols));
}

std::vector<int64_t> gemm_reference(const QMatrix& w, const QMatrix& x) {
  check_shapes(w, x);
  std::vector<int64_t> c(w.rows * x.cols, 0);
  for (int64_t m = 0; m < w.rows; ++m)
    for (int64_t k = 0; k < w.cols; ++k) {
      const int64_t a = w.at(m, k);
      for (int64_t n = 0; n < x.cols; ++n) c[m * x.cols + n] += a * x.at(k, n);
    }
  return c;
}

namespace {

// planes[s][r][k]: slice s of row r (rows of W, or columns of X)
struct Planes {
  int n = 0;
  int sw = 1;
  std::vector<std::vector<int8_t>> p;  // [slice] -> rows*K
};

Planes make_planes(const QMatrix& m, bool by_col, int sw) {
  const int64_t outer = by_col ? m.cols : m.rows, K = by_col ? m.rows : m.cols;
  Planes pl;
  pl.sw = sw;
  pl.n = padded_bitwidth(m.bitwidth, sw) / sw;
  pl.p.assign(pl.n, std::vector<int8_t>(outer * K));
  for (int64_t o = 0; o < outer; ++o)
    for (int64_t k = 0; k < K; ++k) {
      const auto s = slice_value(by_col ? m.at(k, o) : m.at(o, k), m.bitwidth, sw, m.is_signed);
      for (int j = 0; j < pl.n; ++j) pl.p[j][o * K + k] = int8_t(s[j]);
    }
  return pl;
}

inline int64_t plane_dot(const int8_t* a, const int8_t* b, int64_t K) {
  int64_t acc = 0;
  for (int64_t i = 0; i < K; ++i) acc += int32_t(a[i]) * int32_t(b[i]);
  return acc;
}

inline int64_t composed_entry(const Planes& wp, const Planes& xp, int64_t m, int64_t n, int64_t K) {
  int64_t acc = 0;
  for (int j = 0; j < xp.n; ++j)
    for (int k = 0; k < wp.n; ++k)
      acc += plane_dot(xp.p[j].data() + n * K, wp.p[k].data() + m * K, K)
             << (xp.sw * j + wp.sw * k);
  return acc;
}

}  // namespace

std::vector<int64_t> gemm_composed_serial(const QMatrix& w, const QMatrix& x, const SliceConfig& cfg) {
  check_shapes(w, x);
  cfg.validate();
  const auto wp = make_planes(w, false, cfg.beta);
  const auto xp = make_planes(x, true, cfg.alpha);
  std::vector<int64_t> c(w.rows * x.cols);
  for (int64_t m = 0; m < w.rows; ++m)
    for (int64_t n = 0; n < x.cols; ++n) c[m * x.cols + n] = composed_entry(wp, xp, m, n, w.cols);
  return c;
}

std::vector<int64_t> gemm_composed_omp(const QMatrix& w, const QMatrix& x, const SliceConfig& cfg) {
  check_shapes(w, x);
  cfg.validate();
  const auto wp = make_planes(w, false, cfg.beta);
  const auto xp = make_planes(x, true, cfg.alpha);
  std::vector<int64_t> c(w.rows * x.cols);
  const int64_t M = w.rows, N = x.cols, K = w.cols;
#pragma omp parallel for collapse(2) schedule(static)
  for (int64_t m = 0; m < M; ++m)
    for (int64_t n = 0; n < N; ++n) c[m * N + n] = composed_entry(wp, xp, m, n, K);
  return c;
}

std::vector<int64_t> gemm_cvu(const QMatrix& w, const QMatrix& x, const CvuConfig& cfg) {
  check_shapes(w, x);
  const auto plan = plan_composition(x.bitwidth, w.bitwidth, cfg);
  const int64_t K = w.cols, L = cfg.L, chunk = L * plan.clusters;
  std::vector<int64_t> c(w.rows * x.cols, 0);
  for (int64_t m = 0; m < w.rows; ++m)
    for (int64_t n = 0; n < x.cols; ++n) {
      int64_t acc = 0;  // the 64-bit column accumulator
      for (int64_t k0 = 0; k0 < K; k0 += chunk) {
        std::vector<TilePair> tiles;
        for (int64_t cl = 0; cl < plan.clusters; ++cl) {
          TilePair t{{{}, x.bitwidth, x.is_signed}, {{}, w.bitwidth, w.is_signed}};
          for (int64_t k = k0 + cl * L; k < std::min(K, k0 + (cl + 1) * L); ++k) {
            t.x.values.push_back(x.at(k, n));
            t.w.values.push_back(w.at(m, k));
          }
          tiles.push_back(std::move(t));
        }
        for (auto s : execute_cycle(tiles, plan, cfg).scalars) acc += s;
      }
      c[m * x.cols + n] = acc;
    }
  return c;
}

}  // namespace vcsim
