#include "vcsim/cvu.hpp"

#include <string>

#include "vcsim/error.hpp"

namespace vcsim {

void CvuConfig::validate() const {
  slice.validate();
  if (L < 1) throw ConfigError("L must be positive");
}

int plan_width(int bw, int sw, int max_bw) {
  if (bw < 1 || bw > max_bw)
    throw RangeError("bitwidth " + std::to_string(bw) + " outside 1.." + std::to_string(max_bw));
  for (int d = sw; d <= max_bw; d += sw)
    if (max_bw % d == 0 && d >= bw) return d;
  throw InvariantError("no plan width for " + std::to_string(bw));
}

CompositionPlan plan_composition(int bw_x, int bw_w, const CvuConfig& cfg) {
  cfg.validate();
  const auto& s = cfg.slice;
  CompositionPlan p;
  p.bw_x = plan_width(bw_x, s.alpha, s.max_bw);
  p.bw_w = plan_width(bw_w, s.beta, s.max_bw);
  const int nx = p.bw_x / s.alpha, nw = p.bw_w / s.beta;
  p.nbves_per_cluster = nx * nw;
  p.clusters = cfg.nbve_count() / p.nbves_per_cluster;
  if (p.clusters * p.nbves_per_cluster != cfg.nbve_count())
    throw InvariantError("plan leaves NBVEs idle");
  for (int j = 0; j < nx; ++j)
    for (int k = 0; k < nw; ++k) p.shifts.push_back(s.alpha * j + s.beta * k);
  p.effective_length = p.clusters * cfg.L;
  return p;
}

CvuOutput execute_cycle(const std::vector<TilePair>& tiles, const CompositionPlan& plan,
                        const CvuConfig& cfg) {
  if (int(tiles.size()) != plan.clusters)
    throw ShapeError("expected " + std::to_string(plan.clusters) + " tile pairs, got " +
                     std::to_string(tiles.size()));
  const auto& s = cfg.slice;
  const int nw = plan.bw_w / s.beta;
  CvuOutput out;
  std::size_t useful = 0;
  for (std::size_t c = 0; c < tiles.size(); ++c) {
    const auto& t = tiles[c];
    if (t.x.size() != t.w.size() || int(t.x.size()) > cfg.L)
      throw ShapeError("tile " + std::to_string(c) + ": lengths " + std::to_string(t.x.size()) +
                       "/" + std::to_string(t.w.size()) + " vs L=" + std::to_string(cfg.L));
    if (t.x.bitwidth > plan.bw_x || t.w.bitwidth > plan.bw_w)
      throw ShapeError("tile " + std::to_string(c) + " wider than plan");
    useful += t.x.size();
    auto xs = slice_vector_padded(t.x, s.alpha, plan.bw_x);
    auto ws = slice_vector_padded(t.w, s.beta, plan.bw_w);
    // zero-pad lanes up to L
    for (auto& pl : xs.slices) pl.resize(cfg.L, 0);
    for (auto& pl : ws.slices) pl.resize(cfg.L, 0);
    int64_t acc = 0;
    for (int n = 0; n < plan.nbves_per_cluster; ++n) {
      const int j = n / nw, k = n % nw;
      acc += nbve_dot(xs.slices[j], ws.slices[k]) * (int64_t{1} << plan.shifts[n]);
    }
    out.scalars.push_back(acc);
  }
  out.utilization = double(useful) / double(plan.clusters * cfg.L);
  return out;
}

int64_t macs_per_cycle(const CompositionPlan& plan, const CvuConfig& cfg) {
  return int64_t{plan.clusters} * cfg.L;
}

}  // namespace vcsim
