#include "vcsim/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vcsim/error.hpp"

namespace vcsim {

namespace {

struct Range {
  int64_t lo, hi;
  int tz;  // low bits known to be zero
};

// signed bits needed to hold [lo, hi]
int width(int64_t lo, int64_t hi) {
  int b = 1;
  while (!(-(int64_t{1} << (b - 1)) <= lo && hi <= (int64_t{1} << (b - 1)) - 1)) ++b;
  return b;
}

// balanced pairwise reduction; returns the root range and adder bits spent
Range reduce(std::vector<Range> items, double& bits) {
  while (items.size() > 1) {
    std::vector<Range> next;
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) {
      const auto& a = items[i];
      const auto& b = items[i + 1];
      Range r{a.lo + b.lo, a.hi + b.hi, std::min(a.tz, b.tz)};
      bits += std::max(width(r.lo, r.hi) - std::max(a.tz, b.tz), 1);
      next.push_back(r);
    }
    if (items.size() % 2) next.push_back(items.back());
    items = std::move(next);
  }
  return items.front();
}

}  // namespace

HardwareCounts cvu_counts(const CvuConfig& cfg) {
  cfg.validate();
  const int a = cfg.slice.alpha, b = cfg.slice.beta, mb = cfg.slice.max_bw;
  const int nx = mb / a, nw = mb / b, n = nx * nw;
  // slice values span the unsigned range plus the signed MSB range
  const int64_t xlo = -(int64_t{1} << (a - 1)), xhi = (int64_t{1} << a) - 1;
  const int64_t wlo = -(int64_t{1} << (b - 1)), whi = (int64_t{1} << b) - 1;
  const int64_t c[4] = {xlo * wlo, xlo * whi, xhi * wlo, xhi * whi};
  const Range leaf{*std::min_element(c, c + 4), *std::max_element(c, c + 4), 0};

  HardwareCounts hc;
  hc.mult_bit2 = double(n) * cfg.L * a * b;

  double nbve_bits = 0;
  const Range out = reduce(std::vector<Range>(cfg.L, leaf), nbve_bits);
  hc.adder_bits = n * nbve_bits;

  std::vector<Range> shifted;
  std::set<int> positions;
  int max_shift = 0;
  for (int j = 0; j < nx; ++j)
    for (int k = 0; k < nw; ++k) {
      const int s = a * j + b * k;
      shifted.push_back({out.lo * (int64_t{1} << s), out.hi * (int64_t{1} << s), s});
      positions.insert(s);
      max_shift = std::max(max_shift, s);
    }
  double global_bits = 0;
  const Range g = reduce(shifted, global_bits);
  hc.adder_bits += global_bits;

  const int wo = width(out.lo, out.hi);
  const int stages = positions.size() > 1 ? int(std::ceil(std::log2(double(positions.size())))) : 0;
  hc.shifter_bits = double(n) * (wo + max_shift) * stages;
  hc.register_bits = width(g.lo, g.hi);
  return hc;
}

HardwareCounts conventional_mac_counts() {
  // 8x8 multiplier, 32-bit accumulate, weight + input + accumulator registers
  return {64, 32, 0, 8 + 8 + 32};
}

CostBreakdown apply(const HardwareCounts& c, const ComponentCosts& k) {
  return {c.mult_bit2 * k.mult_per_bit2, c.adder_bits * k.adder_per_bit,
          c.shifter_bits * k.shifter_per_bit, c.register_bits * k.register_per_bit};
}

static void check_positive(const ComponentCosts& c, const char* what) {
  if (!(c.mult_per_bit2 > 0 && c.adder_per_bit > 0 && c.shifter_per_bit > 0 &&
        c.register_per_bit > 0))
    throw ConfigError(std::string(what) + " constants must be strictly positive");
}

void CostParams::validate() const {
  check_positive(energy, "energy");
  check_positive(area, "area");
  if (!(frequency_hz > 0)) throw ConfigError("frequency must be positive");
}

double CostParams::conventional_mac_energy_pj() const {
  return apply(conventional_mac_counts(), energy).total();
}
double CostParams::conventional_mac_power_mw() const {
  return conventional_mac_energy_pj() * frequency_hz * 1e-9;
}
double CostParams::conventional_mac_area_um2() const {
  return apply(conventional_mac_counts(), area).total();
}

CvuCost cvu_cost(const CvuConfig& cfg, const CostParams& params) {
  params.validate();
  const auto hc = cvu_counts(cfg);
  return {apply(hc, params.energy), apply(hc, params.area)};
}

NormalizedCost per_mac_normalized(const CvuConfig& cfg, const CostParams& params) {
  const auto c = cvu_cost(cfg, params);
  const double macs = double(macs_per_cycle(plan_composition(8, 8, cfg), cfg));
  return {c.energy.total() / macs / params.conventional_mac_energy_pj(),
          c.area.total() / macs / params.conventional_mac_area_um2()};
}

static CostBreakdown scaled(CostBreakdown b, double s) {
  b.multiply *= s;
  b.add *= s;
  b.shift *= s;
  b.reg *= s;
  return b;
}

std::vector<DsePoint> dse_sweep(const std::vector<int>& sws, const std::vector<int>& Ls,
                                const CostParams& params) {
  std::vector<int> s(sws), l(Ls);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());

  std::vector<DsePoint> out(s.size() * l.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto cfg = slice_cfg(s[i / l.size()], l[i % l.size()]);
    const auto c = cvu_cost(cfg, params);
    const double macs = double(macs_per_cycle(plan_composition(8, 8, cfg), cfg));
    DsePoint p;
    p.slice_width = cfg.slice.alpha;
    p.L = cfg.L;
    p.power = scaled(c.energy, 1.0 / macs / params.conventional_mac_energy_pj());
    p.area = scaled(c.area, 1.0 / macs / params.conventional_mac_area_um2());
    p.power_norm = p.power.total();
    p.area_norm = p.area.total();
    out[i] = p;
  }
  return out;
}

int64_t iso_power_array_size(double budget_mw, double unit_power_mw) {
  if (!(unit_power_mw > 0)) throw ConfigError("unit power must be positive");
  if (budget_mw < 0) throw ConfigError("power budget must be non-negative");
  return int64_t(std::floor(budget_mw / unit_power_mw + 1e-9));
}

CvuConfig slice_cfg(int sw, int L) {
  CvuConfig c;
  c.L = L;
  c.slice.alpha = c.slice.beta = sw;
  c.validate();
  return c;
}

}  // namespace vcsim
