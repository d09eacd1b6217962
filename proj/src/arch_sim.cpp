#include "vcsim/arch_sim.hpp"

#include <algorithm>
#include <cmath>

#include "vcsim/error.hpp"

namespace vcsim {

const char* to_string(Style s) {
  switch (s) {
    case Style::Conventional: return "conventional";
    case Style::Scalar: return "scalar";
    case Style::Vector: return "vector";
  }
  return "?";
}

Style parse_style(const std::string& s) {
  if (s == "conventional") return Style::Conventional;
  if (s == "scalar" || s == "scalar-composable") return Style::Scalar;
  if (s == "vector" || s == "vector-composable") return Style::Vector;
  throw ConfigError("unknown style '" + s + "' (conventional, scalar, vector)");
}

const char* to_string(Bound b) { return b == Bound::Compute ? "compute" : "memory"; }

void MemorySpec::validate() const {
  if (!(bandwidth > 0)) throw ConfigError("memory '" + name + "': bandwidth must be positive");
  if (!(pj_per_bit >= 0) || std::isinf(pj_per_bit))
    throw ConfigError("memory '" + name + "': access energy must be non-negative");
}

MemorySpec parse_memory(const std::string& n) {
  if (n == "ddr4") return MemorySpec::ddr4();
  if (n == "hbm2") return MemorySpec::hbm2();
  if (n == "ideal") return MemorySpec::ideal();
  throw ConfigError("unknown memory '" + n + "' (ddr4, hbm2, ideal, custom)");
}

void AcceleratorConfig::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError("array geometry must be positive");
  if (style != Style::Conventional) cvu.validate();
  if (style == Style::Scalar && cvu.L != 1) throw ConfigError("scalar-composable style requires L=1");
  if (weight_scratchpad_bytes < 1 || input_buffer_bytes < 1 || output_buffer_bytes < 1)
    throw ConfigError("buffer sizes must be positive");
  if (!(frequency > 0)) throw ConfigError("frequency must be positive");
}

CvuConfig style_cvu(Style style, int L) {
  return slice_cfg(2, style == Style::Vector ? L : 1);
}

double unit_energy_pj(Style style, const CvuConfig& cvu, const CostParams& p) {
  if (style == Style::Conventional) return p.conventional_mac_energy_pj();
  return cvu_cost(cvu, p).energy.total();
}

Geometry near_square(int64_t units) {
  if (units < 1) throw ConfigError("power budget too small for a single unit");
  int64_t cols = 1;
  while ((cols * 2) * (cols * 2) <= units) cols *= 2;
  return {int(units / cols), int(cols)};
}

AcceleratorConfig iso_power_config(Style style, const CostParams& p, double budget_mw,
                                   const SramTotals& sram, int L) {
  AcceleratorConfig acc;
  acc.style = style;
  acc.cvu = style_cvu(style, L);
  acc.frequency = p.frequency_hz;
  acc.core_power_budget_mw = budget_mw;
  const double unit_mw = unit_energy_pj(style, acc.cvu, p) * p.frequency_hz * 1e-9;
  const auto g = near_square(iso_power_array_size(budget_mw, unit_mw));
  acc.rows = g.rows;
  acc.cols = g.cols;
  acc.weight_scratchpad_bytes = sram.weight_bytes / acc.units();
  acc.input_buffer_bytes = sram.input_bytes;
  acc.output_buffer_bytes = sram.output_bytes;
  acc.validate();
  return acc;
}

int64_t mac_capacity(const AcceleratorConfig& acc) {
  if (acc.style == Style::Conventional) return acc.units();
  return acc.units() * macs_per_cycle(plan_composition(8, 8, acc.cvu), acc.cvu);
}

GemmDims lower_layer(const LayerSpec& l) {
  l.validate();
  GemmDims g;
  switch (l.kind) {
    case LayerKind::Conv:
      g.M = l.k;
      g.K = l.c * l.r * l.s;
      g.N = l.out_h() * l.out_w() * l.batch;
      break;
    case LayerKind::Fc:
      g.M = l.m;
      g.K = l.kin;
      g.N = l.n;
      break;
    case LayerKind::Recurrent:
      g.M = l.gates * l.hidden;
      g.K = l.hidden + l.input;
      g.N = l.batch;
      g.repeats = l.timesteps;
      break;
  }
  g.weight_reuse = double(g.N);
  g.input_reuse = double(g.M * g.K * g.N) / double(l.input_elems());
  return g;
}

namespace {

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

struct Mapping {
  int64_t rows, cols, L, clusters;
};

// clusters may extend the dot product (K) or serve more outputs (M); take the better split
int64_t tile_cycles(const Mapping& mp, int64_t mt, int64_t K, int64_t nb) {
  int64_t best = -1;
  for (int64_t a = 1; a <= mp.clusters; ++a) {
    if (mp.clusters % a) continue;
    const int64_t c = ceil_div(K, mp.rows * mp.L * a) * ceil_div(mt, mp.cols * (mp.clusters / a));
    if (best < 0 || c < best) best = c;
  }
  return best * nb;
}

int64_t mem_cycles(double bytes, const MemorySpec& mem, double freq) {
  if (bytes <= 0 || std::isinf(mem.bandwidth)) return 0;
  return int64_t(std::ceil(bytes * freq / mem.bandwidth - 1e-9));
}

}  // namespace

LayerReport simulate_layer(const LayerSpec& layer, const AcceleratorConfig& acc,
                           const MemorySpec& mem, const CostParams& params) {
  acc.validate();
  mem.validate();
  params.validate();
  const auto g = lower_layer(layer);
  const bool conventional = acc.style == Style::Conventional;
  const int bx = conventional ? 8 : layer.bw_x;
  const int bw = conventional ? 8 : layer.bw_w;

  Mapping mp{acc.rows, acc.cols, 1, 1};
  if (!conventional) {
    const auto plan = plan_composition(bx, bw, acc.cvu);
    mp.L = acc.cvu.L;
    mp.clusters = plan.clusters;
  }
  const int64_t mpc = mp.L * mp.clusters;

  // 64-bit column accumulators: worst-case |x*w| summed over K
  const double worst = double(g.K) * std::ldexp(1.0, bx) * std::ldexp(1.0, bw);
  if (worst >= std::ldexp(1.0, 63))
    throw ConfigError("layer '" + layer.name + "': K=" + std::to_string(g.K) +
                      " overflows the 64-bit accumulators");

  // tiles are planned for 8-bit storage so every precision shares one schedule
  const double w_cap = double(acc.units()) * double(acc.weight_scratchpad_bytes);
  if (acc.weight_scratchpad_bytes < mp.L)
    throw ConfigError("weight scratchpad of " + std::to_string(acc.weight_scratchpad_bytes) +
                      " bytes cannot hold one " + std::to_string(mp.L) + "-lane weight vector");
  if (double(g.K) > w_cap / 2)
    throw ConfigError("layer '" + layer.name + "': weight tile does not fit in scratchpad (row of " +
                      std::to_string(g.K) + " bytes, half-capacity " +
                      std::to_string(int64_t(w_cap / 2)) + ")");
  int64_t mt_max = std::min<int64_t>(g.M, int64_t(w_cap / 2) / g.K);
  const int64_t out_cap = acc.output_buffer_bytes / 2 / 8;  // 64-bit partial sums
  if (out_cap < 1) throw ConfigError("output buffer cannot hold one accumulator");
  mt_max = std::min(mt_max, out_cap);

  const double in_per_col8 = double(layer.input_elems()) / double(g.N);
  const int64_t nb_in = int64_t(double(acc.input_buffer_bytes) / 2 / in_per_col8);
  if (nb_in < 1)
    throw ConfigError("layer '" + layer.name + "': input tile does not fit in the input buffer");
  const int64_t nb_max = std::max<int64_t>(1, std::min({g.N, nb_in, out_cap / mt_max}));

  const bool resident = layer.weight_bytes() * (conventional ? 8.0 / layer.bw_w : 1.0) <= w_cap;
  const double out_ratio = double(layer.output_elems()) / double(g.M * g.N);
  const int64_t fill = acc.rows + acc.cols;

  LayerReport rep;
  rep.name = layer.name;
  rep.bw_x = bx;
  rep.bw_w = bw;
  rep.macs = layer.macs();

  double loaded_w = 0, loaded_in = 0, stored = 0;
  int64_t prev_compute = -1;  // compute of the tile loaded in the previous phase
  double prev_store = 0;
  auto phase = [&](double load, int64_t compute) {
    const int64_t busy = compute >= 0 ? compute + fill : 0;
    const int64_t m = mem_cycles(load + prev_store, mem, acc.frequency);
    rep.memory_cycles += m;
    rep.total_cycles += std::max(busy, m);
    rep.phases += 1;
  };

  const int64_t n_blocks = ceil_div(g.N, nb_max);
  const int64_t m_tiles = ceil_div(g.M, mt_max);
  for (int64_t t = 0; t < g.repeats; ++t)
    for (int64_t b = 0; b < n_blocks; ++b) {
      const int64_t nb = std::min(nb_max, g.N - b * nb_max);
      for (int64_t i = 0; i < m_tiles; ++i) {
        const int64_t mt = std::min(mt_max, g.M - i * mt_max);
        double load = 0;
        if (i == 0) {
          const double in = in_per_col8 * double(nb) * bx / 8.0;
          load += in;
          loaded_in += in;
        }
        if (!resident || (t == 0 && b == 0)) {
          const double w = double(mt) * double(g.K) * bw / 8.0;
          load += w;
          loaded_w += w;
        }
        const int64_t compute = tile_cycles(mp, mt, g.K, nb);
        phase(load, prev_compute);
        if (prev_compute >= 0) {
          rep.compute_cycles += prev_compute;
          rep.fill_cycles += fill;
        }
        prev_compute = compute;
        prev_store = double(mt) * double(nb) * out_ratio * bx / 8.0;
        stored += prev_store;
        // the store of this tile drains during the next phase
      }
    }
  // final phase: last compute plus its drain
  {
    const int64_t busy = prev_compute + fill;
    const int64_t m = mem_cycles(prev_store, mem, acc.frequency);
    rep.memory_cycles += m;
    rep.total_cycles += std::max(busy, m);
    rep.compute_cycles += prev_compute;
    rep.fill_cycles += fill;
    rep.phases += 1;
  }

  rep.off_chip_bytes = loaded_w + loaded_in + stored;
  rep.runtime_s = double(rep.total_cycles) / acc.frequency;
  const double e_unit = unit_energy_pj(acc.style, acc.cvu, params);
  const double macs = double(rep.macs);
  rep.energy.compute = macs * e_unit / double(mpc);
  const auto& s = acc.sram;
  rep.energy.sram = macs * bw * s.weight_pj_per_bit + macs * bx / acc.cols * s.input_pj_per_bit +
                    double(g.M) * g.N * g.repeats * 64 * s.output_pj_per_bit +
                    loaded_w * 8 * s.weight_pj_per_bit + loaded_in * 8 * s.input_pj_per_bit +
                    stored * 8 * s.output_pj_per_bit;
  rep.energy.off_chip = rep.off_chip_bytes * 8 * mem.pj_per_bit;
  rep.utilization = macs / (double(rep.compute_cycles) * double(acc.units()) * double(mpc));
  rep.bound = rep.memory_cycles > rep.compute_cycles ? Bound::Memory : Bound::Compute;
  return rep;
}

SimReport simulate_network(const NetworkSpec& net, const AcceleratorConfig& acc,
                           const MemorySpec& mem, const CostParams& params) {
  validate_network(net);
  SimReport r;
  r.network = net.name;
  r.style = to_string(acc.style);
  r.memory = mem.name;
  r.total.name = "total";
  double util_weight = 0;
  bool narrowed = false;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i];
    if (acc.style == Style::Conventional && (l.bw_x != 8 || l.bw_w != 8)) narrowed = true;
    LayerReport lr;
    try {
      lr = simulate_layer(l, acc, mem, params);
    } catch (const ConfigError& e) {
      throw ConfigError("layer " + std::to_string(i) + " (" + l.name + "): " + e.what());
    }
    auto& t = r.total;
    t.macs += lr.macs;
    t.compute_cycles += lr.compute_cycles;
    t.fill_cycles += lr.fill_cycles;
    t.memory_cycles += lr.memory_cycles;
    t.total_cycles += lr.total_cycles;
    t.phases += lr.phases;
    t.off_chip_bytes += lr.off_chip_bytes;
    t.runtime_s += lr.runtime_s;
    t.energy.compute += lr.energy.compute;
    t.energy.sram += lr.energy.sram;
    t.energy.off_chip += lr.energy.off_chip;
    util_weight += lr.utilization * double(lr.compute_cycles);
    r.layers.push_back(std::move(lr));
  }
  if (narrowed)
    r.warnings.push_back("conventional style: sub-8-bit layers of '" + net.name +
                         "' executed as 8-bit");
  r.total.utilization = r.total.compute_cycles ? util_weight / double(r.total.compute_cycles) : 0;
  r.total.bound = r.total.memory_cycles > r.total.compute_cycles ? Bound::Memory : Bound::Compute;
  return r;
}

std::vector<CompareRow> compare(const NetworkSpec& net, const std::vector<RunConfig>& configs,
                                const CostParams& params) {
  if (configs.size() < 2) throw ConfigError("compare needs at least two configurations");
  std::vector<SimReport> reps(configs.size());
  std::vector<std::string> errors(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < configs.size(); ++i) {
    try {
      reps[i] = simulate_network(net, configs[i].acc, configs[i].mem, params);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw ConfigError(configs[i].label + ": " + errors[i]);
  std::vector<CompareRow> rows;
  const double rt0 = reps[0].total.runtime_s, e0 = reps[0].total.energy.total();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& t = reps[i].total;
    rows.push_back({configs[i].label, t.runtime_s, t.energy.total(), rt0 / t.runtime_s,
                    e0 / t.energy.total()});
  }
  return rows;
}

}  // namespace vcsim
