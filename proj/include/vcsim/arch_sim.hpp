#pragma once
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vcsim/cost_model.hpp"
#include "vcsim/cvu.hpp"
#include "vcsim/workloads.hpp"

namespace vcsim {

enum class Style { Conventional, Scalar, Vector };
const char* to_string(Style s);
Style parse_style(const std::string& s);

struct MemorySpec {
  std::string name = "ddr4";
  double bandwidth = 16e9;  // bytes/s; infinity allowed
  double pj_per_bit = 15.0;
  void validate() const;

  static MemorySpec ddr4() { return {"ddr4", 16e9, 15.0}; }
  static MemorySpec hbm2() { return {"hbm2", 256e9, 1.2}; }
  static MemorySpec ideal() { return {"ideal", std::numeric_limits<double>::infinity(), 0.0}; }
};

MemorySpec parse_memory(const std::string& name);

struct SramEnergy {
  double weight_pj_per_bit = 0.04;
  double input_pj_per_bit = 0.10;
  double output_pj_per_bit = 0.10;
};

struct AcceleratorConfig {
  Style style = Style::Vector;
  int rows = 8;
  int cols = 8;
  CvuConfig cvu;                          // ignored for the conventional style
  int64_t weight_scratchpad_bytes = 8192;  // per unit
  int64_t input_buffer_bytes = 128 * 1024;
  int64_t output_buffer_bytes = 128 * 1024;
  double frequency = 5e8;
  double core_power_budget_mw = 250.0;
  SramEnergy sram;

  int64_t units() const { return int64_t{rows} * cols; }
  void validate() const;
};

// unit = one PE / fusion unit / CVU
double unit_energy_pj(Style style, const CvuConfig& cvu, const CostParams& p);
CvuConfig style_cvu(Style style, int L = 16);

struct Geometry {
  int rows, cols;
};
// cols: largest power of two <= sqrt(units); rows = units / cols
Geometry near_square(int64_t units);

struct SramTotals {
  int64_t weight_bytes = 512 * 1024;
  int64_t input_bytes = 128 * 1024;
  int64_t output_bytes = 128 * 1024;
};

AcceleratorConfig iso_power_config(Style style, const CostParams& p, double budget_mw = 250.0,
                                   const SramTotals& sram = {}, int L = 16);

// peak MACs per cycle at 8x8 bits
int64_t mac_capacity(const AcceleratorConfig& acc);

struct GemmDims {
  int64_t M = 0, K = 0, N = 0;
  int64_t repeats = 1;  // timesteps
  double weight_reuse = 1;  // uses of each weight element per fetch into the array
  double input_reuse = 1;
};

GemmDims lower_layer(const LayerSpec& layer);

enum class Bound { Compute, Memory };
const char* to_string(Bound b);

struct Energy {
  double compute = 0;
  double sram = 0;
  double off_chip = 0;
  double total() const { return compute + sram + off_chip; }
};

struct LayerReport {
  std::string name;
  int64_t macs = 0;
  int64_t compute_cycles = 0;  // MAC-issue cycles
  int64_t fill_cycles = 0;     // systolic fill/drain
  int64_t memory_cycles = 0;
  int64_t total_cycles = 0;  // sum over phases of max(compute + fill, memory)
  int64_t phases = 0;
  double off_chip_bytes = 0;
  double runtime_s = 0;
  Energy energy;  // pJ
  double utilization = 0;
  Bound bound = Bound::Compute;
  int bw_x = 8, bw_w = 8;  // as executed
};

struct SimReport {
  std::string network;
  std::string style;
  std::string memory;
  std::vector<LayerReport> layers;
  LayerReport total;
  std::vector<std::string> warnings;
};

LayerReport simulate_layer(const LayerSpec& layer, const AcceleratorConfig& acc,
                           const MemorySpec& mem, const CostParams& params);
SimReport simulate_network(const NetworkSpec& net, const AcceleratorConfig& acc,
                           const MemorySpec& mem, const CostParams& params);

struct RunConfig {
  AcceleratorConfig acc;
  MemorySpec mem;
  std::string label;
};

struct CompareRow {
  std::string label;
  double runtime_s = 0;
  double energy_pj = 0;
  double speedup = 1;           // baseline runtime / runtime
  double energy_reduction = 1;  // baseline energy / energy
};

std::vector<CompareRow> compare(const NetworkSpec& net, const std::vector<RunConfig>& configs,
                                const CostParams& params);

}  // namespace vcsim
