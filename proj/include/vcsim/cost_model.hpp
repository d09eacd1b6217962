#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vcsim/cvu.hpp"

namespace vcsim {

// per-bit constants for one metric (energy in pJ per cycle, or area in um^2)
struct ComponentCosts {
  double mult_per_bit2 = 0;  // slice multiplier: c * alpha * beta
  double adder_per_bit = 0;
  double shifter_per_bit = 0;  // per bit per mux stage
  double register_per_bit = 0;
};

struct CostParams {
  ComponentCosts energy;
  ComponentCosts area;
  double frequency_hz = 5e8;

  void validate() const;
  // derived from the same constants, not stored
  double conventional_mac_energy_pj() const;
  double conventional_mac_power_mw() const;
  double conventional_mac_area_um2() const;

  static CostParams defaults();
};

// structural size of a block, independent of technology constants
struct HardwareCounts {
  double mult_bit2 = 0;
  double adder_bits = 0;
  double shifter_bits = 0;  // bits x stages
  double register_bits = 0;
};

HardwareCounts cvu_counts(const CvuConfig& cfg);
HardwareCounts conventional_mac_counts();

struct CostBreakdown {
  double multiply = 0;
  double add = 0;
  double shift = 0;
  double reg = 0;
  double total() const { return multiply + add + shift + reg; }
};

CostBreakdown apply(const HardwareCounts& c, const ComponentCosts& k);

struct CvuCost {
  CostBreakdown energy;  // pJ per cycle
  CostBreakdown area;    // um^2
  double power_mw(double frequency_hz) const { return energy.total() * frequency_hz * 1e-9; }
};

CvuCost cvu_cost(const CvuConfig& cfg, const CostParams& params);

struct NormalizedCost {
  double power = 0;
  double area = 0;
};

NormalizedCost per_mac_normalized(const CvuConfig& cfg, const CostParams& params);

struct DsePoint {
  int slice_width = 2;
  int L = 16;
  double power_norm = 0;
  double area_norm = 0;
  CostBreakdown power;  // per MAC, normalized
  CostBreakdown area;
};

std::vector<DsePoint> dse_sweep(const std::vector<int>& slice_widths, const std::vector<int>& Ls,
                                const CostParams& params);

int64_t iso_power_array_size(double budget_mw, double unit_power_mw);

// --- calibration ---

enum class Metric { Power, Area };

struct Anchor {
  std::string label;
  Metric metric = Metric::Power;
  CvuConfig cfg;
  std::optional<CvuConfig> relative_to;  // target is cfg / relative_to when set
  double target = 1.0;
  bool at_least = false;  // one-sided: value >= target
};

struct Residual {
  std::string label;
  double value = 0;
  double target = 0;
  double error = 0;  // relative; 0 when a one-sided anchor is satisfied
};

struct CalibrationOptions {
  double mult_to_adder = 0.5;  // fixed technology ratio
  double conventional_energy_pj = 1.0;
  double conventional_area_um2 = 2000.0;
  double max_error = 0.25;
};

struct CalibrationResult {
  CostParams params;
  std::vector<Residual> residuals;
  double max_error = 0;
};

CvuConfig slice_cfg(int sw, int L);
std::vector<Anchor> default_anchors();
double anchor_value(const Anchor& a, const CostParams& p);
CalibrationResult calibrate(const std::vector<Anchor>& anchors,
                            const CalibrationOptions& opt = {});

// JSON data file
CostParams load_cost_params(const std::string& path);
void save_cost_params(const CostParams& p, const std::string& path);
std::string cost_params_json(const CostParams& p);

}  // namespace vcsim
