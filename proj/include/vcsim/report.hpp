#pragma once
#include <string>
#include <vector>

#include "vcsim/arch_sim.hpp"
#include "vcsim/cost_model.hpp"

namespace vcsim {

std::string fmt_num(double v);  // deterministic %.6g

// slice_width,L,power_norm,area_norm,power_multiply,area_multiply,...,power_register,area_register
std::string dse_csv(const std::vector<DsePoint>& points);

std::string sim_csv(const SimReport& r);
std::string sim_summary(const SimReport& r, const AcceleratorConfig& acc);

struct CompareTable {
  std::vector<std::string> networks;
  std::vector<std::string> configs;
  std::vector<std::vector<CompareRow>> rows;  // [network][config]
};

// per-network rows followed by geomean rows
std::string compare_csv(const CompareTable& t);
double geomean(const std::vector<double>& v);

}  // namespace vcsim
