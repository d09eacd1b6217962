#include "vcsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace vcsim {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string dse_csv(const std::vector<DsePoint>& pts) {
  std::ostringstream os;
  os << "slice_width,L,power_norm,area_norm,power_multiply,area_multiply,power_add,area_add,"
        "power_shift,area_shift,power_register,area_register\n";
  for (const auto& p : pts)
    os << p.slice_width << ',' << p.L << ',' << fmt_num(p.power_norm) << ','
       << fmt_num(p.area_norm) << ',' << fmt_num(p.power.multiply) << ','
       << fmt_num(p.area.multiply) << ',' << fmt_num(p.power.add) << ',' << fmt_num(p.area.add)
       << ',' << fmt_num(p.power.shift) << ',' << fmt_num(p.area.shift) << ','
       << fmt_num(p.power.reg) << ',' << fmt_num(p.area.reg) << '\n';
  return os.str();
}

static void layer_row(std::ostream& os, const LayerReport& l) {
  os << l.name << ',' << l.bw_x << ',' << l.bw_w << ',' << l.macs << ',' << l.compute_cycles
     << ',' << l.fill_cycles << ',' << l.memory_cycles << ',' << l.total_cycles << ','
     << fmt_num(l.runtime_s) << ',' << fmt_num(l.off_chip_bytes) << ','
     << fmt_num(l.energy.compute) << ',' << fmt_num(l.energy.sram) << ','
     << fmt_num(l.energy.off_chip) << ',' << fmt_num(l.energy.total()) << ','
     << fmt_num(l.utilization) << ',' << to_string(l.bound) << '\n';
}

std::string sim_csv(const SimReport& r) {
  std::ostringstream os;
  os << "layer,bw_x,bw_w,macs,compute_cycles,fill_cycles,memory_cycles,total_cycles,runtime_s,"
        "off_chip_bytes,energy_compute_pj,energy_sram_pj,energy_off_chip_pj,energy_total_pj,"
        "utilization,bound\n";
  for (const auto& l : r.layers) layer_row(os, l);
  layer_row(os, r.total);
  return os.str();
}

std::string sim_summary(const SimReport& r, const AcceleratorConfig& acc) {
  std::ostringstream os;
  const auto& t = r.total;
  os << "network " << r.network << " on " << r.style << " (" << acc.rows << "x" << acc.cols
     << ", " << mac_capacity(acc) << " MACs/cycle at 8-bit) with " << r.memory << "\n";
  os << "overlap rule: double buffering, per phase max(compute + fill, memory)\n";
  os << "cycles: total " << t.total_cycles << ", compute " << t.compute_cycles << ", fill "
     << t.fill_cycles << ", memory " << t.memory_cycles << "\n";
  os << "runtime " << fmt_num(t.runtime_s * 1e3) << " ms, energy " << fmt_num(t.energy.total() * 1e-6)
     << " uJ (compute " << fmt_num(t.energy.compute * 1e-6) << ", sram "
     << fmt_num(t.energy.sram * 1e-6) << ", off-chip " << fmt_num(t.energy.off_chip * 1e-6) << ")\n";
  int mem_bound = 0;
  for (const auto& l : r.layers) mem_bound += l.bound == Bound::Memory;
  os << "layers: " << r.layers.size() << " (" << mem_bound << " memory-bound), utilization "
     << fmt_num(t.utilization) << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

double geomean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += std::log(x);
  return std::exp(s / double(v.size()));
}

std::string compare_csv(const CompareTable& t) {
  std::ostringstream os;
  os << "# averages: geometric mean over networks\n";
  os << "network,config,runtime_s,energy_pj,speedup,energy_reduction\n";
  for (std::size_t n = 0; n < t.networks.size(); ++n)
    for (const auto& r : t.rows[n])
      os << t.networks[n] << ',' << r.label << ',' << fmt_num(r.runtime_s) << ','
         << fmt_num(r.energy_pj) << ',' << fmt_num(r.speedup) << ','
         << fmt_num(r.energy_reduction) << '\n';
  for (std::size_t c = 0; c < t.configs.size(); ++c) {
    std::vector<double> sp, er;
    for (const auto& row : t.rows) {
      sp.push_back(row[c].speedup);
      er.push_back(row[c].energy_reduction);
    }
    os << "geomean," << t.configs[c] << ",,," << fmt_num(geomean(sp)) << ','
       << fmt_num(geomean(er)) << '\n';
  }
  return os.str();
}

}  // namespace vcsim
