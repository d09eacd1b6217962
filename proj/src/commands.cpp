#include "vcsim/commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vcsim/error.hpp"
#include "vcsim/manifest.hpp"
#include "vcsim/report.hpp"

namespace vcsim {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

CostParams resolve_params(const std::string& opt, RunManifest& m) {
  const std::string path = opt.empty() ? data_dir() + "/cost_params.json" : opt;
  if (opt.empty() && !std::filesystem::exists(path)) {
    m.params["params"] = "builtin";
    return CostParams::defaults();
  }
  auto p = load_cost_params(path);
  m.params["params"] = path;
  m.input_digests[path] = file_sha256(path);
  return p;
}

std::string network_path(const std::string& s) {
  if (std::filesystem::exists(s)) return s;
  for (const auto& n : bundled_names())
    if (n == s) return bundled_path(n);
  throw ConfigError("no network file or bundled benchmark named '" + s + "'");
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + out_path);
  f << text;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("bad number for " + key + ": '" + v + "'");
}

}  // namespace

RunConfig parse_run_config(const std::string& spec, const CostParams& params, double budget_mw,
                           const SramTotals& sram) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("config item '" + item + "' is not key=value");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  for (const auto& [k, v] : kv)
    if (k != "style" && k != "memory" && k != "lanes" && k != "bandwidth" && k != "pj_per_bit" &&
        k != "label")
      throw UsageError("unknown config key '" + k + "'");
  if (!kv.count("style")) throw UsageError("config '" + spec + "' needs style=");
  RunConfig rc;
  const Style style = parse_style(kv["style"]);
  const int lanes = kv.count("lanes") ? int(to_double(kv["lanes"], "lanes")) : 16;
  rc.acc = iso_power_config(style, params, budget_mw, sram, lanes);
  const std::string mem = kv.count("memory") ? kv["memory"] : "ddr4";
  if (mem == "custom") {
    if (!kv.count("bandwidth") || !kv.count("pj_per_bit"))
      throw UsageError("memory=custom needs bandwidth= and pj_per_bit=");
    rc.mem.name = "custom";
  } else {
    rc.mem = parse_memory(mem);
  }
  if (kv.count("bandwidth")) rc.mem.bandwidth = to_double(kv["bandwidth"], "bandwidth") * 1e9;
  if (kv.count("pj_per_bit")) rc.mem.pj_per_bit = to_double(kv["pj_per_bit"], "pj_per_bit");
  rc.mem.validate();
  rc.label = kv.count("label") ? kv["label"] : std::string(to_string(style)) + "-" + rc.mem.name;
  return rc;
}

namespace {

int cmd_dse(const std::vector<int>& slices, const std::vector<int>& lanes,
            const std::string& params_opt, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  RunManifest m;
  m.command = "dse";
  for (int s : slices)
    if (s != 1 && s != 2 && s != 4) throw UsageError("slice widths must be 1, 2 or 4");
  for (int l : lanes)
    if (l < 1) throw UsageError("lanes must be positive");
  const auto params = resolve_params(params_opt, m);
  m.params["slices"] = join(slices);
  m.params["lanes"] = join(lanes);
  const auto body = dse_csv(dse_sweep(slices, lanes, params));
  emit(with_manifest(m, body), out_path, out);
  err << "manifest-sha256: " << m.digest() << "\n";
  return kOk;
}

struct SimOpts {
  std::string network, style, memory = "ddr4", params, out, summary;
  double budget = 250, bandwidth_gbs = 0, pj_per_bit = -1;
  int lanes = 16, rows = 0, cols = 0;
  int64_t weight_sram = 512 * 1024, input_buffer = 128 * 1024, output_buffer = 128 * 1024;
  bool homogeneous = false;
};

int cmd_simulate(const SimOpts& o, std::ostream& out, std::ostream& err) {
  RunManifest m;
  m.command = "simulate";
  const auto params = resolve_params(o.params, m);
  const auto path = network_path(o.network);
  m.input_digests[path] = file_sha256(path);
  auto net = load_network(path);
  if (o.homogeneous) net = to_homogeneous(net);

  const SramTotals sram{o.weight_sram, o.input_buffer, o.output_buffer};
  const Style style = parse_style(o.style);
  auto acc = iso_power_config(style, params, o.budget, sram, o.lanes);
  if (o.rows > 0 || o.cols > 0) {
    if (o.rows < 1 || o.cols < 1) throw UsageError("--rows and --cols go together");
    acc.rows = o.rows;
    acc.cols = o.cols;
    acc.weight_scratchpad_bytes = o.weight_sram / acc.units();
    acc.validate();
  }
  MemorySpec mem;
  if (o.memory == "custom") {
    if (o.bandwidth_gbs <= 0 || o.pj_per_bit < 0)
      throw UsageError("--memory custom needs --bandwidth and --pj-per-bit");
    mem.name = "custom";
  } else {
    mem = parse_memory(o.memory);
  }
  if (o.bandwidth_gbs > 0) mem.bandwidth = o.bandwidth_gbs * 1e9;
  if (o.pj_per_bit >= 0) mem.pj_per_bit = o.pj_per_bit;
  mem.validate();

  m.params = {{"network", path},
              {"homogeneous", o.homogeneous ? "1" : "0"},
              {"style", to_string(style)},
              {"rows", std::to_string(acc.rows)},
              {"cols", std::to_string(acc.cols)},
              {"lanes", std::to_string(o.lanes)},
              {"budget_mw", fmt_num(o.budget)},
              {"memory", mem.name},
              {"bandwidth_bytes_per_s", fmt_num(mem.bandwidth)},
              {"pj_per_bit", fmt_num(mem.pj_per_bit)},
              {"weight_sram_bytes", std::to_string(o.weight_sram)},
              {"input_buffer_bytes", std::to_string(o.input_buffer)},
              {"output_buffer_bytes", std::to_string(o.output_buffer)},
              {"params", m.params["params"]}};

  const auto rep = simulate_network(net, acc, mem, params);
  emit(with_manifest(m, sim_csv(rep)), o.out, out);
  const auto summary = sim_summary(rep, acc);
  if (o.summary.empty()) err << summary;
  else emit(summary, o.summary, out);
  for (const auto& w : rep.warnings)
    if (!o.summary.empty()) err << "warning: " << w << "\n";
  err << "manifest-sha256: " << m.digest() << "\n";
  return kOk;
}

struct CompareOpts {
  std::vector<std::string> configs, networks;
  std::string suite, params, out;
  double budget = 250;
};

int cmd_compare(const CompareOpts& o, std::ostream& out, std::ostream& err) {
  if (o.configs.size() < 2) throw UsageError("compare needs at least two --config groups");
  if (o.networks.empty() == o.suite.empty())
    throw UsageError("give either --network (repeatable) or --suite");
  RunManifest m;
  m.command = "compare";
  const auto params = resolve_params(o.params, m);
  m.params["budget_mw"] = fmt_num(o.budget);

  std::vector<NetworkSpec> nets;
  if (!o.suite.empty()) {
    if (o.suite != "homogeneous" && o.suite != "heterogeneous")
      throw UsageError("--suite must be homogeneous or heterogeneous");
    m.params["suite"] = o.suite;
    for (const auto& n : bundled_names()) m.input_digests[bundled_path(n)] = file_sha256(bundled_path(n));
    nets = bundled_suite(o.suite == "homogeneous");
  } else {
    std::string names;
    for (const auto& n : o.networks) {
      const auto path = network_path(n);
      m.input_digests[path] = file_sha256(path);
      nets.push_back(load_network(path));
      names += (names.empty() ? "" : ",") + path;
    }
    m.params["networks"] = names;
  }

  std::vector<RunConfig> cfgs;
  for (std::size_t i = 0; i < o.configs.size(); ++i) {
    cfgs.push_back(parse_run_config(o.configs[i], params, o.budget, {}));
    m.params["config" + std::to_string(i)] = o.configs[i];
  }

  CompareTable t;
  for (const auto& c : cfgs) t.configs.push_back(c.label);
  t.rows.resize(nets.size());
  std::vector<std::string> errors(nets.size());
  // independent networks fan out; results land by index so output order is fixed
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < nets.size(); ++i) {
    try {
      t.rows[i] = compare(nets[i], cfgs, params);
    } catch (const std::exception& e) {
      errors[i] = nets[i].name + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ConfigError(e);
  for (const auto& n : nets) t.networks.push_back(n.name);

  emit(with_manifest(m, compare_csv(t)), o.out, out);
  err << "manifest-sha256: " << m.digest() << "\n";
  return kOk;
}

int cmd_calibrate(double mult_ratio, const std::string& out_path, std::ostream& out,
                  std::ostream& err) {
  RunManifest m;
  m.command = "calibrate";
  CalibrationOptions opt;
  opt.mult_to_adder = mult_ratio;
  m.params["mult_to_adder"] = fmt_num(mult_ratio);
  m.params["anchors"] = "default";
  const auto res = calibrate(default_anchors(), opt);
  for (const auto& r : res.residuals)
    err << r.label << ": " << fmt_num(r.value) << " (target " << fmt_num(r.target) << ", error "
        << fmt_num(r.error) << ")\n";
  auto j = nlohmann::json::parse(cost_params_json(res.params));
  j["manifest"] = nlohmann::json::parse(m.to_json());
  j["max_relative_error"] = res.max_error;
  emit(j.dump(2) + "\n", out_path, out);
  err << "manifest-sha256: " << m.digest() << "\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vcsim: bit-parallel vector-composable accelerator model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::vector<int> slices{1, 2, 4}, lanes{1, 2, 4, 8, 16};
  std::string dse_params, dse_out;
  auto* dse = app.add_subcommand("dse", "per-MAC power/area sweep over slice width and L (CSV)");
  dse->add_option("--slices", slices, "slice widths")->delimiter(',');
  dse->add_option("--lanes", lanes, "vector lengths L")->delimiter(',');
  dse->add_option("--params", dse_params, "cost parameter JSON");
  dse->add_option("--out", dse_out, "output file (default stdout)");

  SimOpts so;
  auto* sim = app.add_subcommand("simulate", "simulate one network on one accelerator (CSV)");
  sim->add_option("--network", so.network, "network file or bundled name")->required();
  sim->add_option("--style", so.style, "conventional | scalar | vector")->required();
  sim->add_option("--memory", so.memory, "ddr4 | hbm2 | ideal | custom");
  sim->add_option("--bandwidth", so.bandwidth_gbs, "off-chip bandwidth, GB/s");
  sim->add_option("--pj-per-bit", so.pj_per_bit, "off-chip access energy, pJ/bit");
  sim->add_option("--budget", so.budget, "core power budget, mW");
  sim->add_option("--lanes", so.lanes, "vector length L for the vector style");
  sim->add_option("--rows", so.rows, "override array rows");
  sim->add_option("--cols", so.cols, "override array cols");
  sim->add_option("--weight-sram", so.weight_sram, "total weight scratchpad bytes");
  sim->add_option("--input-buffer", so.input_buffer, "input buffer bytes");
  sim->add_option("--output-buffer", so.output_buffer, "output buffer bytes");
  sim->add_flag("--homogeneous", so.homogeneous, "force all layers to 8-bit");
  sim->add_option("--params", so.params, "cost parameter JSON");
  sim->add_option("--out", so.out, "CSV output file (default stdout)");
  sim->add_option("--summary", so.summary, "text summary file (default stderr)");

  CompareOpts co;
  auto* cmp = app.add_subcommand("compare", "speedup / energy ratios vs the first config (CSV)");
  cmp->add_option("--config", co.configs, "style=..,memory=..[,lanes=..,bandwidth=..,pj_per_bit=..,label=..]");
  cmp->add_option("--network", co.networks, "network file or bundled name (repeatable)");
  cmp->add_option("--suite", co.suite, "homogeneous | heterogeneous bundled suite");
  cmp->add_option("--budget", co.budget, "core power budget, mW");
  cmp->add_option("--params", co.params, "cost parameter JSON");
  cmp->add_option("--out", co.out, "output file (default stdout)");

  double mult_ratio = 0.5;
  std::string cal_out;
  auto* cal = app.add_subcommand("calibrate", "fit cost constants to the default anchors (JSON)");
  cal->add_option("--mult-ratio", mult_ratio, "multiplier per bit^2 / adder per bit");
  cal->add_option("--out", cal_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (dse->parsed()) return cmd_dse(slices, lanes, dse_params, dse_out, out, err);
    if (sim->parsed()) return cmd_simulate(so, out, err);
    if (cmp->parsed()) return cmd_compare(co, out, err);
    if (cal->parsed()) return cmd_calibrate(mult_ratio, cal_out, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const CalibrationError& e) {
    err << "calibration error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {  // ConfigError, ShapeError
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::out_of_range& e) {  // RangeError
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsage;
}

}  // namespace vcsim
