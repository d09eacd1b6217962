#include <gsl/gsl_multimin.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "vcsim/cost_model.hpp"
#include "vcsim/error.hpp"

namespace vcsim {

using json = nlohmann::json;

namespace {
// output of `vcsim calibrate` with the default anchors; mirrors data/cost_params.json
constexpr ComponentCosts kDefaultEnergy{0.0014962588872180075, 0.002992517774436015,
                                        0.00053299449421666571, 0.016843309634085313};
constexpr ComponentCosts kDefaultArea{3.4632999512042058, 6.9265999024084115,
                                      1.3592305762398658, 32.431200130122114};
}  // namespace

std::vector<Anchor> default_anchors() {
  const auto c = slice_cfg;
  return {
      {"power(2,16)", Metric::Power, c(2, 16), std::nullopt, 0.50, false},
      {"power(2,1)/power(2,16)", Metric::Power, c(2, 1), c(2, 16), 2.4, false},
      {"power(1,1)/power(1,16)", Metric::Power, c(1, 1), c(1, 16), 3.0, false},
      {"power(1,16)>=1", Metric::Power, c(1, 16), std::nullopt, 1.0, true},
      {"area(2,16)", Metric::Area, c(2, 16), std::nullopt, 0.59, false},
      {"area(2,1)", Metric::Area, c(2, 1), std::nullopt, 1.40, false},
      {"area(2,1)/area(2,16)", Metric::Area, c(2, 1), c(2, 16), 2.5, false},
      {"area(1,1)/area(1,16)", Metric::Area, c(1, 1), c(1, 16), 3.0, false},
      {"area(1,16)>=1", Metric::Area, c(1, 16), std::nullopt, 1.0, true},
  };
}

static double metric_of(const CvuConfig& cfg, Metric m, const CostParams& p) {
  const auto n = per_mac_normalized(cfg, p);
  return m == Metric::Power ? n.power : n.area;
}

double anchor_value(const Anchor& a, const CostParams& p) {
  double v = metric_of(a.cfg, a.metric, p);
  if (a.relative_to) v /= metric_of(*a.relative_to, a.metric, p);
  return v;
}

static double anchor_error(const Anchor& a, double v) {
  const double r = v / a.target - 1.0;
  return a.at_least ? std::max(0.0, -r) : std::abs(r);
}

namespace {

struct FitAnchor {
  const Anchor* a;
  HardwareCounts cfg, ref;
  double macs, ref_macs;
};

struct FitData {
  std::vector<FitAnchor> anchors;
  double mult;
};

ComponentCosts relative_costs(double mult, double shift, double reg) {
  return {mult, 1.0, shift, reg};
}

double fit_objective(const gsl_vector* v, void* raw) {
  const auto* d = static_cast<const FitData*>(raw);
  const double sh = std::exp(std::clamp(gsl_vector_get(v, 0), -30.0, 30.0));
  const double rg = std::exp(std::clamp(gsl_vector_get(v, 1), -30.0, 30.0));
  const auto k = relative_costs(d->mult, sh, rg);
  const double conv = apply(conventional_mac_counts(), k).total();
  double worst = 0;
  for (const auto& f : d->anchors) {
    double val = apply(f.cfg, k).total() / f.macs / conv;
    if (f.a->relative_to) val /= apply(f.ref, k).total() / f.ref_macs / conv;
    worst = std::max(worst, anchor_error(*f.a, val));
  }
  return worst;
}

double lanes(const CvuConfig& c) { return double(macs_per_cycle(plan_composition(8, 8, c), c)); }

// minimax fit of (shifter, register) per adder bit, log space, several starts
ComponentCosts fit_metric(const std::vector<const Anchor*>& anchors, double mult) {
  FitData data{{}, mult};
  for (const auto* a : anchors) {
    FitAnchor f{a, cvu_counts(a->cfg), {}, lanes(a->cfg), 1.0};
    if (a->relative_to) {
      f.ref = cvu_counts(*a->relative_to);
      f.ref_macs = lanes(*a->relative_to);
    }
    data.anchors.push_back(f);
  }
  gsl_multimin_function fn{&fit_objective, 2, &data};
  const auto* T = gsl_multimin_fminimizer_nmsimplex2;
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(T, 2);
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);

  double best_f = INFINITY, best[2] = {0, 0};
  for (double s0 : {-3.0, -1.0, 1.0})
    for (double r0 : {0.0, 1.0, 2.0}) {
      gsl_vector_set(x, 0, s0);
      gsl_vector_set(x, 1, r0);
      // restart the simplex a few times so it does not stall on the kinks of a max()
      for (int restart = 0; restart < 4; ++restart) {
        gsl_vector_set_all(step, restart == 0 ? 0.5 : 0.05);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        for (int it = 0; it < 5000; ++it) {
          if (gsl_multimin_fminimizer_iterate(s)) break;
          if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
        }
        gsl_vector_memcpy(x, s->x);
      }
      if (s->fval < best_f) {
        best_f = s->fval;
        best[0] = gsl_vector_get(s->x, 0);
        best[1] = gsl_vector_get(s->x, 1);
      }
    }
  gsl_vector_free(step);
  gsl_vector_free(x);
  gsl_multimin_fminimizer_free(s);
  return relative_costs(mult, std::exp(best[0]), std::exp(best[1]));
}

ComponentCosts scale_to(const ComponentCosts& c, double conventional_total) {
  const double conv = apply(conventional_mac_counts(), c).total();
  const double k = conventional_total / conv;
  return {c.mult_per_bit2 * k, c.adder_per_bit * k, c.shifter_per_bit * k, c.register_per_bit * k};
}

}  // namespace

CalibrationResult calibrate(const std::vector<Anchor>& anchors, const CalibrationOptions& opt) {
  if (anchors.size() < 3)
    throw ConfigError("calibrate needs at least 3 anchors, got " + std::to_string(anchors.size()));
  if (!(opt.mult_to_adder > 0)) throw ConfigError("multiplier/adder ratio must be positive");
  std::vector<const Anchor*> pw, ar;
  for (const auto& a : anchors) {
    if (!(a.target > 0)) throw ConfigError("anchor '" + a.label + "' target must be positive");
    (a.metric == Metric::Power ? pw : ar).push_back(&a);
  }
  if (pw.empty() || ar.empty()) throw ConfigError("calibrate needs power and area anchors");

  CalibrationResult res;
  res.params.energy = scale_to(fit_metric(pw, opt.mult_to_adder),
                               opt.conventional_energy_pj);
  res.params.area = scale_to(fit_metric(ar, opt.mult_to_adder),
                             opt.conventional_area_um2);
  for (const auto& a : anchors) {
    const double v = anchor_value(a, res.params);
    const double e = anchor_error(a, v);
    res.residuals.push_back({a.label, v, a.target, e});
    res.max_error = std::max(res.max_error, e);
  }
  if (res.max_error > opt.max_error) {
    std::ostringstream os;
    os << "calibration infeasible (max relative error " << res.max_error << "):";
    for (const auto& r : res.residuals) os << " " << r.label << "=" << r.value << "/" << r.target;
    throw CalibrationError(os.str());
  }
  return res;
}

CostParams CostParams::defaults() {
  CostParams p;
  p.energy = kDefaultEnergy;
  p.area = kDefaultArea;
  return p;
}

static json costs_json(const ComponentCosts& c) {
  return {{"multiplier_per_bit2", c.mult_per_bit2},
          {"adder_per_bit", c.adder_per_bit},
          {"shifter_per_bit_stage", c.shifter_per_bit},
          {"register_per_bit", c.register_per_bit}};
}

static ComponentCosts costs_from(const json& j, const std::string& where) {
  ComponentCosts c;
  try {
    c.mult_per_bit2 = j.at("multiplier_per_bit2").get<double>();
    c.adder_per_bit = j.at("adder_per_bit").get<double>();
    c.shifter_per_bit = j.at("shifter_per_bit_stage").get<double>();
    c.register_per_bit = j.at("register_per_bit").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError("cost params " + where + ": " + e.what());
  }
  return c;
}

std::string cost_params_json(const CostParams& p) {
  json j;
  j["schema"] = "vcsim-cost-params";
  j["version"] = 1;
  j["frequency_hz"] = p.frequency_hz;
  j["energy_pj"] = costs_json(p.energy);
  j["area_um2"] = costs_json(p.area);
  return j.dump(2) + "\n";
}

void save_cost_params(const CostParams& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << cost_params_json(p);
}

CostParams load_cost_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cost params file not found: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cost params " + path + ": " + e.what());
  }
  if (j.value("schema", "") != "vcsim-cost-params" || j.value("version", 0) != 1)
    throw ConfigError("cost params " + path + ": unsupported schema/version");
  CostParams p;
  p.frequency_hz = j.value("frequency_hz", 5e8);
  p.energy = costs_from(j.at("energy_pj"), "energy_pj");
  p.area = costs_from(j.at("area_um2"), "area_um2");
  p.validate();
  return p;
}

}  // namespace vcsim
