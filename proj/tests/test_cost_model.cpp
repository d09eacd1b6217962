#include <catch_amalgamated.hpp>

#include <cmath>

#include "vcsim/cost_model.hpp"
#include "vcsim/error.hpp"
#include "vcsim/workloads.hpp"

using namespace vcsim;
using Catch::Approx;

namespace {
const CostParams P = CostParams::defaults();
NormalizedCost norm(int sw, int L) { return per_mac_normalized(slice_cfg(sw, L), P); }
}  // namespace

TEST_CASE("structural counts") {
  // L=1: no NBVE tree, only the global one
  const auto c1 = cvu_counts(slice_cfg(2, 1));
  // 16 leaves of [-2,9] products; global tree sums 15 shifted operands
  CHECK(c1.mult_bit2 == 16 * 4);
  const auto c16 = cvu_counts(slice_cfg(2, 16));
  CHECK(c16.mult_bit2 == 16 * 16 * 4);
  CHECK(c16.adder_bits > c1.adder_bits);
  // 7 distinct shift positions for 2-bit slices -> 3 mux stages
  CHECK(std::fmod(c16.shifter_bits, 3.0) == 0.0);
  const auto conv = conventional_mac_counts();
  CHECK(conv.mult_bit2 == 64);
  CHECK(conv.adder_bits == 32);
  CHECK(conv.register_bits == 48);
  CHECK(conv.shifter_bits == 0);
}

TEST_CASE("breakdown sums and is non-negative") {
  for (int sw : {1, 2, 4})
    for (int L : {1, 2, 4, 8, 16}) {
      const auto c = cvu_cost(slice_cfg(sw, L), P);
      for (const auto* b : {&c.energy, &c.area}) {
        CHECK(b->multiply >= 0);
        CHECK(b->add >= 0);
        CHECK(b->shift >= 0);
        CHECK(b->reg >= 0);
        CHECK(b->total() == Approx(b->multiply + b->add + b->shift + b->reg));
      }
    }
}

TEST_CASE("adder tree dominates at (2,16)") {
  const auto c = cvu_cost(slice_cfg(2, 16), P);
  for (const auto* b : {&c.energy, &c.area}) {
    CHECK(b->add >= b->multiply);
    CHECK(b->add >= b->shift);
    CHECK(b->add >= b->reg);
  }
}

TEST_CASE("doubling L less than doubles add cost per MAC") {
  const auto a8 = cvu_cost(slice_cfg(2, 8), P).energy.add / 8;
  const auto a16 = cvu_cost(slice_cfg(2, 16), P).energy.add / 16;
  CHECK(a16 < 2 * a8);
  // the per-NBVE trees grow a little faster than L; the saving is elsewhere
  CHECK(a16 == Approx(a8).epsilon(0.02));
  CHECK(per_mac_normalized(slice_cfg(2, 16), P).power < per_mac_normalized(slice_cfg(2, 8), P).power);
}

TEST_CASE("anchors within tolerance") {
  CHECK(norm(2, 16).power == Approx(0.50).epsilon(0.15));
  CHECK(norm(2, 16).area == Approx(0.59).epsilon(0.15));
  CHECK(norm(2, 1).area == Approx(1.40).epsilon(0.15));
  CHECK(norm(2, 1).power / norm(2, 16).power >= 2.4 * 0.8);
  CHECK(norm(1, 16).power >= 1.0);
  CHECK(norm(1, 16).area >= 1.0);
  CHECK(norm(1, 1).power / norm(1, 16).power == Approx(3.0).epsilon(0.2));
  CHECK(norm(2, 1).power / norm(2, 16).power == Approx(2.5).epsilon(0.2));
}

TEST_CASE("L sweep is decreasing and saturating; 2-bit dominates 1-bit") {
  for (int sw : {1, 2, 4}) {
    for (int L : {1, 2, 4, 8}) {
      CHECK(norm(sw, 2 * L).power < norm(sw, L).power);
      CHECK(norm(sw, 2 * L).area < norm(sw, L).area);
    }
    CHECK(norm(sw, 8).power / norm(sw, 16).power < norm(sw, 1).power / norm(sw, 2).power);
    CHECK(norm(sw, 8).area / norm(sw, 16).area < norm(sw, 1).area / norm(sw, 2).area);
  }
  for (int L : {1, 2, 4, 8, 16}) {
    CHECK(norm(2, L).power < norm(1, L).power);
    CHECK(norm(2, L).area < norm(1, L).area);
  }
}

TEST_CASE("dse_sweep ordering and count") {
  const auto pts = dse_sweep({2, 1}, {16, 1, 2, 4, 8}, P);
  REQUIRE(pts.size() == 10);
  CHECK(pts.front().slice_width == 1);
  CHECK(pts.front().L == 1);
  CHECK(pts.back().slice_width == 2);
  CHECK(pts.back().L == 16);
  for (const auto& p : pts) {
    const auto n = per_mac_normalized(slice_cfg(p.slice_width, p.L), P);
    CHECK(p.power_norm == Approx(n.power));
    CHECK(p.area_norm == Approx(n.area));
    CHECK(p.power.total() == Approx(p.power_norm));
  }
}

TEST_CASE("iso-power sizing") {
  const double conv = P.conventional_mac_power_mw();
  CHECK(conv == Approx(0.5));
  CHECK(iso_power_array_size(250, conv) == 500);
  CHECK(iso_power_array_size(0, conv) == 0);
  CHECK_THROWS_AS(iso_power_array_size(250, 0), ConfigError);
  // CVU of 16 lanes at (2,16)
  const double cvu = cvu_cost(slice_cfg(2, 16), P).power_mw(P.frequency_hz);
  const double ratio = double(iso_power_array_size(250, cvu) * 16) / iso_power_array_size(250, conv);
  CHECK(ratio == Approx(2.0).epsilon(0.2));
  const double fu = cvu_cost(slice_cfg(2, 1), P).power_mw(P.frequency_hz);
  CHECK(double(iso_power_array_size(250, cvu) * 16) / iso_power_array_size(250, fu) ==
        Approx(2.3).epsilon(0.2));
}

TEST_CASE("calibration with default anchors") {
  const auto r = calibrate(default_anchors());
  CHECK(r.max_error <= 0.15);
  CHECK(r.residuals.size() == default_anchors().size());
  CHECK(r.params.conventional_mac_energy_pj() == Approx(1.0));
  CHECK(r.params.conventional_mac_area_um2() == Approx(2000.0));
  // the shipped defaults are this fit
  CHECK(r.params.energy.shifter_per_bit == Approx(P.energy.shifter_per_bit).epsilon(1e-6));
  CHECK(r.params.energy.register_per_bit == Approx(P.energy.register_per_bit).epsilon(1e-6));
  CHECK(r.params.area.shifter_per_bit == Approx(P.area.shifter_per_bit).epsilon(1e-6));
  CHECK(r.params.area.register_per_bit == Approx(P.area.register_per_bit).epsilon(1e-6));
}

TEST_CASE("calibration preconditions and infeasibility") {
  auto a = default_anchors();
  CHECK_THROWS_AS(calibrate({a[0]}), ConfigError);
  // impossible: (2,16) cheaper than conventional by 100x and 1-bit above 1
  std::vector<Anchor> bad{
      {"p", Metric::Power, slice_cfg(2, 16), std::nullopt, 0.01, false},
      {"p1", Metric::Power, slice_cfg(1, 16), std::nullopt, 5.0, false},
      {"p2", Metric::Power, slice_cfg(2, 1), std::nullopt, 0.01, false},
      {"a", Metric::Area, slice_cfg(2, 16), std::nullopt, 0.59, false},
  };
  CHECK_THROWS_AS(calibrate(bad), CalibrationError);
}

TEST_CASE("calibration recovers known parameters") {
  CostParams truth;
  truth.energy = {0.5, 1.0, 0.3, 4.0};
  truth.area = {0.5, 1.0, 0.1, 2.0};
  std::vector<Anchor> syn;
  for (auto [sw, L] : {std::pair{2, 16}, {2, 1}, {1, 4}, {4, 8}})
    for (Metric m : {Metric::Power, Metric::Area}) {
      Anchor a{"s", m, slice_cfg(sw, L), std::nullopt, 1.0, false};
      a.target = anchor_value(a, truth);
      syn.push_back(a);
    }
  const auto r = calibrate(syn);
  CHECK(r.max_error < 1e-6);
  auto rel = [](const ComponentCosts& c, double ComponentCosts::*f) { return c.*f / c.adder_per_bit; };
  CHECK(rel(r.params.energy, &ComponentCosts::shifter_per_bit) == Approx(0.3).epsilon(0.01));
  CHECK(rel(r.params.energy, &ComponentCosts::register_per_bit) == Approx(4.0).epsilon(0.01));
  CHECK(rel(r.params.area, &ComponentCosts::shifter_per_bit) == Approx(0.1).epsilon(0.01));
  CHECK(rel(r.params.area, &ComponentCosts::register_per_bit) == Approx(2.0).epsilon(0.01));
}

TEST_CASE("shipped parameter file matches the built-in defaults") {
  const auto f = load_cost_params(data_dir() + "/cost_params.json");
  CHECK(f.energy.mult_per_bit2 == Approx(P.energy.mult_per_bit2).epsilon(1e-12));
  CHECK(f.energy.adder_per_bit == Approx(P.energy.adder_per_bit).epsilon(1e-12));
  CHECK(f.energy.shifter_per_bit == Approx(P.energy.shifter_per_bit).epsilon(1e-12));
  CHECK(f.energy.register_per_bit == Approx(P.energy.register_per_bit).epsilon(1e-12));
  CHECK(f.area.mult_per_bit2 == Approx(P.area.mult_per_bit2).epsilon(1e-12));
  CHECK(f.area.register_per_bit == Approx(P.area.register_per_bit).epsilon(1e-12));
  CHECK(f.frequency_hz == 5e8);
}

TEST_CASE("parameter file errors") {
  CHECK_THROWS_AS(load_cost_params("/nonexistent/params.json"), ConfigError);
  CostParams bad = P;
  bad.energy.adder_per_bit = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
