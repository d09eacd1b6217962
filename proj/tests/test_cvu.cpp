#include <catch_amalgamated.hpp>

#include <random>

#include "vcsim/cvu.hpp"
#include "vcsim/error.hpp"

using namespace vcsim;

namespace {

TilePair random_pair(std::mt19937_64& rng, int len, int bx, int bw, bool sx, bool sw) {
  std::uniform_int_distribution<int64_t> dx(min_value(bx, sx), max_value(bx, sx));
  std::uniform_int_distribution<int64_t> dw(min_value(bw, sw), max_value(bw, sw));
  std::vector<int32_t> x(len), w(len);
  for (auto& v : x) v = int32_t(dx(rng));
  for (auto& v : w) v = int32_t(dw(rng));
  return {{x, bx, sx}, {w, bw, sw}};
}

CvuConfig cfg_of(int a, int b, int L) {
  CvuConfig c;
  c.L = L;
  c.slice = {a, b, 8};
  return c;
}

}  // namespace

TEST_CASE("NBVE count") {
  CHECK(CvuConfig{}.nbve_count() == 16);
  CHECK(cfg_of(1, 1, 16).nbve_count() == 64);
  CHECK(cfg_of(4, 2, 16).nbve_count() == 8);
}

TEST_CASE("named composition modes") {
  CvuConfig c;
  auto h = plan_composition(8, 8, c);
  CHECK(h.clusters == 1);
  CHECK(h.nbves_per_cluster == 16);
  CHECK(h.effective_length == c.L);
  CHECK(h.shifts.size() == 16);
  CHECK(h.shifts.back() == 12);

  auto m = plan_composition(8, 2, c);
  CHECK(m.clusters == 4);
  CHECK(m.nbves_per_cluster == 4);
  CHECK(m.effective_length == 4 * c.L);
  CHECK(m.shifts == std::vector<int>{0, 2, 4, 6});

  auto l = plan_composition(2, 2, c);
  CHECK(l.clusters == 16);
  CHECK(l.nbves_per_cluster == 1);

  auto q = plan_composition(4, 4, c);
  CHECK(q.clusters == 4);
  CHECK(q.nbves_per_cluster == 4);
  CHECK(q.effective_length == 4 * c.L);
}

TEST_CASE("plan widths round up to divisors of max_bw") {
  CHECK(plan_width(3, 2, 8) == 4);
  CHECK(plan_width(5, 2, 8) == 8);
  CHECK(plan_width(6, 2, 8) == 8);
  CHECK(plan_width(1, 2, 8) == 2);
  CHECK(plan_width(3, 1, 8) == 4);
  CHECK(plan_width(2, 4, 8) == 4);
  CHECK_THROWS_AS(plan_width(9, 2, 8), RangeError);
  CHECK_THROWS_AS(plan_composition(0, 8, CvuConfig{}), RangeError);
}

TEST_CASE("every plan keeps all NBVEs busy") {
  for (int a : {1, 2, 4})
    for (int b : {1, 2, 4}) {
      const auto c = cfg_of(a, b, 16);
      for (int bx = 1; bx <= 8; ++bx)
        for (int bw = 1; bw <= 8; ++bw) {
          const auto p = plan_composition(bx, bw, c);
          REQUIRE(p.clusters * p.nbves_per_cluster == c.nbve_count());
          REQUIRE(p.nbves_per_cluster == (p.bw_x / a) * (p.bw_w / b));
          REQUIRE(p.effective_length == p.clusters * c.L);
        }
    }
}

TEST_CASE("macs_per_cycle examples and law") {
  CvuConfig c;
  CHECK(macs_per_cycle(plan_composition(8, 8, c), c) == 16);
  CHECK(macs_per_cycle(plan_composition(8, 2, c), c) == 64);
  CHECK(macs_per_cycle(plan_composition(2, 2, c), c) == 256);
  for (int bx = 1; bx <= 8; ++bx)
    for (int bw = 1; bw <= 8; ++bw) {
      const auto p = plan_composition(bx, bw, c);
      REQUIRE(macs_per_cycle(p, c) == c.L * (8 / p.bw_x) * (8 / p.bw_w));
      if (bx > 1) REQUIRE(macs_per_cycle(plan_composition(bx - 1, bw, c), c) >= macs_per_cycle(p, c));
    }
  // halving a padded width doubles throughput
  CHECK(macs_per_cycle(plan_composition(4, 8, c), c) == 2 * macs_per_cycle(plan_composition(8, 8, c), c));
  CHECK(macs_per_cycle(plan_composition(2, 4, c), c) == 2 * macs_per_cycle(plan_composition(4, 4, c), c));
}

TEST_CASE("scalar-composable degenerate case") {
  const auto c = cfg_of(2, 2, 1);
  CHECK(macs_per_cycle(plan_composition(8, 8, c), c) == 1);
  auto out = execute_cycle({{{{-7}, 8, true}, {{9}, 8, true}}}, plan_composition(8, 8, c), c);
  CHECK(out.scalars == std::vector<int64_t>{-63});
}

TEST_CASE("execute_cycle examples") {
  auto c = cfg_of(2, 2, 2);
  auto h = execute_cycle({{{{13, 5}, 8, false}, {{9, 6}, 8, false}}}, plan_composition(8, 8, c), c);
  CHECK(h.scalars == std::vector<int64_t>{147});
  CHECK(h.utilization == 1.0);

  CvuConfig d;
  std::vector<TilePair> ones(16, TilePair{{{1}, 2, false}, {{1}, 2, false}});
  auto l = execute_cycle(ones, plan_composition(2, 2, d), d);
  CHECK(l.scalars == std::vector<int64_t>(16, 1));
  CHECK(l.utilization == Catch::Approx(1.0 / 16));

  std::mt19937_64 rng(3);
  std::vector<TilePair> tiles;
  for (int i = 0; i < 4; ++i) tiles.push_back(random_pair(rng, 16, 8, 2, false, true));
  auto m = execute_cycle(tiles, plan_composition(8, 2, d), d);
  REQUIRE(m.scalars.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m.scalars[i] == dot_exact(tiles[i].x, tiles[i].w));
}

TEST_CASE("execute_cycle shape errors") {
  CvuConfig d;
  auto p = plan_composition(8, 2, d);
  std::vector<TilePair> three(3, TilePair{{{1}, 8, true}, {{1}, 2, true}});
  CHECK_THROWS_AS(execute_cycle(three, p, d), ShapeError);
  std::vector<TilePair> longt(4, TilePair{{std::vector<int32_t>(17, 1), 8, true},
                                          {std::vector<int32_t>(17, 1), 2, true}});
  CHECK_THROWS_AS(execute_cycle(longt, p, d), ShapeError);
  std::vector<TilePair> wide(4, TilePair{{{1}, 8, true}, {{1}, 4, true}});
  CHECK_THROWS_AS(execute_cycle(wide, p, d), ShapeError);
}

TEST_CASE("execute_cycle matches the oracle on random plans") {
  std::mt19937_64 rng(11);
  const int widths[3] = {1, 2, 4};
  for (int it = 0; it < 1500; ++it) {
    const auto c = cfg_of(widths[rng() % 3], widths[rng() % 3], 1 + int(rng() % 16));
    const int bx = 1 + int(rng() % 8), bw = 1 + int(rng() % 8);
    const bool sx = rng() & 1, sw = rng() & 1;
    const auto p = plan_composition(bx, bw, c);
    std::vector<TilePair> tiles;
    for (int k = 0; k < p.clusters; ++k)
      tiles.push_back(random_pair(rng, int(rng() % (c.L + 1)), bx, bw, sx, sw));
    const auto out = execute_cycle(tiles, p, c);
    for (int k = 0; k < p.clusters; ++k) REQUIRE(out.scalars[k] == dot_exact(tiles[k].x, tiles[k].w));
  }
}
