#pragma once
#include <cstdint>
#include <vector>

#include "vcsim/bitslice.hpp"

namespace vcsim {

struct CvuConfig {
  int L = 16;
  SliceConfig slice;

  int nbve_count() const {
    return (slice.max_bw / slice.alpha) * (slice.max_bw / slice.beta);
  }
  void validate() const;
};

struct CompositionPlan {
  int bw_x = 8;  // padded
  int bw_w = 8;
  int clusters = 1;
  int nbves_per_cluster = 16;
  std::vector<int> shifts;  // per NBVE within a cluster, j-major
  int effective_length = 16;
};

struct CvuOutput {
  std::vector<int64_t> scalars;
  double utilization = 0.0;
};

struct TilePair {
  QuantizedVector x;
  QuantizedVector w;
};

// smallest divisor of max_bw that is a multiple of sw and >= bw
int plan_width(int bw, int slice_width, int max_bw);

CompositionPlan plan_composition(int bw_x, int bw_w, const CvuConfig& cfg);
CvuOutput execute_cycle(const std::vector<TilePair>& tiles, const CompositionPlan& plan,
                        const CvuConfig& cfg);
int64_t macs_per_cycle(const CompositionPlan& plan, const CvuConfig& cfg);

}  // namespace vcsim
