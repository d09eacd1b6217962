#pragma once
#include <ostream>
#include <string>

#include "vcsim/arch_sim.hpp"

namespace vcsim {

enum ExitCode { kOk = 0, kUsage = 1, kInputError = 2, kInternalError = 3 };

// the whole CLI; returns the process exit code
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "style=vector,memory=hbm2[,lanes=16][,bandwidth=<GB/s>][,pj_per_bit=..][,label=..]"
RunConfig parse_run_config(const std::string& spec, const CostParams& params, double budget_mw,
                           const SramTotals& sram);

}  // namespace vcsim
