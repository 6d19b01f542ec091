#pragma once

#include "rtnmpc/auxsim.hpp"
#include "rtnmpc/certify.hpp"
#include "rtnmpc/config.hpp"

namespace rtnmpc {

/// Everything produced by one certification run.
struct PipelineResult {
  LqNlp lq;
  double rho;  ///< resolved value (absolute or rho_scale * lambda_max(H))
  CertifiedConstants consts;
  LyapunovEstimate lyap;                          ///< curve behind Figure-1 style sweeps
  std::vector<std::array<double, 3>> eig_curve;   ///< Figure-2 style sweep
  RegionConfig region;
};

/// Full certification chain: build the LQ NLP, estimate every primary
/// constant, derive the chain, compute T1/T2 and T_star, and evaluate both
/// sweep curves. Throws CertificationError naming the violated assumption
/// when no certificate exists (contraction or Lyapunov decrease).
PipelineResult run_certification(const ProblemConfig& config);

/// Region levels actually used for a config (V_bar from x_max when not set
/// explicitly).
RegionConfig resolve_region(const ProblemConfig& config, const LqNlp& lq);

}  // namespace rtnmpc
