#pragma once

#include <optional>

#include "qrchain/core.hpp"

// Maximization of the secret-key rate over the cutoff parameter of either
// policy: a 1e-2 grid over p_c (sharpened by golden-section search to 1e-4
// when the evaluator is exact), and a monotonicity-bounded scan over t_c with
// an explicit certificate that the optimum is not beyond the scanned range.

namespace qrchain {

struct McProtocol {
  int n_samples = 100;
  int n_batches = 20;
  std::uint64_t seed = 1;
};

struct OptimizationResult {
  double best_param = 0.0;  // p_c or t_c
  double best_skr = 0.0;
  int evaluations = 0;
  bool used_monte_carlo = false;
  double best_skr_std = 0.0;  // std over batches at the best point (MC only)

  // t_c search only: best_skr is guaranteed optimal over all t_c >= 0 when
  // certificate_ok, i.e. best_skr exceeds R(infinity) * SKF(w_bar(t_c_max)).
  bool certificate_checked = false;
  bool certificate_ok = false;
  double certificate_bound = 0.0;
};

/// Default t_c scan bound per chain size: 50 for three nodes (closed forms),
/// 29 for four and 19 for five (state spaces grow as t_c^2).
int default_t_c_max(int n_node);

/// Grid search over p_c in {0, 0.01, ..., 1}. Exact evaluators refine the
/// grid argmax with golden-section search on the bracketing cell; Monte Carlo
/// estimates return the grid argmax unrefined.
OptimizationResult maximize_skr_over_pc(const ChainParams& params,
                                        const std::optional<McProtocol>& mc = std::nullopt);

/// Evaluates SKR(t_c) for t_c < t_c_max and checks the bound certificate.
/// A failed certificate is reported in the result, never thrown. With a Monte
/// Carlo evaluator the scan runs over t_c <= min(t_c_max, tau_coh) and no
/// certificate is computed.
OptimizationResult maximize_skr_over_tc(const ChainParams& params,
                                        std::optional<int> t_c_max = std::nullopt,
                                        const std::optional<McProtocol>& mc = std::nullopt);

struct RatioResult {
  enum class Flag { ok, both_zero, zero_denominator };
  double ratio = 1.0;
  Flag flag = Flag::ok;
  OptimizationResult prob;
  OptimizationResult det;
};

/// max_{p_c} SKR / max_{t_c} SKR. Returns 1 (flagged) when both maxima are
/// zero and flags a zero denominator distinctly.
RatioResult skr_ratio(const ChainParams& params, std::optional<int> t_c_max = std::nullopt,
                      const std::optional<McProtocol>& mc = std::nullopt);

}  // namespace qrchain
