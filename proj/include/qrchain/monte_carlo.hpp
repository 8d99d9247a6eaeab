#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qrchain/core.hpp"
#include "qrchain/rng.hpp"

// Episode-level simulation of the repeater chain for any n_node >= 3 and all
// three cutoff policies, plus the batched estimators used for secret-key-rate
// error bars. The simulator is written directly against the protocol rules
// and shares nothing with the Markov builders, so the two can cross-check
// each other.

namespace qrchain {

struct EpisodeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A link covering segments [lo, hi]; age counts storage steps.
struct McLink {
  int lo = 0;
  int hi = 0;
  long long age = 0;
};

/// Snapshot handed to an observer after every completed time step.
struct StepTrace {
  long long step = 0;                // 1-based
  const std::vector<McLink>* links;  // links at the end of the step
  bool delivered = false;
  McLink e2e;  // valid when delivered
};
using StepObserver = std::function<void(const StepTrace&)>;

struct EpisodeSample {
  long long delivery_time = 0;  // time steps
  double end_werner = 0.0;      // w0^n lambda^age of the delivered link
};

struct BatchEstimate {
  double t_hat = 0.0;
  double w_hat = 0.0;
  double skr_hat = 0.0;  // skf(w_hat) / t_hat
};

struct McEstimate {
  /// expected_delivery_time and expected_werner are overall sample means;
  /// skr is the mean of the per-batch estimates, matching how the error bar
  /// below is defined.
  ChainPerformance mean;
  std::vector<BatchEstimate> batches;
  double skr_std = 0.0;    // standard deviation over batches
  double t_std_err = 0.0;  // standard error of the delivery-time mean
  double w_std_err = 0.0;  // standard error of the Werner mean
};

struct McOptions {
  long long max_steps_per_episode = 100000000;
};

/// Runs one episode from the empty chain until an end-to-end link is
/// delivered. Under the e2e-cutoff variant a too-old end-to-end link is
/// discarded and the episode keeps accruing time. Throws EpisodeCapError when
/// the step cap is hit.
EpisodeSample simulate_episode(const ChainParams& params, const CutoffPolicy& policy, Pcg32& rng,
                               const McOptions& options = {},
                               const StepObserver* observer = nullptr);

/// n_batches x n_samples episodes on independent RNG streams (stream id =
/// episode index), reduced in episode order so results depend only on the
/// seed.
McEstimate estimate_performance(const ChainParams& params, const CutoffPolicy& policy,
                                int n_samples, int n_batches, std::uint64_t seed,
                                const McOptions& options = {});

}  // namespace qrchain
