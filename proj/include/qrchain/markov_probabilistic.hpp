#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qrchain/core.hpp"

// Finite Markov chain over binary occupancy strings for the probabilistic
// cutoff policy, with per-transition Werner update matrices M and one-step
// matrices H = P * M. Ages are never tracked: the expected Werner parameter
// comes from a stacked linear solve over the expected update matrices.

namespace qrchain {

/// States are bitmasks over segments: bit i set means segment i is covered by
/// a link; k adjacent set bits form one link spanning k segments. The
/// absorbing end-to-end state is the all-ones mask, which is also the largest
/// index, so transient states occupy indices 0 .. 2^n - 2.
struct ProbabilisticModel {
  ChainParams params;
  double p_c = 0.0;
  int n = 0;         // segments
  int n_states = 0;  // 2^n
  Eigen::MatrixXd p; // row-stochastic over bitmask indices

  /// Werner update matrices, (n+1) x (n+1), indexed s * n_states + s'.
  /// Empty (0 x 0) where the transition has zero probability.
  std::vector<Eigen::MatrixXd> update;

  int absorbing_state() const { return n_states - 1; }
  bool has_transition(int s, int s2) const { return p(s, s2) > 0.0; }

  const Eigen::MatrixXd& update_matrix(int s, int s2) const {
    return update[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_states) +
                  static_cast<std::size_t>(s2)];
  }

  /// One-step Werner update matrix H = P(s,s') * M(s,s').
  Eigen::MatrixXd one_step_matrix(int s, int s2) const {
    return p(s, s2) * update_matrix(s, s2);
  }
};

/// Builds the full 2^n state space, the transition matrix and every Werner
/// update matrix for n_node in {3,4,5}.
ProbabilisticModel build_probabilistic_model(const ChainParams& params, double p_c);

/// Expected hitting time of the end-to-end state from the empty chain.
double expected_delivery_time_prob(const ProbabilisticModel& model);

/// Expected Werner parameter of the delivered end-to-end link, via the
/// stacked linear system for the expected Werner update matrices.
double expected_werner_prob(const ProbabilisticModel& model);

/// Fixed-point evaluation of the same quantity by accumulating the series
/// sum_k sum_s' H^k H until the largest increment falls below `tol`. Exposed
/// for the convergence and boundedness checks.
struct WernerSeriesResult {
  double expected_werner = 0.0;
  Eigen::VectorXd stacked;  // per (transient state, component) accumulated sum
  int iterations = 0;
};
WernerSeriesResult expected_werner_prob_series(const ProbabilisticModel& model,
                                               double tol = 1e-14, int max_iter = 2000000);

/// Convenience wrapper producing the full figure-of-merit set.
ChainPerformance probabilistic_performance(const ChainParams& params, double p_c);

}  // namespace qrchain
