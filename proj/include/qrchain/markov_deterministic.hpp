#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qrchain/core.hpp"

// Absorbing Markov chain over link-age tuples for chains of 3, 4 or 5 nodes
// under the deterministic cutoff policy, with an optional end-to-end cutoff
// variant that redirects too-old end-to-end outcomes to the empty state.

namespace qrchain {

/// Link ages per segment: -1 marks an empty segment, a link spanning several
/// segments stores its age on the leftmost one and zeros on the rest.
using AgeTuple = std::vector<int>;

struct DeterministicModel {
  ChainParams params;
  int t_c = 0;
  bool e2e_cutoff = false;
  std::vector<AgeTuple> transient_states;  // lexicographic; empty chain first
  std::vector<AgeTuple> absorbing_states;  // ascending end-to-end age
  Eigen::MatrixXd p;                       // row-stochastic; transient rows/cols first

  Eigen::Index n_transient() const { return static_cast<Eigen::Index>(transient_states.size()); }
  Eigen::Index n_absorbing() const { return static_cast<Eigen::Index>(absorbing_states.size()); }

  auto q() const { return p.topLeftCorner(n_transient(), n_transient()); }
  auto r() const { return p.topRightCorner(n_transient(), n_absorbing()); }

  long long absorbing_age(Eigen::Index j) const {
    return absorbing_states[static_cast<std::size_t>(j)][0];
  }
};

/// Builds the reachable state space and transition matrix by exhaustively
/// enumerating HEG outcomes, simultaneous swap-asap measurements and the
/// cutoff phase. Supported sizes: n_node in {3,4,5} with t_c < 1000, 30, 20
/// respectively.
DeterministicModel build_deterministic_model(const ChainParams& params, int t_c,
                                             bool e2e_cutoff = false);

/// Expected hitting time of the absorbing set from the empty chain.
double expected_delivery_time(const DeterministicModel& model);

/// Probability of eventually absorbing in each end-to-end state, starting
/// from the empty chain. Values sum to one.
std::vector<std::pair<AgeTuple, double>> absorption_distribution(const DeterministicModel& model);

/// Age-mixture average of w0^n lambda^age over the absorption distribution.
double expected_werner_deterministic(const DeterministicModel& model);

/// Convenience: builds the model and solves both systems with one
/// factorization.
ChainPerformance deterministic_performance(const ChainParams& params, int t_c,
                                           bool e2e_cutoff = false);

}  // namespace qrchain
