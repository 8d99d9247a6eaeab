#pragma once

#include "qrchain/core.hpp"

// Closed forms for three-node chains. The rate and expected Werner parameter
// under either policy share one algebraic shape,
//
//   R = p_g^2 p_s (1 + 2 K_1) / (1 + 2 p_g K_1)
//   w_bar = w0^2 (1 + 2 K_lambda) / (1 + 2 K_1),
//
// where K is the geometric kernel A_lambda(t_c) for the deterministic cutoff
// or B_lambda(p_c) for the probabilistic one.

namespace qrchain {

/// A_lambda(t_c) = sum_{t=1..t_c} ((1-p_g) lambda)^t, evaluated in closed form.
/// t_c may be infinite, which requires (1-p_g) lambda < 1.
double a_lambda(double p_g, double lambda, double t_c);

/// B_lambda(p_c) = sum_{t>=1} ((1-p_g)(1-p_c) lambda)^t = nu/(1-nu).
double b_lambda(double p_g, double lambda, double p_c);

/// Exact performance of a three-node chain under the given policy. The
/// deterministic-with-e2e-cutoff variant coincides with the plain
/// deterministic policy at three nodes and is accepted as such.
ChainPerformance three_node_performance(const ChainParams& params, const CutoffPolicy& policy);

/// The cutoff probability at which the probabilistic policy matches the rate
/// of the deterministic policy with cutoff time t_c:
/// p_c* = p_g (1-p_g)^t_c / (1 - (1-p_g)^(t_c+1)).
double crossover_pc(double p_g, double t_c);

/// Rates achievable by each policy subject to fidelity >= f_min, three nodes.
struct ThresholdRates {
  double f_min = 0.0;
  double best_t_c = 0.0;     // largest feasible cutoff time
  double rate_det = 0.0;     // rate at best_t_c
  double p_c_at_threshold = 1.0;
  double rate_prob = 0.0;    // rate at the smallest feasible p_c
  double gain = 1.0;         // rate_prob / rate_det
};

/// Maximizes the rate of each policy subject to F >= f_min. The deterministic
/// feasible set is a prefix {0..t} of cutoff times since fidelity decreases
/// and rate increases with t_c; the probabilistic boundary p_c is found by
/// bisection on the closed-form fidelity.
ThresholdRates three_node_threshold_rates(const ChainParams& params, double f_min);

}  // namespace qrchain
