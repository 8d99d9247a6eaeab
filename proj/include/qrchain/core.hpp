#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

// Core model of the homogeneous repeater chain: hardware parameters, cutoff
// policies and the scalar Werner-parameter arithmetic shared by every solver.
// Everything here is a pure function of its arguments; all types are small
// immutable value objects.

namespace qrchain {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Hardware parameters of the chain. A chain of n_node nodes has
/// n_node - 1 segments, each running heralded entanglement generation with
/// success probability p_g per time step. Swaps succeed with probability p_s,
/// memories have coherence time tau_coh (in time steps, may be infinite) and
/// fresh links carry Werner parameter w0.
struct ChainParams {
  int n_node = 3;
  double p_g = 1.0;
  double p_s = 1.0;
  double tau_coh = kInfinity;
  double w0 = 1.0;

  int segments() const { return n_node - 1; }

  void validate() const {
    if (n_node < 3) throw std::invalid_argument("ChainParams: n_node must be >= 3");
    if (!(p_g > 0.0 && p_g <= 1.0)) throw std::invalid_argument("ChainParams: p_g must be in (0,1]");
    if (!(p_s > 0.0 && p_s <= 1.0)) throw std::invalid_argument("ChainParams: p_s must be in (0,1]");
    if (!(tau_coh >= 0.0)) throw std::invalid_argument("ChainParams: tau_coh must be >= 0");
    if (!(w0 > 0.0 && w0 <= 1.0)) throw std::invalid_argument("ChainParams: w0 must be in (0,1]");
  }
};

/// Discard every surviving non-end-to-end link with probability p_c each step.
struct Probabilistic {
  double p_c = 0.0;
};

/// Discard every surviving non-end-to-end link whose age is >= t_c.
/// t_c is a nonnegative integer or infinity (never discard).
struct Deterministic {
  double t_c = kInfinity;
};

/// As Deterministic, but additionally discard end-to-end links older than t_c.
struct DeterministicE2e {
  double t_c = kInfinity;
};

using CutoffPolicy = std::variant<Probabilistic, Deterministic, DeterministicE2e>;

inline bool is_valid_cutoff_time(double t_c) {
  return t_c >= 0.0 && (std::isinf(t_c) || t_c == std::floor(t_c));
}

inline void validate(const CutoffPolicy& policy) {
  if (const auto* p = std::get_if<Probabilistic>(&policy)) {
    if (!(p->p_c >= 0.0 && p->p_c <= 1.0))
      throw std::invalid_argument("CutoffPolicy: p_c must be in [0,1]");
  } else if (const auto* d = std::get_if<Deterministic>(&policy)) {
    if (!is_valid_cutoff_time(d->t_c))
      throw std::invalid_argument("CutoffPolicy: t_c must be a nonnegative integer or infinity");
  } else if (const auto* d = std::get_if<DeterministicE2e>(&policy)) {
    if (!is_valid_cutoff_time(d->t_c))
      throw std::invalid_argument("CutoffPolicy: t_c must be a nonnegative integer or infinity");
  }
}

inline std::string policy_name(const CutoffPolicy& policy) {
  if (std::holds_alternative<Probabilistic>(policy)) return "probabilistic";
  if (std::holds_alternative<Deterministic>(policy)) return "deterministic";
  return "deterministic_e2e";
}

inline double policy_param(const CutoffPolicy& policy) {
  if (const auto* p = std::get_if<Probabilistic>(&policy)) return p->p_c;
  if (const auto* d = std::get_if<Deterministic>(&policy)) return d->t_c;
  return std::get<DeterministicE2e>(policy).t_c;
}

/// Depolarizing parameter of one storage step, lambda = exp(-1/tau_coh).
/// tau_coh = 0 maps to lambda = 0 (total depolarization in one step) and
/// tau_coh = inf maps to lambda = 1 so that parameter sweeps stay total.
inline double lambda_from_tau(double tau_coh) {
  if (!(tau_coh >= 0.0)) throw std::invalid_argument("lambda_from_tau: tau_coh must be >= 0");
  if (tau_coh == 0.0) return 0.0;
  if (std::isinf(tau_coh)) return 1.0;
  return std::exp(-1.0 / tau_coh);
}

/// Fidelity of a Werner state to the maximally entangled state, (1+3w)/4.
inline double fidelity_from_werner(double w) {
  if (!(w >= -1.0 / 3.0 && w <= 1.0))
    throw std::invalid_argument("fidelity_from_werner: w must be in [-1/3,1]");
  return (1.0 + 3.0 * w) / 4.0;
}

/// Binary entropy in bits, with the 0 log 0 = 0 convention.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x must be in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Secret-key fraction max{1 - 2 h((1-w)/2), 0} for entanglement-based BB84.
inline double skf(double w_bar) {
  if (!(w_bar >= 0.0 && w_bar <= 1.0)) throw std::invalid_argument("skf: w_bar must be in [0,1]");
  return std::max(1.0 - 2.0 * binary_entropy((1.0 - w_bar) / 2.0), 0.0);
}

/// Secret-key rate R * SKF(w_bar) in bits per time step.
inline double skr(double rate, double w_bar) {
  if (!(rate > 0.0)) throw std::invalid_argument("skr: rate must be > 0");
  return rate * skf(w_bar);
}

/// Werner parameter of the link produced by swapping two Werner links.
inline double swap_werner(double w_left, double w_right) {
  return w_left * w_right;
}

/// Werner parameter after `steps` storage steps in memory with parameter lambda.
inline double age_werner(double w, long long steps, double lambda) {
  return w * std::pow(lambda, static_cast<double>(steps));
}

/// End-to-end figures of merit for one (parameters, policy) point.
struct ChainPerformance {
  double expected_delivery_time = 0.0;  // time steps
  double rate = 0.0;                    // 1 / time steps
  double expected_werner = 0.0;
  double fidelity = 0.0;
  double skr = 0.0;  // bits / time step
};

/// Fills the derived fields from the two independent quantities. Tolerates
/// solver-level rounding just past the Werner boundaries; anything beyond
/// 1e-9 still fails the domain checks.
inline ChainPerformance make_performance(double expected_delivery_time, double expected_werner) {
  if (expected_werner > 1.0 && expected_werner <= 1.0 + 1e-9) expected_werner = 1.0;
  if (expected_werner < 0.0 && expected_werner >= -1e-9) expected_werner = 0.0;
  ChainPerformance perf;
  perf.expected_delivery_time = expected_delivery_time;
  perf.rate = 1.0 / expected_delivery_time;
  perf.expected_werner = expected_werner;
  perf.fidelity = fidelity_from_werner(expected_werner);
  perf.skr = skr(perf.rate, expected_werner);
  return perf;
}

}  // namespace qrchain
