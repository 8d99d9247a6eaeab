#include "qrchain/three_node.hpp"

#include <cmath>

namespace qrchain {

namespace {

// Integer power by repeated squaring; avoids drift of pow() for large t_c.
double pow_int(double base, long long exponent) {
  double result = 1.0;
  double factor = base;
  long long e = exponent;
  while (e > 0) {
    if (e & 1) result *= factor;
    factor *= factor;
    e >>= 1;
  }
  return result;
}

ChainPerformance performance_from_kernel(const ChainParams& params, double k_one,
                                         double k_lambda) {
  const double rate = params.p_g * params.p_g * params.p_s * (1.0 + 2.0 * k_one) /
                      (1.0 + 2.0 * params.p_g * k_one);
  const double w_bar =
      params.w0 * params.w0 * (1.0 + 2.0 * k_lambda) / (1.0 + 2.0 * k_one);
  return make_performance(1.0 / rate, w_bar);
}

}  // namespace

double a_lambda(double p_g, double lambda, double t_c) {
  if (!(p_g > 0.0 && p_g <= 1.0)) throw std::invalid_argument("a_lambda: p_g must be in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("a_lambda: lambda must be in [0,1]");
  if (!is_valid_cutoff_time(t_c))
    throw std::invalid_argument("a_lambda: t_c must be a nonnegative integer or infinity");

  const double nu = (1.0 - p_g) * lambda;
  if (std::isinf(t_c)) {
    if (nu >= 1.0) throw std::invalid_argument("a_lambda: divergent series, (1-p_g)*lambda >= 1");
    return nu / (1.0 - nu);
  }
  if (nu == 1.0) return t_c;  // sum of t_c ones
  return (1.0 - pow_int(nu, static_cast<long long>(t_c))) * nu / (1.0 - nu);
}

double b_lambda(double p_g, double lambda, double p_c) {
  if (!(p_g > 0.0 && p_g <= 1.0)) throw std::invalid_argument("b_lambda: p_g must be in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("b_lambda: lambda must be in [0,1]");
  if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("b_lambda: p_c must be in [0,1]");

  const double nu = (1.0 - p_g) * (1.0 - p_c) * lambda;
  if (nu >= 1.0) throw std::invalid_argument("b_lambda: divergent series");
  return nu / (1.0 - nu);
}

ChainPerformance three_node_performance(const ChainParams& params, const CutoffPolicy& policy) {
  params.validate();
  validate(policy);
  if (params.n_node != 3)
    throw std::invalid_argument("three_node_performance: requires n_node == 3");

  const double lambda = lambda_from_tau(params.tau_coh);
  if (const auto* prob = std::get_if<Probabilistic>(&policy)) {
    return performance_from_kernel(params, b_lambda(params.p_g, 1.0, prob->p_c),
                                   b_lambda(params.p_g, lambda, prob->p_c));
  }
  const double t_c = policy_param(policy);  // e2e variant is identical at three nodes
  return performance_from_kernel(params, a_lambda(params.p_g, 1.0, t_c),
                                 a_lambda(params.p_g, lambda, t_c));
}

double crossover_pc(double p_g, double t_c) {
  if (!(p_g > 0.0 && p_g <= 1.0)) throw std::invalid_argument("crossover_pc: p_g must be in (0,1]");
  if (!is_valid_cutoff_time(t_c) || std::isinf(t_c))
    throw std::invalid_argument("crossover_pc: t_c must be a finite nonnegative integer");
  const double q = 1.0 - p_g;
  const double q_tc = pow_int(q, static_cast<long long>(t_c));
  // mathematically in [0,1]; clamp away rounding at the never-store endpoint
  return std::min(1.0, std::max(0.0, p_g * q_tc / (1.0 - q_tc * q)));
}

ThresholdRates three_node_threshold_rates(const ChainParams& params, double f_min) {
  params.validate();
  if (params.n_node != 3)
    throw std::invalid_argument("three_node_threshold_rates: requires n_node == 3");
  if (!(f_min >= 0.25 && f_min <= 1.0))
    throw std::invalid_argument("three_node_threshold_rates: f_min must be in [0.25,1]");

  ThresholdRates out;
  out.f_min = f_min;

  // Deterministic side: fidelity is non-increasing and rate non-decreasing in
  // t_c, so the best feasible cutoff is the last one before fidelity drops
  // below the threshold. The infinite-cutoff point caps the scan.
  const ChainPerformance no_cutoff =
      three_node_performance(params, Deterministic{kInfinity});
  if (no_cutoff.fidelity >= f_min) {
    out.best_t_c = kInfinity;
    out.rate_det = no_cutoff.rate;
  } else {
    double t_c = 0.0;
    ChainPerformance perf = three_node_performance(params, Deterministic{0.0});
    if (perf.fidelity < f_min)
      throw std::invalid_argument("three_node_threshold_rates: f_min infeasible even at t_c = 0");
    for (;;) {
      const ChainPerformance next = three_node_performance(params, Deterministic{t_c + 1.0});
      if (next.fidelity < f_min) break;
      t_c += 1.0;
      perf = next;
    }
    out.best_t_c = t_c;
    out.rate_det = perf.rate;
  }

  // Probabilistic side: fidelity increases with p_c, rate decreases, so the
  // best feasible point sits where the fidelity meets the threshold.
  const ChainPerformance at_zero = three_node_performance(params, Probabilistic{0.0});
  if (at_zero.fidelity >= f_min) {
    out.p_c_at_threshold = 0.0;
    out.rate_prob = at_zero.rate;
  } else {
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (three_node_performance(params, Probabilistic{mid}).fidelity >= f_min)
        hi = mid;
      else
        lo = mid;
    }
    out.p_c_at_threshold = hi;
    out.rate_prob = three_node_performance(params, Probabilistic{hi}).rate;
  }

  out.gain = out.rate_prob / out.rate_det;
  return out;
}

}  // namespace qrchain
