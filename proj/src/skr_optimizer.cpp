#include "qrchain/skr_optimizer.hpp"

#include <cmath>

#include "qrchain/exact.hpp"
#include "qrchain/monte_carlo.hpp"
#include "qrchain/numerics.hpp"
#include "qrchain/rng.hpp"
#include "qrchain/three_node.hpp"

namespace qrchain {

namespace {

constexpr int kPcGridSteps = 100;       // grid spacing 1e-2 on [0,1]
constexpr double kGoldenTol = 1e-4;

struct Evaluation {
  double skr = 0.0;
  double skr_std = 0.0;
};

Evaluation evaluate(const ChainParams& params, const CutoffPolicy& policy,
                    const std::optional<McProtocol>& mc, std::uint64_t salt) {
  if (!mc) {
    const ChainPerformance perf = exact_performance(params, policy);
    return Evaluation{perf.skr, 0.0};
  }
  const McEstimate est = estimate_performance(params, policy, mc->n_samples, mc->n_batches,
                                              mix_seed(mc->seed, salt));
  return Evaluation{est.mean.skr, est.skr_std};
}

}  // namespace

int default_t_c_max(int n_node) {
  if (n_node == 3) return 50;
  if (n_node == 4) return 29;
  if (n_node == 5) return 19;
  throw std::invalid_argument("default_t_c_max: exact scans cover n_node in {3,4,5}");
}

OptimizationResult maximize_skr_over_pc(const ChainParams& params,
                                        const std::optional<McProtocol>& mc) {
  params.validate();
  OptimizationResult result;
  result.used_monte_carlo = mc.has_value();

  // Monte Carlo grid points share one set of RNG streams (common random
  // numbers), which stabilizes the argmax against sampling noise.
  int best_index = 0;
  for (int i = 0; i <= kPcGridSteps; ++i) {
    const double p_c = static_cast<double>(i) / kPcGridSteps;
    const Evaluation eval = evaluate(params, Probabilistic{p_c}, mc, 0);
    ++result.evaluations;
    if (eval.skr > result.best_skr) {
      result.best_skr = eval.skr;
      result.best_param = p_c;
      result.best_skr_std = eval.skr_std;
      best_index = i;
    }
  }
  if (mc) return result;

  // Sharpen within the bracketing grid cell; unimodality inside one cell is
  // assumed.
  const double lo = std::max(0.0, (best_index - 1.0) / kPcGridSteps);
  const double hi = std::min(1.0, (best_index + 1.0) / kPcGridSteps);
  const GoldenMaxResult refined = golden_section_max(
      [&](double p_c) { return exact_performance(params, Probabilistic{p_c}).skr; }, lo, hi,
      kGoldenTol);
  result.evaluations += refined.evaluations;
  if (refined.max > result.best_skr) {
    result.best_skr = refined.max;
    result.best_param = refined.argmax;
  }
  return result;
}

OptimizationResult maximize_skr_over_tc(const ChainParams& params, std::optional<int> t_c_max,
                                        const std::optional<McProtocol>& mc) {
  params.validate();
  OptimizationResult result;
  result.used_monte_carlo = mc.has_value();

  if (mc) {
    // Sampled estimates carry no monotonicity certificate; scan t_c up to the
    // coherence time, past which stored links are fully depolarized anyway.
    long long cap;
    if (t_c_max) {
      cap = *t_c_max;
    } else if (std::isinf(params.tau_coh)) {
      throw std::invalid_argument("maximize_skr_over_tc: t_c_max required for infinite tau_coh");
    } else {
      cap = static_cast<long long>(std::floor(params.tau_coh));
    }
    if (!std::isinf(params.tau_coh))
      cap = std::min(cap, static_cast<long long>(std::floor(params.tau_coh)));
    for (long long t_c = 0; t_c <= cap; ++t_c) {
      const Evaluation eval = evaluate(params, Deterministic{static_cast<double>(t_c)}, mc, 1);
      ++result.evaluations;
      if (eval.skr > result.best_skr) {
        result.best_skr = eval.skr;
        result.best_param = static_cast<double>(t_c);
        result.best_skr_std = eval.skr_std;
      }
    }
    return result;
  }

  const int cap = t_c_max ? *t_c_max : default_t_c_max(params.n_node);
  if (cap < 1) throw std::invalid_argument("maximize_skr_over_tc: t_c_max must be >= 1");

  for (int t_c = 0; t_c < cap; ++t_c) {
    const Evaluation eval =
        evaluate(params, Deterministic{static_cast<double>(t_c)}, mc, 0);
    ++result.evaluations;
    if (eval.skr > result.best_skr) {  // ties resolve to the smallest t_c
      result.best_skr = eval.skr;
      result.best_param = static_cast<double>(t_c);
    }
  }

  // Monotonicity bound: SKR(t_c >= cap) <= R(infinity) * SKF(w_bar(cap)).
  const double rate_no_cutoff = exact_performance(params, Probabilistic{0.0}).rate;
  const double w_bar_cap =
      exact_performance(params, Deterministic{static_cast<double>(cap)}).expected_werner;
  result.certificate_checked = true;
  result.certificate_bound = rate_no_cutoff * skf(w_bar_cap);
  result.certificate_ok =
      result.best_skr > result.certificate_bound || result.certificate_bound == 0.0;
  return result;
}

RatioResult skr_ratio(const ChainParams& params, std::optional<int> t_c_max,
                      const std::optional<McProtocol>& mc) {
  RatioResult result;
  result.prob = maximize_skr_over_pc(params, mc);
  result.det = maximize_skr_over_tc(params, t_c_max, mc);
  if (result.prob.best_skr == 0.0 && result.det.best_skr == 0.0) {
    result.ratio = 1.0;
    result.flag = RatioResult::Flag::both_zero;
  } else if (result.det.best_skr == 0.0) {
    result.ratio = kInfinity;
    result.flag = RatioResult::Flag::zero_denominator;
  } else {
    result.ratio = result.prob.best_skr / result.det.best_skr;
  }
  return result;
}

}  // namespace qrchain
