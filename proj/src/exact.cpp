#include "qrchain/exact.hpp"

#include <cmath>

#include "qrchain/markov_deterministic.hpp"
#include "qrchain/markov_probabilistic.hpp"
#include "qrchain/three_node.hpp"

namespace qrchain {

ChainPerformance exact_performance(const ChainParams& params, const CutoffPolicy& policy) {
  params.validate();
  validate(policy);
  if (params.n_node == 3) return three_node_performance(params, policy);
  if (params.n_node > 5)
    throw std::invalid_argument("exact_performance: exact methods cover n_node <= 5");

  if (const auto* prob = std::get_if<Probabilistic>(&policy))
    return probabilistic_performance(params, prob->p_c);

  const double t_c = policy_param(policy);
  if (std::isinf(t_c))
    throw std::invalid_argument(
        "exact_performance: infinite t_c has no finite state space; use Probabilistic{0}");
  return deterministic_performance(params, static_cast<int>(t_c),
                                   std::holds_alternative<DeterministicE2e>(policy));
}

}  // namespace qrchain
