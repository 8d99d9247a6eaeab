#pragma once

#include "qrchain/core.hpp"

namespace qrchain {

/// Exact end-to-end performance for n_node in {3,4,5}: closed forms at three
/// nodes, Markov solvers otherwise. Deterministic cutoffs with infinite t_c
/// are supported only at three nodes; larger chains use the probabilistic
/// policy with p_c = 0 for the no-cutoff baseline.
ChainPerformance exact_performance(const ChainParams& params, const CutoffPolicy& policy);

}  // namespace qrchain
