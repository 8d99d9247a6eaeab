#include "qrchain/monte_carlo.hpp"

#include <cmath>
#include <mutex>
#include <thread>

namespace qrchain {

namespace {

struct PolicyRules {
  bool probabilistic = false;
  double p_c = 0.0;
  double t_c = kInfinity;
  bool e2e_cutoff = false;
};

PolicyRules rules_of(const CutoffPolicy& policy) {
  PolicyRules rules;
  if (const auto* p = std::get_if<Probabilistic>(&policy)) {
    rules.probabilistic = true;
    rules.p_c = p->p_c;
  } else if (const auto* d = std::get_if<Deterministic>(&policy)) {
    rules.t_c = d->t_c;
  } else {
    rules.t_c = std::get<DeterministicE2e>(policy).t_c;
    rules.e2e_cutoff = true;
  }
  return rules;
}

// One time step in place. Returns the end-to-end link when delivery happens.
// Random draws are consumed in a fixed order (HEG left to right, swap coins
// left to right, cutoff coins left to right) so traces are seed-stable.
bool advance_step(std::vector<McLink>& links, int n, const ChainParams& params,
                  const PolicyRules& rules, Pcg32& rng, McLink& delivered) {
  for (McLink& l : links) l.age += 1;

  // HEG on every segment not covered by a link.
  static thread_local std::vector<McLink> scratch;
  scratch.clear();
  {
    std::size_t li = 0;
    for (int seg = 0; seg < n; ++seg) {
      if (li < links.size() && links[li].lo == seg) {
        scratch.push_back(links[li]);
        seg = links[li].hi;  // skip covered segments
        ++li;
        continue;
      }
      if (rng.bernoulli(params.p_g)) scratch.push_back(McLink{seg, seg, 0});
    }
  }

  // Simultaneous swap-asap: one Bell measurement per node holding two link
  // ends; a failed measurement destroys both incident links, and surviving
  // neighbours joined by successful measurements merge.
  const int m = static_cast<int>(scratch.size());
  static thread_local std::vector<bool> adjacent, coins;
  adjacent.assign(m > 0 ? m - 1 : 0, false);
  coins.assign(m > 0 ? m - 1 : 0, false);
  for (int i = 0; i + 1 < m; ++i) {
    adjacent[i] = scratch[i].hi + 1 == scratch[i + 1].lo;
    if (adjacent[i]) coins[i] = rng.bernoulli(params.p_s);
  }

  links.clear();
  bool open = false;
  McLink current;
  int last = -2;
  for (int i = 0; i < m; ++i) {
    const bool dead = (i > 0 && adjacent[i - 1] && !coins[i - 1]) ||
                      (i + 1 < m && adjacent[i] && !coins[i]);
    if (dead) {
      if (open) links.push_back(current);
      open = false;
      last = -2;
      continue;
    }
    if (open && last == i - 1 && adjacent[i - 1] && coins[i - 1]) {
      current.hi = scratch[i].hi;
      current.age += scratch[i].age;
    } else {
      if (open) links.push_back(current);
      current = scratch[i];
      open = true;
    }
    last = i;
  }
  if (open) links.push_back(current);

  if (links.size() == 1 && links.front().lo == 0 && links.front().hi == n - 1) {
    delivered = links.front();
    if (rules.e2e_cutoff && static_cast<double>(delivered.age) > rules.t_c) {
      links.clear();  // post-selection discards the too-old end-to-end link
      return false;
    }
    return true;
  }

  // Cutoff phase on the surviving links.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const bool discard = rules.probabilistic
                             ? rng.bernoulli(rules.p_c)
                             : static_cast<double>(links[i].age) >= rules.t_c;
    if (!discard) links[kept++] = links[i];
  }
  links.resize(kept);
  return false;
}

}  // namespace

EpisodeSample simulate_episode(const ChainParams& params, const CutoffPolicy& policy, Pcg32& rng,
                               const McOptions& options, const StepObserver* observer) {
  params.validate();
  validate(policy);
  const PolicyRules rules = rules_of(policy);
  const int n = params.segments();
  const double lambda = lambda_from_tau(params.tau_coh);

  std::vector<McLink> links;
  McLink delivered;
  for (long long step = 1; step <= options.max_steps_per_episode; ++step) {
    const bool done = advance_step(links, n, params, rules, rng, delivered);
    if (observer) {
      StepTrace trace;
      trace.step = step;
      trace.links = &links;
      trace.delivered = done;
      if (done) trace.e2e = delivered;
      (*observer)(trace);
    }
    if (done) {
      EpisodeSample sample;
      sample.delivery_time = step;
      sample.end_werner = std::pow(params.w0, n) * std::pow(lambda, static_cast<double>(delivered.age));
      return sample;
    }
  }
  throw EpisodeCapError("simulate_episode: step cap exceeded");
}

McEstimate estimate_performance(const ChainParams& params, const CutoffPolicy& policy,
                                int n_samples, int n_batches, std::uint64_t seed,
                                const McOptions& options) {
  if (n_samples < 1) throw std::invalid_argument("estimate_performance: n_samples must be >= 1");
  if (n_batches < 2) throw std::invalid_argument("estimate_performance: n_batches must be >= 2");
  params.validate();
  validate(policy);

  const std::size_t total = static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(n_batches);
  std::vector<EpisodeSample> samples(total);

  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Pcg32 rng(seed, static_cast<std::uint64_t>(i));
      samples[i] = simulate_episode(params, policy, rng, options);
    }
  };

  const unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                              static_cast<unsigned>(total));
  if (workers <= 1 || total < 256) {
    run_range(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  McEstimate estimate;
  estimate.batches.reserve(static_cast<std::size_t>(n_batches));
  double t_sum = 0.0, w_sum = 0.0;
  for (int j = 0; j < n_batches; ++j) {
    double t_batch = 0.0, w_batch = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const EpisodeSample& s = samples[static_cast<std::size_t>(j) * n_samples + i];
      t_batch += static_cast<double>(s.delivery_time);
      w_batch += s.end_werner;
    }
    t_batch /= n_samples;
    w_batch /= n_samples;
    estimate.batches.push_back(BatchEstimate{t_batch, w_batch, skf(w_batch) / t_batch});
    t_sum += t_batch;
    w_sum += w_batch;
  }

  const double t_mean = t_sum / n_batches;
  const double w_mean = w_sum / n_batches;
  double skr_sum = 0.0;
  for (const BatchEstimate& b : estimate.batches) skr_sum += b.skr_hat;
  const double skr_mean = skr_sum / n_batches;
  double skr_var = 0.0;
  for (const BatchEstimate& b : estimate.batches)
    skr_var += (b.skr_hat - skr_mean) * (b.skr_hat - skr_mean);
  estimate.skr_std = std::sqrt(skr_var / (n_batches - 1));

  estimate.mean.expected_delivery_time = t_mean;
  estimate.mean.rate = 1.0 / t_mean;
  estimate.mean.expected_werner = w_mean;
  estimate.mean.fidelity = fidelity_from_werner(w_mean);
  estimate.mean.skr = skr_mean;

  double t_var = 0.0, w_var = 0.0;
  for (const EpisodeSample& s : samples) {
    t_var += (s.delivery_time - t_mean) * (s.delivery_time - t_mean);
    w_var += (s.end_werner - w_mean) * (s.end_werner - w_mean);
  }
  const auto dn = static_cast<double>(total);
  estimate.t_std_err = std::sqrt(t_var / (dn - 1.0) / dn);
  estimate.w_std_err = std::sqrt(w_var / (dn - 1.0) / dn);
  return estimate;
}

}  // namespace qrchain
