#include "qrchain/markov_deterministic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "chain_step.hpp"
#include "qrchain/numerics.hpp"

namespace qrchain {

namespace {

using detail::Span;

std::vector<Span> links_from_tuple(const AgeTuple& tuple) {
  std::vector<Span> links;
  const int n = static_cast<int>(tuple.size());
  int seg = 0;
  while (seg < n) {
    if (tuple[static_cast<std::size_t>(seg)] < 0) {
      ++seg;
      continue;
    }
    Span link{seg, seg, tuple[static_cast<std::size_t>(seg)]};
    while (link.hi + 1 < n && tuple[static_cast<std::size_t>(link.hi + 1)] >= 0) ++link.hi;
    links.push_back(link);
    seg = link.hi + 1;
  }
  return links;
}

AgeTuple tuple_from_links(const std::vector<Span>& links, int n_segments) {
  AgeTuple tuple(static_cast<std::size_t>(n_segments), -1);
  for (const Span& l : links) {
    tuple[static_cast<std::size_t>(l.lo)] = static_cast<int>(l.age);
    for (int seg = l.lo + 1; seg <= l.hi; ++seg) tuple[static_cast<std::size_t>(seg)] = 0;
  }
  return tuple;
}

void check_supported(const ChainParams& params, int t_c) {
  params.validate();
  if (params.n_node < 3 || params.n_node > 5)
    throw std::invalid_argument("build_deterministic_model: n_node must be 3, 4 or 5");
  if (t_c < 0) throw std::invalid_argument("build_deterministic_model: t_c must be >= 0");
  const int cap = params.n_node == 5 ? 20 : params.n_node == 4 ? 30 : 1000;
  if (t_c >= cap)
    throw std::invalid_argument("build_deterministic_model: t_c exceeds the supported cap");
}

}  // namespace

DeterministicModel build_deterministic_model(const ChainParams& params, int t_c,
                                             bool e2e_cutoff) {
  check_supported(params, t_c);

  DeterministicModel model;
  model.params = params;
  model.t_c = t_c;
  model.e2e_cutoff = e2e_cutoff;

  const int n = params.segments();
  const AgeTuple empty(static_cast<std::size_t>(n), -1);

  // One time step from `state`, producing the outcome distribution over end
  // states. Links age during the HEG phase, swaps are simultaneous, then every
  // surviving non-e2e link of age >= t_c is discarded. With the e2e cutoff,
  // end-to-end outcomes older than t_c collapse to the empty chain.
  const auto outcomes_of = [&](const AgeTuple& state) {
    std::map<AgeTuple, double> outcomes;
    detail::enumerate_heg_and_swaps(
        links_from_tuple(state), n, params.p_g, params.p_s,
        [&](const std::vector<Span>& links, double prob) {
          if (links.size() == 1 && detail::covers_all(links.front(), n)) {
            if (e2e_cutoff && links.front().age > t_c) {
              outcomes[empty] += prob;
            } else {
              outcomes[tuple_from_links(links, n)] += prob;
            }
            return;
          }
          std::vector<Span> kept;
          for (const Span& l : links)
            if (l.age < t_c) kept.push_back(l);
          outcomes[tuple_from_links(kept, n)] += prob;
        });
    return outcomes;
  };

  const auto is_absorbing = [](const AgeTuple& t) {
    return std::none_of(t.begin(), t.end(), [](int a) { return a < 0; });
  };

  // Breadth-first discovery of the reachable states, caching each state's
  // outcome distribution for the fill pass.
  std::map<AgeTuple, std::map<AgeTuple, double>> transitions;
  std::vector<AgeTuple> frontier{empty};
  transitions[empty] = {};
  std::vector<AgeTuple> absorbing;
  while (!frontier.empty()) {
    const AgeTuple state = frontier.back();
    frontier.pop_back();
    auto outcomes = outcomes_of(state);
    for (const auto& [next, prob] : outcomes) {
      if (is_absorbing(next)) {
        absorbing.push_back(next);
      } else if (!transitions.count(next)) {
        transitions[next] = {};
        frontier.push_back(next);
      }
    }
    transitions[state] = std::move(outcomes);
  }

  for (const auto& [state, _] : transitions) model.transient_states.push_back(state);
  std::sort(model.transient_states.begin(), model.transient_states.end());
  std::sort(absorbing.begin(), absorbing.end());
  absorbing.erase(std::unique(absorbing.begin(), absorbing.end()), absorbing.end());
  model.absorbing_states = std::move(absorbing);

  const Eigen::Index nt = model.n_transient();
  const Eigen::Index na = model.n_absorbing();
  std::map<AgeTuple, Eigen::Index> index;
  for (Eigen::Index i = 0; i < nt; ++i) index[model.transient_states[static_cast<std::size_t>(i)]] = i;
  for (Eigen::Index j = 0; j < na; ++j) index[model.absorbing_states[static_cast<std::size_t>(j)]] = nt + j;

  model.p = Eigen::MatrixXd::Zero(nt + na, nt + na);
  for (const auto& [state, outcomes] : transitions) {
    const Eigen::Index row = index.at(state);
    for (const auto& [next, prob] : outcomes) model.p(row, index.at(next)) += prob;
  }
  for (Eigen::Index j = 0; j < na; ++j) model.p(nt + j, nt + j) = 1.0;
  return model;
}

namespace {

// I - Q with the diagonal assembled as the sum of the off-diagonal row mass,
// 1 - P(s,s) = sum_{s' != s} P(s,s'). Row stochasticity makes the identity
// exact, and summing small positive terms avoids the catastrophic
// cancellation that 1 - P(s,s) suffers when the return probability is close
// to one (tiny p_g).
Eigen::MatrixXd transient_system(const DeterministicModel& model) {
  const Eigen::Index nt = model.n_transient();
  const Eigen::Index total = model.p.cols();
  Eigen::MatrixXd system = -model.q();
  for (Eigen::Index i = 0; i < nt; ++i) {
    double off_diagonal_mass = 0.0;
    for (Eigen::Index j = 0; j < total; ++j)
      if (j != i) off_diagonal_mass += model.p(i, j);
    system(i, i) = off_diagonal_mass;
  }
  return system;
}

}  // namespace

double expected_delivery_time(const DeterministicModel& model) {
  const Eigen::MatrixXd system = transient_system(model);
  PivotedLu lu(system);
  const Eigen::VectorXd v =
      solve_refined(lu, system, Eigen::VectorXd::Ones(model.n_transient()));
  return v(0);  // empty chain sorts first
}

std::vector<std::pair<AgeTuple, double>> absorption_distribution(const DeterministicModel& model) {
  const Eigen::Index nt = model.n_transient();
  const Eigen::MatrixXd system = transient_system(model);
  PivotedLu lu(system);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(nt);
  unit(0) = 1.0;
  const Eigen::VectorXd reach = solve_refined(lu, system, unit, /*transposed=*/true);
  const Eigen::VectorXd gamma = model.r().transpose() * reach;

  std::vector<std::pair<AgeTuple, double>> dist;
  dist.reserve(static_cast<std::size_t>(model.n_absorbing()));
  for (Eigen::Index j = 0; j < model.n_absorbing(); ++j)
    dist.emplace_back(model.absorbing_states[static_cast<std::size_t>(j)], gamma(j));
  return dist;
}

double expected_werner_deterministic(const DeterministicModel& model) {
  const double lambda = lambda_from_tau(model.params.tau_coh);
  const double w_new = std::pow(model.params.w0, model.params.segments());
  double w_bar = 0.0;
  for (const auto& [state, prob] : absorption_distribution(model))
    w_bar += prob * w_new * std::pow(lambda, state[0]);
  return w_bar;
}

ChainPerformance deterministic_performance(const ChainParams& params, int t_c, bool e2e_cutoff) {
  const DeterministicModel model = build_deterministic_model(params, t_c, e2e_cutoff);
  const Eigen::Index nt = model.n_transient();
  const Eigen::MatrixXd system = transient_system(model);
  PivotedLu lu(system);

  const Eigen::VectorXd v = solve_refined(lu, system, Eigen::VectorXd::Ones(nt));
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(nt);
  unit(0) = 1.0;
  const Eigen::VectorXd reach = solve_refined(lu, system, unit, /*transposed=*/true);
  const Eigen::VectorXd gamma = model.r().transpose() * reach;

  const double lambda = lambda_from_tau(params.tau_coh);
  const double w_new = std::pow(params.w0, params.segments());
  double w_bar = 0.0;
  for (Eigen::Index j = 0; j < model.n_absorbing(); ++j)
    w_bar += gamma(j) * w_new * std::pow(lambda, static_cast<double>(model.absorbing_age(j)));
  return make_performance(v(0), w_bar);
}

}  // namespace qrchain
