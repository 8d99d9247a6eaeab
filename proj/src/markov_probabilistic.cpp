#include "qrchain/markov_probabilistic.hpp"

#include <cmath>
#include <stdexcept>

#include "chain_step.hpp"
#include "qrchain/numerics.hpp"

namespace qrchain {

namespace {

using detail::Span;

std::vector<Span> links_from_mask(int mask, int n) {
  std::vector<Span> links;
  int seg = 0;
  while (seg < n) {
    if (!((mask >> seg) & 1)) {
      ++seg;
      continue;
    }
    Span link{seg, seg, 0};
    while (link.hi + 1 < n && ((mask >> (link.hi + 1)) & 1)) ++link.hi;
    links.push_back(link);
    seg = link.hi + 1;
  }
  return links;
}

int mask_from_links(const std::vector<Span>& links) {
  int mask = 0;
  for (const Span& l : links)
    for (int seg = l.lo; seg <= l.hi; ++seg) mask |= 1 << seg;
  return mask;
}

int lowest_empty_segment(int mask, int n) {
  for (int seg = 0; seg < n; ++seg)
    if (!((mask >> seg) & 1)) return seg;
  throw std::logic_error("lowest_empty_segment: state has no empty segment");
}

// Werner update matrix for the transition s -> s2. Columns follow the
// composition of each link of s2: u'_a = u_a * w0^l * lambda^m, where l
// counts the fresh elementary links and m the already-active links of s that
// went into the link holding segment a'. The source index a is the segment
// itself when no active link is involved, the active link's leftmost segment
// when one is, and the product entry n when two are. Vanished links reset via
// the lowest-indexed empty segment of s. For the absorbing end-to-end state
// every column reads off the updated product entry.
Eigen::MatrixXd build_update_matrix(int s, int s2, int n, double w0, double lambda) {
  const std::vector<Span> actives = links_from_mask(s, n);
  const std::vector<Span> runs = links_from_mask(s2, n);

  const auto run_composition = [&](const Span& run) {
    struct Composition {
      int n_active = 0;
      int n_new_segments = 0;
      int active_lo = -1;
    } comp;
    comp.n_new_segments = run.hi - run.lo + 1;
    for (const Span& a : actives) {
      if (a.hi < run.lo || a.lo > run.hi) continue;
      if (a.lo < run.lo || a.hi > run.hi)
        throw std::logic_error("build_update_matrix: active link straddles a run boundary");
      ++comp.n_active;
      comp.n_new_segments -= a.hi - a.lo + 1;
      if (comp.active_lo < 0) comp.active_lo = a.lo;
    }
    return comp;
  };

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const bool absorbing = s2 == (1 << n) - 1;

  // Totals across s2: surviving actives each aged once, new segments each w0.
  int surviving = 0;
  int new_segments = 0;
  for (const Span& run : runs) {
    const auto comp = run_composition(run);
    surviving += comp.n_active;
    new_segments += comp.n_new_segments;
  }
  const double product_value =
      std::pow(w0, new_segments) * std::pow(lambda, static_cast<double>(surviving));

  if (absorbing) {
    for (int col = 0; col <= n; ++col) m(n, col) = product_value;
    return m;
  }

  for (const Span& run : runs) {
    const auto comp = run_composition(run);
    const double value =
        std::pow(w0, comp.n_new_segments) * std::pow(lambda, static_cast<double>(comp.n_active));
    int row = run.lo;
    if (comp.n_active == 1)
      row = comp.active_lo;
    else if (comp.n_active >= 2)
      row = n;
    for (int col = run.lo; col <= run.hi; ++col)
      m(comp.n_active == 0 ? col : row, col) = value;
  }

  for (int col = 0; col < n; ++col) {
    if ((s2 >> col) & 1) continue;
    m(((s >> col) & 1) ? lowest_empty_segment(s, n) : col, col) = 1.0;
  }

  // Product entry: kept across all actives when every one survives, read from
  // the single survivor otherwise, reset when nothing remains.
  if (runs.empty()) {
    m(actives.empty() ? n : lowest_empty_segment(s, n), n) = 1.0;
  } else if (surviving == static_cast<int>(actives.size())) {
    m(n, n) = product_value;
  } else if (surviving == 1) {
    for (const Span& run : runs) {
      const auto comp = run_composition(run);
      if (comp.n_active == 1) m(comp.active_lo, n) = product_value;
    }
  } else if (surviving == 0) {
    m(lowest_empty_segment(s, n), n) = product_value;
  } else {
    throw std::logic_error("build_update_matrix: unsupported survivor pattern");
  }
  return m;
}

}  // namespace

ProbabilisticModel build_probabilistic_model(const ChainParams& params, double p_c) {
  params.validate();
  if (params.n_node < 3 || params.n_node > 5)
    throw std::invalid_argument("build_probabilistic_model: n_node must be 3, 4 or 5");
  if (!(p_c >= 0.0 && p_c <= 1.0))
    throw std::invalid_argument("build_probabilistic_model: p_c must be in [0,1]");

  ProbabilisticModel model;
  model.params = params;
  model.p_c = p_c;
  model.n = params.segments();
  model.n_states = 1 << model.n;
  model.p = Eigen::MatrixXd::Zero(model.n_states, model.n_states);
  model.update.assign(
      static_cast<std::size_t>(model.n_states) * static_cast<std::size_t>(model.n_states),
      Eigen::MatrixXd());

  const int full = model.absorbing_state();
  for (int s = 0; s < model.n_states; ++s) {
    if (s == full) continue;
    detail::enumerate_heg_and_swaps(
        links_from_mask(s, model.n), model.n, params.p_g, params.p_s,
        [&](const std::vector<Span>& links, double prob) {
          if (links.size() == 1 && detail::covers_all(links.front(), model.n)) {
            model.p(s, full) += prob;
            return;
          }
          // Cutoff phase: each surviving link is discarded independently.
          const int k = static_cast<int>(links.size());
          std::vector<Span> kept;
          for (std::uint32_t keep_mask = 0; keep_mask < (1u << k); ++keep_mask) {
            double p_cut = 1.0;
            kept.clear();
            for (int i = 0; i < k; ++i) {
              if ((keep_mask >> i) & 1u) {
                p_cut *= 1.0 - p_c;
                kept.push_back(links[static_cast<std::size_t>(i)]);
              } else {
                p_cut *= p_c;
              }
            }
            if (p_cut == 0.0) continue;
            model.p(s, mask_from_links(kept)) += prob * p_cut;
          }
        });
  }
  model.p(full, full) = 1.0;

  const double lambda = lambda_from_tau(params.tau_coh);
  for (int s = 0; s < model.n_states; ++s) {
    if (s == full) continue;
    for (int s2 = 0; s2 < model.n_states; ++s2) {
      if (model.p(s, s2) <= 0.0) continue;
      model.update[static_cast<std::size_t>(s) * static_cast<std::size_t>(model.n_states) +
                   static_cast<std::size_t>(s2)] =
          build_update_matrix(s, s2, model.n, params.w0, lambda);
    }
  }
  return model;
}

namespace {

// I - Q with the diagonal written as the off-diagonal row mass; summing the
// small positive terms sidesteps the cancellation in 1 - P(s,s) when the
// return probability approaches one.
Eigen::MatrixXd transient_system(const ProbabilisticModel& model) {
  const Eigen::Index nt = model.n_states - 1;
  Eigen::MatrixXd system = -model.p.topLeftCorner(nt, nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    double off_diagonal_mass = 0.0;
    for (Eigen::Index j = 0; j < model.n_states; ++j)
      if (j != i) off_diagonal_mass += model.p(i, j);
    system(i, i) = off_diagonal_mass;
  }
  return system;
}

}  // namespace

double expected_delivery_time_prob(const ProbabilisticModel& model) {
  const Eigen::MatrixXd system = transient_system(model);
  PivotedLu lu(system);
  const Eigen::VectorXd v =
      solve_refined(lu, system, Eigen::VectorXd::Ones(model.n_states - 1));
  return v(0);
}

namespace {

// Stacked index (state, component) -> row of the Prop.-style linear system.
inline Eigen::Index stacked(int s, int a, int n) { return static_cast<Eigen::Index>(s) * (n + 1) + a; }

// Right-hand side: component-n columns of H(s, e2e).
Eigen::VectorXd stacked_rhs(const ProbabilisticModel& model) {
  const int n = model.n;
  const int full = model.absorbing_state();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full) * (n + 1));
  for (int s = 0; s < full; ++s) {
    if (!model.has_transition(s, full)) continue;
    const Eigen::MatrixXd hm = model.one_step_matrix(s, full);
    for (int a = 0; a <= n; ++a) h(stacked(s, a, n)) = hm(a, n);
  }
  return h;
}

Eigen::MatrixXd stacked_operator(const ProbabilisticModel& model) {
  const int n = model.n;
  const int full = model.absorbing_state();
  const Eigen::Index dim = static_cast<Eigen::Index>(full) * (n + 1);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < full; ++s) {
    for (int s2 = 0; s2 < full; ++s2) {
      if (!model.has_transition(s, s2)) continue;
      const Eigen::MatrixXd hm = model.one_step_matrix(s, s2);
      for (int a = 0; a <= n; ++a)
        for (int a2 = 0; a2 <= n; ++a2) op(stacked(s, a, n), stacked(s2, a2, n)) = hm(a, a2);
    }
  }
  return op;
}

}  // namespace

double expected_werner_prob(const ProbabilisticModel& model) {
  const int n = model.n;
  const int full = model.absorbing_state();
  Eigen::MatrixXd system = -stacked_operator(model);

  // Diagonal entries 1 - P(s,s) M(s,s)_aa rewritten through row
  // stochasticity as sum_{s' != s} P(s,s') + P(s,s) (1 - M_aa), which stays
  // accurate when the self-transition probability is close to one.
  for (int s = 0; s < full; ++s) {
    double off_diagonal_mass = 0.0;
    for (int s2 = 0; s2 < model.n_states; ++s2)
      if (s2 != s) off_diagonal_mass += model.p(s, s2);
    const bool self_loop = model.has_transition(s, s);
    for (int a = 0; a <= n; ++a) {
      double diagonal = off_diagonal_mass;
      if (self_loop) {
        const double m_aa = model.update_matrix(s, s)(a, a);
        diagonal += model.p(s, s) * (1.0 - m_aa);
      }
      system(stacked(s, a, n), stacked(s, a, n)) = diagonal;
    }
  }

  PivotedLu lu(system);
  const Eigen::VectorXd x = solve_refined(lu, system, stacked_rhs(model));
  double w_bar = 0.0;
  for (int a = 0; a <= n; ++a) w_bar += x(stacked(0, a, n));
  return w_bar;
}

WernerSeriesResult expected_werner_prob_series(const ProbabilisticModel& model, double tol,
                                               int max_iter) {
  const int n = model.n;
  const Eigen::MatrixXd op = stacked_operator(model);
  const Eigen::VectorXd h = stacked_rhs(model);
  WernerSeriesResult result;
  result.stacked = h;
  Eigen::VectorXd term = h;  // H^k-weighted tail contribution
  for (int k = 1; k <= max_iter; ++k) {
    term = op * term;
    result.stacked += term;
    result.iterations = k;
    if (term.maxCoeff() < tol) break;
  }
  for (int a = 0; a <= n; ++a) result.expected_werner += result.stacked(stacked(0, a, n));
  return result;
}

ChainPerformance probabilistic_performance(const ChainParams& params, double p_c) {
  const ProbabilisticModel model = build_probabilistic_model(params, p_c);
  return make_performance(expected_delivery_time_prob(model), expected_werner_prob(model));
}

}  // namespace qrchain
