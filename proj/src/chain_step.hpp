#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

// Internal machinery shared by the two Markov-model builders: exhaustive
// enumeration of one repeater-chain time step (HEG phase, then simultaneous
// swap-asap Bell measurements). The cutoff phase differs per policy and is
// applied by the callers.

namespace qrchain::detail {

// An entangled link covering segments [lo, hi] inclusive. age counts storage
// steps; ages add under swaps.
struct Span {
  int lo = 0;
  int hi = 0;
  long long age = 0;
};

inline bool covers_all(const Span& s, int n_segments) {
  return s.lo == 0 && s.hi == n_segments - 1;
}

// Resolves one simultaneous swap phase. coins[i] is the Bell-measurement
// outcome at the node joining links[i] and links[i+1] (meaningful only where
// those are adjacent). A failed measurement destroys both incident links;
// surviving links joined by successful measurements merge, ages adding.
inline std::vector<Span> resolve_swaps(const std::vector<Span>& links,
                                       const std::vector<bool>& adjacent,
                                       const std::vector<bool>& coins) {
  const int m = static_cast<int>(links.size());
  std::vector<Span> out;
  out.reserve(links.size());
  std::optional<Span> current;
  int last_index = -2;
  for (int i = 0; i < m; ++i) {
    const bool dead_left = i > 0 && adjacent[i - 1] && !coins[i - 1];
    const bool dead_right = i + 1 < m && adjacent[i] && !coins[i];
    if (dead_left || dead_right) {
      if (current) {
        out.push_back(*current);
        current.reset();
      }
      last_index = -2;
      continue;
    }
    const bool chained = current && last_index == i - 1 && adjacent[i - 1] && coins[i - 1];
    if (chained) {
      current->hi = links[i].hi;
      current->age += links[i].age;
    } else {
      if (current) out.push_back(*current);
      current = links[i];
    }
    last_index = i;
  }
  if (current) out.push_back(*current);
  return out;
}

// Enumerates every positive-probability outcome of the HEG and swap phases of
// a single time step, starting from the given link configuration. Links
// already present age by one during the HEG phase; fresh links enter with age
// zero on segments not covered by any link. emit(links_after_swaps, prob) is
// called once per outcome.
template <class Emit>
void enumerate_heg_and_swaps(const std::vector<Span>& links, int n_segments, double p_g,
                             double p_s, Emit&& emit) {
  std::vector<bool> covered(static_cast<std::size_t>(n_segments), false);
  for (const Span& l : links)
    for (int seg = l.lo; seg <= l.hi; ++seg) covered[static_cast<std::size_t>(seg)] = true;
  std::vector<int> empty_segments;
  for (int seg = 0; seg < n_segments; ++seg)
    if (!covered[static_cast<std::size_t>(seg)]) empty_segments.push_back(seg);

  const int n_empty = static_cast<int>(empty_segments.size());
  std::vector<Span> after_heg;
  for (std::uint32_t heg_mask = 0; heg_mask < (1u << n_empty); ++heg_mask) {
    double p_heg = 1.0;
    for (int e = 0; e < n_empty; ++e) p_heg *= (heg_mask >> e) & 1u ? p_g : 1.0 - p_g;
    if (p_heg == 0.0) continue;

    after_heg.clear();
    {
      std::size_t li = 0;
      int e = 0;
      while (li < links.size() || e < n_empty) {
        const bool have_new = e < n_empty && ((heg_mask >> e) & 1u);
        if (e < n_empty && !have_new) {
          ++e;
          continue;
        }
        if (li < links.size() && (e >= n_empty || links[li].lo < empty_segments[e])) {
          Span aged = links[li++];
          aged.age += 1;
          after_heg.push_back(aged);
        } else if (e < n_empty) {
          after_heg.push_back(Span{empty_segments[e], empty_segments[e], 0});
          ++e;
        }
      }
    }

    const int m = static_cast<int>(after_heg.size());
    std::vector<bool> adjacent(m > 0 ? m - 1 : 0, false);
    std::vector<int> swap_slots;
    for (int i = 0; i + 1 < m; ++i) {
      adjacent[i] = after_heg[i].hi + 1 == after_heg[i + 1].lo;
      if (adjacent[i]) swap_slots.push_back(i);
    }

    const int n_swaps = static_cast<int>(swap_slots.size());
    std::vector<bool> coins(m > 0 ? m - 1 : 0, false);
    for (std::uint32_t swap_mask = 0; swap_mask < (1u << n_swaps); ++swap_mask) {
      double p_swap = 1.0;
      for (int k = 0; k < n_swaps; ++k) {
        const bool ok = (swap_mask >> k) & 1u;
        coins[swap_slots[k]] = ok;
        p_swap *= ok ? p_s : 1.0 - p_s;
      }
      if (p_swap == 0.0) continue;
      emit(resolve_swaps(after_heg, adjacent, coins), p_heg * p_swap);
    }
  }
}

}  // namespace qrchain::detail
