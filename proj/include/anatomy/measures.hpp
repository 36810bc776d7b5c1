#pragma once

// Shannon and multivariate information measures over a JointDistribution.
// All logarithms are base 2; results are in bits.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "anatomy/errors.hpp"
#include "anatomy/joint_distribution.hpp"

namespace anatomy {

namespace detail {

inline double plogp_sum(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double entropy_of_entries(std::span<const JointDistribution::Entry> entries) {
  double h = 0.0;
  for (const auto& e : entries) h -= e.probability * std::log2(e.probability);
  return h;
}

/// H[X_vars]; zero for the empty set.
inline double marginal_entropy(const JointDistribution& dist, const IndexSet& vars) {
  if (vars.empty()) return 0.0;
  vars.check_range(dist.variable_count());
  if (vars.size() == dist.variable_count()) return entropy_of_entries(dist.entries());
  std::vector<std::size_t> sizes;
  const auto projected = project_codes(dist, vars, sizes);
  return entropy_of_entries(projected);
}

inline void require_disjoint(const IndexSet& a, const IndexSet& b, const char* what) {
  if (!a.disjoint(b)) throw std::invalid_argument(std::string(what) + ": index sets overlap");
}

}  // namespace detail

/// Joint entropy of all variables.
inline double entropy(const JointDistribution& dist) { return detail::entropy_of_entries(dist.entries()); }

/// H[X_vars] = -sum p log2 p over the marginal on `vars`.
inline double entropy(const JointDistribution& dist, const IndexSet& vars) {
  if (vars.empty()) throw std::invalid_argument("entropy: empty variable set");
  return detail::marginal_entropy(dist, vars);
}

/// H[target | given]. An empty `given` yields the plain entropy.
inline double conditional_entropy(const JointDistribution& dist, const IndexSet& target, const IndexSet& given) {
  detail::require_disjoint(target, given, "conditional_entropy");
  const double h = detail::marginal_entropy(dist, target.united(given)) - detail::marginal_entropy(dist, given);
  return detail::clamp_nonnegative(h, "conditional entropy");
}

inline double mutual_information(const JointDistribution& dist, const IndexSet& a, const IndexSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mutual_information: empty index set");
  detail::require_disjoint(a, b, "mutual_information");
  const double i = detail::marginal_entropy(dist, a) + detail::marginal_entropy(dist, b) -
                   detail::marginal_entropy(dist, a.united(b));
  return detail::clamp_nonnegative(i, "mutual information");
}

inline double conditional_mutual_information(const JointDistribution& dist, const IndexSet& a, const IndexSet& b,
                                             const IndexSet& given) {
  if (a.empty() || b.empty()) throw std::invalid_argument("conditional_mutual_information: empty index set");
  detail::require_disjoint(a, b, "conditional_mutual_information");
  detail::require_disjoint(a, given, "conditional_mutual_information");
  detail::require_disjoint(b, given, "conditional_mutual_information");
  const double i = detail::marginal_entropy(dist, a.united(given)) + detail::marginal_entropy(dist, b.united(given)) -
                   detail::marginal_entropy(dist, a.united(b).united(given)) -
                   detail::marginal_entropy(dist, given);
  return detail::clamp_nonnegative(i, "conditional mutual information");
}

/// Default ceiling on 2^N * support for subset-entropy enumeration.
inline constexpr std::uint64_t kSubsetEntropyBudget = std::uint64_t{1} << 32;

/// H[X_A] for every A in P(N), indexed by bitmask (bit i <-> variable i).
/// Entry 0 is H[empty] = 0. Costs 2^N passes over the support.
inline std::vector<double> subset_entropies(const JointDistribution& dist,
                                            std::uint64_t budget = kSubsetEntropyBudget) {
  const std::size_t n = dist.variable_count();
  if (n > 40 || ((std::uint64_t{1} << n) > budget / std::max<std::uint64_t>(1, dist.support_size()))) {
    throw ResourceLimitError("subset_entropies: 2^" + std::to_string(n) + " subsets over " +
                             std::to_string(dist.support_size()) + " outcomes exceeds budget");
  }
  const auto entries = dist.entries();
  const std::size_t m = entries.size();
  // Symbols cached once: row e holds the n digits of entry e.
  std::vector<std::uint32_t> digits(m * n);
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < n; ++i) digits[e * n + i] = dist.symbol(entries[e].code, i);
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> out(count, 0.0);
  std::vector<double> dense;
  std::vector<std::uint64_t> recoded(m);
  constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    std::uint64_t space = 1;
    for (std::size_t e = 0; e < m; ++e) recoded[e] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((mask >> i) & 1U)) continue;
      for (std::size_t e = 0; e < m; ++e) recoded[e] += digits[e * n + i] * space;
      space *= dist.alphabet_sizes()[i];
    }
    double h = 0.0;
    if (space <= kDenseLimit) {
      dense.assign(space, 0.0);
      for (std::size_t e = 0; e < m; ++e) dense[recoded[e]] += entries[e].probability;
      h = detail::plogp_sum(dense);
    } else {
      std::unordered_map<std::uint64_t, double> acc;
      for (std::size_t e = 0; e < m; ++e) acc[recoded[e]] += entries[e].probability;
      for (const auto& [c, p] : acc) h -= p * std::log2(p);
    }
    out[mask] = h;
  }
  return out;
}

namespace detail {

inline double co_information_from(const std::vector<double>& h) {
  double sum = 0.0;
  for (std::uint64_t mask = 1; mask < h.size(); ++mask) {
    const int sign = (std::popcount(mask) % 2 == 0) ? 1 : -1;
    sum += sign * h[mask];
  }
  return -sum;
}

/// Sum over i of H[X_i | X_{Omega \ i}].
inline double residual_from(const JointDistribution& dist) {
  const std::size_t n = dist.variable_count();
  const double joint = entropy(dist);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r += joint - marginal_entropy(dist, IndexSet{i}.complement(n));
  return r;
}

inline double singleton_sum(const JointDistribution& dist) {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.variable_count(); ++i) s += marginal_entropy(dist, IndexSet{i});
  return s;
}

}  // namespace detail

/// Multivariate mutual information: -sum_{A nonempty} (-1)^{|A|} H[X_A].
/// Signed; equals I[X;Y] for N = 2 and H[X] for N = 1.
inline double co_information(const JointDistribution& dist) {
  return detail::co_information_from(subset_entropies(dist));
}

/// T = sum_i H[X_i] - H[X_{0:N}].
inline double total_correlation(const JointDistribution& dist) {
  return detail::clamp_nonnegative(detail::singleton_sum(dist) - entropy(dist), "total correlation");
}

/// R = sum_i H[X_i | X_{Omega \ i}].
inline double residual_entropy(const JointDistribution& dist) {
  return detail::clamp_nonnegative(detail::residual_from(dist), "residual entropy");
}

/// B = H[X_{0:N}] - R.
inline double binding_information(const JointDistribution& dist) {
  return detail::clamp_nonnegative(entropy(dist) - detail::residual_from(dist), "binding information");
}

/// W = sum_i I[X_i ; X_{Omega \ i}] = B + T.
inline double local_exogenous_information(const JointDistribution& dist) {
  const std::size_t n = dist.variable_count();
  const double joint = entropy(dist);
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w += detail::marginal_entropy(dist, IndexSet{i}) +
         detail::marginal_entropy(dist, IndexSet{i}.complement(n)) - joint;
  }
  return detail::clamp_nonnegative(w, "local exogenous information");
}

/// Q = T - B; may be negative.
inline double enigmatic_information(const JointDistribution& dist) {
  const double joint = entropy(dist);
  const double r = detail::residual_from(dist);
  return (detail::singleton_sum(dist) - joint) - (joint - r);
}

}  // namespace anatomy
