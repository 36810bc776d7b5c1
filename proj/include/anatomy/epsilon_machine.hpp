#pragma once

// Unifilar edge-labeled Markov machines and their exact stationary analysis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anatomy/errors.hpp"
#include "anatomy/joint_distribution.hpp"

namespace anatomy {

using StateIndex = std::size_t;

struct Edge {
  StateIndex from;
  Symbol symbol;
  double probability;
  StateIndex to;
};

struct Transition {
  double probability;
  StateIndex next_state;
};

struct StationaryDistribution {
  std::vector<double> weights;

  [[nodiscard]] double operator[](StateIndex s) const { return weights[s]; }
  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

namespace detail {

inline constexpr std::size_t kDenseSolveLimit = 64;

/// Stationary vector of a row-stochastic matrix (n x n, row-major).
inline std::vector<double> solve_stationary(const std::vector<double>& matrix, std::size_t n) {
  std::vector<double> pi(n, 0.0);
  if (n <= kDenseSolveLimit) {
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    std::vector<double> a(n * (n + 1), 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * (n + 1) + c]; };
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) at(r, c) = matrix[c * n + r] - (r == c ? 1.0 : 0.0);
    }
    for (std::size_t c = 0; c < n; ++c) at(n - 1, c) = 1.0;
    at(n - 1, n) = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
      }
      if (std::abs(at(pivot, col)) < 1e-14) throw InvalidModelError("stationary distribution is not unique");
      for (std::size_t c = 0; c <= n; ++c) std::swap(at(col, c), at(pivot, c));
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = at(r, col) / at(col, col);
        if (f == 0.0) continue;
        for (std::size_t c = col; c <= n; ++c) at(r, c) -= f * at(col, c);
      }
    }
    for (std::size_t r = 0; r < n; ++r) pi[r] = at(r, n) / at(r, r);
  } else {
    // Lazy power iteration converges for periodic chains too.
    std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    bool converged = false;
    for (int it = 0; it < 1'000'000 && !converged; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * matrix[i * n + j];
      }
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = 0.5 * (pi[i] + next[i]);
        diff = std::max(diff, std::abs(v - pi[i]));
        pi[i] = v;
      }
      converged = diff < 1e-13;
    }
  }
  double sum = 0.0;
  for (double& p : pi) {
    if (p < 0.0 && p > -1e-14) p = 0.0;
    sum += p;
  }
  for (double& p : pi) p /= sum;
  return pi;
}

}  // namespace detail

/// Unifilar, edge-labeled, strongly connected Markov machine.
///
/// Validated on construction; immutable afterwards. The stationary
/// distribution is computed once at construction.
class EpsilonMachine {
 public:
  EpsilonMachine(std::vector<std::string> state_names, std::size_t alphabet_size, std::vector<Edge> edges)
      : names_(std::move(state_names)), alphabet_size_(alphabet_size), edges_(std::move(edges)) {
    const std::size_t n = names_.size();
    if (n == 0) throw InvalidModelError("machine has no states");
    if (alphabet_size_ == 0) throw InvalidModelError("alphabet size must be >= 1");
    table_.assign(n * alphabet_size_, std::nullopt);
    for (const Edge& e : edges_) {
      if (e.from >= n || e.to >= n) throw InvalidModelError("edge references unknown state");
      if (e.symbol >= alphabet_size_) {
        throw InvalidModelError("edge symbol " + std::to_string(e.symbol) + " outside alphabet");
      }
      if (!std::isfinite(e.probability) || e.probability < 0.0 || e.probability > 1.0 + 1e-12) {
        throw InvalidModelError("edge probability outside [0,1]");
      }
      auto& slot = table_[e.from * alphabet_size_ + e.symbol];
      if (slot) {
        throw InvalidModelError("not unifilar: state " + names_[e.from] + " has two edges on symbol " +
                                std::to_string(e.symbol));
      }
      slot = Transition{e.probability, e.to};
    }
    for (StateIndex s = 0; s < n; ++s) {
      double total = 0.0;
      for (Symbol x = 0; x < alphabet_size_; ++x) {
        if (auto t = transition(s, x)) total += t->probability;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidModelError("outgoing probabilities of state " + names_[s] + " sum to " +
                                std::to_string(total));
      }
    }
    check_strongly_connected();
    stationary_.weights = detail::solve_stationary(state_matrix(), n);
    verify_stationary();
  }

  [[nodiscard]] std::size_t state_count() const noexcept { return names_.size(); }
  [[nodiscard]] std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  [[nodiscard]] const std::string& state_name(StateIndex s) const { return names_.at(s); }
  [[nodiscard]] const std::vector<std::string>& state_names() const noexcept { return names_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const StationaryDistribution& stationary() const noexcept { return stationary_; }

  [[nodiscard]] std::optional<Transition> transition(StateIndex s, Symbol x) const {
    return table_[s * alphabet_size_ + x];
  }

  /// Probability of emitting x from s (zero when there is no edge).
  [[nodiscard]] double emission(StateIndex s, Symbol x) const {
    const auto& t = table_[s * alphabet_size_ + x];
    return t ? t->probability : 0.0;
  }

  /// Row-stochastic state-to-state matrix, summed over symbols (row-major).
  [[nodiscard]] std::vector<double> state_matrix() const {
    const std::size_t n = state_count();
    std::vector<double> m(n * n, 0.0);
    for (const Edge& e : edges_) m[e.from * n + e.to] += e.probability;
    return m;
  }

 private:
  void check_strongly_connected() const {
    const std::size_t n = state_count();
    auto reach = [&](bool reverse) {
      std::vector<char> seen(n, 0);
      std::vector<StateIndex> stack{0};
      seen[0] = 1;
      while (!stack.empty()) {
        const StateIndex s = stack.back();
        stack.pop_back();
        for (const Edge& e : edges_) {
          if (e.probability <= 0.0) continue;
          const StateIndex a = reverse ? e.to : e.from;
          const StateIndex b = reverse ? e.from : e.to;
          if (a == s && !seen[b]) {
            seen[b] = 1;
            stack.push_back(b);
          }
        }
      }
      return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    if (!reach(false) || !reach(true)) {
      throw InvalidModelError("state graph is not strongly connected (no unique stationary measure)");
    }
  }

  void verify_stationary() const {
    const std::size_t n = state_count();
    const auto m = state_matrix();
    for (StateIndex j = 0; j < n; ++j) {
      double v = 0.0;
      for (StateIndex i = 0; i < n; ++i) v += stationary_.weights[i] * m[i * n + j];
      if (std::abs(v - stationary_.weights[j]) > 1e-10) {
        throw ConsistencyError("stationary distribution failed fixed-point check");
      }
    }
  }

  std::vector<std::string> names_;
  std::size_t alphabet_size_;
  std::vector<Edge> edges_;
  std::vector<std::optional<Transition>> table_;
  StationaryDistribution stationary_;
};

inline const StationaryDistribution& stationary_distribution(const EpsilonMachine& m) { return m.stationary(); }

/// Exact entropy rate: sum_s pi(s) H[outgoing edges of s].
inline double entropy_rate_exact(const EpsilonMachine& m) {
  double h = 0.0;
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    double hs = 0.0;
    for (Symbol x = 0; x < m.alphabet_size(); ++x) {
      const double p = m.emission(s, x);
      if (p > 0.0) hs -= p * std::log2(p);
    }
    h += m.stationary()[s] * hs;
  }
  return h;
}

/// Single-symbol distribution Pr(X_0 = x).
inline std::vector<double> symbol_distribution(const EpsilonMachine& m) {
  std::vector<double> p(m.alphabet_size(), 0.0);
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    for (Symbol x = 0; x < m.alphabet_size(); ++x) p[x] += m.stationary()[s] * m.emission(s, x);
  }
  return p;
}

/// H[X_0] in closed form.
inline double single_symbol_entropy(const EpsilonMachine& m) {
  double h = 0.0;
  for (double p : symbol_distribution(m)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

/// Maximum number of (word, state) pairs held during word enumeration.
inline constexpr std::size_t kWordBudget = std::size_t{1} << 24;

/// Stationary length-l word distribution,
/// Pr(x_{0:l}) = sum_s pi(s) prod of edge probabilities along the unifilar path.
/// Enumeration is breadth-first over (prefix, state) pairs, pruning
/// zero-probability branches.
inline JointDistribution word_distribution(const EpsilonMachine& m, std::size_t length,
                                           std::size_t budget = kWordBudget) {
  if (length == 0) throw std::invalid_argument("word_distribution: length must be >= 1");
  const std::size_t k = m.alphabet_size();
  {
    // The packed code must fit: k^length <= 2^62.
    long double space = 1.0L;
    for (std::size_t i = 0; i < length; ++i) space *= static_cast<long double>(k);
    if (space > static_cast<long double>(std::uint64_t{1} << 62)) {
      throw ResourceLimitError("word_distribution: k^l exceeds the outcome code space");
    }
  }
  struct Node {
    std::uint64_t code;
    StateIndex state;
    double p;
  };
  std::vector<Node> frontier;
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    if (m.stationary()[s] > 0.0) frontier.push_back({0, s, m.stationary()[s]});
  }
  std::vector<Node> next;
  std::uint64_t stride = 1;
  for (std::size_t t = 0; t < length; ++t) {
    next.clear();
    for (const Node& node : frontier) {
      for (Symbol x = 0; x < k; ++x) {
        const auto tr = m.transition(node.state, x);
        if (!tr || tr->probability <= 0.0) continue;
        next.push_back({node.code + x * stride, tr->next_state, node.p * tr->probability});
      }
    }
    // Different start states can reach the same (prefix, state): merge them.
    std::sort(next.begin(), next.end(),
              [](const Node& a, const Node& b) { return a.code != b.code ? a.code < b.code : a.state < b.state; });
    frontier.clear();
    for (const Node& node : next) {
      if (!frontier.empty() && frontier.back().code == node.code && frontier.back().state == node.state) {
        frontier.back().p += node.p;
      } else {
        frontier.push_back(node);
      }
    }
    if (frontier.size() > budget) {
      throw ResourceLimitError("word_distribution: more than " + std::to_string(budget) +
                               " (word, state) pairs at length " + std::to_string(t + 1));
    }
    stride *= k;
  }
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(frontier.size());
  for (const Node& node : frontier) {
    if (!entries.empty() && entries.back().code == node.code) {
      entries.back().probability += node.p;
    } else {
      entries.push_back({node.code, node.p});
    }
  }
  return JointDistribution::from_codes(std::vector<std::size_t>(length, k), std::move(entries));
}

struct CompressionRedundancies {
  double single_symbol;  ///< R_1 = log2 k - H[X]
  double asymptotic;     ///< R_inf = log2 k - h_mu
};

inline CompressionRedundancies compression_redundancies(const EpsilonMachine& m) {
  const double log_k = std::log2(static_cast<double>(m.alphabet_size()));
  return {log_k - single_symbol_entropy(m), log_k - entropy_rate_exact(m)};
}

}  // namespace anatomy
