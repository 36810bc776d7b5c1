#pragma once

// Brute-force reference implementations for the tests. Everything here works
// on dense probability tables and shares no code with the library beyond
// the final conversion to JointDistribution.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "anatomy/epsilon_machine.hpp"
#include "anatomy/joint_distribution.hpp"

namespace oracle {

struct Dense {
  std::vector<std::size_t> sizes;
  std::vector<double> p;  // little-endian mixed radix

  [[nodiscard]] std::size_t n() const { return sizes.size(); }

  [[nodiscard]] std::vector<std::size_t> digits(std::size_t cell) const {
    std::vector<std::size_t> d(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      d[i] = cell % sizes[i];
      cell /= sizes[i];
    }
    return d;
  }
};

inline anatomy::JointDistribution to_joint(const Dense& d) {
  std::vector<std::pair<anatomy::Outcome, double>> table;
  for (std::size_t c = 0; c < d.p.size(); ++c) {
    if (d.p[c] <= 0.0) continue;
    const auto dg = d.digits(c);
    table.push_back({anatomy::Outcome(dg.begin(), dg.end()), d.p[c]});
  }
  return anatomy::JointDistribution(d.sizes, table);
}

/// Random table; each cell is zeroed with probability `sparsity`.
inline Dense random_dense(std::mt19937_64& rng, std::vector<std::size_t> sizes, double sparsity = 0.3) {
  Dense d{std::move(sizes), {}};
  std::size_t cells = 1;
  for (auto s : d.sizes) cells *= s;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  d.p.resize(cells);
  double total = 0.0;
  for (auto& v : d.p) {
    v = u(rng) < sparsity ? 0.0 : -std::log(1.0 - u(rng));
    total += v;
  }
  if (total == 0.0) {
    d.p[0] = 1.0;
    total = 1.0;
  }
  for (auto& v : d.p) v /= total;
  return d;
}

/// H[X_A] for the variables in `mask`, by summing cells directly.
inline double subset_entropy(const Dense& d, std::uint64_t mask) {
  if (mask == 0) return 0.0;
  std::vector<double> marginal;
  std::vector<std::size_t> key_stride(d.n(), 0);
  std::size_t space = 1;
  for (std::size_t i = 0; i < d.n(); ++i) {
    if ((mask >> i) & 1U) {
      key_stride[i] = space;
      space *= d.sizes[i];
    }
  }
  marginal.assign(space, 0.0);
  for (std::size_t c = 0; c < d.p.size(); ++c) {
    const auto dg = d.digits(c);
    std::size_t key = 0;
    for (std::size_t i = 0; i < d.n(); ++i) key += dg[i] * key_stride[i];
    marginal[key] += d.p[c];
  }
  double h = 0.0;
  for (double q : marginal) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

inline std::uint64_t full_mask(const Dense& d) { return (std::uint64_t{1} << d.n()) - 1; }

inline double joint_entropy(const Dense& d) { return subset_entropy(d, full_mask(d)); }

inline double co_information(const Dense& d) {
  double s = 0.0;
  for (std::uint64_t a = 1; a <= full_mask(d); ++a) {
    const int sign = (std::popcount(a) % 2 == 1) ? 1 : -1;
    s += sign * subset_entropy(d, a);
  }
  return s;
}

inline double total_correlation(const Dense& d) {
  double s = -joint_entropy(d);
  for (std::size_t i = 0; i < d.n(); ++i) s += subset_entropy(d, std::uint64_t{1} << i);
  return s;
}

/// sum_i H[X_i | X_rest]
inline double residual(const Dense& d) {
  const double h = joint_entropy(d);
  double r = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) r += h - subset_entropy(d, full_mask(d) & ~(std::uint64_t{1} << i));
  return r;
}

inline double binding(const Dense& d) { return joint_entropy(d) - residual(d); }

/// sum_i I[X_i ; X_rest]
inline double local_exogenous(const Dense& d) {
  const double h = joint_entropy(d);
  double w = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const std::uint64_t rest = full_mask(d) & ~(std::uint64_t{1} << i);
    w += subset_entropy(d, std::uint64_t{1} << i) + subset_entropy(d, rest) - h;
  }
  return w;
}

inline double enigmatic(const Dense& d) { return total_correlation(d) - binding(d); }

/// X, Y fair independent bits, Z = X xor Y.
inline Dense xor_triple() {
  Dense d{{2, 2, 2}, std::vector<double>(8, 0.0)};
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) d.p[x + 2 * y + 4 * (x ^ y)] = 0.25;
  }
  return d;
}

/// n copies of one fair bit.
inline Dense copies(std::size_t n) {
  Dense d{std::vector<std::size_t>(n, 2), std::vector<double>(std::size_t{1} << n, 0.0)};
  d.p.front() = 0.5;
  d.p.back() = 0.5;
  return d;
}

/// n independent fair bits.
inline Dense independent_bits(std::size_t n) {
  const std::size_t cells = std::size_t{1} << n;
  return Dense{std::vector<std::size_t>(n, 2), std::vector<double>(cells, 1.0 / static_cast<double>(cells))};
}

/// Stationary distribution by plain power iteration on the edge list.
inline std::vector<double> stationary(const anatomy::EpsilonMachine& m) {
  const std::size_t n = m.state_count();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 200000; ++it) {
    std::vector<double> next(n, 0.0);
    for (const auto& e : m.edges()) next[e.to] += pi[e.from] * e.probability;
    // Lazy chain (I + P) / 2.
    double diff = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      next[s] = 0.5 * (next[s] + pi[s]);
      diff = std::max(diff, std::abs(next[s] - pi[s]));
    }
    pi = next;
    if (diff < 1e-16) break;
  }
  return pi;
}

/// Word distribution by enumerating every one of the k^l words.
inline Dense words(const anatomy::EpsilonMachine& m, std::size_t length) {
  const std::size_t k = m.alphabet_size();
  const auto pi = stationary(m);
  Dense d{std::vector<std::size_t>(length, k), {}};
  std::size_t cells = 1;
  for (std::size_t i = 0; i < length; ++i) cells *= k;
  d.p.assign(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto w = d.digits(c);
    for (std::size_t s0 = 0; s0 < m.state_count(); ++s0) {
      double p = pi[s0];
      std::size_t s = s0;
      for (std::size_t t = 0; t < length && p > 0.0; ++t) {
        double q = 0.0;
        std::size_t to = s;
        for (const auto& e : m.edges()) {
          if (e.from == s && e.symbol == w[t]) {
            q = e.probability;
            to = e.to;
          }
        }
        p *= q;
        s = to;
      }
      d.p[c] += p;
    }
  }
  return d;
}

}  // namespace oracle
