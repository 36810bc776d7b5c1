#pragma once

// Finite joint distributions over N discrete variables.
//
// Outcomes are stored sparsely: only positive-probability tuples are kept,
// each packed into a little-endian mixed-radix code (variable 0 is the least
// significant digit). The table is sorted by code and immutable after
// construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anatomy/errors.hpp"

namespace anatomy {

using Symbol = std::uint32_t;
using Outcome = std::vector<Symbol>;

inline constexpr double kMassTolerance = 1e-12;

/// Ordered set of distinct variable indices. Order is preserved because
/// marginals list their variables in the order requested.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> indices) : IndexSet(std::vector<std::size_t>(indices)) {}
  explicit IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::vector<std::size_t> sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("IndexSet: duplicate index");
    }
  }

  /// Indices first, first+1, ..., last-1.
  static IndexSet range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> v;
    for (std::size_t i = first; i < last; ++i) v.push_back(i);
    return IndexSet(std::move(v));
  }
  static IndexSet all(std::size_t n) { return range(0, n); }

  /// Members of a bitmask over Omega_N, ascending.
  static IndexSet from_mask(std::uint64_t mask) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
      if (mask & 1U) v.push_back(i);
    }
    return IndexSet(std::move(v));
  }

  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] std::size_t operator[](std::size_t i) const { return indices_[i]; }
  [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
  [[nodiscard]] auto end() const noexcept { return indices_.end(); }
  [[nodiscard]] std::span<const std::size_t> indices() const noexcept { return indices_; }

  [[nodiscard]] bool contains(std::size_t i) const {
    return std::find(indices_.begin(), indices_.end(), i) != indices_.end();
  }

  [[nodiscard]] bool disjoint(const IndexSet& other) const {
    return std::none_of(indices_.begin(), indices_.end(), [&](std::size_t i) { return other.contains(i); });
  }

  /// Omega_N minus this set, ascending.
  [[nodiscard]] IndexSet complement(std::size_t n) const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i) {
      if (!contains(i)) v.push_back(i);
    }
    return IndexSet(std::move(v));
  }

  /// This set followed by the members of `other` not already present.
  [[nodiscard]] IndexSet united(const IndexSet& other) const {
    std::vector<std::size_t> v = indices_;
    for (std::size_t i : other) {
      if (!contains(i)) v.push_back(i);
    }
    return IndexSet(std::move(v));
  }

  [[nodiscard]] std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (std::size_t i : indices_) m |= std::uint64_t{1} << i;
    return m;
  }

  void check_range(std::size_t n) const {
    for (std::size_t i : indices_) {
      if (i >= n) {
        throw std::invalid_argument("IndexSet: index " + std::to_string(i) + " out of range for " +
                                    std::to_string(n) + " variables");
      }
    }
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

class JointDistribution {
 public:
  struct Entry {
    std::uint64_t code;
    double probability;
  };

  /// Builds from explicit outcome tuples. Duplicate tuples are summed and
  /// zero-probability tuples dropped.
  JointDistribution(std::vector<std::size_t> alphabet_sizes,
                    const std::vector<std::pair<Outcome, double>>& table) {
    init_layout(std::move(alphabet_sizes));
    std::vector<Entry> entries;
    entries.reserve(table.size());
    for (const auto& [outcome, p] : table) entries.push_back({encode(outcome), p});
    init_entries(std::move(entries));
  }

  /// Builds from already-encoded outcomes (same validation as above).
  static JointDistribution from_codes(std::vector<std::size_t> alphabet_sizes, std::vector<Entry> entries) {
    JointDistribution d;
    d.init_layout(std::move(alphabet_sizes));
    for (const Entry& e : entries) {
      if (e.code >= d.space_size_) throw std::invalid_argument("JointDistribution: outcome code out of range");
    }
    d.init_entries(std::move(entries));
    return d;
  }

  [[nodiscard]] std::size_t variable_count() const noexcept { return alphabet_sizes_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& alphabet_sizes() const noexcept { return alphabet_sizes_; }
  [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t support_size() const noexcept { return entries_.size(); }
  /// Number of representable outcome tuples, prod_i k_i.
  [[nodiscard]] std::uint64_t outcome_space_size() const noexcept { return space_size_; }

  [[nodiscard]] std::uint64_t encode(const Outcome& outcome) const {
    if (outcome.size() != variable_count()) {
      throw std::invalid_argument("JointDistribution: outcome has " + std::to_string(outcome.size()) +
                                  " symbols, expected " + std::to_string(variable_count()));
    }
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
      if (outcome[i] >= alphabet_sizes_[i]) {
        throw std::invalid_argument("JointDistribution: symbol " + std::to_string(outcome[i]) +
                                    " outside alphabet of variable " + std::to_string(i));
      }
      code += outcome[i] * strides_[i];
    }
    return code;
  }

  [[nodiscard]] Outcome decode(std::uint64_t code) const {
    Outcome out(variable_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = symbol(code, i);
    return out;
  }

  [[nodiscard]] Symbol symbol(std::uint64_t code, std::size_t variable) const {
    return static_cast<Symbol>((code / strides_[variable]) % alphabet_sizes_[variable]);
  }

  [[nodiscard]] double probability(const Outcome& outcome) const {
    const std::uint64_t code = encode(outcome);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), code,
                               [](const Entry& e, std::uint64_t c) { return e.code < c; });
    return (it != entries_.end() && it->code == code) ? it->probability : 0.0;
  }

  [[nodiscard]] double total_mass() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.probability;
    return s;
  }

  /// Calls f(outcome, probability) for every positive-probability outcome.
  template <class F>
  void for_each(F&& f) const {
    for (const Entry& e : entries_) f(decode(e.code), e.probability);
  }

 private:
  JointDistribution() = default;

  void init_layout(std::vector<std::size_t> alphabet_sizes) {
    if (alphabet_sizes.empty()) throw std::invalid_argument("JointDistribution: need at least one variable");
    alphabet_sizes_ = std::move(alphabet_sizes);
    strides_.resize(alphabet_sizes_.size());
    std::uint64_t stride = 1;
    constexpr std::uint64_t kMaxSpace = std::uint64_t{1} << 62;
    for (std::size_t i = 0; i < alphabet_sizes_.size(); ++i) {
      if (alphabet_sizes_[i] == 0) throw std::invalid_argument("JointDistribution: alphabet size must be >= 1");
      strides_[i] = stride;
      if (stride > kMaxSpace / alphabet_sizes_[i]) {
        throw ResourceLimitError("JointDistribution: outcome space exceeds 2^62 tuples");
      }
      stride *= alphabet_sizes_[i];
    }
    space_size_ = stride;
  }

  void init_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.code < b.code; });
    entries_.clear();
    entries_.reserve(entries.size());
    double mass = 0.0;
    for (const Entry& e : entries) {
      if (!std::isfinite(e.probability) || e.probability < 0.0) {
        throw std::invalid_argument("JointDistribution: probabilities must be finite and nonnegative");
      }
      mass += e.probability;
      if (e.probability == 0.0) continue;
      if (!entries_.empty() && entries_.back().code == e.code) {
        entries_.back().probability += e.probability;
      } else {
        entries_.push_back(e);
      }
    }
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw std::invalid_argument("JointDistribution: total mass " + std::to_string(mass) + " is not 1");
    }
  }

  std::vector<std::size_t> alphabet_sizes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t space_size_ = 1;
  std::vector<Entry> entries_;
};

namespace detail {

/// Re-packs codes of `dist` onto the variables `keep` and sums equal keys.
/// Dense accumulation is used when the target space is small.
inline std::vector<JointDistribution::Entry> project_codes(const JointDistribution& dist, const IndexSet& keep,
                                                           std::vector<std::size_t>& sizes_out) {
  sizes_out.clear();
  std::vector<std::uint64_t> new_strides;
  std::uint64_t space = 1;
  for (std::size_t i : keep) {
    new_strides.push_back(space);
    sizes_out.push_back(dist.alphabet_sizes()[i]);
    space *= dist.alphabet_sizes()[i];
  }
  auto recode = [&](std::uint64_t code) {
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) c += dist.symbol(code, keep[j]) * new_strides[j];
    return c;
  };
  std::vector<JointDistribution::Entry> out;
  constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;
  if (space <= kDenseLimit && space <= 4 * dist.support_size() + 64) {
    std::vector<double> dense(space, 0.0);
    for (const auto& e : dist.entries()) dense[recode(e.code)] += e.probability;
    for (std::uint64_t c = 0; c < space; ++c) {
      if (dense[c] > 0.0) out.push_back({c, dense[c]});
    }
  } else {
    std::unordered_map<std::uint64_t, double> acc;
    acc.reserve(dist.support_size());
    for (const auto& e : dist.entries()) acc[recode(e.code)] += e.probability;
    out.reserve(acc.size());
    for (const auto& [c, p] : acc) out.push_back({c, p});
  }
  return out;
}

}  // namespace detail

/// Marginal on `keep`, with variables in the order listed.
inline JointDistribution marginalize(const JointDistribution& dist, const IndexSet& keep) {
  if (keep.empty()) throw std::invalid_argument("marginalize: empty keep set");
  keep.check_range(dist.variable_count());
  std::vector<std::size_t> sizes;
  auto entries = detail::project_codes(dist, keep, sizes);
  return JointDistribution::from_codes(std::move(sizes), std::move(entries));
}

/// Conditional distribution of the remaining variables (ascending order)
/// given that the variables in `given` took the values in `outcome`.
inline JointDistribution slice_condition(const JointDistribution& dist, const IndexSet& given,
                                         const Outcome& outcome) {
  given.check_range(dist.variable_count());
  if (outcome.size() != given.size()) throw std::invalid_argument("slice_condition: outcome/given size mismatch");
  const IndexSet rest = given.complement(dist.variable_count());
  if (rest.empty()) throw std::invalid_argument("slice_condition: nothing left to condition");
  for (std::size_t j = 0; j < given.size(); ++j) {
    if (outcome[j] >= dist.alphabet_sizes()[given[j]]) throw std::invalid_argument("slice_condition: bad symbol");
  }

  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> strides;
  std::uint64_t space = 1;
  for (std::size_t i : rest) {
    strides.push_back(space);
    sizes.push_back(dist.alphabet_sizes()[i]);
    space *= dist.alphabet_sizes()[i];
  }
  std::vector<JointDistribution::Entry> matched;
  double mass = 0.0;
  for (const auto& e : dist.entries()) {
    bool match = true;
    for (std::size_t j = 0; j < given.size() && match; ++j) match = dist.symbol(e.code, given[j]) == outcome[j];
    if (!match) continue;
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) c += dist.symbol(e.code, rest[j]) * strides[j];
    matched.push_back({c, e.probability});
    mass += e.probability;
  }
  if (mass <= 0.0) throw std::invalid_argument("slice_condition: conditioning outcome has zero probability");
  for (auto& e : matched) e.probability /= mass;
  return JointDistribution::from_codes(std::move(sizes), std::move(matched));
}

/// Joint distribution of two independent blocks: the variables of `a`
/// followed by those of `b`.
inline JointDistribution product(const JointDistribution& a, const JointDistribution& b) {
  std::vector<std::size_t> sizes = a.alphabet_sizes();
  sizes.insert(sizes.end(), b.alphabet_sizes().begin(), b.alphabet_sizes().end());
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(a.support_size() * b.support_size());
  const std::uint64_t shift = a.outcome_space_size();
  for (const auto& ea : a.entries()) {
    for (const auto& eb : b.entries()) entries.push_back({ea.code + shift * eb.code, ea.probability * eb.probability});
  }
  return JointDistribution::from_codes(std::move(sizes), std::move(entries));
}

}  // namespace anatomy
