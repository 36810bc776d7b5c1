#pragma once

// Seeded Monte Carlo sampling from an epsilon-machine and sliding-window
// word estimates.
//
// Generator: std::mt19937_64 (algorithm fixed by the C++ standard). A uniform
// double in [0,1) is formed from the top 53 bits of each draw, so runs are
// reproducible bit-for-bit across platforms.

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "anatomy/epsilon_machine.hpp"

namespace anatomy {

namespace detail {

inline double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

/// Inverse-CDF draw; falls back to the last positive index on round-off.
template <class Weights>
std::size_t draw_index(std::mt19937_64& gen, std::size_t count, Weights&& weight) {
  const double u = uniform01(gen);
  double cumulative = 0.0;
  std::size_t last = count;
  for (std::size_t i = 0; i < count; ++i) {
    const double w = weight(i);
    if (w <= 0.0) continue;
    last = i;
    cumulative += w;
    if (u < cumulative) return i;
  }
  return last;
}

}  // namespace detail

/// Draws a sequence starting from a pi-distributed state.
inline std::vector<Symbol> sample_sequence(const EpsilonMachine& m, std::size_t length, std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("sample_sequence: length must be >= 1");
  std::mt19937_64 gen(seed);
  StateIndex state =
      detail::draw_index(gen, m.state_count(), [&](std::size_t s) { return m.stationary()[s]; });
  std::vector<Symbol> out;
  out.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    const auto x = static_cast<Symbol>(
        detail::draw_index(gen, m.alphabet_size(), [&](std::size_t i) { return m.emission(state, static_cast<Symbol>(i)); }));
    out.push_back(x);
    state = m.transition(state, x)->next_state;
  }
  return out;
}

/// Normalized sliding-window counts of length-l words.
inline JointDistribution empirical_word_distribution(const std::vector<Symbol>& seq, std::size_t length,
                                                     std::size_t alphabet_size) {
  if (length == 0) throw std::invalid_argument("empirical_word_distribution: length must be >= 1");
  if (seq.size() < length) throw std::invalid_argument("empirical_word_distribution: sequence shorter than word length");
  for (Symbol x : seq) {
    if (x >= alphabet_size) throw std::invalid_argument("empirical_word_distribution: symbol outside alphabet");
  }
  const std::size_t windows = seq.size() - length + 1;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (std::size_t start = 0; start < windows; ++start) {
    std::uint64_t code = 0;
    std::uint64_t stride = 1;
    for (std::size_t i = 0; i < length; ++i) {
      code += seq[start + i] * stride;
      stride *= alphabet_size;
    }
    ++counts[code];
  }
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [code, c] : counts) {
    entries.push_back({code, static_cast<double>(c) / static_cast<double>(windows)});
  }
  return JointDistribution::from_codes(std::vector<std::size_t>(length, alphabet_size), std::move(entries));
}

}  // namespace anatomy
