#pragma once

// Information-diagram atoms for N variables.
//
// An atom is identified by the nonempty subset S of variables it lies inside
// of (and outside of every other variable). Atom values are a signed measure
// mu with H[X_A] = sum over atoms S meeting A of mu(S). Every measure in
// measures.hpp is an integer-weighted sum of atoms; the weight depends only on
// how many variables contain the atom.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anatomy/errors.hpp"
#include "anatomy/measures.hpp"

namespace anatomy {

enum class MeasureId {
  JointEntropy,
  CoInformation,
  TotalCorrelation,
  Binding,
  Residual,
  LocalExogenous,
  Enigmatic,
};

inline constexpr MeasureId kAllMeasures[] = {
    MeasureId::JointEntropy, MeasureId::CoInformation,  MeasureId::TotalCorrelation, MeasureId::Binding,
    MeasureId::Residual,     MeasureId::LocalExogenous, MeasureId::Enigmatic,
};

inline std::string_view measure_name(MeasureId id) {
  switch (id) {
    case MeasureId::JointEntropy: return "joint-entropy";
    case MeasureId::CoInformation: return "co-information";
    case MeasureId::TotalCorrelation: return "total-correlation";
    case MeasureId::Binding: return "binding";
    case MeasureId::Residual: return "residual";
    case MeasureId::LocalExogenous: return "local-exogenous";
    case MeasureId::Enigmatic: return "enigmatic";
  }
  return "?";
}

inline MeasureId parse_measure_id(std::string_view name) {
  for (MeasureId id : kAllMeasures) {
    if (measure_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown measure id: " + std::string(name));
}

/// Direct (non-atomic) evaluation of a measure.
inline double evaluate(MeasureId id, const JointDistribution& dist) {
  switch (id) {
    case MeasureId::JointEntropy: return entropy(dist);
    case MeasureId::CoInformation: return co_information(dist);
    case MeasureId::TotalCorrelation: return total_correlation(dist);
    case MeasureId::Binding: return binding_information(dist);
    case MeasureId::Residual: return residual_entropy(dist);
    case MeasureId::LocalExogenous: return local_exogenous_information(dist);
    case MeasureId::Enigmatic: return enigmatic_information(dist);
  }
  throw std::invalid_argument("unknown measure id");
}

struct AtomWeights {
  std::size_t variable_count = 0;
  /// weights[mask] for mask in [1, 2^N); weights[0] is unused.
  std::vector<int> weights;

  [[nodiscard]] int weight(std::uint64_t atom) const { return weights.at(atom); }
  [[nodiscard]] std::size_t atom_count() const { return weights.empty() ? 0 : weights.size() - 1; }
};

struct AtomMeasure {
  std::size_t variable_count = 0;
  /// values[mask] for mask in [1, 2^N); values[0] is unused.
  std::vector<double> values;

  [[nodiscard]] double value(std::uint64_t atom) const { return values.at(atom); }
  [[nodiscard]] double total() const {
    double s = 0.0;
    for (std::size_t m = 1; m < values.size(); ++m) s += values[m];
    return s;
  }
};

/// Weight of the atom shared by exactly m of N variables.
inline int atom_weight_for_multiplicity(MeasureId id, std::size_t m, std::size_t n) {
  const int mi = static_cast<int>(m);
  switch (id) {
    case MeasureId::JointEntropy: return 1;
    case MeasureId::CoInformation: return m == n ? 1 : 0;
    case MeasureId::TotalCorrelation: return mi - 1;
    case MeasureId::Binding: return m >= 2 ? 1 : 0;
    case MeasureId::Residual: return m == 1 ? 1 : 0;
    case MeasureId::LocalExogenous: return m >= 2 ? mi : 0;
    case MeasureId::Enigmatic: return m >= 2 ? mi - 2 : 0;
  }
  throw std::invalid_argument("unknown measure id");
}

inline AtomWeights atom_weights(MeasureId id, std::size_t n) {
  if (n < 2) throw std::invalid_argument("atom_weights: need N >= 2");
  if (n > 30) throw ResourceLimitError("atom_weights: N too large");
  AtomWeights w{n, std::vector<int>(std::size_t{1} << n, 0)};
  for (std::uint64_t mask = 1; mask < w.weights.size(); ++mask) {
    w.weights[mask] = atom_weight_for_multiplicity(id, static_cast<std::size_t>(std::popcount(mask)), n);
  }
  return w;
}

inline AtomWeights atom_weights(std::string_view id, std::size_t n) { return atom_weights(parse_measure_id(id), n); }

inline constexpr std::size_t kMaxAtomVariables = 6;

/// Atom values by Moebius inversion over the subset-entropy lattice.
///
/// With g(C) = H[X_Omega] - H[X_{Omega \ C}] = sum_{nonempty S within C} mu(S),
/// mu(S) = sum_{C within S} (-1)^{|S|-|C|} g(C).
inline AtomMeasure atom_measure(const JointDistribution& dist) {
  const std::size_t n = dist.variable_count();
  if (n > kMaxAtomVariables) {
    throw ResourceLimitError("atom_measure: " + std::to_string(n) + " variables exceeds limit of " +
                             std::to_string(kMaxAtomVariables));
  }
  const std::vector<double> h = subset_entropies(dist);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<double> mu(h.size());
  for (std::uint64_t c = 0; c <= full; ++c) mu[c] = h[full] - h[full & ~c];
  // In-place subset Moebius transform.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t s = 0; s <= full; ++s) {
      if ((s >> i) & 1U) mu[s] -= mu[s ^ (std::uint64_t{1} << i)];
    }
  }
  mu[0] = 0.0;

  for (std::uint64_t a = 1; a <= full; ++a) {
    double sum = 0.0;
    for (std::uint64_t s = 1; s <= full; ++s) {
      if (s & a) sum += mu[s];
    }
    if (std::abs(sum - h[a]) > 1e-9) throw ConsistencyError("atom_measure: subset entropy not reproduced");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mu[std::uint64_t{1} << i] < -1e-9) throw ConsistencyError("atom_measure: negative singleton atom");
  }
  return AtomMeasure{n, std::move(mu)};
}

/// sum over atoms of weight * value.
inline double weighted_sum(const AtomWeights& w, const AtomMeasure& m) {
  if (w.variable_count != m.variable_count) throw std::invalid_argument("weighted_sum: variable count mismatch");
  double s = 0.0;
  for (std::size_t mask = 1; mask < m.values.size(); ++mask) s += w.weights[mask] * m.values[mask];
  return s;
}

}  // namespace anatomy
