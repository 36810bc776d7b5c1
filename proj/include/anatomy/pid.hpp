#pragma once

// Two-source partial information decomposition with the minimum-specific-
// information redundancy, and its application to the past/present/future
// lattices of a stationary process.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "anatomy/block_analysis.hpp"
#include "anatomy/epsilon_machine.hpp"
#include "anatomy/joint_distribution.hpp"
#include "anatomy/measures.hpp"
#include "anatomy/mixed_state.hpp"

namespace anatomy {

struct PIDResult {
  double redundancy = 0.0;
  double unique_source1 = 0.0;
  double unique_source2 = 0.0;
  double synergy = 0.0;
  double total = 0.0;  ///< I[target ; source1, source2]
};

namespace detail {

/// p(t), p(a) and p(t, a) keyed by packed target / source codes.
struct PairTables {
  std::uint64_t target_space = 1;
  std::unordered_map<std::uint64_t, double> target;
  std::unordered_map<std::uint64_t, double> source;
  std::vector<JointDistribution::Entry> joint;  // code = t + target_space * a
};

inline PairTables pair_tables(const JointDistribution& dist, const IndexSet& target, const IndexSet& source) {
  PairTables tables;
  std::vector<std::size_t> sizes;
  for (std::size_t i : target) tables.target_space *= dist.alphabet_sizes()[i];
  tables.joint = project_codes(dist, target.united(source), sizes);
  for (const auto& e : tables.joint) {
    tables.target[e.code % tables.target_space] += e.probability;
    tables.source[e.code / tables.target_space] += e.probability;
  }
  return tables;
}

/// I_spec(t; A) for every target outcome t present in the tables.
inline std::unordered_map<std::uint64_t, double> specific_informations(const PairTables& tables) {
  std::unordered_map<std::uint64_t, double> out;
  for (const auto& [t, pt] : tables.target) out[t] = 0.0;
  for (const auto& e : tables.joint) {
    const std::uint64_t t = e.code % tables.target_space;
    const std::uint64_t a = e.code / tables.target_space;
    const double pt = tables.target.at(t);
    const double pa = tables.source.at(a);
    out[t] += (e.probability / pt) * std::log2(e.probability / (pa * pt));
  }
  return out;
}

inline void check_pid_sets(const JointDistribution& dist, const IndexSet& target, const IndexSet& s1,
                           const IndexSet& s2) {
  if (target.empty() || s1.empty() || s2.empty()) throw std::invalid_argument("pid: empty index set");
  target.check_range(dist.variable_count());
  s1.check_range(dist.variable_count());
  s2.check_range(dist.variable_count());
  require_disjoint(target, s1, "pid");
  require_disjoint(target, s2, "pid");
  require_disjoint(s1, s2, "pid");
}

/// Fills uniques and synergy from redundancy and the three mutual
/// informations; tiny negatives are clamped.
inline PIDResult assemble_pid(double redundancy, double mi1, double mi2, double total) {
  PIDResult r;
  r.redundancy = clamp_nonnegative(redundancy, "redundancy");
  r.unique_source1 = clamp_nonnegative(mi1 - redundancy, "unique information (source 1)");
  r.unique_source2 = clamp_nonnegative(mi2 - redundancy, "unique information (source 2)");
  r.synergy = clamp_nonnegative(total - redundancy - (mi1 - redundancy) - (mi2 - redundancy), "synergy");
  r.total = total;
  return r;
}

}  // namespace detail

/// Specific information of `source` about one target outcome:
/// sum_a p(a | t) [log2 p(t | a) - log2 p(t)].
inline double specific_information(const JointDistribution& dist, const IndexSet& target, const IndexSet& source,
                                   const Outcome& target_outcome) {
  if (target.empty() || source.empty()) throw std::invalid_argument("specific_information: empty index set");
  target.check_range(dist.variable_count());
  source.check_range(dist.variable_count());
  detail::require_disjoint(target, source, "specific_information");
  if (target_outcome.size() != target.size()) throw std::invalid_argument("specific_information: outcome size mismatch");
  std::uint64_t code = 0;
  std::uint64_t stride = 1;
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (target_outcome[j] >= dist.alphabet_sizes()[target[j]]) {
      throw std::invalid_argument("specific_information: symbol outside alphabet");
    }
    code += target_outcome[j] * stride;
    stride *= dist.alphabet_sizes()[target[j]];
  }
  const auto tables = detail::pair_tables(dist, target, source);
  if (!tables.target.contains(code)) {
    throw std::invalid_argument("specific_information: target outcome has zero probability");
  }
  return detail::specific_informations(tables).at(code);
}

/// Redundancy = sum_t p(t) min_i I_spec(t; s_i); uniques and synergy follow
/// from the mutual informations.
inline PIDResult pid_two_sources(const JointDistribution& dist, const IndexSet& target, const IndexSet& s1,
                                 const IndexSet& s2) {
  detail::check_pid_sets(dist, target, s1, s2);
  const auto t1 = detail::pair_tables(dist, target, s1);
  const auto t2 = detail::pair_tables(dist, target, s2);
  const auto i1 = detail::specific_informations(t1);
  const auto i2 = detail::specific_informations(t2);
  double redundancy = 0.0;
  for (const auto& [t, pt] : t1.target) redundancy += pt * std::min(i1.at(t), i2.at(t));
  return detail::assemble_pid(redundancy, mutual_information(dist, target, s1), mutual_information(dist, target, s2),
                              mutual_information(dist, target, s1.united(s2)));
}

/// PID of w_mu = I[X_0 ; past, future] with s1 = past, s2 = future.
struct PresentPID {
  PIDResult atoms;
  double uniquity = 0.0;                  ///< iota, the mean of the two unique atoms
  double redundancy_minus_synergy = 0.0;  ///< should equal q_mu
  bool symmetric = false;                 ///< |unique_past - unique_future| < 2e-3
  bool converged = false;
  std::size_t horizon = 0;                ///< future horizon (limit) or window
};

/// PID of I[past ; X_0, X_{1:}] with target = past, s1 = X_0, s2 = X_{1:}.
struct PastPID {
  PIDResult atoms;
  bool converged = false;
  std::size_t horizon = 0;
};

inline constexpr double kStationaritySymmetry = 2e-3;

namespace detail {

/// I_spec(x ; S_0) for the present symbol.
inline std::vector<double> present_specific_from_state(const EpsilonMachine& m) {
  const auto px = symbol_distribution(m);
  std::vector<double> out(m.alphabet_size(), 0.0);
  for (Symbol x = 0; x < m.alphabet_size(); ++x) {
    if (px[x] <= 0.0) continue;
    for (StateIndex s = 0; s < m.state_count(); ++s) {
      const double p = m.emission(s, x);
      if (p > 0.0) out[x] += (m.stationary()[s] * p / px[x]) * std::log2(p / px[x]);
    }
  }
  return out;
}

/// I_spec(label ; history) for each label value, from a cloud.
inline std::vector<double> cloud_specific(const BeliefCloud& cloud, const std::vector<double>& prior) {
  std::vector<double> out(prior.size(), 0.0);
  for (const auto& b : cloud.beliefs()) {
    const auto post = cloud.label_posterior(b);
    for (std::size_t l = 0; l < prior.size(); ++l) {
      if (post[l] > 0.0 && prior[l] > 0.0) out[l] += b.mass * (post[l] / prior[l]) * std::log2(post[l] / prior[l]);
    }
  }
  return out;
}

struct LimitPid {
  double redundancy = 0.0;
  double mi_future = 0.0;
};

/// Observes the cloud until both the redundancy and I[label ; history]
/// settle.
template <class Redundancy>
LimitPid pid_limit(BeliefCloud& cloud, const std::vector<double>& prior, Redundancy&& redundancy,
                   const LimitOptions& opts, LimitValue& status) {
  auto eval = [&] { return LimitPid{redundancy(cloud_specific(cloud, prior)), label_information(cloud, prior)}; };
  LimitPid previous = eval();
  std::size_t stable = 0;
  status = LimitValue{};
  for (std::size_t t = 1; t <= opts.max_horizon; ++t) {
    cloud.observe();
    const LimitPid current = eval();
    const bool settled = std::abs(current.redundancy - previous.redundancy) <= opts.tolerance &&
                         std::abs(current.mi_future - previous.mi_future) <= opts.tolerance;
    stable = settled ? stable + 1 : 0;
    previous = current;
    status.horizon = t;
    if (stable >= opts.stable_steps) {
      status.converged = true;
      break;
    }
  }
  status.value = previous.redundancy;
  return previous;
}

}  // namespace detail

/// Present-centric PID. For Estimator::Window the (2mw+1)-word distribution
/// is used directly; for Estimator::Limit the past is replaced by S_0 (which
/// leaves every specific information unchanged) and the future is propagated
/// until convergence.
inline PresentPID anatomy_pid_present(const EpsilonMachine& m, const AnatomyDecomposition& a,
                                      const AnatomyOptions& opts = {}) {
  PresentPID out;
  if (opts.estimator == Estimator::Window) {
    const std::size_t mw = opts.window;
    const JointDistribution words = word_distribution(m, 2 * mw + 1, opts.budget.max_words);
    out.atoms = pid_two_sources(words, IndexSet{mw}, IndexSet::range(0, mw), IndexSet::range(mw + 1, 2 * mw + 1));
    out.horizon = mw;
    out.converged = a.diagnostics.converged;
  } else {
    const auto px = symbol_distribution(m);
    const auto from_past = detail::present_specific_from_state(m);
    BeliefCloud cloud(m, m.alphabet_size(), detail::present_symbol_labels(m), opts.limit.max_beliefs);
    LimitValue status;
    const auto lim = detail::pid_limit(
        cloud, px,
        [&](const std::vector<double>& from_future) {
          double r = 0.0;
          for (Symbol x = 0; x < px.size(); ++x) r += px[x] * std::min(from_past[x], from_future[x]);
          return r;
        },
        opts.limit, status);
    out.atoms = detail::assemble_pid(lim.redundancy, a.rho_mu, lim.mi_future, a.H1 - a.r_mu);
    out.horizon = status.horizon;
    out.converged = status.converged && a.diagnostics.converged;
  }
  out.uniquity = 0.5 * (out.atoms.unique_source1 + out.atoms.unique_source2);
  out.redundancy_minus_synergy = out.atoms.redundancy - out.atoms.synergy;
  out.symmetric = std::abs(out.atoms.unique_source1 - out.atoms.unique_source2) < kStationaritySymmetry;
  return out;
}

inline PresentPID anatomy_pid_present(const EpsilonMachine& m, const AnatomyOptions& opts = {}) {
  return anatomy_pid_present(m, anatomy(m, opts), opts);
}

/// Past-centric PID; its total approximates E.
inline PastPID anatomy_pid_past(const EpsilonMachine& m, const AnatomyDecomposition& a,
                                const AnatomyOptions& opts = {}) {
  PastPID out;
  if (opts.estimator == Estimator::Window) {
    const std::size_t mw = opts.window;
    const JointDistribution words = word_distribution(m, 2 * mw + 1, opts.budget.max_words);
    out.atoms = pid_two_sources(words, IndexSet::range(0, mw), IndexSet{mw}, IndexSet::range(mw + 1, 2 * mw + 1));
    out.horizon = mw;
    out.converged = a.diagnostics.converged;
    return out;
  }
  const auto px = symbol_distribution(m);
  const std::vector<double>& pi = m.stationary().weights;
  // I_spec(s ; X_0) = sum_x p(x|s) log2(p(x|s) / p(x)).
  std::vector<double> from_present(m.state_count(), 0.0);
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    for (Symbol x = 0; x < m.alphabet_size(); ++x) {
      const double p = m.emission(s, x);
      if (p > 0.0) from_present[s] += p * std::log2(p / px[x]);
    }
  }
  BeliefCloud cloud(m, m.state_count(), detail::state_labels_after_gap(m), opts.limit.max_beliefs);
  LimitValue status;
  const auto lim = detail::pid_limit(
      cloud, pi,
      [&](const std::vector<double>& from_future) {
        double r = 0.0;
        for (StateIndex s = 0; s < pi.size(); ++s) r += pi[s] * std::min(from_present[s], from_future[s]);
        return r;
      },
      opts.limit, status);
  out.atoms = detail::assemble_pid(lim.redundancy, a.rho_mu, lim.mi_future, a.E);
  out.horizon = status.horizon;
  out.converged = status.converged && a.diagnostics.converged;
  return out;
}

inline PastPID anatomy_pid_past(const EpsilonMachine& m, const AnatomyOptions& opts = {}) {
  return anatomy_pid_past(m, anatomy(m, opts), opts);
}

}  // namespace anatomy
