#pragma once

// Forward belief propagation over an epsilon-machine.
//
// A BeliefCloud is the distribution, over all observation histories of the
// current length, of the unnormalized joint belief
//     v_w[label][state] = Pr(label, X_{1:t} = w, S_t = state)
// where `label` is some finite hidden quantity fixed at time 0 (the initial
// causal state, the symbol X_0, ...). Histories whose beliefs point in the
// same direction are merged; their masses add. Because the update is linear,
// merged histories stay merged, and the cloud stays small for synchronizing
// machines even when the number of histories grows exponentially.
//
// This gives semi-infinite quantities (past/future conditionals, specific
// informations) as limits in the horizon t, without enumerating words.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "anatomy/epsilon_machine.hpp"
#include "anatomy/errors.hpp"

namespace anatomy {

inline constexpr std::size_t kBeliefBudget = std::size_t{1} << 20;

struct LimitOptions {
  std::size_t max_horizon = 1024;
  /// Successive horizon values must agree this closely ...
  double tolerance = 1e-13;
  /// ... for this many consecutive steps.
  std::size_t stable_steps = 6;
  std::size_t max_beliefs = kBeliefBudget;
};

/// A horizon-limit evaluation and whether it settled.
struct LimitValue {
  double value = 0.0;
  std::size_t horizon = 0;
  bool converged = false;
};

class BeliefCloud {
 public:
  struct Belief {
    double mass;
    std::vector<double> direction;  ///< sums to 1; index label * states + state
  };

  /// `initial` is the joint Pr(label, S_0 = state), laid out label-major.
  BeliefCloud(const EpsilonMachine& m, std::size_t label_count, const std::vector<double>& initial,
              std::size_t max_beliefs = kBeliefBudget)
      : machine_(&m), labels_(label_count), states_(m.state_count()), max_beliefs_(max_beliefs) {
    if (initial.size() != labels_ * states_) throw std::invalid_argument("BeliefCloud: initial belief has wrong size");
    std::vector<Belief> raw;
    raw.push_back(normalized(initial));
    beliefs_ = std::move(raw);
  }

  [[nodiscard]] std::span<const Belief> beliefs() const noexcept { return beliefs_; }
  [[nodiscard]] std::size_t label_count() const noexcept { return labels_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }

  /// Conditions on one more observed symbol; each belief splits by symbol.
  void observe() {
    std::vector<Belief> raw;
    raw.reserve(beliefs_.size() * machine_->alphabet_size());
    std::vector<double> v(labels_ * states_);
    for (const Belief& b : beliefs_) {
      for (Symbol x = 0; x < machine_->alphabet_size(); ++x) {
        std::fill(v.begin(), v.end(), 0.0);
        double total = 0.0;
        for (StateIndex s = 0; s < states_; ++s) {
          const auto tr = machine_->transition(s, x);
          if (!tr || tr->probability <= 0.0) continue;
          for (std::size_t l = 0; l < labels_; ++l) {
            const double w = b.direction[l * states_ + s] * tr->probability;
            v[l * states_ + tr->next_state] += w;
            total += w;
          }
        }
        if (total <= 0.0) continue;
        for (double& e : v) e /= total;
        raw.push_back({b.mass * total, v});
      }
    }
    merge(std::move(raw));
    ++steps_;
  }

  /// Advances one step without observing the symbol.
  void skip() {
    std::vector<Belief> raw;
    raw.reserve(beliefs_.size());
    for (const Belief& b : beliefs_) {
      std::vector<double> v(labels_ * states_, 0.0);
      for (const Edge& e : machine_->edges()) {
        for (std::size_t l = 0; l < labels_; ++l) v[l * states_ + e.to] += b.direction[l * states_ + e.from] * e.probability;
      }
      raw.push_back({b.mass, std::move(v)});
    }
    merge(std::move(raw));
    ++steps_;
  }

  /// Pr(label | history) for one belief.
  [[nodiscard]] std::vector<double> label_posterior(const Belief& b) const {
    std::vector<double> post(labels_, 0.0);
    for (std::size_t l = 0; l < labels_; ++l) {
      for (StateIndex s = 0; s < states_; ++s) post[l] += b.direction[l * states_ + s];
    }
    return post;
  }

  /// Expected entropy of the next symbol given the history:
  /// H[X_{t} | observed history] averaged over histories.
  [[nodiscard]] double next_symbol_entropy() const {
    double h = 0.0;
    std::vector<double> p(machine_->alphabet_size());
    for (const Belief& b : beliefs_) {
      std::fill(p.begin(), p.end(), 0.0);
      for (std::size_t l = 0; l < labels_; ++l) {
        for (StateIndex s = 0; s < states_; ++s) {
          const double w = b.direction[l * states_ + s];
          if (w == 0.0) continue;
          for (Symbol x = 0; x < p.size(); ++x) p[x] += w * machine_->emission(s, x);
        }
      }
      for (double q : p) {
        if (q > 0.0) h -= b.mass * q * std::log2(q);
      }
    }
    return h;
  }

  /// Mass-weighted average of f(belief).
  template <class F>
  [[nodiscard]] double expect(F&& f) const {
    double s = 0.0;
    for (const Belief& b : beliefs_) s += b.mass * f(b);
    return s;
  }

 private:
  static Belief normalized(const std::vector<double>& v) {
    double total = 0.0;
    for (double e : v) total += e;
    if (!(total > 0.0)) throw std::invalid_argument("BeliefCloud: initial belief has no mass");
    Belief b{total, v};
    for (double& e : b.direction) e /= total;
    return b;
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (std::int64_t e : k) {
        h ^= static_cast<std::uint64_t>(e);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  void merge(std::vector<Belief>&& raw) {
    // Directions equal to 12 decimal places are treated as identical.
    constexpr double kQuantum = 1e12;
    std::unordered_map<std::vector<std::int64_t>, std::size_t, KeyHash> index;
    index.reserve(raw.size());
    std::vector<Belief> merged;
    merged.reserve(raw.size());
    std::vector<std::int64_t> key(labels_ * states_);
    for (Belief& b : raw) {
      for (std::size_t i = 0; i < key.size(); ++i) key[i] = std::llround(b.direction[i] * kQuantum);
      auto [it, inserted] = index.try_emplace(key, merged.size());
      if (inserted) {
        merged.push_back(std::move(b));
      } else {
        merged[it->second].mass += b.mass;
      }
    }
    if (merged.size() > max_beliefs_) {
      throw ResourceLimitError("BeliefCloud: " + std::to_string(merged.size()) + " distinct beliefs exceeds budget");
    }
    beliefs_ = std::move(merged);
  }

  const EpsilonMachine* machine_;
  std::size_t labels_;
  std::size_t states_;
  std::size_t max_beliefs_;
  std::size_t steps_ = 0;
  std::vector<Belief> beliefs_;
};

namespace detail {

inline double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

/// Steps the cloud with observe() and evaluates f(cloud) after each step
/// until f settles.
template <class F>
LimitValue observe_until_stable(BeliefCloud& cloud, F&& f, const LimitOptions& opts) {
  LimitValue out;
  double previous = f(cloud);
  std::size_t stable = 0;
  for (std::size_t t = 1; t <= opts.max_horizon; ++t) {
    cloud.observe();
    const double current = f(cloud);
    stable = (std::abs(current - previous) <= opts.tolerance) ? stable + 1 : 0;
    previous = current;
    out.horizon = t;
    if (stable >= opts.stable_steps) {
      out.converged = true;
      break;
    }
  }
  out.value = previous;
  return out;
}

/// Joint Pr(S_0 = s, S_0 = t) on the diagonal: label = initial causal state.
inline std::vector<double> initial_state_labels(const EpsilonMachine& m) {
  const std::size_t n = m.state_count();
  std::vector<double> v(n * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) v[s * n + s] = m.stationary()[s];
  return v;
}

/// Label = X_0 (the present symbol); belief over S_1.
inline std::vector<double> present_symbol_labels(const EpsilonMachine& m) {
  const std::size_t n = m.state_count();
  std::vector<double> v(m.alphabet_size() * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    for (Symbol x = 0; x < m.alphabet_size(); ++x) {
      if (auto tr = m.transition(s, x)) v[x * n + tr->next_state] += m.stationary()[s] * tr->probability;
    }
  }
  return v;
}

/// Label = (S_0, X_0) packed as s * k + x; belief over S_1.
inline std::vector<double> state_and_symbol_labels(const EpsilonMachine& m) {
  const std::size_t n = m.state_count();
  const std::size_t k = m.alphabet_size();
  std::vector<double> v(n * k * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    for (Symbol x = 0; x < k; ++x) {
      if (auto tr = m.transition(s, x)) v[(s * k + x) * n + tr->next_state] = m.stationary()[s] * tr->probability;
    }
  }
  return v;
}

/// Label = S_0; belief over S_1 with X_0 unobserved.
inline std::vector<double> state_labels_after_gap(const EpsilonMachine& m) {
  const std::size_t n = m.state_count();
  std::vector<double> v(n * n, 0.0);
  for (const Edge& e : m.edges()) v[e.from * n + e.to] += m.stationary()[e.from] * e.probability;
  return v;
}

/// I[label ; observed history] for the cloud's current horizon.
inline double label_information(const BeliefCloud& cloud, const std::vector<double>& prior) {
  return entropy_of(prior) - cloud.expect([&](const BeliefCloud::Belief& b) { return entropy_of(cloud.label_posterior(b)); });
}

}  // namespace detail

/// E = I[S_0 ; X_{0:t}] as t grows; equals I[past ; future] because the
/// causal state is a sufficient statistic of the past.
inline LimitValue excess_entropy_limit(const EpsilonMachine& m, const LimitOptions& opts = {}) {
  BeliefCloud cloud(m, m.state_count(), detail::initial_state_labels(m), opts.max_beliefs);
  const std::vector<double> prior = m.stationary().weights;
  return detail::observe_until_stable(
      cloud, [&](const BeliefCloud& c) { return detail::label_information(c, prior); }, opts);
}

/// r_mu = H[X_0 | past, future] = H[X_0 | S_0, X_{1:t}] as t grows.
inline LimitValue ephemeral_rate_limit(const EpsilonMachine& m, const LimitOptions& opts = {}) {
  const std::size_t n = m.state_count();
  const std::size_t k = m.alphabet_size();
  BeliefCloud cloud(m, n * k, detail::state_and_symbol_labels(m), opts.max_beliefs);
  auto conditional = [&](const BeliefCloud& c) {
    return c.expect([&](const BeliefCloud::Belief& b) {
      const std::vector<double> joint = c.label_posterior(b);
      std::vector<double> states(n, 0.0);
      for (StateIndex s = 0; s < n; ++s) {
        for (Symbol x = 0; x < k; ++x) states[s] += joint[s * k + x];
      }
      return detail::entropy_of(joint) - detail::entropy_of(states);
    });
  };
  LimitValue v = detail::observe_until_stable(cloud, conditional, opts);
  v.value = detail::clamp_nonnegative(v.value, "ephemeral information rate");
  return v;
}

/// Block entropy of the observed positions of X_{0:length}, with positions
/// flagged in `hidden` marginalized out. Chain rule over observed symbols.
inline double block_entropy_by_beliefs(const EpsilonMachine& m, std::size_t length,
                                       const std::vector<bool>& hidden = {},
                                       std::size_t max_beliefs = kBeliefBudget) {
  BeliefCloud cloud(m, 1, m.stationary().weights, max_beliefs);
  double h = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    if (t < hidden.size() && hidden[t]) {
      cloud.skip();
    } else {
      h += cloud.next_symbol_entropy();
      cloud.observe();
    }
  }
  return h;
}

/// R(l) = sum_i H[X_i | rest of X_{0:l}], evaluated with one hidden position
/// per term instead of word enumeration.
inline double residual_block_entropy_by_beliefs(const EpsilonMachine& m, std::size_t length,
                                                std::size_t max_beliefs = kBeliefBudget) {
  const double full = block_entropy_by_beliefs(m, length, {}, max_beliefs);
  double r = 0.0;
  std::vector<bool> hidden(length, false);
  for (std::size_t i = 0; i < length; ++i) {
    hidden[i] = true;
    r += full - block_entropy_by_beliefs(m, length, hidden, max_beliefs);
    hidden[i] = false;
  }
  return r;
}

/// E_R = lim R(l) - l r_mu, scanned over l in steps of `stride`.
inline LimitValue residual_subextensive_limit(const EpsilonMachine& m, double ephemeral_rate,
                                              const LimitOptions& opts = {}, std::size_t stride = 4,
                                              std::size_t max_length = 256) {
  LimitValue out;
  double previous = 0.0;
  std::size_t stable = 0;
  for (std::size_t l = stride; l <= max_length; l += stride) {
    const double current =
        residual_block_entropy_by_beliefs(m, l, opts.max_beliefs) - static_cast<double>(l) * ephemeral_rate;
    if (l > stride) stable = (std::abs(current - previous) <= 1e-10) ? stable + 1 : 0;
    previous = current;
    out.horizon = l;
    if (stable >= 2) {
      out.converged = true;
      break;
    }
  }
  out.value = previous;
  return out;
}

}  // namespace anatomy
