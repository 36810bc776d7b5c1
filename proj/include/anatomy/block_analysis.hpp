#pragma once

// Block curves F(l) = F[X_{0:l}] for stationary processes, their asymptotic
// rates and subextensive parts, and the anatomy of a single observation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anatomy/epsilon_machine.hpp"
#include "anatomy/errors.hpp"
#include "anatomy/measures.hpp"
#include "anatomy/mixed_state.hpp"

namespace anatomy {

enum class BlockMeasure { H, T, B, R, W, Q, I };

inline constexpr BlockMeasure kAllBlockMeasures[] = {BlockMeasure::H, BlockMeasure::T, BlockMeasure::B,
                                                     BlockMeasure::R, BlockMeasure::W, BlockMeasure::Q,
                                                     BlockMeasure::I};

inline std::string_view block_measure_name(BlockMeasure m) {
  switch (m) {
    case BlockMeasure::H: return "H";
    case BlockMeasure::T: return "T";
    case BlockMeasure::B: return "B";
    case BlockMeasure::R: return "R";
    case BlockMeasure::W: return "W";
    case BlockMeasure::Q: return "Q";
    case BlockMeasure::I: return "I";
  }
  return "?";
}

inline BlockMeasure parse_block_measure(std::string_view name) {
  for (BlockMeasure m : kAllBlockMeasures) {
    if (block_measure_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown block measure: " + std::string(name));
}

struct BlockCurve {
  BlockMeasure measure;
  std::vector<double> values;  ///< values[l] for l = 0..L; values[0] = 0

  [[nodiscard]] std::size_t max_length() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

struct BlockBudget {
  /// Ceiling on the documented cost model: (k+1)^L for I, l k^l for
  /// B/R/W/Q, k^l for H/T.
  long double max_cost = 1e10L;
  std::size_t max_words = kWordBudget;
};

namespace detail {

inline long double block_cost(BlockMeasure m, std::size_t k, std::size_t l) {
  const long double kl = std::pow(static_cast<long double>(k), static_cast<long double>(l));
  switch (m) {
    case BlockMeasure::I: return std::pow(static_cast<long double>(k + 1), static_cast<long double>(l));
    case BlockMeasure::H:
    case BlockMeasure::T: return kl;
    default: return static_cast<long double>(l) * kl;
  }
}

}  // namespace detail

/// Several block curves sharing one word enumeration per length.
/// T(l) uses l H(1) - H(l).
inline std::vector<BlockCurve> block_curves(const EpsilonMachine& m, std::span<const BlockMeasure> measures,
                                            std::size_t max_length, const BlockBudget& budget = {}) {
  if (max_length == 0) throw std::invalid_argument("block_curve: L must be >= 1");
  for (BlockMeasure bm : measures) {
    const long double cost = detail::block_cost(bm, m.alphabet_size(), max_length);
    if (cost > budget.max_cost) {
      throw ResourceLimitError("block curve " + std::string(block_measure_name(bm)) + " at L=" +
                               std::to_string(max_length) + " exceeds cost budget");
    }
  }
  std::vector<BlockCurve> curves;
  for (BlockMeasure bm : measures) curves.push_back({bm, std::vector<double>(max_length + 1, 0.0)});
  double h1 = 0.0;
  for (std::size_t l = 1; l <= max_length; ++l) {
    const JointDistribution words = word_distribution(m, l, budget.max_words);
    const double h = entropy(words);
    if (l == 1) h1 = h;
    const double t = static_cast<double>(l) * h1 - h;
    std::optional<double> r;
    auto residual = [&] {
      if (!r) r = detail::residual_from(words);
      return *r;
    };
    for (BlockCurve& c : curves) {
      double v = 0.0;
      switch (c.measure) {
        case BlockMeasure::H: v = h; break;
        case BlockMeasure::T: v = t; break;
        case BlockMeasure::R: v = residual(); break;
        case BlockMeasure::B: v = h - residual(); break;
        case BlockMeasure::Q: v = t - (h - residual()); break;
        case BlockMeasure::W: v = (h - residual()) + t; break;
        case BlockMeasure::I: v = co_information(words); break;
      }
      c.values[l] = v;
    }
  }
  return curves;
}

inline BlockCurve block_curve(const EpsilonMachine& m, BlockMeasure measure, std::size_t max_length,
                              const BlockBudget& budget = {}) {
  const BlockMeasure one[] = {measure};
  return std::move(block_curves(m, one, max_length, budget).front());
}

/// values[l] - values[l-1] for l = 1..L; element i holds l = i + 1.
inline std::vector<double> discrete_derivative(const BlockCurve& curve) {
  if (curve.max_length() < 1) throw std::invalid_argument("discrete_derivative: L must be >= 1");
  std::vector<double> d(curve.max_length());
  for (std::size_t l = 1; l <= curve.max_length(); ++l) d[l - 1] = curve.values[l] - curve.values[l - 1];
  return d;
}

/// Linear asymptote F(l) ~ subextensive + l * rate.
struct AsymptoticFit {
  double rate = 0.0;
  double subextensive = 0.0;
  bool converged = false;
  /// Largest deviation of points L-1 and L-2 from the line.
  double residual = 0.0;
};

/// rate = last discrete derivative, subextensive = F(L) - L rate. Converged
/// when the last three derivatives spread by less than `tolerance`.
inline AsymptoticFit asymptote_fit(const BlockCurve& curve, double tolerance) {
  const std::size_t L = curve.max_length();
  if (L < 3) throw std::invalid_argument("asymptote_fit: L must be >= 3");
  const std::vector<double> d = discrete_derivative(curve);
  AsymptoticFit fit;
  fit.rate = d[L - 1];
  fit.subextensive = curve.values[L] - static_cast<double>(L) * fit.rate;
  auto line = [&](std::size_t l) { return fit.subextensive + static_cast<double>(l) * fit.rate; };
  fit.residual = std::max(std::abs(curve.values[L - 1] - line(L - 1)), std::abs(curve.values[L - 2] - line(L - 2)));
  const double hi = std::max({d[L - 1], d[L - 2], d[L - 3]});
  const double lo = std::min({d[L - 1], d[L - 2], d[L - 3]});
  fit.converged = (hi - lo) < tolerance;
  return fit;
}

struct ExcessEntropyEstimate {
  double from_entropy_rate = 0.0;        ///< sum_l (h_l - h_mu)
  double from_total_correlation = 0.0;   ///< -sum_l (rho_l - rho_mu)
  bool termwise_match = false;           ///< h_l - h_mu == -(rho_l - rho_mu) for every l
  bool converged = false;                ///< h_L - h_mu < 1e-9
  double tail = 0.0;                     ///< h_L - h_mu
};

/// Excess entropy by discrete integration of h_l and rho_l up to L, with the
/// exact entropy rate subtracted.
inline ExcessEntropyEstimate excess_entropy(const EpsilonMachine& m, std::size_t max_length,
                                            const BlockBudget& budget = {}) {
  const BlockMeasure hm[] = {BlockMeasure::H, BlockMeasure::T};
  const auto curves = block_curves(m, hm, max_length, budget);
  const auto dh = discrete_derivative(curves[0]);
  const auto drho = discrete_derivative(curves[1]);
  const double hmu = entropy_rate_exact(m);
  const double rhomu = curves[0].values[1] - hmu;
  ExcessEntropyEstimate e;
  e.termwise_match = true;
  for (std::size_t i = 0; i < dh.size(); ++i) {
    const double a = dh[i] - hmu;
    const double b = drho[i] - rhomu;
    e.from_entropy_rate += a;
    e.from_total_correlation -= b;
    if (std::abs(a + b) > 1e-10) e.termwise_match = false;
  }
  e.tail = dh.back() - hmu;
  e.converged = e.tail < 1e-9;
  return e;
}

/// How the semi-infinite past and future are approximated.
enum class Estimator {
  /// Belief propagation to a converged horizon.
  Limit,
  /// Finite windows of mw symbols on each side of X_0.
  Window,
};

inline std::string_view estimator_name(Estimator e) { return e == Estimator::Limit ? "limit" : "window"; }

inline Estimator parse_estimator(std::string_view name) {
  if (name == "limit") return Estimator::Limit;
  if (name == "window") return Estimator::Window;
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

struct AnatomyOptions {
  std::size_t window = 8;
  std::size_t max_block = 16;
  Estimator estimator = Estimator::Limit;
  LimitOptions limit;
  BlockBudget budget;
};

/// H[X_mw | X_{0:mw}, X_{mw+1:2mw+1}] from the (2mw+1)-word distribution.
inline double ephemeral_rate_window(const EpsilonMachine& m, std::size_t window, const BlockBudget& budget = {}) {
  if (window == 0) return single_symbol_entropy(m);
  const JointDistribution words = word_distribution(m, 2 * window + 1, budget.max_words);
  return conditional_entropy(words, IndexSet{window}, IndexSet{window}.complement(2 * window + 1));
}

struct AnatomyDiagnostics {
  double ephemeral_previous_window = 0.0;  ///< r_mu estimate at mw - 1
  double ephemeral_window = 0.0;           ///< r_mu estimate at mw
  ExcessEntropyEstimate block_excess_entropy;  ///< E from block sums at max_block
  LimitValue ephemeral_limit;              ///< filled for Estimator::Limit
  LimitValue excess_entropy_limit;         ///< filled for Estimator::Limit
  bool converged = false;
};

struct AnatomyDecomposition {
  double H1 = 0.0;
  double h_mu = 0.0;
  double rho_mu = 0.0;
  double r_mu = 0.0;
  double b_mu = 0.0;
  double q_mu = 0.0;
  double w_mu = 0.0;
  double sigma_mu = 0.0;
  double E = 0.0;
  double I1 = 0.0;
  double R1 = 0.0;
  double R_inf = 0.0;
  std::size_t window = 0;
  Estimator estimator = Estimator::Limit;
  AnatomyDiagnostics diagnostics;
};

/// Window estimates whose last step moves more than this are flagged
/// non-converged.
inline constexpr double kWindowConvergence = 1e-3;

/// Decomposition of H[X_0] (and of E) for one process. H1 and h_mu are exact;
/// r_mu and E come from the chosen estimator; the rest follow by identities.
inline AnatomyDecomposition anatomy(const EpsilonMachine& m, const AnatomyOptions& opts = {}) {
  if (opts.window == 0) throw std::invalid_argument("anatomy: window must be >= 1");
  AnatomyDecomposition a;
  a.window = opts.window;
  a.estimator = opts.estimator;
  a.H1 = single_symbol_entropy(m);
  a.h_mu = entropy_rate_exact(m);
  a.rho_mu = a.H1 - a.h_mu;

  auto& diag = a.diagnostics;
  diag.ephemeral_previous_window = ephemeral_rate_window(m, opts.window - 1, opts.budget);
  diag.ephemeral_window = ephemeral_rate_window(m, opts.window, opts.budget);
  diag.block_excess_entropy = excess_entropy(m, opts.max_block, opts.budget);

  if (opts.estimator == Estimator::Limit) {
    diag.ephemeral_limit = ephemeral_rate_limit(m, opts.limit);
    diag.excess_entropy_limit = excess_entropy_limit(m, opts.limit);
    a.r_mu = diag.ephemeral_limit.value;
    a.E = diag.excess_entropy_limit.value;
    diag.converged = diag.ephemeral_limit.converged && diag.excess_entropy_limit.converged;
  } else {
    a.r_mu = diag.ephemeral_window;
    a.E = diag.block_excess_entropy.from_entropy_rate;
    diag.converged = std::abs(diag.ephemeral_window - diag.ephemeral_previous_window) < kWindowConvergence &&
                     diag.block_excess_entropy.converged;
  }

  a.b_mu = a.h_mu - a.r_mu;
  a.q_mu = a.rho_mu - a.b_mu;
  a.w_mu = a.rho_mu + a.b_mu;
  a.sigma_mu = a.E - a.rho_mu;
  a.I1 = a.q_mu + a.sigma_mu;
  const auto red = compression_redundancies(m);
  a.R1 = red.single_symbol;
  a.R_inf = red.asymptotic;
  return a;
}

struct EEComponent {
  double limit = 0.0;   ///< semi-infinite value
  AsymptoticFit fit;    ///< from the block curve at L
};

struct EEDecompositions {
  double E = 0.0;
  EEComponent R, B, Q, W;
  bool limit_converged = false;

  /// The four combinations that each equal E, from limit values.
  double e_b_plus_r = 0.0;        ///< E_B + E_R
  double e_neg_b_minus_q = 0.0;   ///< -E_B - E_Q
  double e_half_r_minus_q = 0.0;  ///< (E_R - E_Q) / 2
  double e_neg_half_w_q = 0.0;    ///< -(E_W + E_Q) / 2
  /// The same combinations from the block-curve fits at L.
  double fit_b_plus_r = 0.0;
  double fit_neg_b_minus_q = 0.0;
  double fit_half_r_minus_q = 0.0;
  double fit_neg_half_w_q = 0.0;

  /// E = b_mu + q_mu + sigma_mu from the anatomy.
  double b_mu = 0.0;
  double q_mu = 0.0;
  double sigma_mu = 0.0;
  double e_from_anatomy = 0.0;
};

/// Subextensive parts of R, B, Q, W two ways: block-curve fits at L, and
/// limits (E_R from belief propagation, the others from the exact identities
/// H = B + R, T = B + Q, W = B + T with H ~ E + l h_mu, T ~ -E + l rho_mu).
inline EEDecompositions ee_decompositions(const EpsilonMachine& m, std::size_t max_length,
                                          const AnatomyOptions& opts = {}, double fit_tolerance = 2e-2) {
  EEDecompositions d;
  const AnatomyDecomposition a = anatomy(m, opts);
  d.E = a.E;
  d.b_mu = a.b_mu;
  d.q_mu = a.q_mu;
  d.sigma_mu = a.sigma_mu;
  d.e_from_anatomy = a.b_mu + a.q_mu + a.sigma_mu;

  const BlockMeasure ms[] = {BlockMeasure::R, BlockMeasure::B, BlockMeasure::Q, BlockMeasure::W};
  const auto curves = block_curves(m, ms, max_length, opts.budget);
  d.R.fit = asymptote_fit(curves[0], fit_tolerance);
  d.B.fit = asymptote_fit(curves[1], fit_tolerance);
  d.Q.fit = asymptote_fit(curves[2], fit_tolerance);
  d.W.fit = asymptote_fit(curves[3], fit_tolerance);

  if (opts.estimator == Estimator::Limit) {
    const LimitValue er = residual_subextensive_limit(m, a.r_mu, opts.limit);
    d.R.limit = er.value;
    d.limit_converged = er.converged && a.diagnostics.converged;
  } else {
    d.R.limit = d.R.fit.subextensive;
    d.limit_converged = d.R.fit.converged && a.diagnostics.converged;
  }
  d.B.limit = d.E - d.R.limit;
  d.Q.limit = -d.E - d.B.limit;
  d.W.limit = d.B.limit - d.E;

  d.e_b_plus_r = d.B.limit + d.R.limit;
  d.e_neg_b_minus_q = -d.B.limit - d.Q.limit;
  d.e_half_r_minus_q = 0.5 * (d.R.limit - d.Q.limit);
  d.e_neg_half_w_q = -0.5 * (d.W.limit + d.Q.limit);

  d.fit_b_plus_r = d.B.fit.subextensive + d.R.fit.subextensive;
  d.fit_neg_b_minus_q = -d.B.fit.subextensive - d.Q.fit.subextensive;
  d.fit_half_r_minus_q = 0.5 * (d.R.fit.subextensive - d.Q.fit.subextensive);
  d.fit_neg_half_w_q = -0.5 * (d.W.fit.subextensive + d.Q.fit.subextensive);
  return d;
}

struct CoInformationReport {
  BlockCurve curve;
  AsymptoticFit fit;                        ///< i_mu = fit.rate, bold-I = fit.subextensive
  bool limit_vanishes = false;              ///< |I(L)| < tolerance
  bool rate_vanishes = false;               ///< |i_mu| < rate_tolerance
  bool subextensive_vanishes = false;       ///< |bold-I| < tolerance
  std::optional<std::size_t> vanishing_length;  ///< least l0 with |I(l)| < tolerance for all l >= l0
};

/// Empirical check of the block co-information propositions at finite L.
/// Cost is (k+1)^L subset-entropy table visits per length.
inline CoInformationReport coinformation_propositions_check(const EpsilonMachine& m, std::size_t max_length,
                                                            double tolerance = 1e-2, double rate_tolerance = 1e-3,
                                                            const BlockBudget& budget = {}) {
  if (!(entropy_rate_exact(m) > 0.0)) {
    throw std::invalid_argument("coinformation_propositions_check: needs a positive entropy rate");
  }
  CoInformationReport rep{block_curve(m, BlockMeasure::I, max_length, budget), {}, false, false, false, std::nullopt};
  rep.fit = asymptote_fit(rep.curve, rate_tolerance);
  rep.limit_vanishes = std::abs(rep.curve.values[max_length]) < tolerance;
  rep.rate_vanishes = std::abs(rep.fit.rate) < rate_tolerance;
  rep.subextensive_vanishes = std::abs(rep.fit.subextensive) < tolerance;
  for (std::size_t l = max_length; l >= 1; --l) {
    if (std::abs(rep.curve.values[l]) >= tolerance) break;
    rep.vanishing_length = l;
  }
  return rep;
}

}  // namespace anatomy
