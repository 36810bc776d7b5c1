#pragma once

// Example processes: Even, Golden Mean family, Noisy Random Phase-Slip, and
// the fair coin.

#include <string>

#include "anatomy/epsilon_machine.hpp"

namespace anatomy {

/// Blocks of 1s of even length separated by one or more 0s.
/// A -0|1/2-> A, A -1|1/2-> B, B -1|1-> A.
inline EpsilonMachine even_process() {
  return EpsilonMachine({"A", "B"}, 2, {{0, 0, 0.5, 0}, {0, 1, 0.5, 1}, {1, 1, 1.0, 0}});
}

/// Golden Mean family with self-loop probability p at A:
/// A -1|p-> A, A -0|1-p-> B, B -1|1-> A. No two consecutive 0s.
inline EpsilonMachine golden_mean_family(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("golden_mean_family: p must lie in (0,1)");
  return EpsilonMachine({"A", "B"}, 2, {{0, 1, p, 0}, {0, 0, 1.0 - p, 1}, {1, 1, 1.0, 0}});
}

inline EpsilonMachine golden_mean() { return golden_mean_family(0.5); }

/// Noisy Random Phase-Slip process: the period-5 cycle 1 0 1 ? 0 with a
/// fair coin at D and a random slip (extra 0s) at A.
/// A -0|1/2-> A, A -1|1/2-> B, B -0-> C, C -1-> D, D -0|1/2-> E, D -1|1/2-> E, E -0-> A.
inline EpsilonMachine nrps() {
  return EpsilonMachine({"A", "B", "C", "D", "E"}, 2,
                        {{0, 0, 0.5, 0},
                         {0, 1, 0.5, 1},
                         {1, 0, 1.0, 2},
                         {2, 1, 1.0, 3},
                         {3, 0, 0.5, 4},
                         {3, 1, 0.5, 4},
                         {4, 0, 1.0, 0}});
}

/// Single-state i.i.d. fair coin.
inline EpsilonMachine fair_coin() { return EpsilonMachine({"A"}, 2, {{0, 0, 0.5, 0}, {0, 1, 0.5, 0}}); }

/// Built-in process by name: even, golden-mean, nrps, coin.
inline EpsilonMachine builtin_process(const std::string& name) {
  if (name == "even") return even_process();
  if (name == "golden-mean") return golden_mean();
  if (name == "nrps") return nrps();
  if (name == "coin") return fair_coin();
  throw std::invalid_argument("unknown built-in process: " + name);
}

}  // namespace anatomy
