#pragma once

// Plain-text machine descriptions:
//
//   # comment
//   alphabet 2
//   states A B
//   edge A 0 1/2 A
//   edge A 1 0.5 B
//   edge B 1 1 A
//
// Symbols are integers in [0, alphabet). Probabilities are decimals or a/b.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "anatomy/epsilon_machine.hpp"

namespace anatomy {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool parse_unsigned(const std::string& token, std::uint64_t& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_double(const std::string& token, double& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_probability(const std::string& token, double& out) {
  const auto slash = token.find('/');
  if (slash == std::string::npos) return parse_double(token, out);
  double num = 0.0;
  double den = 0.0;
  if (!parse_double(token.substr(0, slash), num) || !parse_double(token.substr(slash + 1), den) || den == 0.0) {
    return false;
  }
  out = num / den;
  return true;
}

}  // namespace detail

inline EpsilonMachine parse_machine(std::istream& in) {
  std::size_t alphabet = 0;
  bool have_alphabet = false;
  std::vector<std::string> names;
  std::unordered_map<std::string, StateIndex> index;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, std::size_t> seen;  // from * alphabet + symbol -> line

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::vector<std::string> tok;
    for (std::string t; line >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0] == "alphabet") {
      std::uint64_t k = 0;
      if (have_alphabet) throw ParseError(lineno, "duplicate alphabet line");
      if (tok.size() != 2 || !detail::parse_unsigned(tok[1], k) || k == 0) {
        throw ParseError(lineno, "expected 'alphabet <k>' with k >= 1");
      }
      alphabet = k;
      have_alphabet = true;
    } else if (tok[0] == "states") {
      if (!names.empty()) throw ParseError(lineno, "duplicate states line");
      if (tok.size() < 2) throw ParseError(lineno, "expected 'states <name>...'");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!index.emplace(tok[i], names.size()).second) throw ParseError(lineno, "duplicate state name " + tok[i]);
        names.push_back(tok[i]);
      }
    } else if (tok[0] == "edge") {
      if (!have_alphabet || names.empty()) throw ParseError(lineno, "edge before alphabet and states lines");
      if (tok.size() != 5) throw ParseError(lineno, "expected 'edge <from> <symbol> <prob> <to>'");
      auto from = index.find(tok[1]);
      auto to = index.find(tok[4]);
      if (from == index.end()) throw ParseError(lineno, "unknown state " + tok[1]);
      if (to == index.end()) throw ParseError(lineno, "unknown state " + tok[4]);
      std::uint64_t symbol = 0;
      if (!detail::parse_unsigned(tok[2], symbol) || symbol >= alphabet) {
        throw ParseError(lineno, "symbol '" + tok[2] + "' outside alphabet");
      }
      double p = 0.0;
      if (!detail::parse_probability(tok[3], p) || !std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ParseError(lineno, "bad probability '" + tok[3] + "'");
      }
      const std::uint64_t key = from->second * alphabet + symbol;
      if (auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
        throw ParseError(lineno, "state " + tok[1] + " already has an edge on symbol " + tok[2] + " (line " +
                                     std::to_string(it->second) + ")");
      }
      edges.push_back({from->second, static_cast<Symbol>(symbol), p, to->second});
    } else {
      throw ParseError(lineno, "unknown directive '" + tok[0] + "'");
    }
  }
  if (!have_alphabet) throw ParseError(lineno, "missing alphabet line");
  if (names.empty()) throw ParseError(lineno, "missing states line");
  try {
    return EpsilonMachine(std::move(names), alphabet, std::move(edges));
  } catch (const InvalidModelError& e) {
    throw ParseError(lineno, e.what());
  }
}

inline EpsilonMachine parse_machine(const std::string& text) {
  std::istringstream in(text);
  return parse_machine(in);
}

inline EpsilonMachine load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open machine file " + path);
  return parse_machine(in);
}

inline std::string serialize_machine(const EpsilonMachine& m) {
  std::string out = "alphabet " + std::to_string(m.alphabet_size()) + "\nstates";
  for (const auto& n : m.state_names()) out += " " + n;
  out += "\n";
  char buf[64];
  for (const Edge& e : m.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.probability);
    out += "edge " + m.state_name(e.from) + " " + std::to_string(e.symbol) + " " + buf + " " + m.state_name(e.to) + "\n";
  }
  return out;
}

}  // namespace anatomy
