// anatomy_cli: information anatomy of stationary processes given as
// epsilon-machines.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence or budget exceeded.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anatomy/anatomy.hpp"

namespace {

using namespace anatomy;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string machine_file;
  std::string process;
  std::size_t window = 8;
  std::optional<std::size_t> max_block;
  std::string measures = "H,T,B,R,W,Q,I";
  int precision = -1;
  std::uint64_t seed = 1;
  std::size_t length = 1000;
  std::string param_grid = "0.05:0.95:0.05";
  std::string family = "golden-mean";
  std::string estimator = "limit";
};

EpsilonMachine load(const Settings& s) {
  if (!s.machine_file.empty() && !s.process.empty()) throw InputError("give either a machine file or --process, not both");
  if (!s.process.empty()) {
    try {
      return builtin_process(s.process);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (s.machine_file.empty()) throw InputError("no machine: give a machine file or --process");
  return load_machine(s.machine_file);
}

AnatomyOptions options(const Settings& s, std::size_t default_block) {
  AnatomyOptions o;
  if (s.window == 0) throw InputError("--window must be >= 1");
  o.window = s.window;
  o.max_block = s.max_block.value_or(default_block);
  if (o.max_block < 3) throw InputError("--max-block must be >= 3");
  try {
    o.estimator = parse_estimator(s.estimator);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return o;
}

class Report {
 public:
  explicit Report(int precision) : precision_(precision) {}

  void section(const std::string& title) { std::printf("\n[%s]\n", title.c_str()); }
  void value(const std::string& name, double v) { std::printf("%-28s %s\n", name.c_str(), format_number(v, precision_).c_str()); }
  void text(const std::string& name, const std::string& v) { std::printf("%-28s %s\n", name.c_str(), v.c_str()); }
  void flag(const std::string& name, bool ok) { text(name, ok ? "yes" : "no"); }
  void count(const std::string& name, std::size_t n) { text(name, std::to_string(n)); }

 private:
  int precision_;
};

std::string source_name(const Settings& s) { return s.process.empty() ? s.machine_file : s.process; }

int run_analyze(const Settings& s) {
  const EpsilonMachine m = load(s);
  const AnatomyOptions o = options(s, 16);
  const AnatomyDecomposition a = anatomy::anatomy(m, o);
  const PresentPID pid = anatomy_pid_present(m, a, o);

  Report r(s.precision < 0 ? 5 : s.precision);
  r.text("process", source_name(s));
  r.text("estimator", std::string(estimator_name(o.estimator)));
  r.count("window", o.window);
  r.section("single observation");
  r.value("H[1]", a.H1);
  r.value("h_mu", a.h_mu);
  r.value("rho_mu", a.rho_mu);
  r.value("r_mu", a.r_mu);
  r.value("b_mu", a.b_mu);
  r.value("q_mu", a.q_mu);
  r.value("w_mu", a.w_mu);
  r.value("sigma_mu", a.sigma_mu);
  r.section("present-centric PID");
  r.value("redundancy", pid.atoms.redundancy);
  r.value("iota", pid.uniquity);
  r.value("unique past", pid.atoms.unique_source1);
  r.value("unique future", pid.atoms.unique_source2);
  r.value("synergy", pid.atoms.synergy);
  r.section("other");
  r.value("E", a.E);
  r.value("I_1", a.I1);
  r.value("R_1", a.R1);
  r.value("R_inf", a.R_inf);
  r.section("diagnostics");
  r.value("r_mu window mw-1", a.diagnostics.ephemeral_previous_window);
  r.value("r_mu window mw", a.diagnostics.ephemeral_window);
  r.value("E block sum", a.diagnostics.block_excess_entropy.from_entropy_rate);
  r.value("E block tail h_L - h_mu", a.diagnostics.block_excess_entropy.tail);
  if (o.estimator == Estimator::Limit) {
    r.count("r_mu horizon", a.diagnostics.ephemeral_limit.horizon);
    r.count("E horizon", a.diagnostics.excess_entropy_limit.horizon);
    r.count("PID horizon", pid.horizon);
  }
  r.value("redundancy - synergy - q_mu", pid.redundancy_minus_synergy - a.q_mu);
  r.flag("unique atoms symmetric", pid.symmetric);
  const bool converged = a.diagnostics.converged && pid.converged;
  r.flag("converged", converged);
  return converged ? kExitOk : kExitNotConverged;
}

std::vector<BlockMeasure> parse_measures(const std::string& list) {
  std::vector<BlockMeasure> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string name = list.substr(start, comma - start);
    try {
      out.push_back(parse_block_measure(name));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    start = comma + 1;
  }
  return out;
}

int run_curves(const Settings& s) {
  const EpsilonMachine m = load(s);
  const std::vector<BlockMeasure> measures = parse_measures(s.measures);
  const std::size_t L = s.max_block.value_or(12);
  if (L == 0) throw InputError("--max-block must be >= 1");
  const auto curves = block_curves(m, measures, L);
  std::fputs(curves_to_csv(curves, s.precision < 0 ? 6 : s.precision).c_str(), stdout);
  return kExitOk;
}

int run_ee(const Settings& s) {
  const EpsilonMachine m = load(s);
  const AnatomyOptions o = options(s, 16);
  const std::size_t L = s.max_block.value_or(14);
  const EEDecompositions d = ee_decompositions(m, L, o);
  const PastPID pid = anatomy_pid_past(m, o);

  Report r(s.precision < 0 ? 5 : s.precision);
  r.text("process", source_name(s));
  r.text("estimator", std::string(estimator_name(o.estimator)));
  r.count("max block", L);
  r.section("excess entropy");
  r.value("E", d.E);
  r.value("b_mu", d.b_mu);
  r.value("q_mu", d.q_mu);
  r.value("sigma_mu", d.sigma_mu);
  r.value("b_mu + q_mu + sigma_mu - E", d.e_from_anatomy - d.E);
  r.section("subextensive components");
  r.value("E_R", d.R.limit);
  r.value("E_B", d.B.limit);
  r.value("E_Q", d.Q.limit);
  r.value("E_W", d.W.limit);
  r.value("E_B + E_R - E", d.e_b_plus_r - d.E);
  r.value("-E_B - E_Q - E", d.e_neg_b_minus_q - d.E);
  r.value("(E_R - E_Q)/2 - E", d.e_half_r_minus_q - d.E);
  r.value("-(E_W + E_Q)/2 - E", d.e_neg_half_w_q - d.E);
  r.section("block fits at max block");
  const std::pair<const char*, const EEComponent*> comps[] = {{"R", &d.R}, {"B", &d.B}, {"Q", &d.Q}, {"W", &d.W}};
  for (const auto& [name, c] : comps) {
    r.value(std::string("E_") + name + " fit", c->fit.subextensive);
    r.value(std::string("  ") + name + " rate", c->fit.rate);
    r.value(std::string("  ") + name + " residual", c->fit.residual);
    r.value(std::string("  ") + name + " fit - limit", c->fit.subextensive - c->limit);
    r.flag(std::string("  ") + name + " fit converged", c->fit.converged);
  }
  r.value("fit E_B + E_R - E", d.fit_b_plus_r - d.E);
  r.value("fit -E_B - E_Q - E", d.fit_neg_b_minus_q - d.E);
  r.value("fit (E_R - E_Q)/2 - E", d.fit_half_r_minus_q - d.E);
  r.value("fit -(E_W + E_Q)/2 - E", d.fit_neg_half_w_q - d.E);
  r.section("past-centric PID");
  r.value("redundancy {X0}{X1:}", pid.atoms.redundancy);
  r.value("unique X0", pid.atoms.unique_source1);
  r.value("unique X1:", pid.atoms.unique_source2);
  r.value("synergy {X0,X1:}", pid.atoms.synergy);
  r.value("total - E", pid.atoms.total - d.E);
  const bool converged = d.limit_converged && pid.converged;
  r.flag("converged", converged);
  return converged ? kExitOk : kExitNotConverged;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(spec);
  in.imbue(std::locale::classic());
  in >> lo >> c1 >> hi >> c2 >> step;
  if (!in || c1 != ':' || c2 != ':' || in.peek() != std::char_traits<char>::eof()) {
    throw InputError("--param-grid must look like a:b:step");
  }
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi && step > 0.0)) throw InputError("--param-grid must satisfy 0 < a <= b < 1, step > 0");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

int run_sweep(const Settings& s) {
  if (s.family != "golden-mean") throw InputError("unknown --family " + s.family + " (supported: golden-mean)");
  const AnatomyOptions o = options(s, 16);
  const int prec = s.precision < 0 ? 6 : s.precision;
  bool converged = true;
  std::printf("p,h_mu,r_mu,b_mu,residual\n");
  for (double p : parse_grid(s.param_grid)) {
    const EpsilonMachine m = golden_mean_family(p);
    const AnatomyDecomposition a = anatomy::anatomy(m, o);
    converged = converged && a.diagnostics.converged;
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.3e", a.r_mu + a.b_mu - a.h_mu);
    std::printf("%s,%s,%s,%s,%s\n", format_number(p, prec).c_str(), format_number(a.h_mu, prec).c_str(),
                format_number(a.r_mu, prec).c_str(), format_number(a.b_mu, prec).c_str(), residual);
  }
  return converged ? kExitOk : kExitNotConverged;
}

int run_sample(const Settings& s) {
  const EpsilonMachine m = load(s);
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (m.alphabet_size() > 36) throw InputError("sample: alphabets beyond 36 symbols have no one-character form");
  if (s.length == 0) throw InputError("--length must be >= 1");
  const std::vector<Symbol> seq = sample_sequence(m, s.length, s.seed);
  std::string line;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    line += kDigits[seq[i]];
    if (line.size() == 80 || i + 1 == seq.size()) {
      line += '\n';
      std::fputs(line.c_str(), stdout);
      line.clear();
    }
  }
  return kExitOk;
}

void add_machine_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("machine", s.machine_file, "Machine description file");
  cmd->add_option("--process", s.process, "Built-in process: even, golden-mean, nrps, coin");
}

void add_anatomy_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--window", s.window, "Window mw on each side of X_0 (window estimator and diagnostics)");
  cmd->add_option("--max-block", s.max_block, "Largest block length L");
  cmd->add_option("--estimator", s.estimator, "limit (belief propagation) or window");
  cmd->add_option("--precision", s.precision, "Decimal places in the output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information anatomy of stationary processes"};
  app.require_subcommand(1);
  Settings s;

  auto* analyze = app.add_subcommand("analyze", "Decompose H[X_0] and print the present-centric PID");
  add_machine_options(analyze, s);
  add_anatomy_options(analyze, s);

  auto* curves = app.add_subcommand("curves", "Block curves as CSV");
  add_machine_options(curves, s);
  curves->add_option("--measures", s.measures, "Comma-separated subset of H,T,B,R,W,Q,I");
  curves->add_option("--max-block", s.max_block, "Largest block length L (default 12)");
  curves->add_option("--precision", s.precision, "Decimal places (default 6)");

  auto* ee = app.add_subcommand("ee", "Excess-entropy decompositions and the past-centric PID");
  add_machine_options(ee, s);
  add_anatomy_options(ee, s);

  auto* sweep = app.add_subcommand("sweep", "Entropy-rate breakdown across a process family");
  sweep->add_option("--family", s.family, "Process family (golden-mean)");
  sweep->add_option("--param-grid", s.param_grid, "Grid a:b:step");
  sweep->add_option("--window", s.window, "Window mw (window estimator)");
  sweep->add_option("--estimator", s.estimator, "limit or window");
  sweep->add_option("--precision", s.precision, "Decimal places (default 6)");

  auto* sample = app.add_subcommand("sample", "Seeded sample path, 80 symbols per line");
  add_machine_options(sample, s);
  sample->add_option("--length", s.length, "Number of symbols");
  sample->add_option("--seed", s.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*analyze) return run_analyze(s);
    if (*curves) return run_curves(s);
    if (*ee) return run_ee(s);
    if (*sweep) return run_sweep(s);
    if (*sample) return run_sample(s);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: internal consistency check failed: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
