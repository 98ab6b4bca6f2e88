#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smgcheck/engine.hpp"
#include "smgcheck/error.hpp"
#include "smgcheck/experiments.hpp"
#include "smgcheck/formula.hpp"
#include "smgcheck/model_io.hpp"
#include "smgcheck/trust.hpp"

namespace fs = std::filesystem;
using namespace smgcheck;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

const char* const kTrustKeys[] = {"n_providers", "alpha",      "td",        "st", "c",       "c_min",
                                  "c_max",       "t_prime",    "trust_init", "trust_max", "k",
                                  "pricing",     "sharing",    "max_states"};

struct TrustOptions {
  std::string config;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key=value file with trust-game parameters")->check(CLI::ExistingFile);
    for (const char* key : kTrustKeys) {
      app->add_option(std::string("--") + key, values[key], std::string("trust-game parameter ") + key);
    }
  }

  bool any() const {
    if (!config.empty()) return true;
    for (const auto& [k, v] : values) {
      if (!v.empty()) return true;
    }
    return false;
  }

  TrustParams params() const {
    TrustParams p;
    if (!config.empty()) {
      std::ifstream in(config);
      p = read_trust_config(in, p);
    }
    for (const char* key : kTrustKeys) {
      const auto& v = values.at(key);
      if (!v.empty()) apply_setting(p, key, v);
    }
    validate(p);
    return p;
  }
};

struct Loaded {
  Smg game;
  StateId initial = 0;
  std::optional<TrustGame> trust;
};

Loaded load(const std::string& model, const TrustOptions& trust) {
  if (!model.empty()) {
    if (trust.any()) throw Error(ErrorKind::BadParameter, "--model cannot be combined with trust-game parameters");
    Loaded out{read_model_file(model), 0, std::nullopt};
    out.initial = out.game.initial().value_or(0);
    return out;
  }
  TrustGame tg = build_trust_game(trust.params());
  Loaded out{tg.game, tg.initial, std::nullopt};
  out.trust = std::move(tg);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

template <typename F>
void with_output(const std::string& path, F write) {
  if (path.empty() || path == "-") {
    write(std::cout);
  } else {
    auto out = open_out(path);
    write(out);
  }
}

struct CheckOptions {
  std::string model;
  std::string property;
  long initial = -1;
  std::string values_out;
  std::string strategy_out;
  std::string adversary_out;
  std::string strategy_in;
  TrustOptions trust;

  void attach(CLI::App* app, bool with_strategy_in) {
    app->add_option("-m,--model", model, "explicit-state model file")->check(CLI::ExistingFile);
    app->add_option("-p,--property", property, "rPATL property")->required();
    app->add_option("--initial", initial, "initial state (default: the model's init)");
    app->add_option("--values-out", values_out, "write the value vector as CSV");
    app->add_option("--strategy-out", strategy_out, "write the coalition witness as CSV");
    app->add_option("--adversary-out", adversary_out, "write the adversary strategy as CSV");
    if (with_strategy_in) {
      app->add_option("-s,--strategy", strategy_in, "strategy CSV to fix before checking")
          ->required()
          ->check(CLI::ExistingFile);
    }
    trust.attach(app);
  }
};

int report(const Smg& g, const CheckResult& r, const CheckOptions& o) {
  std::cout << "value: " << format_number(r.value) << '\n';
  if (r.holds) std::cout << "result: " << (*r.holds ? "true" : "false") << '\n';
  std::cout << "iterations: " << r.iterations << '\n';
  if (!o.values_out.empty()) with_output(o.values_out, [&](std::ostream& out) { write_values_csv(out, r.values); });
  if (!o.strategy_out.empty()) {
    with_output(o.strategy_out, [&](std::ostream& out) { write_strategy_csv(out, g, r.strategy); });
  }
  if (!o.adversary_out.empty()) {
    with_output(o.adversary_out, [&](std::ostream& out) { write_strategy_csv(out, g, r.adversary); });
  }
  return r.holds && !*r.holds ? kExitFalse : kExitOk;
}

StateId initial_of(const Loaded& l, long requested) {
  if (requested < 0) return l.initial;
  if (static_cast<std::size_t>(requested) >= l.game.num_states()) {
    throw Error(ErrorKind::BadParameter, "initial state " + std::to_string(requested) + " out of range");
  }
  return static_cast<StateId>(requested);
}

int cmd_check(const CheckOptions& o, bool synth) {
  Loaded l = load(o.model, o.trust);
  Formula f = parse_formula(o.property, context_of(l.game));
  CheckResult r = check(l.game, initial_of(l, o.initial), f);
  std::cout << "states: " << l.game.num_states() << '\n';
  if (synth && o.strategy_out.empty()) {
    int code = report(l.game, r, o);
    write_strategy_csv(std::cout, l.game, r.strategy);
    return code;
  }
  return report(l.game, r, o);
}

int cmd_implement(const CheckOptions& o) {
  Loaded l = load(o.model, o.trust);
  std::ifstream in(o.strategy_in);
  Strategy sigma = read_strategy_csv(in, l.game);
  Formula f = parse_formula(o.property, context_of(l.game));
  CheckResult r = evaluate_under(l.game, sigma, initial_of(l, o.initial), f);
  std::cout << "states: " << l.game.num_states() << '\n';
  return report(l.game, r, o);
}

std::vector<Fig1Point> parse_grid(const std::vector<std::string>& items) {
  std::vector<Fig1Point> grid;
  for (const auto& item : items) {
    auto slash = item.find('/');
    if (slash == std::string::npos) throw Error(ErrorKind::BadParameter, "grid entry '" + item + "' is not alpha/td");
    TrustParams p;
    apply_setting(p, "alpha", item.substr(0, slash));
    apply_setting(p, "td", item.substr(slash + 1));
    grid.push_back({p.alpha, p.td.at(0)});
  }
  return grid;
}

int run(int argc, char** argv) {
  CLI::App app{"Model checker and strategy synthesizer for turn-based stochastic multi-player games"};
  app.require_subcommand(1);

  CheckOptions check_opts, synth_opts, impl_opts;
  auto* check_cmd = app.add_subcommand("check", "check an rPATL property");
  check_opts.attach(check_cmd, false);
  auto* synth_cmd = app.add_subcommand("synth", "check a property and export the witness strategy");
  synth_opts.attach(synth_cmd, false);
  auto* impl_cmd = app.add_subcommand("implement", "fix a strategy, then check a property on the induced game");
  impl_opts.attach(impl_cmd, true);

  TrustOptions fig_trust[3];
  std::vector<std::string> grid{"0.5/2", "0.5/inf", "0.8/2", "0.8/inf"};
  unsigned k_min = 1, k_max = 13, jobs = 1, dump_k = 13;
  std::string out_path, dump_dir;
  auto* fig1 = app.add_subcommand("fig1", "maximum unpaid services per configuration (CSV)");
  fig1->add_option("--grid", grid, "alpha/td configurations")->delimiter(',');
  fig1->add_option("--k-min", k_min);
  fig1->add_option("--k-max", k_max);
  fig1->add_option("--jobs", jobs, "worker threads");
  fig1->add_option("-o,--out", out_path, "CSV output (default stdout)");
  fig1->add_option("--dump-k", dump_k, "k at which requester strategies are dumped");
  fig1->add_option("--dump-dir", dump_dir, "directory for strategy dumps");
  fig_trust[0].attach(fig1);

  std::vector<std::string> series{"automatic", "strategic-optimal", "strategic-heuristic"};
  auto* fig2 = app.add_subcommand("fig2", "minimum cost of k services per sharing scheme (CSV)");
  fig2->add_option("--series", series, "sharing series")
      ->delimiter(',')
      ->check(CLI::IsMember({"automatic", "strategic-optimal", "strategic-heuristic"}));
  fig2->add_option("--k-min", k_min);
  fig2->add_option("--k-max", k_max);
  fig2->add_option("--jobs", jobs, "worker threads");
  fig2->add_option("-o,--out", out_path, "CSV output (default stdout)");
  fig_trust[1].attach(fig2);

  auto* fig3 = app.add_subcommand("fig3", "per-provider distribution of requests per pricing scheme (CSV)");
  fig3->add_option("-o,--out", out_path, "CSV output (default stdout)");
  fig_trust[2].attach(fig3);

  TrustOptions export_trust;
  auto* export_cmd = app.add_subcommand("export-model", "write a trust game in the explicit-state format");
  export_cmd->add_option("-o,--out", out_path, "model output (default stdout)");
  std::string states_out;
  export_cmd->add_option("--states-out", states_out, "CSV describing each state");
  export_trust.attach(export_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*check_cmd) return cmd_check(check_opts, false);
  if (*synth_cmd) return cmd_check(synth_opts, true);
  if (*impl_cmd) return cmd_implement(impl_opts);
  if (*fig1) {
    Fig1Spec spec{fig_trust[0].params(), parse_grid(grid), k_min, k_max, dump_k, jobs};
    if (dump_dir.empty()) spec.dump_k.reset();
    Fig1Result r = run_fig1(spec);
    with_output(out_path, [&](std::ostream& out) { write_fig1_csv(out, r.rows); });
    if (!dump_dir.empty()) {
      fs::create_directories(dump_dir);
      for (const auto& d : r.dumps) {
        auto s = open_out((fs::path(dump_dir) / (d.name + "_strategy.csv")).string());
        write_strategy_csv(s, d.game.game, d.strategy);
        auto st = open_out((fs::path(dump_dir) / (d.name + "_states.csv")).string());
        write_trust_states_csv(st, d.game);
      }
    }
    return kExitOk;
  }
  if (*fig2) {
    Fig2Spec spec;
    spec.base = fig_trust[1].params();
    spec.series.clear();
    for (const auto& s : series) {
      spec.series.push_back(s == "automatic"           ? Fig2Series::Automatic
                            : s == "strategic-optimal" ? Fig2Series::StrategicOptimal
                                                       : Fig2Series::StrategicHeuristic);
    }
    spec.k_min = k_min;
    spec.k_max = k_max;
    spec.jobs = jobs;
    auto rows = run_fig2(spec);
    with_output(out_path, [&](std::ostream& out) { write_fig2_csv(out, rows); });
    return kExitOk;
  }
  if (*fig3) {
    Fig3Spec spec;
    spec.base = fig_trust[2].params();
    auto r = run_fig3(spec);
    with_output(out_path, [&](std::ostream& out) { write_fig3_csv(out, r.rows); });
    return kExitOk;
  }
  if (*export_cmd) {
    TrustGame tg = build_trust_game(export_trust.params());
    with_output(out_path, [&](std::ostream& out) { write_model(out, tg.game); });
    if (!states_out.empty()) {
      auto out = open_out(states_out);
      write_trust_states_csv(out, tg);
    }
    return kExitOk;
  }
  return kExitUsage;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::StateExplosion:
    case ErrorKind::TooLarge:
    case ErrorKind::SingularSystem:
      return kExitSolver;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
