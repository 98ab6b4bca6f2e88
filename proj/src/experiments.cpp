#include "smgcheck/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <ostream>
#include <thread>

#include "smgcheck/error.hpp"
#include "smgcheck/formula.hpp"
#include "smgcheck/model_io.hpp"

namespace smgcheck {

namespace {

// Runs task(i) for i in [0, n) on up to `jobs` threads; results keep index order.
template <typename T>
std::vector<T> run_indexed(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& task) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < std::max(1u, jobs) && t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

CheckResult check_text(const Smg& g, StateId initial, const std::string& text) {
  return check(g, initial, parse_formula(text, context_of(g)));
}

std::string total_formula(const std::string& reward) {
  return "<<>> R{\"" + reward + "\"}min=? [ Fc \"got_k\" ]";
}

}  // namespace

double evaluate_profile(const TrustGame& tg, const Strategy& a, const Strategy& b, const std::string& reward) {
  Smg fixed = induced_game(induced_game(tg.game, a), b);
  return check_text(fixed, tg.initial, total_formula(reward)).value;
}

Fig1Result run_fig1(const Fig1Spec& spec) {
  if (spec.k_min == 0 || spec.k_min > spec.k_max) throw Error(ErrorKind::BadParameter, "empty k range");
  struct Task {
    Fig1Point point;
    unsigned k;
  };
  std::vector<Task> tasks;
  for (const auto& pt : spec.grid) {
    for (unsigned k = spec.k_min; k <= spec.k_max; ++k) tasks.push_back({pt, k});
  }
  struct Outcome {
    Fig1Row row;
    std::optional<StrategyDump> dump;
  };
  auto outcomes = run_indexed<Outcome>(tasks.size(), spec.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    TrustParams p = spec.base;
    p.alpha = t.point.alpha;
    p.td = {t.point.td};
    p.k = t.k;
    TrustGame tg = build_trust_game(p);
    CheckResult r = check_text(tg.game, tg.initial, kUnpaidMaxFormula);
    Outcome o{{t.point.alpha, t.point.td, t.k, r.value, r.value / t.k}, std::nullopt};
    if (spec.dump_k && *spec.dump_k == t.k) {
      std::string name = "alpha" + format_number(t.point.alpha) + "_td" + format_td(t.point.td) + "_k" +
                         std::to_string(t.k);
      o.dump = StrategyDump{std::move(name), std::move(tg), std::move(r.strategy)};
    }
    return o;
  });
  Fig1Result out;
  for (auto& o : outcomes) {
    out.rows.push_back(o.row);
    if (o.dump) out.dumps.push_back(std::move(*o.dump));
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const Fig1Row& a, const Fig1Row& b) {
    return std::tie(a.alpha, a.td, a.k) < std::tie(b.alpha, b.td, b.k);
  });
  return out;
}

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows) {
  out << "alpha,td,k,unpaid_max,fraction\n";
  for (const auto& r : rows) {
    out << format_number(r.alpha) << ',' << format_td(r.td) << ',' << r.k << ',' << format_number(r.unpaid_max)
        << ',' << format_number(r.fraction) << '\n';
  }
}

std::string_view to_string(Fig2Series s) {
  switch (s) {
    case Fig2Series::Automatic: return "automatic";
    case Fig2Series::StrategicOptimal: return "strategic-optimal";
    case Fig2Series::StrategicHeuristic: return "strategic-heuristic";
  }
  return "?";
}

std::vector<Fig2Row> run_fig2(const Fig2Spec& spec) {
  if (spec.k_min == 0 || spec.k_min > spec.k_max) throw Error(ErrorKind::BadParameter, "empty k range");
  struct Task {
    Fig2Series series;
    unsigned k;
  };
  std::vector<Task> tasks;
  for (auto s : spec.series) {
    for (unsigned k = spec.k_min; k <= spec.k_max; ++k) tasks.push_back({s, k});
  }
  auto rows = run_indexed<Fig2Row>(tasks.size(), spec.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    TrustParams p = spec.base;
    p.k = t.k;
    p.sharing = t.series == Fig2Series::Automatic ? Sharing::Automatic : Sharing::Strategic;
    TrustGame tg = build_trust_game(p);
    const Formula f = parse_formula(kCostMinFormula, context_of(tg.game));
    if (t.series == Fig2Series::StrategicHeuristic) {
      Strategy providers = heuristic_sharing_strategy(tg);
      CheckResult r = evaluate_under(tg.game, providers, tg.initial, f);
      return Fig2Row{t.series, t.k, r.value, evaluate_profile(tg, providers, r.strategy, "paid")};
    }
    CheckResult r = check(tg.game, tg.initial, f);
    return Fig2Row{t.series, t.k, r.value, evaluate_profile(tg, r.strategy, r.adversary, "paid")};
  });
  std::sort(rows.begin(), rows.end(), [](const Fig2Row& a, const Fig2Row& b) {
    return std::tie(a.sharing, a.k) < std::tie(b.sharing, b.k);
  });
  return rows;
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
  out << "sharing,k,min_cost,paid_count\n";
  for (const auto& r : rows) {
    out << to_string(r.sharing) << ',' << r.k << ',' << format_number(r.min_cost) << ','
        << format_number(r.paid_count) << '\n';
  }
}

Fig3Result run_fig3(const Fig3Spec& spec) {
  Fig3Result out;
  for (Pricing pricing : spec.pricings) {
    TrustParams p = spec.base;
    p.pricing = pricing;
    TrustGame tg = build_trust_game(p);
    CheckResult r = check_text(tg.game, tg.initial, kCostMinFormula);
    out.min_cost.push_back(r.value);
    for (unsigned i = 1; i <= p.n_providers; ++i) {
      auto value = [&](const char* base) {
        return evaluate_profile(tg, r.strategy, r.adversary, std::string(base) + "_" + std::to_string(i));
      };
      out.rows.push_back({pricing, i, value("received"), value("paid"), value("unpaid")});
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const Fig3Row& a, const Fig3Row& b) {
    return std::tie(a.pricing, a.provider) < std::tie(b.pricing, b.provider);
  });
  return out;
}

void write_fig3_csv(std::ostream& out, const std::vector<Fig3Row>& rows) {
  out << "pricing,provider,received,paid,unpaid\n";
  for (const auto& r : rows) {
    out << to_string(r.pricing) << ',' << r.provider << ',' << format_number(r.received) << ','
        << format_number(r.paid) << ',' << format_number(r.unpaid) << '\n';
  }
}

void write_trust_states_csv(std::ostream& out, const TrustGame& tg) {
  out << "state,owner,description\n";
  for (StateId s = 0; s < tg.game.num_states(); ++s) {
    out << s << ',' << tg.game.player_name(tg.game.owner(s)) << ",\"" << describe(tg.states[s]) << "\"\n";
  }
}

}  // namespace smgcheck
