#include <map>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smgcheck/engine.hpp"
#include "smgcheck/error.hpp"
#include "smgcheck/experiments.hpp"
#include "smgcheck/formula.hpp"
#include "smgcheck/model_io.hpp"
#include "smgcheck/oracle.hpp"
#include "smgcheck/trust.hpp"

namespace py = pybind11;
using namespace smgcheck;

namespace {

Smg model_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

std::string model_text(const Smg& g) {
  std::ostringstream out;
  write_model(out, g);
  return out.str();
}

std::string strategy_text(const Smg& g, const Strategy& sigma) {
  std::ostringstream out;
  write_strategy_csv(out, g, sigma);
  return out.str();
}

TrustParams trust_params(const py::dict& kwargs) {
  TrustParams p;
  for (const auto& [key, value] : kwargs) {
    apply_setting(p, py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
  }
  validate(p);
  return p;
}

py::dict result_dict(const Smg& g, const CheckResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["values"] = r.values.values;
  d["holds"] = r.holds;
  d["satisfying"] = r.satisfying;
  d["iterations"] = r.iterations;
  d["strategy"] = strategy_text(g, r.strategy);
  d["adversary"] = strategy_text(g, r.adversary);
  return d;
}

StateId initial_or_default(const Smg& g, std::optional<StateId> initial) {
  return initial.value_or(g.initial().value_or(0));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Model checking and strategy synthesis for turn-based stochastic multi-player games";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Smg>(m, "Game")
      .def_static("from_text", &model_from_text, py::arg("text"))
      .def_static("from_file", [](const std::string& path) { return read_model_file(path); }, py::arg("path"))
      .def_property_readonly("num_states", &Smg::num_states)
      .def_property_readonly("num_players", &Smg::num_players)
      .def_property_readonly("num_choices", &Smg::num_choices)
      .def_property_readonly("players", &Smg::player_names)
      .def_property_readonly("initial", &Smg::initial)
      .def_property_readonly("labels", [](const Smg& g) {
        std::map<std::string, StateSet> out(g.labels().begin(), g.labels().end());
        return out;
      })
      .def("owner", &Smg::owner, py::arg("state"))
      .def("actions", [](const Smg& g, StateId s) {
        std::vector<std::string> out;
        for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) out.push_back(g.action_label(c));
        return out;
      }, py::arg("state"))
      .def("to_text", &model_text);

  m.def("parse_formula", [](const std::string& text) { return format_formula(parse_formula(text)); },
        py::arg("text"), "Parses a property and returns its canonical text.");

  m.def(
      "check",
      [](const Smg& g, const std::string& property, std::optional<StateId> initial) {
        CheckResult r = check(g, initial_or_default(g, initial), parse_formula(property, context_of(g)));
        return result_dict(g, r);
      },
      py::arg("game"), py::arg("property"), py::arg("initial") = py::none());

  m.def(
      "evaluate_under",
      [](const Smg& g, const std::string& strategy_csv, const std::string& property,
         std::optional<StateId> initial) {
        std::istringstream in(strategy_csv);
        Strategy sigma = read_strategy_csv(in, g);
        CheckResult r =
            evaluate_under(g, sigma, initial_or_default(g, initial), parse_formula(property, context_of(g)));
        return result_dict(g, r);
      },
      py::arg("game"), py::arg("strategy"), py::arg("property"), py::arg("initial") = py::none());

  m.def(
      "brute_force_value",
      [](const Smg& g, const std::vector<std::string>& coalition, const std::string& target,
         std::optional<std::string> reward, const std::string& star, const std::string& optimum) {
        const StateSet* states = g.label(target);
        if (!states) throw Error(ErrorKind::UnknownLabel, "unknown label '" + target + "'");
        Star s = star == "0" ? Star::Zero : star == "inf" ? Star::Infinite : Star::Cumulative;
        oracle::Objective obj{*states, std::move(reward), s};
        return oracle::brute_force_value(g, resolve_coalition(g, coalition), obj,
                                         optimum == "min" ? Optimum::Min : Optimum::Max)
            .values;
      },
      py::arg("game"), py::arg("coalition"), py::arg("target"), py::arg("reward") = py::none(),
      py::arg("star") = "c", py::arg("optimum") = "max");

  py::class_<TrustGame>(m, "TrustGame")
      .def_readonly("game", &TrustGame::game)
      .def_readonly("initial", &TrustGame::initial)
      .def("describe", [](const TrustGame& tg, StateId s) { return describe(tg.states.at(s)); }, py::arg("state"));

  m.def("trust_game", [](const py::kwargs& kwargs) { return build_trust_game(trust_params(kwargs)); },
        "Builds the trust game; keyword arguments use the config-file keys.");

  m.def("attack_feasible", [](const py::kwargs& kwargs) { return attack_feasible(trust_params(kwargs)); });

  m.def(
      "fig1",
      [](const std::vector<std::pair<double, std::string>>& grid, unsigned k_min, unsigned k_max, unsigned jobs,
         const py::kwargs& kwargs) {
        Fig1Spec spec;
        spec.base = trust_params(kwargs);
        for (const auto& [alpha, td] : grid) {
          TrustParams p;
          apply_setting(p, "td", td);
          spec.grid.push_back({alpha, p.td.at(0)});
        }
        spec.k_min = k_min;
        spec.k_max = k_max;
        spec.jobs = jobs;
        py::list rows;
        for (const auto& r : run_fig1(spec).rows) {
          rows.append(py::dict(py::arg("alpha") = r.alpha, py::arg("td") = format_td(r.td), py::arg("k") = r.k,
                               py::arg("unpaid_max") = r.unpaid_max, py::arg("fraction") = r.fraction));
        }
        return rows;
      },
      py::arg("grid"), py::arg("k_min") = 1, py::arg("k_max") = 13, py::arg("jobs") = 1);

  m.def(
      "fig2",
      [](unsigned k_min, unsigned k_max, unsigned jobs, const py::kwargs& kwargs) {
        Fig2Spec spec;
        spec.base = trust_params(kwargs);
        spec.k_min = k_min;
        spec.k_max = k_max;
        spec.jobs = jobs;
        py::list rows;
        for (const auto& r : run_fig2(spec)) {
          rows.append(py::dict(py::arg("sharing") = std::string(to_string(r.sharing)), py::arg("k") = r.k,
                               py::arg("min_cost") = r.min_cost, py::arg("paid_count") = r.paid_count));
        }
        return rows;
      },
      py::arg("k_min") = 1, py::arg("k_max") = 13, py::arg("jobs") = 1);

  m.def("fig3", [](const py::kwargs& kwargs) {
    Fig3Spec spec;
    spec.base = trust_params(kwargs);
    py::list rows;
    for (const auto& r : run_fig3(spec).rows) {
      rows.append(py::dict(py::arg("pricing") = std::string(to_string(r.pricing)), py::arg("provider") = r.provider,
                           py::arg("received") = r.received, py::arg("paid") = r.paid, py::arg("unpaid") = r.unpaid));
    }
    return rows;
  });
}
