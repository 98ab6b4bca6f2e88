#include "smgcheck/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "smgcheck/error.hpp"

namespace smgcheck {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct LineReader {
  std::string line;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line_no) + ": " + msg);
  }

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
    if (start == pos) fail("unexpected end of line");
    return line.substr(start, pos - start);
  }

  std::string quoted() {
    skip_ws();
    if (pos >= line.size() || line[pos] != '"') fail("expected quoted name");
    ++pos;
    std::string out;
    while (pos < line.size() && line[pos] != '"') {
      if (line[pos] == '\\' && pos + 1 < line.size()) ++pos;
      out += line[pos++];
    }
    if (pos >= line.size()) fail("unterminated quoted name");
    ++pos;
    return out;
  }

  std::uint64_t integer() {
    std::string w = word();
    std::uint64_t v = 0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) fail("expected integer, found '" + w + "'");
    return v;
  }

  double number(std::string_view w) {
    double v = 0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
      fail("expected number, found '" + std::string(w) + "'");
    }
    return v;
  }
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Smg read_model(std::istream& in) {
  GameBuilder b;
  std::map<std::uint64_t, PlayerId> players;
  std::map<std::uint64_t, StateId> states;
  std::map<std::pair<StateId, std::string>, std::size_t> action_index;
  struct PendingAction {
    StateId state;
    std::string label;
    Distribution dist;
  };
  std::vector<PendingAction> actions;
  struct PendingReward {
    std::string name;
    StateId state;
    std::string label;
    double value;
    std::size_t line_no;
  };
  std::vector<PendingReward> rewards;
  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> labels;
  std::optional<std::uint64_t> init;

  LineReader r;
  auto state_ref = [&](std::uint64_t raw) {
    auto it = states.find(raw);
    if (it == states.end()) {
      throw Error(ErrorKind::DanglingReference,
                  "line " + std::to_string(r.line_no) + ": undeclared state " + std::to_string(raw));
    }
    return it->second;
  };
  auto declare_action = [&](StateId s, const std::string& label) -> std::size_t {
    auto key = std::make_pair(s, label);
    auto it = action_index.find(key);
    if (it != action_index.end()) return it->second;
    actions.push_back({s, label, {}});
    action_index.emplace(key, actions.size() - 1);
    return actions.size() - 1;
  };

  while (std::getline(in, r.line)) {
    ++r.line_no;
    r.pos = 0;
    if (auto hash = r.line.find('#'); hash != std::string::npos) {
      // '#' inside a quoted name is kept.
      bool in_quote = false;
      for (std::size_t i = 0; i < r.line.size(); ++i) {
        if (r.line[i] == '\\' && in_quote) {
          ++i;
        } else if (r.line[i] == '"') {
          in_quote = !in_quote;
        } else if (r.line[i] == '#' && !in_quote) {
          r.line.resize(i);
          break;
        }
      }
    }
    if (r.at_end()) continue;
    std::string kw = r.word();
    if (kw == "player") {
      auto id = r.integer();
      std::string name = r.word();
      if (players.contains(id)) r.fail("player " + std::to_string(id) + " declared twice");
      players.emplace(id, b.add_player(name));
    } else if (kw == "state") {
      auto id = r.integer();
      auto owner = r.integer();
      if (states.contains(id)) r.fail("state " + std::to_string(id) + " declared twice");
      auto p = players.find(owner);
      if (p == players.end()) {
        throw Error(ErrorKind::DanglingReference, "line " + std::to_string(r.line_no) +
                                                      ": undeclared player " + std::to_string(owner));
      }
      states.emplace(id, b.add_state(p->second));
    } else if (kw == "action") {
      StateId s = state_ref(r.integer());
      std::string label = r.word();
      if (action_index.contains({s, label})) r.fail("action '" + label + "' declared twice");
      declare_action(s, label);
    } else if (kw == "trans") {
      StateId s = state_ref(r.integer());
      std::string label = r.word();
      auto& act = actions[declare_action(s, label)];
      if (!act.dist.empty()) r.fail("transitions for action '" + label + "' given twice");
      while (!r.at_end()) {
        std::string item = r.word();
        auto colon = item.find(':');
        if (colon == std::string::npos) r.fail("expected <target>:<prob>, found '" + item + "'");
        std::uint64_t raw = 0;
        auto res = std::from_chars(item.data(), item.data() + colon, raw);
        if (res.ec != std::errc() || res.ptr != item.data() + colon) r.fail("bad target in '" + item + "'");
        double p = r.number(std::string_view(item).substr(colon + 1));
        act.dist.push_back({state_ref(raw), p});
      }
    } else if (kw == "label") {
      std::string name = r.quoted();
      std::vector<std::uint64_t> members;
      while (!r.at_end()) members.push_back(r.integer());
      labels.emplace_back(std::move(name), std::move(members));
    } else if (kw == "reward") {
      std::string name = r.quoted();
      auto s = state_ref(r.integer());
      std::string label = r.word();
      double v = r.number(r.word());
      rewards.push_back({std::move(name), s, std::move(label), v, r.line_no});
    } else if (kw == "init") {
      init = r.integer();
    } else {
      r.fail("unknown declaration '" + kw + "'");
    }
    if (!r.at_end()) r.fail("trailing text");
  }

  std::vector<std::size_t> handles;
  handles.reserve(actions.size());
  for (auto& a : actions) handles.push_back(b.add_action(a.state, a.label, std::move(a.dist)));
  for (auto& [name, members] : labels) {
    StateSet set;
    for (auto raw : members) set.push_back(state_ref(raw));
    b.add_label(std::move(name), std::move(set));
  }
  for (auto& rw : rewards) {
    auto it = action_index.find({rw.state, rw.label});
    if (it == action_index.end()) {
      throw Error(ErrorKind::DanglingReference, "line " + std::to_string(rw.line_no) + ": reward '" +
                                                    rw.name + "' on undeclared action '" + rw.label + "'");
    }
    b.set_reward(rw.name, handles[it->second], rw.value);
  }
  if (init) b.set_initial(state_ref(*init));
  return std::move(b).build();
}

Smg read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_model(in);
}

void write_model(std::ostream& out, const Smg& g) {
  for (PlayerId p = 0; p < g.num_players(); ++p) out << "player " << p << ' ' << g.player_name(p) << '\n';
  for (StateId s = 0; s < g.num_states(); ++s) out << "state " << s << ' ' << g.owner(s) << '\n';
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      out << "trans " << s << ' ' << g.action_label(c);
      for (const auto& t : g.transitions(c)) out << ' ' << t.target << ':' << format_number(t.probability);
      out << '\n';
    }
  }
  for (const auto& [name, states] : g.labels()) {
    out << "label " << quote(name);
    for (StateId s : states) out << ' ' << s;
    out << '\n';
  }
  for (const auto& [name, r] : g.rewards()) {
    if (r.entries().empty()) {
      // keeps the structure declared on re-read
      out << "# reward " << quote(name) << " is zero everywhere\n";
      continue;
    }
    for (const auto& [c, v] : r.entries()) {
      out << "reward " << quote(name) << ' ' << g.state_of(c) << ' ' << g.action_label(c) << ' '
          << format_number(v) << '\n';
    }
  }
  if (g.initial()) out << "init " << *g.initial() << '\n';
}

void write_strategy_csv(std::ostream& out, const Smg& g, const Strategy& sigma) {
  out << "state,step,action\n";
  for (StateId s = 0; s < sigma.num_states(); ++s) {
    if (sigma.kind() == StrategyKind::Memoryless) {
      if (auto a = sigma.choice(s)) out << s << ",-," << g.action_label(g.choice(s, *a)) << '\n';
    } else {
      for (std::size_t r = sigma.horizon(); r >= 1; --r) {
        if (auto a = sigma.choice(s, r)) out << s << ',' << r << ',' << g.action_label(g.choice(s, *a)) << '\n';
      }
    }
  }
}

Strategy read_strategy_csv(std::istream& in, const Smg& g, const std::optional<Coalition>& coalition) {
  struct Row {
    StateId state;
    std::optional<std::size_t> step;
    std::size_t action;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "state,step,action") continue;
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorKind::SyntaxError, "strategy line " + std::to_string(line_no) + ": " + msg);
    };
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) fail("expected state,step,action");
    std::uint64_t s = 0;
    auto res = std::from_chars(line.data(), line.data() + c1, s);
    if (res.ec != std::errc() || res.ptr != line.data() + c1) fail("bad state");
    if (s >= g.num_states()) throw Error(ErrorKind::DanglingReference, "strategy names state " + std::to_string(s));
    std::string step = line.substr(c1 + 1, c2 - c1 - 1);
    std::string label = line.substr(c2 + 1);
    Row row{static_cast<StateId>(s), std::nullopt, 0};
    if (step != "-") {
      std::size_t k = 0;
      auto r2 = std::from_chars(step.data(), step.data() + step.size(), k);
      if (r2.ec != std::errc() || r2.ptr != step.data() + step.size() || k == 0) fail("bad step");
      row.step = k;
    }
    auto a = g.find_action(row.state, label);
    if (!a) {
      throw Error(ErrorKind::DisabledAction,
                  "state " + std::to_string(s) + " has no action '" + label + "'");
    }
    row.action = *a;
    rows.push_back(row);
  }

  Coalition co;
  if (coalition) {
    co = *coalition;
  } else {
    for (const auto& r : rows) co.push_back(g.owner(r.state));
  }
  co = make_coalition(std::move(co));

  std::size_t horizon = 0;
  bool any_memoryless = false;
  for (const auto& r : rows) {
    if (r.step) {
      horizon = std::max(horizon, *r.step);
    } else {
      any_memoryless = true;
    }
  }
  if (horizon > 0 && any_memoryless) {
    throw Error(ErrorKind::SyntaxError, "strategy mixes memoryless and step-indexed rows");
  }
  Strategy sigma = horizon > 0 ? Strategy::step_indexed(co, g.num_states(), horizon)
                               : Strategy::memoryless(co, g.num_states());
  for (const auto& r : rows) {
    if (r.step) {
      sigma.set(r.state, *r.step, r.action);
    } else {
      sigma.set(r.state, r.action);
    }
  }
  return sigma;
}

}  // namespace smgcheck
