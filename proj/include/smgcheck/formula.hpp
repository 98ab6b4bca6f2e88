#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smgcheck {

enum class Relation { Le, Lt, Ge, Gt };
enum class Optimum { Max, Min };
/// Reward assigned to paths that never reach the target: zero, cumulated, infinite.
enum class Star { Zero, Cumulative, Infinite };

struct Bound {
  Relation relation;
  double threshold;
  bool operator==(const Bound&) const = default;
};

using Query = std::variant<Bound, Optimum>;

/// One coalition operator over an atomic target:
///   <<C>> P query [ F [<=n] "target" ]   or   <<C>> R{"r"} query [ F* "target" ]
struct Formula {
  std::vector<std::string> coalition;
  /// Reward structure name for R formulas, empty optional for P formulas.
  std::optional<std::string> reward;
  Query query;
  std::optional<unsigned> step_bound;  // P only
  Star star = Star::Cumulative;        // R only
  std::string target;

  bool is_reward() const { return reward.has_value(); }
  bool operator==(const Formula&) const = default;
};

/// Names a formula may refer to. An empty optional disables that check.
struct FormulaContext {
  std::optional<std::set<std::string, std::less<>>> players;
  std::optional<std::set<std::string, std::less<>>> labels;
  std::optional<std::set<std::string, std::less<>>> rewards;
};

/// Throws SyntaxError with the byte offset, or Error for unknown names and
/// out-of-range bounds.
Formula parse_formula(std::string_view text, const FormulaContext& context = {});
std::string format_formula(const Formula& f);

std::string_view to_string(Relation r);
std::string_view to_string(Star s);

}  // namespace smgcheck
