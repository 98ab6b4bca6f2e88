#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "smgcheck/error.hpp"
#include "smgcheck/model_io.hpp"
#include "smgcheck/smg.hpp"

namespace smgcheck::testing {

/// Kind of the Error thrown by f, or nullopt when f returns normally.
template <typename F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline Smg parse_model(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

/// One state of p1 choosing between a: 0.3 to goal and b: 0.7 to goal, with
/// the rest going to an absorbing sink.
inline const char* const kMicroGame = R"(player 0 p1
player 1 p2
state 0 0
state 1 1
state 2 1
trans 0 a 1:0.3 2:0.7
trans 0 b 1:0.7 2:0.3
label "goal" 1
init 0
)";

/// One state whose action earns 1 and reaches the goal with probability 0.5.
inline const char* const kGeometric = R"(player 0 p1
state 0 0
state 1 0
trans 0 a 0:0.5 1:0.5
label "goal" 1
reward "r" 0 a 1
init 0
)";

}  // namespace smgcheck::testing
