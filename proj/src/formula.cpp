#include "smgcheck/formula.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "smgcheck/error.hpp"
#include "smgcheck/model_io.hpp"

namespace smgcheck {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Le: return "<=";
    case Relation::Lt: return "<";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
  }
  return "?";
}

std::string_view to_string(Star s) {
  switch (s) {
    case Star::Zero: return "F0";
    case Star::Cumulative: return "Fc";
    case Star::Infinite: return "Finf";
  }
  return "?";
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula formula() {
    Formula f;
    expect("<<");
    skip_ws();
    if (!peek(">>")) {
      f.coalition.push_back(name());
      while (accept(",")) f.coalition.push_back(name());
    }
    expect(">>");
    skip_ws();
    if (peek("P")) {
      ++pos_;
      f.query = query();
      expect("[");
      expect("F");
      if (accept("<=")) f.step_bound = integer();
      f.target = quoted();
      expect("]");
    } else if (peek("R")) {
      ++pos_;
      expect("{");
      f.reward = quoted();
      expect("}");
      f.query = query();
      expect("[");
      f.star = star();
      f.target = quoted();
      expect("]");
    } else {
      fail("'P' or 'R'");
    }
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view lit) const { return text_.substr(pos_).starts_with(lit); }

  bool accept(std::string_view lit) {
    skip_ws();
    if (!peek(lit)) return false;
    pos_ += lit.size();
    return true;
  }

  void expect(std::string_view lit) {
    if (!accept(lit)) fail("'" + std::string(lit) + "'");
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found;
    if (pos_ >= text_.size()) {
      found = "end of input";
    } else {
      std::string snippet;
      for (std::size_t i = pos_; i < text_.size() && snippet.size() < 8; ++i) {
        unsigned char c = static_cast<unsigned char>(text_[i]);
        if (std::isprint(c)) {
          snippet += static_cast<char>(c);
        } else {
          static constexpr char hex[] = "0123456789abcdef";
          snippet += "\\x";
          snippet += hex[c >> 4];
          snippet += hex[c & 15];
        }
      }
      found = "'" + snippet + "'";
    }
    throw SyntaxError(pos_, expected, found);
  }

  std::string name() {
    skip_ws();
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("player name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("quoted name");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("closing '\"'");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("escaped character");
        c = text_[pos_++];
      }
      out += c;
    }
    return out;
  }

  unsigned integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("step bound");
    unsigned v = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("step bound that fits in 32 bits");
    }
    return v;
  }

  double number() {
    skip_ws();
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    const char* first = text_.data() + start;
    if (*first == '+') ++first;
    double v = 0;
    auto res = std::from_chars(first, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("number in double range");
    }
    return v;
  }

  Query query() {
    skip_ws();
    if (accept("max=?")) return Optimum::Max;
    if (accept("min=?")) return Optimum::Min;
    Relation rel;
    if (accept("<=")) {
      rel = Relation::Le;
    } else if (accept(">=")) {
      rel = Relation::Ge;
    } else if (accept("<")) {
      rel = Relation::Lt;
    } else if (accept(">")) {
      rel = Relation::Gt;
    } else {
      fail("'max=?', 'min=?' or a comparison");
    }
    return Bound{rel, number()};
  }

  Star star() {
    skip_ws();
    if (accept("Finf")) return Star::Infinite;
    if (accept("Fc")) return Star::Cumulative;
    if (accept("F0")) return Star::Zero;
    fail("'F0', 'Fc' or 'Finf'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Formula parse_formula(std::string_view text, const FormulaContext& context) {
  Formula f = Parser(text).formula();

  if (context.players) {
    for (const auto& p : f.coalition) {
      if (!context.players->contains(p)) throw Error(ErrorKind::UnknownPlayer, "'" + p + "'");
    }
  }
  if (context.labels && !context.labels->contains(f.target)) {
    throw Error(ErrorKind::UnknownLabel, "'" + f.target + "'");
  }
  if (f.reward && context.rewards && !context.rewards->contains(*f.reward)) {
    throw Error(ErrorKind::UnknownReward, "'" + *f.reward + "'");
  }
  if (const auto* b = std::get_if<Bound>(&f.query)) {
    if (f.is_reward()) {
      if (!(b->threshold >= 0.0) || !std::isfinite(b->threshold)) {
        throw Error(ErrorKind::BadBound, "reward bound must be finite and nonnegative");
      }
    } else if (!(b->threshold >= 0.0 && b->threshold <= 1.0)) {
      throw Error(ErrorKind::BadBound, "probability bound outside [0,1]");
    }
  }
  return f;
}

std::string format_formula(const Formula& f) {
  std::string out = "<<";
  for (std::size_t i = 0; i < f.coalition.size(); ++i) {
    if (i) out += ',';
    out += f.coalition[i];
  }
  out += ">> ";
  if (f.reward) {
    out += "R{" + quote(*f.reward) + "}";
  } else {
    out += "P";
  }
  if (const auto* b = std::get_if<Bound>(&f.query)) {
    out += std::string(to_string(b->relation)) + format_number(b->threshold);
  } else {
    out += std::get<Optimum>(f.query) == Optimum::Max ? "max=?" : "min=?";
  }
  out += " [ ";
  if (f.reward) {
    out += std::string(to_string(f.star)) + " ";
  } else {
    out += "F";
    if (f.step_bound) out += "<=" + std::to_string(*f.step_bound);
    out += " ";
  }
  out += quote(f.target) + " ]";
  return out;
}

}  // namespace smgcheck
