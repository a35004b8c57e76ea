#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qbc/mip.hpp"

namespace qbc {
namespace {

constexpr std::size_t kLineWidth = 78;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Accumulates tokens into lines no wider than kLineWidth; continuation lines
// are indented.
class Wrapper {
 public:
  explicit Wrapper(std::string& out) : out_(out) {}
  void start(const std::string& head) { line_ = " " + head; }
  void token(const std::string& t) {
    if (line_.size() + 1 + t.size() > kLineWidth && line_.size() > 4) {
      out_ += line_ + "\n";
      line_ = "   ";
    }
    line_ += " " + t;
  }
  void finish() {
    out_ += line_ + "\n";
    line_.clear();
  }

 private:
  std::string& out_;
  std::string line_;
};

void signed_term(Wrapper& w, double coef, const std::string& name, bool first) {
  const char* sign = coef < 0 ? "-" : "+";
  const double mag = std::abs(coef);
  std::string body = mag == 1.0 ? name : num(mag) + " " + name;
  if (first) {
    w.token(coef < 0 ? "- " + body : body);
  } else {
    w.token(std::string(sign) + " " + body);
  }
}

const char* rel_text(Relation r) {
  switch (r) {
    case Relation::Le: return "<=";
    case Relation::Eq: return "=";
    case Relation::Ge: return ">=";
  }
  return "=";
}

// ---- reader ----

enum class Tok { Name, Number, Plus, Minus, Rel, Colon, LBracket, RBracket, Star, Caret, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  std::size_t line = 0;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.!\"#$%&()/,;?@'`{}|~").find(c) !=
                                                            std::string_view::npos;
}

std::vector<Token> tokenize_line(const std::string& s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') break;
    Token t;
    t.line = line;
    if (c == '+' || c == '-') {
      t.kind = c == '+' ? Tok::Plus : Tok::Minus;
      t.text = c;
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::size_t j = i + 1;
      if (j < s.size() && (s[j] == '=' || s[j] == '<' || s[j] == '>')) ++j;
      t.kind = Tok::Rel;
      t.text = s.substr(i, j - i);
      if (t.text == "=<") t.text = "<=";
      if (t.text == "=>") t.text = ">=";
      if (t.text == "<") t.text = "<=";
      if (t.text == ">") t.text = ">=";
      if (t.text == "==") t.text = "=";
      i = j;
    } else if (c == ':') {
      t.kind = Tok::Colon;
      ++i;
    } else if (c == '[') {
      t.kind = Tok::LBracket;
      ++i;
    } else if (c == ']') {
      t.kind = Tok::RBracket;
      ++i;
    } else if (c == '*') {
      t.kind = Tok::Star;
      ++i;
    } else if (c == '^') {
      t.kind = Tok::Caret;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
      if (ec != std::errc()) throw ParseError(line, "bad number near '" + s.substr(i, 12) + "'");
      t.kind = Tok::Number;
      t.value = v;
      i = static_cast<std::size_t>(p - s.data());
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < s.size() && name_char(s[j])) ++j;
      t.kind = Tok::Name;
      t.text = s.substr(i, j - i);
      i = j;
    } else {
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

enum class Section { None, Objective, Constraints, Bounds, Binary, General, End };

std::optional<std::pair<Section, Sense>> section_header(const std::string& line) {
  std::string l = lower(line);
  while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
  std::size_t a = l.find_first_not_of(" \t");
  if (a == std::string::npos) return std::nullopt;
  l = l.substr(a);
  if (l == "maximize" || l == "maximum" || l == "max") return {{Section::Objective, Sense::Maximize}};
  if (l == "minimize" || l == "minimum" || l == "min") return {{Section::Objective, Sense::Minimize}};
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return {{Section::Constraints, Sense::Maximize}};
  if (l == "bounds" || l == "bound") return {{Section::Bounds, Sense::Maximize}};
  if (l == "binary" || l == "binaries" || l == "bin") return {{Section::Binary, Sense::Maximize}};
  if (l == "general" || l == "generals" || l == "gen") return {{Section::General, Sense::Maximize}};
  if (l == "end") return {{Section::End, Sense::Maximize}};
  return std::nullopt;
}

struct RawExpr {
  std::vector<std::pair<std::string, double>> linear;
  std::vector<std::tuple<std::string, std::string, double>> quad;
};

class Cursor {
 public:
  explicit Cursor(std::vector<Token> t) : toks_(std::move(t)) {}
  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const {
    static const Token end;
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : end;
  }
  Token next() {
    if (done()) throw ParseError(toks_.empty() ? 0 : toks_.back().line, "unexpected end of section");
    return toks_[pos_++];
  }
  std::size_t line() const { return done() ? (toks_.empty() ? 0 : toks_.back().line) : toks_[pos_].line; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Optional `name:` label.
std::string label(Cursor& c) {
  if (c.peek().kind == Tok::Name && c.peek(1).kind == Tok::Colon) {
    std::string n = c.next().text;
    c.next();
    return n;
  }
  return {};
}

// Linear terms (and `[ ... ]` products) up to a relation or the end.
RawExpr expression(Cursor& c, bool objective) {
  RawExpr e;
  while (!c.done() && c.peek().kind != Tok::Rel) {
    double sign = 1.0;
    while (c.peek().kind == Tok::Plus || c.peek().kind == Tok::Minus) {
      if (c.next().kind == Tok::Minus) sign = -sign;
    }
    if (c.peek().kind == Tok::LBracket) {
      if (objective) throw ParseError(c.line(), "quadratic objectives are not supported");
      c.next();
      const double scale = sign;
      while (c.peek().kind != Tok::RBracket) {
        double s = 1.0;
        while (c.peek().kind == Tok::Plus || c.peek().kind == Tok::Minus) {
          if (c.next().kind == Tok::Minus) s = -s;
        }
        double coef = 1.0;
        if (c.peek().kind == Tok::Number) coef = c.next().value;
        Token a = c.next();
        if (a.kind != Tok::Name) throw ParseError(a.line, "expected a variable in a quadratic term");
        if (c.peek().kind == Tok::Caret) {
          c.next();
          Token two = c.next();
          if (two.kind != Tok::Number || two.value != 2) throw ParseError(two.line, "only ^2 is supported");
          e.quad.emplace_back(a.text, a.text, scale * s * coef);
          continue;
        }
        Token star = c.next();
        if (star.kind != Tok::Star) throw ParseError(star.line, "expected '*' in a quadratic term");
        Token b = c.next();
        if (b.kind != Tok::Name) throw ParseError(b.line, "expected a variable in a quadratic term");
        e.quad.emplace_back(a.text, b.text, scale * s * coef);
      }
      c.next();
      continue;
    }
    double coef = 1.0;
    if (c.peek().kind == Tok::Number) {
      coef = c.next().value;
      if (c.peek().kind != Tok::Name) {
        // A bare constant in the objective; ignored as it does not change the argmax.
        if (objective) continue;
        throw ParseError(c.line(), "constants are only allowed on the right-hand side");
      }
    }
    Token v = c.next();
    if (v.kind != Tok::Name) throw ParseError(v.line, "expected a variable name");
    e.linear.emplace_back(v.text, sign * coef);
    if (objective && c.peek().kind == Tok::Name && c.peek(1).kind == Tok::Colon) break;
  }
  return e;
}

double signed_number(Cursor& c) {
  double sign = 1.0;
  while (c.peek().kind == Tok::Plus || c.peek().kind == Tok::Minus) {
    if (c.next().kind == Tok::Minus) sign = -sign;
  }
  Token t = c.next();
  if (t.kind == Tok::Name) {
    std::string l = lower(t.text);
    if (l == "inf" || l == "infinity") return sign * std::numeric_limits<double>::infinity();
  }
  if (t.kind != Tok::Number) throw ParseError(t.line, "expected a number");
  return sign * t.value;
}

bool is_bound_number(const Cursor& c) {
  std::size_t k = 0;
  while (c.peek(k).kind == Tok::Plus || c.peek(k).kind == Tok::Minus) ++k;
  const Token& t = c.peek(k);
  if (t.kind == Tok::Number) return true;
  if (t.kind == Tok::Name) {
    std::string l = lower(t.text);
    return l == "inf" || l == "infinity";
  }
  return false;
}

Relation relation(const std::string& s) {
  if (s == "<=") return Relation::Le;
  if (s == ">=") return Relation::Ge;
  return Relation::Eq;
}

struct RawConstraint {
  std::string name;
  RawExpr expr;
  Relation rel;
  double rhs;
};

struct RawBound {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

}  // namespace

std::string emit_lp(const MipInstance& mip, const LpOptions& options) {
  if (!mip.is_linear() && !options.allow_quadratic) {
    throw MipError("instance has bilinear constraints; LP text needs the quadratic extension enabled");
  }
  const auto& vars = mip.variables();
  std::string out;
  out += "\\ " + to_string(mip.metadata.model) + " gamma " + mip.metadata.gamma.to_string() + " bounds " +
         mip.metadata.bounds.to_string();
  if (mip.metadata.theta) out += " theta " + mip.metadata.theta->to_string();
  out += "\n";
  out += mip.sense() == Sense::Maximize ? "Maximize\n" : "Minimize\n";
  Wrapper w(out);
  w.start("obj:");
  if (mip.objective().empty()) {
    if (vars.empty()) throw MipError("cannot emit an instance without variables");
    w.token("0 " + vars.front().name);
  }
  bool first = true;
  for (const auto& t : mip.objective()) {
    signed_term(w, t.coef, vars[t.var].name, first);
    first = false;
  }
  w.finish();

  out += "Subject To\n";
  for (const auto& c : mip.constraints()) {
    w.start(c.name + ":");
    first = true;
    for (const auto& t : c.linear) {
      signed_term(w, t.coef, vars[t.var].name, first);
      first = false;
    }
    if (!c.quad.empty()) {
      w.token(first ? "[" : "+ [");
      bool qfirst = true;
      for (const auto& q : c.quad) {
        signed_term(w, q.coef, vars[q.a].name + " * " + vars[q.b].name, qfirst);
        qfirst = false;
      }
      w.token("]");
      first = false;
    }
    if (first) w.token("0 " + vars.front().name);
    w.token(rel_text(c.rel));
    w.token(num(c.rhs));
    w.finish();
  }

  out += "Bounds\n";
  for (const auto& v : vars) {
    const bool lo_inf = std::isinf(v.lower), hi_inf = std::isinf(v.upper);
    if (lo_inf && hi_inf) {
      out += " " + v.name + " free\n";
    } else if (hi_inf) {
      out += " " + v.name + " >= " + num(v.lower) + "\n";
    } else {
      out += " " + (lo_inf ? std::string("-inf") : num(v.lower)) + " <= " + v.name + " <= " + num(v.upper) + "\n";
    }
  }
  for (auto [kind, title] : {std::pair{VarKind::Binary, "Binary"}, std::pair{VarKind::Integer, "General"}}) {
    if (mip.count(kind) == 0) continue;
    out += std::string(title) + "\n";
    bool any = false;
    for (const auto& v : vars) {
      if (v.kind != kind) continue;
      if (any) {
        w.token(v.name);
      } else {
        w.start(v.name);
        any = true;
      }
    }
    w.finish();
  }
  out += "End\n";
  return out;
}

MipInstance parse_lp(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  Section section = Section::None;
  Sense sense = Sense::Maximize;
  std::vector<Token> buffers[7];
  bool seen_objective = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto h = section_header(line)) {
      section = h->first;
      if (section == Section::Objective) {
        if (seen_objective) throw ParseError(number, "second objective section");
        seen_objective = true;
        sense = h->second;
      }
      if (section == Section::End) break;
      continue;
    }
    auto toks = tokenize_line(line, number);
    if (toks.empty()) continue;
    if (section == Section::None) throw ParseError(number, "content before the objective section");
    auto& buf = buffers[static_cast<int>(section)];
    buf.insert(buf.end(), toks.begin(), toks.end());
  }
  if (!seen_objective) throw ParseError(0, "missing Maximize/Minimize section");
  if (section != Section::End) throw ParseError(number, "missing End");

  // Objective.
  Cursor obj(std::move(buffers[static_cast<int>(Section::Objective)]));
  label(obj);
  RawExpr objective = expression(obj, true);
  if (!obj.done()) throw ParseError(obj.line(), "unexpected tokens after the objective");

  // Constraints.
  std::vector<RawConstraint> rows;
  Cursor con(std::move(buffers[static_cast<int>(Section::Constraints)]));
  while (!con.done()) {
    RawConstraint r;
    r.name = label(con);
    if (r.name.empty()) r.name = "c" + std::to_string(rows.size() + 1);
    r.expr = expression(con, false);
    Token rel = con.next();
    if (rel.kind != Tok::Rel) throw ParseError(rel.line, "expected a relation");
    r.rel = relation(rel.text);
    r.rhs = signed_number(con);
    rows.push_back(std::move(r));
  }

  // Bounds: `l <= x <= u`, `x >= l`, `x <= u`, `x = v`, `x free`, `l <= x`.
  std::vector<std::string> declared;
  std::map<std::string, RawBound> bounds;
  auto touch = [&](const std::string& n) -> RawBound& {
    if (!bounds.count(n)) declared.push_back(n);
    return bounds[n];
  };
  Cursor bc(std::move(buffers[static_cast<int>(Section::Bounds)]));
  while (!bc.done()) {
    if (is_bound_number(bc)) {
      double lo = signed_number(bc);
      Token r1 = bc.next();
      Token v = bc.next();
      if (r1.kind != Tok::Rel || v.kind != Tok::Name) throw ParseError(r1.line, "malformed bound");
      RawBound& b = touch(v.text);
      if (r1.text == "<=") {
        b.lower = lo;
      } else if (r1.text == ">=") {
        b.upper = lo;
      } else {
        b.lower = b.upper = lo;
      }
      if (bc.peek().kind == Tok::Rel) {
        Token r2 = bc.next();
        double hi = signed_number(bc);
        if (r2.text == "<=") b.upper = hi;
        else if (r2.text == ">=") b.lower = hi;
        else throw ParseError(r2.line, "malformed bound");
      }
      continue;
    }
    Token v = bc.next();
    if (v.kind != Tok::Name) throw ParseError(v.line, "malformed bound");
    RawBound& b = touch(v.text);
    if (bc.peek().kind == Tok::Name && lower(bc.peek().text) == "free") {
      bc.next();
      b.lower = -std::numeric_limits<double>::infinity();
      b.upper = std::numeric_limits<double>::infinity();
      continue;
    }
    Token r = bc.next();
    if (r.kind != Tok::Rel) throw ParseError(r.line, "malformed bound");
    double x = signed_number(bc);
    if (r.text == "<=") b.upper = x;
    else if (r.text == ">=") b.lower = x;
    else b.lower = b.upper = x;
  }

  std::map<std::string, VarKind> kinds;
  for (auto [section_id, kind] : {std::pair{Section::Binary, VarKind::Binary}, std::pair{Section::General, VarKind::Integer}}) {
    Cursor kc(std::move(buffers[static_cast<int>(section_id)]));
    while (!kc.done()) {
      Token v = kc.next();
      if (v.kind != Tok::Name) throw ParseError(v.line, "expected a variable name");
      kinds[v.text] = kind;
    }
  }

  // Declaration order: Bounds section first, then first appearance.
  auto mention = [&](const std::string& n) {
    if (!bounds.count(n)) touch(n);
  };
  for (auto& [n, c] : objective.linear) mention(n);
  for (auto& r : rows) {
    for (auto& [n, c] : r.expr.linear) mention(n);
    for (auto& [a, b, c] : r.expr.quad) mention(a), mention(b);
  }
  for (auto& [n, k] : kinds) mention(n);

  MipInstance mip;
  std::map<std::string, std::size_t> ids;
  for (const auto& n : declared) {
    const RawBound& b = bounds[n];
    auto it = kinds.find(n);
    VarKind kind = it == kinds.end() ? VarKind::Continuous : it->second;
    try {
      ids[n] = kind == VarKind::Binary ? mip.add_variable(n, kind) : mip.add_variable(n, kind, b.lower, b.upper);
    } catch (const MipError& e) {
      throw ParseError(0, e.what());
    }
  }
  std::vector<LinearTerm> terms;
  for (auto& [n, c] : objective.linear) terms.push_back({ids[n], c});
  mip.set_objective(sense, std::move(terms));
  for (auto& r : rows) {
    Constraint c{r.name, {}, {}, r.rel, r.rhs};
    for (auto& [n, k] : r.expr.linear) c.linear.push_back({ids[n], k});
    for (auto& [a, b, k] : r.expr.quad) c.quad.push_back({ids[a], ids[b], k});
    try {
      mip.add_constraint(std::move(c));
    } catch (const MipError& e) {
      throw ParseError(0, e.what());
    }
  }
  return mip;
}

}  // namespace qbc
